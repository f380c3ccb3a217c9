/*
 * Copyright 2026 The spikenoc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "spikenoc/topology.hpp"
#include "spikenoc/traffic.hpp"

using namespace spikenoc;

namespace {

Population mesh_population(std::uint32_t w, std::uint32_t h, std::uint64_t per_router)
{
    Topology t = build_mesh(w, h);
    host_neurons(t, per_router);
    return Population::from_topology(t);
}

std::uint64_t crossing_count(const Population &population, const Workload &workload)
{
    std::uint64_t crossing = 0;
    for (const SpikeEvent &event : workload.events)
    {
        if (population.in_left_half(event.source_neuron) != population.in_left_half(event.destinations.at(0)))
        {
            ++crossing;
        }
    }
    return crossing;
}

} // namespace

TEST_CASE("population assigns contiguous ids per endpoint cluster")
{
    Topology t = build_tree(2, 4);
    host_neurons(t, 3);
    const Population p = Population::from_topology(t);
    CHECK(p.size() == 12);
    CHECK(p.router_of(0) == t.leaf_router(0));
    CHECK(p.router_of(2) == t.leaf_router(0));
    CHECK(p.router_of(3) == t.leaf_router(1));
    CHECK(p.router_of(11) == t.leaf_router(3));
    CHECK(p.left_neurons().size() == 6);
    CHECK(p.right_neurons().size() == 6);
    CHECK_THROWS_AS(p.router_of(12), std::out_of_range);
}

TEST_CASE("poisson workload count matches the binomial oracle")
{
    // 10 neurons at 10 Hz for 100 s of 1 ms ticks: mean 1e4 fires,
    // sigma = sqrt(n*p*(1-p)) ~ 99.5.
    const Population p = mesh_population(5, 2, 1);
    WorkloadSpec spec;
    spec.kind = WorkloadKind::poisson;
    spec.rate_hz = 10.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 100'000;
    spec.locality = 1.0;
    spec.seed = 404;

    const Workload workload = poisson_workload(spec, p);
    const double expected = 1e4;
    const double sigma = std::sqrt(1e6 * 0.01 * 0.99);
    CHECK(std::abs(static_cast<double>(workload.events.size()) - expected) < 3.0 * sigma);

    // Golden count for this seed; any drift means the generator changed.
    CHECK(workload.events.size() == 9869);
}

TEST_CASE("poisson empirical rate converges within 1 percent")
{
    // 100 neurons * 1000 s = 1e5 neuron-seconds.
    const Population p = mesh_population(10, 10, 1);
    WorkloadSpec spec;
    spec.kind = WorkloadKind::poisson;
    spec.rate_hz = 10.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 1'000'000;
    spec.seed = 7;

    const Workload workload = poisson_workload(spec, p);
    const double neuron_seconds = 100.0 * 1000.0;
    const double empirical = static_cast<double>(workload.events.size()) / neuron_seconds;
    CHECK(std::abs(empirical - spec.rate_hz) / spec.rate_hz < 0.01);
}

TEST_CASE("zero rate gives an empty stream")
{
    const Population p = mesh_population(2, 2, 4);
    WorkloadSpec spec;
    spec.rate_hz = 0.0;
    spec.duration_ticks = 1000;
    CHECK(poisson_workload(spec, p).events.empty());
}

TEST_CASE("identical seeds give byte-identical streams")
{
    const Population p = mesh_population(4, 4, 2);
    WorkloadSpec spec;
    spec.rate_hz = 50.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 2000;
    spec.locality = 0.5;
    spec.seed = 99;

    const Workload a = poisson_workload(spec, p);
    const Workload b = poisson_workload(spec, p);
    CHECK(serialize_events(a.events) == serialize_events(b.events));
    CHECK(a.events == b.events);

    spec.seed = 100;
    const Workload c = poisson_workload(spec, p);
    CHECK(serialize_events(a.events) != serialize_events(c.events));
}

TEST_CASE("poisson rejects rates beyond the tick resolution")
{
    const Population p = mesh_population(2, 2, 1);
    WorkloadSpec spec;
    spec.rate_hz = 2000.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 10;
    CHECK_THROWS_WITH_AS(poisson_workload(spec, p), doctest::Contains("rate too high"),
            std::invalid_argument);
}

TEST_CASE("poisson spike ids increase in generation order")
{
    const Population p = mesh_population(4, 4, 2);
    WorkloadSpec spec;
    spec.rate_hz = 100.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 500;
    spec.seed = 3;
    const Workload workload = poisson_workload(spec, p);
    REQUIRE(!workload.events.empty());
    for (std::size_t i = 1; i < workload.events.size(); ++i)
    {
        CHECK(workload.events[i].spike_id > workload.events[i - 1].spike_id);
        CHECK(workload.events[i].generation_tick >= workload.events[i - 1].generation_tick);
    }
}

TEST_CASE("poisson destinations follow the routing table when given")
{
    const Population p = mesh_population(2, 2, 1);
    RoutingTable table;
    table.destinations = {{1, 2}, {3}, {}, {0}};
    WorkloadSpec spec;
    spec.rate_hz = 900.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 20;
    spec.seed = 17;
    const Workload workload = poisson_workload(spec, p, &table);
    REQUIRE(!workload.events.empty());
    bool saw_fanout_two = false;
    for (const SpikeEvent &event : workload.events)
    {
        CHECK(event.source_neuron != 2); // empty fanout emits nothing
        CHECK(event.destinations == table.destinations[event.source_neuron]);
        saw_fanout_two |= event.destinations.size() == 2;
    }
    CHECK(saw_fanout_two);
}

TEST_CASE("burst emits one spike per left-half neuron, all crossing at alpha 1")
{
    const Population p = mesh_population(4, 2, 1); // 8 neurons, halves 4|4
    WorkloadSpec spec;
    spec.kind = WorkloadKind::burst;
    spec.burst_tick = 5;
    spec.locality = 1.0;
    spec.seed = 1;

    const Workload workload = burst_workload(spec, p);
    CHECK(workload.events.size() == 4);
    CHECK_FALSE(workload.flagged);
    for (const SpikeEvent &event : workload.events)
    {
        CHECK(event.generation_tick == 5);
        CHECK(p.in_left_half(event.source_neuron));
        CHECK_FALSE(p.in_left_half(event.destinations.at(0)));
    }
}

TEST_CASE("burst locality dilution")
{
    const Population p = mesh_population(4, 2, 1);
    WorkloadSpec spec;
    spec.kind = WorkloadKind::burst;
    spec.locality = 0.5;
    spec.seed = 11;
    const Workload workload = burst_workload(spec, p);
    CHECK(workload.events.size() == 4);
    CHECK(crossing_count(p, workload) == 2);

    spec.pairing = BurstPairing::mirror;
    const Workload mirrored = burst_workload(spec, p);
    CHECK(crossing_count(p, mirrored) == 2);
}

TEST_CASE("burst cross counts follow round(alpha * half) on symmetric populations")
{
    for (const double alpha : {0.0, 0.25, 0.3, 0.5, 0.75, 1.0})
    {
        const Population p = mesh_population(4, 4, 2); // halves 16|16
        WorkloadSpec spec;
        spec.kind = WorkloadKind::burst;
        spec.locality = alpha;
        spec.seed = 23;
        const Workload workload = burst_workload(spec, p);
        CHECK(workload.events.size() == 16);
        CHECK(crossing_count(p, workload) ==
                static_cast<std::uint64_t>(std::llround(alpha * 16.0)));
    }
}

TEST_CASE("minimal and degenerate bursts")
{
    const Population two = mesh_population(2, 1, 1);
    WorkloadSpec spec;
    spec.kind = WorkloadKind::burst;
    const Workload minimal = burst_workload(spec, two);
    CHECK(minimal.events.size() == 1);

    // 3x1 mesh: cut leaves 1 source vs 2 targets; flagged as uneven.
    const Population uneven = mesh_population(3, 1, 1);
    const Workload flagged = burst_workload(spec, uneven);
    CHECK(flagged.flagged);
    CHECK(flagged.events.size() == 1);

    WorkloadSpec mirror = spec;
    mirror.pairing = BurstPairing::mirror;
    CHECK_THROWS_AS(burst_workload(mirror, uneven), std::invalid_argument);
}

TEST_CASE("mirror pairing is the same-index map across the cut")
{
    const Population p = mesh_population(4, 2, 2); // left 8, right 8
    WorkloadSpec spec;
    spec.kind = WorkloadKind::burst;
    spec.pairing = BurstPairing::mirror;
    const Workload workload = burst_workload(spec, p);
    REQUIRE(workload.events.size() == 8);
    for (std::size_t i = 0; i < workload.events.size(); ++i)
    {
        CHECK(workload.events[i].source_neuron == p.left_neurons()[i]);
        CHECK(workload.events[i].destinations.at(0) == p.right_neurons()[i]);
    }
}

TEST_CASE("replay parses events in order")
{
    const Population p = mesh_population(2, 2, 2); // 8 neurons
    std::istringstream in("0,0,4\n1,0,5;6\n2,3,7\n");
    const Workload workload = replay_workload(in, p);
    REQUIRE(workload.events.size() == 3);
    CHECK(workload.events[0].spike_id == 0);
    CHECK(workload.events[1].destinations == std::vector<NeuronId>{5, 6});
    CHECK(workload.events[2].generation_tick == 3);
    CHECK(workload.duration_ticks == 4);
}

TEST_CASE("replay validation errors carry line numbers")
{
    const Population p = mesh_population(2, 2, 2);

    std::istringstream empty("");
    CHECK(replay_workload(empty, p).events.empty());

    std::istringstream bad_id("0,0,4\n99,1,4\n");
    CHECK_THROWS_WITH_AS(replay_workload(bad_id, p), doctest::Contains("line 2"), std::invalid_argument);

    std::istringstream non_monotone("0,5,4\n1,4,5\n");
    CHECK_THROWS_WITH_AS(replay_workload(non_monotone, p), doctest::Contains("non-decreasing"),
            std::invalid_argument);

    std::istringstream malformed("0;5\n");
    CHECK_THROWS_AS(replay_workload(malformed, p), std::invalid_argument);

    std::istringstream no_table("0,0\n");
    CHECK_THROWS_WITH_AS(replay_workload(no_table, p), doctest::Contains("routing table"),
            std::invalid_argument);

    RoutingTable table;
    table.destinations.assign(8, {7});
    std::istringstream with_table("0,0\n");
    const Workload workload = replay_workload(with_table, p, &table);
    REQUIRE(workload.events.size() == 1);
    CHECK(workload.events[0].destinations == std::vector<NeuronId>{7});
}
