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

#include <algorithm>
#include <map>
#include <stdexcept>

#include <doctest.h>

#include "spikenoc/analytics.hpp"
#include "spikenoc/engine.hpp"
#include "spikenoc/rng.hpp"
#include "spikenoc/topology.hpp"
#include "spikenoc/traffic.hpp"

using namespace spikenoc;

namespace {

struct Bench {
    Topology topology;
    Population population;
};

Bench mesh_bench(std::uint32_t w, std::uint32_t h, std::uint64_t per_router, LinkTiming timing = {})
{
    Bench bench{build_mesh(w, h, timing), {}};
    host_neurons(bench.topology, per_router);
    bench.population = Population::from_topology(bench.topology);
    return bench;
}

Bench tree_bench(std::uint32_t fanout, std::uint32_t leaves, std::uint64_t per_leaf, LinkTiming timing = {})
{
    Bench bench{build_tree(fanout, leaves, timing), {}};
    host_neurons(bench.topology, per_leaf);
    bench.population = Population::from_topology(bench.topology);
    return bench;
}

Workload immediate_burst(const Population &population, BurstPairing pairing = BurstPairing::mirror)
{
    WorkloadSpec spec;
    spec.kind = WorkloadKind::burst;
    spec.burst_tick = 0;
    spec.locality = 1.0;
    spec.seed = 5;
    spec.pairing = pairing;
    return burst_workload(spec, population);
}

} // namespace

TEST_CASE("serial service on one link: deliveries at l, l+o, l+2o")
{
    // Two routers, pipeline 5, occupancy 2, three spikes at tick 0.
    const Bench bench = mesh_bench(2, 1, 3, {2, 5});
    const Workload burst = immediate_burst(bench.population);
    REQUIRE(burst.events.size() == 3);

    const SimReport report = run(bench.topology, RoutingPolicy::dimension_order, bench.population, burst);
    REQUIRE(report.deliveries.size() == 3);

    std::vector<Tick> at;
    for (const DeliveryRecord &record : report.deliveries)
    {
        at.push_back(record.t_deliver);
    }
    std::sort(at.begin(), at.end());
    CHECK(at == std::vector<Tick>{5, 7, 9});

    // Exact agreement with the closed form, in tick units.
    analytics::BisectionParams bp;
    bp.base_latency_s = 5.0;
    bp.link_occupancy_s = 2.0;
    for (std::uint64_t i = 1; i <= 3; ++i)
    {
        CHECK(static_cast<double>(at[i - 1]) == analytics::burst_spike_latency(i, bp));
    }
}

TEST_CASE("hand replay: single spike over three hops")
{
    // o=1, pipeline 1 per hop.  Ready at t+1 each hop, forwarded a full
    // service after issue: issues at 1, 3, 5; delivery counts at the final
    // issue, tick 5.
    const Bench bench = mesh_bench(4, 1, 1, {1, 1});
    Workload workload;
    workload.duration_ticks = 1;
    workload.events.push_back({0, 0, 0, {3}});

    const SimReport report =
            run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload);
    REQUIRE(report.deliveries.size() == 1);
    CHECK(report.deliveries[0].t_deliver == 5);
    CHECK(report.deliveries[0].hops == 3);
}

TEST_CASE("empty workload gives an empty report")
{
    const Bench bench = mesh_bench(3, 3, 1);
    Workload empty;
    const SimReport report = run(bench.topology, RoutingPolicy::dimension_order, bench.population, empty);
    CHECK(report.deliveries.empty());
    CHECK(report.delivered == 0);
    for (const LinkUsage &usage : report.links)
    {
        CHECK(usage.utilization == 0.0);
    }
}

TEST_CASE("conservation: every spike reaches its whole destination set")
{
    Rng rng(77);
    const Bench mesh = mesh_bench(4, 4, 2, {2, 1});
    const Bench tree = tree_bench(2, 8, 2, {1, 2});

    for (const Bench *bench : {&mesh, &tree})
    {
        Workload workload;
        workload.duration_ticks = 50;
        std::uint64_t expected = 0;
        for (std::uint64_t id = 0; id < 40; ++id)
        {
            SpikeEvent event;
            event.spike_id = id;
            event.source_neuron = rng.next_below(bench->population.size());
            event.generation_tick = rng.next_below(50);
            const std::uint64_t fanout = 1 + rng.next_below(4);
            for (std::uint64_t j = 0; j < fanout; ++j)
            {
                event.destinations.push_back(rng.next_below(bench->population.size()));
            }
            std::sort(event.destinations.begin(), event.destinations.end());
            event.destinations.erase(std::unique(event.destinations.begin(), event.destinations.end()),
                    event.destinations.end());
            expected += event.destinations.size();
            workload.events.push_back(std::move(event));
        }
        std::sort(workload.events.begin(), workload.events.end(),
                [](const SpikeEvent &a, const SpikeEvent &b) { return a.generation_tick < b.generation_tick; });
        for (std::uint64_t id = 0; id < workload.events.size(); ++id)
        {
            workload.events[id].spike_id = id;
        }

        const SimReport report =
                run(bench->topology, default_policy(bench->topology), bench->population, workload);
        CHECK(report.delivered == expected);
        CHECK(report.expected_deliveries == expected);
        CHECK(report.delivered == report.deliveries.size());
    }
}

TEST_CASE("determinism: identical runs produce identical reports")
{
    const Bench bench = mesh_bench(4, 4, 2, {3, 2});
    WorkloadSpec spec;
    spec.kind = WorkloadKind::poisson;
    spec.rate_hz = 100.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 300;
    spec.locality = 0.5;
    spec.seed = 321;
    const Workload workload = poisson_workload(spec, bench.population);

    const SimReport a = run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload);
    const SimReport b = run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload);
    CHECK(a == b);
}

TEST_CASE("per-link FIFO: issue order follows ready order, spaced by service time")
{
    const Bench bench = mesh_bench(4, 4, 2, {2, 1});
    WorkloadSpec spec;
    spec.kind = WorkloadKind::poisson;
    spec.rate_hz = 200.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 200;
    spec.locality = 0.5;
    spec.seed = 8;
    const Workload workload = poisson_workload(spec, bench.population);

    RunLimits limits;
    limits.record_hops = true;
    const SimReport report =
            run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload, limits);
    REQUIRE(!report.hops.empty());

    std::map<std::uint32_t, std::vector<HopRecord>> by_link;
    for (const HopRecord &hop : report.hops)
    {
        by_link[hop.link_index].push_back(hop);
    }
    for (const auto &[link, hops] : by_link)
    {
        const std::uint32_t service = bench.topology.links[link].timing.service_time_ticks;
        for (std::size_t i = 1; i < hops.size(); ++i)
        {
            CHECK(hops[i].ready >= hops[i - 1].ready); // arrival order was FIFO
            CHECK(hops[i].issue >= hops[i - 1].issue + service);
        }
        for (const HopRecord &hop : hops)
        {
            CHECK(hop.issue >= hop.ready);
        }
    }
}

TEST_CASE("no spike beats physics: per-delivery latency lower bound")
{
    const Bench bench = mesh_bench(4, 4, 2, {2, 3});
    WorkloadSpec spec;
    spec.kind = WorkloadKind::poisson;
    spec.rate_hz = 100.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 200;
    spec.locality = 0.5;
    spec.seed = 12;
    const Workload workload = poisson_workload(spec, bench.population);
    const SimReport report = run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload);

    // Unloaded latency over d hops is d*pipeline + (d-1)*service; queueing
    // only adds to it.
    for (const DeliveryRecord &record : report.deliveries)
    {
        const Tick latency = record.t_deliver - record.t_gen;
        const std::uint32_t d = routing_distance(bench.topology,
                bench.population.router_of(record.src), bench.population.router_of(record.dst));
        CHECK(record.hops == d);
        if (d == 0)
        {
            CHECK(latency == 0);
        }
        else
        {
            CHECK(latency >= static_cast<Tick>(d) * 3 + (d - 1) * 2);
        }
    }
}

TEST_CASE("utilization is served times service over duration, never above one")
{
    const Bench bench = mesh_bench(4, 4, 4, {2, 0});
    const Workload burst = immediate_burst(bench.population);
    const SimReport report = run(bench.topology, RoutingPolicy::dimension_order, bench.population, burst);

    for (std::size_t i = 0; i < report.links.size(); ++i)
    {
        const LinkUsage &usage = report.links[i];
        CHECK(usage.utilization >= 0.0);
        CHECK(usage.utilization <= 1.0);
        const double expected = static_cast<double>(usage.served) *
                bench.topology.links[i].timing.service_time_ticks /
                static_cast<double>(report.duration_ticks);
        CHECK(usage.utilization == expected);
    }
}

TEST_CASE("tree burst through the root: spread is exactly (M-1)*o")
{
    for (const std::uint64_t per_leaf : {1ULL, 2ULL, 4ULL})
    {
        const Bench bench = tree_bench(2, 8, per_leaf, {3, 1});
        const Workload burst = immediate_burst(bench.population);
        const std::uint64_t crossing = 4 * per_leaf;
        REQUIRE(burst.events.size() == crossing);

        const BurstJitterResult result = burst_jitter(bench.topology, RoutingPolicy::tree_multicast,
                bench.population, burst);
        CHECK(result.bisection_link_count == 1);
        CHECK(result.crossing_spikes == crossing);
        CHECK(result.spread == (crossing - 1) * 3);
        CHECK(result.analytic_bound_ticks == static_cast<double>((crossing - 1) * 3));

        // The first spike is unqueued, so the minimum is the pure path.
        const std::uint32_t d = 2 * bench.topology.tree_depth;
        CHECK(result.min_latency == d * 1 + (d - 1) * 3);

        // Last packet latency in ticks matches the closed form exactly.
        analytics::SystemParams params;
        params.n_neurons = 2 * crossing;
        params.firing_rate_hz = 1.0;
        analytics::BisectionParams bp;
        bp.bisection_links = 1;
        bp.base_latency_s = static_cast<double>(result.min_latency);
        bp.link_occupancy_s = 3.0;
        const auto last = analytics::last_packet_latency(params, bp);
        CHECK(static_cast<double>(result.max_latency) == last.value);
    }
}

TEST_CASE("mesh burst with uniform mirror pairing stays within the jitter bound")
{
    for (const std::uint64_t per_router : {1ULL, 2ULL, 8ULL})
    {
        const Bench bench = mesh_bench(4, 4, per_router, {2, 0});
        const Workload burst = immediate_burst(bench.population);
        const BurstJitterResult result = burst_jitter(bench.topology, RoutingPolicy::dimension_order,
                bench.population, burst);
        CHECK(result.bisection_link_count == 4);
        CHECK(result.crossing_spikes == 8 * per_router);
        CHECK(static_cast<double>(result.spread) <= result.analytic_bound_ticks);
    }
}

TEST_CASE("alpha zero burst spread reflects only path differences")
{
    const Bench bench = mesh_bench(4, 4, 1, {2, 1});
    WorkloadSpec spec;
    spec.kind = WorkloadKind::burst;
    spec.locality = 0.0;
    spec.seed = 2;
    const Workload burst = burst_workload(spec, bench.population);
    const BurstJitterResult result =
            burst_jitter(bench.topology, RoutingPolicy::dimension_order, bench.population, burst);
    CHECK(result.crossing_spikes == 0);
    // All-local traffic still spreads across unequal path lengths.
    CHECK(result.spread <= 6 * 3);
}

TEST_CASE("timeout carries a partial report")
{
    const Bench bench = mesh_bench(2, 1, 2, {1000, 0});
    Workload workload;
    workload.duration_ticks = 1;
    workload.events.push_back({0, 0, 0, {2}});
    workload.events.push_back({1, 1, 0, {3}});

    RunLimits limits;
    limits.max_ticks = 10; // second spike issues at tick 1000
    CHECK_THROWS_AS(
            run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload, limits),
            SimTimeout);
    try
    {
        run(bench.topology, RoutingPolicy::dimension_order, bench.population, workload, limits);
    }
    catch (const SimTimeout &timeout)
    {
        CHECK(timeout.partial.timed_out);
        CHECK(timeout.partial.delivered < 2);
    }
}

TEST_CASE("torus and hierarchical topologies run losslessly")
{
    Topology torus = build_torus(4, 4, true, {2, 1});
    host_neurons(torus, 2);
    const Population torus_pop = Population::from_topology(torus);

    Topology hier = build_hierarchical(4, 16, {1, 1});
    host_neurons(hier, 2);
    const Population hier_pop = Population::from_topology(hier);

    WorkloadSpec spec;
    spec.kind = WorkloadKind::poisson;
    spec.rate_hz = 100.0;
    spec.tick_duration_s = 1e-3;
    spec.duration_ticks = 300;
    spec.locality = 0.5;
    spec.seed = 31;

    const SimReport torus_report =
            run(torus, RoutingPolicy::dimension_order, torus_pop, poisson_workload(spec, torus_pop));
    CHECK(torus_report.delivered == torus_report.expected_deliveries);
    CHECK(torus_report.delivered > 0);

    const SimReport hier_report =
            run(hier, RoutingPolicy::tree_multicast, hier_pop, poisson_workload(spec, hier_pop));
    CHECK(hier_report.delivered == hier_report.expected_deliveries);
    CHECK(hier_report.delivered > 0);

    // Wrap routes keep torus hop counts at the wrap-aware distance.
    for (const DeliveryRecord &record : torus_report.deliveries)
    {
        CHECK(record.hops == routing_distance(torus, torus_pop.router_of(record.src),
                                     torus_pop.router_of(record.dst)));
    }
}

TEST_CASE("event queue memory limit trips instead of growing unbounded")
{
    const Bench bench = mesh_bench(4, 4, 4, {1, 1});
    const Workload burst = immediate_burst(bench.population);
    RunLimits limits;
    limits.max_queued_events = 4;
    CHECK_THROWS_WITH_AS(
            run(bench.topology, RoutingPolicy::dimension_order, bench.population, burst, limits),
            doctest::Contains("event queue"), SimTimeout);
}

TEST_CASE("policy must match the topology kind")
{
    const Bench mesh = mesh_bench(2, 2, 1);
    Workload empty;
    CHECK_THROWS_AS(run(mesh.topology, RoutingPolicy::tree_multicast, mesh.population, empty),
            std::invalid_argument);
    CHECK(default_policy(mesh.topology) == RoutingPolicy::dimension_order);
    CHECK(default_policy(build_tree(2, 4)) == RoutingPolicy::tree_multicast);
}

TEST_CASE("load sweep: low-load flatness and zero-load probes")
{
    const Bench bench = mesh_bench(4, 4, 4, {2, 1});
    WorkloadSpec base;
    base.tick_duration_s = 1.0; // rates are per cycle
    base.locality = 0.5;
    base.seed = 42;

    const std::vector<double> rates = {0.0, 1e-4, 1e-3};
    const std::vector<SweepRow> rows =
            load_sweep(bench.topology, RoutingPolicy::dimension_order, bench.population, base, rates, 200'000);
    REQUIRE(rows.size() == 3);
    CHECK_FALSE(rows[0].saturated);
    CHECK_FALSE(rows[1].saturated);
    CHECK_FALSE(rows[2].saturated);

    // Low-load latencies sit within 5% of each other and of the zero-load
    // path latency.
    const double zero_load = rows[0].mean_latency;
    CHECK(std::abs(rows[1].mean_latency - rows[2].mean_latency) / rows[2].mean_latency < 0.05);
    CHECK(std::abs(rows[1].mean_latency - zero_load) / zero_load < 0.05);
    CHECK(std::abs(rows[2].mean_latency - zero_load) / zero_load < 0.05);
}

TEST_CASE("load sweep flags saturated rates instead of hanging")
{
    const Bench bench = mesh_bench(4, 4, 4, {4, 0});
    WorkloadSpec base;
    base.tick_duration_s = 1.0;
    base.locality = 1.0;
    base.seed = 9;

    // 0.3 spikes/node/cycle against o=4 bisection links is far past saturation.
    const std::vector<SweepRow> rows = load_sweep(bench.topology, RoutingPolicy::dimension_order,
            bench.population, base, {1e-4, 0.3}, 20'000);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].saturated);
    CHECK(rows[1].saturated);
}

TEST_CASE("unloaded latency equals the per-route timing sum on random fabrics")
{
    // Oracle: an uncontended route costs every pipeline stage plus every
    // service time except the final link's.
    Rng rng(55);
    for (int round = 0; round < 30; ++round)
    {
        Topology t;
        const int kind = static_cast<int>(rng.next_below(3));
        if (kind == 0)
        {
            t = build_mesh(2 + rng.next_below(4), 1 + rng.next_below(4));
        }
        else if (kind == 1)
        {
            t = build_torus(3 + rng.next_below(3), 3 + rng.next_below(3), rng.next_below(2) == 1);
        }
        else
        {
            t = build_tree(2 + rng.next_below(3), 2 + rng.next_below(8));
        }
        for (Link &link : t.links)
        {
            link.timing.service_time_ticks = 1 + static_cast<std::uint32_t>(rng.next_below(4));
            link.timing.pipeline_latency_ticks = static_cast<std::uint32_t>(rng.next_below(4));
        }
        host_neurons(t, 1);
        const Population population = Population::from_topology(t);
        const auto endpoints = t.endpoints();

        const NeuronId src = rng.next_below(population.size());
        const NeuronId dst = rng.next_below(population.size());
        Workload workload;
        workload.duration_ticks = 1;
        workload.events.push_back({0, src, 0, {dst}});

        RunLimits limits;
        limits.record_hops = true;
        const SimReport report = run(t, default_policy(t), population, workload, limits);
        REQUIRE(report.deliveries.size() == 1);

        const RouterId src_router = population.router_of(src);
        const RouterId dst_router = population.router_of(dst);
        const Route route = (default_policy(t) == RoutingPolicy::dimension_order)
                ? xy_route(t, src_router, dst_router)
                : tree_multicast_route(t, src_router, {dst_router});
        Tick expected = 0;
        for (std::size_t i = 0; i < route.links.size(); ++i)
        {
            const Link &link = t.links[t.find_link(route.links[i].first, route.links[i].second)];
            expected += link.timing.pipeline_latency_ticks;
            if (i + 1 < route.links.size())
            {
                expected += link.timing.service_time_ticks;
            }
        }
        CHECK(report.deliveries[0].t_deliver == expected);

        // Per-hop timestamps never run backwards.
        for (std::size_t i = 1; i < report.hops.size(); ++i)
        {
            CHECK(report.hops[i].ready >= report.hops[i - 1].issue);
        }
        (void)endpoints;
    }
}

TEST_CASE("mirror burst spread obeys the bound across random mesh shapes")
{
    Rng rng(66);
    for (int round = 0; round < 25; ++round)
    {
        const std::uint32_t w = 2 * (1 + static_cast<std::uint32_t>(rng.next_below(3)));
        const std::uint32_t h = 1 + static_cast<std::uint32_t>(rng.next_below(4));
        const LinkTiming timing{1 + static_cast<std::uint32_t>(rng.next_below(4)),
                static_cast<std::uint32_t>(rng.next_below(4))};
        const std::uint64_t per_router = 1 + rng.next_below(4);

        Topology t = build_mesh(w, h, timing);
        host_neurons(t, per_router);
        const Population population = Population::from_topology(t);

        WorkloadSpec spec;
        spec.kind = WorkloadKind::burst;
        spec.pairing = BurstPairing::mirror;
        spec.locality = 1.0;
        const Workload burst = burst_workload(spec, population);

        const BurstJitterResult result =
                burst_jitter(t, RoutingPolicy::dimension_order, population, burst);
        CHECK(result.crossing_spikes == burst.events.size());
        CHECK(static_cast<double>(result.spread) <= result.analytic_bound_ticks);
    }
}

TEST_CASE("load sweep rejects unsorted rates")
{
    const Bench bench = mesh_bench(2, 2, 1);
    WorkloadSpec base;
    CHECK_THROWS_AS(load_sweep(bench.topology, RoutingPolicy::dimension_order, bench.population, base,
                            {1e-3, 1e-4}, 1000),
            std::invalid_argument);
}
