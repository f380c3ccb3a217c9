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

#include "spikenoc/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "spikenoc/rng.hpp"

namespace spikenoc {

void WorkloadSpec::validate() const
{
    if (!(tick_duration_s > 0.0))
    {
        throw std::invalid_argument("workload: tick_duration_s must be > 0");
    }
    if (locality < 0.0 || locality > 1.0)
    {
        throw std::invalid_argument("workload: locality must be in [0,1]");
    }
    if (rate_hz < 0.0)
    {
        throw std::invalid_argument("workload: rate_hz must be >= 0");
    }
    if (kind == WorkloadKind::poisson && fire_probability_per_tick() >= 1.0)
    {
        throw std::invalid_argument("workload: rate too high for tick resolution (R * tick must be < 1)");
    }
}

Population Population::from_topology(const Topology &t)
{
    Population p;
    p.first_.assign(t.n_routers, 0);
    p.count_.assign(t.n_routers, 0);
    p.left_mask_ = left_half_mask(t);

    std::uint64_t next = 0;
    for (RouterId r = 0; r < t.n_routers; ++r)
    {
        const std::uint64_t hosted = t.clusters[r].neurons;
        p.first_[r] = next;
        p.count_[r] = hosted;
        if (hosted > 0)
        {
            p.spans_.emplace_back(next, r);
            next += hosted;
        }
    }
    p.total_ = next;

    for (const auto &[first, router] : p.spans_)
    {
        for (std::uint64_t i = 0; i < p.count_[router]; ++i)
        {
            (p.left_mask_[router] ? p.left_ : p.right_).push_back(first + i);
        }
    }
    return p;
}

RouterId Population::router_of(NeuronId neuron) const
{
    if (neuron >= total_)
    {
        throw std::out_of_range("population: neuron id " + std::to_string(neuron) + " out of range");
    }
    auto it = std::upper_bound(spans_.begin(), spans_.end(), neuron,
            [](NeuronId value, const auto &span) { return value < span.first; });
    return std::prev(it)->second;
}

bool Population::in_left_half(NeuronId neuron) const { return left_mask_[router_of(neuron)]; }

NeuronId uniform_destination(const std::vector<NeuronId> &pool, NeuronId self, Rng &rng)
{
    if (pool.empty())
    {
        return self;
    }
    const NeuronId pick = pool[rng.next_below(pool.size())];
    if (pick != self)
    {
        return pick;
    }
    // Step to the cyclic neighbor so a source only targets itself when it is
    // alone in the pool.
    if (pool.size() == 1)
    {
        return self;
    }
    auto it = std::find(pool.begin(), pool.end(), self);
    const std::size_t index = static_cast<std::size_t>(it - pool.begin());
    return pool[(index + 1) % pool.size()];
}

Workload poisson_workload(const WorkloadSpec &spec, const Population &population, const RoutingTable *table)
{
    spec.validate();
    Workload workload;
    workload.duration_ticks = spec.duration_ticks;

    const double p = spec.fire_probability_per_tick();
    if (p == 0.0 || population.size() == 0)
    {
        return workload;
    }

    Rng rng(spec.seed);
    std::uint64_t next_id = 0;
    for (Tick tick = 0; tick < spec.duration_ticks; ++tick)
    {
        for (NeuronId neuron = 0; neuron < population.size(); ++neuron)
        {
            if (!rng.next_bernoulli(p))
            {
                continue;
            }
            SpikeEvent event;
            event.spike_id = next_id;
            event.source_neuron = neuron;
            event.generation_tick = tick;
            if (table != nullptr)
            {
                if (neuron >= table->destinations.size() || table->destinations[neuron].empty())
                {
                    continue; // no fanout, nothing to send
                }
                event.destinations = table->destinations[neuron];
            }
            else
            {
                const bool cross = rng.next_bernoulli(spec.locality);
                const bool source_left = population.in_left_half(neuron);
                const auto &pool = (cross != source_left) ? population.left_neurons() : population.right_neurons();
                event.destinations = {uniform_destination(pool, neuron, rng)};
            }
            ++next_id;
            workload.events.push_back(std::move(event));
        }
    }
    return workload;
}

Workload burst_workload(const WorkloadSpec &spec, const Population &population)
{
    if (spec.locality < 0.0 || spec.locality > 1.0)
    {
        throw std::invalid_argument("burst: locality must be in [0,1]");
    }
    const std::vector<NeuronId> &sources = population.left_neurons();
    const std::vector<NeuronId> &others = population.right_neurons();
    if (sources.empty() || others.empty())
    {
        throw std::invalid_argument("burst: both halves of the population must host neurons");
    }

    Workload workload;
    workload.duration_ticks = spec.burst_tick + 1;
    if (sources.size() != others.size())
    {
        workload.flagged = true;
        workload.note = "median cut splits the population unevenly (" + std::to_string(sources.size()) + " vs " +
                std::to_string(others.size()) + "); the left half is the source set";
    }

    const std::uint64_t n_cross =
            static_cast<std::uint64_t>(std::llround(spec.locality * static_cast<double>(sources.size())));

    // Which sources cross, and each one's target.
    std::vector<NeuronId> targets(sources.size());
    std::vector<bool> crosses(sources.size(), false);
    if (spec.pairing == BurstPairing::mirror)
    {
        if (sources.size() != others.size())
        {
            throw std::invalid_argument("burst: mirror pairing needs halves of equal size");
        }
        for (std::size_t i = 0; i < sources.size(); ++i)
        {
            crosses[i] = i < n_cross;
            targets[i] = crosses[i] ? others[i] : sources[(i + 1) % sources.size()];
        }
    }
    else
    {
        Rng rng(spec.seed);
        std::vector<std::size_t> order(sources.size());
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            order[i] = i;
        }
        rng.shuffle(order);

        std::vector<NeuronId> shuffled_targets = others;
        rng.shuffle(shuffled_targets);
        std::vector<NeuronId> local_targets = sources;
        rng.shuffle(local_targets);

        std::size_t cross_cursor = 0;
        std::size_t local_cursor = 0;
        for (std::size_t rank = 0; rank < order.size(); ++rank)
        {
            const std::size_t i = order[rank];
            if (rank < n_cross)
            {
                crosses[i] = true;
                targets[i] = shuffled_targets[cross_cursor++ % shuffled_targets.size()];
            }
            else
            {
                NeuronId pick = local_targets[local_cursor++ % local_targets.size()];
                if (pick == sources[i] && sources.size() > 1)
                {
                    pick = local_targets[local_cursor++ % local_targets.size()];
                }
                targets[i] = pick;
            }
        }
    }

    // Emit in source order so spike ids are increasing.
    for (std::size_t i = 0; i < sources.size(); ++i)
    {
        SpikeEvent event;
        event.spike_id = i;
        event.source_neuron = sources[i];
        event.generation_tick = spec.burst_tick;
        event.destinations = {targets[i]};
        workload.events.push_back(std::move(event));
    }
    return workload;
}

Workload replay_workload(std::istream &in, const Population &population, const RoutingTable *table)
{
    Workload workload;
    std::string line;
    std::size_t line_no = 0;
    Tick prev_tick = 0;
    bool any = false;

    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        const auto fail = [&](const std::string &what) {
            throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " + what);
        };

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true)
        {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos)
            {
                break;
            }
            start = comma + 1;
        }
        if (fields.size() < 2 || fields.size() > 3)
        {
            fail("expected 'neuron_id,tick[,dst1;dst2;...]'");
        }

        SpikeEvent event;
        try
        {
            event.source_neuron = std::stoull(fields[0]);
            event.generation_tick = std::stoull(fields[1]);
        }
        catch (const std::exception &)
        {
            fail("malformed number in '" + line + "'");
        }
        if (event.source_neuron >= population.size())
        {
            fail("neuron id " + std::to_string(event.source_neuron) + " outside the population");
        }
        if (any && event.generation_tick < prev_tick)
        {
            fail("ticks must be non-decreasing");
        }

        if (fields.size() == 3 && !fields[2].empty())
        {
            std::istringstream dst_stream(fields[2]);
            std::string token;
            while (std::getline(dst_stream, token, ';'))
            {
                NeuronId dst = 0;
                try
                {
                    dst = std::stoull(token);
                }
                catch (const std::exception &)
                {
                    fail("malformed destination '" + token + "'");
                }
                if (dst >= population.size())
                {
                    fail("destination " + std::to_string(dst) + " outside the population");
                }
                event.destinations.push_back(dst);
            }
        }
        else
        {
            if (table == nullptr || event.source_neuron >= table->destinations.size())
            {
                fail("no destinations given and no routing table to fall back on");
            }
            event.destinations = table->destinations[event.source_neuron];
        }
        if (event.destinations.empty())
        {
            fail("destination set is empty");
        }

        event.spike_id = workload.events.size();
        prev_tick = event.generation_tick;
        any = true;
        workload.events.push_back(std::move(event));
    }
    workload.duration_ticks = any ? prev_tick + 1 : 0;
    return workload;
}

std::string serialize_events(const std::vector<SpikeEvent> &events)
{
    std::string out;
    for (const SpikeEvent &event : events)
    {
        out += std::to_string(event.spike_id);
        out += ',';
        out += std::to_string(event.source_neuron);
        out += ',';
        out += std::to_string(event.generation_tick);
        out += ',';
        for (std::size_t i = 0; i < event.destinations.size(); ++i)
        {
            if (i != 0)
            {
                out += ';';
            }
            out += std::to_string(event.destinations[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace spikenoc
