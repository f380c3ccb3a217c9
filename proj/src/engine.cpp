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

#include "spikenoc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <tuple>

#include "spikenoc/routing.hpp"
#include "spikenoc/rng.hpp"

namespace spikenoc {

namespace {

struct RouteEdge {
    std::uint32_t link_index = 0;        // into Topology::links
    std::int32_t parent = -1;            // into the packet's edge list
    std::uint32_t depth = 1;             // hops from the source router
    std::vector<std::uint32_t> children; // edge indices
    std::vector<NeuronId> deliveries;    // neurons delivered at this edge's dst
};

struct PacketState {
    std::uint64_t spike_id = 0;
    NeuronId source = 0;
    Tick generation_tick = 0;
    std::vector<RouteEdge> edges;
};

struct ReadyEvent {
    Tick tick = 0;
    std::uint64_t spike_id = 0;
    std::uint32_t packet_index = 0;
    std::uint32_t edge_index = 0;

    // min-heap over (tick, spike id, packet, hop)
    bool operator>(const ReadyEvent &other) const
    {
        return std::tie(tick, spike_id, packet_index, edge_index) >
                std::tie(other.tick, other.spike_id, other.packet_index, other.edge_index);
    }
};

// Translates a router-level Route into the packet's edge tree, attaching
// destination neurons to the edges that reach their routers.
void attach_route(PacketState &packet, const Topology &t, const Route &route,
        const std::map<RouterId, std::vector<NeuronId>> &neurons_by_router)
{
    std::map<RouterId, std::uint32_t> arriving_edge;
    for (const auto &[from, to] : route.links)
    {
        const std::int64_t link_index = t.find_link(from, to);
        if (link_index < 0)
        {
            throw std::logic_error("route uses a link that is not in the topology");
        }
        RouteEdge edge;
        edge.link_index = static_cast<std::uint32_t>(link_index);
        if (from != route.source)
        {
            const auto it = arriving_edge.find(from);
            if (it == arriving_edge.end())
            {
                throw std::logic_error("route edge departs a router the packet never reaches");
            }
            edge.parent = static_cast<std::int32_t>(it->second);
            edge.depth = packet.edges[it->second].depth + 1;
        }
        const std::uint32_t edge_index = static_cast<std::uint32_t>(packet.edges.size());
        packet.edges.push_back(std::move(edge));
        if (packet.edges.back().parent >= 0)
        {
            packet.edges[packet.edges.back().parent].children.push_back(edge_index);
        }
        arriving_edge[to] = edge_index;
    }
    for (const auto &[router, neurons] : neurons_by_router)
    {
        if (router == route.source)
        {
            continue; // local deliveries handled at injection
        }
        const auto it = arriving_edge.find(router);
        if (it == arriving_edge.end())
        {
            throw std::logic_error("route does not reach destination router");
        }
        auto &sink = packet.edges[it->second].deliveries;
        sink.insert(sink.end(), neurons.begin(), neurons.end());
    }
}

} // namespace

RoutingPolicy default_policy(const Topology &t)
{
    return (t.kind == TopologyKind::tree || t.kind == TopologyKind::hierarchical)
            ? RoutingPolicy::tree_multicast
            : RoutingPolicy::dimension_order;
}

SimReport run(const Topology &t, RoutingPolicy policy, const Population &population, const Workload &workload,
        const RunLimits &limits)
{
    if ((policy == RoutingPolicy::dimension_order) !=
            (t.kind == TopologyKind::mesh || t.kind == TopologyKind::torus))
    {
        throw std::invalid_argument("run: routing policy does not match the topology kind");
    }

    const Tick max_ticks =
            limits.max_ticks > 0 ? limits.max_ticks : workload.duration_ticks * 1000 + 1'000'000;

    SimReport report;
    report.injected_spikes = workload.events.size();
    report.duration_ticks = workload.duration_ticks;

    std::vector<PacketState> packets;
    std::priority_queue<ReadyEvent, std::vector<ReadyEvent>, std::greater<ReadyEvent>> queue;

    const auto deliver = [&](std::uint64_t spike_id, NeuronId src, NeuronId dst, Tick gen, Tick at,
                                 std::uint32_t hops) {
        report.deliveries.push_back({spike_id, src, dst, gen, at, hops});
        ++report.delivered;
    };

    // Injection: expand each spike into packets.  Dimension-order networks
    // replicate multicast at the source (one unicast packet per destination);
    // trees carry one packet that splits at branch routers.
    for (const SpikeEvent &event : workload.events)
    {
        if (event.destinations.empty())
        {
            throw std::invalid_argument("run: spike " + std::to_string(event.spike_id) + " has no destinations");
        }
        report.expected_deliveries += event.destinations.size();
        if (event.generation_tick >= workload.duration_ticks && workload.duration_ticks > 0)
        {
            throw std::invalid_argument("run: spike generated past the workload duration");
        }
        const RouterId src_router = population.router_of(event.source_neuron);

        if (policy == RoutingPolicy::dimension_order)
        {
            for (const NeuronId dst : event.destinations)
            {
                const RouterId dst_router = population.router_of(dst);
                if (dst_router == src_router)
                {
                    deliver(event.spike_id, event.source_neuron, dst, event.generation_tick,
                            event.generation_tick, 0);
                    continue;
                }
                PacketState packet;
                packet.spike_id = event.spike_id;
                packet.source = event.source_neuron;
                packet.generation_tick = event.generation_tick;
                const Route route = xy_route(t, src_router, dst_router);
                attach_route(packet, t, route, {{dst_router, {dst}}});
                packets.push_back(std::move(packet));
            }
        }
        else
        {
            std::map<RouterId, std::vector<NeuronId>> by_router;
            for (const NeuronId dst : event.destinations)
            {
                by_router[population.router_of(dst)].push_back(dst);
            }
            if (const auto local = by_router.find(src_router); local != by_router.end())
            {
                for (const NeuronId dst : local->second)
                {
                    deliver(event.spike_id, event.source_neuron, dst, event.generation_tick,
                            event.generation_tick, 0);
                }
            }
            std::vector<RouterId> dst_routers;
            for (const auto &[router, neurons] : by_router)
            {
                dst_routers.push_back(router);
            }
            if (dst_routers.size() == 1 && dst_routers[0] == src_router)
            {
                continue;
            }
            PacketState packet;
            packet.spike_id = event.spike_id;
            packet.source = event.source_neuron;
            packet.generation_tick = event.generation_tick;
            const Route route = tree_multicast_route(t, src_router, dst_routers);
            attach_route(packet, t, route, by_router);
            packets.push_back(std::move(packet));
        }
    }

    // Seed the queue with each packet's first hops.
    for (std::uint32_t p = 0; p < packets.size(); ++p)
    {
        for (std::uint32_t e = 0; e < packets[p].edges.size(); ++e)
        {
            if (packets[p].edges[e].parent == -1)
            {
                const Link &link = t.links[packets[p].edges[e].link_index];
                queue.push({packets[p].generation_tick + link.timing.pipeline_latency_ticks,
                        packets[p].spike_id, p, e});
            }
        }
    }

    std::vector<Tick> link_free(t.links.size(), 0);
    std::vector<std::uint64_t> link_served(t.links.size(), 0);
    std::vector<std::uint64_t> link_max_queue(t.links.size(), 0);
    std::vector<std::deque<Tick>> link_pending(t.links.size());
    Tick end_tick = workload.duration_ticks;

    const auto finalize = [&](bool timed_out) {
        report.timed_out = timed_out;
        report.duration_ticks = std::max(end_tick, workload.duration_ticks);
        for (std::size_t i = 0; i < t.links.size(); ++i)
        {
            LinkUsage usage;
            usage.src = t.links[i].src;
            usage.dst = t.links[i].dst;
            usage.served = link_served[i];
            usage.max_queue = link_max_queue[i];
            usage.utilization = report.duration_ticks > 0
                    ? static_cast<double>(link_served[i]) * t.links[i].timing.service_time_ticks /
                            static_cast<double>(report.duration_ticks)
                    : 0.0;
            report.links.push_back(usage);
            report.total_link_traversals += link_served[i];
        }
        report.total_router_traversals = report.total_link_traversals + report.injected_spikes;

        if (!report.deliveries.empty())
        {
            report.min_latency = static_cast<Tick>(-1);
            double latency_sum = 0.0;
            std::map<Tick, std::pair<Tick, Tick>> cohorts; // gen -> (min, max) latency
            for (const DeliveryRecord &record : report.deliveries)
            {
                const Tick latency = record.t_deliver - record.t_gen;
                report.min_latency = std::min(report.min_latency, latency);
                report.max_latency = std::max(report.max_latency, latency);
                latency_sum += static_cast<double>(latency);
                auto [it, inserted] = cohorts.try_emplace(record.t_gen, latency, latency);
                if (!inserted)
                {
                    it->second.first = std::min(it->second.first, latency);
                    it->second.second = std::max(it->second.second, latency);
                }
            }
            report.mean_latency = latency_sum / static_cast<double>(report.deliveries.size());
            for (const auto &[gen, extremes] : cohorts)
            {
                report.jitter_ticks = std::max(report.jitter_ticks, extremes.second - extremes.first);
            }
        }
    };

    while (!queue.empty())
    {
        if (queue.size() > limits.max_queued_events)
        {
            finalize(true);
            throw SimTimeout("event queue exceeded " + std::to_string(limits.max_queued_events) + " entries",
                    report);
        }
        const ReadyEvent event = queue.top();
        queue.pop();

        PacketState &packet = packets[event.packet_index];
        RouteEdge &edge = packet.edges[event.edge_index];
        const std::uint32_t link_index = edge.link_index;
        const Link &link = t.links[link_index];

        const Tick issue = std::max(event.tick, link_free[link_index]);
        if (issue > max_ticks)
        {
            finalize(true);
            throw SimTimeout("packets in flight past tick budget " + std::to_string(max_ticks), report);
        }
        link_free[link_index] = issue + link.timing.service_time_ticks;
        ++link_served[link_index];
        end_tick = std::max(end_tick, issue + link.timing.service_time_ticks);

        // Queue high-water mark: packets whose issue lies in the future are
        // still queued when this one becomes ready.
        auto &pending = link_pending[link_index];
        while (!pending.empty() && pending.front() <= event.tick)
        {
            pending.pop_front();
        }
        pending.push_back(issue);
        link_max_queue[link_index] = std::max<std::uint64_t>(link_max_queue[link_index], pending.size());

        if (limits.record_hops)
        {
            report.hops.push_back({packet.spike_id, link_index, event.tick, issue});
        }

        // Delivery is counted when the final link starts serving the spike;
        // a downstream router only forwards after the full service time.
        for (const NeuronId dst : edge.deliveries)
        {
            deliver(packet.spike_id, packet.source, dst, packet.generation_tick, issue, edge.depth);
        }
        const Tick handoff = issue + link.timing.service_time_ticks;
        for (const std::uint32_t child : edge.children)
        {
            const Link &next = t.links[packet.edges[child].link_index];
            queue.push({handoff + next.timing.pipeline_latency_ticks, packet.spike_id, event.packet_index,
                    child});
        }
    }

    finalize(false);
    return report;
}

BurstJitterResult burst_jitter(const Topology &t, RoutingPolicy policy, const Population &population,
        const Workload &burst, const RunLimits &limits)
{
    BurstJitterResult result;
    result.report = run(t, policy, population, burst, limits);

    if (!result.report.deliveries.empty())
    {
        result.min_latency = static_cast<Tick>(-1);
        for (const DeliveryRecord &record : result.report.deliveries)
        {
            const Tick latency = record.t_deliver - record.t_gen;
            result.min_latency = std::min(result.min_latency, latency);
            result.max_latency = std::max(result.max_latency, latency);
        }
        result.spread = result.max_latency - result.min_latency;
    }

    // Analytic bound with the measured cut: (M/C - 1) * o in ticks, where M
    // counts the spikes that actually cross the median cut.
    result.bisection_link_count = bisection_links(t);
    const std::vector<bool> mask = left_half_mask(t);
    for (const SpikeEvent &event : burst.events)
    {
        const bool src_left = mask[population.router_of(event.source_neuron)];
        for (const NeuronId dst : event.destinations)
        {
            if (mask[population.router_of(dst)] != src_left)
            {
                ++result.crossing_spikes;
                break;
            }
        }
    }
    std::uint32_t occupancy = 0;
    for (const Link &link : t.links)
    {
        if (mask[link.src] && !mask[link.dst])
        {
            occupancy = std::max(occupancy, link.timing.service_time_ticks);
        }
    }
    const double per_link = static_cast<double>(result.crossing_spikes) /
            static_cast<double>(result.bisection_link_count);
    result.analytic_bound_ticks = std::max(0.0, (per_link - 1.0) * static_cast<double>(occupancy));
    return result;
}

double latency_percentile(const std::vector<DeliveryRecord> &deliveries, double q)
{
    if (deliveries.empty())
    {
        return 0.0;
    }
    std::vector<Tick> latencies;
    latencies.reserve(deliveries.size());
    for (const DeliveryRecord &record : deliveries)
    {
        latencies.push_back(record.t_deliver - record.t_gen);
    }
    std::sort(latencies.begin(), latencies.end());
    const std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(latencies.size())));
    return static_cast<double>(latencies[std::min(latencies.size() - 1, rank == 0 ? 0 : rank - 1)]);
}

namespace {

// Staggered one-spike-per-neuron probes: wide spacing removes contention so
// the mean delivery latency is the zero-load path latency.
Workload probe_workload(const Topology &t, const Population &population, const WorkloadSpec &base)
{
    std::uint32_t max_service = 1;
    std::uint32_t max_pipeline = 0;
    for (const Link &link : t.links)
    {
        max_service = std::max(max_service, link.timing.service_time_ticks);
        max_pipeline = std::max(max_pipeline, link.timing.pipeline_latency_ticks);
    }
    std::uint32_t diameter = 0;
    const auto ends = t.endpoints();
    for (const RouterId a : ends)
    {
        for (const RouterId b : ends)
        {
            diameter = std::max(diameter, routing_distance(t, a, b));
        }
    }
    const Tick gap = static_cast<Tick>(diameter + 1) * (max_service + max_pipeline) * 2 + 2;

    Workload workload;
    Rng rng(base.seed);
    constexpr int kRounds = 32;
    std::uint64_t next_id = 0;
    for (int round = 0; round < kRounds; ++round)
    {
        for (NeuronId neuron = 0; neuron < population.size(); ++neuron)
        {
            SpikeEvent event;
            event.spike_id = next_id;
            event.source_neuron = neuron;
            event.generation_tick = next_id * gap;
            const bool cross = rng.next_bernoulli(base.locality);
            const bool source_left = population.in_left_half(neuron);
            const auto &pool = (cross != source_left) ? population.left_neurons() : population.right_neurons();
            event.destinations = {uniform_destination(pool, neuron, rng)};
            ++next_id;
            workload.events.push_back(std::move(event));
        }
    }
    workload.duration_ticks = next_id * gap + 1;
    return workload;
}

} // namespace

std::vector<SweepRow> load_sweep(const Topology &t, RoutingPolicy policy, const Population &population,
        const WorkloadSpec &base, const std::vector<double> &rates, Tick duration_ticks)
{
    if (!std::is_sorted(rates.begin(), rates.end()))
    {
        throw std::invalid_argument("load_sweep: rates must be ascending");
    }
    std::vector<SweepRow> rows;
    for (const double rate : rates)
    {
        if (rate < 0.0)
        {
            throw std::invalid_argument("load_sweep: negative injection rate");
        }
        SweepRow row;
        row.injection_rate = rate;

        Workload workload;
        if (rate == 0.0)
        {
            workload = probe_workload(t, population, base);
        }
        else
        {
            WorkloadSpec spec = base;
            spec.kind = WorkloadKind::poisson;
            spec.duration_ticks = duration_ticks;
            // Injection rate is spikes/node/cycle, i.e. the per-tick firing
            // probability.
            spec.rate_hz = rate / spec.tick_duration_s;
            workload = poisson_workload(spec, population);
        }

        RunLimits limits;
        limits.max_ticks = std::max<Tick>(workload.duration_ticks * 2, workload.duration_ticks + 100'000);
        try
        {
            const SimReport report = run(t, policy, population, workload, limits);
            row.mean_latency = report.mean_latency;
            row.p99_latency = latency_percentile(report.deliveries, 0.99);
            row.saturated = false;
        }
        catch (const SimTimeout &timeout)
        {
            row.mean_latency = timeout.partial.mean_latency;
            row.p99_latency = latency_percentile(timeout.partial.deliveries, 0.99);
            row.saturated = true;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace spikenoc
