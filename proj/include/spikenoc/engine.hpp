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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spikenoc/core.hpp"
#include "spikenoc/topology.hpp"
#include "spikenoc/traffic.hpp"

namespace spikenoc {

// Timing model per hop: the packet spends the link's pipeline latency before
// it can queue ("pipeline then serve"), the link issues one packet per
// service time, the downstream router receives it a full service time after
// the issue, and delivery at the final router is counted at the issue tick.
// An unloaded route of d hops therefore takes sum(pipeline) + (d-1)*service.
enum class RoutingPolicy {
    dimension_order, // mesh/torus; multicast replicated at injection
    tree_multicast,  // trees; replicated at branch routers
};

RoutingPolicy default_policy(const Topology &t);

struct RunLimits {
    Tick max_ticks = 0;                     // 0: workload duration * 1000 + 1e6
    std::uint64_t max_queued_events = 50'000'000;
    bool record_hops = false;
};

struct DeliveryRecord {
    std::uint64_t spike_id = 0;
    NeuronId src = 0;
    NeuronId dst = 0;
    Tick t_gen = 0;
    Tick t_deliver = 0;
    std::uint32_t hops = 0;

    friend bool operator==(const DeliveryRecord &, const DeliveryRecord &) = default;
};

// Per-hop service trace, recorded when RunLimits::record_hops is set.
struct HopRecord {
    std::uint64_t spike_id = 0;
    std::uint32_t link_index = 0;
    Tick ready = 0; // arrival plus pipeline
    Tick issue = 0; // when the link starts serving

    friend bool operator==(const HopRecord &, const HopRecord &) = default;
};

struct LinkUsage {
    RouterId src = 0;
    RouterId dst = 0;
    std::uint64_t served = 0;
    std::uint64_t max_queue = 0; // high-water mark including the packet in service
    double utilization = 0.0;    // served * service_time / duration

    friend bool operator==(const LinkUsage &, const LinkUsage &) = default;
};

struct SimReport {
    std::vector<DeliveryRecord> deliveries;
    std::vector<LinkUsage> links;
    std::vector<HopRecord> hops;

    std::uint64_t injected_spikes = 0;
    std::uint64_t expected_deliveries = 0; // sum of destination-set sizes
    std::uint64_t delivered = 0;
    std::uint64_t total_link_traversals = 0;
    std::uint64_t total_router_traversals = 0; // link traversals plus injections

    Tick duration_ticks = 0;
    Tick min_latency = 0;
    Tick max_latency = 0;
    double mean_latency = 0.0;
    Tick jitter_ticks = 0; // max latency spread within any generation cohort

    bool timed_out = false;

    friend bool operator==(const SimReport &, const SimReport &) = default;
};

// Thrown when packets are still in flight past the tick budget; carries the
// partial report accumulated so far.
class SimTimeout : public std::runtime_error {
  public:
    SimTimeout(std::string what, SimReport partial_report)
            : std::runtime_error(std::move(what)), partial(std::move(partial_report))
    {
    }

    SimReport partial;
};

// Deterministic discrete-event run: FIFO per output link, unbounded queues,
// lossless delivery.  Identical (topology, workload) inputs produce
// bit-identical reports.
SimReport run(const Topology &t, RoutingPolicy policy, const Population &population, const Workload &workload,
        const RunLimits &limits = {});

struct BurstJitterResult {
    Tick min_latency = 0;
    Tick max_latency = 0;
    Tick spread = 0;
    double analytic_bound_ticks = 0.0; // jitter bound from measured C and o
    std::uint64_t crossing_spikes = 0;
    std::uint32_t bisection_link_count = 0;
    SimReport report;
};

// Runs a burst workload and reports the delivery spread next to the analytic
// bound evaluated with the topology's measured cut width and occupancy.
BurstJitterResult burst_jitter(const Topology &t, RoutingPolicy policy, const Population &population,
        const Workload &burst, const RunLimits &limits = {});

struct SweepRow {
    double injection_rate = 0.0; // spikes per node per cycle
    double mean_latency = 0.0;
    double p99_latency = 0.0;
    bool saturated = false;
};

// One run per injection rate (spikes/node/cycle); rate 0 measures zero-load
// path latency with staggered probes.  Saturated rates time out and are
// flagged instead of hanging.
std::vector<SweepRow> load_sweep(const Topology &t, RoutingPolicy policy, const Population &population,
        const WorkloadSpec &base, const std::vector<double> &rates, Tick duration_ticks);

// Nearest-rank percentile of delivery latencies; q in (0,1].
double latency_percentile(const std::vector<DeliveryRecord> &deliveries, double q);

} // namespace spikenoc
