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
#include <iosfwd>
#include <string>
#include <vector>

#include "spikenoc/core.hpp"
#include "spikenoc/routing.hpp"
#include "spikenoc/topology.hpp"

namespace spikenoc {

struct SpikeEvent {
    std::uint64_t spike_id = 0;
    NeuronId source_neuron = 0;
    Tick generation_tick = 0;
    std::vector<NeuronId> destinations;

    friend bool operator==(const SpikeEvent &, const SpikeEvent &) = default;
};

enum class WorkloadKind { poisson, burst, replay };

enum class BurstPairing {
    seeded_permutation, // random bijection across the cut
    mirror,             // i-th left neuron to i-th right neuron (uniform link load)
};

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::poisson;
    double rate_hz = 10.0;
    Tick duration_ticks = 0;
    double tick_duration_s = 1e-3;
    double locality = 1.0; // alpha: fraction of spikes that cross the median cut
    std::uint64_t seed = 1;
    Tick burst_tick = 0;
    BurstPairing pairing = BurstPairing::seeded_permutation;

    double fire_probability_per_tick() const { return rate_hz * tick_duration_s; }
    void validate() const;
};

// Contiguous neuron-id assignment over a topology's endpoint clusters, with
// the median-cut half of every neuron precomputed.
class Population {
  public:
    static Population from_topology(const Topology &t);

    std::uint64_t size() const { return total_; }
    RouterId router_of(NeuronId neuron) const;
    std::uint64_t first_neuron_of(RouterId r) const { return first_[r]; }
    std::uint64_t count_of(RouterId r) const { return count_[r]; }
    bool in_left_half(NeuronId neuron) const;

    const std::vector<NeuronId> &left_neurons() const { return left_; }
    const std::vector<NeuronId> &right_neurons() const { return right_; }

  private:
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> first_; // per router
    std::vector<std::uint64_t> count_; // per router
    std::vector<std::pair<std::uint64_t, RouterId>> spans_; // (first, router) for lookup
    std::vector<bool> left_mask_;                           // per router
    std::vector<NeuronId> left_;
    std::vector<NeuronId> right_;
};

struct Workload {
    std::vector<SpikeEvent> events;
    Tick duration_ticks = 0;
    bool flagged = false; // degenerate adjustment happened (see note)
    std::string note;
};

// Bernoulli-per-tick approximation of Poisson firing at rate R; requires
// R * tick_duration < 1.  Destinations come from the routing table's fanout
// lists when given, otherwise from a seeded uniform draw that crosses the
// median cut with probability alpha.
Workload poisson_workload(const WorkloadSpec &spec, const Population &population,
        const RoutingTable *table = nullptr);

// Synchronized burst: every neuron in the left half emits one spike at
// burst_tick toward the other half (alpha of them cross; the rest stay
// local).
Workload burst_workload(const WorkloadSpec &spec, const Population &population);

// Trace replay: one event per line, "neuron_id,tick[,dst1;dst2;...]".  A
// missing destination field falls back to the routing table.
Workload replay_workload(std::istream &in, const Population &population, const RoutingTable *table = nullptr);

// Canonical text form, one event per line; byte-identical for identical
// streams.
std::string serialize_events(const std::vector<SpikeEvent> &events);

class Rng;

// Seeded uniform pick from a pool; a source only targets itself when it is
// alone in the pool.
NeuronId uniform_destination(const std::vector<NeuronId> &pool, NeuronId self, Rng &rng);

} // namespace spikenoc
