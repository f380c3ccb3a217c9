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
#include <map>

namespace spikenoc::analytics {

// Whole-system scalars driving the closed forms: N neurons, S synapses per
// neuron, k synapse types, mean firing rate R and the delivery-time
// uncertainty budget epsilon.
struct SystemParams {
    std::uint64_t n_neurons = 1;
    std::uint64_t synapses_per_neuron = 1;
    std::uint64_t synapse_types = 1;
    double firing_rate_hz = 10.0;
    double temporal_precision_s = 1e-4;

    // Rule of thumb: one part in 10^3 of the firing period.
    static double default_precision(double rate_hz) { return 1.0 / (1e3 * rate_hz); }

    void validate() const;
};

// Cut-level quantities: aggregate bisection bandwidth B (spikes/s), number of
// links C crossing the cut, per-spike base latency l, per-link occupancy o and
// the fraction alpha of one half that actually communicates across.
struct BisectionParams {
    double bisection_bw_spikes_s = 0.0; // B; 0 means "derive from C/o"
    std::uint64_t bisection_links = 1;  // C
    double base_latency_s = 0.0;        // l
    double link_occupancy_s = 0.0;      // o
    double locality_fraction = 1.0;     // alpha in [0,1]

    double bandwidth() const; // B, deriving C/o when unset
    void validate() const;    // enforces B == C*(1/o) when both given
};

// Per-link view: N_c externally-communicating neurons per cluster, router
// degree r, mean hops d.
struct LinkParams {
    std::uint64_t cluster_external_neurons = 0; // N_c
    std::uint64_t router_degree = 2;            // r
    double mean_hops = 1.0;                     // d

    void validate() const;
};

// Effective-density accounting: area per bit plus an array-size -> array
// efficiency curve (ratio of cell area to total macro area).
struct MemoryTechParams {
    double bit_area = 1.0;
    std::map<std::uint64_t, double> efficiency_curve; // array bits -> (0,1]

    double efficiency_at(std::uint64_t bits) const; // 1.0 when the curve is empty
    void validate() const;
};

// Result of a formula whose pre-clamp value can go negative in degenerate
// corners (e.g. more links than burst spikes). Sweeps must traverse those
// corners without aborting, so the clamp is flagged instead of thrown.
struct ClampedValue {
    double value = 0.0;
    bool degenerate = false;
};

enum class BisectionFormula {
    paper_literal, // 10^3 (N R^2 / 2 - C)
    rederived,     // (N R / 2 - C) / eps
};

enum class LinkFormula {
    paper_literal_constrained, // 10^3 d (N_c R^2 d / r - 1)
    rederived_constrained,     // d (N_c R d / r - 1) / eps
    conventional,              // N_c R d / r - 1
};

// Storage needed for arbitrary connectivity: N*S destinations, lg(N*S) bits
// each. Real-valued; see routing_memory_bits_ceil for per-entry ceilings.
double routing_memory_bits(const SystemParams &params);

// Hardware-realistic variant: N*S entries of ceil(lg(N*S)) whole bits.
double routing_memory_bits_ceil(const SystemParams &params);

// Storage with synapses grouped into k types: N*S entries of lg(k*N) bits.
double routing_memory_bits_typed(const SystemParams &params);

// routing_memory_bits / routing_memory_bits_typed; >= 1 for k <= S.
double reduction_factor(const SystemParams &params);

double bits_to_bytes(double bits);
double bits_to_gib(double bits);
double bytes_per_neuron(const SystemParams &params);

// Bisection bandwidth needed when packet timing carries no information:
// alpha * N * R / 2 spikes/s.
double conventional_min_bisection(const SystemParams &params, double locality_fraction);

// Delivery latency of the index-th spike queued on one link: l + (index-1)*o.
double burst_spike_latency(std::uint64_t index, const BisectionParams &bp);

// Latency of the last group of a synchronized half-network burst:
// l + (alpha*N*R/(2C) - 1)*o, floored at l when the burst is smaller than C.
ClampedValue last_packet_latency(const SystemParams &params, const BisectionParams &bp);

// Spread of spike arrival relative to generation: max(0, alpha*N*R/(2B) - C/B).
ClampedValue arrival_jitter_bound(const SystemParams &params, const BisectionParams &bp);

// Bisection bandwidth needed to keep the arrival spread within the temporal
// precision budget; floored at the conventional requirement.
ClampedValue latency_constrained_min_bisection(const SystemParams &params, std::uint64_t bisection_links,
        BisectionFormula mode);

// Traffic a single link must carry: N_c * R * d / r spikes/s.
double link_traffic(const LinkParams &lp, const SystemParams &params);

// Per-link bandwidth requirement 1/o under the selected formula, floored at 0.
ClampedValue link_bandwidth_requirement(const LinkParams &lp, const SystemParams &params, LinkFormula mode);

// bits * bit_area / efficiency(bits).
double effective_memory_area(std::uint64_t bits, const MemoryTechParams &tech);

// bit_area / efficiency(bits).
double effective_bit_area(std::uint64_t bits, const MemoryTechParams &tech);

} // namespace spikenoc::analytics
