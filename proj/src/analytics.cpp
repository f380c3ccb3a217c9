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

#include "spikenoc/analytics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spikenoc::analytics {

namespace {

constexpr double kPrecisionScale = 1e3; // the 10^3 in the printed constrained forms

} // namespace

void SystemParams::validate() const
{
    if (synapses_per_neuron < 1)
    {
        throw std::invalid_argument("SystemParams: synapses_per_neuron must be >= 1");
    }
    if (synapse_types < 1)
    {
        throw std::invalid_argument("SystemParams: synapse_types must be >= 1");
    }
    if (!(firing_rate_hz > 0.0))
    {
        throw std::invalid_argument("SystemParams: firing_rate_hz must be > 0");
    }
    if (!(temporal_precision_s > 0.0))
    {
        throw std::invalid_argument("SystemParams: temporal_precision_s must be > 0");
    }
}

double BisectionParams::bandwidth() const
{
    if (bisection_bw_spikes_s > 0.0)
    {
        return bisection_bw_spikes_s;
    }
    if (link_occupancy_s > 0.0)
    {
        return static_cast<double>(bisection_links) / link_occupancy_s;
    }
    return 0.0;
}

void BisectionParams::validate() const
{
    if (locality_fraction < 0.0 || locality_fraction > 1.0)
    {
        throw std::invalid_argument("BisectionParams: locality_fraction must be in [0,1]");
    }
    if (base_latency_s < 0.0)
    {
        throw std::invalid_argument("BisectionParams: base_latency_s must be >= 0");
    }
    if (link_occupancy_s < 0.0)
    {
        throw std::invalid_argument("BisectionParams: link_occupancy_s must be >= 0");
    }
    // B = C / o must hold when both sides are specified.
    if (bisection_bw_spikes_s > 0.0 && link_occupancy_s > 0.0)
    {
        const double derived = static_cast<double>(bisection_links) / link_occupancy_s;
        const double rel = std::fabs(bisection_bw_spikes_s - derived) / derived;
        if (rel > 1e-9)
        {
            throw std::invalid_argument("BisectionParams: B and C/o disagree (B must equal C/o)");
        }
    }
}

void LinkParams::validate() const
{
    if (router_degree < 2)
    {
        throw std::invalid_argument("LinkParams: router_degree must be >= 2");
    }
    if (mean_hops < 1.0)
    {
        throw std::invalid_argument("LinkParams: mean_hops must be >= 1");
    }
}

double MemoryTechParams::efficiency_at(std::uint64_t bits) const
{
    if (efficiency_curve.empty())
    {
        return 1.0;
    }
    // Largest curve point not above the requested size; arrays smaller than
    // the first point inherit its (worst) efficiency.
    auto it = efficiency_curve.upper_bound(bits);
    if (it == efficiency_curve.begin())
    {
        return it->second;
    }
    return std::prev(it)->second;
}

void MemoryTechParams::validate() const
{
    if (!(bit_area > 0.0))
    {
        throw std::invalid_argument("MemoryTechParams: bit_area must be > 0");
    }
    double prev = 0.0;
    for (const auto &[size, eff] : efficiency_curve)
    {
        if (!(eff > 0.0) || eff > 1.0)
        {
            throw std::invalid_argument("MemoryTechParams: efficiency values must be in (0,1]");
        }
        if (eff < prev)
        {
            throw std::invalid_argument("MemoryTechParams: efficiency curve must be non-decreasing in array size");
        }
        prev = eff;
    }
}

double routing_memory_bits(const SystemParams &params)
{
    const double n = static_cast<double>(params.n_neurons);
    const double s = static_cast<double>(params.synapses_per_neuron);
    const double destinations = n * s;
    if (destinations < 1.0)
    {
        throw std::domain_error("routing_memory_bits: N*S must be >= 1");
    }
    return destinations * std::log2(destinations);
}

double routing_memory_bits_ceil(const SystemParams &params)
{
    const double n = static_cast<double>(params.n_neurons);
    const double s = static_cast<double>(params.synapses_per_neuron);
    const double destinations = n * s;
    if (destinations < 1.0)
    {
        throw std::domain_error("routing_memory_bits_ceil: N*S must be >= 1");
    }
    return destinations * std::ceil(std::log2(destinations));
}

double routing_memory_bits_typed(const SystemParams &params)
{
    const double n = static_cast<double>(params.n_neurons);
    const double s = static_cast<double>(params.synapses_per_neuron);
    const double k = static_cast<double>(params.synapse_types);
    if (k * n < 1.0)
    {
        throw std::domain_error("routing_memory_bits_typed: k*N must be >= 1");
    }
    return n * s * std::log2(k * n);
}

double reduction_factor(const SystemParams &params)
{
    const double typed = routing_memory_bits_typed(params);
    if (typed == 0.0)
    {
        throw std::domain_error("reduction_factor: typed storage is zero");
    }
    return routing_memory_bits(params) / typed;
}

double bits_to_bytes(double bits) { return bits / 8.0; }

double bits_to_gib(double bits) { return bits / 8.0 / static_cast<double>(1ULL << 30); }

double bytes_per_neuron(const SystemParams &params)
{
    if (params.n_neurons == 0)
    {
        throw std::domain_error("bytes_per_neuron: N must be >= 1");
    }
    return bits_to_bytes(routing_memory_bits(params)) / static_cast<double>(params.n_neurons);
}

double conventional_min_bisection(const SystemParams &params, double locality_fraction)
{
    if (locality_fraction < 0.0 || locality_fraction > 1.0)
    {
        throw std::invalid_argument("conventional_min_bisection: locality must be in [0,1]");
    }
    return locality_fraction * static_cast<double>(params.n_neurons) * params.firing_rate_hz / 2.0;
}

double burst_spike_latency(std::uint64_t index, const BisectionParams &bp)
{
    if (index < 1)
    {
        throw std::invalid_argument("burst_spike_latency: index must be >= 1");
    }
    return bp.base_latency_s + static_cast<double>(index - 1) * bp.link_occupancy_s;
}

ClampedValue last_packet_latency(const SystemParams &params, const BisectionParams &bp)
{
    if (bp.bisection_links == 0)
    {
        throw std::domain_error("last_packet_latency: C must be >= 1");
    }
    const double crossing_rate =
            bp.locality_fraction * static_cast<double>(params.n_neurons) * params.firing_rate_hz;
    const double queued = crossing_rate / (2.0 * static_cast<double>(bp.bisection_links)) - 1.0;
    if (queued <= 0.0)
    {
        return {bp.base_latency_s, true};
    }
    return {bp.base_latency_s + queued * bp.link_occupancy_s, false};
}

ClampedValue arrival_jitter_bound(const SystemParams &params, const BisectionParams &bp)
{
    const double bw = bp.bandwidth();
    if (!(bw > 0.0))
    {
        throw std::domain_error("arrival_jitter_bound: B must be > 0");
    }
    const double spread = bp.locality_fraction * static_cast<double>(params.n_neurons) * params.firing_rate_hz /
                    (2.0 * bw) -
            static_cast<double>(bp.bisection_links) / bw;
    if (spread <= 0.0)
    {
        return {0.0, spread < 0.0};
    }
    return {spread, false};
}

ClampedValue latency_constrained_min_bisection(const SystemParams &params, std::uint64_t bisection_links,
        BisectionFormula mode)
{
    const double n = static_cast<double>(params.n_neurons);
    const double r = params.firing_rate_hz;
    const double c = static_cast<double>(bisection_links);

    double required = 0.0;
    switch (mode)
    {
    case BisectionFormula::paper_literal:
        required = kPrecisionScale * (n * r * r / 2.0 - c);
        break;
    case BisectionFormula::rederived:
        required = (n * r / 2.0 - c) / params.temporal_precision_s;
        break;
    }

    const double floor = conventional_min_bisection(params, 1.0);
    if (required < floor)
    {
        return {floor, true};
    }
    return {required, false};
}

double link_traffic(const LinkParams &lp, const SystemParams &params)
{
    if (lp.router_degree == 0)
    {
        throw std::domain_error("link_traffic: router degree must be nonzero");
    }
    return static_cast<double>(lp.cluster_external_neurons) * params.firing_rate_hz * lp.mean_hops /
            static_cast<double>(lp.router_degree);
}

ClampedValue link_bandwidth_requirement(const LinkParams &lp, const SystemParams &params, LinkFormula mode)
{
    if (lp.router_degree == 0)
    {
        throw std::domain_error("link_bandwidth_requirement: router degree must be nonzero");
    }
    const double nc = static_cast<double>(lp.cluster_external_neurons);
    const double r = static_cast<double>(lp.router_degree);
    const double rate = params.firing_rate_hz;
    const double d = lp.mean_hops;

    double required = 0.0;
    switch (mode)
    {
    case LinkFormula::paper_literal_constrained:
        required = kPrecisionScale * d * (nc * rate * rate * d / r - 1.0);
        break;
    case LinkFormula::rederived_constrained:
        required = d * (nc * rate * d / r - 1.0) / params.temporal_precision_s;
        break;
    case LinkFormula::conventional:
        required = nc * rate * d / r - 1.0;
        break;
    }

    if (required < 0.0)
    {
        return {0.0, true};
    }
    return {required, false};
}

double effective_memory_area(std::uint64_t bits, const MemoryTechParams &tech)
{
    if (bits < 1)
    {
        throw std::invalid_argument("effective_memory_area: bits must be >= 1");
    }
    return static_cast<double>(bits) * effective_bit_area(bits, tech);
}

double effective_bit_area(std::uint64_t bits, const MemoryTechParams &tech)
{
    const double eff = tech.efficiency_at(bits);
    if (!(eff > 0.0))
    {
        throw std::domain_error("effective_bit_area: efficiency lookup must be > 0, got " + std::to_string(eff));
    }
    return tech.bit_area / eff;
}

} // namespace spikenoc::analytics
