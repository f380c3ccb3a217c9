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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spikenoc/analytics.hpp"
#include "spikenoc/power.hpp"
#include "spikenoc/topology.hpp"
#include "spikenoc/traffic.hpp"

namespace spikenoc {

// Sections of the run configuration.  The grammar is line based:
//   [section]
//   key = value        # comment
// Unknown sections and keys are rejected; serialization is canonical (all
// keys of every present section, fixed order), so parse -> serialize ->
// parse is a fixpoint.

struct TopologySection {
    TopologyKind kind = TopologyKind::mesh;
    std::uint32_t width = 4;
    std::uint32_t height = 4;
    bool diagonals = false;
    std::uint32_t fanout = 2;
    std::uint32_t leaves = 4;
    std::uint32_t service_ticks = 1;
    std::uint32_t pipeline_ticks = 0;
    std::uint64_t neurons_per_router = 1;
    double external_fraction = 1.0;
    std::string file; // import an exported topology instead of building one

    friend bool operator==(const TopologySection &, const TopologySection &) = default;
};

struct WorkloadSection {
    WorkloadKind kind = WorkloadKind::poisson;
    double rate_hz = 10.0;
    Tick duration_ticks = 1000;
    double tick_seconds = 1e-3;
    double locality = 1.0;
    std::uint64_t seed = 1;
    Tick burst_tick = 0;
    BurstPairing pairing = BurstPairing::seeded_permutation;
    std::string trace;        // replay input path
    std::string connectivity; // optional fanout-list path

    friend bool operator==(const WorkloadSection &, const WorkloadSection &) = default;
};

struct AnalyticsSection {
    std::uint64_t neurons = 1'000'000;
    std::uint64_t synapses_per_neuron = 10'000;
    std::uint64_t synapse_types = 4;
    double rate_hz = 10.0;
    double precision_s = 0.0; // 0: derive 1/(10^3 R)
    double locality = 1.0;
    std::uint64_t bisection_links = 1000;
    double bisection_bw = 0.0; // 0: derive C/o
    double base_latency_s = 0.0;
    double occupancy_s = 0.0;
    analytics::BisectionFormula mode = analytics::BisectionFormula::paper_literal;

    friend bool operator==(const AnalyticsSection &, const AnalyticsSection &) = default;
};

struct LinkSection {
    std::uint64_t external_neurons = 256;
    std::uint64_t router_degree = 5;
    double mean_hops = 4.0;

    friend bool operator==(const LinkSection &, const LinkSection &) = default;
};

struct MemorySection {
    double bit_area = 1.0;
    std::uint64_t array_bits = 1'048'576;
    std::vector<std::pair<std::uint64_t, double>> efficiency_curve;

    friend bool operator==(const MemorySection &, const MemorySection &) = default;
};

struct PowerSection {
    double router_energy_j = 0.0;
    double link_energy_j = 0.0;
    double router_static_w = 0.0;
    double cluster_static_w = 0.0;
    double compute_energy_j = 0.0;
    std::vector<double> d_scales;

    friend bool operator==(const PowerSection &, const PowerSection &) = default;
};

struct RunSection {
    Tick max_ticks = 0; // 0: engine default
    std::vector<double> rates;
    Tick sweep_duration_ticks = 100'000;

    friend bool operator==(const RunSection &, const RunSection &) = default;
};

struct RunConfig {
    std::optional<TopologySection> topology;
    std::optional<WorkloadSection> workload;
    std::optional<AnalyticsSection> analytics;
    std::optional<LinkSection> link;
    std::optional<MemorySection> memory;
    std::optional<PowerSection> power;
    std::optional<RunSection> run;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);
std::string serialize_config(const RunConfig &config);

// Validates every present section against its module invariants.
void validate_config(const RunConfig &config);

// Section-to-module adapters.
Topology topology_from(const TopologySection &section);
WorkloadSpec workload_spec_from(const WorkloadSection &section);
analytics::SystemParams system_params_from(const AnalyticsSection &section);
analytics::BisectionParams bisection_params_from(const AnalyticsSection &section);
analytics::LinkParams link_params_from(const LinkSection &section);
analytics::MemoryTechParams memory_tech_from(const MemorySection &section);
PowerModel power_model_from(const PowerSection &section);

} // namespace spikenoc
