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

#include "spikenoc/engine.hpp"

namespace spikenoc {

// First-order energy coefficients.  These are user-supplied configuration,
// not device claims; bundled presets are labeled illustrative.
struct PowerModel {
    double router_energy_j = 0.0;        // per packet-router traversal
    double link_energy_j = 0.0;          // per packet-link traversal
    double router_static_w = 0.0;        // per router
    double cluster_static_w = 0.0;       // per cluster
    double compute_energy_per_spike_j = 0.0;

    void validate() const;
};

// Event counts a power estimate is computed from; extractable from a
// simulation report or supplied analytically.
struct ActivityCounts {
    std::uint64_t spikes = 0;
    std::uint64_t link_traversals = 0;
    std::uint64_t router_traversals = 0;

    static ActivityCounts from_report(const SimReport &report);
};

struct PowerBreakdown {
    double compute_w = 0.0;
    double communication_w = 0.0;
    double static_w = 0.0;
    double total_w = 0.0;
    double compute_share_pct = 0.0;
    double communication_share_pct = 0.0;
    double static_share_pct = 0.0;
};

PowerBreakdown estimate(const ActivityCounts &activity, const PowerModel &model, double wall_duration_s,
        std::uint64_t n_routers, std::uint64_t n_clusters);

struct HopSensitivity {
    double communication_w = 0.0;        // original
    double communication_w_scaled = 0.0; // with hop counts scaled by d_scale
    double delta_w = 0.0;                // scaled - original
    double ratio = 0.0;                  // scaled / original (1 when original is 0)
};

// The higher-radix what-if: communication power with hop counts scaled.
HopSensitivity hop_energy_sensitivity(const ActivityCounts &activity, const PowerModel &model,
        double wall_duration_s, double d_scale);

} // namespace spikenoc
