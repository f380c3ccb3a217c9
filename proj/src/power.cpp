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

#include "spikenoc/power.hpp"

#include <stdexcept>

namespace spikenoc {

void PowerModel::validate() const
{
    if (router_energy_j < 0.0 || link_energy_j < 0.0 || router_static_w < 0.0 || cluster_static_w < 0.0 ||
            compute_energy_per_spike_j < 0.0)
    {
        throw std::invalid_argument("power model: coefficients must be >= 0");
    }
}

ActivityCounts ActivityCounts::from_report(const SimReport &report)
{
    ActivityCounts counts;
    counts.spikes = report.injected_spikes;
    counts.link_traversals = report.total_link_traversals;
    counts.router_traversals = report.total_router_traversals;
    return counts;
}

PowerBreakdown estimate(const ActivityCounts &activity, const PowerModel &model, double wall_duration_s,
        std::uint64_t n_routers, std::uint64_t n_clusters)
{
    if (!(wall_duration_s > 0.0))
    {
        throw std::invalid_argument("power estimate: duration must be > 0");
    }
    model.validate();

    PowerBreakdown breakdown;
    breakdown.compute_w =
            static_cast<double>(activity.spikes) * model.compute_energy_per_spike_j / wall_duration_s;
    breakdown.communication_w = (static_cast<double>(activity.router_traversals) * model.router_energy_j +
                                        static_cast<double>(activity.link_traversals) * model.link_energy_j) /
            wall_duration_s;
    breakdown.static_w = static_cast<double>(n_routers) * model.router_static_w +
            static_cast<double>(n_clusters) * model.cluster_static_w;
    breakdown.total_w = breakdown.compute_w + breakdown.communication_w + breakdown.static_w;

    if (breakdown.total_w > 0.0)
    {
        breakdown.compute_share_pct = 100.0 * breakdown.compute_w / breakdown.total_w;
        breakdown.communication_share_pct = 100.0 * breakdown.communication_w / breakdown.total_w;
        breakdown.static_share_pct = 100.0 * breakdown.static_w / breakdown.total_w;
    }
    return breakdown;
}

HopSensitivity hop_energy_sensitivity(const ActivityCounts &activity, const PowerModel &model,
        double wall_duration_s, double d_scale)
{
    if (!(d_scale > 0.0))
    {
        throw std::invalid_argument("hop sensitivity: d_scale must be > 0");
    }
    if (!(wall_duration_s > 0.0))
    {
        throw std::invalid_argument("hop sensitivity: duration must be > 0");
    }

    HopSensitivity result;
    result.communication_w = (static_cast<double>(activity.router_traversals) * model.router_energy_j +
                                     static_cast<double>(activity.link_traversals) * model.link_energy_j) /
            wall_duration_s;
    // Linear model: scaling the hop count scales both traversal terms.
    result.communication_w_scaled = result.communication_w * d_scale;
    result.delta_w = result.communication_w_scaled - result.communication_w;
    result.ratio = result.communication_w > 0.0
            ? result.communication_w_scaled / result.communication_w
            : 1.0;
    return result;
}

} // namespace spikenoc
