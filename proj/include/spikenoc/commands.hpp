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

#include <optional>
#include <string>
#include <vector>

#include "spikenoc/config.hpp"
#include "spikenoc/engine.hpp"
#include "spikenoc/power.hpp"

namespace spikenoc {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_timeout = 3;
inline constexpr int exit_io = 4;

struct CommandOptions {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;    // overrides [workload] seed
    std::vector<double> rates;            // overrides [run] rates when non-empty
    std::optional<analytics::BisectionFormula> mode; // overrides [analytics] mode
};

// One closed-form result; single-variant formulas carry the same value in
// both columns.
struct AnalysisRow {
    std::string formula;
    std::string inputs;
    double paper_literal = 0.0;
    double rederived = 0.0;
    bool degenerate = false;
};

std::vector<AnalysisRow> analyze_rows(const RunConfig &config);
std::string analysis_csv(const std::vector<AnalysisRow> &rows);

struct SimulationArtifacts {
    SimReport report;
    double tick_seconds = 0.0;
    std::uint64_t n_routers = 0;
    std::uint64_t n_clusters = 0;
    bool timed_out = false;
};

// Builds topology, population and workload from the config and runs the
// engine; a timeout yields the partial report with timed_out set.
SimulationArtifacts run_simulation(const RunConfig &config, std::optional<std::uint64_t> seed_override);

std::string deliveries_csv(const SimReport &report);
std::string links_csv(const SimReport &report);
std::string summary_csv(const SimulationArtifacts &artifacts);

std::vector<SweepRow> run_rate_sweep(const RunConfig &config, const std::vector<double> &rates,
        std::optional<std::uint64_t> seed_override);
std::string sweep_csv(const std::vector<SweepRow> &rows);

// What cmd_report reads back from a prior simulate's summary.csv.
struct SummaryData {
    ActivityCounts activity;
    double duration_s = 0.0;
    std::uint64_t n_routers = 0;
    std::uint64_t n_clusters = 0;
};

SummaryData parse_summary_csv(const std::string &text);
std::string power_csv(const PowerBreakdown &breakdown, const std::vector<std::pair<double, HopSensitivity>> &sensitivity);

int cmd_analyze(const RunConfig &config, const CommandOptions &options);
int cmd_simulate(const RunConfig &config, const CommandOptions &options);
int cmd_sweep(const RunConfig &config, const CommandOptions &options);
int cmd_report(const RunConfig &config, const CommandOptions &options);

} // namespace spikenoc
