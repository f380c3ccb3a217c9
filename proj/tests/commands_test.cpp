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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <doctest.h>

#include "spikenoc/commands.hpp"

using namespace spikenoc;

namespace {

const AnalysisRow &find_row(const std::vector<AnalysisRow> &rows, const std::string &formula)
{
    for (const AnalysisRow &row : rows)
    {
        if (row.formula == formula)
        {
            return row;
        }
    }
    throw std::runtime_error("missing analysis row: " + formula);
}

RunConfig paper_defaults()
{
    RunConfig config;
    config.analytics.emplace();
    config.analytics->neurons = 1'000'000;
    config.analytics->synapses_per_neuron = 10'000;
    config.analytics->synapse_types = 4;
    config.analytics->rate_hz = 10.0;
    config.analytics->bisection_links = 1000;
    config.analytics->occupancy_s = 2e-8;
    config.analytics->base_latency_s = 1e-6;
    config.link.emplace();
    config.memory.emplace();
    config.memory->array_bits = 1 << 20;
    config.memory->efficiency_curve = {{1024, 0.5}, {1 << 20, 0.8}};
    return config;
}

RunConfig two_router_config()
{
    RunConfig config;
    config.topology.emplace();
    config.topology->kind = TopologyKind::mesh;
    config.topology->width = 2;
    config.topology->height = 1;
    config.topology->service_ticks = 2;
    config.topology->pipeline_ticks = 5;
    config.topology->neurons_per_router = 3;
    config.workload.emplace();
    config.workload->kind = WorkloadKind::burst;
    config.workload->pairing = BurstPairing::mirror;
    config.workload->burst_tick = 0;
    config.workload->locality = 1.0;
    return config;
}

std::string slurp(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const char *name)
            : path(std::filesystem::temp_directory_path() / "spikenoc_test" / name)
    {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("analysis rows reproduce the headline numbers")
{
    const std::vector<AnalysisRow> rows = analyze_rows(paper_defaults());

    CHECK(find_row(rows, "routing_memory_bits").paper_literal == doctest::Approx(3.3219e11).epsilon(1e-4));
    CHECK(find_row(rows, "routing_memory_gib").paper_literal == doctest::Approx(38.7).epsilon(1e-3));
    CHECK(find_row(rows, "reduction_factor").paper_literal == doctest::Approx(1.51).epsilon(0.01));
    CHECK(find_row(rows, "conventional_min_bisection").paper_literal == 5e6);

    const AnalysisRow &constrained = find_row(rows, "latency_constrained_min_bisection");
    CHECK(constrained.paper_literal == doctest::Approx(4.9999e10).epsilon(1e-4));
    CHECK(constrained.rederived == doctest::Approx(4.999e10).epsilon(1e-5));
    CHECK_FALSE(constrained.degenerate);

    CHECK(find_row(rows, "last_packet_latency_s").paper_literal == doctest::Approx(1.0098e-4).epsilon(1e-9));
    CHECK(find_row(rows, "arrival_jitter_bound_s").paper_literal == doctest::Approx(9.998e-5).epsilon(1e-9));
    CHECK(find_row(rows, "link_traffic").paper_literal == 2048.0);
    CHECK(find_row(rows, "effective_memory_area").paper_literal == doctest::Approx(1.31072e6));
}

TEST_CASE("analysis requires the analytics section")
{
    RunConfig config;
    CHECK_THROWS_AS(analyze_rows(config), std::invalid_argument);
}

TEST_CASE("single-type grouping collapses to lg(N)")
{
    RunConfig config = paper_defaults();
    config.analytics->synapse_types = 1;
    const std::vector<AnalysisRow> rows = analyze_rows(config);
    const double expected = 1e10 * std::log2(1e6);
    CHECK(find_row(rows, "routing_memory_bits_typed").paper_literal == doctest::Approx(expected));
}

TEST_CASE("analysis csv has the fixed header and one line per row")
{
    const std::vector<AnalysisRow> rows = analyze_rows(paper_defaults());
    const std::string csv = analysis_csv(rows);
    CHECK(csv.rfind("formula,inputs,paper_literal,rederived,degenerate\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size()) + 1);
}

TEST_CASE("two-router simulation delivers at ticks 5, 7, 9")
{
    const SimulationArtifacts artifacts = run_simulation(two_router_config(), std::nullopt);
    CHECK_FALSE(artifacts.timed_out);
    REQUIRE(artifacts.report.deliveries.size() == 3);

    std::vector<Tick> at;
    for (const DeliveryRecord &record : artifacts.report.deliveries)
    {
        at.push_back(record.t_deliver);
    }
    std::sort(at.begin(), at.end());
    CHECK(at == std::vector<Tick>{5, 7, 9});

    const std::string csv = deliveries_csv(artifacts.report);
    CHECK(csv.rfind("spike_id,src,dst,t_gen,t_deliver,hops\n", 0) == 0);
    CHECK(links_csv(artifacts.report).rfind("link,served,utilization,max_queue\n", 0) == 0);
}

TEST_CASE("repeat simulations produce byte-identical CSVs")
{
    const RunConfig config = two_router_config();
    const SimulationArtifacts a = run_simulation(config, std::nullopt);
    const SimulationArtifacts b = run_simulation(config, std::nullopt);
    CHECK(deliveries_csv(a.report) == deliveries_csv(b.report));
    CHECK(links_csv(a.report) == links_csv(b.report));
    CHECK(summary_csv(a) == summary_csv(b));
}

TEST_CASE("summary csv round-trips into report inputs")
{
    const SimulationArtifacts artifacts = run_simulation(two_router_config(), std::nullopt);
    const SummaryData data = parse_summary_csv(summary_csv(artifacts));
    CHECK(data.activity.spikes == 3);
    CHECK(data.activity.link_traversals == artifacts.report.total_link_traversals);
    CHECK(data.n_routers == 2);
    CHECK(data.n_clusters == 2);
    CHECK(data.duration_s == doctest::Approx(static_cast<double>(artifacts.report.duration_ticks) * 1e-3));
}

TEST_CASE("sweep validates rates and emits ordered rows")
{
    RunConfig config = two_router_config();
    config.workload->kind = WorkloadKind::poisson;
    config.workload->rate_hz = 0.0;
    config.workload->tick_seconds = 1.0;
    config.workload->locality = 1.0;
    config.run.emplace();
    config.run->sweep_duration_ticks = 5000;

    CHECK_THROWS_WITH_AS(run_rate_sweep(config, {1e-3, 1e-4}, std::nullopt),
            doctest::Contains("ascending"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(run_rate_sweep(config, {}, std::nullopt), doctest::Contains("no rates"),
            std::invalid_argument);

    const std::vector<SweepRow> rows = run_rate_sweep(config, {1e-3}, std::nullopt);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].injection_rate == 1e-3);
    CHECK_FALSE(rows[0].saturated);
    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("rate,mean_latency,p99_latency,saturated\n", 0) == 0);
}

TEST_CASE("command wrappers write files and map exit codes")
{
    const TempDir dir("cmd_roundtrip");
    CommandOptions options;
    options.out_dir = dir.path.string();

    RunConfig config = two_router_config();
    config.analytics = paper_defaults().analytics;
    config.power.emplace();
    config.power->router_energy_j = 1e-12;
    config.power->link_energy_j = 1e-12;
    config.power->router_static_w = 1e-6;
    config.power->cluster_static_w = 1e-6;
    config.power->compute_energy_j = 1e-11;
    config.power->d_scales = {0.5};

    CHECK(cmd_analyze(config, options) == exit_ok);
    CHECK(cmd_simulate(config, options) == exit_ok);
    CHECK(cmd_report(config, options) == exit_ok);

    CHECK(std::filesystem::exists(dir.path / "analysis.csv"));
    CHECK(std::filesystem::exists(dir.path / "deliveries.csv"));
    CHECK(std::filesystem::exists(dir.path / "links.csv"));
    CHECK(std::filesystem::exists(dir.path / "summary.csv"));

    const std::string power_text = slurp(dir.path / "power.csv");
    CHECK(power_text.rfind("component,watts,share_percent\n", 0) == 0);
    CHECK(power_text.find("communication_dscale_0.5") != std::string::npos);

    // Missing simulate outputs: I/O failure, not a crash.
    const TempDir empty("cmd_missing");
    CommandOptions missing;
    missing.out_dir = empty.path.string();
    CHECK(cmd_report(config, missing) == exit_io);

    // Validation failures map to the validation exit code.
    RunConfig invalid = two_router_config();
    invalid.workload->locality = 9.0;
    CHECK(cmd_simulate(invalid, missing) == exit_validation);
}

TEST_CASE("poisson simulation honors a connectivity file")
{
    const TempDir dir("connectivity");
    const std::filesystem::path conn = dir.path / "fanout.txt";
    // 6 neurons; neuron 0 fans out to both remote clusters.
    std::ofstream(conn) << "3 4\n5\n3\n0\n1\n2\n";

    RunConfig config = two_router_config();
    config.workload->kind = WorkloadKind::poisson;
    config.workload->rate_hz = 400.0;
    config.workload->tick_seconds = 1e-3;
    config.workload->duration_ticks = 50;
    config.workload->connectivity = conn.string();

    const SimulationArtifacts artifacts = run_simulation(config, std::nullopt);
    CHECK(artifacts.report.delivered == artifacts.report.expected_deliveries);
    for (const DeliveryRecord &record : artifacts.report.deliveries)
    {
        if (record.src == 0)
        {
            CHECK((record.dst == 3 || record.dst == 4));
        }
    }
}

TEST_CASE("simulate can consume an exported topology file")
{
    const TempDir dir("topology_import");
    CommandOptions options;
    options.out_dir = dir.path.string();

    // Export from a first run, then rerun with [topology] file pointing at it.
    RunConfig config = two_router_config();
    CHECK(cmd_simulate(config, options) == exit_ok);
    const std::filesystem::path exported = dir.path / "topology.txt";
    REQUIRE(std::filesystem::exists(exported));

    RunConfig imported = config;
    imported.topology->file = exported.string();
    const SimulationArtifacts from_file = run_simulation(imported, std::nullopt);
    const SimulationArtifacts built = run_simulation(config, std::nullopt);
    CHECK(deliveries_csv(from_file.report) == deliveries_csv(built.report));

    imported.topology->file = (dir.path / "missing.txt").string();
    CHECK(cmd_simulate(imported, options) == exit_io);
}

TEST_CASE("zero traffic report is all static")
{
    const TempDir dir("cmd_zero");
    CommandOptions options;
    options.out_dir = dir.path.string();

    RunConfig config = two_router_config();
    config.workload->kind = WorkloadKind::poisson;
    config.workload->rate_hz = 0.0;
    config.workload->duration_ticks = 100;
    config.power.emplace();
    config.power->router_static_w = 1e-3;

    CHECK(cmd_simulate(config, options) == exit_ok);
    CHECK(cmd_report(config, options) == exit_ok);
    const std::string text = slurp(dir.path / "power.csv");
    CHECK(text.find("static,0.002,100") != std::string::npos);
}
