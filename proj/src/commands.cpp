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

#include "spikenoc/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spikenoc/csv.hpp"
#include "spikenoc/routing.hpp"

namespace spikenoc {

namespace {

std::string join_inputs(std::initializer_list<std::pair<const char *, std::string>> pairs)
{
    std::string out;
    for (const auto &[key, value] : pairs)
    {
        if (!out.empty())
        {
            out += ';';
        }
        out += key;
        out += '=';
        out += value;
    }
    return out;
}

void write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << content;
    if (!out)
    {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot open input file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

int guarded(const char *command, int (*body)(const RunConfig &, const CommandOptions &),
        const RunConfig &config, const CommandOptions &options)
{
    try
    {
        return body(config, options);
    }
    catch (const SimTimeout &timeout)
    {
        std::cerr << command << ": timeout: " << timeout.what() << "\n";
        return exit_timeout;
    }
    catch (const std::invalid_argument &error)
    {
        std::cerr << command << ": invalid configuration: " << error.what() << "\n";
        return exit_validation;
    }
    catch (const std::exception &error)
    {
        std::cerr << command << ": " << error.what() << "\n";
        return exit_io;
    }
}

} // namespace

std::vector<AnalysisRow> analyze_rows(const RunConfig &config)
{
    if (!config.analytics)
    {
        throw std::invalid_argument("analyze: config needs an [analytics] section");
    }
    const AnalyticsSection &section = *config.analytics;
    const analytics::SystemParams params = system_params_from(section);
    const analytics::BisectionParams bp = bisection_params_from(section);
    params.validate();
    bp.validate();

    std::vector<AnalysisRow> rows;
    const auto add_single = [&rows](std::string formula, std::string inputs, double value,
                                    bool degenerate = false) {
        rows.push_back({std::move(formula), std::move(inputs), value, value, degenerate});
    };

    const std::string storage_inputs = join_inputs({{"N", std::to_string(params.n_neurons)},
            {"S", std::to_string(params.synapses_per_neuron)}});
    const double bits = analytics::routing_memory_bits(params);
    add_single("routing_memory_bits", storage_inputs, bits);
    add_single("routing_memory_gib", storage_inputs, analytics::bits_to_gib(bits));
    add_single("routing_memory_kib_per_neuron", storage_inputs, analytics::bytes_per_neuron(params) / 1024.0);

    const std::string typed_inputs = join_inputs({{"N", std::to_string(params.n_neurons)},
            {"S", std::to_string(params.synapses_per_neuron)}, {"k", std::to_string(params.synapse_types)}});
    add_single("routing_memory_bits_typed", typed_inputs, analytics::routing_memory_bits_typed(params));
    add_single("reduction_factor", typed_inputs, analytics::reduction_factor(params));

    const std::string rate_inputs = join_inputs({{"N", std::to_string(params.n_neurons)},
            {"R", csv::format_double(params.firing_rate_hz)}, {"alpha", csv::format_double(bp.locality_fraction)}});
    add_single("conventional_min_bisection", rate_inputs,
            analytics::conventional_min_bisection(params, bp.locality_fraction));

    {
        const auto literal = analytics::latency_constrained_min_bisection(params, bp.bisection_links,
                analytics::BisectionFormula::paper_literal);
        const auto rederived = analytics::latency_constrained_min_bisection(params, bp.bisection_links,
                analytics::BisectionFormula::rederived);
        rows.push_back({"latency_constrained_min_bisection",
                join_inputs({{"N", std::to_string(params.n_neurons)},
                        {"R", csv::format_double(params.firing_rate_hz)},
                        {"C", std::to_string(bp.bisection_links)},
                        {"eps", csv::format_double(params.temporal_precision_s)}}),
                literal.value, rederived.value, literal.degenerate || rederived.degenerate});
    }

    if (bp.link_occupancy_s > 0.0)
    {
        const auto last = analytics::last_packet_latency(params, bp);
        add_single("last_packet_latency_s",
                join_inputs({{"C", std::to_string(bp.bisection_links)},
                        {"l", csv::format_double(bp.base_latency_s)},
                        {"o", csv::format_double(bp.link_occupancy_s)}}),
                last.value, last.degenerate);
    }
    if (bp.bandwidth() > 0.0)
    {
        const auto jitter = analytics::arrival_jitter_bound(params, bp);
        add_single("arrival_jitter_bound_s",
                join_inputs({{"B", csv::format_double(bp.bandwidth())},
                        {"C", std::to_string(bp.bisection_links)}}),
                jitter.value, jitter.degenerate);
    }

    if (config.link)
    {
        const analytics::LinkParams lp = link_params_from(*config.link);
        const std::string link_inputs = join_inputs({{"Nc", std::to_string(lp.cluster_external_neurons)},
                {"r", std::to_string(lp.router_degree)}, {"d", csv::format_double(lp.mean_hops)},
                {"R", csv::format_double(params.firing_rate_hz)}});
        add_single("link_traffic", link_inputs, analytics::link_traffic(lp, params));

        const auto literal = analytics::link_bandwidth_requirement(lp, params,
                analytics::LinkFormula::paper_literal_constrained);
        const auto rederived = analytics::link_bandwidth_requirement(lp, params,
                analytics::LinkFormula::rederived_constrained);
        rows.push_back({"link_bandwidth_requirement", link_inputs, literal.value, rederived.value,
                literal.degenerate || rederived.degenerate});

        const auto conventional =
                analytics::link_bandwidth_requirement(lp, params, analytics::LinkFormula::conventional);
        add_single("link_bandwidth_conventional", link_inputs, conventional.value, conventional.degenerate);
    }

    if (config.memory)
    {
        const analytics::MemoryTechParams tech = memory_tech_from(*config.memory);
        tech.validate();
        const std::string memory_inputs = join_inputs({{"bits", std::to_string(config.memory->array_bits)},
                {"bit_area", csv::format_double(tech.bit_area)}});
        add_single("effective_memory_area", memory_inputs,
                analytics::effective_memory_area(config.memory->array_bits, tech));
        add_single("effective_bit_area", memory_inputs,
                analytics::effective_bit_area(config.memory->array_bits, tech));
    }
    return rows;
}

std::string analysis_csv(const std::vector<AnalysisRow> &rows)
{
    std::string out = "formula,inputs,paper_literal,rederived,degenerate\n";
    for (const AnalysisRow &row : rows)
    {
        out += csv::join_row({row.formula, row.inputs, csv::format_double(row.paper_literal),
                csv::format_double(row.rederived), row.degenerate ? "1" : "0"});
    }
    return out;
}

SimulationArtifacts run_simulation(const RunConfig &config, std::optional<std::uint64_t> seed_override)
{
    if (!config.topology || !config.workload)
    {
        throw std::invalid_argument("simulate: config needs [topology] and [workload] sections");
    }
    const Topology t = topology_from(*config.topology);
    validate_topology(t);
    const Population population = Population::from_topology(t);

    WorkloadSpec spec = workload_spec_from(*config.workload);
    if (seed_override)
    {
        spec.seed = *seed_override;
    }

    RoutingTable table;
    const bool have_table = !config.workload->connectivity.empty();
    if (have_table)
    {
        std::ifstream in(config.workload->connectivity);
        if (!in)
        {
            throw std::runtime_error("cannot open connectivity file: " + config.workload->connectivity);
        }
        table.destinations = load_connectivity(in, population.size());
        table.local_address_bits = ceil_log2(population.size());
    }

    Workload workload;
    switch (spec.kind)
    {
    case WorkloadKind::poisson:
        workload = poisson_workload(spec, population, have_table ? &table : nullptr);
        break;
    case WorkloadKind::burst:
        workload = burst_workload(spec, population);
        break;
    case WorkloadKind::replay: {
        if (config.workload->trace.empty())
        {
            throw std::invalid_argument("simulate: replay workload needs a trace path");
        }
        std::ifstream in(config.workload->trace);
        if (!in)
        {
            throw std::runtime_error("cannot open trace file: " + config.workload->trace);
        }
        workload = replay_workload(in, population, have_table ? &table : nullptr);
        break;
    }
    }

    RunLimits limits;
    if (config.run)
    {
        limits.max_ticks = config.run->max_ticks;
    }

    SimulationArtifacts artifacts;
    artifacts.tick_seconds = spec.tick_duration_s;
    artifacts.n_routers = t.n_routers;
    artifacts.n_clusters = t.endpoints().size();
    try
    {
        artifacts.report = run(t, default_policy(t), population, workload, limits);
    }
    catch (const SimTimeout &timeout)
    {
        artifacts.report = timeout.partial;
        artifacts.timed_out = true;
    }
    return artifacts;
}

std::string deliveries_csv(const SimReport &report)
{
    std::string out = "spike_id,src,dst,t_gen,t_deliver,hops\n";
    for (const DeliveryRecord &record : report.deliveries)
    {
        out += csv::join_row({std::to_string(record.spike_id), std::to_string(record.src),
                std::to_string(record.dst), std::to_string(record.t_gen), std::to_string(record.t_deliver),
                std::to_string(record.hops)});
    }
    return out;
}

std::string links_csv(const SimReport &report)
{
    std::string out = "link,served,utilization,max_queue\n";
    for (const LinkUsage &usage : report.links)
    {
        out += csv::join_row({std::to_string(usage.src) + "->" + std::to_string(usage.dst),
                std::to_string(usage.served), csv::format_double(usage.utilization),
                std::to_string(usage.max_queue)});
    }
    return out;
}

std::string summary_csv(const SimulationArtifacts &artifacts)
{
    const SimReport &report = artifacts.report;
    std::string out =
            "injected,expected,delivered,duration_ticks,tick_seconds,min_latency,max_latency,mean_latency,"
            "jitter_ticks,link_traversals,router_traversals,n_routers,n_clusters,timed_out\n";
    out += csv::join_row({std::to_string(report.injected_spikes), std::to_string(report.expected_deliveries),
            std::to_string(report.delivered), std::to_string(report.duration_ticks),
            csv::format_double(artifacts.tick_seconds), std::to_string(report.min_latency),
            std::to_string(report.max_latency), csv::format_double(report.mean_latency),
            std::to_string(report.jitter_ticks), std::to_string(report.total_link_traversals),
            std::to_string(report.total_router_traversals), std::to_string(artifacts.n_routers),
            std::to_string(artifacts.n_clusters), artifacts.timed_out ? "1" : "0"});
    return out;
}

std::vector<SweepRow> run_rate_sweep(const RunConfig &config, const std::vector<double> &rates,
        std::optional<std::uint64_t> seed_override)
{
    if (!config.topology || !config.workload)
    {
        throw std::invalid_argument("sweep: config needs [topology] and [workload] sections");
    }
    if (rates.empty())
    {
        throw std::invalid_argument("sweep: no rates given ([run] rates or --rates)");
    }
    if (!std::is_sorted(rates.begin(), rates.end()))
    {
        throw std::invalid_argument("sweep: rates must be ascending");
    }
    const Topology t = topology_from(*config.topology);
    const Population population = Population::from_topology(t);
    WorkloadSpec base = workload_spec_from(*config.workload);
    base.kind = WorkloadKind::poisson;
    if (seed_override)
    {
        base.seed = *seed_override;
    }
    const Tick duration = config.run ? config.run->sweep_duration_ticks : RunSection{}.sweep_duration_ticks;
    return load_sweep(t, default_policy(t), population, base, rates, duration);
}

std::string sweep_csv(const std::vector<SweepRow> &rows)
{
    std::string out = "rate,mean_latency,p99_latency,saturated\n";
    for (const SweepRow &row : rows)
    {
        out += csv::join_row({csv::format_double(row.injection_rate), csv::format_double(row.mean_latency),
                csv::format_double(row.p99_latency), row.saturated ? "1" : "0"});
    }
    return out;
}

SummaryData parse_summary_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string header;
    std::string row;
    if (!std::getline(in, header) || !std::getline(in, row))
    {
        throw std::runtime_error("summary.csv: expected a header and one data row");
    }
    std::vector<std::string> names;
    std::vector<std::string> values;
    for (std::string *target : {&header, &row})
    {
        std::istringstream fields(*target);
        std::string field;
        while (std::getline(fields, field, ','))
        {
            (target == &header ? names : values).push_back(field);
        }
    }
    if (names.size() != values.size())
    {
        throw std::runtime_error("summary.csv: header and row width differ");
    }
    const auto lookup = [&](const std::string &name) -> const std::string & {
        for (std::size_t i = 0; i < names.size(); ++i)
        {
            if (names[i] == name)
            {
                return values[i];
            }
        }
        throw std::runtime_error("summary.csv: missing column '" + name + "'");
    };

    SummaryData data;
    data.activity.spikes = std::stoull(lookup("injected"));
    data.activity.link_traversals = std::stoull(lookup("link_traversals"));
    data.activity.router_traversals = std::stoull(lookup("router_traversals"));
    data.duration_s = std::stod(lookup("duration_ticks")) * std::stod(lookup("tick_seconds"));
    data.n_routers = std::stoull(lookup("n_routers"));
    data.n_clusters = std::stoull(lookup("n_clusters"));
    return data;
}

std::string power_csv(const PowerBreakdown &breakdown,
        const std::vector<std::pair<double, HopSensitivity>> &sensitivity)
{
    std::string out = "component,watts,share_percent\n";
    out += csv::join_row({"compute", csv::format_double(breakdown.compute_w),
            csv::format_double(breakdown.compute_share_pct)});
    out += csv::join_row({"communication", csv::format_double(breakdown.communication_w),
            csv::format_double(breakdown.communication_share_pct)});
    out += csv::join_row({"static", csv::format_double(breakdown.static_w),
            csv::format_double(breakdown.static_share_pct)});
    out += csv::join_row({"total", csv::format_double(breakdown.total_w), "100"});
    for (const auto &[scale, result] : sensitivity)
    {
        const double scaled_total = breakdown.compute_w + result.communication_w_scaled + breakdown.static_w;
        const double share = scaled_total > 0.0 ? 100.0 * result.communication_w_scaled / scaled_total : 0.0;
        out += csv::join_row({"communication_dscale_" + csv::format_double(scale),
                csv::format_double(result.communication_w_scaled), csv::format_double(share)});
    }
    return out;
}

namespace {

int cmd_analyze_body(const RunConfig &config, const CommandOptions &options)
{
    RunConfig effective = config;
    if (options.mode && effective.analytics)
    {
        effective.analytics->mode = *options.mode;
    }
    const std::vector<AnalysisRow> rows = analyze_rows(effective);
    std::filesystem::create_directories(options.out_dir);
    write_file(options.out_dir + "/analysis.csv", analysis_csv(rows));
    return exit_ok;
}

int cmd_simulate_body(const RunConfig &config, const CommandOptions &options)
{
    const SimulationArtifacts artifacts = run_simulation(config, options.seed);
    std::filesystem::create_directories(options.out_dir);
    write_file(options.out_dir + "/deliveries.csv", deliveries_csv(artifacts.report));
    write_file(options.out_dir + "/links.csv", links_csv(artifacts.report));
    write_file(options.out_dir + "/summary.csv", summary_csv(artifacts));
    write_file(options.out_dir + "/topology.txt", save_topology(topology_from(*config.topology)));
    return artifacts.timed_out ? exit_timeout : exit_ok;
}

int cmd_sweep_body(const RunConfig &config, const CommandOptions &options)
{
    std::vector<double> rates = options.rates;
    if (rates.empty() && config.run)
    {
        rates = config.run->rates;
    }
    const std::vector<SweepRow> rows = run_rate_sweep(config, rates, options.seed);
    std::filesystem::create_directories(options.out_dir);
    write_file(options.out_dir + "/sweep.csv", sweep_csv(rows));
    return exit_ok;
}

int cmd_report_body(const RunConfig &config, const CommandOptions &options)
{
    if (!config.power)
    {
        throw std::invalid_argument("report: config needs a [power] section");
    }
    const SummaryData data = parse_summary_csv(read_file(options.out_dir + "/summary.csv"));
    const PowerModel model = power_model_from(*config.power);
    const PowerBreakdown breakdown =
            estimate(data.activity, model, data.duration_s, data.n_routers, data.n_clusters);

    std::vector<std::pair<double, HopSensitivity>> sensitivity;
    for (const double scale : config.power->d_scales)
    {
        sensitivity.emplace_back(scale, hop_energy_sensitivity(data.activity, model, data.duration_s, scale));
    }
    write_file(options.out_dir + "/power.csv", power_csv(breakdown, sensitivity));
    return exit_ok;
}

} // namespace

int cmd_analyze(const RunConfig &config, const CommandOptions &options)
{
    return guarded("analyze", cmd_analyze_body, config, options);
}

int cmd_simulate(const RunConfig &config, const CommandOptions &options)
{
    return guarded("simulate", cmd_simulate_body, config, options);
}

int cmd_sweep(const RunConfig &config, const CommandOptions &options)
{
    return guarded("sweep", cmd_sweep_body, config, options);
}

int cmd_report(const RunConfig &config, const CommandOptions &options)
{
    return guarded("report", cmd_report_body, config, options);
}

} // namespace spikenoc
