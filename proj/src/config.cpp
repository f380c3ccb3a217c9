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

#include "spikenoc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spikenoc {

namespace {

std::string trim(const std::string &text)
{
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
    {
        return "";
    }
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string &where, const std::string &what)
{
    throw std::invalid_argument("config " + where + ": " + what);
}

// Shortest round-trip double formatting keeps serialize-then-parse exact.
std::string format_value(double value)
{
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

double parse_double(const std::string &where, const std::string &value)
{
    double out = 0.0;
    const char *begin = value.data();
    const char *end = begin + value.size();
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc{} || result.ptr != end)
    {
        fail(where, "expected a number, got '" + value + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string &where, const std::string &value)
{
    std::uint64_t out = 0;
    const char *begin = value.data();
    const char *end = begin + value.size();
    const auto result = std::from_chars(begin, end, out);
    if (result.ec != std::errc{} || result.ptr != end)
    {
        fail(where, "expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

std::uint32_t parse_u32(const std::string &where, const std::string &value)
{
    const std::uint64_t wide = parse_u64(where, value);
    if (wide > 0xffffffffULL)
    {
        fail(where, "value out of range: '" + value + "'");
    }
    return static_cast<std::uint32_t>(wide);
}

bool parse_bool(const std::string &where, const std::string &value)
{
    if (value == "true" || value == "1")
    {
        return true;
    }
    if (value == "false" || value == "0")
    {
        return false;
    }
    fail(where, "expected true/false, got '" + value + "'");
}

std::vector<std::string> split(const std::string &value, char sep)
{
    std::vector<std::string> parts;
    std::string token;
    std::istringstream stream(value);
    while (std::getline(stream, token, sep))
    {
        parts.push_back(trim(token));
    }
    return parts;
}

std::vector<double> parse_double_list(const std::string &where, const std::string &value)
{
    std::vector<double> values;
    if (trim(value).empty())
    {
        return values;
    }
    for (const std::string &token : split(value, ','))
    {
        values.push_back(parse_double(where, token));
    }
    return values;
}

std::string format_double_list(const std::vector<double> &values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i != 0)
        {
            out += ',';
        }
        out += format_value(values[i]);
    }
    return out;
}

const char *workload_kind_name(WorkloadKind kind)
{
    switch (kind)
    {
    case WorkloadKind::poisson: return "poisson";
    case WorkloadKind::burst: return "burst";
    case WorkloadKind::replay: return "replay";
    }
    return "?";
}

const char *topology_kind_name(TopologyKind kind)
{
    switch (kind)
    {
    case TopologyKind::mesh: return "mesh";
    case TopologyKind::torus: return "torus";
    case TopologyKind::tree: return "tree";
    case TopologyKind::hierarchical: return "hierarchical";
    }
    return "?";
}

void apply_topology_key(TopologySection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "kind")
    {
        if (value == "mesh") section.kind = TopologyKind::mesh;
        else if (value == "torus") section.kind = TopologyKind::torus;
        else if (value == "tree") section.kind = TopologyKind::tree;
        else if (value == "hierarchical") section.kind = TopologyKind::hierarchical;
        else fail(where, "unknown topology kind '" + value + "'");
    }
    else if (key == "width") section.width = parse_u32(where, value);
    else if (key == "height") section.height = parse_u32(where, value);
    else if (key == "diagonals") section.diagonals = parse_bool(where, value);
    else if (key == "fanout") section.fanout = parse_u32(where, value);
    else if (key == "leaves") section.leaves = parse_u32(where, value);
    else if (key == "service_ticks") section.service_ticks = parse_u32(where, value);
    else if (key == "pipeline_ticks") section.pipeline_ticks = parse_u32(where, value);
    else if (key == "neurons_per_router") section.neurons_per_router = parse_u64(where, value);
    else if (key == "external_fraction") section.external_fraction = parse_double(where, value);
    else if (key == "file") section.file = value;
    else fail(where, "unknown key '" + key + "'");
}

void apply_workload_key(WorkloadSection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "kind")
    {
        if (value == "poisson") section.kind = WorkloadKind::poisson;
        else if (value == "burst") section.kind = WorkloadKind::burst;
        else if (value == "replay") section.kind = WorkloadKind::replay;
        else fail(where, "unknown workload kind '" + value + "'");
    }
    else if (key == "rate_hz") section.rate_hz = parse_double(where, value);
    else if (key == "duration_ticks") section.duration_ticks = parse_u64(where, value);
    else if (key == "tick_seconds") section.tick_seconds = parse_double(where, value);
    else if (key == "locality") section.locality = parse_double(where, value);
    else if (key == "seed") section.seed = parse_u64(where, value);
    else if (key == "burst_tick") section.burst_tick = parse_u64(where, value);
    else if (key == "pairing")
    {
        if (value == "permutation") section.pairing = BurstPairing::seeded_permutation;
        else if (value == "mirror") section.pairing = BurstPairing::mirror;
        else fail(where, "unknown pairing '" + value + "'");
    }
    else if (key == "trace") section.trace = value;
    else if (key == "connectivity") section.connectivity = value;
    else fail(where, "unknown key '" + key + "'");
}

void apply_analytics_key(AnalyticsSection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "neurons") section.neurons = parse_u64(where, value);
    else if (key == "synapses_per_neuron") section.synapses_per_neuron = parse_u64(where, value);
    else if (key == "synapse_types") section.synapse_types = parse_u64(where, value);
    else if (key == "rate_hz") section.rate_hz = parse_double(where, value);
    else if (key == "precision_s") section.precision_s = parse_double(where, value);
    else if (key == "locality") section.locality = parse_double(where, value);
    else if (key == "bisection_links") section.bisection_links = parse_u64(where, value);
    else if (key == "bisection_bw") section.bisection_bw = parse_double(where, value);
    else if (key == "base_latency_s") section.base_latency_s = parse_double(where, value);
    else if (key == "occupancy_s") section.occupancy_s = parse_double(where, value);
    else if (key == "mode")
    {
        if (value == "paper_literal") section.mode = analytics::BisectionFormula::paper_literal;
        else if (value == "rederived") section.mode = analytics::BisectionFormula::rederived;
        else fail(where, "unknown mode '" + value + "'");
    }
    else fail(where, "unknown key '" + key + "'");
}

void apply_link_key(LinkSection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "external_neurons") section.external_neurons = parse_u64(where, value);
    else if (key == "router_degree") section.router_degree = parse_u64(where, value);
    else if (key == "mean_hops") section.mean_hops = parse_double(where, value);
    else fail(where, "unknown key '" + key + "'");
}

void apply_memory_key(MemorySection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "bit_area") section.bit_area = parse_double(where, value);
    else if (key == "array_bits") section.array_bits = parse_u64(where, value);
    else if (key == "efficiency_curve")
    {
        section.efficiency_curve.clear();
        if (!trim(value).empty())
        {
            for (const std::string &token : split(value, ','))
            {
                const auto colon = token.find(':');
                if (colon == std::string::npos)
                {
                    fail(where, "curve entries must be 'bits:efficiency', got '" + token + "'");
                }
                section.efficiency_curve.emplace_back(parse_u64(where, trim(token.substr(0, colon))),
                        parse_double(where, trim(token.substr(colon + 1))));
            }
        }
    }
    else fail(where, "unknown key '" + key + "'");
}

void apply_power_key(PowerSection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "router_energy_j") section.router_energy_j = parse_double(where, value);
    else if (key == "link_energy_j") section.link_energy_j = parse_double(where, value);
    else if (key == "router_static_w") section.router_static_w = parse_double(where, value);
    else if (key == "cluster_static_w") section.cluster_static_w = parse_double(where, value);
    else if (key == "compute_energy_j") section.compute_energy_j = parse_double(where, value);
    else if (key == "d_scales") section.d_scales = parse_double_list(where, value);
    else fail(where, "unknown key '" + key + "'");
}

void apply_run_key(RunSection &section, const std::string &where, const std::string &key,
        const std::string &value)
{
    if (key == "max_ticks") section.max_ticks = parse_u64(where, value);
    else if (key == "rates") section.rates = parse_double_list(where, value);
    else if (key == "sweep_duration_ticks") section.sweep_duration_ticks = parse_u64(where, value);
    else fail(where, "unknown key '" + key + "'");
}

} // namespace

RunConfig parse_config(const std::string &text)
{
    RunConfig config;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;

    while (std::getline(stream, line))
    {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
        {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty())
        {
            continue;
        }

        if (line.front() == '[')
        {
            if (line.back() != ']')
            {
                fail("line " + std::to_string(line_no), "malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section == "topology") config.topology.emplace();
            else if (section == "workload") config.workload.emplace();
            else if (section == "analytics") config.analytics.emplace();
            else if (section == "link") config.link.emplace();
            else if (section == "memory") config.memory.emplace();
            else if (section == "power") config.power.emplace();
            else if (section == "run") config.run.emplace();
            else fail("line " + std::to_string(line_no), "unknown section [" + section + "]");
            continue;
        }

        const auto equals = line.find('=');
        if (equals == std::string::npos)
        {
            fail("line " + std::to_string(line_no), "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, equals));
        const std::string value = trim(line.substr(equals + 1));
        const std::string where = "[" + section + "] " + key;
        if (section.empty())
        {
            fail("line " + std::to_string(line_no), "key '" + key + "' outside any section");
        }

        if (section == "topology") apply_topology_key(*config.topology, where, key, value);
        else if (section == "workload") apply_workload_key(*config.workload, where, key, value);
        else if (section == "analytics") apply_analytics_key(*config.analytics, where, key, value);
        else if (section == "link") apply_link_key(*config.link, where, key, value);
        else if (section == "memory") apply_memory_key(*config.memory, where, key, value);
        else if (section == "power") apply_power_key(*config.power, where, key, value);
        else if (section == "run") apply_run_key(*config.run, where, key, value);
    }
    return config;
}

RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const RunConfig &config)
{
    std::ostringstream out;
    if (config.topology)
    {
        const TopologySection &s = *config.topology;
        out << "[topology]\n";
        out << "kind = " << topology_kind_name(s.kind) << "\n";
        out << "width = " << s.width << "\n";
        out << "height = " << s.height << "\n";
        out << "diagonals = " << (s.diagonals ? "true" : "false") << "\n";
        out << "fanout = " << s.fanout << "\n";
        out << "leaves = " << s.leaves << "\n";
        out << "service_ticks = " << s.service_ticks << "\n";
        out << "pipeline_ticks = " << s.pipeline_ticks << "\n";
        out << "neurons_per_router = " << s.neurons_per_router << "\n";
        out << "external_fraction = " << format_value(s.external_fraction) << "\n";
        out << "file = " << s.file << "\n";
    }
    if (config.workload)
    {
        const WorkloadSection &s = *config.workload;
        out << "[workload]\n";
        out << "kind = " << workload_kind_name(s.kind) << "\n";
        out << "rate_hz = " << format_value(s.rate_hz) << "\n";
        out << "duration_ticks = " << s.duration_ticks << "\n";
        out << "tick_seconds = " << format_value(s.tick_seconds) << "\n";
        out << "locality = " << format_value(s.locality) << "\n";
        out << "seed = " << s.seed << "\n";
        out << "burst_tick = " << s.burst_tick << "\n";
        out << "pairing = "
            << (s.pairing == BurstPairing::mirror ? "mirror" : "permutation") << "\n";
        out << "trace = " << s.trace << "\n";
        out << "connectivity = " << s.connectivity << "\n";
    }
    if (config.analytics)
    {
        const AnalyticsSection &s = *config.analytics;
        out << "[analytics]\n";
        out << "neurons = " << s.neurons << "\n";
        out << "synapses_per_neuron = " << s.synapses_per_neuron << "\n";
        out << "synapse_types = " << s.synapse_types << "\n";
        out << "rate_hz = " << format_value(s.rate_hz) << "\n";
        out << "precision_s = " << format_value(s.precision_s) << "\n";
        out << "locality = " << format_value(s.locality) << "\n";
        out << "bisection_links = " << s.bisection_links << "\n";
        out << "bisection_bw = " << format_value(s.bisection_bw) << "\n";
        out << "base_latency_s = " << format_value(s.base_latency_s) << "\n";
        out << "occupancy_s = " << format_value(s.occupancy_s) << "\n";
        out << "mode = "
            << (s.mode == analytics::BisectionFormula::paper_literal ? "paper_literal" : "rederived") << "\n";
    }
    if (config.link)
    {
        const LinkSection &s = *config.link;
        out << "[link]\n";
        out << "external_neurons = " << s.external_neurons << "\n";
        out << "router_degree = " << s.router_degree << "\n";
        out << "mean_hops = " << format_value(s.mean_hops) << "\n";
    }
    if (config.memory)
    {
        const MemorySection &s = *config.memory;
        out << "[memory]\n";
        out << "bit_area = " << format_value(s.bit_area) << "\n";
        out << "array_bits = " << s.array_bits << "\n";
        out << "efficiency_curve = ";
        for (std::size_t i = 0; i < s.efficiency_curve.size(); ++i)
        {
            if (i != 0)
            {
                out << ",";
            }
            out << s.efficiency_curve[i].first << ":" << format_value(s.efficiency_curve[i].second);
        }
        out << "\n";
    }
    if (config.power)
    {
        const PowerSection &s = *config.power;
        out << "[power]\n";
        out << "router_energy_j = " << format_value(s.router_energy_j) << "\n";
        out << "link_energy_j = " << format_value(s.link_energy_j) << "\n";
        out << "router_static_w = " << format_value(s.router_static_w) << "\n";
        out << "cluster_static_w = " << format_value(s.cluster_static_w) << "\n";
        out << "compute_energy_j = " << format_value(s.compute_energy_j) << "\n";
        out << "d_scales = " << format_double_list(s.d_scales) << "\n";
    }
    if (config.run)
    {
        const RunSection &s = *config.run;
        out << "[run]\n";
        out << "max_ticks = " << s.max_ticks << "\n";
        out << "rates = " << format_double_list(s.rates) << "\n";
        out << "sweep_duration_ticks = " << s.sweep_duration_ticks << "\n";
    }
    return out.str();
}

void validate_config(const RunConfig &config)
{
    if (config.topology)
    {
        const Topology t = topology_from(*config.topology); // builders validate
        validate_topology(t);
    }
    if (config.workload)
    {
        workload_spec_from(*config.workload).validate();
        if (config.workload->kind == WorkloadKind::replay && config.workload->trace.empty())
        {
            throw std::invalid_argument("config [workload] trace: replay needs a trace path");
        }
    }
    if (config.analytics)
    {
        system_params_from(*config.analytics).validate();
        bisection_params_from(*config.analytics).validate();
    }
    if (config.link)
    {
        link_params_from(*config.link).validate();
    }
    if (config.memory)
    {
        memory_tech_from(*config.memory).validate();
    }
    if (config.power)
    {
        power_model_from(*config.power).validate();
        for (const double scale : config.power->d_scales)
        {
            if (!(scale > 0.0))
            {
                throw std::invalid_argument("config [power] d_scales: scales must be > 0");
            }
        }
    }
    if (config.run)
    {
        if (!std::is_sorted(config.run->rates.begin(), config.run->rates.end()))
        {
            throw std::invalid_argument("config [run] rates: must be ascending");
        }
    }
}

Topology topology_from(const TopologySection &section)
{
    if (!section.file.empty())
    {
        std::ifstream in(section.file);
        if (!in)
        {
            throw std::runtime_error("cannot open topology file: " + section.file);
        }
        Topology t = load_topology(in);
        // Imported files usually carry their clusters; only populate them
        // when the file left every endpoint empty.
        bool any_hosted = false;
        for (const ClusterInfo &cluster : t.clusters)
        {
            any_hosted |= cluster.neurons > 0;
        }
        if (!any_hosted && section.neurons_per_router > 0)
        {
            host_neurons(t, section.neurons_per_router, section.external_fraction);
        }
        return t;
    }

    const LinkTiming timing{section.service_ticks, section.pipeline_ticks};
    Topology t;
    switch (section.kind)
    {
    case TopologyKind::mesh:
        t = build_mesh(section.width, section.height, timing);
        break;
    case TopologyKind::torus:
        t = build_torus(section.width, section.height, section.diagonals, timing);
        break;
    case TopologyKind::tree:
        t = build_tree(section.fanout, section.leaves, timing);
        break;
    case TopologyKind::hierarchical:
        t = build_hierarchical(section.fanout, section.leaves, timing);
        break;
    }
    host_neurons(t, section.neurons_per_router, section.external_fraction);
    return t;
}

WorkloadSpec workload_spec_from(const WorkloadSection &section)
{
    WorkloadSpec spec;
    spec.kind = section.kind;
    spec.rate_hz = section.rate_hz;
    spec.duration_ticks = section.duration_ticks;
    spec.tick_duration_s = section.tick_seconds;
    spec.locality = section.locality;
    spec.seed = section.seed;
    spec.burst_tick = section.burst_tick;
    spec.pairing = section.pairing;
    return spec;
}

analytics::SystemParams system_params_from(const AnalyticsSection &section)
{
    analytics::SystemParams params;
    params.n_neurons = section.neurons;
    params.synapses_per_neuron = section.synapses_per_neuron;
    params.synapse_types = section.synapse_types;
    params.firing_rate_hz = section.rate_hz;
    params.temporal_precision_s = section.precision_s > 0.0
            ? section.precision_s
            : analytics::SystemParams::default_precision(section.rate_hz);
    return params;
}

analytics::BisectionParams bisection_params_from(const AnalyticsSection &section)
{
    analytics::BisectionParams params;
    params.bisection_bw_spikes_s = section.bisection_bw;
    params.bisection_links = section.bisection_links;
    params.base_latency_s = section.base_latency_s;
    params.link_occupancy_s = section.occupancy_s;
    params.locality_fraction = section.locality;
    return params;
}

analytics::LinkParams link_params_from(const LinkSection &section)
{
    analytics::LinkParams params;
    params.cluster_external_neurons = section.external_neurons;
    params.router_degree = section.router_degree;
    params.mean_hops = section.mean_hops;
    return params;
}

analytics::MemoryTechParams memory_tech_from(const MemorySection &section)
{
    analytics::MemoryTechParams tech;
    tech.bit_area = section.bit_area;
    for (const auto &[bits, efficiency] : section.efficiency_curve)
    {
        tech.efficiency_curve[bits] = efficiency;
    }
    return tech;
}

PowerModel power_model_from(const PowerSection &section)
{
    PowerModel model;
    model.router_energy_j = section.router_energy_j;
    model.link_energy_j = section.link_energy_j;
    model.router_static_w = section.router_static_w;
    model.cluster_static_w = section.cluster_static_w;
    model.compute_energy_per_spike_j = section.compute_energy_j;
    return model;
}

} // namespace spikenoc
