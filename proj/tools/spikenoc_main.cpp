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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spikenoc/commands.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"spikenoc: spiking network-on-chip analysis and simulation"};
    app.require_subcommand(1);

    std::string config_path;
    spikenoc::CommandOptions options;
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_set = false;

    const auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "run configuration file")->required();
        cmd->add_option("--out", options.out_dir, "output directory (default: .)");
        cmd->add_option_function<std::uint64_t>(
                   "--seed", [&](std::uint64_t value) { seed = value; seed_set = true; },
                   "seed override");
    };

    CLI::App *analyze = app.add_subcommand("analyze", "closed-form analysis CSV");
    add_common(analyze);
    analyze->add_option("--mode", mode, "formula variant: paper_literal | rederived")
            ->check(CLI::IsMember({"paper_literal", "rederived"}));

    CLI::App *simulate = app.add_subcommand("simulate", "single simulation run");
    add_common(simulate);

    CLI::App *sweep = app.add_subcommand("sweep", "latency vs injection-rate sweep");
    add_common(sweep);
    sweep->add_option("--rates", options.rates, "ascending injection rates (spikes/node/cycle)")
            ->delimiter(',');

    CLI::App *report = app.add_subcommand("report", "power breakdown from prior simulate outputs");
    add_common(report);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &error)
    {
        const int code = app.exit(error);
        return code == 0 ? 0 : spikenoc::exit_validation;
    }

    if (seed_set)
    {
        options.seed = seed;
    }
    if (!mode.empty())
    {
        options.mode = mode == "rederived" ? spikenoc::analytics::BisectionFormula::rederived
                                           : spikenoc::analytics::BisectionFormula::paper_literal;
    }

    spikenoc::RunConfig config;
    try
    {
        config = spikenoc::load_config(config_path);
        validate_config(config);
    }
    catch (const std::invalid_argument &error)
    {
        std::cerr << "config: " << error.what() << "\n";
        return spikenoc::exit_validation;
    }
    catch (const std::exception &error)
    {
        std::cerr << "config: " << error.what() << "\n";
        return spikenoc::exit_io;
    }

    if (analyze->parsed())
    {
        return spikenoc::cmd_analyze(config, options);
    }
    if (simulate->parsed())
    {
        return spikenoc::cmd_simulate(config, options);
    }
    if (sweep->parsed())
    {
        return spikenoc::cmd_sweep(config, options);
    }
    return spikenoc::cmd_report(config, options);
}
