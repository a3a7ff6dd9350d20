// Copyright 2026 The agingsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <agingsim/app.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using agingsim::app::json;

void print_error(const std::string& kind, const std::string& message) {
    const json err = {{"status", "error"}, {"kind", kind}, {"message", message}};
    std::cerr << err.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"agingsim: aging transition in atom-coupled oscillator networks"};
    cli.require_subcommand(1);

    std::string config_path;
    agingsim::app::Options opts;
    std::string format = "csv", plot = "on";
    long long seed = 0;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"trajectory", "time series and phase portraits for one parameter point"},
        {"sweep", "order parameter over a 1-D or 2-D parameter grid"},
        {"threshold", "closed-form p_cmin over g/J/V grids plus stability spot reports"},
        {"fockdist", "steady and analytic aging-state Fock distributions"},
        {"validate", "parse and resolve a config without running it"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = cli.add_subcommand(name, help);
        sub->add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
        sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        sub->add_option("--plot", plot, "write SVG plots")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
        sub->add_option("--threads", opts.threads, "worker threads for grids")->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", seed, "accepted and ignored: every solver is deterministic");
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return 2;
    }
    opts.format = format == "json" ? agingsim::app::Format::json : agingsim::app::Format::csv;
    opts.plot = plot == "on";

    const std::string command = cli.get_subcommands().front()->get_name();
    try {
        const auto cfg = agingsim::io::Config::load(config_path);
        std::vector<std::string> files;
        if (command == "trajectory") files = agingsim::app::cmd_trajectory(cfg, opts);
        else if (command == "sweep") files = agingsim::app::cmd_sweep(cfg, opts);
        else if (command == "threshold") files = agingsim::app::cmd_threshold(cfg, opts);
        else if (command == "fockdist") files = agingsim::app::cmd_fockdist(cfg, opts);
        else files = agingsim::app::cmd_validate(cfg, opts);
        std::cout << json{{"status", "ok"}, {"command", command}, {"files", files}}.dump() << '\n';
        return 0;
    } catch (const agingsim::Error& e) {
        print_error(std::string(agingsim::to_string(e.kind())), e.what());
    } catch (const std::exception& e) {
        print_error("InternalError", e.what());
    }
    return 1;
}
