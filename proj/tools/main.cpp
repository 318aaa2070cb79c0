// Copyright 2026 The mixlab authors
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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mixlab/experiments.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::int64_t seed, int workers) {
    mixlab::ExperimentConfig config;
    try {
        config = mixlab::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    const std::string dir = out_dir.empty() ? "runs/" + config.experiment : out_dir;
    const auto result = mixlab::run_experiment(config, dir, seed, workers);
    std::cout << config.experiment << ": " << result.summary.rows().size()
              << " summary rows, " << result.curves.rows().size()
              << " curve rows -> " << dir << "\n";
    for (const auto& key : {"seed", "workers", "wall_time_s"}) {
        std::cout << "  " << key << " = " << result.meta.at(key) << "\n";
    }
    return 0;
}

int cmd_list() {
    for (const auto& name : mixlab::experiment_names()) std::cout << name << "\n";
    return 0;
}

int cmd_check_oracles(std::uint64_t seed) {
    mixlab::ResultTable report({"model", "check", "value", "tol", "pass"});
    const bool ok = mixlab::check_oracles(report, seed);
    for (std::size_t i = 0; i < report.rows().size(); ++i) {
        std::cout << (report.text(i, "pass") == "true" ? "[ok]   " : "[FAIL] ")
                  << report.text(i, "model") << " " << report.text(i, "check")
                  << "  value=" << report.number(i, "value")
                  << "  tol=" << report.number(i, "tol") << "\n";
    }
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixing-time laboratory for exactly solvable open-system models"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::int64_t seed = -1;
    int workers = -1;
    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "path to a key = value config")->required();
    run->add_option("--out", out_dir, "output directory (default runs/<experiment>)");
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("--workers", workers, "override the worker count");

    auto* list = app.add_subcommand("list-experiments", "list known experiment names");

    std::uint64_t oracle_seed = 1;
    auto* oracles = app.add_subcommand("check-oracles",
                                       "factorized-versus-dense residual battery");
    oracles->add_option("--seed", oracle_seed, "rng seed for the random states");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed, workers);
        if (list->parsed()) return cmd_list();
        if (oracles->parsed()) return cmd_check_oracles(oracle_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
