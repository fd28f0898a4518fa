/*
 Copyright 2026 The Rendezvous Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// rendezvous: plan, track, sweep and audit from a flat key = value config.

#include "rendezvous/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

struct GlobalFlags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> parallel;

    std::map<std::string, std::string> overrides() const {
        std::map<std::string, std::string> m;
        if (out) m["run.out"] = *out;
        if (seed) m["run.seed"] = std::to_string(*seed);
        if (parallel) m["run.parallel"] = std::to_string(*parallel);
        return m;
    }

    rdv::RunConfig resolve(const rdv::RunConfig& base) const { return rdv::with_overrides(base, overrides()); }

    rdv::RunConfig load() const {
        return resolve(config.empty() ? rdv::parse_config("", "<defaults>") : rdv::load_config(config));
    }
};

// Config for track/audit: --config when given, otherwise the scenario
// embedded in the input file.
rdv::RunConfig input_config(const GlobalFlags& flags, const std::string& path, const std::string& kind) {
    if (!flags.config.empty()) return flags.load();
    return flags.resolve(rdv::embedded_config(rdv::read_table(path, kind)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rendezvous trajectory planning, tracking and parameter sweeps"};
    app.require_subcommand(1);
    // Global flags may follow the subcommand.
    app.fallthrough();
    GlobalFlags flags;
    app.add_option("--config", flags.config, "Scenario file (flat key = value)")->check(CLI::ExistingFile);
    app.add_option("--out", flags.out, "Output directory (run.out)");
    app.add_option("--seed", flags.seed, "Random seed (run.seed)");
    app.add_option("--parallel", flags.parallel, "Worker threads for sweeps (run.parallel)")
        ->check(CLI::PositiveNumber);

    std::string trajectory = "out/trajectory.csv";
    std::string record = "out/run_record.csv";
    auto* plan = app.add_subcommand("plan", "Optimize a trajectory and write trajectory.csv");
    auto* track = app.add_subcommand("track", "Track a trajectory in the simulator");
    track->add_option("trajectory", trajectory, "Trajectory file from 'plan'")->check(CLI::ExistingFile);
    auto* sweep1 = app.add_subcommand("sweep1", "Target rate x thrust sweep");
    auto* sweep2 = app.add_subcommand("sweep2", "Approach attitude x target rate sweep");
    auto* audit = app.add_subcommand("audit", "Safety re-check of an existing run record");
    audit->add_option("run_record", record, "Run record from 'track'")->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*plan) return rdv::cmd_plan(flags.load(), std::cout);
        if (*sweep1) return rdv::cmd_sweep1(flags.load(), std::cout);
        if (*sweep2) return rdv::cmd_sweep2(flags.load(), std::cout);
        if (*track) {
            rdv::RunConfig cfg;
            try {
                cfg = input_config(flags, trajectory, "trajectory");
            } catch (const rdv::FormatError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return rdv::kExitFormat;
            }
            return rdv::cmd_track(trajectory, cfg, std::cout);
        }
        if (*audit) {
            rdv::RunConfig cfg;
            try {
                cfg = input_config(flags, record, "run_record");
            } catch (const rdv::FormatError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return rdv::kExitFormat;
            }
            return rdv::cmd_audit(record, cfg, std::cout);
        }
    } catch (const rdv::ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return rdv::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rdv::kExitUsage;
}
