// Copyright 2026 The cqedtel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cqedtel: run teleportation experiments and invariant checks.
//
// Exit status: 0 success, 1 invariant failure or runtime error, 2 config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cqed/errors.h"
#include "cqed/experiment.h"
#include "cqed/verify.h"
#include "cqed/version.h"

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kConfigError = 2;

struct RunArgs {
    std::string config;
    std::string out;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> shots;
    std::optional<std::uint64_t> seed;
};

int do_run(const RunArgs& args) {
    cqed::ExperimentConfig cfg;
    try {
        cfg = cqed::load_config_file(args.config);
        if (args.mode) {
            if (*args.mode == "enumerate") {
                cfg.mode = cqed::RunMode::kEnumerate;
            } else if (*args.mode == "sample") {
                cfg.mode = cqed::RunMode::kSample;
            } else {
                throw cqed::ConfigError("--mode: must be enumerate or sample");
            }
        }
        if (args.shots) {
            if (*args.shots < 1) {
                throw cqed::ConfigError("--shots: must be at least 1");
            }
            cfg.shots = *args.shots;
        }
        if (args.seed) {
            cfg.seed = *args.seed;
        }
        if (!args.out.empty()) {
            cfg.report_path = args.out;
        }
        if (cfg.report_path.empty()) {
            throw cqed::ConfigError("no report path: pass --out or set report_path");
        }
    } catch (const cqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    cqed::TeleportReport report;
    try {
        report = cqed::run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kInvariantFailure;
    }
    std::ofstream out(cfg.report_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << cfg.report_path << "\n";
        return kInvariantFailure;
    }
    out << cqed::to_json_text(report);

    const cqed::Aggregates& a = report.aggregates;
    std::printf("scheme %d, %zu branches, success %.12f, conditional %.12f, mean corrected fidelity %.12f\n",
                cfg.scheme.scheme, report.branches.size(), a.success_probability, a.conditional_success_probability,
                a.mean_corrected_fidelity);
    for (const auto& c : report.invariants) {
        std::printf("%s %-24s deviation %.3e (tolerance %.1e)\n", c.passed ? "ok  " : "FAIL", c.name.c_str(),
                    c.deviation, c.tolerance);
    }
    return report.passed() ? kOk : kInvariantFailure;
}

int do_verify(const std::string& filter) {
    std::vector<cqed::CheckResult> results;
    try {
        results = cqed::verify(filter);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kConfigError;
    }
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%s %s.%s max_deviation=%.3e tolerance=%.1e\n", r.passed ? "PASS" : "FAIL", r.module.c_str(),
                    r.name.c_str(), r.max_deviation, r.tolerance);
        failed += r.passed ? 0 : 1;
    }
    std::printf("%zu checks, %d failed\n", results.size(), failed);
    return failed ? kInvariantFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-QED teleportation simulator"};
    app.set_version_flag("--version", std::string("cqedtel ") + cqed::kVersion);
    app.require_subcommand(0, 1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Enumerate or sample a teleportation experiment");
    run->add_option("--config", run_args.config, "JSON config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_args.out, "Report output path");
    run->add_option("--mode", run_args.mode, "enumerate or sample");
    run->add_option("--shots", run_args.shots, "Number of samples in sample mode");
    run->add_option("--seed", run_args.seed, "Sampling seed");

    std::string filter;
    auto* verify = app.add_subcommand("verify", "Run invariant checks");
    verify->add_option("--filter", filter, "Only check this module");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    if (*run) {
        return do_run(run_args);
    }
    if (*verify) {
        return do_verify(filter);
    }
    std::cout << app.help();
    return kOk;
}
