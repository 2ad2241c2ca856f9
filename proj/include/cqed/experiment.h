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

#ifndef CQED_EXPERIMENT_H
#define CQED_EXPERIMENT_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cqed/protocols.h"

namespace cqed {

enum class RunMode { kEnumerate, kSample };

struct Tolerances {
    /// |sum of branch probabilities - 1|
    double probability = 1e-10;
    /// 1 - fidelity on branches with a closed-form expectation.
    double fidelity = 1e-8;
    /// Aggregates recomputed from the branch table.
    double aggregate = 1e-12;

    bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
    SchemeConfig scheme;
    RunMode mode = RunMode::kEnumerate;
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
    std::string report_path;
    Tolerances tolerances;
};

/// Parses and validates a JSON config, applying defaults. Throws ConfigError
/// with the offending field path ("$.payload.c_f: ...").
ExperimentConfig load_config(std::string_view text);
ExperimentConfig load_config_file(const std::string& path);
/// Config with defaults and resolved truncation, as echoed in reports.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct BranchRow {
    std::vector<std::string> path;  // "A2=f", "inject=+-", ...
    double probability = 0.0;
    std::string classification;
    std::string expected_form;
    std::optional<double> raw_fidelity;
    std::optional<double> corrected_fidelity;
    std::optional<double> analytic_fidelity;
    double correction_probability = 1.0;
    std::optional<std::uint64_t> count;  // sample mode

    bool operator==(const BranchRow&) const = default;
};

struct Aggregates {
    double total_probability = 0.0;
    double success_probability = 0.0;
    double bell_discrimination_probability = 0.0;
    double conditional_success_probability = 0.0;
    double mean_corrected_fidelity = 0.0;

    bool operator==(const Aggregates&) const = default;
};

struct SampleSummary {
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::uint64_t successes = 0;
    std::uint64_t discriminated = 0;
    double success_frequency = 0.0;
    double conditional_success_frequency = 0.0;

    bool operator==(const SampleSummary&) const = default;
};

struct InvariantCheck {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;

    bool operator==(const InvariantCheck&) const = default;
};

struct TeleportReport {
    std::string schema;
    std::string version;
    nlohmann::json config;
    std::size_t field_dim = 0;
    Complex zeta;
    Complex xi;
    double bell_probability = 0.0;
    double payload_probability = 0.0;
    std::vector<BranchRow> branches;
    Aggregates aggregates;
    std::vector<InvariantCheck> invariants;
    std::optional<SampleSummary> sample;

    bool passed() const;
    bool operator==(const TeleportReport&) const = default;
};

Aggregates aggregate(std::span<const BranchRow> rows);
TeleportReport build_report(const TeleportRun& run, const ExperimentConfig& cfg);
TeleportReport run(const ExperimentConfig& cfg);

/// Sorted keys, numbers printed with 17 significant digits, two-space indent.
std::string canonical_dump(const nlohmann::json& j);
nlohmann::json to_json(const TeleportReport& r);
std::string to_json_text(const TeleportReport& r);
TeleportReport report_from_json(std::string_view text);

}  // namespace cqed

#endif  // CQED_EXPERIMENT_H
