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

#include "cqed/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cqed/errors.h"
#include "cqed/version.h"

namespace cqed {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            fail(path + "." + key, "unknown field");
        }
    }
}

double number(const json& obj, const char* key, const std::string& path, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        fail(path + "." + key, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(path + "." + key, "must be finite");
    }
    return x;
}

std::uint64_t unsigned_int(const json& obj, const char* key, const std::string& path, std::uint64_t fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(path + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string string_field(const json& obj, const char* key, const std::string& path, std::string fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
        fail(path + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

void forbid(const json& obj, const char* key, const std::string& path, const char* why) {
    if (obj.contains(key)) {
        fail(path + "." + key, why);
    }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("report holds a non-finite number");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

void dump_into(const json& j, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad + json(key).dump() + ": ";
                dump_into(value, indent + 2, out);
            }
            out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) {
                    out += ",\n";
                }
                out += pad;
                dump_into(j[i], indent + 2, out);
            }
            out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

json rows_json(std::span<const BranchRow> rows) {
    json out = json::array();
    for (const BranchRow& b : rows) {
        json row = {
            {"path", b.path},
            {"probability", b.probability},
            {"classification", b.classification},
            {"expected_form", b.expected_form},
            {"raw_fidelity", optional_json(b.raw_fidelity)},
            {"corrected_fidelity", optional_json(b.corrected_fidelity)},
            {"analytic_fidelity", optional_json(b.analytic_fidelity)},
            {"correction_probability", b.correction_probability},
        };
        if (b.count) {
            row["count"] = *b.count;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<BranchRow> rows_from(const json& rows) {
    std::vector<BranchRow> out;
    for (const json& row : rows) {
        BranchRow b;
        b.path = row.at("path").get<std::vector<std::string>>();
        b.probability = row.at("probability").get<double>();
        b.classification = row.at("classification").get<std::string>();
        b.expected_form = row.at("expected_form").get<std::string>();
        b.raw_fidelity = optional_from(row.at("raw_fidelity"));
        b.corrected_fidelity = optional_from(row.at("corrected_fidelity"));
        b.analytic_fidelity = optional_from(row.at("analytic_fidelity"));
        b.correction_probability = row.at("correction_probability").get<double>();
        if (row.contains("count")) {
            b.count = row.at("count").get<std::uint64_t>();
        }
        out.push_back(std::move(b));
    }
    return out;
}

bool is_success(const BranchRow& r) { return r.classification != to_string(Verdict::kFailure); }

bool is_discriminated(const BranchRow& r) { return r.expected_form != to_string(BobForm::kUndetermined); }

}  // namespace

// ---- config --------------------------------------------------------------

ExperimentConfig load_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("$", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        fail("$", "expected a JSON object");
    }
    reject_unknown(root, "$",
                   {"scheme", "alpha", "field_dim", "payload", "prep_detect", "detection_gt", "bell_kind", "mode",
                    "shots", "seed", "report_path", "tolerances"});

    ExperimentConfig cfg;
    SchemeConfig& s = cfg.scheme;
    if (!root.contains("scheme")) {
        fail("$.scheme", "required field missing");
    }
    const json& scheme = root.at("scheme");
    if (!scheme.is_number_integer() || (scheme.get<int>() != 1 && scheme.get<int>() != 2)) {
        fail("$.scheme", "must be 1 or 2");
    }
    s.scheme = scheme.get<int>();

    if (s.scheme == 2) {
        forbid(root, "alpha", "$", "only meaningful for scheme 1");
        forbid(root, "prep_detect", "$", "only meaningful for scheme 1");
    }
    s.alpha = number(root, "alpha", "$", 1.0);
    if (s.alpha <= 0.0) {
        fail("$.alpha", "must be positive");
    }
    if (root.contains("field_dim")) {
        const json& d = root.at("field_dim");
        if (d.is_string() && d.get<std::string>() == "auto") {
            s.field_dim = 0;
        } else if (d.is_number_integer() && d.get<std::int64_t>() >= 2) {
            s.field_dim = d.get<std::size_t>();
        } else {
            fail("$.field_dim", "expected \"auto\" or an integer >= 2");
        }
    }
    s.detection_gt = number(root, "detection_gt", "$", std::numbers::pi / 2);
    s.prep_detect = string_field(root, "prep_detect", "$", "f");
    if (s.prep_detect != "f" && s.prep_detect != "g") {
        fail("$.prep_detect", "must be \"f\" or \"g\"");
    }
    const std::string bell = string_field(root, "bell_kind", "$", "Phi+");
    try {
        s.bell_kind = bell_kind_from_string(bell);
    } catch (const ConfigError& e) {
        fail("$.bell_kind", e.what());
    }

    if (root.contains("payload")) {
        const json& p = root.at("payload");
        if (!p.is_object()) {
            fail("$.payload", "expected an object");
        }
        if (s.scheme == 1) {
            reject_unknown(p, "$.payload", {"c_f", "c_g", "theta"});
            s.c_f = number(p, "c_f", "$.payload", s.c_f);
            s.c_g = number(p, "c_g", "$.payload", s.c_g);
            s.theta = number(p, "theta", "$.payload", s.theta);
        } else {
            reject_unknown(p, "$.payload", {"c_e", "c_f"});
            s.c_e = number(p, "c_e", "$.payload", s.c_e);
            s.c_f = number(p, "c_f", "$.payload", s.c_f);
        }
    }
    const double norm2 = s.scheme == 1 ? s.c_f * s.c_f + s.c_g * s.c_g : s.c_e * s.c_e + s.c_f * s.c_f;
    if (std::abs(norm2 - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg.precision(17);
        msg << (s.scheme == 1 ? "c_f^2 + c_g^2" : "c_e^2 + c_f^2") << " must equal 1 (got " << norm2 << ")";
        fail("$.payload", msg.str());
    }

    const std::string mode = string_field(root, "mode", "$", "enumerate");
    if (mode == "enumerate") {
        cfg.mode = RunMode::kEnumerate;
    } else if (mode == "sample") {
        cfg.mode = RunMode::kSample;
    } else {
        fail("$.mode", "must be \"enumerate\" or \"sample\"");
    }
    cfg.shots = unsigned_int(root, "shots", "$", cfg.shots);
    if (cfg.shots < 1) {
        fail("$.shots", "must be at least 1");
    }
    cfg.seed = unsigned_int(root, "seed", "$", cfg.seed);
    cfg.report_path = string_field(root, "report_path", "$", "");

    if (root.contains("tolerances")) {
        const json& t = root.at("tolerances");
        if (!t.is_object()) {
            fail("$.tolerances", "expected an object");
        }
        reject_unknown(t, "$.tolerances", {"probability", "fidelity", "aggregate"});
        cfg.tolerances.probability = number(t, "probability", "$.tolerances", cfg.tolerances.probability);
        cfg.tolerances.fidelity = number(t, "fidelity", "$.tolerances", cfg.tolerances.fidelity);
        cfg.tolerances.aggregate = number(t, "aggregate", "$.tolerances", cfg.tolerances.aggregate);
        for (const char* key : {"probability", "fidelity", "aggregate"}) {
            if (number(t, key, "$.tolerances", 1.0) <= 0.0) {
                fail(std::string("$.tolerances.") + key, "must be positive");
            }
        }
    }

    try {
        s.validate();
    } catch (const ConfigError& e) {
        fail("$", e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path + ": cannot open config");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

json config_to_json(const ExperimentConfig& cfg) {
    const SchemeConfig& s = cfg.scheme;
    json j;
    j["scheme"] = s.scheme;
    j["field_dim"] = s.resolved_dim();
    j["detection_gt"] = s.detection_gt;
    j["bell_kind"] = std::string(to_string(s.bell_kind));
    if (s.scheme == 1) {
        j["alpha"] = s.alpha;
        j["prep_detect"] = s.prep_detect;
        j["payload"] = {{"c_f", s.c_f}, {"c_g", s.c_g}, {"theta", s.theta}};
    } else {
        j["payload"] = {{"c_e", s.c_e}, {"c_f", s.c_f}};
    }
    j["mode"] = cfg.mode == RunMode::kEnumerate ? "enumerate" : "sample";
    if (cfg.mode == RunMode::kSample) {
        j["shots"] = cfg.shots;
    }
    j["seed"] = cfg.seed;
    j["tolerances"] = {{"probability", cfg.tolerances.probability},
                       {"fidelity", cfg.tolerances.fidelity},
                       {"aggregate", cfg.tolerances.aggregate}};
    return j;
}

// ---- report --------------------------------------------------------------

bool TeleportReport::passed() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const InvariantCheck& c) { return c.passed; });
}

Aggregates aggregate(std::span<const BranchRow> rows) {
    Aggregates a;
    double weighted_fidelity = 0.0;
    for (const BranchRow& r : rows) {
        a.total_probability += r.probability;
        if (is_discriminated(r)) {
            a.bell_discrimination_probability += r.probability;
        }
        if (is_success(r)) {
            a.success_probability += r.probability;
            weighted_fidelity += r.probability * r.corrected_fidelity.value_or(0.0);
        }
    }
    if (a.bell_discrimination_probability > 0.0) {
        a.conditional_success_probability = a.success_probability / a.bell_discrimination_probability;
    }
    if (a.success_probability > 0.0) {
        a.mean_corrected_fidelity = weighted_fidelity / a.success_probability;
    }
    return a;
}

TeleportReport build_report(const TeleportRun& run, const ExperimentConfig& cfg) {
    TeleportReport rep;
    rep.schema = kReportSchema;
    rep.version = kVersion;
    rep.config = config_to_json(cfg);
    rep.field_dim = run.field_dim;
    rep.zeta = run.payload.zeta;
    rep.xi = run.payload.xi;
    rep.bell_probability = run.bell_probability;
    rep.payload_probability = run.payload_probability;
    for (const TeleportBranch& b : run.branches) {
        BranchRow row;
        for (const Outcome& o : b.path) {
            row.path.push_back(o.subsystem + "=" + o.label);
        }
        row.probability = b.probability;
        row.classification = to_string(b.verdict);
        row.expected_form = to_string(b.form);
        row.raw_fidelity = b.raw_fidelity;
        row.corrected_fidelity = b.corrected_fidelity;
        row.analytic_fidelity = b.form_fidelity;
        row.correction_probability = b.correction_probability;
        rep.branches.push_back(std::move(row));
    }
    rep.aggregates = aggregate(rep.branches);

    const Tolerances& tol = cfg.tolerances;
    auto check = [&](std::string name, double deviation, double tolerance) {
        rep.invariants.push_back({std::move(name), deviation, tolerance, deviation <= tolerance});
    };
    check("total_probability", std::abs(rep.aggregates.total_probability - 1.0), tol.probability);
    double analytic = 0.0, corrected = 0.0;
    for (const BranchRow& r : rep.branches) {
        if (r.analytic_fidelity) {
            analytic = std::max(analytic, 1.0 - *r.analytic_fidelity);
        }
        if (is_success(r)) {
            corrected = std::max(corrected, 1.0 - r.corrected_fidelity.value_or(0.0));
        }
    }
    check("analytic_fidelity", analytic, tol.fidelity);
    check("corrected_fidelity", corrected, tol.fidelity);
    // The printed table alone must reproduce the aggregates.
    const Aggregates printed = aggregate(rows_from(json::parse(canonical_dump(rows_json(rep.branches)))));
    const Aggregates& a = rep.aggregates;
    check("aggregates_recomputable",
          std::max({std::abs(printed.total_probability - a.total_probability),
                    std::abs(printed.success_probability - a.success_probability),
                    std::abs(printed.bell_discrimination_probability - a.bell_discrimination_probability),
                    std::abs(printed.conditional_success_probability - a.conditional_success_probability),
                    std::abs(printed.mean_corrected_fidelity - a.mean_corrected_fidelity)}),
          tol.aggregate);

    if (cfg.mode == RunMode::kSample) {
        std::vector<double> weights;
        for (const BranchRow& r : rep.branches) {
            weights.push_back(r.probability);
        }
        std::mt19937_64 rng(cfg.seed);
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
        std::vector<std::uint64_t> counts(weights.size(), 0);
        for (std::uint64_t k = 0; k < cfg.shots; ++k) {
            ++counts[pick(rng)];
        }
        SampleSummary sum;
        sum.shots = cfg.shots;
        sum.seed = cfg.seed;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            BranchRow& r = rep.branches[i];
            r.count = counts[i];
            if (is_success(r)) {
                sum.successes += counts[i];
            }
            if (is_discriminated(r)) {
                sum.discriminated += counts[i];
            }
        }
        sum.success_frequency = static_cast<double>(sum.successes) / static_cast<double>(sum.shots);
        if (sum.discriminated > 0) {
            sum.conditional_success_frequency =
                static_cast<double>(sum.successes) / static_cast<double>(sum.discriminated);
        }
        rep.sample = sum;
    }
    return rep;
}

TeleportReport run(const ExperimentConfig& cfg) { return build_report(run_scheme(cfg.scheme), cfg); }

std::string canonical_dump(const json& j) {
    std::string out;
    dump_into(j, 0, out);
    out += "\n";
    return out;
}

json to_json(const TeleportReport& r) {
    json j;
    j["schema"] = r.schema;
    j["version"] = r.version;
    j["config"] = r.config;
    j["field_dim"] = r.field_dim;
    j["payload"] = {{"zeta", complex_json(r.zeta)}, {"xi", complex_json(r.xi)}};
    j["preparation"] = {{"bell_probability", r.bell_probability}, {"payload_probability", r.payload_probability}};
    j["branches"] = rows_json(r.branches);
    const Aggregates& a = r.aggregates;
    j["aggregates"] = {
        {"total_probability", a.total_probability},
        {"success_probability", a.success_probability},
        {"bell_discrimination_probability", a.bell_discrimination_probability},
        {"conditional_success_probability", a.conditional_success_probability},
        {"mean_corrected_fidelity", a.mean_corrected_fidelity},
    };
    json inv = json::array();
    for (const InvariantCheck& c : r.invariants) {
        inv.push_back({{"name", c.name}, {"deviation", c.deviation}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    j["invariants"] = std::move(inv);
    if (r.sample) {
        const SampleSummary& s = *r.sample;
        j["sample"] = {
            {"shots", s.shots},
            {"seed", s.seed},
            {"successes", s.successes},
            {"discriminated", s.discriminated},
            {"success_frequency", s.success_frequency},
            {"conditional_success_frequency", s.conditional_success_frequency},
        };
    }
    return j;
}

std::string to_json_text(const TeleportReport& r) { return canonical_dump(to_json(r)); }

TeleportReport report_from_json(std::string_view text) {
    const json j = json::parse(text);
    TeleportReport r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kReportSchema) {
        throw std::invalid_argument("unsupported report schema '" + r.schema + "'");
    }
    r.version = j.at("version").get<std::string>();
    r.config = j.at("config");
    r.field_dim = j.at("field_dim").get<std::size_t>();
    r.zeta = complex_from(j.at("payload").at("zeta"));
    r.xi = complex_from(j.at("payload").at("xi"));
    r.bell_probability = j.at("preparation").at("bell_probability").get<double>();
    r.payload_probability = j.at("preparation").at("payload_probability").get<double>();
    r.branches = rows_from(j.at("branches"));
    const json& a = j.at("aggregates");
    r.aggregates.total_probability = a.at("total_probability").get<double>();
    r.aggregates.success_probability = a.at("success_probability").get<double>();
    r.aggregates.bell_discrimination_probability = a.at("bell_discrimination_probability").get<double>();
    r.aggregates.conditional_success_probability = a.at("conditional_success_probability").get<double>();
    r.aggregates.mean_corrected_fidelity = a.at("mean_corrected_fidelity").get<double>();
    for (const json& c : j.at("invariants")) {
        r.invariants.push_back({c.at("name").get<std::string>(), c.at("deviation").get<double>(),
                                c.at("tolerance").get<double>(), c.at("passed").get<bool>()});
    }
    if (j.contains("sample")) {
        const json& s = j.at("sample");
        r.sample = SampleSummary{s.at("shots").get<std::uint64_t>(),
                                 s.at("seed").get<std::uint64_t>(),
                                 s.at("successes").get<std::uint64_t>(),
                                 s.at("discriminated").get<std::uint64_t>(),
                                 s.at("success_frequency").get<double>(),
                                 s.at("conditional_success_frequency").get<double>()};
    }
    return r;
}

}  // namespace cqed
