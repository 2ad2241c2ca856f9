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

#include "cqed/verify.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

#include <unsupported/Eigen/MatrixFunctions>

#include "cqed/experiment.h"
#include "cqed/hilbert.h"
#include "cqed/measurement.h"
#include "cqed/protocols.h"

namespace cqed {

namespace {

constexpr std::uint64_t kSeed = 0x5eed2026;
constexpr int kTrials = 100;

class Recorder {
  public:
    explicit Recorder(std::string module) : module_(std::move(module)) {}

    void add(std::string name, double deviation, double tolerance) {
        const bool ok = std::isfinite(deviation) && deviation <= tolerance;
        out_.push_back({module_, std::move(name), deviation, tolerance, ok});
    }
    std::vector<CheckResult> take() { return std::move(out_); }

  private:
    std::string module_;
    std::vector<CheckResult> out_;
};

StateVector random_state(const SpaceLayout& layout, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(layout.total_dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = Complex(n(rng), n(rng));
    }
    return StateVector(layout, v).normalized();
}

std::pair<double, double> random_unit_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const double t = u(rng);
    return {std::cos(t), std::sin(t)};
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<CheckResult> verify_hilbert() {
    Recorder r("hilbert");
    std::mt19937_64 rng(kSeed);

    double ortho = 0.0, cat_norm = 0.0;
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const std::size_t d = min_truncation(a, 1e-16) + 2;
        const StateVector even = cat_state({a, d}, Parity::kEven);
        const StateVector odd = cat_state({a, d}, Parity::kOdd);
        ortho = std::max(ortho, std::abs(inner(even, odd)));
        cat_norm = std::max({cat_norm, std::abs(even.norm() - 1.0), std::abs(odd.norm() - 1.0)});
    }
    r.add("cat_orthogonality", ortho, 1e-12);
    r.add("cat_normalization", cat_norm, 1e-12);

    double eigen = 0.0;
    std::uniform_real_distribution<double> amp(-2.5, 2.5);
    for (int t = 0; t < kTrials; ++t) {
        const double a = amp(rng);
        const std::size_t d = min_truncation(std::abs(a), 1e-14) + 4;
        const StateVector s = coherent_state({a, d});
        for (std::size_t n = 0; n + 1 < d; ++n) {
            // (a|alpha>)_n = sqrt(n+1) c_{n+1} must equal alpha c_n.
            const Complex lhs = std::sqrt(static_cast<double>(n + 1)) * s.amplitude(n + 1);
            eigen = std::max(eigen, std::abs(lhs - a * s.amplitude(n)));
        }
    }
    r.add("coherent_eigenstate", eigen, 1e-10);

    double trace_defect = 0.0, factorize = 0.0;
    const SpaceLayout lay({atom("A", {"f", "g"}), field("C", 4), atom("B", {"x", "y", "z"})});
    for (int t = 0; t < kTrials; ++t) {
        const StateVector s = random_state(lay, rng);
        for (std::size_t keep : {0u, 1u, 2u}) {
            trace_defect = std::max(trace_defect, partial_trace(s, {keep}).validity_defect());
        }
        trace_defect = std::max(trace_defect, partial_trace(s, {0, 2}).validity_defect());
        const StateVector a = random_state(SpaceLayout({field("P", 3)}), rng);
        const StateVector b = random_state(SpaceLayout({atom("Q", {"f", "g"})}), rng);
        const StateVector c = random_state(SpaceLayout({field("P", 3)}), rng);
        const StateVector e = random_state(SpaceLayout({atom("Q", {"f", "g"})}), rng);
        factorize = std::max(factorize, std::abs(inner(tensor({a, b}), tensor({c, e})) - inner(a, c) * inner(b, e)));
    }
    r.add("partial_trace_valid", trace_defect, 1e-12);
    r.add("tensor_inner_factorizes", factorize, 1e-12);

    double minimal = 0.0;
    for (double a : {0.5, 1.0, 2.0, 3.0, 6.0}) {
        const std::size_t d = min_truncation(a, 1e-12);
        const bool ok = poisson_tail(a, d) < 1e-12 && (d == 1 || poisson_tail(a, d - 1) >= 1e-12);
        minimal = std::max(minimal, ok ? 0.0 : 1.0);
    }
    r.add("min_truncation_minimal", minimal, 0.0);
    return r.take();
}

std::vector<CheckResult> verify_operators(const VerifyHooks& hooks) {
    Recorder r("operators");
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> phase(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::uniform_int_distribution<std::size_t> dims(2, 20);

    double defect = 0.0;
    for (int t = 0; t < kTrials; ++t) {
        const double a = amp(rng);
        const std::size_t d = dims(rng);
        const std::size_t dd = min_truncation(std::abs(a), 1e-12) + 2;
        const auto [cf, cg] = random_unit_pair(rng);
        defect = std::max({defect, hooks.displacement(a, dd).unitarity_defect(),
                           dispersive_fg(phase(rng), d).unitarity_defect(),
                           dispersive_ef(phase(rng), d).unitarity_defect(), hooks.jc(phase(rng), d).unitarity_defect(),
                           ramsey(k1(cf, cg)).unitarity_defect(), ramsey(k1_fe(cg, cf)).unitarity_defect(),
                           ramsey(k2(phase(rng))).unitarity_defect(), ramsey(k_unravel()).unitarity_defect(),
                           ramsey(x_to_z()).unitarity_defect()});
    }
    r.add("unitarity", defect, 1e-10);

    double jc_dev = 0.0;
    for (double gt : {0.37, std::numbers::pi / 2, 2.9}) {
        for (std::size_t d = 2; d <= 12; ++d) {
            jc_dev = std::max(jc_dev, max_abs(hooks.jc(gt, d).matrix() - jc_oracle(gt, d).matrix()));
        }
    }
    r.add("jc_vs_expm", jc_dev, 1e-8);

    double disp_dev = 0.0;
    for (double a : {-1.5, -0.4, 0.7, 1.0, 2.0}) {
        const std::size_t d = min_truncation(std::abs(a), 1e-12) + 3;
        disp_dev = std::max(disp_dev, max_abs(hooks.displacement(a, d).matrix() - displacement_oracle(a, d).matrix()));
    }
    r.add("displacement_vs_expm", disp_dev, 1e-10);

    double coh = 0.0;
    for (int t = 0; t < kTrials; ++t) {
        const double a = amp(rng), b = amp(rng);
        const std::size_t d = min_truncation(std::abs(a) + std::abs(b), 1e-12);
        const StateVector start = coherent_state({a, d}, "C", 1e-12);
        const StateVector moved = apply(hooks.displacement(b, d), start);
        coh = std::max(coh, 1.0 - fidelity(moved, coherent_state({a + b, d}, "C", 1e-12)));
    }
    r.add("displacement_vs_coherent", coh, 1e-10);

    double parity = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        const std::size_t d = min_truncation(a, 1e-14) + 2;
        const StateVector in = tensor({atom_basis_state("A", {"f", "g"}, "f"), coherent_state({a, d})});
        const StateVector want = tensor({atom_basis_state("A", {"f", "g"}, "f"), coherent_state({-a, d})});
        parity = std::max(parity, (apply(dispersive_fg(std::numbers::pi, d), in).amplitudes() - want.amplitudes())
                                      .cwiseAbs()
                                      .maxCoeff());
    }
    r.add("dispersive_parity", parity, 1e-12);
    return r.take();
}

std::vector<CheckResult> verify_measurement() {
    Recorder r("measurement");
    std::mt19937_64 rng(kSeed + 2);
    const SpaceLayout lay({atom("A", {"f", "g"}), field("C", 3), atom("B", {"x", "y", "z"})});
    double complete = 0.0, norm = 0.0;
    for (int t = 0; t < kTrials; ++t) {
        const StateVector s = random_state(lay, rng);
        for (std::size_t sub : {0u, 2u}) {
            double sum = 0.0;
            for (const Branch& b : branches(s, sub)) {
                sum += b.probability;
                if (b.post_state) {
                    norm = std::max(norm, std::abs(b.post_state->norm() - 1.0));
                }
            }
            complete = std::max(complete, std::abs(sum - 1.0));
        }
    }
    r.add("branch_completeness", complete, 1e-12);
    r.add("post_state_normalized", norm, 1e-12);
    return r.take();
}

double no_signalling(int scheme, std::mt19937_64& rng) {
    double worst = 0.0;
    std::optional<DensityMatrix> reference;
    for (int t = 0; t < 5; ++t) {
        const auto [x, y] = random_unit_pair(rng);
        StateVector s = scheme == 1 ? scheme1_alice_entangle(scheme1_bell_prep(1.0, 26).state,
                                                             scheme1_payload_prep(x, y, 0.3, "f", 1.0, 26).state)
                                    : scheme2_alice_entangle(scheme2_bell_prep().state, scheme2_payload_prep(x, y).state);
        const DensityMatrix bob = partial_trace(s, {0});
        if (reference) {
            worst = std::max(worst, trace_distance(bob, *reference));
        } else {
            reference = bob;
        }
    }
    return worst;
}

std::vector<CheckResult> verify_protocols() {
    Recorder r("protocols");
    std::mt19937_64 rng(kSeed + 3);

    double p8 = 0.0, form2 = 0.0, corr2 = 0.0, succ2 = 0.0, total2 = 0.0;
    for (int t = 0; t < 20; ++t) {
        SchemeConfig c;
        c.scheme = 2;
        std::tie(c.c_e, c.c_f) = random_unit_pair(rng);
        const TeleportRun run = scheme2_run(c);
        double total = 0.0, succ = 0.0;
        for (const TeleportBranch& b : run.branches) {
            total += b.probability;
            p8 = std::max(p8, std::abs(b.probability - 0.125));
            form2 = std::max(form2, 1.0 - b.form_fidelity.value_or(0.0));
            if (b.verdict != Verdict::kFailure) {
                succ += b.probability;
                corr2 = std::max(corr2, 1.0 - b.corrected_fidelity.value_or(0.0));
            }
        }
        total2 = std::max(total2, std::abs(total - 1.0));
        succ2 = std::max(succ2, std::abs(succ - 0.5));
    }
    r.add("scheme2_total_probability", total2, 1e-10);
    r.add("scheme2_uniform_paths", p8, 1e-10);
    r.add("scheme2_outcome_table", form2, 1e-12);
    r.add("scheme2_corrected_fidelity", corr2, 1e-12);
    r.add("scheme2_success_half", succ2, 1e-10);

    {
        SchemeConfig c;
        c.scheme = 1;
        c.c_f = 0.8;
        c.c_g = 0.6;
        const TeleportRun run = scheme1_run(c);
        double total = 0.0, succ = 0.0, disc = 0.0, form = 0.0, corr = 0.0;
        for (const TeleportBranch& b : run.branches) {
            total += b.probability;
            if (b.form == BobForm::kUndetermined) {
                continue;
            }
            disc += b.probability;
            form = std::max(form, 1.0 - b.form_fidelity.value_or(0.0));
            if (b.verdict != Verdict::kFailure) {
                succ += b.probability;
                corr = std::max(corr, 1.0 - b.corrected_fidelity.value_or(0.0));
            }
        }
        r.add("scheme1_total_probability", std::abs(total - 1.0), 1e-10);
        r.add("scheme1_outcome_table", form, 1e-8);
        r.add("scheme1_corrected_fidelity", corr, 1e-8);
        r.add("scheme1_conditional_success_half", std::abs(succ / disc - 0.5), 1e-9);
    }

    double bell = 0.0;
    const CatFrame cats = CatFrame::coherent(1.0, 26, "C1");
    const CatFrame fock = CatFrame::fock01("C1");
    for (BellKind k : {BellKind::kPhiPlus, BellKind::kPhiMinus, BellKind::kPsiPlus, BellKind::kPsiMinus}) {
        bell = std::max(bell, 1.0 - fidelity(scheme1_bell_prep(1.0, 26, k).state, cats.bell(k)));
        bell = std::max(bell, 1.0 - fidelity(scheme2_bell_prep(k).state, fock.bell(k)));
    }
    r.add("bell_prep_matches_frame", bell, 1e-10);

    double c1 = 0.0, c1p = 0.0, c2 = 0.0, purity = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto [x, y] = random_unit_pair(rng);
        const PayloadSpec p{x, Complex(0, y)};
        const Scheme1Correction f1 = scheme1_correct(cats.ket(BobForm::kSignFlipped, p));
        c1 = std::max(c1, 1.0 - fidelity(f1.corrected, cats.ket(BobForm::kPayload, p)));
        c1p = std::max(c1p, std::abs(f1.success_probability - 0.5));
        const Scheme2Correction f2 = scheme2_correct(fock.ket(BobForm::kSwapped, p));
        c2 = std::max(c2, 1.0 - fidelity(f2.field, fock.ket(BobForm::kPayload, p)));
        purity = std::max(purity, 1.0 - f2.atom_purity);
    }
    r.add("scheme1_correction_fidelity", c1, 1e-10);
    r.add("scheme1_correction_probability", c1p, 1e-10);
    r.add("scheme2_correction_swap", c2, 1e-12);
    r.add("scheme2_correction_atom_pure", purity, 1e-12);

    r.add("scheme1_no_signalling", no_signalling(1, rng), 1e-10);
    r.add("scheme2_no_signalling", no_signalling(2, rng), 1e-10);
    return r.take();
}

std::vector<CheckResult> verify_cli() {
    Recorder r("cli");
    ExperimentConfig cfg = load_config(R"({"scheme": 2, "payload": {"c_e": 0.6, "c_f": 0.8}})");
    const TeleportReport rep = run(cfg);
    const std::string text = to_json_text(rep);
    r.add("report_round_trip", report_from_json(text) == rep ? 0.0 : 1.0, 0.0);
    const Aggregates again = aggregate(rep.branches);
    r.add("aggregates_recomputable",
          std::max({std::abs(again.success_probability - rep.aggregates.success_probability),
                    std::abs(again.total_probability - rep.aggregates.total_probability),
                    std::abs(again.mean_corrected_fidelity - rep.aggregates.mean_corrected_fidelity)}),
          1e-12);
    cfg.mode = RunMode::kSample;
    cfg.shots = 500;
    cfg.seed = 7;
    r.add("sample_deterministic", to_json_text(run(cfg)) == to_json_text(run(cfg)) ? 0.0 : 1.0, 0.0);
    return r.take();
}

}  // namespace

Operator jc_oracle(double gt, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix h = Matrix::Zero(2 * d, 2 * d);
    for (Eigen::Index n = 0; n + 1 < d; ++n) {
        // a^dag s-: |upper, n> -> sqrt(n+1) |lower, n+1>
        const double c = gt * std::sqrt(static_cast<double>(n + 1));
        h(n + 1, d + n) = c;
        h(d + n, n + 1) = c;
    }
    const Matrix u = (Complex(0, -1) * h).exp();
    return Operator(u, {2, dim});
}

Operator displacement_oracle(double alpha, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix g = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n + 1 < d; ++n) {
        const double c = alpha * std::sqrt(static_cast<double>(n + 1));
        g(n + 1, n) = c;
        g(n, n + 1) = -c;
    }
    const Matrix u = g.exp();
    return Operator(u, {dim});
}

std::vector<std::string> verify_modules() { return {"hilbert", "operators", "measurement", "protocols", "cli"}; }

std::vector<CheckResult> verify(std::string_view module, const VerifyHooks& hooks) {
    const auto names = verify_modules();
    if (!module.empty() && std::find(names.begin(), names.end(), module) == names.end()) {
        throw std::invalid_argument("unknown module '" + std::string(module) + "'");
    }
    std::vector<CheckResult> out;
    auto want = [&](std::string_view m) { return module.empty() || module == m; };
    auto append = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
    if (want("hilbert")) append(verify_hilbert());
    if (want("operators")) append(verify_operators(hooks));
    if (want("measurement")) append(verify_measurement());
    if (want("protocols")) append(verify_protocols());
    if (want("cli")) append(verify_cli());
    return out;
}

}  // namespace cqed
