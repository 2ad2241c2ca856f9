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

#include "cqed/protocols.h"

#include <array>
#include <cmath>
#include <utility>

#include "cqed/errors.h"
#include "cqed/operators.h"

namespace cqed {

namespace {

constexpr double kPurityTolerance = 1e-10;
constexpr double kPayloadNormTolerance = 1e-9;
constexpr double kDisplacementTail = 1e-12;

const std::vector<std::string> kFG = {"f", "g"};
const std::vector<std::string> kFE = {"f", "e"};
const std::vector<std::string> kBA = {"b", "a"};

Complex cis(double x) { return std::polar(1.0, x); }

bool is_phi(BellKind k) { return k == BellKind::kPhiPlus || k == BellKind::kPhiMinus; }
bool is_plus(BellKind k) { return k == BellKind::kPhiPlus || k == BellKind::kPsiPlus; }

PayloadSpec normalized_spec(Complex zeta, Complex xi) {
    const double n = std::sqrt(std::norm(zeta) + std::norm(xi));
    if (n == 0.0) {
        throw DegenerateAmplitudeError("payload has zero norm");
    }
    return {zeta / n, xi / n};
}

const std::string& label_of(std::span<const Outcome> path, std::string_view subsystem) {
    for (const auto& o : path) {
        if (o.subsystem == subsystem) {
            return o.label;
        }
    }
    throw PathError("path has no outcome for " + std::string(subsystem));
}

void finish_branch(TeleportBranch& br, const DensityMatrix& rho, const StateVector& target, const CatFrame& frame,
                   const PayloadSpec& payload, int scheme) {
    const Classification c = classify(br.path, scheme);
    br.verdict = c.verdict;
    br.form = c.form;
    br.bob = rho;
    if (rho.purity() >= 1.0 - kPurityTolerance) {
        br.bob_state = rho.dominant_state().phase_fixed();
    }
    br.raw_fidelity = fidelity(rho, target);
    if (c.form != BobForm::kUndetermined) {
        br.form_fidelity = fidelity(rho, frame.ket(c.form, payload));
    }
    br.corrected_fidelity = br.raw_fidelity;
    if (c.verdict == Verdict::kCorrectable && br.bob_state) {
        if (scheme == 1) {
            const Scheme1Correction fix = scheme1_correct(*br.bob_state);
            br.corrected_fidelity = fidelity(fix.corrected, target);
            br.correction_probability = fix.success_probability;
        } else {
            const Scheme2Correction fix = scheme2_correct(*br.bob_state);
            br.corrected_fidelity = fidelity(fix.field, target);
        }
    }
}

TeleportBranch negligible_leaf(std::vector<Outcome> path, double probability) {
    TeleportBranch br;
    br.path = std::move(path);
    br.probability = probability;
    return br;
}

}  // namespace

std::string_view to_string(BellKind k) {
    switch (k) {
        case BellKind::kPhiPlus: return "Phi+";
        case BellKind::kPhiMinus: return "Phi-";
        case BellKind::kPsiPlus: return "Psi+";
        case BellKind::kPsiMinus: return "Psi-";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::kIdentity: return "identity";
        case Verdict::kCorrectable: return "correctable";
        case Verdict::kFailure: return "failure";
    }
    return "?";
}

std::string_view to_string(BobForm f) {
    switch (f) {
        case BobForm::kPayload: return "zeta|+> + xi|->";
        case BobForm::kSignFlipped: return "zeta|+> - xi|->";
        case BobForm::kSwapped: return "zeta|-> + xi|+>";
        case BobForm::kSwappedSignFlipped: return "zeta|-> - xi|+>";
        case BobForm::kUndetermined: return "undetermined";
    }
    return "?";
}

BellKind bell_kind_from_string(std::string_view s) {
    for (BellKind k : {BellKind::kPhiPlus, BellKind::kPhiMinus, BellKind::kPsiPlus, BellKind::kPsiMinus}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw ConfigError("unknown Bell state '" + std::string(s) + "'");
}

// ---- CatFrame ------------------------------------------------------------

CatFrame CatFrame::coherent(double alpha, std::size_t dim, std::string name) {
    const StateVector a = coherent_state({alpha, dim}, name);
    const StateVector b = coherent_state({-alpha, dim}, name);
    const double r = 1.0 / std::sqrt(2.0);
    return CatFrame(r * (a + b), r * (a - b));
}

CatFrame CatFrame::fock01(std::string name) {
    const StateVector z = fock_state(0, 2, name);
    const StateVector o = fock_state(1, 2, name);
    const double r = 1.0 / std::sqrt(2.0);
    return CatFrame(r * (z + o), r * (z - o));
}

StateVector CatFrame::ket(Complex zeta, Complex xi) const { return (zeta * plus_ + xi * minus_).normalized(); }

StateVector CatFrame::ket(BobForm form, const PayloadSpec& p) const {
    switch (form) {
        case BobForm::kPayload: return ket(p.zeta, p.xi);
        case BobForm::kSignFlipped: return ket(p.zeta, -p.xi);
        case BobForm::kSwapped: return ket(p.xi, p.zeta);
        case BobForm::kSwappedSignFlipped: return ket(-p.xi, p.zeta);
        case BobForm::kUndetermined: break;
    }
    throw PathError("no closed form for an undetermined branch");
}

StateVector CatFrame::bell(BellKind kind, std::string a, std::string b) const {
    auto rename = [](const StateVector& s, const std::string& name) {
        return StateVector(SpaceLayout({field(name, s.layout()[0].dim())}), s.amplitudes());
    };
    const StateVector pa = rename(plus_, a), ma = rename(minus_, a);
    const StateVector pb = rename(plus_, b), mb = rename(minus_, b);
    const double sign = is_plus(kind) ? 1.0 : -1.0;
    if (is_phi(kind)) {
        return (tensor({pa, pb}) + Complex(sign) * tensor({ma, mb})).normalized();
    }
    return (tensor({pa, mb}) + Complex(sign) * tensor({ma, pb})).normalized();
}

// ---- SchemeConfig --------------------------------------------------------

std::size_t SchemeConfig::resolved_dim() const {
    if (scheme == 2) {
        return 2;
    }
    return field_dim != 0 ? field_dim : min_truncation(2.0 * alpha, kDisplacementTail);
}

void SchemeConfig::validate() const {
    if (scheme != 1 && scheme != 2) {
        throw ConfigError("scheme must be 1 or 2");
    }
    if (!std::isfinite(detection_gt)) {
        throw ConfigError("detection_gt must be finite");
    }
    if (scheme == 1) {
        if (!std::isfinite(alpha) || alpha <= 0.0) {
            throw ConfigError("alpha must be positive");
        }
        if (field_dim == 1) {
            throw ConfigError("field_dim must be at least 2");
        }
        if (field_dim != 0 && poisson_tail(2.0 * alpha, field_dim) >= kDisplacementTail) {
            throw ConfigError("field_dim " + std::to_string(field_dim) + " cannot hold amplitude 2*alpha; need " +
                              std::to_string(min_truncation(2.0 * alpha, kDisplacementTail)));
        }
        if (std::abs(c_f * c_f + c_g * c_g - 1.0) > kPayloadNormTolerance) {
            throw ConfigError("payload c_f^2 + c_g^2 must equal 1");
        }
        if (!std::isfinite(theta)) {
            throw ConfigError("theta must be finite");
        }
        if (prep_detect != "f" && prep_detect != "g") {
            throw ConfigError("prep_detect must be \"f\" or \"g\"");
        }
    } else {
        if (field_dim != 0 && field_dim != 2) {
            throw ConfigError("scheme 2 fields hold at most one photon; field_dim must be 2");
        }
        if (std::abs(c_e * c_e + c_f * c_f - 1.0) > kPayloadNormTolerance) {
            throw ConfigError("payload c_e^2 + c_f^2 must equal 1");
        }
    }
    if (bell_kind != BellKind::kPhiPlus) {
        throw ConfigError("teleportation runs use the Phi+ channel");
    }
}

// ---- Scheme 1 ------------------------------------------------------------

Prepared scheme1_bell_prep(double alpha, std::size_t dim, BellKind kind) {
    const double c2 = is_plus(kind) ? -alpha : alpha;
    StateVector s = tensor({apply(ramsey(x_to_z()), atom_basis_state("A1", kFG, "f")),
                            coherent_state({-alpha, dim}, "C1"), coherent_state({c2, dim}, "C2")});
    const Operator d = dispersive_fg(std::numbers::pi, dim);
    s = apply(d.on({0, 1}), s);
    s = apply(d.on({0, 2}), s);
    s = apply(ramsey(x_to_z()), s);
    auto [p, post] = postselect(s, 0, is_phi(kind) ? "f" : "g");
    return {post.discard(0), p};
}

PayloadPrep scheme1_payload_prep(Complex c_f, Complex c_g, double theta, std::string_view detect, double alpha,
                                 std::size_t dim) {
    StateVector s = tensor({apply(ramsey(k1(c_f, c_g)), atom_basis_state("B", kFG, "g")),
                            coherent_state({-alpha, dim}, "C3")});
    s = apply(dispersive_fg(std::numbers::pi, dim), s);
    s = apply(ramsey(k2(theta)), s);
    auto [p, post] = postselect(s, 0, detect);
    // C3 = u|a> + v|-a>, i.e. zeta = (u+v)/sqrt2, xi = (u-v)/sqrt2 over (|a> +- |-a>)/sqrt2.
    Complex u, v;
    if (detect == "f") {
        u = c_f;
        v = Complex(0, -1) * cis(theta) * c_g;
    } else {
        u = Complex(0, -1) * cis(-theta) * c_f;
        v = c_g;
    }
    const double r = 1.0 / std::sqrt(2.0);
    return {normalized_spec(r * (u + v), r * (u - v)), post.discard(0), p};
}

StateVector scheme1_alice_entangle(const StateVector& bell, const StateVector& payload) {
    const std::size_t dim = payload.layout()[0].dim();
    StateVector s = tensor({bell, payload, atom_basis_state("A2", kFG, "f")});
    s = apply(ramsey(x_to_z(), 3), s);
    const Operator d = dispersive_fg(std::numbers::pi, dim);
    s = apply(d.on({3, 1}), s);
    s = apply(d.on({3, 2}), s);
    return apply(ramsey(x_to_z(), 3), s);
}

TeleportRun scheme1_run(const SchemeConfig& cfg) {
    cfg.validate();
    if (cfg.scheme != 1) {
        throw ConfigError("scheme1_run needs scheme = 1");
    }
    const std::size_t dim = cfg.resolved_dim();
    const double alpha = cfg.alpha;
    Prepared bell = scheme1_bell_prep(alpha, dim, cfg.bell_kind);
    PayloadPrep pay = scheme1_payload_prep(cfg.c_f, cfg.c_g, cfg.theta, cfg.prep_detect, alpha, dim);
    const CatFrame frame = CatFrame::coherent(alpha, dim, "C1");

    TeleportRun run{cfg, dim, pay.spec, pay.state, pay.probability, bell.state, bell.probability, {}};
    const StateVector entangled = scheme1_alice_entangle(bell.state, pay.state);
    const Operator jc = jc_unitary(cfg.detection_gt, dim);
    const std::vector<std::string> ab = {"a", "b"};
    constexpr std::array<std::pair<const char*, std::array<double, 2>>, 4> kInjections = {{
        {"++", {1.0, 1.0}},
        {"+-", {1.0, -1.0}},
        {"-+", {-1.0, 1.0}},
        {"--", {-1.0, -1.0}},
    }};

    for (const Branch& b2 : branches(entangled, 3)) {
        std::vector<Outcome> path2 = b2.labels;
        if (b2.negligible()) {
            run.branches.push_back(negligible_leaf(path2, b2.probability));
            continue;
        }
        const StateVector cavities = b2.post_state->discard(3);
        for (const auto& [label, signs] : kInjections) {
            std::vector<Outcome> path_inj = path2;
            path_inj.push_back({"inject", label});
            const double p_inj = b2.probability * 0.25;
            StateVector s = apply(displacement(signs[0] * alpha, dim, alpha).on({1}), cavities);
            s = apply(displacement(signs[1] * alpha, dim, alpha).on({2}), s);
            s = tensor({s, atom_basis_state("A3", kBA, "b"), atom_basis_state("A4", kBA, "b")});
            s = apply(jc.on({3, 1}), s);
            s = apply(jc.on({4, 2}), s);
            for (const Branch& b3 : branches(s, 3, ab)) {
                std::vector<Outcome> path3 = path_inj;
                path3.insert(path3.end(), b3.labels.begin(), b3.labels.end());
                if (b3.negligible()) {
                    run.branches.push_back(negligible_leaf(path3, p_inj * b3.probability));
                    continue;
                }
                for (const Branch& b4 : branches(*b3.post_state, 4, ab)) {
                    TeleportBranch br;
                    br.path = path3;
                    br.path.insert(br.path.end(), b4.labels.begin(), b4.labels.end());
                    br.probability = p_inj * b3.probability * b4.probability;
                    if (!b4.negligible()) {
                        finish_branch(br, partial_trace(*b4.post_state, {0}), pay.state, frame, pay.spec, 1);
                    } else {
                        const Classification c = classify(br.path, 1);
                        br.verdict = c.verdict;
                        br.form = c.form;
                    }
                    run.branches.push_back(std::move(br));
                }
            }
        }
    }
    return run;
}

Scheme1Correction scheme1_correct(const StateVector& bob) {
    if (bob.layout().size() != 1 || bob.layout()[0].is_atom()) {
        throw LayoutMismatch("scheme1_correct expects a single field mode");
    }
    const std::size_t dim = bob.layout()[0].dim();
    StateVector s = tensor({apply(ramsey(x_to_z()), atom_basis_state("A5", kFG, "f")), bob.normalized()});
    s = apply(dispersive_fg(std::numbers::pi, dim), s);
    auto [pf, on_f] = postselect(s, 0, "f");
    auto [pg, on_g] = postselect(s, 0, "g");
    (void)pg;
    return {pf, on_f.discard(0), on_g.discard(0)};
}

// ---- Scheme 2 ------------------------------------------------------------

Prepared scheme2_cavity_prep(int sign, std::string name) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("cavity sign must be +1 or -1");
    }
    const double r = 1.0 / std::sqrt(2.0);
    StateVector s = tensor({atom_state("A0", kFE, {r, Complex(0, sign * r)}), fock_state(0, 2, std::move(name))});
    s = apply(jc_unitary(std::numbers::pi / 2, 2), s);
    auto [p, post] = postselect(s, 0, "f");
    return {post.discard(0), p};
}

Prepared scheme2_bell_prep(BellKind kind) {
    const Prepared c1 = scheme2_cavity_prep(1, "C1");
    const Prepared c2 = scheme2_cavity_prep(is_phi(kind) ? 1 : -1, "C2");
    StateVector s = tensor({apply(ramsey(x_to_z()), atom_basis_state("A1", kFG, "f")), c1.state, c2.state});
    const Operator d = dispersive_fg(std::numbers::pi, 2);
    s = apply(d.on({0, 1}), s);
    s = apply(d.on({0, 2}), s);
    s = apply(ramsey(k_unravel()), s);
    auto [p, post] = postselect(s, 0, is_plus(kind) ? "g" : "f");
    return {post.discard(0), p * c1.probability * c2.probability};
}

PayloadPrep scheme2_payload_prep(Complex c_e, Complex c_f) {
    StateVector s = tensor({apply(ramsey(k1_fe(c_e, c_f)), atom_basis_state("B", kFE, "f")), fock_state(0, 2, "C3")});
    s = apply(jc_unitary(std::numbers::pi / 2, 2), s);
    auto [p, post] = postselect(s, 0, "f");
    // C3 = c_f|0> - i c_e|1>.
    const double r = 1.0 / std::sqrt(2.0);
    const Complex mi(0, -1);
    return {normalized_spec(r * (c_f + mi * c_e), r * (c_f - mi * c_e)), post.discard(0), p};
}

StateVector scheme2_alice_entangle(const StateVector& bell, const StateVector& payload) {
    StateVector s = tensor({bell, payload, atom_basis_state("A2", kFG, "f")});
    s = apply(ramsey(x_to_z(), 3), s);
    const Operator d = dispersive_fg(std::numbers::pi, 2);
    s = apply(d.on({3, 1}), s);
    s = apply(d.on({3, 2}), s);
    return apply(ramsey(k_unravel(), 3), s);
}

TeleportRun scheme2_run(const SchemeConfig& cfg) {
    cfg.validate();
    if (cfg.scheme != 2) {
        throw ConfigError("scheme2_run needs scheme = 2");
    }
    Prepared bell = scheme2_bell_prep(cfg.bell_kind);
    PayloadPrep pay = scheme2_payload_prep(cfg.c_e, cfg.c_f);
    const CatFrame frame = CatFrame::fock01("C1");

    TeleportRun run{cfg, 2, pay.spec, pay.state, pay.probability, bell.state, bell.probability, {}};
    const StateVector entangled = scheme2_alice_entangle(bell.state, pay.state);
    const Operator jc = jc_unitary(cfg.detection_gt, 2);
    const std::vector<std::string> ef = {"e", "f"};

    for (const Branch& b2 : branches(entangled, 3)) {
        if (b2.negligible()) {
            run.branches.push_back(negligible_leaf(b2.labels, b2.probability));
            continue;
        }
        StateVector s = tensor({b2.post_state->discard(3), atom_basis_state("A3", kFE, "f"),
                                atom_basis_state("A4", kFE, "f")});
        s = apply(jc.on({3, 1}), s);
        s = apply(jc.on({4, 2}), s);
        s = apply(ramsey(k_unravel(), 3), s);
        s = apply(ramsey(k_unravel(), 4), s);
        for (const Branch& b3 : branches(s, 3, ef)) {
            std::vector<Outcome> path3 = b2.labels;
            path3.insert(path3.end(), b3.labels.begin(), b3.labels.end());
            if (b3.negligible()) {
                run.branches.push_back(negligible_leaf(path3, b2.probability * b3.probability));
                continue;
            }
            for (const Branch& b4 : branches(*b3.post_state, 4, ef)) {
                TeleportBranch br;
                br.path = path3;
                br.path.insert(br.path.end(), b4.labels.begin(), b4.labels.end());
                br.probability = b2.probability * b3.probability * b4.probability;
                if (!b4.negligible()) {
                    finish_branch(br, partial_trace(*b4.post_state, {0}), pay.state, frame, pay.spec, 2);
                } else {
                    const Classification c = classify(br.path, 2);
                    br.verdict = c.verdict;
                    br.form = c.form;
                }
                run.branches.push_back(std::move(br));
            }
        }
    }
    return run;
}

Scheme2Correction scheme2_correct(const StateVector& bob) {
    if (bob.layout().size() != 1 || bob.layout()[0].is_atom() || bob.layout()[0].dim() != 2) {
        throw LayoutMismatch("scheme2_correct expects a two-level field mode");
    }
    StateVector s = tensor({apply(ramsey(k_unravel()), atom_basis_state("A5", kFE, "f")), bob.normalized()});
    s = apply(dispersive_ef(std::numbers::pi, 2), s);
    const DensityMatrix atom_rho = partial_trace(s, {0});
    const DensityMatrix field_rho = partial_trace(s, {1});
    return {field_rho.dominant_state(), s, atom_rho.purity()};
}

TeleportRun run_scheme(const SchemeConfig& cfg) { return cfg.scheme == 1 ? scheme1_run(cfg) : scheme2_run(cfg); }

// ---- Classification ------------------------------------------------------

Classification classify(std::span<const Outcome> path, int scheme) {
    if (scheme == 1) {
        const std::string& a2 = label_of(path, "A2");
        const std::string& inj = label_of(path, "inject");
        const std::string& a3 = label_of(path, "A3");
        const std::string& a4 = label_of(path, "A4");
        if ((a2 != "f" && a2 != "g") || inj.size() != 2 || (a3 != "a" && a3 != "b") || (a4 != "a" && a4 != "b")) {
            throw PathError("unrecognized scheme 1 path");
        }
        if (a3 != "a" || a4 != "a") {
            return {Verdict::kFailure, BobForm::kUndetermined};
        }
        const bool same = inj[0] == inj[1];
        if (a2 == "f") {
            return same ? Classification{Verdict::kIdentity, BobForm::kPayload}
                        : Classification{Verdict::kCorrectable, BobForm::kSignFlipped};
        }
        return {Verdict::kFailure, same ? BobForm::kSwapped : BobForm::kSwappedSignFlipped};
    }
    if (scheme == 2) {
        const std::string& a2 = label_of(path, "A2");
        const std::string& a3 = label_of(path, "A3");
        const std::string& a4 = label_of(path, "A4");
        if ((a2 != "f" && a2 != "g") || (a3 != "e" && a3 != "f") || (a4 != "e" && a4 != "f")) {
            throw PathError("unrecognized scheme 2 path");
        }
        const bool mixed = a3 != a4;
        if (a2 == "g") {
            return mixed ? Classification{Verdict::kIdentity, BobForm::kPayload}
                         : Classification{Verdict::kCorrectable, BobForm::kSwapped};
        }
        return {Verdict::kFailure, mixed ? BobForm::kSwappedSignFlipped : BobForm::kSignFlipped};
    }
    throw PathError("scheme must be 1 or 2");
}

}  // namespace cqed
