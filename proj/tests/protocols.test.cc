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

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cqed/errors.h"

using namespace cqed;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kDim = 26;  // min_truncation(2, 1e-12)

const BellKind kKinds[] = {BellKind::kPhiPlus, BellKind::kPhiMinus, BellKind::kPsiPlus, BellKind::kPsiMinus};

std::string key(const TeleportBranch& b) {
    std::string k;
    for (const Outcome& o : b.path) k += o.subsystem + "=" + o.label + " ";
    return k;
}

double probability_of(const TeleportRun& run, const std::string& sub, const std::string& label) {
    double p = 0;
    for (const TeleportBranch& b : run.branches)
        for (const Outcome& o : b.path)
            if (o.subsystem == sub && o.label == label) p += b.probability;
    return p;
}

SchemeConfig scheme1(double c_f = 0.8, double c_g = 0.6, double theta = 0.0) {
    SchemeConfig c;
    c.scheme = 1;
    c.c_f = c_f;
    c.c_g = c_g;
    c.theta = theta;
    return c;
}

SchemeConfig scheme2(double c_e = 0.6, double c_f = 0.8) {
    SchemeConfig c;
    c.scheme = 2;
    c.c_e = c_e;
    c.c_f = c_f;
    return c;
}

StateVector two_mode(const StateVector& a, const StateVector& b) {
    return tensor({StateVector(SpaceLayout({field("C1", a.size())}), a.amplitudes()),
                   StateVector(SpaceLayout({field("C2", b.size())}), b.amplitudes())});
}

}  // namespace

// ---- frame -----------------------------------------------------------------

TEST(frame, coherent_pair_orthogonal) {
    const CatFrame f = CatFrame::coherent(1.0, kDim);
    EXPECT_LT(std::abs(inner(f.plus(), f.minus())), 1e-15);
    EXPECT_NEAR(f.plus().squared_norm(), 1 + std::exp(-2.0), 1e-14);
    EXPECT_NEAR(f.minus().squared_norm(), 1 - std::exp(-2.0), 1e-14);
    // |+> + |-> is sqrt2 |alpha>.
    EXPECT_GT(fidelity(f.ket(1, 1), coherent_state({1.0, kDim})), 1 - 1e-15);
    EXPECT_GT(fidelity(f.ket(1, -1), coherent_state({-1.0, kDim})), 1 - 1e-15);
}

// ---- scheme 1 preparation --------------------------------------------------

TEST(scheme1_bell, matches_frame_bell_states) {
    const CatFrame f = CatFrame::coherent(1.0, kDim, "C1");
    for (BellKind k : kKinds) {
        EXPECT_GT(fidelity(scheme1_bell_prep(1.0, kDim, k).state, f.bell(k)), 1 - 1e-10) << to_string(k);
    }
}

TEST(scheme1_bell, phi_plus_in_coherent_basis) {
    const StateVector p = coherent_state({1.0, kDim}), m = coherent_state({-1.0, kDim});
    const StateVector want = (two_mode(p, p) + two_mode(m, m)).normalized();
    EXPECT_GT(fidelity(scheme1_bell_prep(1.0, kDim).state, want), 1 - 1e-12);
}

TEST(scheme1_bell, exact_cat_overlap_oracle) {
    // Against Bell states of exactly normalized cats the overlap is 1 / (1 + e^{-4a^2}).
    for (double a : {0.7, 1.0, 1.5}) {
        const std::size_t d = min_truncation(a, 1e-16) + 2;
        const StateVector e = cat_state({a, d}, Parity::kEven), o = cat_state({a, d}, Parity::kOdd);
        const StateVector exact = (two_mode(e, e) + two_mode(o, o)).normalized();
        EXPECT_NEAR(fidelity(scheme1_bell_prep(a, d).state, exact), 1 / (1 + std::exp(-4 * a * a)), 1e-12) << a;
    }
}

TEST(scheme1_bell, detection_probability) {
    // P(f1) = (1 + e^{-4a^2}) / 2, which is 1/2 only asymptotically.
    for (double a : {0.5, 1.0, 2.0}) {
        const std::size_t d = min_truncation(a, 1e-16) + 2;
        EXPECT_NEAR(scheme1_bell_prep(a, d).probability, (1 + std::exp(-4 * a * a)) / 2, 1e-12) << a;
        EXPECT_NEAR(scheme1_bell_prep(a, d, BellKind::kPsiPlus).probability, (1 - std::exp(-4 * a * a)) / 2, 1e-12);
    }
    EXPECT_NEAR(scheme1_bell_prep(3.0, 87).probability, 0.5, 1e-10);
}

TEST(scheme1_payload, basis_examples) {
    const double r = 1 / std::sqrt(2.0);
    PayloadPrep p = scheme1_payload_prep(1, 0, 0, "f", 1.0, kDim);
    EXPECT_NEAR(std::abs(p.spec.zeta - r), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.spec.xi - r), 0, 1e-15);
    EXPECT_GT(fidelity(p.state, coherent_state({1.0, kDim}, "C3")), 1 - 1e-14);

    p = scheme1_payload_prep(0, 1, 0, "f", 1.0, kDim);
    EXPECT_NEAR(std::abs(p.spec.zeta - Complex(0, -r)), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.spec.xi - Complex(0, r)), 0, 1e-15);
    EXPECT_GT(fidelity(p.state, coherent_state({-1.0, kDim}, "C3")), 1 - 1e-14);

    // Detecting g after loading c_f = 1 leaves zeta = xi, i.e. |alpha> up to phase.
    p = scheme1_payload_prep(1, 0, 0, "g", 1.0, kDim);
    EXPECT_NEAR(std::abs(p.spec.zeta - Complex(0, -r)), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.spec.xi - Complex(0, -r)), 0, 1e-15);
    EXPECT_GT(fidelity(p.state, coherent_state({1.0, kDim}, "C3")), 1 - 1e-14);
}

TEST(scheme1_payload, state_matches_coefficients) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    const CatFrame f = CatFrame::coherent(1.0, kDim, "C3");
    for (int t = 0; t < 50; ++t) {
        const double w = ang(rng), th = ang(rng);
        for (const char* det : {"f", "g"}) {
            const PayloadPrep p = scheme1_payload_prep(std::cos(w), std::sin(w), th, det, 1.0, kDim);
            EXPECT_NEAR(std::norm(p.spec.zeta) + std::norm(p.spec.xi), 1.0, 1e-12);
            EXPECT_GT(fidelity(p.state, f.ket(p.spec.zeta, p.spec.xi)), 1 - 1e-10);
        }
    }
}

// ---- scheme 1 run ----------------------------------------------------------

TEST(scheme1_run, outcome_table) {
    const TeleportRun run = scheme1_run(scheme1());
    ASSERT_EQ(run.field_dim, kDim);
    ASSERT_EQ(run.branches.size(), 32u);
    const CatFrame f = CatFrame::coherent(1.0, kDim, "C1");
    double total = 0, success = 0, disc = 0;
    int identity = 0, correctable = 0;
    for (const TeleportBranch& b : run.branches) {
        total += b.probability;
        ASSERT_TRUE(b.bob);
        if (b.form == BobForm::kUndetermined) {
            EXPECT_EQ(b.verdict, Verdict::kFailure);
            continue;
        }
        disc += b.probability;
        EXPECT_GT(fidelity(*b.bob, f.ket(b.form, run.payload)), 1 - 1e-8) << key(b);
        if (b.verdict == Verdict::kIdentity) {
            ++identity;
            EXPECT_GT(*b.raw_fidelity, 1 - 1e-8);
        }
        if (b.verdict == Verdict::kCorrectable) {
            ++correctable;
            EXPECT_EQ(b.form, BobForm::kSignFlipped);
            EXPECT_GT(*b.corrected_fidelity, 1 - 1e-8);
            EXPECT_NEAR(b.correction_probability, 0.5, 1e-10);
        }
        if (b.verdict != Verdict::kFailure) success += b.probability;
    }
    EXPECT_EQ(identity, 2);
    EXPECT_EQ(correctable, 2);
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_NEAR(success / disc, 0.5, 1e-9);
}

TEST(scheme1_run, conditional_success_oracle) {
    // With C3 = u|a> + v|-a>, successes over discriminated events give
    // 1/2 + Re(u* v) e^{-2a^2} / (|u|^2 + |v|^2). The default payload has Re(u* v) = 0.
    for (double th : {0.0, kPi / 2, 1.1}) {
        const TeleportRun run = scheme1_run(scheme1(0.8, 0.6, th));
        double s = 0, d = 0;
        for (const TeleportBranch& b : run.branches) {
            if (b.form == BobForm::kUndetermined) continue;
            d += b.probability;
            if (b.verdict != Verdict::kFailure) s += b.probability;
        }
        const Complex u = 0.8, v = Complex(0, -1) * std::polar(1.0, th) * 0.6;
        EXPECT_NEAR(s / d, 0.5 + (std::conj(u) * v).real() * std::exp(-2.0), 1e-10) << th;
    }
}

TEST(scheme1_run, a2_detection_probability) {
    // Payload |alpha> alone (v = 0): P(f2) = (1 + 3o^2) / (2 + 2o^2), o = e^{-2a^2}.
    const TeleportRun run = scheme1_run(scheme1(1.0, 0.0));
    const double o = std::exp(-2.0);
    EXPECT_NEAR(probability_of(run, "A2", "f"), (1 + 3 * o * o) / (2 + 2 * o * o), 1e-12);
    EXPECT_NEAR(probability_of(run, "A2", "f") + probability_of(run, "A2", "g"), 1.0, 1e-12);

    // At a = 3 the cats are effectively orthogonal and both outcomes are even.
    const StateVector ent = scheme1_alice_entangle(scheme1_bell_prep(3.0, 87).state,
                                                   scheme1_payload_prep(0.8, 0.6, 0, "f", 3.0, 87).state);
    EXPECT_NEAR(branches(ent, 3)[0].probability, 0.5, 1e-10);
}

TEST(scheme1_run, rejects_bad_configs) {
    SchemeConfig c = scheme1();
    c.field_dim = 20;
    EXPECT_THROW(scheme1_run(c), ConfigError);
    c = scheme1();
    c.bell_kind = BellKind::kPsiPlus;
    EXPECT_THROW(scheme1_run(c), ConfigError);
    c = scheme1(0.8, 0.8);
    EXPECT_THROW(scheme1_run(c), ConfigError);
    EXPECT_THROW(scheme1_run(scheme2()), ConfigError);
}

TEST(scheme1_correct, fixes_sign_half_the_time) {
    const CatFrame f = CatFrame::coherent(1.0, kDim, "C1");
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    for (int t = 0; t < 20; ++t) {
        const double w = ang(rng);
        const PayloadSpec p{std::cos(w), std::polar(std::sin(w), ang(rng))};
        const Scheme1Correction c = scheme1_correct(f.ket(BobForm::kSignFlipped, p));
        EXPECT_NEAR(c.success_probability, 0.5, 1e-10);
        EXPECT_GT(fidelity(c.corrected, f.ket(BobForm::kPayload, p)), 1 - 1e-10);
        EXPECT_GT(fidelity(c.retry, f.ket(BobForm::kSignFlipped, p)), 1 - 1e-10);
        // The same pass flips an already correct state.
        const Scheme1Correction wrong = scheme1_correct(f.ket(BobForm::kPayload, p));
        EXPECT_GT(fidelity(wrong.corrected, f.ket(BobForm::kSignFlipped, p)), 1 - 1e-10);
    }
}

// ---- scheme 2 --------------------------------------------------------------

TEST(scheme2_cavity, prepares_plus_and_minus) {
    const double r = 1 / std::sqrt(2.0);
    for (int sign : {1, -1}) {
        const Prepared p = scheme2_cavity_prep(sign);
        EXPECT_NEAR(p.probability, 1.0, 1e-15);
        EXPECT_NEAR(std::abs(p.state.amplitude(0) - r), 0, 1e-15);
        EXPECT_NEAR(std::abs(p.state.amplitude(1) - sign * r), 0, 1e-15);
        EXPECT_NEAR(p.state.norm(), 1.0, 1e-15);
    }
    EXPECT_THROW(scheme2_cavity_prep(0), std::invalid_argument);
}

TEST(scheme2_bell, all_kinds) {
    const CatFrame f = CatFrame::fock01("C1");
    for (BellKind k : kKinds) {
        const Prepared p = scheme2_bell_prep(k);
        EXPECT_GT(fidelity(p.state, f.bell(k)), 1 - 1e-12) << to_string(k);
        EXPECT_NEAR(p.probability, 0.5, 1e-12);
    }
    // Phi+ in the Fock basis is (|00> + |11>)/sqrt2.
    const StateVector s = scheme2_bell_prep().state;
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s.amplitude(0)), r, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(3)), r, 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude(0) - s.amplitude(3)), 0, 1e-12);
}

TEST(scheme2_payload, examples) {
    const double r = 1 / std::sqrt(2.0);
    PayloadPrep p = scheme2_payload_prep(0, 1);
    EXPECT_NEAR(std::abs(p.state.amplitude(0) - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.spec.zeta - r) + std::abs(p.spec.xi - r), 0, 1e-15);
    p = scheme2_payload_prep(1, 0);
    EXPECT_NEAR(std::abs(p.state.amplitude(1) - Complex(0, -1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.spec.zeta - Complex(0, -r)), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.spec.xi - Complex(0, r)), 0, 1e-15);
    p = scheme2_payload_prep(0.6, 0.8);
    EXPECT_NEAR(p.probability, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(p.state.amplitude(0) - 0.8) + std::abs(p.state.amplitude(1) - Complex(0, -0.6)), 0, 1e-15);
}

TEST(scheme2_run, eight_equal_paths) {
    const TeleportRun run = scheme2_run(scheme2());
    ASSERT_EQ(run.branches.size(), 8u);
    const std::map<std::string, Verdict> table = {
        {"A2=g A3=e A4=f ", Verdict::kIdentity},    {"A2=g A3=f A4=e ", Verdict::kIdentity},
        {"A2=g A3=e A4=e ", Verdict::kCorrectable}, {"A2=g A3=f A4=f ", Verdict::kCorrectable},
        {"A2=f A3=e A4=e ", Verdict::kFailure},     {"A2=f A3=f A4=f ", Verdict::kFailure},
        {"A2=f A3=e A4=f ", Verdict::kFailure},     {"A2=f A3=f A4=e ", Verdict::kFailure},
    };
    const CatFrame f = CatFrame::fock01("C1");
    double success = 0;
    for (const TeleportBranch& b : run.branches) {
        EXPECT_NEAR(b.probability, 0.125, 1e-10);
        EXPECT_EQ(b.verdict, table.at(key(b))) << key(b);
        EXPECT_GT(fidelity(*b.bob, f.ket(b.form, run.payload)), 1 - 1e-12) << key(b);
        if (b.verdict != Verdict::kFailure) {
            success += b.probability;
            EXPECT_GT(*b.corrected_fidelity, 1 - 1e-12);
        }
        if (b.verdict == Verdict::kCorrectable) EXPECT_EQ(b.form, BobForm::kSwapped);
    }
    EXPECT_NEAR(success, 0.5, 1e-10);
}

TEST(scheme2_correct, deterministic_swap) {
    const CatFrame f = CatFrame::fock01("C1");
    const PayloadSpec p{0.6, Complex(0, 0.8)};
    const Scheme2Correction c = scheme2_correct(f.ket(BobForm::kSwapped, p));
    EXPECT_GT(fidelity(c.field, f.ket(BobForm::kPayload, p)), 1 - 1e-12);
    EXPECT_GT(c.atom_purity, 1 - 1e-12);
    const double r = 1 / std::sqrt(2.0);
    const StateVector atom = atom_state("A5", {"f", "e"}, {-r, r});
    EXPECT_GT(fidelity(partial_trace(c.joint, {0}), atom), 1 - 1e-12);
    const Scheme2Correction twice = scheme2_correct(c.field);
    EXPECT_GT(fidelity(twice.field, f.ket(BobForm::kSwapped, p)), 1 - 1e-12);
}

// ---- classification --------------------------------------------------------

TEST(classify, table_lookups) {
    const std::vector<Outcome> id2 = {{"A2", "g"}, {"A3", "e"}, {"A4", "f"}};
    EXPECT_EQ(classify(id2, 2).verdict, Verdict::kIdentity);
    const std::vector<Outcome> fail2 = {{"A2", "f"}, {"A3", "f"}, {"A4", "f"}};
    EXPECT_EQ(classify(fail2, 2).verdict, Verdict::kFailure);
    const std::vector<Outcome> id1 = {{"A2", "f"}, {"inject", "++"}, {"A3", "a"}, {"A4", "a"}};
    EXPECT_EQ(classify(id1, 1).verdict, Verdict::kIdentity);
    const std::vector<Outcome> nodisc = {{"A2", "f"}, {"inject", "++"}, {"A3", "b"}, {"A4", "a"}};
    EXPECT_EQ(classify(nodisc, 1).form, BobForm::kUndetermined);
    const std::vector<Outcome> bad = {{"A2", "x"}, {"A3", "e"}, {"A4", "f"}};
    EXPECT_THROW(classify(bad, 2), PathError);
    EXPECT_THROW(classify(id2, 1), PathError);
    EXPECT_THROW(classify(id2, 3), PathError);
}

// ---- properties ------------------------------------------------------------

TEST(property, payload_independence) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    std::map<std::string, std::pair<Verdict, BobForm>> seen;
    for (int t = 0; t < 20; ++t) {
        const double w = ang(rng);
        const TeleportRun run = scheme2_run(scheme2(std::cos(w), std::sin(w)));
        const CatFrame f = CatFrame::fock01("C1");
        double total = 0;
        for (const TeleportBranch& b : run.branches) {
            total += b.probability;
            auto [it, fresh] = seen.try_emplace(key(b), b.verdict, b.form);
            EXPECT_EQ(it->second, std::make_pair(b.verdict, b.form));
            EXPECT_GT(fidelity(*b.bob, f.ket(b.form, run.payload)), 1 - 1e-12);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
    for (int t = 0; t < 5; ++t) {
        const double w = ang(rng);
        SchemeConfig c = scheme1(std::cos(w), std::sin(w), ang(rng));
        c.prep_detect = t % 2 ? "g" : "f";
        const TeleportRun run = scheme1_run(c);
        const CatFrame f = CatFrame::coherent(1.0, kDim, "C1");
        double total = 0;
        for (const TeleportBranch& b : run.branches) {
            total += b.probability;
            auto [it, fresh] = seen.try_emplace(key(b), b.verdict, b.form);
            EXPECT_EQ(it->second, std::make_pair(b.verdict, b.form));
            if (b.form != BobForm::kUndetermined)
                EXPECT_GT(fidelity(*b.bob, f.ket(b.form, run.payload)), 1 - 1e-8) << key(b);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(property, no_signalling) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    const StateVector bell1 = scheme1_bell_prep(1.0, kDim).state;
    const StateVector bell2 = scheme2_bell_prep().state;
    const DensityMatrix ref1 = partial_trace(bell1, {0});
    const DensityMatrix ref2 = partial_trace(bell2, {0});
    for (int t = 0; t < 20; ++t) {
        const double w = ang(rng);
        const StateVector s1 = scheme1_alice_entangle(
            bell1, scheme1_payload_prep(std::cos(w), std::sin(w), ang(rng), "f", 1.0, kDim).state);
        EXPECT_LT(trace_distance(partial_trace(s1, {0}), ref1), 1e-10);
        const StateVector s2 = scheme2_alice_entangle(bell2, scheme2_payload_prep(std::cos(w), std::sin(w)).state);
        EXPECT_LT(trace_distance(partial_trace(s2, {0}), ref2), 1e-10);
    }
}
