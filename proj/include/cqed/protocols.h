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

#ifndef CQED_PROTOCOLS_H
#define CQED_PROTOCOLS_H

#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/hilbert.h"
#include "cqed/measurement.h"

namespace cqed {

// Scheme 1 teleports zeta|+> + xi|-> written over even/odd coherent
// superpositions of a microwave cavity; Scheme 2 the same form over
// (|0> +- |1>)/sqrt2. Subsystems are named after their role: cavities C1
// (Bob), C2 (Alice's Bell half), C3 (payload); atoms A0..A5 and B.

enum class BellKind { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

enum class Verdict { kIdentity, kCorrectable, kFailure };

/// Bob's field relative to the payload zeta|+> + xi|->.
enum class BobForm {
    kPayload,             // zeta|+> + xi|->
    kSignFlipped,         // zeta|+> - xi|->
    kSwapped,             // zeta|-> + xi|+>
    kSwappedSignFlipped,  // zeta|-> - xi|+>
    kUndetermined,        // Bell pair not discriminated
};

std::string_view to_string(BellKind k);
std::string_view to_string(Verdict v);
std::string_view to_string(BobForm f);
BellKind bell_kind_from_string(std::string_view s);

struct PathError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Coefficients of the state to teleport in the {|+>, |->} basis of C3.
/// Normalized so |zeta|^2 + |xi|^2 = 1.
struct PayloadSpec {
    Complex zeta;
    Complex xi;
};

/// The {|+>, |->} pair a scheme writes its fields in.
///
/// For coherent amplitudes the pair is (|a> +- |-a>)/sqrt2. These vectors are
/// orthogonal but have squared norms 1 +- e^{-2a^2}; every ket built from them
/// is renormalized as a whole. Expansions over this pair reproduce the
/// protocol algebra exactly at any amplitude, while the exactly normalized
/// cats of cat_state() agree with it only up to O(e^{-2a^2}).
class CatFrame {
  public:
    static CatFrame coherent(double alpha, std::size_t dim, std::string name = "C");
    static CatFrame fock01(std::string name = "C");

    const StateVector& plus() const { return plus_; }
    const StateVector& minus() const { return minus_; }

    /// Normalized zeta|+> + xi|->.
    StateVector ket(Complex zeta, Complex xi) const;
    StateVector ket(BobForm form, const PayloadSpec& p) const;
    /// Normalized two-mode Bell state over the pair, modes named a and b.
    StateVector bell(BellKind kind, std::string a = "C1", std::string b = "C2") const;

  private:
    CatFrame(StateVector plus, StateVector minus) : plus_(std::move(plus)), minus_(std::move(minus)) {}
    StateVector plus_;
    StateVector minus_;
};

struct SchemeConfig {
    int scheme = 2;
    double alpha = 1.0;
    /// 0 selects the automatic truncation.
    std::size_t field_dim = 0;
    // Scheme 1 payload: atom B loaded with c_f|f> + c_g|g>, second zone phase theta.
    double c_f = 0.8;
    double c_g = 0.6;
    double theta = 0.0;
    // Scheme 2 payload: atom B loaded with c_e|e> + c_f|f> (shares c_f).
    double c_e = 0.6;
    /// Level of atom B kept when preparing the Scheme 1 payload.
    std::string prep_detect = "f";
    double detection_gt = std::numbers::pi / 2;
    BellKind bell_kind = BellKind::kPhiPlus;

    /// Field truncation actually used: 2 for Scheme 2, min_truncation(2 alpha, 1e-12)
    /// for Scheme 1 unless overridden.
    std::size_t resolved_dim() const;
    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

struct Prepared {
    StateVector state;
    double probability = 1.0;
};

struct PayloadPrep {
    PayloadSpec spec;
    StateVector state;  // C3 alone
    double probability = 1.0;
};

struct Classification {
    Verdict verdict;
    BobForm form;
};

struct TeleportBranch {
    std::vector<Outcome> path;
    double probability = 0.0;
    Verdict verdict = Verdict::kFailure;
    BobForm form = BobForm::kUndetermined;
    /// Reduced state of C1; absent on negligible branches.
    std::optional<DensityMatrix> bob;
    /// Bob's field when it is pure (purity >= 1 - 1e-10).
    std::optional<StateVector> bob_state;
    /// Fidelity against the payload before any correction.
    std::optional<double> raw_fidelity;
    /// Fidelity after the prescribed correction (= raw for non-correctable branches).
    std::optional<double> corrected_fidelity;
    /// Fidelity against the closed-form state listed for `form`.
    std::optional<double> form_fidelity;
    /// Probability that the correction succeeds on one attempt.
    double correction_probability = 1.0;
};

struct TeleportRun {
    SchemeConfig config;
    std::size_t field_dim = 0;
    PayloadSpec payload;
    StateVector payload_state;
    double payload_probability = 1.0;
    StateVector bell;
    double bell_probability = 1.0;
    std::vector<TeleportBranch> branches;
};

struct Scheme1Correction {
    double success_probability;
    StateVector corrected;  // detected f5
    StateVector retry;      // detected g5: input unchanged, send another atom
};

struct Scheme2Correction {
    StateVector field;
    StateVector joint;  // (A5, C1) after the pass
    double atom_purity;
};

// ---- Scheme 1: even/odd coherent states ---------------------------------

/// Bell pair on (C1, C2) from one atom crossing both cavities and a
/// post-selected detection.
Prepared scheme1_bell_prep(double alpha, std::size_t dim, BellKind kind = BellKind::kPhiPlus);
/// State to teleport on C3, prepared by atom B; detect is "f" or "g".
PayloadPrep scheme1_payload_prep(Complex c_f, Complex c_g, double theta, std::string_view detect, double alpha,
                                 std::size_t dim);
/// (C1, C2, C3, A2) after A2 crossed C2 and C3 and its final rotation, before detection.
StateVector scheme1_alice_entangle(const StateVector& bell, const StateVector& payload);
TeleportRun scheme1_run(const SchemeConfig& cfg);
Scheme1Correction scheme1_correct(const StateVector& bob);

// ---- Scheme 2: zero/one Fock superpositions -----------------------------

/// (|0> + sign|1>)/sqrt2 on a two-level cavity; sign is +1 or -1.
Prepared scheme2_cavity_prep(int sign, std::string name = "C");
Prepared scheme2_bell_prep(BellKind kind = BellKind::kPhiPlus);
PayloadPrep scheme2_payload_prep(Complex c_e, Complex c_f);
StateVector scheme2_alice_entangle(const StateVector& bell, const StateVector& payload);
TeleportRun scheme2_run(const SchemeConfig& cfg);
Scheme2Correction scheme2_correct(const StateVector& bob);

TeleportRun run_scheme(const SchemeConfig& cfg);

/// Verdict and Bob's expected form for a detection path.
Classification classify(std::span<const Outcome> path, int scheme);

}  // namespace cqed

#endif  // CQED_PROTOCOLS_H
