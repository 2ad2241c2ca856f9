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

#ifndef CQED_MEASUREMENT_H
#define CQED_MEASUREMENT_H

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqed/hilbert.h"

namespace cqed {

/// Below this Born weight a branch is flagged and carries no post state.
inline constexpr double kMinBranchProbability = 1e-12;

struct Outcome {
    std::string subsystem;
    std::string label;

    bool operator==(const Outcome&) const = default;
};

struct Branch {
    std::vector<Outcome> labels;
    double probability = 0.0;
    /// Normalized collapsed state; empty for negligible branches.
    std::optional<StateVector> post_state;

    bool negligible() const { return !post_state.has_value(); }
};

/// One branch per level in `basis` (a permutation of the atom's labels),
/// in basis order.
std::vector<Branch> branches(const StateVector& s, std::size_t subsystem, std::span<const std::string> basis);
/// Measures in the atom's own level order.
std::vector<Branch> branches(const StateVector& s, std::size_t subsystem);

/// Born probability and collapsed state for one outcome; throws
/// PostSelectionError when the probability is below kMinBranchProbability.
std::pair<double, StateVector> postselect(const StateVector& s, std::size_t subsystem, std::string_view outcome);

/// Draws one branch with Born probabilities, advancing only `rng`.
Branch sample(const StateVector& s, std::size_t subsystem, std::span<const std::string> basis, std::mt19937_64& rng);

}  // namespace cqed

#endif  // CQED_MEASUREMENT_H
