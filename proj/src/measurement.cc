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

#include "cqed/measurement.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "cqed/errors.h"

namespace cqed {

namespace {

void check_basis(const Subsystem& sub, std::span<const std::string> basis) {
    if (!sub.is_atom()) {
        throw UnsupportedMeasurement("subsystem '" + sub.name + "' is a field mode; only atoms are detected");
    }
    std::set<std::string> wanted(basis.begin(), basis.end());
    std::set<std::string> have(sub.labels().begin(), sub.labels().end());
    if (wanted != have || basis.size() != sub.labels().size()) {
        throw UnsupportedMeasurement("measurement basis for '" + sub.name + "' must list each of its levels once");
    }
}

// Weight of each level and the projected (unnormalized) state for one level.
double level_weight(const StateVector& s, std::size_t subsystem, std::size_t level) {
    const auto& layout = s.layout();
    const std::size_t d = layout[subsystem].dim();
    const std::size_t st = layout.stride(subsystem);
    const std::size_t outer = layout.total_dim() / (d * st);
    double w = 0.0;
    for (std::size_t o = 0; o < outer; ++o) {
        w += s.amplitudes().segment(static_cast<Eigen::Index>((o * d + level) * st), static_cast<Eigen::Index>(st))
                 .squaredNorm();
    }
    return w;
}

StateVector project(const StateVector& s, std::size_t subsystem, std::size_t level) {
    const auto& layout = s.layout();
    const std::size_t d = layout[subsystem].dim();
    const std::size_t st = layout.stride(subsystem);
    const std::size_t outer = layout.total_dim() / (d * st);
    Vector out = Vector::Zero(s.amplitudes().size());
    for (std::size_t o = 0; o < outer; ++o) {
        const auto at = static_cast<Eigen::Index>((o * d + level) * st);
        out.segment(at, static_cast<Eigen::Index>(st)) = s.amplitudes().segment(at, static_cast<Eigen::Index>(st));
    }
    return StateVector(layout, std::move(out));
}

Branch make_branch(const StateVector& s, std::size_t subsystem, const std::string& label, double total) {
    const auto& sub = s.layout()[subsystem];
    const std::size_t level = sub.level(label);
    Branch b;
    b.labels.push_back({sub.name, label});
    b.probability = level_weight(s, subsystem, level) / total;
    if (b.probability >= kMinBranchProbability) {
        b.post_state = project(s, subsystem, level).normalized();
    }
    return b;
}

}  // namespace

std::vector<Branch> branches(const StateVector& s, std::size_t subsystem, std::span<const std::string> basis) {
    if (subsystem >= s.layout().size()) {
        throw DimensionError("measured subsystem index out of range");
    }
    check_basis(s.layout()[subsystem], basis);
    const double total = s.squared_norm();
    std::vector<Branch> out;
    out.reserve(basis.size());
    for (const auto& label : basis) {
        out.push_back(make_branch(s, subsystem, label, total));
    }
    return out;
}

std::vector<Branch> branches(const StateVector& s, std::size_t subsystem) {
    if (subsystem >= s.layout().size()) {
        throw DimensionError("measured subsystem index out of range");
    }
    const auto& sub = s.layout()[subsystem];
    if (!sub.is_atom()) {
        throw UnsupportedMeasurement("subsystem '" + sub.name + "' is a field mode; only atoms are detected");
    }
    return branches(s, subsystem, sub.labels());
}

std::pair<double, StateVector> postselect(const StateVector& s, std::size_t subsystem, std::string_view outcome) {
    if (subsystem >= s.layout().size()) {
        throw DimensionError("measured subsystem index out of range");
    }
    const auto& sub = s.layout()[subsystem];
    if (!sub.is_atom()) {
        throw UnsupportedMeasurement("subsystem '" + sub.name + "' is a field mode; only atoms are detected");
    }
    Branch b = make_branch(s, subsystem, std::string(outcome), s.squared_norm());
    if (b.negligible()) {
        throw PostSelectionError("outcome '" + std::string(outcome) + "' on '" + sub.name + "' has probability " +
                                 std::to_string(b.probability));
    }
    return {b.probability, std::move(*b.post_state)};
}

Branch sample(const StateVector& s, std::size_t subsystem, std::span<const std::string> basis, std::mt19937_64& rng) {
    auto all = branches(s, subsystem, basis);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = unit(rng);
    double acc = 0.0;
    for (auto& b : all) {
        acc += b.probability;
        if (r < acc && !b.negligible()) {
            return std::move(b);
        }
    }
    // r landed in the rounding gap above the cumulative sum
    auto last = std::find_if(all.rbegin(), all.rend(), [](const Branch& b) { return !b.negligible(); });
    return std::move(*last);
}

}  // namespace cqed
