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

#include "cqed/hilbert.h"

#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "cqed/errors.h"

using namespace cqed;

namespace {

// e^{-a^2/2} a^n / sqrt(n!) straight from the series, via lgamma.
double taylor_amplitude(double a, std::size_t n) {
    if (a == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double mag = std::exp(-a * a / 2 + n * std::log(std::abs(a)) - 0.5 * std::lgamma(n + 1.0));
    return (a < 0 && n % 2) ? -mag : mag;
}

StateVector random_state(const SpaceLayout& layout, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(layout.total_dim()));
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return StateVector(layout, v).normalized();
}

}  // namespace

TEST(layout, strides_row_major) {
    SpaceLayout lay({atom("A", {"f", "g"}), field("C", 3), atom("B", {"x", "y", "z"})});
    EXPECT_EQ(lay.total_dim(), 18u);
    EXPECT_EQ(lay.stride(0), 9u);
    EXPECT_EQ(lay.stride(1), 3u);
    EXPECT_EQ(lay.stride(2), 1u);
    EXPECT_EQ(lay.index_of("C"), 1u);
    EXPECT_THROW(lay.index_of("Z"), LayoutMismatch);
}

TEST(layout, rejects_bad_subsystems) {
    EXPECT_THROW(SpaceLayout({atom("A", {"f", "f"})}), std::invalid_argument);
    EXPECT_THROW(SpaceLayout({field("C", 1)}), std::invalid_argument);
    EXPECT_THROW(SpaceLayout({field("C", 2), field("C", 2)}).index_of("C"), LayoutMismatch);
}

TEST(layout, compatible_ignores_names) {
    SpaceLayout a({field("C1", 4)}), b({field("C3", 4)}), c({field("C1", 5)});
    EXPECT_TRUE(a.compatible(b));
    EXPECT_FALSE(a == b);
    EXPECT_FALSE(a.compatible(c));
}

TEST(states, fock_basis) {
    const StateVector s = fock_state(2, 4);
    EXPECT_EQ(s.amplitude(2), Complex(1));
    EXPECT_DOUBLE_EQ(s.norm(), 1.0);
    EXPECT_THROW(fock_state(4, 4), DimensionError);
}

TEST(states, coherent_matches_taylor_series) {
    for (double a : {-2.0, -0.3, 0.0, 0.7, 1.0, 2.5}) {
        const std::size_t d = min_truncation(std::abs(a), 1e-16) + 3;
        const StateVector s = coherent_state({a, d});
        for (std::size_t n = 0; n < d; ++n) {
            EXPECT_NEAR(s.amplitude(n).real(), taylor_amplitude(a, n), 1e-14) << "a=" << a << " n=" << n;
            EXPECT_EQ(s.amplitude(n).imag(), 0.0);
        }
        EXPECT_NEAR(s.norm(), 1.0, 1e-15);
    }
}

TEST(states, coherent_rejects_short_truncation) {
    EXPECT_THROW(coherent_state({2.0, 5}), TruncationError);
}

TEST(states, cats_orthonormal_with_parity) {
    for (double a : {0.5, 1.0, 2.0, 3.0}) {
        const std::size_t d = min_truncation(a, 1e-16) + 2;
        const StateVector even = cat_state({a, d}, Parity::kEven);
        const StateVector odd = cat_state({a, d}, Parity::kOdd);
        EXPECT_LT(std::abs(inner(even, odd)), 1e-12);
        EXPECT_NEAR(even.norm(), 1.0, 1e-12);
        EXPECT_NEAR(odd.norm(), 1.0, 1e-12);
        for (std::size_t n = 0; n < d; ++n) {
            EXPECT_EQ(n % 2 ? even.amplitude(n) : odd.amplitude(n), Complex(0)) << n;
        }
    }
}

TEST(states, cat_normalization_oracle) {
    // Unnormalized |a> + |-a> has squared norm 2(1 + e^{-2a^2}); the even cat
    // rescales it exactly.
    const double a = 0.8;
    const std::size_t d = 30;
    const StateVector sum = coherent_state({a, d}) + coherent_state({-a, d});
    EXPECT_NEAR(sum.squared_norm(), 2 * (1 + std::exp(-2 * a * a)), 1e-13);
    EXPECT_GT(fidelity(sum.normalized(), cat_state({a, d}, Parity::kEven)), 1 - 1e-14);
}

TEST(states, small_odd_cat_degenerate) {
    EXPECT_THROW(cat_state({1e-8, 4}, Parity::kOdd), DegenerateAmplitudeError);
    EXPECT_NO_THROW(cat_state({1e-8, 4}, Parity::kEven));
}

TEST(states, atom_state_labels) {
    const StateVector s = atom_basis_state("A", {"f", "g"}, "g");
    EXPECT_EQ(s.amplitude(1), Complex(1));
    EXPECT_THROW(atom_basis_state("A", {"f", "g"}, "e"), std::invalid_argument);
}

TEST(algebra, tensor_order) {
    const StateVector s = tensor({fock_state(1, 3, "X"), fock_state(0, 2, "Y")});
    EXPECT_EQ(s.size(), 6u);
    EXPECT_EQ(s.amplitude(2), Complex(1));
}

TEST(algebra, inner_rejects_mismatch) {
    EXPECT_THROW(inner(fock_state(0, 3), fock_state(0, 4)), LayoutMismatch);
}

TEST(algebra, partial_trace_of_bell_is_mixed) {
    const double r = 1 / std::sqrt(2.0);
    const StateVector bell = r * tensor({fock_state(0, 2, "a"), fock_state(0, 2, "b")}) +
                             r * tensor({fock_state(1, 2, "a"), fock_state(1, 2, "b")});
    const DensityMatrix rho = partial_trace(bell, {1});
    EXPECT_NEAR(rho.purity(), 0.5, 1e-15);
    EXPECT_LT((rho.matrix() - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(algebra, partial_trace_property) {
    // Tracing out a factor of a product state returns the kept factor exactly.
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const StateVector a = random_state(SpaceLayout({atom("A", {"f", "g", "e"})}), rng);
        const StateVector b = random_state(SpaceLayout({field("C", 5)}), rng);
        const StateVector c = random_state(SpaceLayout({atom("B", {"x", "y"})}), rng);
        const StateVector s = tensor({a, b, c});
        EXPECT_GT(fidelity(partial_trace(s, {1}), b), 1 - 1e-12);
        const DensityMatrix ac = partial_trace(s, {2, 0});
        EXPECT_EQ(ac.layout()[0].name, "A");
        EXPECT_GT(fidelity(ac, tensor({a, c})), 1 - 1e-12);
        EXPECT_LT(ac.validity_defect(), 1e-12);
    }
}

TEST(algebra, fidelity_phase_invariant) {
    std::mt19937_64 rng(3);
    const StateVector s = random_state(SpaceLayout({field("C", 6)}), rng);
    EXPECT_NEAR(fidelity(s, std::polar(1.0, 1.234) * s), 1.0, 1e-15);
    EXPECT_NEAR(fidelity(pure_density(s), Complex(0, 1) * s), 1.0, 1e-15);
}

TEST(algebra, trace_distance_extremes) {
    const DensityMatrix a = pure_density(fock_state(0, 3));
    const DensityMatrix b = pure_density(fock_state(2, 3));
    EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-14);
    EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-14);
}

TEST(algebra, discard_requires_definite_level) {
    const StateVector s = tensor({atom_basis_state("A", {"f", "g"}, "f"), fock_state(1, 3)});
    const StateVector rest = s.discard(0);
    EXPECT_EQ(rest.layout().size(), 1u);
    EXPECT_EQ(rest.amplitude(1), Complex(1));
    const StateVector mixed = tensor({atom_state("A", {"f", "g"}, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}),
                                      fock_state(1, 3)});
    EXPECT_THROW(mixed.discard(0), LayoutMismatch);
}

TEST(truncation, poisson_tail_matches_incomplete_gamma) {
    // P(N >= d) for N ~ Poisson(a^2) is the regularized lower gamma P(d, a^2).
    for (double a : {0.3, 1.0, 2.0, 4.0}) {
        for (std::size_t d : {1u, 3u, 8u, 20u}) {
            const double want = boost::math::gamma_p(static_cast<double>(d), a * a);
            const double got = poisson_tail(a, d);
            EXPECT_NEAR(got, want, 1e-14 + 1e-10 * want) << a << " " << d;
        }
    }
}

TEST(truncation, min_truncation_values) {
    EXPECT_EQ(min_truncation(2.0, 1e-12), 26u);
    EXPECT_EQ(min_truncation(6.0, 1e-12), 87u);
    for (double a : {0.5, 1.0, 3.0}) {
        const std::size_t d = min_truncation(a, 1e-12);
        EXPECT_LT(boost::math::gamma_p(static_cast<double>(d), a * a), 1.01e-12);
        EXPECT_GE(boost::math::gamma_p(static_cast<double>(d - 1), a * a), 0.99e-12);
    }
}
