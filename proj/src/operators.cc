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

#include "cqed/operators.h"

#include <cmath>
#include <numeric>

#include "cqed/errors.h"

namespace cqed {

namespace {

constexpr double kUnitarityTolerance = 1e-10;
constexpr double kDisplacementTailTolerance = 1e-12;

std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Offsets of the op-local basis inside the full index space, and the base
// indices where every op slot digit is zero.
struct SlotIndexing {
    std::vector<std::size_t> local_offsets;
    std::vector<std::size_t> bases;
};

SlotIndexing slot_indexing(const Operator& op, const SpaceLayout& layout) {
    const auto& slots = op.slots();
    const auto& dims = op.dims();
    std::vector<bool> in_op(layout.size(), false);
    for (std::size_t m = 0; m < slots.size(); ++m) {
        if (slots[m] >= layout.size()) {
            throw LayoutMismatch("operator slot " + std::to_string(slots[m]) + " outside layout of " +
                                 std::to_string(layout.size()) + " subsystems");
        }
        if (in_op[slots[m]]) {
            throw LayoutMismatch("operator binds subsystem " + std::to_string(slots[m]) + " twice");
        }
        if (layout[slots[m]].dim() != dims[m]) {
            throw LayoutMismatch("operator factor " + std::to_string(m) + " has dimension " + std::to_string(dims[m]) +
                                 " but subsystem '" + layout[slots[m]].name + "' has " +
                                 std::to_string(layout[slots[m]].dim()));
        }
        in_op[slots[m]] = true;
    }

    SlotIndexing out;
    const std::size_t local_dim = product(dims);
    out.local_offsets.assign(local_dim, 0);
    for (std::size_t j = 0; j < local_dim; ++j) {
        std::size_t rem = j;
        std::size_t off = 0;
        for (std::size_t m = slots.size(); m-- > 0;) {
            off += (rem % dims[m]) * layout.stride(slots[m]);
            rem /= dims[m];
        }
        out.local_offsets[j] = off;
    }

    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (!in_op[i]) {
            free.push_back(i);
        }
    }
    const std::size_t n_bases = layout.total_dim() / local_dim;
    out.bases.reserve(n_bases);
    std::vector<std::size_t> digit(free.size(), 0);
    std::size_t base = 0;
    for (std::size_t b = 0; b < n_bases; ++b) {
        out.bases.push_back(base);
        for (std::size_t k = free.size(); k-- > 0;) {
            const std::size_t st = layout.stride(free[k]);
            if (++digit[k] < layout[free[k]].dim()) {
                base += st;
                break;
            }
            base -= (layout[free[k]].dim() - 1) * st;
            digit[k] = 0;
        }
    }
    return out;
}

}  // namespace

Operator::Operator(Matrix matrix, std::vector<std::size_t> dims)
    : Operator(std::move(matrix), dims, [&] {
          std::vector<std::size_t> s(dims.size());
          std::iota(s.begin(), s.end(), std::size_t{0});
          return s;
      }()) {}

Operator::Operator(Matrix matrix, std::vector<std::size_t> dims, std::vector<std::size_t> slots)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), slots_(std::move(slots)) {
    const auto n = static_cast<Eigen::Index>(product(dims_));
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw DimensionError("operator matrix is not square over its factor dimensions");
    }
    if (slots_.size() != dims_.size()) {
        throw DimensionError("operator needs one slot per factor");
    }
}

Operator Operator::on(std::vector<std::size_t> slots) const {
    return Operator(matrix_, dims_, std::move(slots));
}

Operator Operator::adjoint() const {
    return Operator(matrix_.adjoint(), dims_, slots_);
}

double Operator::unitarity_defect() const {
    const auto n = matrix_.rows();
    return (matrix_.adjoint() * matrix_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

Operator operator*(const Operator& a, const Operator& b) {
    if (a.dims() != b.dims() || a.slots() != b.slots()) {
        throw LayoutMismatch("operator product needs identical slot bindings; lift first");
    }
    return Operator(a.matrix() * b.matrix(), a.dims(), a.slots());
}

double InteractionParams::phi() const {
    if (delta == 0.0) {
        throw DimensionError("dispersive phase needs a nonzero detuning");
    }
    return g * g * tau / delta;
}

Operator annihilation(std::size_t dim) {
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n) {
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    }
    return Operator(a, {dim});
}

Operator number_operator(std::size_t dim) {
    Matrix n = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
        n(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = static_cast<double>(k);
    }
    return Operator(n, {dim});
}

Operator displacement(double alpha, std::size_t dim, double carried_amplitude) {
    const double reach = std::abs(carried_amplitude) + std::abs(alpha);
    if (dim < 2 || !(poisson_tail(reach, dim) < kDisplacementTailTolerance)) {
        throw TruncationError("displacement by " + std::to_string(alpha) + " on a mode carrying amplitude " +
                              std::to_string(carried_amplitude) + " needs dim >= " +
                              std::to_string(min_truncation(reach, kDisplacementTailTolerance)) + ", got " +
                              std::to_string(dim));
    }
    const Matrix a = annihilation(dim).matrix();
    // alpha (a^dag - a) is anti-Hermitian; i times it is Hermitian.
    const Matrix hermitian = Complex(0.0, 1.0) * alpha * (a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    const Eigen::VectorXcd phases =
        es.eigenvalues().unaryExpr([](double l) { return std::exp(Complex(0.0, -l)); });
    Matrix d = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return Operator(d, {dim});
}

Operator dispersive_fg(double phi, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix u = Matrix::Zero(2 * d, 2 * d);
    for (Eigen::Index n = 0; n < d; ++n) {
        u(n, n) = std::exp(Complex(0.0, phi * static_cast<double>(n)));
        u(d + n, d + n) = 1.0;
    }
    return Operator(u, {2, dim});
}

Operator dispersive_ef(double phi, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix u = Matrix::Zero(2 * d, 2 * d);
    for (Eigen::Index n = 0; n < d; ++n) {
        u(n, n) = std::exp(Complex(0.0, phi * static_cast<double>(n)));
        u(d + n, d + n) = std::exp(Complex(0.0, -phi * static_cast<double>(n + 1)));
    }
    return Operator(u, {2, dim});
}

Operator jc_unitary(double gt, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    // index: lower n -> n, upper n -> d + n
    Matrix u = Matrix::Zero(2 * d, 2 * d);
    u(0, 0) = 1.0;
    u(2 * d - 1, 2 * d - 1) = 1.0;
    const Complex minus_i(0.0, -1.0);
    for (Eigen::Index n = 1; n < d; ++n) {
        const double w = gt * std::sqrt(static_cast<double>(n));
        const Eigen::Index lower = n;
        const Eigen::Index upper = d + n - 1;
        u(lower, lower) = std::cos(w);
        u(upper, upper) = std::cos(w);
        u(upper, lower) = minus_i * std::sin(w);
        u(lower, upper) = minus_i * std::sin(w);
    }
    return Operator(u, {2, dim});
}

Operator ramsey(const Matrix2& u, std::size_t atom_slot) {
    const double defect = (u.adjoint() * u - Matrix2::Identity()).cwiseAbs().maxCoeff();
    if (!(defect < kUnitarityTolerance)) {
        throw DimensionError("Ramsey rotation is not unitary (defect " + std::to_string(defect) + ")");
    }
    return Operator(Matrix(u), {2}, {atom_slot});
}

Matrix2 k1(Complex c_f, Complex c_g) {
    Matrix2 u;
    u << std::conj(c_g), c_f, -std::conj(c_f), c_g;
    return u;
}

Matrix2 k1_fe(Complex c_e, Complex c_f) {
    Matrix2 u;
    u << c_f, -std::conj(c_e), c_e, std::conj(c_f);
    return u;
}

Matrix2 k2(double theta) {
    const Complex i(0.0, 1.0);
    Matrix2 u;
    u << 1.0, -i * std::exp(i * theta), -i * std::exp(-i * theta), 1.0;
    return u / std::sqrt(2.0);
}

Matrix2 k_unravel() {
    Matrix2 u;
    u << 1.0, -1.0, 1.0, 1.0;
    return u / std::sqrt(2.0);
}

Matrix2 x_to_z() {
    Matrix2 u;
    u << 1.0, 1.0, 1.0, -1.0;
    return u / std::sqrt(2.0);
}

Operator lift(const Operator& op, const SpaceLayout& layout) {
    const SlotIndexing ix = slot_indexing(op, layout);
    const auto n = static_cast<Eigen::Index>(layout.total_dim());
    Matrix full = Matrix::Zero(n, n);
    const std::size_t local = ix.local_offsets.size();
    for (auto base : ix.bases) {
        for (std::size_t j = 0; j < local; ++j) {
            for (std::size_t k = 0; k < local; ++k) {
                full(static_cast<Eigen::Index>(base + ix.local_offsets[j]),
                     static_cast<Eigen::Index>(base + ix.local_offsets[k])) =
                    op.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            }
        }
    }
    std::vector<std::size_t> slots(layout.size());
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    return Operator(std::move(full), layout.dims(), std::move(slots));
}

StateVector apply(const Operator& op, const StateVector& s) {
    const SlotIndexing ix = slot_indexing(op, s.layout());
    const auto local = static_cast<Eigen::Index>(ix.local_offsets.size());
    const auto n_bases = static_cast<Eigen::Index>(ix.bases.size());
    // Gather every op-local block as one column, multiply once, scatter back.
    Matrix blocks(local, n_bases);
    const Vector& in = s.amplitudes();
    for (Eigen::Index b = 0; b < n_bases; ++b) {
        const std::size_t base = ix.bases[static_cast<std::size_t>(b)];
        for (Eigen::Index j = 0; j < local; ++j) {
            blocks(j, b) = in(static_cast<Eigen::Index>(base + ix.local_offsets[static_cast<std::size_t>(j)]));
        }
    }
    const Matrix out_blocks = op.matrix() * blocks;
    Vector out(in.size());
    for (Eigen::Index b = 0; b < n_bases; ++b) {
        const std::size_t base = ix.bases[static_cast<std::size_t>(b)];
        for (Eigen::Index j = 0; j < local; ++j) {
            out(static_cast<Eigen::Index>(base + ix.local_offsets[static_cast<std::size_t>(j)])) = out_blocks(j, b);
        }
    }
    return StateVector(s.layout(), std::move(out));
}

}  // namespace cqed
