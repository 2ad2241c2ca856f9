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

#ifndef CQED_OPERATORS_H
#define CQED_OPERATORS_H

#include <cstddef>
#include <vector>

#include "cqed/hilbert.h"

namespace cqed {

using Matrix2 = Eigen::Matrix2cd;

/// Dense matrix acting on an ordered set of subsystem slots. `dims` lists
/// the local factor dimensions (matrix is their Kronecker-ordered product,
/// first slot slowest); `slots` binds each factor to a layout index.
class Operator {
  public:
    Operator(Matrix matrix, std::vector<std::size_t> dims);
    Operator(Matrix matrix, std::vector<std::size_t> dims, std::vector<std::size_t> slots);

    const Matrix& matrix() const { return matrix_; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<std::size_t>& slots() const { return slots_; }

    /// Same matrix rebound to other layout slots.
    Operator on(std::vector<std::size_t> slots) const;
    Operator adjoint() const;
    /// max |(U^dag U - I)_ij|
    double unitarity_defect() const;

  private:
    Matrix matrix_;
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> slots_;
};

Operator operator*(const Operator& a, const Operator& b);

/// Atom-field coupling parameters. phi = g^2 tau / delta, gt = g tau.
struct InteractionParams {
    double g = 0.0;
    double tau = 0.0;
    double delta = 0.0;

    double phi() const;
    double gt() const { return g * tau; }
};

Operator annihilation(std::size_t dim);
Operator number_operator(std::size_t dim);

/// exp(alpha (a^dag - a)) on the truncated mode, computed from the
/// eigendecomposition of the Hermitian generator. `carried_amplitude` is
/// the largest coherent amplitude the mode already holds; the truncation
/// must cover |carried_amplitude| + |alpha| to 1e-12.
Operator displacement(double alpha, std::size_t dim, double carried_amplitude = 0.0);

/// e^{i phi n} |f><f| + |g><g| on (atom{f,g} x field).
Operator dispersive_fg(double phi, std::size_t dim);
/// e^{-i phi (n+1)} |e><e| + e^{i phi n} |f><f| on (atom{f,e} x field).
Operator dispersive_ef(double phi, std::size_t dim);

/// Resonant Jaynes-Cummings propagator exp(-i gt (a^dag s- + a s+)) on
/// (atom{lower, upper} x field), in closed form on each excitation doublet.
/// |upper, dim-1> has no partner inside the truncation and is left fixed.
Operator jc_unitary(double gt, std::size_t dim);

/// Two-level rotation applied to one atom. Throws if `u` is not unitary.
Operator ramsey(const Matrix2& u, std::size_t atom_slot = 0);

/// Loads an atom from |g> into c_f|f> + c_g|g>; basis order (f, g).
Matrix2 k1(Complex c_f, Complex c_g);
/// Loads an atom from |f> into c_f|f> + c_e|e>; basis order (f, e).
Matrix2 k1_fe(Complex c_e, Complex c_f);
/// (1/sqrt2) [[1, -i e^{i theta}], [-i e^{-i theta}, 1]]; basis order (f, g).
Matrix2 k2(double theta);
/// (1/sqrt2) [[1, -1], [1, 1]]: |f> -> (|f>+|e>)/sqrt2, |e> -> (-|f>+|e>)/sqrt2.
Matrix2 k_unravel();
/// Maps (|f> +- |g>)/sqrt2 to |f>, |g>.
Matrix2 x_to_z();

/// Full matrix on `layout` with identity on every other subsystem.
Operator lift(const Operator& op, const SpaceLayout& layout);

/// Applies `op` on its slots without materializing the lifted matrix.
StateVector apply(const Operator& op, const StateVector& s);

}  // namespace cqed

#endif  // CQED_OPERATORS_H
