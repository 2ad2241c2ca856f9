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

#ifndef CQED_HILBERT_H
#define CQED_HILBERT_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cqed {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Atom with named levels; level k of the atom is basis index k.
struct AtomLevels {
    std::vector<std::string> labels;
};

/// Single field mode truncated to Fock states |0>..|dim-1>.
struct FieldMode {
    std::size_t dim = 0;
};

struct Subsystem {
    std::string name;
    std::variant<AtomLevels, FieldMode> kind;

    std::size_t dim() const;
    bool is_atom() const { return std::holds_alternative<AtomLevels>(kind); }
    const std::vector<std::string>& labels() const;
    std::size_t level(std::string_view label) const;
};

Subsystem atom(std::string name, std::vector<std::string> labels);
Subsystem field(std::string name, std::size_t dim);

/// Ordered subsystem roster. Subsystem 0 is the slowest-varying index of
/// any amplitude vector built on the layout.
class SpaceLayout {
  public:
    SpaceLayout() = default;
    explicit SpaceLayout(std::vector<Subsystem> subsystems);

    std::size_t size() const { return subsystems_.size(); }
    const Subsystem& operator[](std::size_t i) const { return subsystems_.at(i); }
    const std::vector<Subsystem>& subsystems() const { return subsystems_; }
    std::size_t total_dim() const { return total_dim_; }
    std::vector<std::size_t> dims() const;
    /// Row-major stride of subsystem i.
    std::size_t stride(std::size_t i) const;
    std::size_t index_of(std::string_view name) const;

    SpaceLayout concat(const SpaceLayout& other) const;
    SpaceLayout select(std::span<const std::size_t> indices) const;
    SpaceLayout without(std::size_t index) const;

    /// Same dimensions and atom level labels slot by slot; names may differ.
    bool compatible(const SpaceLayout& other) const;
    bool operator==(const SpaceLayout& other) const;

  private:
    std::vector<Subsystem> subsystems_;
    std::size_t total_dim_ = 1;
};

class StateVector {
  public:
    StateVector(SpaceLayout layout, Vector amplitudes);

    const SpaceLayout& layout() const { return layout_; }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
    std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

    double norm() const { return amplitudes_.norm(); }
    double squared_norm() const { return amplitudes_.squaredNorm(); }
    StateVector normalized() const;
    /// Same state with the global phase chosen so the largest amplitude is real positive.
    StateVector phase_fixed() const;
    StateVector scaled(Complex factor) const;

    /// Drops a subsystem that sits in a single basis level (weight >= 1 - tol),
    /// returning the remaining factor.
    StateVector discard(std::size_t subsystem, double tol = 1e-10) const;

  private:
    SpaceLayout layout_;
    Vector amplitudes_;
};

StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(Complex c, const StateVector& s);

class DensityMatrix {
  public:
    DensityMatrix(SpaceLayout layout, Matrix matrix);

    const SpaceLayout& layout() const { return layout_; }
    const Matrix& matrix() const { return matrix_; }
    Complex trace() const { return matrix_.trace(); }
    double purity() const;
    /// Largest deviation from the Hermitian / unit-trace / positive conditions.
    double validity_defect() const;
    /// Dominant eigenvector; the pure state when purity is 1.
    StateVector dominant_state() const;

  private:
    SpaceLayout layout_;
    Matrix matrix_;
};

struct CoherentParams {
    double alpha = 0.0;
    std::size_t dim = 0;
};

enum class Parity { kEven, kOdd };

inline constexpr double kCoherentTailTolerance = 1e-14;
inline constexpr double kOddCatMinAlpha = 1e-6;

StateVector fock_state(std::size_t n, std::size_t dim, std::string name = "C");
/// Truncated coherent state, renormalized after truncation. Throws
/// TruncationError if the discarded Poisson tail exceeds `tail_tolerance`.
StateVector coherent_state(const CoherentParams& p, std::string name = "C",
                           double tail_tolerance = kCoherentTailTolerance);
/// Even (|a>+|-a>) or odd (|a>-|-a>) coherent superposition with the exact
/// normalization 2(1 +- e^{-2a^2}).
StateVector cat_state(const CoherentParams& p, Parity parity, std::string name = "C",
                      double tail_tolerance = kCoherentTailTolerance);
/// Atom in the superposition sum_k amplitudes[k] |labels[k]>; not renormalized.
StateVector atom_state(std::string name, std::vector<std::string> labels,
                       std::initializer_list<Complex> amplitudes);
StateVector atom_basis_state(std::string name, std::vector<std::string> labels, std::string_view level);

StateVector tensor(std::span<const StateVector> states);
StateVector tensor(std::initializer_list<StateVector> states);

/// <a|b>, conjugate-linear in a.
Complex inner(const StateVector& a, const StateVector& b);

DensityMatrix partial_trace(const StateVector& s, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const StateVector& s, std::initializer_list<std::size_t> keep);
DensityMatrix pure_density(const StateVector& s);

/// <target|rho|target>.
double fidelity(const DensityMatrix& rho, const StateVector& target);
/// |<a|b>|^2 for normalized a, b.
double fidelity(const StateVector& a, const StateVector& b);
/// (1/2) || rho - sigma ||_1
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sum_{n >= dim} e^{-a^2} a^{2n} / n!
double poisson_tail(double alpha, std::size_t dim);
/// Smallest dim whose Poisson tail at amplitude alpha_max is below tol.
std::size_t min_truncation(double alpha_max, double tol);

}  // namespace cqed

#endif  // CQED_HILBERT_H
