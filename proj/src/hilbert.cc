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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "cqed/errors.h"

namespace cqed {

std::size_t Subsystem::dim() const {
    if (const auto* a = std::get_if<AtomLevels>(&kind)) {
        return a->labels.size();
    }
    return std::get<FieldMode>(kind).dim;
}

const std::vector<std::string>& Subsystem::labels() const {
    const auto* a = std::get_if<AtomLevels>(&kind);
    if (a == nullptr) {
        throw UnsupportedMeasurement("subsystem '" + name + "' is a field mode and has no level labels");
    }
    return a->labels;
}

std::size_t Subsystem::level(std::string_view label) const {
    const auto& ls = labels();
    auto it = std::find(ls.begin(), ls.end(), label);
    if (it == ls.end()) {
        throw DimensionError("atom '" + name + "' has no level '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - ls.begin());
}

Subsystem atom(std::string name, std::vector<std::string> labels) {
    return Subsystem{std::move(name), AtomLevels{std::move(labels)}};
}

Subsystem field(std::string name, std::size_t dim) {
    return Subsystem{std::move(name), FieldMode{dim}};
}

SpaceLayout::SpaceLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
    for (const auto& s : subsystems_) {
        if (s.dim() < 2) {
            throw DimensionError("subsystem '" + s.name + "' has dimension " + std::to_string(s.dim()) +
                                 "; every subsystem needs at least 2 levels");
        }
        if (s.is_atom()) {
            std::set<std::string> seen(s.labels().begin(), s.labels().end());
            if (seen.size() != s.labels().size()) {
                throw DimensionError("atom '" + s.name + "' has duplicate level labels");
            }
        }
        total_dim_ *= s.dim();
    }
}

std::vector<std::size_t> SpaceLayout::dims() const {
    std::vector<std::size_t> out;
    out.reserve(subsystems_.size());
    for (const auto& s : subsystems_) {
        out.push_back(s.dim());
    }
    return out;
}

std::size_t SpaceLayout::stride(std::size_t i) const {
    std::size_t st = 1;
    for (std::size_t k = i + 1; k < subsystems_.size(); ++k) {
        st *= subsystems_[k].dim();
    }
    return st;
}

std::size_t SpaceLayout::index_of(std::string_view name) const {
    std::size_t found = subsystems_.size();
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].name == name) {
            if (found != subsystems_.size()) {
                throw LayoutMismatch("subsystem name '" + std::string(name) + "' is ambiguous");
            }
            found = i;
        }
    }
    if (found == subsystems_.size()) {
        throw LayoutMismatch("no subsystem named '" + std::string(name) + "'");
    }
    return found;
}

SpaceLayout SpaceLayout::concat(const SpaceLayout& other) const {
    auto all = subsystems_;
    all.insert(all.end(), other.subsystems_.begin(), other.subsystems_.end());
    return SpaceLayout(std::move(all));
}

SpaceLayout SpaceLayout::select(std::span<const std::size_t> indices) const {
    std::vector<Subsystem> out;
    for (auto i : indices) {
        out.push_back(subsystems_.at(i));
    }
    return SpaceLayout(std::move(out));
}

SpaceLayout SpaceLayout::without(std::size_t index) const {
    auto all = subsystems_;
    all.erase(all.begin() + static_cast<std::ptrdiff_t>(index));
    return SpaceLayout(std::move(all));
}

bool SpaceLayout::compatible(const SpaceLayout& other) const {
    if (subsystems_.size() != other.subsystems_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        const auto& a = subsystems_[i];
        const auto& b = other.subsystems_[i];
        if (a.dim() != b.dim() || a.is_atom() != b.is_atom()) {
            return false;
        }
        if (a.is_atom() && a.labels() != b.labels()) {
            return false;
        }
    }
    return true;
}

bool SpaceLayout::operator==(const SpaceLayout& other) const {
    if (!compatible(other)) {
        return false;
    }
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        if (subsystems_[i].name != other.subsystems_[i].name) {
            return false;
        }
    }
    return true;
}

StateVector::StateVector(SpaceLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
        throw LayoutMismatch("amplitude vector of length " + std::to_string(amplitudes_.size()) +
                             " does not match layout dimension " + std::to_string(layout_.total_dim()));
    }
}

StateVector StateVector::normalized() const {
    double n = norm();
    if (n == 0.0) {
        throw DegenerateAmplitudeError("cannot normalize the zero vector");
    }
    return StateVector(layout_, amplitudes_ / n);
}

StateVector StateVector::phase_fixed() const {
    Eigen::Index k = 0;
    amplitudes_.cwiseAbs().maxCoeff(&k);
    Complex a = amplitudes_(k);
    if (std::abs(a) == 0.0) {
        return *this;
    }
    return StateVector(layout_, amplitudes_ * (std::abs(a) / a));
}

StateVector StateVector::scaled(Complex factor) const {
    return StateVector(layout_, amplitudes_ * factor);
}

StateVector StateVector::discard(std::size_t subsystem, double tol) const {
    const std::size_t d = layout_[subsystem].dim();
    const std::size_t st = layout_.stride(subsystem);
    const std::size_t outer = layout_.total_dim() / (d * st);
    std::vector<double> weight(d, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t i = 0; i < st; ++i) {
                weight[k] += std::norm(amplitudes_(static_cast<Eigen::Index>((o * d + k) * st + i)));
            }
        }
    }
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    const auto level = static_cast<std::size_t>(std::max_element(weight.begin(), weight.end()) - weight.begin());
    if (total == 0.0 || weight[level] < (1.0 - tol) * total) {
        throw LayoutMismatch("subsystem '" + layout_[subsystem].name + "' is not in a single basis level");
    }
    Vector rest(static_cast<Eigen::Index>(outer * st));
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < st; ++i) {
            rest(static_cast<Eigen::Index>(o * st + i)) = amplitudes_(static_cast<Eigen::Index>((o * d + level) * st + i));
        }
    }
    return StateVector(layout_.without(subsystem), rest).normalized();
}

StateVector operator+(const StateVector& a, const StateVector& b) {
    if (!a.layout().compatible(b.layout())) {
        throw LayoutMismatch("cannot add states on different layouts");
    }
    return StateVector(a.layout(), a.amplitudes() + b.amplitudes());
}

StateVector operator-(const StateVector& a, const StateVector& b) {
    return a + (-1.0) * b;
}

StateVector operator*(Complex c, const StateVector& s) {
    return s.scaled(c);
}

DensityMatrix::DensityMatrix(SpaceLayout layout, Matrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(layout_.total_dim());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw LayoutMismatch("density matrix shape does not match its layout");
    }
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return matrix_.cwiseAbs2().sum();
}

double DensityMatrix::validity_defect() const {
    double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    double tr = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    double neg = std::max(0.0, -es.eigenvalues().minCoeff());
    return std::max({herm, tr, neg});
}

StateVector DensityMatrix::dominant_state() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_);
    Vector v = es.eigenvectors().col(matrix_.rows() - 1);
    return StateVector(layout_, v).phase_fixed();
}

namespace {

void require_truncation(double alpha, std::size_t dim, double tail_tolerance) {
    if (dim < 2) {
        throw DimensionError("field truncation must be at least 2");
    }
    double tail = poisson_tail(alpha, dim);
    if (!(tail < tail_tolerance)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "dimension %zu leaves Poisson tail %.3g for alpha=%g; need dim >= %zu", dim, tail,
                      alpha, min_truncation(std::abs(alpha), tail_tolerance));
        throw TruncationError(buf);
    }
}

// e^{-a^2/2} a^n / sqrt(n!) by upward recursion.
Vector coherent_amplitudes(double alpha, std::size_t dim) {
    Vector v(static_cast<Eigen::Index>(dim));
    double amp = std::exp(-0.5 * alpha * alpha);
    v(0) = amp;
    for (std::size_t n = 1; n < dim; ++n) {
        amp *= alpha / std::sqrt(static_cast<double>(n));
        v(static_cast<Eigen::Index>(n)) = amp;
    }
    return v;
}

}  // namespace

StateVector fock_state(std::size_t n, std::size_t dim, std::string name) {
    if (n >= dim) {
        throw DimensionError("Fock level " + std::to_string(n) + " outside truncation " + std::to_string(dim));
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return StateVector(SpaceLayout({field(std::move(name), dim)}), v);
}

StateVector coherent_state(const CoherentParams& p, std::string name, double tail_tolerance) {
    require_truncation(p.alpha, p.dim, tail_tolerance);
    return StateVector(SpaceLayout({field(std::move(name), p.dim)}), coherent_amplitudes(p.alpha, p.dim)).normalized();
}

StateVector cat_state(const CoherentParams& p, Parity parity, std::string name, double tail_tolerance) {
    require_truncation(p.alpha, p.dim, tail_tolerance);
    const double overlap = std::exp(-2.0 * p.alpha * p.alpha);
    double norm_sq;
    if (parity == Parity::kEven) {
        norm_sq = 2.0 * (1.0 + overlap);
    } else {
        if (std::abs(p.alpha) < kOddCatMinAlpha) {
            throw DegenerateAmplitudeError("odd cat state is undefined for |alpha| < 1e-6");
        }
        norm_sq = -2.0 * std::expm1(-2.0 * p.alpha * p.alpha);
    }
    // |a> +- |-a> keeps only the even (odd) Fock components, doubled.
    Vector c = coherent_amplitudes(p.alpha, p.dim);
    const std::size_t keep = parity == Parity::kEven ? 0 : 1;
    for (std::size_t n = 0; n < p.dim; ++n) {
        c(static_cast<Eigen::Index>(n)) *= (n % 2 == keep) ? 2.0 / std::sqrt(norm_sq) : 0.0;
    }
    return StateVector(SpaceLayout({field(std::move(name), p.dim)}), c).normalized();
}

StateVector atom_state(std::string name, std::vector<std::string> labels, std::initializer_list<Complex> amplitudes) {
    if (amplitudes.size() != labels.size()) {
        throw DimensionError("atom '" + name + "': amplitude count does not match level count");
    }
    Vector v(static_cast<Eigen::Index>(labels.size()));
    Eigen::Index k = 0;
    for (auto a : amplitudes) {
        v(k++) = a;
    }
    return StateVector(SpaceLayout({atom(std::move(name), std::move(labels))}), v);
}

StateVector atom_basis_state(std::string name, std::vector<std::string> labels, std::string_view level) {
    Subsystem s = atom(std::move(name), std::move(labels));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(s.dim()));
    v(static_cast<Eigen::Index>(s.level(level))) = 1.0;
    return StateVector(SpaceLayout({s}), v);
}

StateVector tensor(std::span<const StateVector> states) {
    if (states.empty()) {
        throw DimensionError("tensor of an empty list");
    }
    SpaceLayout layout = states[0].layout();
    Vector amps = states[0].amplitudes();
    for (std::size_t k = 1; k < states.size(); ++k) {
        const Vector& b = states[k].amplitudes();
        Vector out(amps.size() * b.size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            out.segment(i * b.size(), b.size()) = amps(i) * b;
        }
        amps = std::move(out);
        layout = layout.concat(states[k].layout());
    }
    return StateVector(std::move(layout), std::move(amps));
}

StateVector tensor(std::initializer_list<StateVector> states) {
    return tensor(std::span<const StateVector>(states.begin(), states.size()));
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (!a.layout().compatible(b.layout())) {
        throw LayoutMismatch("inner product of states on different layouts");
    }
    return a.amplitudes().dot(b.amplitudes());
}

DensityMatrix partial_trace(const StateVector& s, std::span<const std::size_t> keep) {
    const SpaceLayout& layout = s.layout();
    std::vector<std::size_t> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.empty()) {
        throw DimensionError("partial trace needs a nonempty keep set");
    }
    if (kept.back() >= layout.size()) {
        throw DimensionError("partial trace keep index out of range");
    }

    const std::size_t n = layout.size();
    std::vector<bool> is_kept(n, false);
    for (auto k : kept) {
        is_kept[k] = true;
    }
    // Strides of every subsystem inside the kept and the traced-out sub-layouts.
    std::vector<std::size_t> sub_stride(n, 0);
    std::size_t keep_dim = 1;
    std::size_t rest_dim = 1;
    for (std::size_t i = n; i-- > 0;) {
        if (is_kept[i]) {
            sub_stride[i] = keep_dim;
            keep_dim *= layout[i].dim();
        } else {
            sub_stride[i] = rest_dim;
            rest_dim *= layout[i].dim();
        }
    }
    const auto dims = layout.dims();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(rest_dim));
    std::vector<std::size_t> digit(n, 0);
    std::size_t ki = 0;
    std::size_t ri = 0;
    for (std::size_t idx = 0; idx < layout.total_dim(); ++idx) {
        m(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(ri)) = s.amplitude(idx);
        // odometer increment, last subsystem fastest
        for (std::size_t i = n; i-- > 0;) {
            std::size_t& acc = is_kept[i] ? ki : ri;
            if (++digit[i] < dims[i]) {
                acc += sub_stride[i];
                break;
            }
            acc -= (dims[i] - 1) * sub_stride[i];
            digit[i] = 0;
        }
    }
    Matrix rho = m * m.adjoint();
    return DensityMatrix(layout.select(kept), std::move(rho));
}

DensityMatrix partial_trace(const StateVector& s, std::initializer_list<std::size_t> keep) {
    return partial_trace(s, std::span<const std::size_t>(keep.begin(), keep.size()));
}

DensityMatrix pure_density(const StateVector& s) {
    return DensityMatrix(s.layout(), s.amplitudes() * s.amplitudes().adjoint());
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (!rho.layout().compatible(target.layout())) {
        throw LayoutMismatch("fidelity: density matrix and target have different layouts");
    }
    const Vector& t = target.amplitudes();
    return t.dot(rho.matrix() * t).real();
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner(a, b));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (!rho.layout().compatible(sigma.layout())) {
        throw LayoutMismatch("trace distance between different layouts");
    }
    Matrix diff = rho.matrix() - sigma.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double poisson_tail(double alpha, std::size_t dim) {
    const double lambda = alpha * alpha;
    if (lambda == 0.0) {
        return dim == 0 ? 1.0 : 0.0;
    }
    const double log_lambda = std::log(lambda);
    double tail = 0.0;
    for (std::size_t n = dim;; ++n) {
        const double nd = static_cast<double>(n);
        const double term = std::exp(-lambda + nd * log_lambda - std::lgamma(nd + 1.0));
        tail += term;
        if (nd > lambda && (term == 0.0 || term < tail * 1e-18)) {
            break;
        }
    }
    return tail;
}

std::size_t min_truncation(double alpha_max, double tol) {
    std::size_t dim = 1;
    while (!(poisson_tail(alpha_max, dim) < tol)) {
        ++dim;
    }
    return dim;
}

}  // namespace cqed
