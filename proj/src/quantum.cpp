// Copyright 2026 The timebin-lab Authors
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

#include "timebin/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

namespace timebin {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string dims_message(const char* what, Eigen::Index a, Eigen::Index b) {
    return std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")";
}

// Square root of a PSD Hermitian matrix with eigenvalues clamped at zero.
// Eigenvalues below this (relative to unit trace) are rounding noise; their
// square roots would otherwise leak O(1e-8) into fidelities of pure states.
constexpr double kEigenFloor = 1e-14;

Eigen::VectorXd floored_roots(const Eigen::VectorXd& eigenvalues) {
    return eigenvalues.unaryExpr([](double x) { return x > kEigenFloor ? std::sqrt(x) : 0.0; });
}

CMatrix psd_sqrt(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
    Eigen::VectorXd roots = floored_roots(solver.eigenvalues());
    return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

bool is_time_pol(Basis a, Basis b) { return a == Basis::TimeBin && b == Basis::Polarization; }
bool is_pol_time(Basis a, Basis b) { return a == Basis::Polarization && b == Basis::TimeBin; }

// Maps the Kronecker index of pol (x) time onto the canonical time (x) pol index.
Eigen::Index pol_time_to_canonical(Eigen::Index kron_index, Eigen::Index time_dim) {
    Eigen::Index pol = kron_index / time_dim;
    Eigen::Index bin = kron_index % time_dim;
    return 2 * bin + pol;
}

}  // namespace

std::string to_string(Basis basis) {
    switch (basis) {
    case Basis::TimeBin:
        return "time-bin";
    case Basis::Polarization:
        return "polarization";
    case Basis::Hybrid:
        return "hybrid";
    }
    return "unknown";
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(CVector amplitudes, Basis basis) : amplitudes_(std::move(amplitudes)), basis_(basis) {
    if (amplitudes_.size() == 0) throw Error("PureState: dimension must be at least 1");
    if (basis_ == Basis::Hybrid && amplitudes_.size() % 2 != 0)
        throw Error("PureState: hybrid states need an even dimension (2 x time bins)");
    const double norm = amplitudes_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormTolerance)
        throw Error("PureState: amplitudes must have unit norm (got " + std::to_string(norm) + ")");
}

PureState PureState::normalized(CVector amplitudes, Basis basis) {
    const double norm = amplitudes.norm();
    if (!std::isfinite(norm) || norm < 1e-300) throw Error("PureState: cannot normalize a zero vector");
    amplitudes /= norm;
    return PureState(std::move(amplitudes), basis);
}

PureState PureState::basis_state(std::size_t dim, std::size_t index, Basis basis) {
    if (index >= dim) throw Error("PureState::basis_state: index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v), basis);
}

namespace states {

PureState t(std::size_t k, std::size_t dim) { return PureState::basis_state(dim, k, Basis::TimeBin); }

PureState plus() {
    CVector v(2);
    v << kInvSqrt2, kInvSqrt2;
    return PureState(v);
}

PureState minus() {
    CVector v(2);
    v << kInvSqrt2, -kInvSqrt2;
    return PureState(v);
}

PureState plus_i() {
    CVector v(2);
    v << kInvSqrt2, Complex(0.0, kInvSqrt2);
    return PureState(v);
}

PureState minus_i() {
    CVector v(2);
    v << kInvSqrt2, Complex(0.0, -kInvSqrt2);
    return PureState(v);
}

PureState horizontal() { return PureState::basis_state(2, 0, Basis::Polarization); }
PureState vertical() { return PureState::basis_state(2, 1, Basis::Polarization); }

}  // namespace states

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
        throw Error("DensityMatrix: matrix must be square and non-empty");
    if (!matrix_.allFinite()) throw Error("DensityMatrix: non-finite entries");
    const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kMatrixTolerance) throw Error("DensityMatrix: matrix is not Hermitian");
    const Complex tr = matrix_.trace();
    if (std::abs(tr.real() - 1.0) > kMatrixTolerance || std::abs(tr.imag()) > kMatrixTolerance)
        throw Error("DensityMatrix: trace must equal 1 (got " + std::to_string(tr.real()) + ")");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(matrix_), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kMatrixTolerance)
        throw Error("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(const PureState& state)
    : matrix_(state.amplitudes() * state.amplitudes().adjoint()) {}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    if (dim == 0) throw Error("DensityMatrix::maximally_mixed: dimension must be at least 1");
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

// ---------------------------------------------------------------------------
// Observable

Observable::Observable(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
        throw Error("Observable: matrix must be square and non-empty");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kMatrixTolerance)
        throw Error("Observable: matrix is not Hermitian");
    const auto n = matrix_.rows();
    if ((matrix_ * matrix_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kMatrixTolerance)
        throw Error("Observable: eigenvalues must be +1/-1 (matrix squared is not the identity)");
    if ((matrix_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < kMatrixTolerance ||
        (matrix_ + CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < kMatrixTolerance)
        throw Error("Observable: +/-identity is not a two-outcome observable");
}

std::pair<PureState, PureState> Observable::eigenstates() const {
    if (dim() != 2) throw Error("Observable::eigenstates: only two-dimensional observables are supported");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(matrix_));
    // Ascending order: column 0 is the -1 eigenvector.
    const auto& vecs = solver.eigenvectors();
    if (std::abs(solver.eigenvalues()(0) + 1.0) > 1e-9 || std::abs(solver.eigenvalues()(1) - 1.0) > 1e-9)
        throw Error("Observable::eigenstates: observable must have both eigenvalues +1 and -1");
    return {PureState::normalized(vecs.col(1)), PureState::normalized(vecs.col(0))};
}

// ---------------------------------------------------------------------------
// Operations

Complex inner_product(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch(dims_message("inner_product", a.amplitudes().size(), b.amplitudes().size()));
    return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const DensityMatrix& theo, const DensityMatrix& exp) {
    if (theo.dim() != exp.dim())
        throw DimensionMismatch(dims_message("fidelity", theo.matrix().rows(), exp.matrix().rows()));
    const CMatrix root = psd_sqrt(theo.matrix());
    const CMatrix inner = hermitian_part(root * exp.matrix() * root);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(inner, Eigen::EigenvaluesOnly);
    const double tr = floored_roots(solver.eigenvalues()).sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch(dims_message("trace_distance", a.matrix().rows(), b.matrix().rows()));
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a.matrix() - b.matrix()), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

PureState tensor(const PureState& a, const PureState& b) {
    const auto da = a.amplitudes().size();
    const auto db = b.amplitudes().size();
    CVector out(da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < db; ++j) out(i * db + j) = a.amplitudes()(i) * b.amplitudes()(j);
    if (is_pol_time(a.basis(), b.basis()) && da == 2) {
        CVector canonical(out.size());
        for (Eigen::Index k = 0; k < out.size(); ++k) canonical(pol_time_to_canonical(k, db)) = out(k);
        out = std::move(canonical);
    }
    Basis basis = a.basis() == b.basis() ? a.basis() : Basis::TimeBin;
    if ((is_time_pol(a.basis(), b.basis()) && db == 2) || (is_pol_time(a.basis(), b.basis()) && da == 2))
        basis = Basis::Hybrid;
    return PureState::normalized(std::move(out), basis);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const auto da = a.matrix().rows();
    const auto db = b.matrix().rows();
    CMatrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index k = 0; k < da; ++k) out.block(i * db, k * db, db, db) = a.matrix()(i, k) * b.matrix();
    return DensityMatrix(hermitian_part(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep, std::size_t d1, std::size_t d2) {
    if (keep > 1) throw Error("partial_trace: subsystem index must be 0 or 1");
    if (d1 == 0 || d2 == 0 || d1 * d2 != rho.dim())
        throw DimensionMismatch("partial_trace: d1*d2 = " + std::to_string(d1 * d2) + " but rho has dimension " +
                                std::to_string(rho.dim()));
    const auto n1 = static_cast<Eigen::Index>(d1);
    const auto n2 = static_cast<Eigen::Index>(d2);
    const CMatrix& m = rho.matrix();
    CMatrix out;
    if (keep == 0) {
        out = CMatrix::Zero(n1, n1);
        for (Eigen::Index i = 0; i < n1; ++i)
            for (Eigen::Index k = 0; k < n1; ++k)
                for (Eigen::Index j = 0; j < n2; ++j) out(i, k) += m(i * n2 + j, k * n2 + j);
    } else {
        out = CMatrix::Zero(n2, n2);
        for (Eigen::Index j = 0; j < n2; ++j)
            for (Eigen::Index l = 0; l < n2; ++l)
                for (Eigen::Index i = 0; i < n1; ++i) out(j, l) += m(i * n2 + j, i * n2 + l);
    }
    return DensityMatrix(hermitian_part(out));
}

DensityMatrix convex_mixture(std::span<const std::pair<DensityMatrix, double>> components) {
    if (components.empty()) throw Error("convex_mixture: no components");
    const auto n = components.front().first.matrix().rows();
    CMatrix out = CMatrix::Zero(n, n);
    double total = 0.0;
    for (const auto& [rho, weight] : components) {
        if (rho.matrix().rows() != n) throw DimensionMismatch(dims_message("convex_mixture", n, rho.matrix().rows()));
        if (!(weight >= 0.0)) throw Error("convex_mixture: weights must be non-negative");
        out += weight * rho.matrix();
        total += weight;
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw Error("convex_mixture: weights must sum to 1 (got " + std::to_string(total) + ")");
    return DensityMatrix(hermitian_part(out));
}

PureState random_pure_state(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw Error("random_pure_state: dimension must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return PureState::normalized(std::move(v));
}

}  // namespace timebin
