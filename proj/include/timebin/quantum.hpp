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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace timebin {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Raised for violated preconditions and malformed inputs across the library.
class Error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kMatrixTolerance = 1e-10;

/// Which physical degree of freedom the amplitudes are expressed in.
///
/// Hybrid states use the canonical ordering (t0 H, t0 V, t1 H, t1 V, ...):
/// the time-bin index is the slow index and polarization the fast one, so the
/// amplitude of |t_k>|p> sits at 2*k + p with p = 0 for H and 1 for V.
enum class Basis { TimeBin, Polarization, Hybrid };

std::string to_string(Basis basis);

/// Unit-norm amplitude vector. Construction validates the norm.
class PureState {
  public:
    /// Throws if the norm differs from 1 by more than kNormTolerance.
    PureState(CVector amplitudes, Basis basis = Basis::TimeBin);

    /// Rescales to unit norm; throws for a (near) zero vector.
    static PureState normalized(CVector amplitudes, Basis basis = Basis::TimeBin);
    static PureState basis_state(std::size_t dim, std::size_t index, Basis basis = Basis::TimeBin);

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector& amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
    Basis basis() const { return basis_; }

  private:
    CVector amplitudes_;
    Basis basis_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
  public:
    /// Validates Hermiticity, trace and eigenvalues against kMatrixTolerance.
    explicit DensityMatrix(CMatrix matrix);
    DensityMatrix(const PureState& state);  // NOLINT: a pure state is a density matrix

    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix& matrix() const { return matrix_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    double purity() const;

  private:
    CMatrix matrix_;
};

/// Two-outcome observable: Hermitian with eigenvalues +1 and -1.
class Observable {
  public:
    explicit Observable(CMatrix matrix);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix& matrix() const { return matrix_; }
    /// Eigenvectors for the +1 and -1 eigenvalues (2-dim observables only).
    std::pair<PureState, PureState> eigenstates() const;

  private:
    CMatrix matrix_;
};

namespace states {
PureState t(std::size_t k, std::size_t dim = 2);
PureState plus();
PureState minus();
PureState plus_i();
PureState minus_i();
PureState horizontal();
PureState vertical();
}  // namespace states

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// <a|b>, antilinear in the first argument.
Complex inner_product(const PureState& a, const PureState& b);

/// Uhlmann fidelity (Tr sqrt(sqrt(theo) exp sqrt(theo)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& theo, const DensityMatrix& exp);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Kronecker product. A time-bin state tensored with a polarization state (in
/// either order) is returned in the canonical hybrid ordering.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state of `keep` (0 or 1) for a bipartite rho on dims (d1, d2).
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep, std::size_t d1, std::size_t d2);

DensityMatrix convex_mixture(std::span<const std::pair<DensityMatrix, double>> components);

/// Haar-random pure state, reproducible for a given seed.
PureState random_pure_state(std::size_t dim, std::uint64_t seed);

/// Projects an arbitrary square matrix onto its Hermitian part.
CMatrix hermitian_part(const CMatrix& m);

}  // namespace timebin
