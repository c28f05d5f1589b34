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

#include "timebin/hom.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

namespace timebin {

namespace {

// Lattice padding (bins) on each side of the physical range. Orthogonalisation
// coefficients decay like g(spacing)^distance, so 8 bins is far below 1e-15.
constexpr Eigen::Index kLatticePad = 8;

std::uint64_t poisson(std::mt19937_64& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(rng);
}

// Orthonormalised lattice modes: C = G^{-1/2} for the Gaussian Gram matrix G.
class BinLattice {
  public:
    BinLattice(std::size_t bins, const TemporalModeModel& model)
        : model_(model), size_(static_cast<Eigen::Index>(bins) + 2 * kLatticePad) {
        Eigen::MatrixXd gram(size_, size_);
        for (Eigen::Index l = 0; l < size_; ++l)
            for (Eigen::Index m = 0; m < size_; ++m)
                gram(l, m) = bin_overlap(static_cast<double>(m - l) * model.bin_spacing_ps, model);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        const Eigen::VectorXd inv_root = solver.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd full = solver.eigenvectors() * inv_root.asDiagonal() * solver.eigenvectors().transpose();
        coeffs_ = full.middleCols(kLatticePad, static_cast<Eigen::Index>(bins));
    }

    Eigen::MatrixXd overlaps(double delay_ps) const {
        Eigen::MatrixXd kernel(size_, size_);
        for (Eigen::Index l = 0; l < size_; ++l)
            for (Eigen::Index m = 0; m < size_; ++m)
                kernel(l, m) = bin_overlap(static_cast<double>(m - l) * model_.bin_spacing_ps + delay_ps, model_);
        return coeffs_.transpose() * kernel * coeffs_;
    }

  private:
    TemporalModeModel model_;
    Eigen::Index size_;
    Eigen::MatrixXd coeffs_;
};

double interference_term(const DensityMatrix& target, const CVector& displaced_reference) {
    return (displaced_reference.adjoint() * target.matrix() * displaced_reference)(0, 0).real();
}

void require_counts_nonzero(double total, const char* what) {
    if (!(total > 0.0)) throw Error(std::string(what) + ": normalising counts are zero");
}

}  // namespace

double TemporalModeModel::sigma_ps() const { return coherence_time_ps / std::sqrt(2.0); }

void TemporalModeModel::validate() const {
    if (!(bin_spacing_ps > 0.0) || !std::isfinite(bin_spacing_ps))
        throw Error("TemporalModeModel: bin_spacing_ps must be > 0");
    if (!(coherence_time_ps > 0.0) || !std::isfinite(coherence_time_ps))
        throw Error("TemporalModeModel: coherence_time_ps must be > 0");
}

void NoiseModel::validate() const {
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw Error("NoiseModel: visibility must lie in [0, 1]");
    if (!(accidental_rate >= 0.0) || !std::isfinite(accidental_rate))
        throw Error("NoiseModel: accidental_rate must be >= 0");
    if (!(mean_counts > 0.0) || !std::isfinite(mean_counts)) throw Error("NoiseModel: mean_counts must be > 0");
}

double antibunching_probability(const DensityMatrix& target, const PureState& reference, double visibility) {
    if (target.dim() != reference.dim())
        throw DimensionMismatch("antibunching_probability: target has dimension " + std::to_string(target.dim()) +
                                ", reference " + std::to_string(reference.dim()));
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw Error("antibunching_probability: visibility must lie in [0, 1]");
    const double overlap = std::clamp(interference_term(target, reference.amplitudes()), 0.0, 1.0);
    return 0.5 * (1.0 - visibility * overlap);
}

double overlap_from_antibunching(double p_ab) {
    if (!(p_ab >= -0.05 && p_ab <= 0.55))
        throw Error("overlap_from_antibunching: p_ab = " + std::to_string(p_ab) + " is outside [-0.05, 0.55]");
    return 1.0 - 2.0 * std::clamp(p_ab, 0.0, 0.5);
}

double bin_overlap(double delay_ps, const TemporalModeModel& model) {
    const double sigma = model.sigma_ps();
    return std::exp(-delay_ps * delay_ps / (4.0 * sigma * sigma));
}

Eigen::MatrixXd displaced_overlaps(std::size_t bins, double delay_ps, const TemporalModeModel& model) {
    model.validate();
    if (bins == 0) throw Error("displaced_overlaps: need at least one bin");
    return BinLattice(bins, model).overlaps(delay_ps);
}

std::vector<ScanPoint> hom_scan(const DensityMatrix& target, const PureState& reference,
                                std::span<const double> delays_ps, const TemporalModeModel& model,
                                const NoiseModel& noise) {
    model.validate();
    noise.validate();
    if (target.dim() != reference.dim())
        throw DimensionMismatch("hom_scan: target and reference dimensions differ");
    const BinLattice lattice(reference.dim(), model);
    std::vector<ScanPoint> points;
    points.reserve(delays_ps.size());
    for (const double delay : delays_ps) {
        if (!std::isfinite(delay)) throw Error("hom_scan: delays must be finite");
        const CVector displaced = lattice.overlaps(delay).cast<Complex>() * reference.amplitudes();
        const double overlap = std::clamp(interference_term(target, displaced), 0.0, 1.0);
        const double p_ab = 0.5 * (1.0 - noise.visibility * overlap);
        points.push_back({delay, p_ab, 1.0 - p_ab});
    }
    return points;
}

CountRecord simulate_counts(double p_ab, const HomSetting& setting, std::uint64_t seed) {
    setting.noise.validate();
    if (!(p_ab >= 0.0 && p_ab <= 0.5)) throw Error("simulate_counts: p_ab must lie in [0, 0.5]");
    const double n = setting.noise.mean_counts;
    const double accidentals = n * setting.noise.accidental_rate;
    std::mt19937_64 rng(seed);
    CountRecord record{0, 0, setting};
    record.antibunching = poisson(rng, n * p_ab + accidentals);
    record.bunching = poisson(rng, n * (1.0 - p_ab) + accidentals);
    return record;
}

double PnrCalibration::bunched_detection_probability() const {
    return 2.0 * splitting_ratio * (1.0 - splitting_ratio) * efficiency;
}

void PnrCalibration::validate() const {
    if (!(splitting_ratio > 0.0 && splitting_ratio < 1.0))
        throw Error("PnrCalibration: splitting_ratio must lie in (0, 1)");
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw Error("PnrCalibration: efficiency must lie in (0, 1]");
}

CountRecord simulate_counts_pnr(double p_ab, const HomSetting& setting, const PnrCalibration& calibration,
                                std::uint64_t seed) {
    setting.noise.validate();
    calibration.validate();
    if (!(p_ab >= 0.0 && p_ab <= 0.5)) throw Error("simulate_counts_pnr: p_ab must lie in [0, 0.5]");
    const double n = setting.noise.mean_counts;
    const double accidentals = n * setting.noise.accidental_rate;
    std::mt19937_64 rng(seed);
    CountRecord record{0, 0, setting};
    record.antibunching = poisson(rng, n * p_ab + accidentals);
    record.bunching = poisson(rng, n * (1.0 - p_ab) * calibration.bunched_detection_probability() + accidentals);
    return record;
}

double estimate_p_method_a(const CountRecord& counts_ref, const CountRecord& counts_orth) {
    const double c_ref = static_cast<double>(counts_ref.antibunching);
    const double total = c_ref + static_cast<double>(counts_orth.antibunching);
    require_counts_nonzero(total, "estimate_p_method_a");
    return 0.5 * c_ref / total;
}

double estimate_p_method_b(const CountRecord& record, double splitting_ratio, double efficiency) {
    const PnrCalibration calibration{splitting_ratio, efficiency};
    calibration.validate();
    const double c_ab = static_cast<double>(record.antibunching);
    const double c_b = static_cast<double>(record.bunching) / calibration.bunched_detection_probability();
    require_counts_nonzero(c_ab + c_b, "estimate_p_method_b");
    return c_ab / (c_ab + c_b);
}

double estimate_p_method_c(const CountRecord& counts_dip, const CountRecord& counts_far) {
    const double c_far = static_cast<double>(counts_far.antibunching);
    require_counts_nonzero(c_far, "estimate_p_method_c");
    return 0.5 * static_cast<double>(counts_dip.antibunching) / c_far;
}

double fock_oracle(const PureState& target, const PureState& reference) {
    if (target.dim() != reference.dim())
        throw DimensionMismatch("fock_oracle: target has dimension " + std::to_string(target.dim()) +
                                ", reference " + std::to_string(reference.dim()));
    const auto d = static_cast<Eigen::Index>(target.dim());
    const Eigen::Index modes = 2 * d;  // mode index = path * d + bin

    // Balanced beam splitter on the path index, identity on time bins.
    const double r = 1.0 / std::sqrt(2.0);
    CMatrix unitary = CMatrix::Zero(modes, modes);
    for (Eigen::Index bin = 0; bin < d; ++bin) {
        unitary(bin, bin) = r;
        unitary(bin, d + bin) = r;
        unitary(d + bin, bin) = r;
        unitary(d + bin, d + bin) = -r;
    }

    // Input: sum_ij psi_i phi_j a_i^dag b_j^dag |vac>. Each basis term has one
    // photon in mode i and one in mode d + j, so the amplitude to the output
    // pattern {m, n} is the permanent of the 2x2 submatrix, divided by sqrt(2)
    // when both photons share a mode.
    double antibunch = 0.0;
    double total = 0.0;
    for (Eigen::Index m = 0; m < modes; ++m) {
        for (Eigen::Index n = m; n < modes; ++n) {
            Complex amplitude = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                const Complex psi = target.amplitudes()(i);
                if (psi == Complex(0.0)) continue;
                for (Eigen::Index j = 0; j < d; ++j) {
                    const Complex phi = reference.amplitudes()(j);
                    if (phi == Complex(0.0)) continue;
                    const Complex permanent =
                        unitary(m, i) * unitary(n, d + j) + unitary(m, d + j) * unitary(n, i);
                    amplitude += psi * phi * permanent;
                }
            }
            if (m == n) amplitude *= r;
            const double p = std::norm(amplitude);
            total += p;
            if (m < d && n >= d) antibunch += p;
        }
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("fock_oracle: output distribution is not normalised");
    return antibunch;
}

}  // namespace timebin
