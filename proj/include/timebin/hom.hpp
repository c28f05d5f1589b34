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

// Hong-Ou-Mandel projection of a target photon onto a reference photon.
//
// A target rho and a pure reference |phi> meeting on a balanced beam splitter
// leave through different ports (anti-bunching) with probability
//
//     P_ab = (1 - V <phi|rho|phi>) / 2,
//
// where V is the dip visibility. Everything in this header is built on that
// two-outcome POVM plus the count statistics needed to estimate P_ab.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "timebin/quantum.hpp"

namespace timebin {

/// Gaussian time-bin wavepackets. `coherence_time_ps` maps to the amplitude
/// width sigma_t = coherence_time / sqrt(2).
struct TemporalModeModel {
    double bin_spacing_ps = 8.0;
    double coherence_time_ps = 2.3;

    double sigma_ps() const;
    void validate() const;
};

struct NoiseModel {
    double visibility = 1.0;
    /// Accidental coincidences per outcome, as a fraction of mean_counts.
    double accidental_rate = 0.0;
    /// Expected signal coincidences per setting.
    double mean_counts = 1e4;

    void validate() const;
};

struct HomSetting {
    PureState reference;
    double delay_ps = 0.0;
    NoiseModel noise{};
};

struct CountRecord {
    std::uint64_t antibunching = 0;
    std::uint64_t bunching = 0;
    HomSetting setting;
};

double antibunching_probability(const DensityMatrix& target, const PureState& reference, double visibility);

/// |<phi|psi>|^2 = 1 - 2 P_ab. Slightly unphysical inputs are clamped; values
/// outside [-0.05, 0.55] are rejected.
double overlap_from_antibunching(double p_ab);

/// Amplitude overlap exp(-delay^2 / (4 sigma_t^2)) of two wavepackets.
double bin_overlap(double delay_ps, const TemporalModeModel& model);

/// Overlap amplitudes <t_j|phi_k(delay)> between the orthonormal time-bin
/// modes and reference bin k displaced by `delay_ps`. Rows index the target
/// bin j, columns the reference bin k.
///
/// The bins are Gaussian wavepackets made exactly orthonormal (symmetric
/// orthogonalisation on a padded lattice), so the matrix is the identity at
/// zero delay and a one-bin shift at delay = bin spacing.
Eigen::MatrixXd displaced_overlaps(std::size_t bins, double delay_ps, const TemporalModeModel& model);

struct ScanPoint {
    double delay_ps = 0.0;
    double p_antibunch = 0.0;
    double p_bunch = 0.0;
};

std::vector<ScanPoint> hom_scan(const DensityMatrix& target, const PureState& reference,
                                std::span<const double> delays_ps, const TemporalModeModel& model,
                                const NoiseModel& noise);

/// Poissonian anti-bunching/bunching counts (coincidence-normalised convention:
/// bunching mean is mean_counts * (1 - p_ab)), plus accidentals on both.
CountRecord simulate_counts(double p_ab, const HomSetting& setting, std::uint64_t seed);

/// Pseudo-number-resolved bunching detection: one balanced-or-not splitter and
/// two detectors on an output port.
struct PnrCalibration {
    double splitting_ratio = 0.5;
    double efficiency = 1.0;

    /// Probability that a bunched pair fires both detectors, 2 r (1 - r) eta.
    double bunched_detection_probability() const;
    void validate() const;
};

/// Like simulate_counts, but the bunching channel is the raw pseudo-PNR count.
CountRecord simulate_counts_pnr(double p_ab, const HomSetting& setting, const PnrCalibration& calibration,
                                std::uint64_t seed);

/// (a) Reference and its orthogonal complement at zero delay; the two P_ab
/// sum to 1/2, so p = 0.5 C_ref / (C_ref + C_orth).
double estimate_p_method_a(const CountRecord& counts_ref, const CountRecord& counts_orth);

/// (b) Anti-bunching against calibrated pseudo-PNR bunching counts.
double estimate_p_method_b(const CountRecord& record, double splitting_ratio, double efficiency);

/// (c) Dip counts against counts far outside the interference region (p = 1/2).
double estimate_p_method_c(const CountRecord& counts_dip, const CountRecord& counts_far);

/// Second-quantised brute force for P_ab with V = 1: two photons in 2d modes
/// (d time bins x 2 paths), a balanced beam splitter on the path index, and
/// permanent-based output amplitudes summed over one-photon-per-port patterns.
double fock_oracle(const PureState& target, const PureState& reference);

}  // namespace timebin
