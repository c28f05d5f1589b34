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

// Test-side reference implementations of the walk: dense full-space
// matrices and a closed-form brute-force grid for one step.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "timebin/qwalk.hpp"

namespace oracle {

using timebin::CMatrix;
using timebin::Complex;
using timebin::CVector;

inline CMatrix coin(const timebin::CoinParams& p) {
    const Complex i(0.0, 1.0);
    const double c = std::cos(p.theta / 2), s = std::sin(p.theta / 2);
    CMatrix u(2, 2);
    u << std::exp(-i * (p.phi1 + p.phi2) / 2.0) * c, std::exp(i * (p.phi1 - p.phi2) / 2.0) * s,
        -std::exp(i * (p.phi2 - p.phi1) / 2.0) * s, std::exp(i * (p.phi1 + p.phi2) / 2.0) * c;
    return u;
}

// (I_bins x U) in the bin-major, coin-minor ordering.
inline CMatrix coin_full(std::size_t bins, const timebin::CoinParams& p) {
    const auto n = static_cast<Eigen::Index>(bins);
    CMatrix out = CMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) out.block(2 * k, 2 * k, 2, 2) = coin(p);
    return out;
}

inline CMatrix shift_full(std::size_t bins) {
    const auto n = static_cast<Eigen::Index>(bins);
    CMatrix out = CMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out(2 * k + 1, 2 * k + 1) = 1.0;
        if (k + 1 < n) out(2 * k + 2, 2 * k) = 1.0;
    }
    return out;
}

inline CVector evolve(std::size_t bins, const timebin::CoinSequence& coins) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(2 * bins));
    v(0) = 1.0;
    for (const auto& c : coins) v = shift_full(bins) * coin_full(bins, c) * v;
    return v;
}

// Unnormalised walker after coins[0..n-1] with shifts, the final coin, and
// projection onto the up coin state.
inline CVector projected_walker(const timebin::CoinSequence& coins) {
    const std::size_t bins = coins.size();
    const timebin::CoinSequence steps(coins.begin(), coins.end() - 1);
    const CVector v = coin_full(bins, coins.back()) * evolve(bins, steps);
    CVector w(static_cast<Eigen::Index>(bins));
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = v(2 * k);
    return w;
}

struct GridBest {
    double objective = std::numeric_limits<double>::infinity();
    double fidelity = 0.0;
    double success = 0.0;
};

// One step then the measurement coin leaves the walker
//   sin(t2/2) sin(t1/2) |t0> + e^{i chi} cos(t2/2) cos(t1/2) |t1>
// up to global phase, where chi collects all Euler phases. Half-angles in
// [0, pi/2] suffice because chi absorbs the signs.
inline GridBest qubit_grid_search(const timebin::PureState& target, int points, double weight) {
    GridBest best;
    const double pi = std::numbers::pi;
    for (int a = 0; a < points; ++a) {
        const double x = 0.5 * pi * a / (points - 1);
        for (int b = 0; b < points; ++b) {
            const double y = 0.5 * pi * b / (points - 1);
            for (int c = 0; c < points; ++c) {
                const double chi = 2.0 * pi * c / (points - 1);
                const Complex w0 = std::sin(y) * std::sin(x);
                const Complex w1 = std::polar(std::cos(y) * std::cos(x), chi);
                const double p = std::norm(w0) + std::norm(w1);
                if (p < 1e-300) continue;
                const double f = std::norm(std::conj(target[0]) * w0 + std::conj(target[1]) * w1) / p;
                const double objective = (1.0 - f * f) + weight * (1.0 - p);
                if (objective < best.objective) best = GridBest{objective, f, p};
            }
        }
    }
    return best;
}

}  // namespace oracle
