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

#include "timebin/qwalk.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "timebin/optimize.hpp"

namespace timebin {

namespace {

constexpr int kUp = 0;
constexpr int kDown = 1;
constexpr double kTruncationTolerance = 1e-12;

void apply_coin_in_place(CVector& amps, const CMatrix& coin) {
    for (Eigen::Index k = 0; k + 1 < amps.size(); k += 2) {
        const Complex up = amps(k);
        const Complex down = amps(k + 1);
        amps(k) = coin(0, 0) * up + coin(0, 1) * down;
        amps(k + 1) = coin(1, 0) * up + coin(1, 1) * down;
    }
}

void shift_in_place(CVector& amps) {
    const Eigen::Index bins = amps.size() / 2;
    if (std::abs(amps(2 * (bins - 1) + kUp)) > kTruncationTolerance)
        throw Error("shift: up-amplitude in the last bin would leave the walker space");
    for (Eigen::Index k = bins - 1; k > 0; --k) amps(2 * k + kUp) = amps(2 * (k - 1) + kUp);
    amps(kUp) = 0.0;
}

CoinParams params_at(const Eigen::VectorXd& x, Eigen::Index i) { return CoinParams{x(3 * i), x(3 * i + 1), x(3 * i + 2)}; }

// Walker amplitudes (unnormalised) after the full preparation and projection
// onto |up>; success probability is their squared norm.
CVector projected_walker(const Eigen::VectorXd& x, Eigen::Index n_steps) {
    const Eigen::Index bins = n_steps + 1;
    CVector amps = CVector::Zero(2 * bins);
    amps(kUp) = 1.0;
    for (Eigen::Index step = 0; step < n_steps; ++step) {
        apply_coin_in_place(amps, angles_to_coin(params_at(x, step)));
        shift_in_place(amps);
    }
    apply_coin_in_place(amps, angles_to_coin(params_at(x, n_steps)));
    CVector walker(bins);
    for (Eigen::Index k = 0; k < bins; ++k) walker(k) = amps(2 * k + kUp);
    return walker;
}

double wrap(double angle, double period) {
    double r = std::fmod(angle, period);
    if (r < 0.0) r += period;
    return r;
}

// Folds Euler angles into theta in [0, pi], phases in [0, 2pi) without
// changing the coin beyond a global phase.
CoinParams canonical(CoinParams p) {
    constexpr double pi = std::numbers::pi;
    double theta = wrap(p.theta, 2.0 * pi);
    double phi1 = p.phi1;
    double phi2 = p.phi2;
    if (theta > pi) {
        // Ry(2pi - a) = -Ry(-a) = -Rz(pi) Ry(a) Rz(-pi).
        theta = 2.0 * pi - theta;
        phi1 -= pi;
        phi2 += pi;
    }
    return CoinParams{theta, wrap(phi1, 2.0 * pi), wrap(phi2, 2.0 * pi)};
}

}  // namespace

WalkState::WalkState(CVector amplitudes, std::size_t step_count)
    : amplitudes_(std::move(amplitudes)), step_count_(step_count) {
    if (amplitudes_.size() < 2 || amplitudes_.size() % 2 != 0)
        throw Error("WalkState: amplitudes must have length 2 * n_bins");
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) throw Error("WalkState: amplitudes must have unit norm");
}

WalkState WalkState::initial(std::size_t n_bins) {
    if (n_bins < 1) throw Error("WalkState::initial: need at least one bin");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(2 * n_bins));
    v(kUp) = 1.0;
    return WalkState(v, 0);
}

CMatrix angles_to_coin(const CoinParams& p) {
    const Complex i(0.0, 1.0);
    const double c = std::cos(0.5 * p.theta);
    const double s = std::sin(0.5 * p.theta);
    CMatrix rz1(2, 2), ry(2, 2), rz2(2, 2);
    rz1 << std::exp(-0.5 * i * p.phi1), 0.0, 0.0, std::exp(0.5 * i * p.phi1);
    ry << c, s, -s, c;
    rz2 << std::exp(-0.5 * i * p.phi2), 0.0, 0.0, std::exp(0.5 * i * p.phi2);
    return rz2 * ry * rz1;
}

CMatrix shift_operator(std::size_t n_bins) {
    if (n_bins < 2) throw Error("shift_operator: need at least 2 bins");
    const auto n = static_cast<Eigen::Index>(n_bins);
    CMatrix s = CMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        s(2 * k + kDown, 2 * k + kDown) = 1.0;
        if (k + 1 < n) s(2 * (k + 1) + kUp, 2 * k + kUp) = 1.0;
    }
    return s;
}

WalkState apply_shift(const WalkState& state) {
    if (state.n_bins() < 2) throw Error("apply_shift: need at least 2 bins");
    CVector amps = state.amplitudes();
    shift_in_place(amps);
    return WalkState(std::move(amps), state.step_count());
}

WalkState apply_coin(const WalkState& state, const CoinParams& coin) {
    CVector amps = state.amplitudes();
    apply_coin_in_place(amps, angles_to_coin(coin));
    return WalkState(PureState::normalized(std::move(amps)).amplitudes(), state.step_count());
}

WalkState walk_evolve(const WalkState& initial, const CoinSequence& coins) {
    if (initial.n_bins() < initial.step_count() + coins.size() + 1)
        throw Error("walk_evolve: " + std::to_string(initial.n_bins()) + " bins cannot hold " +
                    std::to_string(initial.step_count() + coins.size()) + " steps");
    CVector amps = initial.amplitudes();
    for (const auto& coin : coins) {
        apply_coin_in_place(amps, angles_to_coin(coin));
        shift_in_place(amps);
    }
    amps /= amps.norm();
    return WalkState(std::move(amps), initial.step_count() + coins.size());
}

CoinProjection project_coin(const WalkState& state, const PureState& coin_state) {
    if (coin_state.dim() != 2) throw DimensionMismatch("project_coin: coin state must be two-dimensional");
    const auto bins = static_cast<Eigen::Index>(state.n_bins());
    CVector walker(bins);
    for (Eigen::Index k = 0; k < bins; ++k)
        walker(k) = std::conj(coin_state[0]) * state.amplitudes()(2 * k) +
                    std::conj(coin_state[1]) * state.amplitudes()(2 * k + 1);
    const double probability = walker.squaredNorm();
    if (probability < 1e-12) throw Error("project_coin: projection annihilates the state");
    return CoinProjection{PureState::normalized(std::move(walker)), probability};
}

CoinProjection synthesized_walker(const CoinSequence& coins) {
    if (coins.empty()) throw Error("synthesized_walker: need at least the measurement coin");
    const std::size_t n_steps = coins.size() - 1;
    WalkState state = walk_evolve(WalkState::initial(n_steps + 1), CoinSequence(coins.begin(), coins.end() - 1));
    state = apply_coin(state, coins.back());
    return project_coin(state, PureState::basis_state(2, kUp, Basis::Polarization));
}

SynthesisResult synthesize(const PureState& target, std::size_t n_steps, std::size_t restarts, std::uint64_t seed,
                           const SynthesisOptions& options) {
    if (restarts < 1) throw Error("synthesize: restarts must be >= 1");
    if (n_steps + 1 < target.dim())
        throw Error("synthesize: " + std::to_string(n_steps) + " steps reach only " + std::to_string(n_steps + 1) +
                    " bins, target has dimension " + std::to_string(target.dim()));
    const auto steps = static_cast<Eigen::Index>(n_steps);
    const Eigen::Index bins = steps + 1;
    CVector padded = CVector::Zero(bins);
    padded.head(static_cast<Eigen::Index>(target.dim())) = target.amplitudes();

    const double lambda = options.success_weight;
    const optimize::Objective objective = [&](const Eigen::VectorXd& x) {
        const CVector walker = projected_walker(x, steps);
        const double p = walker.squaredNorm();
        if (p < 1e-300) return 1.0 + lambda;
        const double f = std::norm(padded.dot(walker)) / p;
        return (1.0 - f * f) + lambda * (1.0 - p);
    };

    optimize::NelderMeadOptions nm;
    nm.max_evaluations = options.max_evaluations;
    nm.initial_step = 0.6;

    constexpr double pi = std::numbers::pi;
    Eigen::VectorXd best_x;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed + r);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
        Eigen::VectorXd x0(3 * (steps + 1));
        for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = angle(rng);
        const optimize::MinimizeResult run = optimize::nelder_mead(objective, x0, nm);
        if (run.value < best_value) {
            best_value = run.value;
            best_x = run.x;
        }
    }

    CoinSequence coins;
    for (Eigen::Index i = 0; i <= steps; ++i) coins.push_back(canonical(params_at(best_x, i)));
    CoinProjection projection = synthesized_walker(coins);
    const double f = std::norm(padded.dot(projection.walker.amplitudes()));
    return SynthesisResult{std::move(coins),
                           PureState::basis_state(2, kUp, Basis::Polarization),
                           std::move(projection.walker),
                           f,
                           projection.success_probability,
                           (1.0 - f * f) + lambda * (1.0 - projection.success_probability)};
}

}  // namespace timebin
