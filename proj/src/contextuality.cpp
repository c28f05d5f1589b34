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

#include "timebin/contextuality.hpp"

#include <cmath>
#include <random>

namespace timebin {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

void require_two_qubits(const DensityMatrix& state, const char* what) {
    if (state.dim() != 4) throw DimensionMismatch(std::string(what) + ": state must be 4-dimensional (time x polarization)");
}

CMatrix projector(const PureState& s) { return s.amplitudes() * s.amplitudes().adjoint(); }

}  // namespace

PureState hybrid_entangled_state() {
    const double r = 1.0 / std::sqrt(2.0);
    CVector v = CVector::Zero(4);
    v(0) = r;  // t0 H
    v(3) = r;  // t1 V
    return PureState(v, Basis::Hybrid);
}

double correlator(const DensityMatrix& state, const Observable& time_observable, const Observable& pol_observable) {
    require_two_qubits(state, "correlator");
    if (time_observable.dim() != 2 || pol_observable.dim() != 2)
        throw DimensionMismatch("correlator: observables must be qubit observables");
    return (kron(time_observable.matrix(), pol_observable.matrix()) * state.matrix()).trace().real();
}

ChshSettings optimal_settings() {
    const double r = 1.0 / std::sqrt(2.0);
    return ChshSettings{Observable(pauli_z()), Observable(pauli_x()), Observable(r * (pauli_x() + pauli_z())),
                        Observable(r * (pauli_x() - pauli_z()))};
}

double chsh_value(const DensityMatrix& state, const ChshSettings& settings) {
    return correlator(state, settings.a0, settings.b0) - correlator(state, settings.a0, settings.b1) +
           correlator(state, settings.a1, settings.b0) + correlator(state, settings.a1, settings.b1);
}

DensityMatrix white_noise_mixture(const PureState& state, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error("white_noise_mixture: v must lie in [0, 1]");
    const auto d = static_cast<Eigen::Index>(state.dim());
    const CMatrix m = v * projector(state) + (1.0 - v) * CMatrix::Identity(d, d) / static_cast<double>(d);
    return DensityMatrix(hermitian_part(m));
}

ChshResult simulate_chsh(const DensityMatrix& state, const ChshSettings& settings, std::uint64_t shots_per_setting,
                         std::uint64_t seed, const NoiseModel& noise) {
    require_two_qubits(state, "simulate_chsh");
    if (shots_per_setting < 1) throw Error("simulate_chsh: shots_per_setting must be >= 1");
    noise.validate();

    const Observable* time_obs[] = {&settings.a0, &settings.a0, &settings.a1, &settings.a1};
    const Observable* pol_obs[] = {&settings.b0, &settings.b1, &settings.b0, &settings.b1};
    const CMatrix identity = CMatrix::Identity(2, 2);
    const double shots = static_cast<double>(shots_per_setting);

    ChshResult result;
    double variance = 0.0;
    for (int k = 0; k < 4; ++k) {
        const auto [a_plus, a_minus] = time_obs[k]->eigenstates();
        const auto [b_plus, b_minus] = pol_obs[k]->eigenstates();
        // Cells: (HOM reference, polarization outcome). Anti-bunching against
        // a reference heralds the opposite time outcome.
        const PureState* refs[] = {&a_plus, &a_minus};
        const double time_outcome[] = {-1.0, +1.0};
        const PureState* pols[] = {&b_plus, &b_minus};
        const double pol_outcome[] = {+1.0, -1.0};

        double weights[4];
        double weight_sum = 0.0;
        for (int r = 0; r < 2; ++r)
            for (int b = 0; b < 2; ++b) {
                const CMatrix e_ab = 0.5 * (identity - noise.visibility * projector(*refs[r]));
                const double w = (kron(e_ab, projector(*pols[b])) * state.matrix()).trace().real();
                weights[2 * r + b] = std::max(w, 0.0);
                weight_sum += weights[2 * r + b];
            }
        if (!(weight_sum > 0.0)) throw Error("simulate_chsh: no anti-bunching events possible for this state");

        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
        double counts[4];
        double total = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double mean = shots * weights[c] / weight_sum + 0.25 * shots * noise.accidental_rate;
            counts[c] = mean > 0.0 ? static_cast<double>(std::poisson_distribution<std::uint64_t>(mean)(rng)) : 0.0;
            total += counts[c];
        }
        if (total <= 0.0) throw Error("simulate_chsh: no counts recorded; increase shots_per_setting");

        double e = 0.0;
        double signs[4];
        for (int r = 0; r < 2; ++r)
            for (int b = 0; b < 2; ++b) {
                signs[2 * r + b] = time_outcome[r] * pol_outcome[b];
                e += signs[2 * r + b] * counts[2 * r + b];
            }
        e /= total;
        double var = 0.0;
        for (int c = 0; c < 4; ++c) var += (signs[c] - e) * (signs[c] - e) * counts[c];
        var /= total * total;

        result.correlators[static_cast<std::size_t>(k)] = e;
        variance += var;
    }
    result.s_value = result.correlators[0] - result.correlators[1] + result.correlators[2] + result.correlators[3];
    result.standard_error = std::sqrt(variance);
    return result;
}

}  // namespace timebin
