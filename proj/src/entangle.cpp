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

#include "timebin/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace timebin {

namespace {

// sqrt(local dimension) of a pair state; throws if the dimension is not square.
Eigen::Index local_dim(const PureState& state) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(state.dim()))));
    if (n * n != static_cast<Eigen::Index>(state.dim()))
        throw DimensionMismatch("pair state dimension " + std::to_string(state.dim()) + " is not a square");
    return n;
}

}  // namespace

PumpProfile::PumpProfile(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw Error("PumpProfile: need at least one time bin");
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance)
        throw Error("PumpProfile: sum of |a_j|^2 must equal 1");
}

PureState spdc_entangled_state(const PumpProfile& pump) {
    const auto n = static_cast<Eigen::Index>(pump.bins());
    CVector v = CVector::Zero(n * n);
    for (Eigen::Index j = 0; j < n; ++j) v(j * n + j) = pump.amplitudes()(j);
    return PureState::normalized(std::move(v));
}

StationPovm station_povm(const PureState& reference, double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw Error("station_povm: visibility must lie in [0, 1]");
    const auto d = static_cast<Eigen::Index>(reference.dim());
    const CMatrix identity = CMatrix::Identity(d, d);
    const CMatrix antibunch = 0.5 * (identity - visibility * reference.amplitudes() * reference.amplitudes().adjoint());
    return StationPovm{antibunch, identity - antibunch};
}

double joint_antibunching(const PureState& state, const StationConfig& alice, const StationConfig& bob) {
    const Eigen::Index n = local_dim(state);
    if (static_cast<Eigen::Index>(alice.reference.dim()) != n || static_cast<Eigen::Index>(bob.reference.dim()) != n)
        throw DimensionMismatch("joint_antibunching: station references must match the local dimension " +
                                std::to_string(n));
    const CMatrix ea = station_povm(alice.reference, alice.noise.visibility).antibunch;
    const CMatrix eb = station_povm(bob.reference, bob.noise.visibility).antibunch;
    // <psi| Ea (x) Eb |psi> with psi reshaped as the n x n matrix M(s, i):
    // Tr(M^dag Ea M Eb^T).
    const CMatrix m = state.amplitudes().reshaped<Eigen::RowMajor>(n, n);
    return std::max(0.0, (m.adjoint() * ea * m * eb.transpose()).trace().real());
}

Eigen::MatrixXd correlation_table(const PureState& state, const std::vector<PureState>& alice_refs,
                                  const std::vector<PureState>& bob_refs, const NoiseModel& noise) {
    noise.validate();
    Eigen::MatrixXd table(static_cast<Eigen::Index>(alice_refs.size()), static_cast<Eigen::Index>(bob_refs.size()));
    for (std::size_t i = 0; i < alice_refs.size(); ++i)
        for (std::size_t j = 0; j < bob_refs.size(); ++j)
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                joint_antibunching(state, StationConfig{alice_refs[i], noise}, StationConfig{bob_refs[j], noise});
    return table;
}

}  // namespace timebin
