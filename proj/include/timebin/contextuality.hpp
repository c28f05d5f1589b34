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

// CHSH test between the time and polarization qubits of a single photon.
//
// S = <A0 B0> - <A0 B1> + <A1 B0> + <A1 B1>, with A acting on time and B on
// polarization in the canonical hybrid ordering (time slow, polarization fast).

#pragma once

#include <array>
#include <cstdint>

#include "timebin/hom.hpp"
#include "timebin/quantum.hpp"

namespace timebin {

struct ChshSettings {
    Observable a0;
    Observable a1;
    Observable b0;
    Observable b1;
};

struct ChshResult {
    double s_value = 0.0;
    /// <A0B0>, <A0B1>, <A1B0>, <A1B1>.
    std::array<double, 4> correlators{};
    double standard_error = 0.0;
};

/// (|t0 H> + |t1 V>)/sqrt(2). The relative phase of |t1> is fixed so that
/// optimal_settings() saturates the Tsirelson bound with S = +2 sqrt(2).
PureState hybrid_entangled_state();

double correlator(const DensityMatrix& state, const Observable& time_observable, const Observable& pol_observable);

/// {sz, sx} on time and {(sx + sz)/sqrt2, (sx - sz)/sqrt2} on polarization.
ChshSettings optimal_settings();

double chsh_value(const DensityMatrix& state, const ChshSettings& settings);

/// v * |psi><psi| + (1 - v) * I/d.
DensityMatrix white_noise_mixture(const PureState& state, double v);

/// Count-level CHSH experiment. For each (A_x, B_y) the time qubit is read out
/// by HOM projections onto the two eigenstates of A_x and the polarization by
/// a direct projection onto the eigenstates of B_y. Anti-bunching with the
/// reference |a'> heralds the orthogonal time outcome, so each setting yields
/// four Poissonian count cells whose means total `shots_per_setting`
/// (plus accidentals). Setting k uses seed + k.
ChshResult simulate_chsh(const DensityMatrix& state, const ChshSettings& settings, std::uint64_t shots_per_setting,
                         std::uint64_t seed, const NoiseModel& noise = {});

}  // namespace timebin
