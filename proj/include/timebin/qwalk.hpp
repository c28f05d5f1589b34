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

// Discrete-time quantum walk with the polarization as coin and time bins as
// walker positions. Amplitudes use the canonical hybrid ordering, index
// 2 * bin + coin with coin 0 = up (H) and 1 = down (V). Each step applies the
// coin to the polarization and then the conditional shift
//
//     S = sum_k |k><k| (x) |down><down| + |k+1><k| (x) |up><up|.

#pragma once

#include <cstdint>
#include <vector>

#include "timebin/quantum.hpp"

namespace timebin {

/// Euler angles of U = Rz(phi2) Ry(theta) Rz(phi1), with
/// Rz(a) = diag(e^{-ia/2}, e^{ia/2}) and Ry(a) = [[c, s], [-s, c]] (c, s of a/2).
struct CoinParams {
    double theta = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
};

using CoinSequence = std::vector<CoinParams>;

class WalkState {
  public:
    /// Throws unless the amplitudes have unit norm and length 2 * n_bins.
    WalkState(CVector amplitudes, std::size_t step_count = 0);

    /// |t0>|up> in a walker space of n_bins bins.
    static WalkState initial(std::size_t n_bins);

    std::size_t n_bins() const { return static_cast<std::size_t>(amplitudes_.size() / 2); }
    std::size_t step_count() const { return step_count_; }
    const CVector& amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t bin, int coin) const {
        return amplitudes_(static_cast<Eigen::Index>(2 * bin) + coin);
    }

  private:
    CVector amplitudes_;
    std::size_t step_count_;
};

struct SynthesisResult {
    /// n_steps coins applied before each shift, then the measurement coin
    /// applied just before projecting onto |up>.
    CoinSequence coins;
    PureState projection;
    /// Normalised walker after projection, over all n_steps + 1 bins.
    PureState walker;
    double fidelity = 0.0;
    double success_probability = 0.0;
    double objective = 0.0;
};

struct SynthesisOptions {
    /// Weight of (1 - P_success) against (1 - F^2).
    double success_weight = 0.1;
    int max_evaluations = 20000;
};

CMatrix angles_to_coin(const CoinParams& params);

/// The truncated shift on n_bins bins. Unitary on states without up-amplitude
/// in the last bin.
CMatrix shift_operator(std::size_t n_bins);

/// Applies the shift; throws if the last bin carries up-amplitude.
WalkState apply_shift(const WalkState& state);
WalkState apply_coin(const WalkState& state, const CoinParams& coin);

/// Coin then shift for every entry; throws if the walker space is too small.
WalkState walk_evolve(const WalkState& initial, const CoinSequence& coins);

struct CoinProjection {
    PureState walker;
    double success_probability = 0.0;
};

/// (<coin| (x) I) applied to the walk state, renormalised.
CoinProjection project_coin(const WalkState& state, const PureState& coin_state);

/// Walker state produced from |t0>|up> by `coins` (n_steps + 1 entries) with
/// projection onto |up>. Independent recomputation used for reporting.
CoinProjection synthesized_walker(const CoinSequence& coins);

/// Derivative-free search for coins preparing `target` (dimension d <= n_steps + 1).
/// Restart r starts from uniformly random angles drawn with seed + r; the best
/// objective wins, lowest restart index on ties.
SynthesisResult synthesize(const PureState& target, std::size_t n_steps, std::size_t restarts, std::uint64_t seed,
                           const SynthesisOptions& options = {});

}  // namespace timebin
