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

// Time-bin entangled pairs from a shaped pump and their two-station HOM
// statistics. Pair states are ordered signal (slow) x idler (fast).

#pragma once

#include <vector>

#include "timebin/hom.hpp"
#include "timebin/quantum.hpp"

namespace timebin {

class PumpProfile {
  public:
    /// Throws unless sum |a_j|^2 = 1 within 1e-12.
    explicit PumpProfile(CVector amplitudes);

    std::size_t bins() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector& amplitudes() const { return amplitudes_; }

  private:
    CVector amplitudes_;
};

struct StationConfig {
    PureState reference;
    NoiseModel noise{};
};

struct StationPovm {
    CMatrix antibunch;  // (I - V |phi><phi|) / 2
    CMatrix bunch;      // I - antibunch
};

/// sum_j a_j |t_j>_s |t_j>_i (higher-order emission neglected).
PureState spdc_entangled_state(const PumpProfile& pump);

StationPovm station_povm(const PureState& reference, double visibility);

/// Probability that both stations record an anti-bunching event.
double joint_antibunching(const PureState& state, const StationConfig& alice, const StationConfig& bob);

/// Entry (i, j) is joint_antibunching with Alice's reference i and Bob's j.
Eigen::MatrixXd correlation_table(const PureState& state, const std::vector<PureState>& alice_refs,
                                  const std::vector<PureState>& bob_refs, const NoiseModel& noise);

}  // namespace timebin
