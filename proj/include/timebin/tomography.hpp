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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "timebin/hom.hpp"
#include "timebin/quantum.hpp"

namespace timebin {

struct MeasurementSchedule {
    std::vector<HomSetting> settings;

    /// The six qubit MUB references (t0, t1, +, -, +i, -i), all with `noise`.
    static MeasurementSchedule mub(const NoiseModel& noise = {});

    std::size_t dim() const;
    /// Whether the reference projectors span the Hermitian operator space.
    bool informationally_complete() const;
};

struct TomographyResult {
    DensityMatrix rho;
    double fidelity_to_target = 0.0;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// t0, t1, +, -, +i, -i.
std::vector<PureState> mub_states();

std::vector<double> born_probabilities(const DensityMatrix& rho, const MeasurementSchedule& schedule);

enum class Normalization {
    /// Each setting is paired with its orthogonal reference and only the
    /// split of anti-bunching counts within the pair is fitted (the
    /// complementary-reference normalisation). Needs qubit pairs.
    ComplementaryPairs,
    /// Poisson likelihood with the known intensity mean_counts per setting.
    KnownIntensity,
};

struct MleOptions {
    Normalization normalization = Normalization::ComplementaryPairs;
    int max_iterations = 5000;
    /// Random restarts tried when the maximally mixed start does not converge.
    int restarts = 5;
    std::uint64_t seed = 0;
};

/// Poisson (or pair-binomial) log-likelihood of the anti-bunching counts,
/// up to rho-independent constants.
double log_likelihood(const DensityMatrix& rho, std::span<const CountRecord> records,
                      const MeasurementSchedule& schedule, Normalization normalization);

/// Maximum-likelihood density matrix over rho = T^dag T / Tr(T^dag T) with T
/// lower triangular. When `target` is given, fidelity_to_target is filled in.
TomographyResult mle_reconstruct(std::span<const CountRecord> records, const MeasurementSchedule& schedule,
                                 const MleOptions& options = {},
                                 const std::optional<DensityMatrix>& target = std::nullopt);

/// Counts that exactly follow the model, rounded to integers.
std::vector<CountRecord> expected_counts(const DensityMatrix& rho, const MeasurementSchedule& schedule);

/// Born probabilities -> Poisson counts -> MLE -> fidelity against true_state.
/// Setting i draws its counts with seed + i.
TomographyResult run_tomography(const DensityMatrix& true_state, const MeasurementSchedule& schedule,
                                std::uint64_t seed, const MleOptions& options = {});

/// A named tomography target.
struct SuiteState {
    std::string id;
    DensityMatrix rho;
};

/// 15 nominally pure targets (the six MUB states and nine random pure states)
/// followed by 33 two-component mixtures of random pure states.
std::vector<SuiteState> standard_suite(std::uint64_t seed);

}  // namespace timebin
