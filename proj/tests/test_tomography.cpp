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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "timebin/tomography.hpp"

using namespace timebin;

namespace {

NoiseModel noise_with(double visibility, double mean_counts) {
    NoiseModel n;
    n.visibility = visibility;
    n.mean_counts = mean_counts;
    return n;
}

double mean_infidelity(double mean_counts, int n_states) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, mean_counts));
    double total = 0.0;
    for (int i = 0; i < n_states; ++i) {
        const auto s = static_cast<std::uint64_t>(i);
        total += 1.0 - run_tomography(random_pure_state(2, 10000 + s), schedule, 100 * s).fidelity_to_target;
    }
    return total / n_states;
}

}  // namespace

TEST(MubStates, OrderAndUnbiasedness) {
    const auto mubs = mub_states();
    ASSERT_EQ(mubs.size(), 6u);
    const PureState expected[] = {states::t(0), states::t(1), states::plus(),
                                  states::minus(), states::plus_i(), states::minus_i()};
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(fidelity(mubs[i], expected[i]), 1.0, 1e-15);
    int cross = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) {
            const double o = std::norm(inner_product(mubs[i], mubs[j]));
            if (i / 2 == j / 2) {
                EXPECT_NEAR(o, 0.0, 1e-15);
            } else {
                EXPECT_NEAR(o, 0.5, 1e-12);
                ++cross;
            }
        }
    EXPECT_EQ(cross, 12);
}

TEST(MeasurementSchedule, MubIsInformationallyComplete) {
    const MeasurementSchedule mub = MeasurementSchedule::mub();
    EXPECT_EQ(mub.settings.size(), 6u);
    EXPECT_EQ(mub.dim(), 2u);
    EXPECT_TRUE(mub.informationally_complete());
    MeasurementSchedule partial = mub;
    partial.settings.erase(partial.settings.begin() + 3, partial.settings.end());
    EXPECT_FALSE(partial.informationally_complete());
    // Two settings from each of two bases span only a 3-dimensional operator space.
    MeasurementSchedule two_bases{{mub.settings[0], mub.settings[1], mub.settings[2], mub.settings[3]}};
    EXPECT_FALSE(two_bases.informationally_complete());
    MeasurementSchedule minimal{{mub.settings[0], mub.settings[1], mub.settings[2], mub.settings[4]}};
    EXPECT_TRUE(minimal.informationally_complete());
}

TEST(BornProbabilities, Examples) {
    const MeasurementSchedule mub = MeasurementSchedule::mub(noise_with(1.0, 1e4));
    const std::vector<double> expected{0.0, 0.5, 0.25, 0.25, 0.25, 0.25};
    const auto p0 = born_probabilities(states::t(0), mub);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(p0[i], expected[i], 1e-15);
    for (double p : born_probabilities(DensityMatrix::maximally_mixed(2), mub)) EXPECT_NEAR(p, 0.25, 1e-15);
    const auto plus = born_probabilities(states::plus(), mub);
    EXPECT_NEAR(plus[2], 0.0, 1e-15);
    EXPECT_NEAR(plus[3], 0.5, 1e-15);
    EXPECT_THROW(born_probabilities(DensityMatrix::maximally_mixed(3), mub), DimensionMismatch);
}

TEST(MleReconstruct, NoiselessPureTarget) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e4));
    for (const auto& target : mub_states()) {
        const TomographyResult r = mle_reconstruct(expected_counts(target, schedule), schedule, {}, DensityMatrix(target));
        EXPECT_GE(r.fidelity_to_target, 1.0 - 1e-6);
        EXPECT_TRUE(r.converged);
    }
}

TEST(MleReconstruct, NoiselessMaximallyMixed) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e4));
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
    for (const Normalization norm : {Normalization::ComplementaryPairs, Normalization::KnownIntensity}) {
        MleOptions options;
        options.normalization = norm;
        const TomographyResult r = mle_reconstruct(expected_counts(mixed, schedule), schedule, options);
        EXPECT_LE(trace_distance(r.rho, mixed), 1e-4);
    }
}

TEST(MleReconstruct, KnownIntensityRecoversPureState) {
    // Counts are rounded to integers; a large intensity keeps that below 1e-6.
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e8));
    MleOptions options;
    options.normalization = Normalization::KnownIntensity;
    const DensityMatrix target = random_pure_state(2, 31);
    const TomographyResult r = mle_reconstruct(expected_counts(target, schedule), schedule, options, target);
    EXPECT_GE(r.fidelity_to_target, 1.0 - 1e-6);
}

TEST(MleReconstruct, Errors) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(1.0, 1e4));
    std::vector<CountRecord> zeros;
    for (const auto& s : schedule.settings) zeros.push_back(CountRecord{0, 100, s});
    EXPECT_THROW(mle_reconstruct(zeros, schedule), Error);
    MeasurementSchedule partial = schedule;
    partial.settings.erase(partial.settings.begin() + 3, partial.settings.end());
    auto records = expected_counts(states::plus(), schedule);
    records.erase(records.begin() + 3, records.end());
    EXPECT_THROW(mle_reconstruct(records, partial), Error);
    records = expected_counts(states::plus(), schedule);
    records.pop_back();
    EXPECT_THROW(mle_reconstruct(records, schedule), Error);
}

TEST(MleReconstruct, LikelihoodAtLeastTrueStateOnNoiselessData) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e4));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const std::pair<DensityMatrix, double> parts[] = {{random_pure_state(2, s), 0.7},
                                                          {random_pure_state(2, s + 40), 0.3}};
        const DensityMatrix truth = convex_mixture(parts);
        const auto records = expected_counts(truth, schedule);
        for (const Normalization norm : {Normalization::ComplementaryPairs, Normalization::KnownIntensity}) {
            MleOptions options;
            options.normalization = norm;
            const TomographyResult r = mle_reconstruct(records, schedule, options);
            EXPECT_GE(r.log_likelihood, log_likelihood(truth, records, schedule, norm) - 1e-9);
            EXPECT_NEAR(r.log_likelihood, log_likelihood(r.rho, records, schedule, norm), 1e-9);
        }
    }
}

TEST(MleReconstruct, LocalOptimalityOnPoissonData) {
    // No random density matrix near the estimate may beat its likelihood.
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e4));
    const DensityMatrix truth = random_pure_state(2, 77);
    std::vector<CountRecord> records;
    const auto p = born_probabilities(truth, schedule);
    for (std::size_t i = 0; i < p.size(); ++i) records.push_back(simulate_counts(p[i], schedule.settings[i], 500 + i));
    const TomographyResult r = mle_reconstruct(records, schedule);
    const double best = log_likelihood(r.rho, records, schedule, Normalization::ComplementaryPairs);
    for (std::uint64_t s = 0; s < 200; ++s) {
        const std::pair<DensityMatrix, double> parts[] = {{r.rho, 0.99}, {random_pure_state(2, s), 0.01}};
        EXPECT_LE(log_likelihood(convex_mixture(parts), records, schedule, Normalization::ComplementaryPairs),
                  best + 1e-9);
    }
}

TEST(MleReconstruct, PermutationInvariance) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e4));
    const DensityMatrix truth = random_pure_state(2, 5);
    const auto p = born_probabilities(truth, schedule);
    std::vector<CountRecord> records;
    for (std::size_t i = 0; i < p.size(); ++i) records.push_back(simulate_counts(p[i], schedule.settings[i], 900 + i));
    const TomographyResult base = mle_reconstruct(records, schedule);

    std::vector<std::size_t> perm(records.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
        if (trial % 2) std::reverse(perm.begin(), perm.end());
        MeasurementSchedule shuffled;
        std::vector<CountRecord> shuffled_records;
        for (std::size_t i : perm) {
            shuffled.settings.push_back(schedule.settings[i]);
            shuffled_records.push_back(records[i]);
        }
        const TomographyResult r = mle_reconstruct(shuffled_records, shuffled);
        EXPECT_LE((r.rho.matrix() - base.rho.matrix()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(MleReconstruct, AlwaysReturnsValidDensityMatrix) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e2));
    for (std::uint64_t s = 0; s < 50; ++s) {
        const TomographyResult r = run_tomography(random_pure_state(2, s), schedule, s);
        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(r.rho.matrix());
        EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
        EXPECT_NEAR(std::abs(r.rho.matrix().trace() - 1.0), 0.0, 1e-10);
        EXPECT_GE(r.fidelity_to_target, 0.0);
        EXPECT_LE(r.fidelity_to_target, 1.0);
    }
}

TEST(RunTomography, DeterministicGivenSeed) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(0.985, 1e4));
    const DensityMatrix truth = random_pure_state(2, 8);
    const TomographyResult a = run_tomography(truth, schedule, 42);
    const TomographyResult b = run_tomography(truth, schedule, 42);
    EXPECT_EQ(a.rho.matrix(), b.rho.matrix());
    EXPECT_EQ(a.fidelity_to_target, b.fidelity_to_target);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(RunTomography, LargeCountsConsistency) {
    const MeasurementSchedule schedule = MeasurementSchedule::mub(noise_with(1.0, 1e8));
    for (std::uint64_t s = 0; s < 20; ++s)
        EXPECT_GE(run_tomography(random_pure_state(2, 300 + s), schedule, s).fidelity_to_target, 0.9999);
}

TEST(RunTomography, InfidelityDecreasesWithCounts) {
    const double n2 = mean_infidelity(1e2, 50);
    const double n3 = mean_infidelity(1e3, 50);
    const double n4 = mean_infidelity(1e4, 50);
    const double n5 = mean_infidelity(1e5, 50);
    EXPECT_GT(n2, n3);
    EXPECT_GT(n3, n4);
    EXPECT_GT(n4, n5);
}

TEST(StandardSuite, Composition) {
    const auto suite = standard_suite(1);
    ASSERT_EQ(suite.size(), 48u);
    std::set<std::string> ids;
    int pure = 0;
    for (const auto& s : suite) {
        ids.insert(s.id);
        pure += s.rho.purity() > 1.0 - 1e-9;
    }
    EXPECT_EQ(ids.size(), 48u);
    EXPECT_EQ(pure, 15);
    EXPECT_EQ(suite.front().id, "mub_t0");
    EXPECT_EQ(suite[6].id, "pure_1");
    EXPECT_EQ(suite.back().id, "mixed_33");
    const auto again = standard_suite(1);
    for (std::size_t i = 0; i < suite.size(); ++i) EXPECT_EQ(suite[i].rho.matrix(), again[i].rho.matrix());
}
