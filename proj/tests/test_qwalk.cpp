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

#include <cmath>
#include <numbers>
#include <random>

#include "timebin/qwalk.hpp"
#include "walk_oracle.hpp"

using namespace timebin;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CoinSequence random_coins(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    CoinSequence coins;
    for (std::size_t i = 0; i < n; ++i) coins.push_back({angle(rng), angle(rng), angle(rng)});
    return coins;
}

CVector basis_vec(std::size_t bins, std::size_t bin, int coin) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(2 * bins));
    v(static_cast<Eigen::Index>(2 * bin) + coin) = 1.0;
    return v;
}

bool equal_up_to_phase(const CMatrix& a, const CMatrix& b, double tol) {
    Eigen::Index r = 0, c = 0;
    a.cwiseAbs().maxCoeff(&r, &c);
    const Complex phase = b(r, c) / a(r, c);
    return std::abs(std::abs(phase) - 1.0) < tol && (a * phase - b).norm() < tol;
}

}  // namespace

TEST(AnglesToCoin, Examples) {
    EXPECT_NEAR((angles_to_coin({0.0, 0.0, 0.0}) - CMatrix::Identity(2, 2)).norm(), 0.0, 1e-15);
    CMatrix hadamard(2, 2);
    hadamard << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    EXPECT_TRUE(equal_up_to_phase(angles_to_coin({kPi / 2, 0.0, kPi}), hadamard, 1e-12));
    std::mt19937_64 rng(1);
    for (const CoinParams& p : random_coins(200, rng)) {
        const CMatrix u = angles_to_coin(p);
        EXPECT_NEAR((u.adjoint() * u - CMatrix::Identity(2, 2)).norm(), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(u.determinant()), 1.0, 1e-12);
    }
}

TEST(ShiftOperator, BasisActionAndIsometry) {
    EXPECT_THROW(shift_operator(1), Error);
    const CMatrix s = shift_operator(4);
    EXPECT_NEAR((s * basis_vec(4, 0, 1) - basis_vec(4, 0, 1)).norm(), 0.0, 0.0);
    EXPECT_NEAR((s * basis_vec(4, 0, 0) - basis_vec(4, 1, 0)).norm(), 0.0, 0.0);
    // Columns of admissible basis states (no up amplitude in the top bin) are orthonormal.
    Eigen::Index admissible = 0;
    CMatrix cols(8, 7);
    for (Eigen::Index j = 0; j < 8; ++j)
        if (j != 2 * 3) cols.col(admissible++) = s.col(j);
    EXPECT_NEAR((cols.adjoint() * cols - CMatrix::Identity(7, 7)).norm(), 0.0, 1e-15);

    const WalkState up(basis_vec(2, 0, 0));
    EXPECT_NEAR(std::abs(apply_shift(up).amplitude(1, 0)), 1.0, 0.0);
    const WalkState down(basis_vec(2, 0, 1));
    EXPECT_NEAR(std::abs(apply_shift(down).amplitude(0, 1)), 1.0, 0.0);
    const WalkState top(basis_vec(2, 1, 0));
    EXPECT_THROW(apply_shift(top), Error);
}

TEST(ShiftOperator, PreservesNormOnAdmissibleStates) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::size_t bins = 2 + s % 6;
        CVector v = random_pure_state(2 * bins, s).amplitudes();
        v(static_cast<Eigen::Index>(2 * (bins - 1))) = 0.0;
        v.normalize();
        const WalkState shifted = apply_shift(WalkState(v));
        EXPECT_NEAR(shifted.amplitudes().norm(), 1.0, 1e-12);
        EXPECT_NEAR((shifted.amplitudes() - shift_operator(bins) * v).norm(), 0.0, 1e-15);
    }
}

TEST(WalkState, Validation) {
    EXPECT_THROW(WalkState(CVector::Ones(3) / std::sqrt(3.0)), Error);
    EXPECT_THROW(WalkState(CVector::Ones(4)), Error);
    const WalkState w = WalkState::initial(3);
    EXPECT_EQ(w.n_bins(), 3u);
    EXPECT_EQ(w.step_count(), 0u);
    EXPECT_EQ(w.amplitude(0, 0), Complex(1.0, 0.0));
}

TEST(WalkEvolve, HadamardStep) {
    const WalkState out = walk_evolve(WalkState::initial(2), {{kPi / 2, 0.0, kPi}});
    EXPECT_EQ(out.step_count(), 1u);
    // Up to global phase: (|t1 up> + |t0 down>)/sqrt(2).
    EXPECT_NEAR(std::abs(out.amplitude(1, 0)), kInvSqrt2, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(0, 1)), kInvSqrt2, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(1, 0) - out.amplitude(0, 1)), 0.0, 1e-15);
}

TEST(WalkEvolve, IdentityCoinLeavesDownFixed) {
    const WalkState start(basis_vec(6, 0, 1));
    const WalkState out = walk_evolve(start, CoinSequence(5, CoinParams{}));
    EXPECT_NEAR((out.amplitudes() - start.amplitudes()).norm(), 0.0, 0.0);
    EXPECT_EQ(out.step_count(), 5u);
}

TEST(WalkEvolve, CapacityOverflow) {
    EXPECT_THROW(walk_evolve(WalkState::initial(3), CoinSequence(3)), Error);
    EXPECT_NO_THROW(walk_evolve(WalkState::initial(4), CoinSequence(3)));
    const WalkState after = walk_evolve(WalkState::initial(4), CoinSequence(2));
    EXPECT_THROW(walk_evolve(after, CoinSequence(2)), Error);
}

TEST(WalkEvolve, InvariantsExhaustiveUpToSixSteps) {
    std::mt19937_64 rng(2);
    for (std::size_t n = 0; n <= 6; ++n)
        for (int trial = 0; trial < 50; ++trial) {
            const CoinSequence coins = random_coins(n, rng);
            const WalkState out = walk_evolve(WalkState::initial(n + 1), coins);
            EXPECT_NEAR(out.amplitudes().norm(), 1.0, 1e-12);
            // Light cone: a larger space carries exactly zero amplitude beyond bin n.
            const WalkState wide = walk_evolve(WalkState::initial(n + 4), coins);
            for (std::size_t k = n + 1; k < n + 4; ++k) {
                EXPECT_EQ(wide.amplitude(k, 0), Complex(0.0, 0.0));
                EXPECT_EQ(wide.amplitude(k, 1), Complex(0.0, 0.0));
            }
            // Against the independent dense matrix product.
            EXPECT_NEAR((oracle::evolve(n + 1, coins) - out.amplitudes()).norm(), 0.0, 1e-12);
            const PureState basis = random_pure_state(2, static_cast<std::uint64_t>(100 * n + trial));
            CVector orth(2);
            orth << -std::conj(basis[1]), std::conj(basis[0]);
            double total = 0.0;
            for (const PureState& c : {basis, PureState(orth)}) {
                try {
                    total += project_coin(out, c).success_probability;
                } catch (const Error&) {
                    // Annihilated: contributes zero probability.
                }
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
}

TEST(ProjectCoin, Examples) {
    CVector v = CVector::Zero(4);
    v(2) = kInvSqrt2;  // |t1 up>
    v(1) = kInvSqrt2;  // |t0 down>
    const CoinProjection p = project_coin(WalkState(v), PureState::normalized(CVector::Ones(2)));
    EXPECT_NEAR(p.success_probability, 0.5, 1e-15);
    EXPECT_NEAR(fidelity(p.walker, states::plus()), 1.0, 1e-15);

    const PureState walker = random_pure_state(3, 5);
    const PureState coin = random_pure_state(2, 6);
    const PureState product = tensor(walker, coin);
    const CoinProjection q = project_coin(WalkState(product.amplitudes()), coin);
    EXPECT_NEAR(q.success_probability, 1.0, 1e-12);
    EXPECT_NEAR(fidelity(q.walker, walker), 1.0, 1e-12);

    const WalkState up(basis_vec(2, 0, 0));
    EXPECT_THROW(project_coin(up, PureState::basis_state(2, 1)), Error);
    EXPECT_THROW(project_coin(up, states::t(0, 3)), DimensionMismatch);
}

TEST(Synthesize, SmallExamples) {
    const SynthesisResult plus = synthesize(states::plus(), 1, 8, 1);
    EXPECT_GE(plus.fidelity, 0.999);
    EXPECT_GE(plus.success_probability, 0.49);
    EXPECT_EQ(plus.coins.size(), 2u);
    const SynthesisResult t0 = synthesize(states::t(0), 1, 8, 1);
    EXPECT_GE(t0.fidelity, 0.999);
    EXPECT_GE(t0.success_probability, 0.99);
}

TEST(Synthesize, Errors) {
    EXPECT_THROW(synthesize(states::t(0, 4), 2, 4, 1), Error);
    EXPECT_THROW(synthesize(states::plus(), 1, 0, 1), Error);
}

TEST(Synthesize, ReproducibleAndSelfConsistent) {
    const PureState target = random_pure_state(3, 12);
    const SynthesisResult a = synthesize(target, 3, 6, 77);
    const SynthesisResult b = synthesize(target, 3, 6, 77);
    ASSERT_EQ(a.coins.size(), 4u);
    for (std::size_t i = 0; i < a.coins.size(); ++i) {
        EXPECT_EQ(a.coins[i].theta, b.coins[i].theta);
        EXPECT_EQ(a.coins[i].phi1, b.coins[i].phi1);
        EXPECT_EQ(a.coins[i].phi2, b.coins[i].phi2);
        EXPECT_GE(a.coins[i].theta, 0.0);
        EXPECT_LE(a.coins[i].theta, kPi);
        for (double phase : {a.coins[i].phi1, a.coins[i].phi2}) {
            EXPECT_GE(phase, 0.0);
            EXPECT_LT(phase, 2.0 * kPi);
        }
    }
    EXPECT_EQ(a.fidelity, b.fidelity);

    // Independent recomputation from the returned coins.
    const CVector walker = oracle::projected_walker(a.coins);
    const double p = walker.squaredNorm();
    CVector padded = CVector::Zero(walker.size());
    padded.head(3) = target.amplitudes();
    EXPECT_NEAR(a.fidelity, std::norm(padded.dot(walker)) / p, 1e-12);
    EXPECT_NEAR(a.success_probability, p, 1e-12);
    EXPECT_GE(a.fidelity, 0.0);
    EXPECT_LE(a.fidelity, 1.0);
    EXPECT_GE(a.success_probability, 0.0);
    EXPECT_LE(a.success_probability, 1.0);
}

TEST(Synthesize, MatchesGridOracleForQubits) {
    for (std::uint64_t s = 0; s < 4; ++s) {
        const PureState target = s == 0 ? states::plus() : random_pure_state(2, 40 + s);
        const SynthesisResult r = synthesize(target, 1, 32, s);
        const oracle::GridBest grid = oracle::qubit_grid_search(target, 73, 0.1);
        EXPECT_NEAR(r.fidelity, grid.fidelity, 1e-3);
        EXPECT_LE(r.objective, grid.objective + 1e-12);
    }
}
