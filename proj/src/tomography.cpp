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

#include "timebin/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <tuple>

#include "timebin/optimize.hpp"

namespace timebin {

namespace {

constexpr double kPairTolerance = 1e-9;

// Orders settings by their reference amplitudes and noise so the likelihood
// is summed in the same order however the caller arranged the records.
std::vector<std::size_t> canonical_order(const MeasurementSchedule& schedule) {
    std::vector<std::size_t> order(schedule.settings.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) {
        const HomSetting& s = schedule.settings[i];
        std::vector<double> k;
        for (Eigen::Index j = 0; j < s.reference.amplitudes().size(); ++j) {
            k.push_back(s.reference.amplitudes()(j).real());
            k.push_back(s.reference.amplitudes()(j).imag());
        }
        k.push_back(s.delay_ps);
        k.push_back(s.noise.visibility);
        k.push_back(s.noise.accidental_rate);
        k.push_back(s.noise.mean_counts);
        return k;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return order;
}

// Pairs of mutually orthogonal qubit references, in canonical order. Empty if
// some setting has no partner.
std::vector<std::pair<std::size_t, std::size_t>> complementary_pairs(const MeasurementSchedule& schedule,
                                                                     const std::vector<std::size_t>& order) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (schedule.dim() != 2) return pairs;
    std::vector<bool> used(order.size(), false);
    for (std::size_t a = 0; a < order.size(); ++a) {
        if (used[a]) continue;
        bool found = false;
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            if (used[b]) continue;
            const Complex ov =
                inner_product(schedule.settings[order[a]].reference, schedule.settings[order[b]].reference);
            if (std::norm(ov) < kPairTolerance) {
                pairs.emplace_back(order[a], order[b]);
                used[a] = used[b] = true;
                found = true;
                break;
            }
        }
        if (!found) return {};
    }
    return pairs;
}

struct LikelihoodModel {
    const MeasurementSchedule* schedule = nullptr;
    std::vector<double> counts;  // anti-bunching counts per setting
    std::vector<std::size_t> order;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    Normalization normalization = Normalization::KnownIntensity;
    double total_counts = 0.0;

    double intensity(std::size_t i, double q) const {
        const NoiseModel& noise = schedule->settings[i].noise;
        return noise.mean_counts * (0.5 * (1.0 - noise.visibility * q) + noise.accidental_rate);
    }
    double intensity_slope(std::size_t i) const {
        const NoiseModel& noise = schedule->settings[i].noise;
        return -0.5 * noise.mean_counts * noise.visibility;
    }

    static double count_log(double c, double lambda) {
        if (c == 0.0) return 0.0;
        if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
        return c * std::log(lambda);
    }

    // Log-likelihood and dL/dq_i for the per-setting overlaps q.
    double evaluate(const std::vector<double>& q, std::vector<double>* dq) const {
        double value = 0.0;
        if (dq) dq->assign(q.size(), 0.0);
        if (normalization == Normalization::KnownIntensity) {
            for (const std::size_t i : order) {
                const double lambda = intensity(i, q[i]);
                value += count_log(counts[i], lambda) - lambda;
                if (dq) {
                    const double dl = (counts[i] > 0.0 ? counts[i] / lambda : 0.0) - 1.0;
                    (*dq)[i] = dl * intensity_slope(i);
                }
            }
        } else {
            for (const auto& [a, b] : pairs) {
                const double la = intensity(a, q[a]);
                const double lb = intensity(b, q[b]);
                const double c = counts[a] + counts[b];
                value += count_log(counts[a], la) + count_log(counts[b], lb) - count_log(c, la + lb);
                if (dq) {
                    const double shared = c > 0.0 ? c / (la + lb) : 0.0;
                    (*dq)[a] = ((counts[a] > 0.0 ? counts[a] / la : 0.0) - shared) * intensity_slope(a);
                    (*dq)[b] = ((counts[b] > 0.0 ? counts[b] / lb : 0.0) - shared) * intensity_slope(b);
                }
            }
        }
        return value;
    }
};

LikelihoodModel make_model(std::span<const CountRecord> records, const MeasurementSchedule& schedule,
                           Normalization normalization) {
    if (records.size() != schedule.settings.size())
        throw Error("mle: " + std::to_string(records.size()) + " records for " +
                    std::to_string(schedule.settings.size()) + " settings");
    LikelihoodModel model;
    model.schedule = &schedule;
    model.order = canonical_order(schedule);
    for (const auto& r : records) {
        model.counts.push_back(static_cast<double>(r.antibunching));
        model.total_counts += static_cast<double>(r.antibunching);
    }
    model.normalization = normalization;
    if (normalization == Normalization::ComplementaryPairs) {
        model.pairs = complementary_pairs(schedule, model.order);
        if (model.pairs.empty()) model.normalization = Normalization::KnownIntensity;
    }
    return model;
}

std::vector<double> overlaps(const CMatrix& rho, const MeasurementSchedule& schedule) {
    std::vector<double> q(schedule.settings.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const CVector& phi = schedule.settings[i].reference.amplitudes();
        q[i] = (phi.adjoint() * rho * phi)(0, 0).real();
    }
    return q;
}

// Parameter layout: d real diagonal entries of T, then (re, im) for each
// strictly-lower entry in row-major order.
CMatrix unpack_lower(const Eigen::VectorXd& x, Eigen::Index d) {
    CMatrix t = CMatrix::Zero(d, d);
    Eigen::Index p = d;
    for (Eigen::Index k = 0; k < d; ++k) t(k, k) = x(k);
    for (Eigen::Index j = 1; j < d; ++j)
        for (Eigen::Index k = 0; k < j; ++k) {
            t(j, k) = Complex(x(p), x(p + 1));
            p += 2;
        }
    return t;
}

Eigen::VectorXd pack_lower(const CMatrix& t) {
    const Eigen::Index d = t.rows();
    Eigen::VectorXd x(d * d);
    Eigen::Index p = d;
    for (Eigen::Index k = 0; k < d; ++k) x(k) = t(k, k).real();
    for (Eigen::Index j = 1; j < d; ++j)
        for (Eigen::Index k = 0; k < j; ++k) {
            x(p) = t(j, k).real();
            x(p + 1) = t(j, k).imag();
            p += 2;
        }
    return x;
}

CMatrix rho_from_lower(const CMatrix& t) {
    const CMatrix a = t.adjoint() * t;
    return hermitian_part(a / a.trace().real());
}

}  // namespace

// ---------------------------------------------------------------------------

MeasurementSchedule MeasurementSchedule::mub(const NoiseModel& noise) {
    MeasurementSchedule schedule;
    for (auto& state : mub_states()) schedule.settings.push_back(HomSetting{std::move(state), 0.0, noise});
    return schedule;
}

std::size_t MeasurementSchedule::dim() const {
    if (settings.empty()) return 0;
    return settings.front().reference.dim();
}

bool MeasurementSchedule::informationally_complete() const {
    const auto d = static_cast<Eigen::Index>(dim());
    if (d == 0) return false;
    Eigen::MatrixXd span(d * d, static_cast<Eigen::Index>(settings.size()));
    for (std::size_t s = 0; s < settings.size(); ++s) {
        const CVector& phi = settings[s].reference.amplitudes();
        if (phi.size() != d) return false;
        const CMatrix proj = phi * phi.adjoint();
        Eigen::Index row = 0;
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = j; k < d; ++k) {
                span(row++, static_cast<Eigen::Index>(s)) = proj(j, k).real();
                if (k != j) span(row++, static_cast<Eigen::Index>(s)) = proj(j, k).imag();
            }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(span);
    lu.setThreshold(1e-9);
    return lu.rank() >= d * d;
}

std::vector<PureState> mub_states() {
    return {states::t(0), states::t(1), states::plus(), states::minus(), states::plus_i(), states::minus_i()};
}

std::vector<double> born_probabilities(const DensityMatrix& rho, const MeasurementSchedule& schedule) {
    std::vector<double> probabilities;
    probabilities.reserve(schedule.settings.size());
    for (const auto& setting : schedule.settings)
        probabilities.push_back(antibunching_probability(rho, setting.reference, setting.noise.visibility));
    return probabilities;
}

double log_likelihood(const DensityMatrix& rho, std::span<const CountRecord> records,
                      const MeasurementSchedule& schedule, Normalization normalization) {
    if (rho.dim() != schedule.dim()) throw DimensionMismatch("log_likelihood: rho and schedule dimensions differ");
    const LikelihoodModel model = make_model(records, schedule, normalization);
    return model.evaluate(overlaps(rho.matrix(), schedule), nullptr);
}

TomographyResult mle_reconstruct(std::span<const CountRecord> records, const MeasurementSchedule& schedule,
                                 const MleOptions& options, const std::optional<DensityMatrix>& target) {
    if (schedule.settings.empty()) throw Error("mle_reconstruct: empty schedule");
    const auto d = static_cast<Eigen::Index>(schedule.dim());
    for (const auto& s : schedule.settings) {
        if (static_cast<Eigen::Index>(s.reference.dim()) != d)
            throw DimensionMismatch("mle_reconstruct: references have different dimensions");
        s.noise.validate();
    }
    if (!schedule.informationally_complete())
        throw Error("mle_reconstruct: schedule is not informationally complete (need " + std::to_string(d * d) +
                    " independent projectors)");
    const LikelihoodModel model = make_model(records, schedule, options.normalization);
    if (model.total_counts <= 0.0) throw Error("mle_reconstruct: all anti-bunching counts are zero");
    const double scale = 1.0 / model.total_counts;

    const optimize::GradientObjective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const CMatrix t = unpack_lower(x, d);
        const CMatrix a = t.adjoint() * t;
        const double tau = a.trace().real();
        grad.setZero(x.size());
        if (!(tau > 0.0)) return std::numeric_limits<double>::infinity();
        const CMatrix rho = a / tau;
        std::vector<double> dq;
        const std::vector<double> q = overlaps(rho, schedule);
        const double value = -scale * model.evaluate(q, &dq);
        if (!std::isfinite(value)) return std::numeric_limits<double>::infinity();

        CMatrix g = CMatrix::Zero(d, d);
        for (const std::size_t i : model.order) {
            const CVector& phi = schedule.settings[i].reference.amplitudes();
            g += (-scale * dq[i]) * (phi * phi.adjoint());
        }
        const Complex g_rho = (g * rho).trace();
        const CMatrix g_prime = (g - g_rho.real() * CMatrix::Identity(d, d)) / tau;
        const CMatrix m = g_prime * t.adjoint();
        for (Eigen::Index k = 0; k < d; ++k) grad(k) = 2.0 * m(k, k).real();
        Eigen::Index p = d;
        for (Eigen::Index j = 1; j < d; ++j)
            for (Eigen::Index k = 0; k < j; ++k) {
                grad(p) = 2.0 * m(k, j).real();
                grad(p + 1) = -2.0 * m(k, j).imag();
                p += 2;
            }
        return value;
    };

    optimize::BfgsOptions bfgs_options;
    bfgs_options.max_iterations = options.max_iterations;

    const Eigen::VectorXd start = pack_lower(CMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    optimize::MinimizeResult best = optimize::bfgs(objective, start, bfgs_options);
    int iterations = best.iterations;

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int restart = 0; restart < options.restarts && !best.converged; ++restart) {
        Eigen::VectorXd x0(d * d);
        for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = normal(rng);
        optimize::MinimizeResult attempt = optimize::bfgs(objective, x0, bfgs_options);
        iterations += attempt.iterations;
        if (attempt.converged || attempt.value < best.value) best = std::move(attempt);
    }

    DensityMatrix rho(rho_from_lower(unpack_lower(best.x, d)));
    TomographyResult result{rho, 0.0, model.evaluate(overlaps(rho.matrix(), schedule), nullptr), iterations,
                            best.converged};
    if (target) result.fidelity_to_target = fidelity(*target, rho);
    return result;
}

std::vector<CountRecord> expected_counts(const DensityMatrix& rho, const MeasurementSchedule& schedule) {
    const std::vector<double> p = born_probabilities(rho, schedule);
    std::vector<CountRecord> records;
    records.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const NoiseModel& noise = schedule.settings[i].noise;
        const double acc = noise.mean_counts * noise.accidental_rate;
        records.push_back(CountRecord{static_cast<std::uint64_t>(std::llround(noise.mean_counts * p[i] + acc)),
                                      static_cast<std::uint64_t>(std::llround(noise.mean_counts * (1.0 - p[i]) + acc)),
                                      schedule.settings[i]});
    }
    return records;
}

TomographyResult run_tomography(const DensityMatrix& true_state, const MeasurementSchedule& schedule,
                                std::uint64_t seed, const MleOptions& options) {
    const std::vector<double> p = born_probabilities(true_state, schedule);
    std::vector<CountRecord> records;
    records.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) records.push_back(simulate_counts(p[i], schedule.settings[i], seed + i));
    MleOptions mle = options;
    mle.seed = seed;
    return mle_reconstruct(records, schedule, mle, true_state);
}

std::vector<SuiteState> standard_suite(std::uint64_t seed) {
    std::vector<SuiteState> suite;
    const char* mub_names[] = {"mub_t0", "mub_t1", "mub_plus", "mub_minus", "mub_plus_i", "mub_minus_i"};
    const auto mubs = mub_states();
    for (std::size_t i = 0; i < mubs.size(); ++i) suite.push_back({mub_names[i], DensityMatrix(mubs[i])});

    std::uint64_t next = seed;
    for (int i = 1; i <= 9; ++i) suite.push_back({"pure_" + std::to_string(i), DensityMatrix(random_pure_state(2, next++))});

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> weight(0.05, 0.95);
    for (int i = 1; i <= 33; ++i) {
        const DensityMatrix a(random_pure_state(2, next++));
        const DensityMatrix b(random_pure_state(2, next++));
        const double w = weight(rng);
        const std::pair<DensityMatrix, double> parts[] = {{a, w}, {b, 1.0 - w}};
        suite.push_back({"mixed_" + std::to_string(i), convex_mixture(parts)});
    }
    return suite;
}

}  // namespace timebin
