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

#include "timebin/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace timebin::optimize {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

MinimizeResult bfgs(const GradientObjective& f, Eigen::VectorXd x0, const BfgsOptions& options) {
    const auto n = x0.size();
    MinimizeResult result;
    result.x = std::move(x0);
    Eigen::VectorXd grad(n);
    double value = finite_or_inf(f(result.x, grad));
    result.evaluations = 1;
    if (!std::isfinite(value) || !grad.allFinite()) {
        result.value = value;
        return result;
    }
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;
    Eigen::VectorXd trial_grad(n);

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter;
        if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.converged = true;
            break;
        }
        Eigen::VectorXd direction = -inv_hessian * grad;
        double slope = grad.dot(direction);
        if (slope >= 0.0) {
            // Lost descent; restart from steepest descent.
            inv_hessian.setIdentity();
            direction = -grad;
            slope = grad.dot(direction);
        }

        double step = 1.0;
        double trial_value = kInf;
        Eigen::VectorXd trial;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            trial = result.x + step * direction;
            trial_value = finite_or_inf(f(trial, trial_grad));
            ++result.evaluations;
            if (trial_value <= value + 1e-4 * step * slope && trial_grad.allFinite()) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Eigen::VectorXd s = trial - result.x;
        const Eigen::VectorXd y = trial_grad - grad;
        result.x = std::move(trial);
        value = trial_value;
        grad = trial_grad;

        if (s.lpNorm<Eigen::Infinity>() < options.step_tolerance) {
            result.converged = true;
            result.iterations = iter + 1;
            break;
        }

        const double sy = s.dot(y);
        if (sy > 1e-300) {
            if (!scaled) {
                inv_hessian *= sy / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = inv_hessian * y;
            inv_hessian += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
                           rho * (hy * s.transpose() + s * hy.transpose());
        }
        result.iterations = iter + 1;
    }
    if (!result.converged && grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) result.converged = true;
    result.value = value;
    return result;
}

MinimizeResult nelder_mead(const Objective& f, Eigen::VectorXd x0, const NelderMeadOptions& options) {
    const auto n = x0.size();
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double gamma = n > 1 ? 1.0 + 2.0 / dn : 2.0;
    const double beta = n > 1 ? 0.75 - 1.0 / (2.0 * dn) : 0.5;
    const double delta = n > 1 ? 1.0 - 1.0 / dn : 0.5;

    MinimizeResult result;
    int evaluations = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evaluations;
        return finite_or_inf(f(x));
    };

    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1));
    std::vector<double> values(static_cast<std::size_t>(n + 1));
    std::vector<std::size_t> order(static_cast<std::size_t>(n + 1));

    Eigen::VectorXd best = std::move(x0);
    double best_value = eval(best);
    int iterations = 0;
    bool converged = false;

    for (int rebuild = 0; rebuild <= options.rebuilds; ++rebuild) {
        simplex[0] = best;
        values[0] = best_value;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::VectorXd v = best;
            v(i) += options.initial_step;
            simplex[static_cast<std::size_t>(i + 1)] = v;
            values[static_cast<std::size_t>(i + 1)] = eval(v);
        }
        converged = false;

        while (evaluations < options.max_evaluations) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            const std::size_t lo = order.front();
            const std::size_t hi = order.back();
            const std::size_t second_hi = order[order.size() - 2];

            double diameter = 0.0;
            for (const auto& v : simplex) diameter = std::max(diameter, (v - simplex[lo]).lpNorm<Eigen::Infinity>());
            if (values[hi] - values[lo] <= options.f_tolerance && diameter <= options.x_tolerance * 1e3) {
                converged = true;
                break;
            }
            if (diameter <= options.x_tolerance) {
                converged = true;
                break;
            }
            ++iterations;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (std::size_t i = 0; i < simplex.size(); ++i)
                if (i != hi) centroid += simplex[i];
            centroid /= dn;

            const Eigen::VectorXd reflected = centroid + alpha * (centroid - simplex[hi]);
            const double fr = eval(reflected);
            if (fr < values[lo]) {
                const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
                const double fe = eval(expanded);
                if (fe < fr) {
                    simplex[hi] = expanded;
                    values[hi] = fe;
                } else {
                    simplex[hi] = reflected;
                    values[hi] = fr;
                }
                continue;
            }
            if (fr < values[second_hi]) {
                simplex[hi] = reflected;
                values[hi] = fr;
                continue;
            }
            const bool outside = fr < values[hi];
            const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + beta * (reflected - centroid))
                                                       : Eigen::VectorXd(centroid + beta * (simplex[hi] - centroid));
            const double fc = eval(contracted);
            if (fc < (outside ? fr : values[hi])) {
                simplex[hi] = contracted;
                values[hi] = fc;
                continue;
            }
            for (std::size_t i = 0; i < simplex.size(); ++i) {
                if (i == lo) continue;
                simplex[i] = simplex[lo] + delta * (simplex[i] - simplex[lo]);
                values[i] = eval(simplex[i]);
            }
        }

        const auto lo = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
        const bool improved = values[lo] < best_value - options.f_tolerance;
        if (values[lo] <= best_value) {
            best = simplex[lo];
            best_value = values[lo];
        }
        if (evaluations >= options.max_evaluations) break;
        if (rebuild > 0 && !improved) break;
    }

    result.x = std::move(best);
    result.value = best_value;
    result.iterations = iterations;
    result.evaluations = evaluations;
    result.converged = converged;
    return result;
}

}  // namespace timebin::optimize
