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

// Small dense minimizers used by the tomography and quantum-walk modules.

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace timebin::optimize {

struct MinimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Objective returning f(x) and writing the gradient into `grad`.
using GradientObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;
using Objective = std::function<double(const Eigen::VectorXd& x)>;

struct BfgsOptions {
    int max_iterations = 2000;
    double gradient_tolerance = 1e-9;  // infinity norm
    double step_tolerance = 1e-12;     // infinity norm of the accepted step
};

/// BFGS with an Armijo backtracking line search. Non-finite objective values
/// are treated as +inf and simply backtracked away from.
MinimizeResult bfgs(const GradientObjective& f, Eigen::VectorXd x0, const BfgsOptions& options = {});

struct NelderMeadOptions {
    int max_evaluations = 20000;
    double initial_step = 0.5;
    double f_tolerance = 1e-13;  // spread of simplex values
    double x_tolerance = 1e-10;  // simplex diameter
    /// Rebuild the simplex around the best vertex after convergence this many
    /// times; stalls in a degenerate simplex are common in > 10 dimensions.
    int rebuilds = 3;
};

/// Nelder-Mead simplex with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).
MinimizeResult nelder_mead(const Objective& f, Eigen::VectorXd x0, const NelderMeadOptions& options = {});

}  // namespace timebin::optimize
