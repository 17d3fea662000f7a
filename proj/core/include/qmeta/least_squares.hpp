// Copyright 2026 The qmeta Authors
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

// Bounded damped Gauss-Newton (Levenberg-Marquardt) solver shared by every
// fit in the estimation layer.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmeta {

struct LeastSquaresOptions {
  int max_iterations = 200;
  /// Stop when max_i |(J^T r)_i| / (|J_i| |r|) falls below this.
  double gradient_tolerance = 1e-8;
  /// Stop when every |step_i| <= step_tolerance * (|x_i| + step_tolerance * scale_i).
  double step_tolerance = 1e-12;
  /// Stop when |r| falls below this (absolute).
  double residual_tolerance = 1e-14;
  double initial_damping = 1e-3;
  /// Throw MaxIterations when the budget runs out; otherwise return with
  /// converged == false.
  bool throw_on_max_iterations = true;
};

struct LeastSquaresProblem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
  /// Optional analytic Jacobian; central differences are used otherwise.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  Eigen::VectorXd initial;
  /// Empty bounds mean unbounded.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  /// Typical magnitude per parameter; sets finite-difference steps. Defaults
  /// to max(|initial_i|, 1).
  Eigen::VectorXd scale;
  std::vector<std::string> names;
  LeastSquaresOptions options;
};

struct FitResult {
  std::vector<std::string> names;
  Eigen::VectorXd parameters;
  /// 1-sigma from the linearized covariance (J^T J)^-1 s^2 with
  /// s^2 = |r|^2 / max(m - p, 1).
  Eigen::VectorXd uncertainties;
  double residual_norm = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;

  /// Value of a named parameter; throws InvalidArgument if absent.
  double value(const std::string& name) const;
  double uncertainty(const std::string& name) const;
};

/// Throws InvalidArgument for inconsistent sizes or an initial guess outside
/// the bounds, SingularJacobian if a parameter has no influence at the
/// initial guess, MaxIterations per the options.
FitResult solve_least_squares(const LeastSquaresProblem& problem);

/// Central-difference Jacobian with step 1e-6 * max(|x_i|, scale_i).
Eigen::MatrixXd numerical_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const Eigen::VectorXd& x, const Eigen::VectorXd& scale);

}  // namespace qmeta
