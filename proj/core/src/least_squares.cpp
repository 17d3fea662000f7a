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

#include "qmeta/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmeta/errors.hpp"

namespace qmeta {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd clamp(const VectorXd& x, const VectorXd& lower, const VectorXd& upper) {
  VectorXd out = x;
  if (lower.size() == x.size()) out = out.cwiseMax(lower);
  if (upper.size() == x.size()) out = out.cwiseMin(upper);
  return out;
}

// Scaled gradient with components that push against an active bound removed.
double scaled_gradient(const MatrixXd& jac, const VectorXd& r, const VectorXd& x,
                       const VectorXd& lower, const VectorXd& upper) {
  const double rnorm = r.norm();
  if (rnorm == 0.0) return 0.0;
  const VectorXd grad = jac.transpose() * r;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // A descent step moves along -grad.
    if (lower.size() == x.size() && x(i) <= lower(i) && grad(i) > 0.0) continue;
    if (upper.size() == x.size() && x(i) >= upper(i) && grad(i) < 0.0) continue;
    const double col = jac.col(i).norm();
    if (col == 0.0) continue;
    worst = std::max(worst, std::abs(grad(i)) / (col * rnorm));
  }
  return worst;
}

}  // namespace

double FitResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return parameters(static_cast<Eigen::Index>(i));
  }
  throw InvalidArgument("no fitted parameter named '" + name + "'");
}

double FitResult::uncertainty(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return uncertainties(static_cast<Eigen::Index>(i));
  }
  throw InvalidArgument("no fitted parameter named '" + name + "'");
}

MatrixXd numerical_jacobian(const std::function<VectorXd(const VectorXd&)>& residual,
                            const VectorXd& x, const VectorXd& scale) {
  MatrixXd jac;
  VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(std::abs(x(i)), scale(i));
    probe(i) = x(i) + h;
    const VectorXd up = residual(probe);
    probe(i) = x(i) - h;
    const VectorXd down = residual(probe);
    probe(i) = x(i);
    if (jac.size() == 0) jac.resize(up.size(), x.size());
    jac.col(i) = (up - down) / (2.0 * h);
  }
  return jac;
}

FitResult solve_least_squares(const LeastSquaresProblem& problem) {
  const auto p = problem.initial.size();
  const auto& opt = problem.options;
  if (p == 0) throw InvalidArgument("least squares needs at least one parameter");
  if ((problem.lower.size() != 0 && problem.lower.size() != p) ||
      (problem.upper.size() != 0 && problem.upper.size() != p)) {
    throw InvalidArgument("bounds must match the parameter count");
  }
  if (problem.lower.size() == p && problem.upper.size() == p &&
      (problem.lower.array() > problem.upper.array()).any()) {
    throw InvalidArgument("lower bound above upper bound");
  }
  if (clamp(problem.initial, problem.lower, problem.upper) != problem.initial) {
    throw InvalidArgument("initial guess lies outside the bounds");
  }

  VectorXd scale = problem.scale;
  if (scale.size() != p) scale = problem.initial.cwiseAbs().cwiseMax(1.0);
  auto jacobian = [&](const VectorXd& x) {
    return problem.jacobian ? problem.jacobian(x) : numerical_jacobian(problem.residual, x, scale);
  };

  VectorXd x = problem.initial;
  VectorXd r = problem.residual(x);
  if (r.size() < p) throw InvalidArgument("fewer residuals than parameters");
  MatrixXd jac = jacobian(x);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (jac.col(i).cwiseAbs().maxCoeff() == 0.0) {
      throw SingularJacobian("parameter " + std::to_string(i) +
                             " does not influence the residual");
    }
  }

  MatrixXd normal = jac.transpose() * jac;
  VectorXd grad = jac.transpose() * r;
  double lambda = opt.initial_damping;
  double nu = 2.0;
  double cost = r.squaredNorm();

  FitResult out;
  bool stopped = false;
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    if (r.norm() <= opt.residual_tolerance ||
        scaled_gradient(jac, r, x, problem.lower, problem.upper) <= opt.gradient_tolerance) {
      stopped = true;
      break;
    }
    // Marquardt scaling keeps the damping invariant under parameter units.
    const VectorXd diag = normal.diagonal().cwiseMax(std::numeric_limits<double>::min());
    MatrixXd damped = normal;
    damped.diagonal() += lambda * diag;
    VectorXd rhs = -grad;
    // Parameters pinned at a bound with the descent direction pointing outward
    // are frozen for this step.
    for (Eigen::Index i = 0; i < p; ++i) {
      const bool at_lower = problem.lower.size() == p && x(i) <= problem.lower(i) && grad(i) > 0.0;
      const bool at_upper = problem.upper.size() == p && x(i) >= problem.upper(i) && grad(i) < 0.0;
      if (at_lower || at_upper) {
        damped.row(i).setZero();
        damped.col(i).setZero();
        damped(i, i) = 1.0;
        rhs(i) = 0.0;
      }
    }
    const VectorXd step = damped.ldlt().solve(rhs);
    const VectorXd candidate = clamp(x + step, problem.lower, problem.upper);
    const VectorXd taken = candidate - x;

    bool small = true;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(taken(i)) > opt.step_tolerance * (std::abs(x(i)) + opt.step_tolerance * scale(i))) {
        small = false;
        break;
      }
    }
    if (small) {
      stopped = true;
      break;
    }

    const VectorXd r_new = problem.residual(candidate);
    const double cost_new = r_new.squaredNorm();
    const double predicted = cost - (r + jac * taken).squaredNorm();
    const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;
    if (std::isfinite(cost_new) && cost_new < cost && rho > 0.0) {
      x = candidate;
      r = r_new;
      cost = cost_new;
      jac = jacobian(x);
      normal = jac.transpose() * jac;
      grad = jac.transpose() * r;
      // A step the linear model predicts almost exactly switches to plain
      // Gauss-Newton until a step is rejected.
      lambda = rho > 0.999 && rho < 1.001
                   ? 0.0
                   : lambda * std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
    } else {
      lambda = lambda == 0.0 ? opt.initial_damping : lambda * nu;
      nu *= 2.0;
      if (lambda > 1e16) {
        stopped = true;
        break;
      }
    }
  }

  out.names = problem.names;
  out.parameters = x;
  out.residual_norm = r.norm();
  out.gradient_norm = scaled_gradient(jac, r, x, problem.lower, problem.upper);
  out.iterations = iter;
  out.converged = out.residual_norm <= opt.residual_tolerance ||
                  out.gradient_norm <= opt.gradient_tolerance;
  if (!stopped && !out.converged && opt.throw_on_max_iterations) {
    throw MaxIterations("least squares did not converge in " +
                        std::to_string(opt.max_iterations) + " iterations");
  }

  const double dof = static_cast<double>(std::max<Eigen::Index>(r.size() - p, 1));
  const double variance = r.squaredNorm() / dof;
  Eigen::FullPivLU<MatrixXd> lu(normal);
  out.uncertainties = VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  if (lu.isInvertible()) {
    const MatrixXd cov = lu.inverse() * variance;
    out.uncertainties = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  return out;
}

}  // namespace qmeta
