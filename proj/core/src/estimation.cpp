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

#include "qmeta/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <tuple>
#include <utility>
#include <string>

#include "qmeta/errors.hpp"
#include "qmeta/semiclassical.hpp"

namespace qmeta {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kBiasPerAmpere = 2.0 * constants::flux_quantum / constants::hbar;
constexpr double kMinDephasing = 1e3 * units::Hz;
constexpr double kMaxDephasing = 1e11 * units::Hz;

// Per-sample quantities of one group that do not depend on fitted parameters.
struct GroupAxis {
  std::vector<double> g_eps;   // at unit bare coupling
  std::vector<double> detuning;
};

GroupAxis make_axis(const PhaseTrace& trace, const ResonantSetup& setup) {
  GroupAxis axis;
  axis.g_eps.reserve(trace.samples.size());
  axis.detuning.reserve(trace.samples.size());
  for (const auto& s : trace.samples) {
    const FluxBias flux(s.flux);
    const double energy = transition_frequency(setup.qubit, flux);
    axis.g_eps.push_back(setup.qubit.delta / energy);
    axis.detuning.push_back(energy - setup.mode.omega);
  }
  return axis;
}

VectorXd observed(const PhaseTrace& trace) {
  VectorXd out(static_cast<Eigen::Index>(trace.samples.size()));
  for (std::size_t i = 0; i < trace.samples.size(); ++i) out(static_cast<Eigen::Index>(i)) = trace.samples[i].phase;
  return out;
}

// Residual of the closed-form resonant phase for one group.
VectorXd resonant_residual(const GroupAxis& axis, const VectorXd& data, double kappa, int n,
                           double g_bare, double gamma_phi) {
  VectorXd r(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double g = axis.g_eps[i] * g_bare;
    r(i) = phase_shift_resonant(n, g, gamma_phi, kappa, axis.detuning[i]) - data(i);
  }
  return r;
}

// Coarse log scan used to seed the dephasing fits.
double scan_dephasing(const std::function<double(double)>& cost) {
  double best = std::numeric_limits<double>::infinity();
  double best_gamma = 50e6 * units::Hz;
  constexpr int kPoints = 31;
  const double lo = std::log(1e5 * units::Hz);
  const double hi = std::log(1e10 * units::Hz);
  for (int k = 0; k < kPoints; ++k) {
    const double gamma = std::exp(lo + (hi - lo) * k / (kPoints - 1));
    const double c = cost(gamma);
    if (c < best) {
      best = c;
      best_gamma = gamma;
    }
  }
  return best_gamma;
}

// FitResult at fixed parameters: residual, covariance, no iterations.
FitResult linearized_result(std::vector<std::string> names, const VectorXd& x,
                            const std::function<VectorXd(const VectorXd&)>& residual) {
  FitResult out;
  out.names = std::move(names);
  out.parameters = x;
  const VectorXd r = residual(x);
  const MatrixXd jac = numerical_jacobian(residual, x, x.cwiseAbs().cwiseMax(1.0));
  out.residual_norm = r.norm();
  out.converged = true;
  const double dof = static_cast<double>(std::max<Eigen::Index>(r.size() - x.size(), 1));
  const MatrixXd normal = jac.transpose() * jac;
  Eigen::FullPivLU<MatrixXd> lu(normal);
  out.uncertainties = VectorXd::Constant(x.size(), std::numeric_limits<double>::infinity());
  if (lu.isInvertible()) {
    out.uncertainties = (lu.inverse() * (r.squaredNorm() / dof)).diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  return out;
}

LeastSquaresOptions nested_options() {
  LeastSquaresOptions opt;
  opt.throw_on_max_iterations = false;
  opt.max_iterations = 100;
  return opt;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

LorentzianFit fit_lorentzian(std::span<const double> omegas, std::span<const double> amplitudes) {
  if (omegas.size() != amplitudes.size()) throw InvalidArgument("size mismatch");
  if (omegas.size() < 8) throw InvalidArgument("Lorentzian fit needs at least 8 samples");
  const auto n = static_cast<Eigen::Index>(omegas.size());

  const bool rising = std::is_sorted(amplitudes.begin(), amplitudes.end());
  const bool falling = std::is_sorted(amplitudes.rbegin(), amplitudes.rend());
  if (rising || falling) throw NoPeak("amplitude data is monotone");

  const auto [min_it, max_it] = std::minmax_element(amplitudes.begin(), amplitudes.end());
  const auto peak = static_cast<std::size_t>(max_it - amplitudes.begin());
  const double baseline0 = *min_it;
  const double height0 = *max_it - *min_it;
  const double half = baseline0 + 0.5 * height0;
  double lo = omegas[peak];
  double hi = omegas[peak];
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (amplitudes[i] >= half) {
      lo = std::min(lo, omegas[i]);
      hi = std::max(hi, omegas[i]);
    }
  }
  const auto [wmin, wmax] = std::minmax_element(omegas.begin(), omegas.end());
  const double span = *wmax - *wmin;
  double width0 = hi - lo;
  if (width0 <= 0.0) width0 = span / static_cast<double>(omegas.size());
  if (span < 3.0 * width0) throw InvalidArgument("samples must span at least three linewidths");

  // Fit in coordinates centred on the sample mean so the centre parameter is
  // of the order of the width.
  const double origin = 0.5 * (*wmin + *wmax);
  VectorXd x(n);
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = omegas[static_cast<std::size_t>(i)] - origin;
    y(i) = amplitudes[static_cast<std::size_t>(i)];
  }

  LeastSquaresProblem problem;
  problem.names = {"center", "width", "height", "baseline"};
  problem.initial = VectorXd(4);
  problem.initial << omegas[peak] - origin, width0, height0, baseline0;
  problem.lower = VectorXd(4);
  problem.upper = VectorXd(4);
  const double inf = std::numeric_limits<double>::infinity();
  problem.lower << -inf, 1e-9 * width0, -inf, -inf;
  problem.upper << inf, inf, inf, inf;
  problem.scale = VectorXd(4);
  problem.scale << width0, width0, std::max(height0, 1e-300), std::max(height0, 1e-300);
  problem.residual = [&](const VectorXd& p) {
    const VectorXd u = 2.0 * (x.array() - p(0)) / p(1);
    return VectorXd((p(2) / (1.0 + u.array().square()) + p(3)).matrix() - y);
  };
  problem.jacobian = [&](const VectorXd& p) {
    MatrixXd jac(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = 2.0 * (x(i) - p(0)) / p(1);
      const double l = 1.0 / (1.0 + u * u);
      jac(i, 0) = 4.0 * p(2) * l * l * u / p(1);
      jac(i, 1) = 2.0 * p(2) * l * l * u * u / p(1);
      jac(i, 2) = l;
      jac(i, 3) = 1.0;
    }
    return jac;
  };
  problem.options.max_iterations = 500;

  LorentzianFit out;
  out.fit = solve_least_squares(problem);
  out.fit.parameters(0) += origin;
  out.center = out.fit.parameters(0);
  out.width = out.fit.parameters(1);
  out.height = out.fit.parameters(2);
  out.baseline = out.fit.parameters(3);
  return out;
}

std::vector<CrossingPoint> detect_crossings(const PhaseTrace& trace, const ResonatorMode& mode) {
  trace.validate();
  std::vector<double> diffs;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    diffs.push_back(std::abs(trace.samples[i].phase - trace.samples[i - 1].phase));
  }
  // Robust noise level from first differences of the trace.
  const double sigma = median(diffs) / (0.6744897501960817 * std::sqrt(2.0));
  const double threshold = std::max(6.0 * sigma, 1e-12);

  std::vector<CrossingPoint> out;
  for (const int side : {-1, 1}) {
    // Samples of this side ordered by increasing |flux|. Moving away from the
    // degeneracy point raises E, so a resonance turns the phase from + to -.
    std::vector<TraceSample> branch;
    for (const auto& s : trace.samples) {
      if (side * s.flux > 0.0) branch.push_back({side * s.flux, s.phase, s.amplitude});
    }
    std::sort(branch.begin(), branch.end(),
              [](const TraceSample& l, const TraceSample& r) { return l.flux < r.flux; });

    double best_score = 0.0;
    double best_flux = 0.0;
    for (std::size_t k = 1; k < branch.size(); ++k) {
      if (!(branch[k - 1].phase > 0.0 && branch[k].phase <= 0.0)) continue;
      double lobe_pos = 0.0;
      for (std::size_t j = k; j-- > 0 && branch[j].phase > 0.0;) lobe_pos = std::max(lobe_pos, branch[j].phase);
      double lobe_neg = 0.0;
      for (std::size_t j = k; j < branch.size() && branch[j].phase <= 0.0; ++j) {
        lobe_neg = std::min(lobe_neg, branch[j].phase);
      }
      const double score = std::min(lobe_pos, -lobe_neg);
      if (score > best_score) {
        best_score = score;
        const auto& a = branch[k - 1];
        const auto& b = branch[k];
        best_flux = a.flux + (b.flux - a.flux) * a.phase / (a.phase - b.phase);
      }
    }
    if (!(best_score > threshold)) {
      throw FeatureNotFound(std::string("no resonant feature on the ") +
                            (side > 0 ? "positive" : "negative") + " flux side");
    }
    out.push_back({FluxBias(side * best_flux), mode.omega, side});
  }
  return out;
}

SpectrumFit fit_spectrum(std::span<const CrossingPoint> points) {
  if (points.size() < 2) throw UnderDetermined("spectrum fit needs at least two crossings");
  bool distinct = false;
  for (const auto& p : points) {
    if (std::abs(p.mode_frequency - points.front().mode_frequency) >
        1e-9 * points.front().mode_frequency) {
      distinct = true;
    }
  }
  if (!distinct) throw UnderDetermined("all crossings share one mode frequency");

  const auto m = static_cast<Eigen::Index>(points.size());
  // omega^2 = delta^2 + (k flux)^2 I^2 is linear in (delta^2, I^2).
  MatrixXd design(m, 2);
  VectorXd target(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    const double k = kBiasPerAmpere * p.flux.value();
    design(i, 0) = 1.0;
    design(i, 1) = k * k;
    target(i) = p.mode_frequency * p.mode_frequency;
  }
  // Column scaling keeps the normal equations well conditioned.
  const Eigen::Vector2d col_scale(design.col(0).norm(), design.col(1).norm());
  MatrixXd scaled = design;
  scaled.col(0) /= col_scale(0);
  scaled.col(1) /= col_scale(1);
  if (col_scale(1) == 0.0) throw UnderDetermined("all crossings sit at the degeneracy point");
  const Eigen::Vector2d lin = scaled.colPivHouseholderQr().solve(target).cwiseQuotient(col_scale);

  double min_omega = std::numeric_limits<double>::infinity();
  for (const auto& p : points) min_omega = std::min(min_omega, p.mode_frequency);
  double delta0 = lin(0) > 0.0 ? std::sqrt(lin(0)) : 0.5 * min_omega;
  double current0 = lin(1) > 0.0 ? std::sqrt(lin(1)) : 1e-7;
  delta0 = std::min(delta0, min_omega);

  LeastSquaresProblem problem;
  problem.names = {"delta", "persistent_current"};
  problem.initial = Eigen::Vector2d(delta0, current0);
  problem.lower = Eigen::Vector2d(1e-6 * delta0, 1e-6 * current0);
  problem.upper = Eigen::Vector2d(std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity());
  problem.scale = problem.initial;
  problem.residual = [&](const VectorXd& p) {
    VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& pt = points[static_cast<std::size_t>(i)];
      r(i) = std::hypot(p(0), kBiasPerAmpere * p(1) * pt.flux.value()) - pt.mode_frequency;
    }
    return r;
  };
  problem.options.gradient_tolerance = 1e-10;

  SpectrumFit out;
  out.fit = solve_least_squares(problem);
  out.delta = out.fit.parameters(0);
  out.persistent_current = out.fit.parameters(1);
  return out;
}

FitResult fit_dephasing(const PhaseTrace& trace, const ResonantSetup& setup, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const GroupAxis axis = make_axis(trace, setup);
  const VectorXd data = observed(trace);
  const double kappa = setup.mode.kappa;
  auto residual = [&](double gamma) {
    return resonant_residual(axis, data, kappa, n, setup.g_bare, gamma);
  };
  const double seed = scan_dephasing([&](double g) { return residual(g).squaredNorm(); });

  LeastSquaresProblem problem;
  problem.names = {"gamma_phi"};
  problem.initial = VectorXd::Constant(1, seed);
  problem.lower = VectorXd::Constant(1, kMinDephasing);
  problem.upper = VectorXd::Constant(1, kMaxDephasing);
  problem.residual = [&](const VectorXd& p) { return residual(p(0)); };
  problem.options = nested_options();
  return solve_least_squares(problem);
}

int fit_qubit_number(const PhaseTrace& trace, const ResonantSetup& setup, double gamma_phi,
                     int max_n) {
  const GroupAxis axis = make_axis(trace, setup);
  const VectorXd data = observed(trace);
  int best_n = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= max_n; ++n) {
    const double cost =
        resonant_residual(axis, data, setup.mode.kappa, n, setup.g_bare, gamma_phi).norm();
    if (cost < best) {
      best = cost;
      best_n = n;
    }
  }
  return best_n;
}

ResonantModeFit fit_resonant_mode(const PhaseTrace& trace, const ResonantSetup& setup,
                                  int max_n) {
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  detect_crossings(trace, setup.mode);

  ResonantModeFit out;
  std::vector<FitResult> fits;
  for (int n = 1; n <= max_n; ++n) {
    fits.push_back(fit_dephasing(trace, setup, n));
    out.residual_by_n.push_back(fits.back().residual_norm);
  }
  std::vector<int> order(static_cast<std::size_t>(max_n));
  for (int i = 0; i < max_n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return out.residual_by_n[static_cast<std::size_t>(l)] < out.residual_by_n[static_cast<std::size_t>(r)];
  });
  int best = order[0];
  if (max_n > 1) {
    const int second = order[1];
    const double r1 = out.residual_by_n[static_cast<std::size_t>(best)];
    const double r2 = out.residual_by_n[static_cast<std::size_t>(second)];
    if (r2 - r1 < 0.01 * r1) {
      out.ambiguous = true;
      out.runner_up_n = std::max(best, second) + 1;
      best = std::min(best, second);
    } else {
      out.runner_up_n = second + 1;
    }
  }
  out.n = best + 1;
  out.fit = fits[static_cast<std::size_t>(best)];
  out.gamma_phi = out.fit.parameters(0);
  return out;
}

FitResult fit_resonant_coupling(const PhaseTrace& trace, const ResonantSetup& setup, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  detect_crossings(trace, setup.mode);
  const GroupAxis axis = make_axis(trace, setup);
  const VectorXd data = observed(trace);
  const double kappa = setup.mode.kappa;
  const double g0 = setup.g_bare > 0.0 ? setup.g_bare : 1e6 * units::Hz;
  const double gamma0 = scan_dephasing([&](double gamma) {
    return resonant_residual(axis, data, kappa, n, g0, gamma).squaredNorm();
  });

  LeastSquaresProblem problem;
  problem.names = {"g_bare", "gamma_phi"};
  problem.initial = Eigen::Vector2d(g0, gamma0);
  problem.lower = Eigen::Vector2d(1e-6 * g0, kMinDephasing);
  problem.upper = Eigen::Vector2d(1e6 * g0, kMaxDephasing);
  problem.residual = [&](const VectorXd& p) {
    return resonant_residual(axis, data, kappa, n, p(0), p(1));
  };
  problem.options.throw_on_max_iterations = false;
  return solve_least_squares(problem);
}

TwoModeFit fit_two_modes(const PhaseTrace& trace, const ResonantSetup& a, const ResonantSetup& b,
                         int max_n) {
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  if (a.mode.index != b.mode.index) throw InvalidArgument("both groups must share the probed mode");
  detect_crossings(trace, a.mode);

  const GroupAxis axis_a = make_axis(trace, a);
  const GroupAxis axis_b = make_axis(trace, b);
  const VectorXd data = observed(trace);
  const double kappa = a.mode.kappa;
  const auto m = data.size();

  auto residual = [&](int na, double ga, int nb, double gb) {
    VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      Complex damping{0.5 * kappa, 0.0};
      if (na > 0) {
        const double g = axis_a.g_eps[i] * a.g_bare;
        damping += na * g * g / Complex(ga, axis_a.detuning[i]);
      }
      if (nb > 0) {
        const double g = axis_b.g_eps[i] * b.g_bare;
        damping += nb * g * g / Complex(gb, axis_b.detuning[i]);
      }
      r(i) = std::arg(damping) - data(i);
    }
    return r;
  };

  // Seeds per group and count from single-group scans.
  std::vector<double> seed_a(static_cast<std::size_t>(max_n) + 1, 0.0);
  std::vector<double> seed_b(static_cast<std::size_t>(max_n) + 1, 0.0);
  for (int n = 1; n <= max_n; ++n) {
    seed_a[static_cast<std::size_t>(n)] =
        scan_dephasing([&](double g) { return residual(n, g, 0, 1.0).squaredNorm(); });
    seed_b[static_cast<std::size_t>(n)] =
        scan_dephasing([&](double g) { return residual(0, 1.0, n, g).squaredNorm(); });
  }

  struct Candidate {
    int na, nb;
    double ga, gb, cost;
    FitResult fit;
  };
  std::vector<Candidate> candidates;
  for (int na = 0; na <= max_n; ++na) {
    for (int nb = 0; nb <= max_n; ++nb) {
      Candidate c{na, nb, seed_a[static_cast<std::size_t>(na)], seed_b[static_cast<std::size_t>(nb)], 0.0, {}};
      std::vector<std::string> names;
      VectorXd init;
      if (na > 0) names.push_back("gamma_phi_a");
      if (nb > 0) names.push_back("gamma_phi_b");
      init.resize(static_cast<Eigen::Index>(names.size()));
      Eigen::Index k = 0;
      if (na > 0) init(k++) = c.ga;
      if (nb > 0) init(k++) = c.gb;
      auto unpack = [na, nb, &c](const VectorXd& p) {
        Eigen::Index j = 0;
        const double ga = na > 0 ? p(j++) : c.ga;
        const double gb = nb > 0 ? p(j++) : c.gb;
        return std::pair{ga, gb};
      };
      if (names.empty()) {
        c.cost = residual(0, 1.0, 0, 1.0).norm();
        c.fit.residual_norm = c.cost;
        c.fit.converged = true;
      } else {
        LeastSquaresProblem problem;
        problem.names = names;
        problem.initial = init;
        problem.lower = VectorXd::Constant(init.size(), kMinDephasing);
        problem.upper = VectorXd::Constant(init.size(), kMaxDephasing);
        problem.residual = [&](const VectorXd& p) {
          const auto [ga, gb] = unpack(p);
          return residual(na, ga, nb, gb);
        };
        problem.options = nested_options();
        c.fit = solve_least_squares(problem);
        std::tie(c.ga, c.gb) = unpack(c.fit.parameters);
        c.cost = c.fit.residual_norm;
      }
      candidates.push_back(std::move(c));
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) { return l.cost < r.cost; });

  const Candidate* best = &candidates[0];
  TwoModeFit out;
  if (candidates.size() > 1 && candidates[1].cost - candidates[0].cost < 0.01 * candidates[0].cost) {
    out.ambiguous = true;
    if (candidates[1].na + candidates[1].nb < best->na + best->nb) best = &candidates[1];
  }
  out.n_a = best->na;
  out.n_b = best->nb;
  out.gamma_a = best->na > 0 ? best->ga : 0.0;
  out.gamma_b = best->nb > 0 ? best->gb : 0.0;
  out.fit = best->fit;
  return out;
}

DispersiveFit fit_dispersive(const PhaseTrace& trace, const DispersiveSetup& setup,
                             DispersiveFree free, int max_n) {
  trace.validate();
  const ResonantSetup& group = setup.group;
  const GroupAxis axis = make_axis(trace, group);
  const auto [lo, hi] = std::minmax_element(axis.detuning.begin(), axis.detuning.end());
  if (*lo <= 0.0 && *hi >= 0.0) {
    throw ResonantContamination("the qubit spectrum crosses the mode inside the trace");
  }
  bool resonant_feature = true;
  try {
    detect_crossings(trace, group.mode);
  } catch (const FeatureNotFound&) {
    resonant_feature = false;
  }
  if (resonant_feature) throw ResonantContamination("the trace shows a resonant feature");

  const VectorXd data = observed(trace);
  const double kappa = group.mode.kappa;
  auto residual = [&](double n, double g_bare) {
    VectorXd r(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      const double g = axis.g_eps[i] * g_bare;
      r(i) = std::atan(-2.0 * n * g * g / (kappa * axis.detuning[i])) - data(i);
    }
    return r;
  };

  DispersiveFit out;
  if (free == DispersiveFree::count) {
    if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= max_n; ++n) {
      const double cost = residual(n, group.g_bare).norm();
      if (cost < best) {
        best = cost;
        out.n = n;
      }
    }
    out.g_bare = group.g_bare;
    out.fit = linearized_result({"n"}, VectorXd::Constant(1, out.n),
                                [&](const VectorXd& p) { return residual(p(0), group.g_bare); });
    return out;
  }

  if (setup.n < 1) throw InvalidArgument("fixed n must be >= 1");
  const double g0 = group.g_bare > 0.0 ? group.g_bare : 1e6 * units::Hz;
  LeastSquaresProblem problem;
  problem.names = {"g_bare"};
  problem.initial = VectorXd::Constant(1, g0);
  problem.lower = VectorXd::Constant(1, 1e-6 * g0);
  problem.upper = VectorXd::Constant(1, 1e6 * g0);
  problem.residual = [&](const VectorXd& p) { return residual(setup.n, p(0)); };
  out.n = setup.n;
  out.fit = solve_least_squares(problem);
  out.g_bare = out.fit.parameters(0);
  return out;
}

}  // namespace qmeta
