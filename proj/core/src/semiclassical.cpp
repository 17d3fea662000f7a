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

#include "qmeta/semiclassical.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "qmeta/errors.hpp"

namespace qmeta {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Ensemble::Ensemble(std::vector<QubitGroup> groups, CouplingGeometry geometry, double g_qq)
    : groups_(std::move(groups)), geometry_(geometry), g_qq_(g_qq) {
  if (groups_.empty()) throw InvalidArgument("ensemble needs at least one qubit group");
  if (!(g_qq_ >= 0.0)) throw InvalidArgument("g_qq must be >= 0");
  geometry_.validate();
  for (const auto& group : groups_) {
    group.qubit.validate();
    if (group.count < 0) throw InvalidArgument("qubit group count must be >= 0");
    if (!(group.qubit.gamma_phi > 0.0)) {
      throw InvalidArgument("qubit '" + group.qubit.label + "': gamma_phi must be > 0");
    }
    for (const auto& [mode, g] : group.coupling_override) {
      if (!(g >= 0.0)) throw InvalidArgument("coupling override must be >= 0");
    }
  }
}

int Ensemble::size() const {
  return std::accumulate(groups_.begin(), groups_.end(), 0,
                         [](int acc, const QubitGroup& g) { return acc + g.count; });
}

double Ensemble::bare_coupling(const QubitGroup& group, const ResonatorMode& mode) const {
  if (auto it = group.coupling_override.find(mode.index); it != group.coupling_override.end()) {
    return it->second;
  }
  return qmeta::bare_coupling(geometry_, group.qubit, mode);
}

std::vector<std::string> Ensemble::warnings() const {
  std::vector<std::string> out;
  if (g_qq_ <= 0.0) return out;
  for (const auto& group : groups_) {
    if (g_qq_ >= 0.1 * group.qubit.gamma_phi) {
      out.push_back("g_qq is not small against gamma_phi of '" + group.qubit.label +
                    "'; the first-order qubit-qubit correction is unreliable");
    }
  }
  return out;
}

DriveSpec DriveSpec::resonant(const ResonatorMode& mode, double relative) {
  return DriveSpec{relative * mode.kappa, mode.omega};
}

Complex qubit_susceptibility(const QubitParams& q, double g_eps, double detuning) {
  return g_eps * g_eps / Complex(q.gamma_phi, detuning);
}

Complex effective_damping(const Ensemble& ens, const ResonatorMode& mode, FluxBias flux) {
  Complex total{0.5 * mode.kappa, 0.0};
  for (const auto& group : ens.groups()) {
    if (group.count == 0) continue;
    const double energy = transition_frequency(group.qubit, flux);
    const double g_eps = transversal_coupling(group.qubit, flux, ens.bare_coupling(group, mode));
    total += static_cast<double>(group.count) *
             qubit_susceptibility(group.qubit, g_eps, energy - mode.omega);
  }
  return total;
}

CavityResponse steady_state_field(const Ensemble& ens, const ResonatorMode& mode,
                                  FluxBias flux, const DriveSpec& drive) {
  if (!(drive.strength > 0.0)) throw InvalidArgument("drive strength must be > 0");
  const Complex damping = effective_damping(ens, mode, flux);
  if (!(damping.real() > 0.0)) {
    throw UnstableRegime("effective cavity damping has non-positive real part");
  }
  CavityResponse out;
  out.field = 0.5 * kI * drive.strength / damping;
  out.amplitude = std::abs(out.field);
  const Complex bare = kI * drive.strength / mode.kappa;
  out.phase_shift = std::arg(bare / out.field);
  out.weak_drive = out.amplitude * out.amplitude < 0.1;
  return out;
}

double phase_shift_resonant(int n, double g_eps, double gamma_phi, double kappa,
                            double detuning) {
  const double coupling = 2.0 * n * g_eps * g_eps;
  return std::atan2(-coupling * detuning,
                    kappa * (gamma_phi * gamma_phi + detuning * detuning) + coupling * gamma_phi);
}

double phase_shift_dispersive(int n, double g_eps, double kappa, double detuning) {
  if (detuning == 0.0) throw ZeroDetuning("dispersive phase is undefined at zero detuning");
  return std::atan(-2.0 * n * g_eps * g_eps / (kappa * detuning));
}

double sigma_z_saturation(double g, double gamma_1, double gamma_phi, double detuning,
                          double photon_sq) {
  const double drive = 4.0 * g * g / gamma_1 * gamma_phi * photon_sq /
                       (gamma_phi * gamma_phi + detuning * detuning);
  return -1.0 / (1.0 + drive);
}

Complex sigma_minus_with_qq(double g, double g_qq, double gamma_phi, double detuning,
                            Complex field) {
  const Complex denom(gamma_phi, detuning);
  return -kI * g * field / denom - 2.0 * g_qq * g * field / (denom * denom);
}

FieldTrajectory integrate_field(const Ensemble& ens, const ResonatorMode& mode,
                                FluxBias flux, const DriveSpec& drive, double t_end,
                                double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw InvalidArgument("dt must be > 0 and t_end >= 0");
  const Complex damping = effective_damping(ens, mode, flux);
  const Complex added = damping - 0.5 * mode.kappa;
  if (!(dt < 0.1 / (mode.kappa + std::abs(added)))) {
    throw StepTooLarge("dt exceeds 0.1 / (kappa + |qubit damping|)");
  }
  const Complex source = 0.5 * kI * drive.strength;
  auto rhs = [&](Complex a) { return -damping * a + source; };

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  FieldTrajectory out;
  out.dt = dt;
  out.samples.reserve(steps + 1);
  Complex a{0.0, 0.0};
  out.samples.push_back(a);
  for (std::size_t k = 0; k < steps; ++k) {
    const Complex k1 = rhs(a);
    const Complex k2 = rhs(a + 0.5 * dt * k1);
    const Complex k3 = rhs(a + 0.5 * dt * k2);
    const Complex k4 = rhs(a + dt * k3);
    a += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.samples.push_back(a);
  }
  return out;
}

}  // namespace qmeta
