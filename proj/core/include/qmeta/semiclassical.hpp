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

// Semiclassical forward model of the driven cavity field with the qubits
// adiabatically eliminated:
//
//   d<a>/dt = -(kappa/2 + sum_i g_i^2 / (gamma_phi_i + i delta_i)) <a> + i f/2
//
// with delta_i = E_i - omega_j. The measured phase is reported relative to
// the bare resonator, phi = arg(<a>_bare) - arg(<a>).

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qmeta/model.hpp"

namespace qmeta {

using Complex = std::complex<double>;

/// `count` identical qubits sharing one parameter set.
struct QubitGroup {
  QubitParams qubit;
  int count = 1;
  /// Bare coupling (rad/s) per mode index, replacing the geometric value,
  /// e.g. the capacitive coupling at even harmonics.
  std::map<int, double> coupling_override;
};

class Ensemble {
 public:
  /// Throws InvalidArgument if `groups` is empty, a count is negative, a
  /// qubit or the geometry is invalid, or g_qq < 0.
  Ensemble(std::vector<QubitGroup> groups, CouplingGeometry geometry, double g_qq = 0.0);

  const std::vector<QubitGroup>& groups() const { return groups_; }
  const CouplingGeometry& geometry() const { return geometry_; }
  double g_qq() const { return g_qq_; }

  /// Total number of qubits over all groups.
  int size() const;

  /// Bare coupling of a qubit of `group` to `mode`.
  double bare_coupling(const QubitGroup& group, const ResonatorMode& mode) const;

  /// Non-fatal validity notes, currently the perturbative g_qq bound.
  std::vector<std::string> warnings() const;

 private:
  std::vector<QubitGroup> groups_;
  CouplingGeometry geometry_;
  double g_qq_;
};

struct DriveSpec {
  double strength = 0.0;   // f, rad/s
  double frequency = 0.0;  // rad/s, equal to the probed mode frequency

  /// Resonant drive of strength `relative * mode.kappa`.
  static DriveSpec resonant(const ResonatorMode& mode, double relative = 0.1);
};

struct CavityResponse {
  Complex field;             // <a>
  double phase_shift = 0.0;  // rad, relative to the bare resonator
  double amplitude = 0.0;    // |<a>|
  bool weak_drive = true;    // |<a>|^2 < 0.1
};

/// g_eps^2 / (gamma_phi + i delta): one qubit's contribution to the field
/// damping.
Complex qubit_susceptibility(const QubitParams& q, double g_eps, double detuning);

/// kappa/2 plus the susceptibility of every qubit of `ens` at `flux`.
Complex effective_damping(const Ensemble& ens, const ResonatorMode& mode, FluxBias flux);

/// Stationary cavity field. Throws UnstableRegime if the effective damping
/// has non-positive real part, InvalidArgument for a non-positive drive.
CavityResponse steady_state_field(const Ensemble& ens, const ResonatorMode& mode,
                                  FluxBias flux, const DriveSpec& drive);

/// Closed-form stationary phase of n identical qubits, atan of
///   -2 n g^2 delta / (kappa (gamma_phi^2 + delta^2) + 2 n g^2 gamma_phi).
double phase_shift_resonant(int n, double g_eps, double gamma_phi, double kappa,
                            double detuning);

/// Far-detuned limit atan(-2 n g^2 / (kappa delta)). Throws ZeroDetuning at
/// delta == 0.
double phase_shift_dispersive(int n, double g_eps, double kappa, double detuning);

/// Stationary <sigma_z> of a weakly driven qubit including saturation.
double sigma_z_saturation(double g, double gamma_1, double gamma_phi, double detuning,
                          double photon_sq);

/// Stationary <sigma_-> to first order in the nearest-neighbour coupling.
Complex sigma_minus_with_qq(double g, double g_qq, double gamma_phi, double detuning,
                            Complex field);

struct FieldTrajectory {
  double dt = 0.0;
  std::vector<Complex> samples;  // samples[k] is <a>(k dt); samples[0] == 0
};

/// Fixed-step RK4 integration of the field equation from <a>(0) = 0.
/// Throws StepTooLarge unless dt < 0.1 / (kappa + |effective damping|).
FieldTrajectory integrate_field(const Ensemble& ens, const ResonatorMode& mode,
                                FluxBias flux, const DriveSpec& drive, double t_end,
                                double dt);

}  // namespace qmeta
