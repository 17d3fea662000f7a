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

// Physical constants, unit conventions and the closed-form single-qubit /
// resonator relations.
//
// Every frequency and rate inside the library is angular (rad/s). Flux is the
// dimensionless detuning (Phi - Phi0/2) / Phi0 from the qubit degeneracy
// point.

#include <numbers>
#include <string>

namespace qmeta {

namespace constants {

// SI-2019 defining values; hbar and the flux quantum follow exactly.
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb

}  // namespace constants

struct PhysicalConstants {
  double hbar = constants::hbar;
  double h = constants::planck;
  double flux_quantum = constants::flux_quantum;
  double boltzmann = constants::boltzmann;
};

/// Multiply a cyclic quantity by these to get the internal representation,
/// e.g. `5.6 * units::GHz` is an angular frequency in rad/s.
namespace units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double Hz = two_pi;
inline constexpr double kHz = 1e3 * two_pi;
inline constexpr double MHz = 1e6 * two_pi;
inline constexpr double GHz = 1e9 * two_pi;

inline constexpr double nA = 1e-9;
inline constexpr double pH = 1e-12;
inline constexpr double nH = 1e-9;
inline constexpr double mK = 1e-3;

constexpr double to_cyclic(double angular) { return angular / two_pi; }
constexpr double to_angular(double cyclic) { return cyclic * two_pi; }

}  // namespace units

/// One flux qubit in its two-level approximation.
struct QubitParams {
  double delta = 0.0;               // gap, rad/s
  double persistent_current = 0.0;  // A
  double gamma_phi = 0.0;           // total dephasing rate, rad/s
  double gamma_1 = 0.0;             // energy relaxation rate, rad/s
  std::string label;

  /// Throws InvalidArgument unless delta > 0, I > 0 and
  /// gamma_phi >= gamma_1 / 2 >= 0.
  void validate() const;

  /// Pure dephasing rate gamma_phi - gamma_1 / 2.
  double pure_dephasing() const { return gamma_phi - 0.5 * gamma_1; }
};

struct ResonatorMode {
  int index = 1;
  double omega = 0.0;  // rad/s
  double kappa = 0.0;  // photon loss rate, rad/s

  /// Throws InvalidArgument unless index >= 1, omega > 0, kappa > 0 and
  /// kappa / omega < 1e-3.
  void validate() const;
};

struct CouplingGeometry {
  double mutual_inductance = 0.0;     // M_qr, H
  double resonator_inductance = 0.0;  // L_r, H

  void validate() const;
};

/// Flux detuning from the degeneracy point in units of Phi0; |value| < 0.5.
class FluxBias {
 public:
  constexpr FluxBias() = default;
  explicit FluxBias(double detuning);

  constexpr double value() const { return value_; }
  FluxBias operator-() const { return FluxBias(-value_); }
  friend constexpr bool operator==(FluxBias, FluxBias) = default;

 private:
  double value_ = 0.0;
};

/// Energy bias eps = 2 I (Phi - Phi0/2) / hbar in rad/s.
double energy_bias(const QubitParams& q, FluxBias flux);

/// Qubit transition frequency sqrt(delta^2 + eps^2).
double transition_frequency(const QubitParams& q, FluxBias flux);

/// Non-negative flux at which the qubit is resonant with `mode`. The mirror
/// solution is the negation. Throws NoCrossing if mode.omega < q.delta.
FluxBias resonance_flux(const QubitParams& q, const ResonatorMode& mode);

/// Bare inductive coupling M_qr I sqrt(omega_j / (hbar L_r)).
double bare_coupling(const CouplingGeometry& geom, const QubitParams& q,
                     const ResonatorMode& mode);

/// Coupling projected on the qubit energy basis, (delta / E) g_bare.
double transversal_coupling(const QubitParams& q, FluxBias flux, double g_bare);

/// Bose-Einstein occupancy of `mode` at `temperature` (K).
double thermal_photon_number(const ResonatorMode& mode, double temperature);

}  // namespace qmeta
