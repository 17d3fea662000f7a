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

#include "qmeta/model.hpp"

#include <cmath>
#include <string>

#include "qmeta/errors.hpp"

namespace qmeta {
namespace {

// Angular bias per unit flux detuning and per ampere: 2 Phi0 / hbar.
constexpr double kBiasPerAmpere = 2.0 * constants::flux_quantum / constants::hbar;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

void QubitParams::validate() const {
  const std::string name = label.empty() ? "qubit" : "qubit '" + label + "'";
  require(std::isfinite(delta) && delta > 0.0, name + ": delta must be > 0");
  require(std::isfinite(persistent_current) && persistent_current > 0.0,
          name + ": persistent_current must be > 0");
  require(std::isfinite(gamma_1) && gamma_1 >= 0.0, name + ": gamma_1 must be >= 0");
  require(std::isfinite(gamma_phi) && gamma_phi >= 0.5 * gamma_1,
          name + ": gamma_phi must be >= gamma_1 / 2");
}

void ResonatorMode::validate() const {
  const std::string name = "mode " + std::to_string(index);
  require(index >= 1, name + ": index must be >= 1");
  require(std::isfinite(omega) && omega > 0.0, name + ": omega must be > 0");
  require(std::isfinite(kappa) && kappa > 0.0, name + ": kappa must be > 0");
  require(kappa < 1e-3 * omega, name + ": kappa / omega must be < 1e-3");
}

void CouplingGeometry::validate() const {
  require(mutual_inductance > 0.0, "mutual_inductance must be > 0");
  require(resonator_inductance > 0.0, "resonator_inductance must be > 0");
  require(mutual_inductance < resonator_inductance,
          "mutual_inductance must be below resonator_inductance");
}

FluxBias::FluxBias(double detuning) : value_(detuning) {
  if (!(std::abs(detuning) < 0.5)) {
    throw InvalidArgument("flux detuning must lie in (-0.5, 0.5) Phi0, got " +
                          std::to_string(detuning));
  }
}

double energy_bias(const QubitParams& q, FluxBias flux) {
  return kBiasPerAmpere * q.persistent_current * flux.value();
}

double transition_frequency(const QubitParams& q, FluxBias flux) {
  return std::hypot(q.delta, energy_bias(q, flux));
}

FluxBias resonance_flux(const QubitParams& q, const ResonatorMode& mode) {
  if (mode.omega < q.delta) {
    throw NoCrossing("mode " + std::to_string(mode.index) +
                     " lies below the qubit gap; no resonant crossing");
  }
  const double eps = std::sqrt((mode.omega - q.delta) * (mode.omega + q.delta));
  return FluxBias(eps / (kBiasPerAmpere * q.persistent_current));
}

double bare_coupling(const CouplingGeometry& geom, const QubitParams& q,
                     const ResonatorMode& mode) {
  return geom.mutual_inductance * q.persistent_current *
         std::sqrt(mode.omega / (constants::hbar * geom.resonator_inductance));
}

double transversal_coupling(const QubitParams& q, FluxBias flux, double g_bare) {
  return q.delta / transition_frequency(q, flux) * g_bare;
}

double thermal_photon_number(const ResonatorMode& mode, double temperature) {
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
  const double x = constants::hbar * mode.omega / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

}  // namespace qmeta
