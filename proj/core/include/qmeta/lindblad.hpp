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

// Brute-force steady state of the driven, dissipative Tavis-Cummings model
// for a few qubits, used to check the semiclassical field equation.
//
// Frame: rotating at the drive frequency, which equals the cavity frequency.
//   H = sum_i [ delta_i / 2 sz_i + g_i (s+_i a + s-_i a^dag) ] - f/2 (a + a^dag)
// Dissipators D[L] rho = L rho L^dag - {L^dag L, rho} / 2 with
//   sqrt(kappa) a, sqrt(gamma_1) s-_i, sqrt(gamma_phi* / 2) sz_i.
// The drive sign makes the bare coherent state i f / kappa, matching the
// semiclassical field.
//
// Density matrices are vectorized column-major: vec(A X B) = (B^T kron A) vec(X).
// Basis ordering is cavity (slowest) then qubits; qubit state 0 is |g>.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qmeta/model.hpp"
#include "qmeta/semiclassical.hpp"

namespace qmeta {

/// Largest Hilbert-space dimension the dense oracle accepts.
inline constexpr int kMaxOracleDimension = 64;

struct OracleQubit {
  double detuning = 0.0;   // E_i - omega_drive, rad/s
  double g = 0.0;          // transversal coupling, rad/s
  double gamma_1 = 0.0;    // rad/s
  double gamma_phi = 0.0;  // total coherence decay rate, rad/s
};

struct TruncatedSystem {
  ResonatorMode mode;
  std::vector<OracleQubit> qubits;
  int fock_cutoff = 6;  // highest Fock level kept
  DriveSpec drive;

  int cavity_dimension() const { return fock_cutoff + 1; }
  int dimension() const { return cavity_dimension() << qubits.size(); }

  /// Throws InvalidArgument or DimensionTooLarge.
  void validate() const;

  /// Expands the ensemble's groups (1-3 qubits in total) at `flux`.
  static TruncatedSystem from_ensemble(const Ensemble& ens, const ResonatorMode& mode,
                                       FluxBias flux, const DriveSpec& drive,
                                       int fock_cutoff = 6);
};

struct Liouvillian {
  Eigen::MatrixXcd matrix;  // D^2 x D^2
  int cavity_dimension = 0;
  int n_qubits = 0;

  int dimension() const { return cavity_dimension << n_qubits; }
};

struct SteadyStateResult {
  Eigen::MatrixXcd rho;
  std::complex<double> field;
  std::vector<double> sigma_z;
  double top_fock_population = 0.0;
};

Liouvillian build_liouvillian(const TruncatedSystem& sys);

/// Number of numerically zero singular directions of the generator.
int kernel_dimension(const Liouvillian& liouvillian, double tolerance = 1e-10);

/// Solves L rho = 0 with unit trace. Throws DegenerateKernel if the kernel
/// is not one-dimensional.
SteadyStateResult steady_state(const Liouvillian& liouvillian);

/// Phase of a steady state relative to the bare driven cavity.
double relative_phase(const SteadyStateResult& result, const TruncatedSystem& sys);

struct ComparisonPoint {
  double flux = 0.0;
  double oracle_phase = 0.0;
  double semiclassical_phase = 0.0;
  double oracle_amplitude = 0.0;
  double semiclassical_amplitude = 0.0;
};

struct DiscrepancyReport {
  double max_phase_difference = 0.0;
  double max_relative_amplitude_difference = 0.0;
  double peak_phase = 0.0;  // max |semiclassical phase| over the grid
  std::vector<ComparisonPoint> points;
};

/// Lindblad vs semiclassical phase and amplitude over a flux grid. Requires
/// gamma_phi >= 10 g_eps for every qubit at every grid point.
DiscrepancyReport compare_semiclassical(const Ensemble& ens, const ResonatorMode& mode,
                                        const std::vector<FluxBias>& flux_grid,
                                        const DriveSpec& drive, int fock_cutoff = 6);

}  // namespace qmeta
