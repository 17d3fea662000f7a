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

#include "qmeta/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmeta/errors.hpp"

namespace qmeta {
namespace {

using Matrix = Eigen::MatrixXcd;

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix kron(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    }
  }
  return out;
}

// Embeds a single-site operator at position `site` of [cavity, q0, q1, ...].
Matrix embed(const Matrix& op, int site, int cavity_dim, int n_qubits) {
  Matrix out = site == 0 ? op : Matrix::Identity(cavity_dim, cavity_dim);
  for (int q = 0; q < n_qubits; ++q) {
    out = kron(out, site == q + 1 ? op : Matrix::Identity(2, 2));
  }
  return out;
}

void add_dissipator(Matrix& generator, const Matrix& jump, double rate) {
  if (rate == 0.0) return;
  const auto dim = jump.rows();
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix number = jump.adjoint() * jump;
  generator += rate * (kron(jump.conjugate(), jump) - 0.5 * kron(id, number) -
                       0.5 * kron(number.transpose(), id));
}

}  // namespace

void TruncatedSystem::validate() const {
  mode.validate();
  if (fock_cutoff < 1) throw InvalidArgument("fock_cutoff must be >= 1");
  if (qubits.size() > 3) throw InvalidArgument("the oracle handles at most 3 qubits");
  if (dimension() > kMaxOracleDimension) {
    throw DimensionTooLarge("Hilbert dimension " + std::to_string(dimension()) +
                            " exceeds " + std::to_string(kMaxOracleDimension));
  }
  if (!(drive.strength >= 0.0)) throw InvalidArgument("drive strength must be >= 0");
  for (const auto& q : qubits) {
    if (!(q.gamma_1 >= 0.0) || !(q.gamma_phi >= 0.5 * q.gamma_1)) {
      throw InvalidArgument("oracle qubit needs gamma_phi >= gamma_1 / 2 >= 0");
    }
  }
}

TruncatedSystem TruncatedSystem::from_ensemble(const Ensemble& ens, const ResonatorMode& mode,
                                               FluxBias flux, const DriveSpec& drive,
                                               int fock_cutoff) {
  TruncatedSystem sys;
  sys.mode = mode;
  sys.drive = drive;
  sys.fock_cutoff = fock_cutoff;
  for (const auto& group : ens.groups()) {
    const double energy = transition_frequency(group.qubit, flux);
    const double g = transversal_coupling(group.qubit, flux, ens.bare_coupling(group, mode));
    for (int k = 0; k < group.count; ++k) {
      sys.qubits.push_back({energy - drive.frequency, g, group.qubit.gamma_1,
                            group.qubit.gamma_phi});
    }
  }
  if (sys.qubits.empty() || sys.qubits.size() > 3) {
    throw InvalidArgument("the oracle needs 1 to 3 qubits, ensemble has " +
                          std::to_string(sys.qubits.size()));
  }
  sys.validate();
  return sys;
}

Liouvillian build_liouvillian(const TruncatedSystem& sys) {
  sys.validate();
  const int nc = sys.cavity_dimension();
  const int nq = static_cast<int>(sys.qubits.size());
  const int dim = sys.dimension();

  const Matrix a = embed(annihilation(nc), 0, nc, nq);
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  Matrix pauli_z = Matrix::Zero(2, 2);
  pauli_z(0, 0) = -1.0;
  pauli_z(1, 1) = 1.0;

  // Rotating frame at the drive; the cavity is resonant with it.
  Matrix hamiltonian = (sys.mode.omega - sys.drive.frequency) * a.adjoint() * a;
  hamiltonian -= 0.5 * sys.drive.strength * (a + a.adjoint());
  std::vector<Matrix> sigma_minus;
  std::vector<Matrix> sigma_z;
  for (int q = 0; q < nq; ++q) {
    sigma_minus.push_back(embed(lower, q + 1, nc, nq));
    sigma_z.push_back(embed(pauli_z, q + 1, nc, nq));
    const auto& qubit = sys.qubits[q];
    hamiltonian += 0.5 * qubit.detuning * sigma_z.back();
    hamiltonian += qubit.g * (sigma_minus.back().adjoint() * a + sigma_minus.back() * a.adjoint());
  }

  const Matrix id = Matrix::Identity(dim, dim);
  const std::complex<double> minus_i{0.0, -1.0};
  Liouvillian out;
  out.cavity_dimension = nc;
  out.n_qubits = nq;
  out.matrix = minus_i * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  add_dissipator(out.matrix, a, sys.mode.kappa);
  for (int q = 0; q < nq; ++q) {
    const auto& qubit = sys.qubits[q];
    add_dissipator(out.matrix, sigma_minus[q], qubit.gamma_1);
    // D[sqrt(r) sz] damps coherences at 2 r; with gamma_1 / 2 from decay the
    // total is gamma_phi.
    add_dissipator(out.matrix, sigma_z[q], 0.5 * (qubit.gamma_phi - 0.5 * qubit.gamma_1));
  }
  return out;
}

int kernel_dimension(const Liouvillian& liouvillian, double tolerance) {
  Eigen::FullPivLU<Matrix> lu(liouvillian.matrix);
  lu.setThreshold(tolerance);
  return static_cast<int>(lu.dimensionOfKernel());
}

SteadyStateResult steady_state(const Liouvillian& liouvillian) {
  const int dim = liouvillian.dimension();
  if (liouvillian.matrix.rows() != static_cast<Eigen::Index>(dim) * dim) {
    throw InvalidArgument("Liouvillian size does not match its dimensions");
  }
  // Replace the first equation by the trace condition. The bordered system is
  // regular exactly when the kernel is one-dimensional.
  Matrix system = liouvillian.matrix;
  system.row(0).setZero();
  for (int k = 0; k < dim; ++k) system(0, k * dim + k) = 1.0;
  const Eigen::PartialPivLU<Matrix> lu(system);
  if (!(lu.rcond() > 1e-13)) {
    throw DegenerateKernel("generator kernel has dimension " +
                           std::to_string(kernel_dimension(liouvillian)));
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(system.rows());
  rhs(0) = 1.0;
  const Eigen::VectorXcd solution = lu.solve(rhs);

  SteadyStateResult out;
  out.rho = Eigen::Map<const Matrix>(solution.data(), dim, dim);
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();

  const int nc = liouvillian.cavity_dimension;
  const int nq = liouvillian.n_qubits;
  const int qubit_dim = 1 << nq;
  const Matrix a = embed(annihilation(nc), 0, nc, nq);
  out.field = (a * out.rho).trace();
  for (int q = 0; q < nq; ++q) {
    double value = 0.0;
    for (int k = 0; k < dim; ++k) {
      const int bit = ((k % qubit_dim) >> (nq - 1 - q)) & 1;
      value += (bit ? 1.0 : -1.0) * out.rho(k, k).real();
    }
    out.sigma_z.push_back(value);
  }
  for (int k = (nc - 1) * qubit_dim; k < dim; ++k) out.top_fock_population += out.rho(k, k).real();
  return out;
}

double relative_phase(const SteadyStateResult& result, const TruncatedSystem& sys) {
  const std::complex<double> bare{0.0, sys.drive.strength / sys.mode.kappa};
  return std::arg(bare / result.field);
}

DiscrepancyReport compare_semiclassical(const Ensemble& ens, const ResonatorMode& mode,
                                        const std::vector<FluxBias>& flux_grid,
                                        const DriveSpec& drive, int fock_cutoff) {
  DiscrepancyReport report;
  for (const FluxBias flux : flux_grid) {
    const auto sys = TruncatedSystem::from_ensemble(ens, mode, flux, drive, fock_cutoff);
    for (const auto& q : sys.qubits) {
      if (q.gamma_phi < 10.0 * q.g) {
        throw InvalidArgument("semiclassical comparison requires gamma_phi >= 10 g_eps");
      }
    }
    const auto oracle = steady_state(build_liouvillian(sys));
    const auto semi = steady_state_field(ens, mode, flux, drive);

    ComparisonPoint p;
    p.flux = flux.value();
    p.oracle_phase = relative_phase(oracle, sys);
    p.semiclassical_phase = semi.phase_shift;
    p.oracle_amplitude = std::abs(oracle.field);
    p.semiclassical_amplitude = semi.amplitude;
    report.max_phase_difference =
        std::max(report.max_phase_difference, std::abs(p.oracle_phase - p.semiclassical_phase));
    report.max_relative_amplitude_difference =
        std::max(report.max_relative_amplitude_difference,
                 std::abs(p.oracle_amplitude - p.semiclassical_amplitude) /
                     p.semiclassical_amplitude);
    report.peak_phase = std::max(report.peak_phase, std::abs(p.semiclassical_phase));
    report.points.push_back(p);
  }
  return report;
}

}  // namespace qmeta
