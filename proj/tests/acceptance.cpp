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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "qmeta/errors.hpp"
#include "qmeta/estimation.hpp"
#include "qmeta/lindblad.hpp"
#include "qmeta/model.hpp"
#include "qmeta/scenarios.hpp"
#include "qmeta/semiclassical.hpp"
#include "qmeta/sweep.hpp"

using namespace qmeta;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kGi3Mhz = 1.2, kGi3Tol = 0.1;
constexpr double kGqrMhz = 4.7, kGqrTol = 0.3;
constexpr double kNth = 0.002, kNthRel = 0.20;
constexpr double kClosedFormTol = 1e-10;
constexpr double kDispersiveRel = 0.02;
constexpr double kOraclePhaseTol = 0.005;
constexpr double kCollectiveRel = 0.01;
constexpr double kGammaRel = 0.05;
constexpr double kG2Rel = 0.10;
constexpr int kNoiseTrials = 100, kNoiseRequired = 95;
constexpr double kLorentzRel = 0.005;
constexpr double kSaturationTol = 1e-3;

// Runtime budgets, seconds.
constexpr double kBudget[] = {0, 1, 1, 1, 1, 30, 300, 5, 1, 60};

struct Outcome {
  bool pass;
  std::string detail;
};

const CouplingGeometry kGeometry{0.5 * units::pH, 11 * units::nH};
const ResonatorMode kThird{3, 3 * 2.594 * units::GHz, 715 * units::kHz};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome coupling_golden() {
  const double gi3 = units::to_cyclic(bare_coupling(kGeometry, device::ensemble_s(), kThird)) / 1e6;
  const double gqr = units::to_cyclic(bare_coupling(device::single_qubit_geometry(),
                                                    device::single_qubit(),
                                                    device::single_qubit_mode())) /
                     1e6;
  const bool pass = std::abs(gi3 - kGi3Mhz) <= kGi3Tol && std::abs(gqr - kGqrMhz) <= kGqrTol;
  return {pass, fmt("g_i3/2pi = %.4f MHz, g_qr/2pi = %.4f MHz", gi3, gqr)};
}

Outcome thermal() {
  ResonatorMode m;
  m.omega = 2.594 * units::GHz;
  const double n = thermal_photon_number(m, 20 * units::mK);
  return {std::abs(n / kNth - 1.0) <= kNthRel, fmt("n_th = %.6f", n)};
}

Outcome closed_form() {
  const auto q = device::ensemble_s();
  const Ensemble ens({QubitGroup{q, 8, {}}}, kGeometry);
  const double crossing = resonance_flux(q, kThird).value();
  const double g = bare_coupling(kGeometry, q, kThird);
  const auto drive = DriveSpec::resonant(kThird);
  double worst = 0.0;
  for (int k = 0; k < 2001; ++k) {
    const FluxBias x(-1.5 * crossing + 3.0 * crossing * k / 2000.0);
    const double phi = steady_state_field(ens, kThird, x, drive).phase_shift;
    const double closed = phase_shift_resonant(8, transversal_coupling(q, x, g), q.gamma_phi,
                                               kThird.kappa, transition_frequency(q, x) - kThird.omega);
    worst = std::max(worst, std::abs(phi - closed));
  }
  return {worst < kClosedFormTol, fmt("max |dphi| = %.3e rad over 2001 points", worst)};
}

Outcome dispersive_limit() {
  const auto q = device::ensemble_s();
  const double g = bare_coupling(kGeometry, q, kThird);
  double worst = 0.0;
  int used = 0;
  for (int k = 0; k <= 6000; ++k) {
    const FluxBias x(-0.03 + 1e-5 * k);
    const double d = transition_frequency(q, x) - kThird.omega;
    if (std::abs(d) <= 10.0 * q.gamma_phi) continue;
    const double ge = transversal_coupling(q, x, g);
    const double full = phase_shift_resonant(8, ge, q.gamma_phi, kThird.kappa, d);
    const double disp = phase_shift_dispersive(8, ge, kThird.kappa, d);
    worst = std::max(worst, std::abs(full / disp - 1.0));
    ++used;
  }
  return {used > 0 && worst < kDispersiveRel,
          fmt("max relative difference %.4f over %.0f points", worst, used)};
}

double oracle_phase(const std::vector<OracleQubit>& qubits, const ResonatorMode& mode) {
  TruncatedSystem sys;
  sys.mode = mode;
  sys.qubits = qubits;
  sys.fock_cutoff = 6;
  sys.drive = DriveSpec::resonant(mode, 0.05);
  return relative_phase(steady_state(build_liouvillian(sys)), sys);
}

Outcome oracle_equivalence() {
  const auto mode = device::single_qubit_mode();
  const double gamma = device::single_qubit().gamma_phi;
  const double g = 4.9 * units::MHz;
  double worst = 0.0;
  for (int k = 0; k <= 40; ++k) {
    const double d = (-5.0 + 0.25 * k) * gamma;
    const double phi = oracle_phase({{d, g, gamma, gamma}}, mode);
    worst = std::max(worst, std::abs(phi - phase_shift_resonant(1, g, gamma, mode.kappa, d)));
  }
  double collective = 0.0;
  for (double d : {-8 * gamma, -5 * gamma, 5 * gamma, 8 * gamma}) {
    const double pair = oracle_phase({{d, g, gamma, gamma}, {d, g, gamma, gamma}}, mode);
    const double single = oracle_phase({{d, std::sqrt(2.0) * g, gamma, gamma}}, mode);
    collective = std::max(collective, std::abs(pair / single - 1.0));
  }
  return {worst < kOraclePhaseTol && collective < kCollectiveRel,
          fmt("n=1 max |dphi| = %.2e rad over 41 detunings (Gamma/g = %.1f); n=2 collective "
              "deviation %.2e",
              worst, gamma / g, collective)};
}

Outcome round_trip() {
  const auto s = reproduce(Scenario::single_mode, 7);
  const auto ab = reproduce(Scenario::two_modes, 7);
  const auto w2 = reproduce(Scenario::dispersive_w2, 7);
  auto find = [](const ScenarioReport& r, const std::string& q) {
    for (const auto& c : r.checks) {
      if (c.quantity == q) return c.recovered;
    }
    throw Error("missing check " + q);
  };
  const double n_s = find(s, "n_S"), gamma_s = find(s, "gamma_phi_S/2pi");
  const double n_a = find(ab, "n_A"), n_b = find(ab, "n_B");
  const double gamma_a = find(ab, "gamma_phi_A/2pi"), gamma_b = find(ab, "gamma_phi_B/2pi");
  const double g2 = find(w2, "g_i2/2pi");
  bool pass = n_s == 8 && std::abs(gamma_s / 53 - 1) <= kGammaRel && n_a == 4 && n_b == 4 &&
              std::abs(gamma_a / 54 - 1) <= kGammaRel && std::abs(gamma_b / 41 - 1) <= kGammaRel &&
              std::abs(g2 / 0.4 - 1) <= kG2Rel;

  const auto q = device::ensemble_s();
  const auto cfg = scenario_config(Scenario::single_mode, 0, 0.5e-3);
  const ResonantSetup setup{q, cfg.mode(3), bare_coupling(cfg.geometry, q, cfg.mode(3))};
  auto noisy = cfg;
  noisy.modes = {3};
  noisy.flux = FluxRange{-0.02, 0.02, 2001};
  int hits = 0;
  for (int seed = 0; seed < kNoiseTrials; ++seed) {
    noisy.noise.seed = 1000 + static_cast<std::uint64_t>(seed);
    try {
      hits += fit_resonant_mode(run_sweep(noisy)[0], setup).n == 8;
    } catch (const FitError&) {
    }
  }
  pass = pass && hits >= kNoiseRequired;
  std::ostringstream detail;
  detail << "S: n=" << n_s << " Gamma/2pi=" << gamma_s << " MHz; AB: (" << n_a << ", " << n_b
         << ") Gamma/2pi=(" << gamma_a << ", " << gamma_b << ") MHz; w2: g/2pi=" << g2
         << " MHz; noisy n recovery " << hits << "/" << kNoiseTrials;
  return {pass, detail.str()};
}

Outcome lorentzian() {
  const double kappas[] = {55.5, 216, 715, 950, 1400};
  const double omegas[] = {2.594, 5.202, 7.782, 10.376, 12.97};
  double worst = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double w0 = omegas[j] * units::GHz, k = kappas[j] * units::kHz;
    std::vector<double> w, a;
    for (int i = 0; i <= 400; ++i) {
      w.push_back(w0 + (i - 200) * k / 40.0);
      const double u = 2 * (w.back() - w0) / k;
      a.push_back(1.0 / (1.0 + u * u));
    }
    worst = std::max(worst, std::abs(fit_lorentzian(w, a).width / k - 1.0));
  }
  return {worst < kLorentzRel, fmt("max relative width error %.2e over five modes", worst)};
}

Outcome negligibility() {
  const auto q = device::ensemble_s();
  const Ensemble ens({QubitGroup{q, 8, {}}}, kGeometry);
  const FluxBias x = resonance_flux(q, kThird);
  const auto field = steady_state_field(ens, kThird, x, DriveSpec::resonant(kThird));
  const double ge = transversal_coupling(q, x, bare_coupling(kGeometry, q, kThird));
  const double sz = sigma_z_saturation(ge, q.gamma_1, q.gamma_phi, 0.0,
                                       field.amplitude * field.amplitude);
  const double g_qq = 1 * units::MHz;
  double worst = 0.0;
  for (int k = -4000; k <= 4000; ++k) {
    const double d = k * 0.5 * units::MHz;
    const auto lead = sigma_minus_with_qq(ge, 0.0, q.gamma_phi, d, field.field);
    const auto full = sigma_minus_with_qq(ge, g_qq, q.gamma_phi, d, field.field);
    worst = std::max(worst, std::abs(full - lead) / std::abs(lead) / (2 * g_qq / q.gamma_phi));
  }
  return {1.0 + sz < kSaturationTol && worst <= 1.0 + 1e-12,
          fmt("1 + <sz> = %.3e; max qq correction / (2 g_qq / Gamma) = %.6f", 1.0 + sz, worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "qmeta_acceptance_determinism";
  fs::remove_all(root);
  std::vector<fs::path> dirs{root / "a", root / "b"};
  std::ostringstream log;
  for (const auto& d : dirs) {
    const std::string out = d.string();
    const char* argv[] = {"qmeta", "reproduce", "S", "--seed", "7", "--out-dir", out.c_str()};
    if (app::run(7, argv, log) != 0) return {false, "reproduce S failed: " + log.str()};
  }
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dirs[0])) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    const auto other = dirs[1] / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      return {false, entry.path().filename().string() + " differs"};
    }
  }
  return {files == 3, fmt("%.0f CSV files byte-identical across two runs", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"coupling golden numbers", coupling_golden},
      {"thermal occupancy", thermal},
      {"closed-form consistency", closed_form},
      {"dispersive-limit reduction", dispersive_limit},
      {"oracle equivalence", oracle_equivalence},
      {"round-trip fits", round_trip},
      {"Lorentzian linewidths", lorentzian},
      {"negligibility checks", negligibility},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < kBudget[i + 1];
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("[%s] criterion %zu %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL",
                i + 1, criteria[i].first.c_str(), out.detail.c_str(), secs, kBudget[i + 1],
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
