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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qmeta/errors.hpp"

using namespace qmeta;

namespace {

QubitParams ensemble_s() {
  QubitParams q;
  q.delta = 5.6 * units::GHz;
  q.persistent_current = 74.0 * units::nA;
  q.gamma_phi = 53.0 * units::MHz;
  q.gamma_1 = q.gamma_phi;
  q.label = "S";
  return q;
}

const CouplingGeometry kGeometry{0.5 * units::pH, 11.0 * units::nH};
const ResonatorMode kThird{3, 3 * 2.594 * units::GHz, 715 * units::kHz};

Ensemble group_of(const QubitParams& q, int n, std::map<int, double> overrides = {}) {
  QubitGroup g;
  g.qubit = q;
  g.count = n;
  g.coupling_override = std::move(overrides);
  return Ensemble({g}, kGeometry);
}

// Flux at which E - omega equals `detuning` on the positive branch.
FluxBias flux_for_detuning(const QubitParams& q, const ResonatorMode& mode, double detuning) {
  ResonatorMode shifted = mode;
  shifted.omega = mode.omega + detuning;
  return resonance_flux(q, shifted);
}

}  // namespace

TEST(QubitSusceptibility, Examples) {
  const auto q = ensemble_s();
  const double g = 0.863 * units::MHz;
  const Complex chi = qubit_susceptibility(q, g, 0.0);
  EXPECT_EQ(chi.imag(), 0.0);
  EXPECT_DOUBLE_EQ(chi.real(), g * g / q.gamma_phi);
  // 0.863^2 / 53 MHz = 14.0522 kHz.
  EXPECT_NEAR(chi.real() / units::kHz, 14.0522452830, 1e-8);
  EXPECT_LT(std::abs(qubit_susceptibility(q, g, 1e15)), 1e-6 * std::abs(chi));
  EXPECT_LT(std::abs(qubit_susceptibility(q, g, -1e15)), 1e-6 * std::abs(chi));
  for (double d : {-1e9, -1e7, 1e6, 3e8}) EXPECT_GT(qubit_susceptibility(q, g, d).real(), 0.0);
}

TEST(SteadyStateField, BareResonator) {
  const auto ens = group_of(ensemble_s(), 8, {{3, 0.0}});
  const auto drive = DriveSpec::resonant(kThird);
  const auto r = steady_state_field(ens, kThird, FluxBias(0.0117), drive);
  EXPECT_EQ(r.phase_shift, 0.0);
  EXPECT_NEAR(r.amplitude, drive.strength / kThird.kappa, 1e-15);
  EXPECT_NEAR(r.amplitude, 0.1, 1e-15);
  EXPECT_TRUE(r.weak_drive);
}

TEST(SteadyStateField, ResonantEnsembleS) {
  const auto q = ensemble_s();
  const auto ens = group_of(q, 8);
  const auto drive = DriveSpec::resonant(kThird);
  const auto r = steady_state_field(ens, kThird, resonance_flux(q, kThird), drive);
  EXPECT_NEAR(r.phase_shift, 0.0, 1e-9);
  EXPECT_LT(r.amplitude, drive.strength / kThird.kappa);
}

TEST(SteadyStateField, ExtremalShift) {
  const auto q = ensemble_s();
  const double delta = 60.8 * units::MHz;
  const FluxBias flux = flux_for_detuning(q, kThird, delta);
  // Choose the bare coupling so that g_eps is exactly 0.863 MHz here.
  const double g_bare = 0.863 * units::MHz * transition_frequency(q, flux) / q.delta;
  const auto ens = group_of(q, 8, {{3, g_bare}});
  const auto drive = DriveSpec::resonant(kThird);
  const auto r = steady_state_field(ens, kThird, flux, drive);
  // mpmath: atan of the closed form at 60.8 MHz; the extremum is at 60.764 MHz
  // with phi = -0.13628751.
  EXPECT_NEAR(r.phase_shift, -0.1362874843801, 1e-9);
  EXPECT_NEAR(r.phase_shift, -0.136, 1e-3);

  // Time integration to stationarity agrees with the closed form.
  const auto traj = integrate_field(ens, kThird, flux, drive, 60.0 / kThird.kappa,
                                    0.01 / kThird.kappa);
  const Complex bare{0.0, drive.strength / kThird.kappa};
  EXPECT_NEAR(std::arg(bare / traj.samples.back()), r.phase_shift, 1e-9);
}

TEST(SteadyStateField, RejectsBadDrive) {
  const auto ens = group_of(ensemble_s(), 1);
  EXPECT_THROW(steady_state_field(ens, kThird, FluxBias(0.0), DriveSpec{0.0, kThird.omega}),
               InvalidArgument);
}

TEST(SteadyStateField, WeakDriveFlag) {
  const auto ens = group_of(ensemble_s(), 1, {{3, 0.0}});
  const auto strong = DriveSpec::resonant(kThird, 1.0);
  EXPECT_FALSE(steady_state_field(ens, kThird, FluxBias(0.0), strong).weak_drive);
}

TEST(PhaseShiftResonant, Properties) {
  const double g = 0.863 * units::MHz;
  const double gp = 53 * units::MHz;
  const double k = 715 * units::kHz;
  EXPECT_EQ(phase_shift_resonant(8, g, gp, k, 0.0), 0.0);
  for (double d : {-1e9, -1e8, 1e7, 5e8}) {
    EXPECT_EQ(phase_shift_resonant(0, g, gp, k, d), 0.0);
    EXPECT_DOUBLE_EQ(phase_shift_resonant(8, g, gp, k, d), -phase_shift_resonant(8, g, gp, k, -d));
  }
  EXPECT_LT(std::abs(phase_shift_resonant(8, g, gp, k, 1e18)), 1e-9);
  const double wing = 500 * units::MHz;
  double previous = 0.0;
  for (int n = 1; n <= 40; ++n) {
    const double mag = std::abs(phase_shift_resonant(n, g, gp, k, wing));
    EXPECT_GT(mag, previous);
    previous = mag;
  }
}

TEST(PhaseShiftResonant, DispersiveLimitAt500MHz) {
  const double g = 0.863 * units::MHz;
  const double d = 500 * units::MHz;
  const double full = phase_shift_resonant(8, g, 53 * units::MHz, 715 * units::kHz, d);
  const double disp = phase_shift_dispersive(8, g, 715 * units::kHz, d);
  // mpmath: -0.0328353856 vs -0.0333199826, 1.45% apart.
  EXPECT_NEAR(full, -0.0328353855769, 1e-11);
  EXPECT_NEAR(disp, -0.0333199825519, 1e-11);
  EXPECT_LT(std::abs(full / disp - 1.0), 0.02);
}

TEST(PhaseShiftDispersive, Properties) {
  const double g = 0.7 * units::MHz;
  const double k = 55.5 * units::kHz;
  const double d = 3 * units::GHz;
  EXPECT_THROW(phase_shift_dispersive(1, g, k, 0.0), ZeroDetuning);
  EXPECT_NEAR(std::tan(phase_shift_dispersive(2, g, k, d)),
              2.0 * std::tan(phase_shift_dispersive(1, g, k, d)), 1e-15);
  EXPECT_LT(std::abs(phase_shift_dispersive(10, g, k, 1e20)), 1e-9);
}

TEST(PhaseShiftDispersive, AgreesWithResonantFarDetuned) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(u(rng) * 40);
    const double g = (0.1 + 2.0 * u(rng)) * units::MHz;
    const double gp = (10 + 200 * u(rng)) * units::MHz;
    const double k = (0.05 + 1.5 * u(rng)) * units::MHz;
    const double bound = 10.0 * std::max(gp, std::sqrt(2.0 * n) * g * std::sqrt(gp / k));
    const double d = (u(rng) < 0.5 ? -1 : 1) * bound * (1.0 + 10.0 * u(rng));
    const double full = phase_shift_resonant(n, g, gp, k, d);
    const double disp = phase_shift_dispersive(n, g, k, d);
    EXPECT_LT(std::abs(full - disp), 0.02 * std::abs(disp)) << "trial " << trial;
  }
}

TEST(SigmaZSaturation, Examples) {
  EXPECT_EQ(sigma_z_saturation(1e6, 1e6, 1e6, 0.0, 0.0), -1.0);
  EXPECT_NEAR(sigma_z_saturation(1e6, 1e6, 1e6, 1e20, 1.0), -1.0, 1e-20);
  EXPECT_DOUBLE_EQ(sigma_z_saturation(1e6, 1e6, 1e6, 0.0, 1.0), -0.2);
  for (double p : {1e-6, 1e-3, 0.5, 10.0}) {
    const double s = sigma_z_saturation(2e6, 1e8, 3e8, 1e7, p);
    EXPECT_GE(s, -1.0);
    EXPECT_LT(s, 0.0);
  }
}

TEST(SigmaMinusWithQq, Examples) {
  const double g = 1 * units::MHz;
  const double gp = 53 * units::MHz;
  const Complex a{0.01, 0.1};
  const Complex leading = -Complex(0, 1) * g * a / Complex(gp, 0.0);
  EXPECT_EQ(sigma_minus_with_qq(g, 0.0, gp, 0.0, a), leading);

  const Complex with = sigma_minus_with_qq(g, 1 * units::MHz, gp, 0.0, a);
  // 2 g_qq / gamma_phi = 2 / 53.
  EXPECT_NEAR(std::abs(with - leading) / std::abs(leading), 0.0377358490566, 1e-12);

  // Correction falls as 1/delta^2, leading term as 1/delta.
  auto ratio = [&](double d) {
    const Complex lead = sigma_minus_with_qq(g, 0.0, gp, d, a);
    return std::abs(sigma_minus_with_qq(g, 1 * units::MHz, gp, d, a) - lead) / std::abs(lead);
  };
  EXPECT_NEAR(ratio(1e11) / ratio(1e12), 10.0, 1e-3);
}

TEST(SigmaMinusWithQq, RelativeCorrectionBounded) {
  const double gp = 53 * units::MHz;
  const double gqq = 2 * units::MHz;
  for (int k = -2000; k <= 2000; ++k) {
    const double d = k * 0.5 * units::MHz;
    const Complex lead = sigma_minus_with_qq(1e6, 0.0, gp, d, 1.0);
    const Complex full = sigma_minus_with_qq(1e6, gqq, gp, d, 1.0);
    EXPECT_LE(std::abs(full - lead) / std::abs(lead), 2.0 * gqq / gp * (1 + 1e-12));
  }
}

TEST(IntegrateField, BareAnalytic) {
  const auto ens = group_of(ensemble_s(), 1, {{3, 0.0}});
  const auto drive = DriveSpec::resonant(kThird);
  const double kappa = kThird.kappa;
  const auto traj = integrate_field(ens, kThird, FluxBias(0.0), drive, 10.0 / kappa, 0.01 / kappa);
  ASSERT_EQ(traj.samples.size(), 1001u);
  const Complex exact = Complex(0, drive.strength / kappa) * (1.0 - std::exp(-5.0));
  EXPECT_LT(std::abs(traj.samples.back() - exact), 1e-6 * std::abs(exact));
}

TEST(IntegrateField, ConvergesToSteadyState) {
  const auto q = ensemble_s();
  const auto ens = group_of(q, 8);
  const auto drive = DriveSpec::resonant(kThird);
  for (double d : {0.0, 30 * units::MHz, -60.8 * units::MHz}) {
    const FluxBias flux = flux_for_detuning(q, kThird, d);
    const auto steady = steady_state_field(ens, kThird, flux, drive);
    const auto traj = integrate_field(ens, kThird, flux, drive, 50.0 / kThird.kappa,
                                      0.01 / kThird.kappa);
    EXPECT_LT(std::abs(traj.samples.back() - steady.field), 1e-8 * steady.amplitude);
  }
}

TEST(IntegrateField, ZeroDriveAndStepBound) {
  const auto ens = group_of(ensemble_s(), 8);
  const auto traj = integrate_field(ens, kThird, FluxBias(0.0117), DriveSpec{0.0, kThird.omega},
                                    5.0 / kThird.kappa, 0.01 / kThird.kappa);
  for (const auto& a : traj.samples) EXPECT_EQ(a, Complex(0, 0));
  EXPECT_THROW(integrate_field(ens, kThird, FluxBias(0.0117), DriveSpec::resonant(kThird),
                               1.0 / kThird.kappa, 0.2 / kThird.kappa),
               StepTooLarge);
}

TEST(SemiclassicalInvariants, ClosedFormAcrossBothCrossings) {
  const auto q = ensemble_s();
  const auto ens = group_of(q, 8);
  const auto drive = DriveSpec::resonant(kThird);
  const double g_bare = bare_coupling(kGeometry, q, kThird);
  for (int k = 0; k <= 2000; ++k) {
    const FluxBias flux(-0.02 + 0.04 * k / 2000.0);
    const double phase = steady_state_field(ens, kThird, flux, drive).phase_shift;
    const double closed = phase_shift_resonant(8, transversal_coupling(q, flux, g_bare), q.gamma_phi,
                                               kThird.kappa,
                                               transition_frequency(q, flux) - kThird.omega);
    EXPECT_NEAR(phase, closed, 1e-12);
  }
}

TEST(SemiclassicalInvariants, HeterogeneousAdditivity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<QubitGroup> groups;
  for (int i = 0; i < 12; ++i) {
    QubitGroup g;
    g.qubit.label = "q" + std::to_string(i);
    g.qubit.delta = (4.5 + 2.0 * u(rng)) * units::GHz;
    g.qubit.persistent_current = (60 + 30 * u(rng)) * units::nA;
    g.qubit.gamma_phi = (30 + 60 * u(rng)) * units::MHz;
    g.qubit.gamma_1 = g.qubit.gamma_phi;
    groups.push_back(g);
  }
  const Ensemble ens(groups, kGeometry);
  EXPECT_EQ(ens.size(), 12);
  for (int k = 0; k <= 200; ++k) {
    const FluxBias flux(-0.02 + 0.04 * k / 200.0);
    Complex sum{0.0, 0.0};
    for (const auto& g : groups) {
      const double gb = bare_coupling(kGeometry, g.qubit, kThird);
      sum += qubit_susceptibility(g.qubit, transversal_coupling(g.qubit, flux, gb),
                                  transition_frequency(g.qubit, flux) - kThird.omega);
    }
    const Complex damping = effective_damping(ens, kThird, flux);
    EXPECT_NEAR(std::abs(damping - 0.5 * kThird.kappa - sum), 0.0, 1e-12 * std::abs(damping));
    EXPECT_GE(damping.real(), 0.5 * kThird.kappa);
  }
}

TEST(SemiclassicalInvariants, SaturationVanishesWithDrive) {
  const double g = 0.863 * units::MHz;
  const double gp = 53 * units::MHz;
  double previous = 0.0;
  for (double rel : {1.0, 0.1, 0.01, 0.001}) {
    const double photons = rel * rel;
    const double dev = 1.0 + sigma_z_saturation(g, gp, gp, 0.0, photons);
    if (previous > 0.0) {
      EXPECT_LT(dev, previous);
    }
    previous = dev;
  }
  EXPECT_LT(previous, 1e-8);
}

TEST(Ensemble, ValidationAndWarnings) {
  const auto q = ensemble_s();
  EXPECT_THROW(Ensemble({}, kGeometry), InvalidArgument);
  QubitGroup g;
  g.qubit = q;
  g.count = -1;
  EXPECT_THROW(Ensemble({g}, kGeometry), InvalidArgument);
  g.count = 2;
  EXPECT_THROW(Ensemble({g}, kGeometry, -1.0), InvalidArgument);
  EXPECT_TRUE(Ensemble({g}, kGeometry, 0.01 * q.gamma_phi).warnings().empty());
  EXPECT_EQ(Ensemble({g}, kGeometry, 0.2 * q.gamma_phi).warnings().size(), 1u);
}
