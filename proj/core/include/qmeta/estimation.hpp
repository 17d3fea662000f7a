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

// Inverse problems on phase-vs-flux traces: resonator linewidths, the qubit
// spectrum from resonance crossings, ensemble size and dephasing from
// resonant features, and dispersive-shift fits.
//
// All fits use phase only, unweighted, in radians.

#include <span>
#include <vector>

#include "qmeta/least_squares.hpp"
#include "qmeta/model.hpp"
#include "qmeta/trace.hpp"

namespace qmeta {

struct LorentzianFit {
  double center = 0.0;    // rad/s
  double width = 0.0;     // FWHM, rad/s
  double height = 0.0;
  double baseline = 0.0;
  FitResult fit;
};

/// Fits h / (1 + (2 (w - w0) / kappa)^2) + b. Needs >= 8 samples spanning at
/// least three widths. Throws NoPeak for monotone data.
LorentzianFit fit_lorentzian(std::span<const double> omegas, std::span<const double> amplitudes);

struct CrossingPoint {
  FluxBias flux;
  double mode_frequency = 0.0;  // rad/s
  int side = 1;                 // sign of the flux branch
};

/// Locates the resonance on each flux side as the zero of the phase between
/// the positive and negative lobes of the strongest antisymmetric feature.
/// Throws FeatureNotFound if either side lacks a feature above the noise.
std::vector<CrossingPoint> detect_crossings(const PhaseTrace& trace, const ResonatorMode& mode);

struct SpectrumFit {
  double delta = 0.0;               // rad/s
  double persistent_current = 0.0;  // A
  FitResult fit;
};

/// Least-squares hyperbola sqrt(delta^2 + eps(flux, I)^2) through the
/// crossings. Throws UnderDetermined unless two distinct mode frequencies are
/// present.
SpectrumFit fit_spectrum(std::span<const CrossingPoint> points);

/// Fixed quantities for fitting one group's resonant feature. Only `delta`
/// and `persistent_current` of `qubit` are used.
struct ResonantSetup {
  QubitParams qubit;
  ResonatorMode mode;
  double g_bare = 0.0;  // rad/s
};

struct ResonantModeFit {
  int n = 0;
  double gamma_phi = 0.0;
  FitResult fit;               // the continuous gamma_phi fit at `n`
  std::vector<double> residual_by_n;  // index n - 1
  bool ambiguous = false;      // runner-up within 1% of the best residual
  int runner_up_n = 0;
};

/// Outer grid over integer n in [1, max_n], inner least-squares fit of
/// gamma_phi. Throws FeatureNotFound if the trace shows no crossing.
ResonantModeFit fit_resonant_mode(const PhaseTrace& trace, const ResonantSetup& setup,
                                  int max_n = 40);

/// gamma_phi at fixed n.
FitResult fit_dephasing(const PhaseTrace& trace, const ResonantSetup& setup, int n);

/// Best integer n in [1, max_n] at fixed gamma_phi.
int fit_qubit_number(const PhaseTrace& trace, const ResonantSetup& setup, double gamma_phi,
                     int max_n = 40);

/// Frees the bare coupling instead of n: fits (g_bare, gamma_phi) at fixed n.
FitResult fit_resonant_coupling(const PhaseTrace& trace, const ResonantSetup& setup, int n = 1);

struct TwoModeFit {
  int n_a = 0;
  int n_b = 0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  FitResult fit;
  bool ambiguous = false;
};

/// Joint fit of two groups probed at the same mode with the summed
/// susceptibility model; integer grid over (n_a, n_b) in [0, max_n]^2.
TwoModeFit fit_two_modes(const PhaseTrace& trace, const ResonantSetup& a,
                         const ResonantSetup& b, int max_n = 20);

enum class DispersiveFree { count, coupling };

struct DispersiveSetup {
  ResonantSetup group;
  int n = 1;  // fixed count when fitting the coupling
};

struct DispersiveFit {
  int n = 0;
  double g_bare = 0.0;
  FitResult fit;
};

/// Fits the far-detuned closed form with either n (integer grid) or the bare
/// coupling free. Throws ResonantContamination if the trace contains a
/// resonance crossing.
DispersiveFit fit_dispersive(const PhaseTrace& trace, const DispersiveSetup& setup,
                             DispersiveFree free, int max_n = 40);

}  // namespace qmeta
