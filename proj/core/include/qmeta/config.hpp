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

// Sweep configuration and its text format.
//
// Grammar, one entry per line:
//   section.key = value      # trailing comments allowed
// Quantities take SI suffixes (`5.6GHz`, `74nA`, `0.5pH`, `20mK`); bare
// numbers are in the base unit. Frequencies and rates are written as cyclic
// frequencies and stored as angular ones.
//
//   flux.start / flux.stop / flux.steps
//   sweep.modes = 3,4,5
//   drive.relative = 0.1                 f / kappa of each probed mode
//   resonator.<j>.frequency, resonator.<j>.kappa
//   geometry.mutual_inductance, geometry.resonator_inductance
//   ensemble.g_qq
//   group.<name>.delta / current / gamma_phi / gamma_1 / count
//   group.<name>.coupling.<j>            bare coupling override for mode j
//   noise.phase_sigma (rad), noise.seed
//   output.dir, output.prefix

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmeta/model.hpp"
#include "qmeta/semiclassical.hpp"

namespace qmeta {

struct FluxRange {
  double start = -0.02;
  double stop = 0.02;
  int steps = 2001;

  std::vector<double> grid() const;
};

struct NoiseSpec {
  double phase_sigma = 0.0;  // rad
  std::uint64_t seed = 0;
};

struct SweepConfig {
  FluxRange flux;
  std::vector<int> modes{3};
  std::map<int, ResonatorMode> resonators;
  CouplingGeometry geometry;
  std::vector<QubitGroup> groups;
  double g_qq = 0.0;
  double drive_relative = 0.1;
  NoiseSpec noise;
  std::string output_dir = ".";
  std::string output_prefix = "trace";

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  const ResonatorMode& mode(int index) const;

  /// Ensemble of all groups, or nullopt if there are none.
  std::optional<Ensemble> ensemble() const;

  /// Stable FNV-1a hash of the canonical text form, as 16 hex digits. Output
  /// paths are excluded.
  std::string hash() const;
};

/// Harmonics 1-5 of the reference resonator: 2.594 GHz fundamental, measured
/// 5.202 GHz second harmonic, j * omega_1 above; linewidths 55.5, 216, 715,
/// 950 and 1400 kHz.
std::map<int, ResonatorMode> default_resonators();

/// M_qr = 0.5 pH, L_r = 11 nH.
CouplingGeometry default_geometry();

SweepConfig default_config();

/// Parses on top of default_config(). Throws FormatError with line numbers,
/// InvalidArgument from validation.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

/// Canonical text; parse_config(format_config(c)) reproduces c up to the
/// cyclic/angular conversion.
std::string format_config(const SweepConfig& config);

/// Parses a number with an optional SI suffix of the given dimension,
/// returning the internal value (angular for frequencies). Dimensions:
/// "frequency", "current", "inductance", "temperature", "angle", "none".
double parse_quantity(std::string_view text, std::string_view dimension);

}  // namespace qmeta
