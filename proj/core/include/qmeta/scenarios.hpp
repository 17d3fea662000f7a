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

// Built-in device scenarios: generate a synthetic trace with the reference
// parameters, fit it back, and compare against the reference values.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qmeta/config.hpp"
#include "qmeta/trace.hpp"

namespace qmeta {

enum class Scenario { single_mode, two_modes, single_qubit, dispersive_w1, dispersive_w2 };

/// Accepts "S", "AB", "single-qubit", "dispersive-w1", "dispersive-w2".
Scenario parse_scenario(std::string_view name);
std::string scenario_name(Scenario s);

namespace device {

/// Effective ensemble parameter sets; gamma_1 defaults to gamma_phi.
QubitParams ensemble_s();
QubitParams ensemble_a();
QubitParams ensemble_b();
/// Separately measured single qubit (3 GHz gap, 158 nA).
QubitParams single_qubit();
CouplingGeometry single_qubit_geometry();
ResonatorMode single_qubit_mode();

}  // namespace device

struct ScenarioCheck {
  std::string quantity;
  std::string unit;
  double reference = 0.0;
  double recovered = 0.0;
  double tolerance = 0.0;  // absolute, in `unit`
  bool pass = false;
};

struct ScenarioReport {
  Scenario scenario;
  SweepConfig config;
  std::vector<PhaseTrace> traces;
  std::vector<ScenarioCheck> checks;

  bool passed() const;
};

/// Sweep configuration of a scenario with the given noise.
SweepConfig scenario_config(Scenario s, std::uint64_t seed, double phase_sigma);

ScenarioReport reproduce(Scenario s, std::uint64_t seed, double phase_sigma = 0.5e-3);

}  // namespace qmeta
