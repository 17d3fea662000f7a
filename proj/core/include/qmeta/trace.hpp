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

// Phase-vs-flux traces and their CSV representation.
//
// File layout:
//   # key = value          provenance lines, in order
//   flux_phi0,phase_rad,amplitude
//   <17-significant-digit rows>
// A `phase_deg` header is accepted on import and converted back to radians.

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmeta {

struct TraceSample {
  double flux = 0.0;       // Phi0 units, detuning from degeneracy
  double phase = 0.0;      // rad
  double amplitude = 0.0;  // |<a>|

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct PhaseTrace {
  int mode_index = 0;
  std::vector<TraceSample> samples;
  std::vector<std::pair<std::string, std::string>> provenance;

  /// Throws InvalidArgument unless non-empty, finite, strictly increasing in
  /// flux.
  void validate() const;

  /// Provenance value for `key`, or empty.
  std::string provenance_value(std::string_view key) const;

  /// Copy keeping only the samples for which `keep` is true.
  PhaseTrace filtered(const std::function<bool(const TraceSample&)>& keep) const;

  friend bool operator==(const PhaseTrace&, const PhaseTrace&) = default;
};

std::string format_trace(const PhaseTrace& trace, bool degrees = false);

/// Throws FormatError with the offending line number.
PhaseTrace parse_trace(std::string_view text);

void export_trace(const PhaseTrace& trace, const std::filesystem::path& path,
                  bool degrees = false);
PhaseTrace import_trace(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double (at most 17
/// significant digits).
std::string format_double(double value);

}  // namespace qmeta
