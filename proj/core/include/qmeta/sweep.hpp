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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qmeta/config.hpp"
#include "qmeta/trace.hpp"

namespace qmeta {

inline constexpr const char* kToolVersion = "0.1.0";

/// Forward model over the configured flux grid, one trace per probed mode.
/// Phase noise is N(0, sigma) drawn from a generator seeded by
/// (seed, mode, flux index), so results do not depend on evaluation order.
std::vector<PhaseTrace> run_sweep(const SweepConfig& config);

/// The noise sample added at (mode, flux index) for a given seed, in units
/// of sigma.
double phase_noise(std::uint64_t seed, int mode, std::size_t index);

/// `<dir>/<prefix>_mode<j>.csv`
std::filesystem::path trace_path(const std::filesystem::path& dir, const std::string& prefix,
                                 int mode);

}  // namespace qmeta
