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

#include "qmeta/sweep.hpp"

#include <future>
#include <random>

#include "qmeta/errors.hpp"
#include "qmeta/semiclassical.hpp"

namespace qmeta {

double phase_noise(std::uint64_t seed, int mode, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(mode), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

namespace {

PhaseTrace sweep_mode(const SweepConfig& cfg, const std::optional<Ensemble>& ens, int j,
                      const std::string& hash) {
  const ResonatorMode& mode = cfg.mode(j);
  const DriveSpec drive = DriveSpec::resonant(mode, cfg.drive_relative);
  PhaseTrace trace;
  trace.mode_index = j;
  trace.provenance = {{"config_hash", hash},
                      {"seed", std::to_string(cfg.noise.seed)},
                      {"phase_sigma_rad", format_double(cfg.noise.phase_sigma)},
                      {"tool_version", kToolVersion}};
  const auto grid = cfg.flux.grid();
  trace.samples.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    TraceSample s;
    s.flux = grid[k];
    if (ens) {
      const CavityResponse r = steady_state_field(*ens, mode, FluxBias(grid[k]), drive);
      s.phase = r.phase_shift;
      s.amplitude = r.amplitude;
    } else {
      s.amplitude = drive.strength / mode.kappa;
    }
    if (cfg.noise.phase_sigma > 0.0) {
      s.phase += cfg.noise.phase_sigma * phase_noise(cfg.noise.seed, j, k);
    }
    trace.samples.push_back(s);
  }
  return trace;
}

}  // namespace

std::vector<PhaseTrace> run_sweep(const SweepConfig& config) {
  config.validate();
  const auto ens = config.ensemble();
  const std::string hash = config.hash();
  std::vector<std::future<PhaseTrace>> jobs;
  for (const int j : config.modes) {
    jobs.push_back(std::async(std::launch::async,
                              [&, j] { return sweep_mode(config, ens, j, hash); }));
  }
  std::vector<PhaseTrace> out;
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

std::filesystem::path trace_path(const std::filesystem::path& dir, const std::string& prefix,
                                 int mode) {
  return dir / (prefix + "_mode" + std::to_string(mode) + ".csv");
}

}  // namespace qmeta
