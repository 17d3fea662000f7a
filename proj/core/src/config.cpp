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

#include "qmeta/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmeta/errors.hpp"
#include "qmeta/trace.hpp"

namespace qmeta {
namespace {

struct Suffix {
  std::string_view text;
  std::string_view dimension;
  double factor;
};

constexpr Suffix kSuffixes[] = {
    {"GHz", "frequency", 1e9 * units::two_pi}, {"MHz", "frequency", 1e6 * units::two_pi},
    {"kHz", "frequency", 1e3 * units::two_pi}, {"Hz", "frequency", units::two_pi},
    {"mA", "current", 1e-3},                   {"uA", "current", 1e-6},
    {"nA", "current", 1e-9},                   {"pA", "current", 1e-12},
    {"A", "current", 1.0},                     {"nH", "inductance", 1e-9},
    {"pH", "inductance", 1e-12},               {"fH", "inductance", 1e-15},
    {"H", "inductance", 1.0},                  {"mK", "temperature", 1e-3},
    {"K", "temperature", 1.0},                 {"mrad", "angle", 1e-3},
    {"rad", "angle", 1.0},
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

int parse_mode_index(std::string_view text) {
  const long long j = parse_integer(text);
  if (j < 1 || j > 1000) throw InvalidArgument("bad mode index '" + std::string(text) + "'");
  return static_cast<int>(j);
}

QubitGroup& group_named(SweepConfig& cfg, std::string_view name) {
  for (auto& g : cfg.groups) {
    if (g.qubit.label == name) return g;
  }
  QubitGroup g;
  g.qubit.label = std::string(name);
  g.qubit.gamma_1 = -1.0;  // marks "defaults to gamma_phi"
  cfg.groups.push_back(g);
  return cfg.groups.back();
}

ResonatorMode& resonator_entry(SweepConfig& cfg, int j) {
  auto [it, inserted] = cfg.resonators.try_emplace(j);
  if (inserted) it->second.index = j;
  return it->second;
}

void apply(SweepConfig& cfg, std::string_view key, std::string_view value) {
  const auto parts = split(key, '.');
  const std::string_view section = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw InvalidArgument("unknown key '" + std::string(key) + "'");
  };

  if (section == "flux") {
    need(2);
    if (parts[1] == "start") {
      cfg.flux.start = parse_quantity(value, "none");
    } else if (parts[1] == "stop") {
      cfg.flux.stop = parse_quantity(value, "none");
    } else if (parts[1] == "steps") {
      cfg.flux.steps = static_cast<int>(parse_integer(value));
    } else {
      need(0);
    }
  } else if (section == "sweep") {
    need(2);
    if (parts[1] != "modes") need(0);
    cfg.modes.clear();
    for (auto item : split(value, ',')) cfg.modes.push_back(parse_mode_index(item));
  } else if (section == "drive") {
    need(2);
    if (parts[1] != "relative") need(0);
    cfg.drive_relative = parse_quantity(value, "none");
  } else if (section == "resonator") {
    need(3);
    ResonatorMode& mode = resonator_entry(cfg, parse_mode_index(parts[1]));
    if (parts[2] == "frequency") {
      mode.omega = parse_quantity(value, "frequency");
    } else if (parts[2] == "kappa") {
      mode.kappa = parse_quantity(value, "frequency");
    } else {
      need(0);
    }
  } else if (section == "geometry") {
    need(2);
    if (parts[1] == "mutual_inductance") {
      cfg.geometry.mutual_inductance = parse_quantity(value, "inductance");
    } else if (parts[1] == "resonator_inductance") {
      cfg.geometry.resonator_inductance = parse_quantity(value, "inductance");
    } else {
      need(0);
    }
  } else if (section == "ensemble") {
    need(2);
    if (parts[1] != "g_qq") need(0);
    cfg.g_qq = parse_quantity(value, "frequency");
  } else if (section == "group") {
    if (parts.size() < 3 || parts[1].empty()) need(0);
    QubitGroup& g = group_named(cfg, parts[1]);
    const std::string_view field = parts[2];
    if (field == "coupling") {
      need(4);
      g.coupling_override[parse_mode_index(parts[3])] = parse_quantity(value, "frequency");
      return;
    }
    need(3);
    if (field == "delta") {
      g.qubit.delta = parse_quantity(value, "frequency");
    } else if (field == "current") {
      g.qubit.persistent_current = parse_quantity(value, "current");
    } else if (field == "gamma_phi") {
      g.qubit.gamma_phi = parse_quantity(value, "frequency");
    } else if (field == "gamma_1") {
      g.qubit.gamma_1 = parse_quantity(value, "frequency");
    } else if (field == "count") {
      g.count = static_cast<int>(parse_integer(value));
    } else {
      need(0);
    }
  } else if (section == "noise") {
    need(2);
    if (parts[1] == "phase_sigma") {
      cfg.noise.phase_sigma = parse_quantity(value, "angle");
    } else if (parts[1] == "seed") {
      const long long seed = parse_integer(value);
      if (seed < 0) throw InvalidArgument("noise.seed must be >= 0");
      cfg.noise.seed = static_cast<std::uint64_t>(seed);
    } else {
      need(0);
    }
  } else if (section == "output") {
    need(2);
    if (parts[1] == "dir") {
      cfg.output_dir = std::string(value);
    } else if (parts[1] == "prefix") {
      cfg.output_prefix = std::string(value);
    } else {
      need(0);
    }
  } else {
    throw InvalidArgument("unknown section '" + std::string(section) + "'");
  }
}

std::string hz(double angular) { return format_double(units::to_cyclic(angular)) + "Hz"; }

}  // namespace

std::vector<double> FluxRange::grid() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    out[static_cast<std::size_t>(k)] = start + (stop - start) * k / (steps - 1);
  }
  return out;
}

double parse_quantity(std::string_view text, std::string_view dimension) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr == text.data()) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw InvalidArgument("non-finite value");
  const std::string_view suffix = trim(std::string_view(ptr, text.data() + text.size() - ptr));
  if (suffix.empty()) return dimension == "frequency" ? units::to_angular(value) : value;
  for (const auto& s : kSuffixes) {
    if (s.text == suffix) {
      if (s.dimension != dimension) {
        throw InvalidArgument("unit '" + std::string(suffix) + "' is not a " +
                              std::string(dimension));
      }
      return value * s.factor;
    }
  }
  throw InvalidArgument("unknown unit '" + std::string(suffix) + "'");
}

std::map<int, ResonatorMode> default_resonators() {
  const double omega1 = 2.594 * units::GHz;
  const double kappas_khz[] = {55.5, 216.0, 715.0, 950.0, 1400.0};
  std::map<int, ResonatorMode> table;
  for (int j = 1; j <= 5; ++j) {
    const double omega = j == 2 ? 5.202 * units::GHz : j * omega1;
    table[j] = ResonatorMode{j, omega, kappas_khz[j - 1] * units::kHz};
  }
  return table;
}

CouplingGeometry default_geometry() { return {0.5 * units::pH, 11.0 * units::nH}; }

SweepConfig default_config() {
  SweepConfig cfg;
  cfg.resonators = default_resonators();
  cfg.geometry = default_geometry();
  return cfg;
}

void SweepConfig::validate() const {
  if (flux.steps < 2) throw InvalidArgument("flux.steps must be >= 2");
  if (!(flux.start < flux.stop)) throw InvalidArgument("flux.start must be below flux.stop");
  if (!(std::abs(flux.start) < 0.5) || !(std::abs(flux.stop) < 0.5)) {
    throw InvalidArgument("flux range must lie inside (-0.5, 0.5) Phi0");
  }
  if (modes.empty()) throw InvalidArgument("sweep.modes must list at least one mode");
  for (const int j : modes) {
    if (!resonators.contains(j)) {
      throw InvalidArgument("sweep.modes: mode " + std::to_string(j) + " has no resonator entry");
    }
  }
  for (const auto& [j, mode] : resonators) {
    try {
      mode.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("resonator." + std::to_string(j) + ": " + e.what());
    }
  }
  try {
    geometry.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("geometry: ") + e.what());
  }
  if (!(drive_relative > 0.0)) throw InvalidArgument("drive.relative must be > 0");
  if (!(noise.phase_sigma >= 0.0)) throw InvalidArgument("noise.phase_sigma must be >= 0");
  if (!(g_qq >= 0.0)) throw InvalidArgument("ensemble.g_qq must be >= 0");
  for (const auto& g : groups) {
    const std::string name = "group." + g.qubit.label;
    if (g.count < 0) throw InvalidArgument(name + ".count must be >= 0");
    try {
      g.qubit.validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(name + ": " + e.what());
    }
    if (!(g.qubit.gamma_phi > 0.0)) throw InvalidArgument(name + ".gamma_phi must be > 0");
  }
}

const ResonatorMode& SweepConfig::mode(int index) const {
  const auto it = resonators.find(index);
  if (it == resonators.end()) {
    throw InvalidArgument("no resonator entry for mode " + std::to_string(index));
  }
  return it->second;
}

std::optional<Ensemble> SweepConfig::ensemble() const {
  if (groups.empty()) return std::nullopt;
  return Ensemble(groups, geometry, g_qq);
}

std::string SweepConfig::hash() const {
  SweepConfig physics = *this;
  physics.output_dir = ".";
  physics.output_prefix = "trace";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : format_config(physics)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg = default_config();
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError("expected 'section.key = value'", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw FormatError("empty key or value", line_no);
    try {
      apply(cfg, key, value);
    } catch (const InvalidArgument& e) {
      throw FormatError(std::string(key) + ": " + e.what(), line_no);
    }
  }
  for (auto& g : cfg.groups) {
    if (g.qubit.gamma_1 < 0.0) g.qubit.gamma_1 = g.qubit.gamma_phi;
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const FormatError& e) {
    throw FormatError::in_source(path.string(), e);
  }
}

std::string format_config(const SweepConfig& c) {
  std::ostringstream out;
  out << "flux.start = " << format_double(c.flux.start) << '\n';
  out << "flux.stop = " << format_double(c.flux.stop) << '\n';
  out << "flux.steps = " << c.flux.steps << '\n';
  out << "sweep.modes = ";
  for (std::size_t i = 0; i < c.modes.size(); ++i) out << (i ? "," : "") << c.modes[i];
  out << '\n';
  out << "drive.relative = " << format_double(c.drive_relative) << '\n';
  for (const auto& [j, m] : c.resonators) {
    out << "resonator." << j << ".frequency = " << hz(m.omega) << '\n';
    out << "resonator." << j << ".kappa = " << hz(m.kappa) << '\n';
  }
  out << "geometry.mutual_inductance = " << format_double(c.geometry.mutual_inductance) << "H\n";
  out << "geometry.resonator_inductance = " << format_double(c.geometry.resonator_inductance)
      << "H\n";
  out << "ensemble.g_qq = " << hz(c.g_qq) << '\n';
  for (const auto& g : c.groups) {
    const std::string p = "group." + g.qubit.label + ".";
    out << p << "delta = " << hz(g.qubit.delta) << '\n';
    out << p << "current = " << format_double(g.qubit.persistent_current) << "A\n";
    out << p << "gamma_phi = " << hz(g.qubit.gamma_phi) << '\n';
    out << p << "gamma_1 = " << hz(g.qubit.gamma_1) << '\n';
    out << p << "count = " << g.count << '\n';
    for (const auto& [j, gb] : g.coupling_override) out << p << "coupling." << j << " = " << hz(gb) << '\n';
  }
  out << "noise.phase_sigma = " << format_double(c.noise.phase_sigma) << "rad\n";
  out << "noise.seed = " << c.noise.seed << '\n';
  out << "output.dir = " << c.output_dir << '\n';
  out << "output.prefix = " << c.output_prefix << '\n';
  return out.str();
}

}  // namespace qmeta
