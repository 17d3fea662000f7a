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

#include "app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmeta/config.hpp"
#include "qmeta/errors.hpp"
#include "qmeta/estimation.hpp"
#include "qmeta/lindblad.hpp"
#include "qmeta/scenarios.hpp"
#include "qmeta/sweep.hpp"
#include "qmeta/trace.hpp"

namespace qmeta::app {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool degrees = false;
};

class Context {
 public:
  Context(const GlobalOptions& opts, std::ostream& log) : opts_(opts), log_(log) {}

  SweepConfig config() const {
    SweepConfig cfg = opts_.config.empty() ? default_config() : load_config(opts_.config);
    if (opts_.seed) cfg.noise.seed = *opts_.seed;
    if (!opts_.out_dir.empty()) cfg.output_dir = opts_.out_dir;
    cfg.validate();
    return cfg;
  }

  fs::path out_dir() const {
    const fs::path dir = opts_.out_dir.empty() ? fs::path(".") : fs::path(opts_.out_dir);
    fs::create_directories(dir);
    return dir;
  }

  std::uint64_t seed_or(std::uint64_t fallback) const { return opts_.seed.value_or(fallback); }
  bool degrees() const { return opts_.degrees; }
  std::ostream& log() const { return log_; }

  void write_json(const std::string& name, const Json& value) const {
    write_text(out_dir() / name, value.dump(2) + "\n");
  }

  void write_text(const fs::path& path, const std::string& text) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw Error("write to '" + path.string() + "' failed");
    log_ << "qmeta: wrote " << path.string() << "\n";
  }

  void write_trace(const PhaseTrace& trace, const fs::path& path) const {
    export_trace(trace, path, opts_.degrees);
    log_ << "qmeta: wrote " << path.string() << "\n";
  }

 private:
  const GlobalOptions& opts_;
  std::ostream& log_;
};

double hz(double angular) { return units::to_cyclic(angular); }

Json fit_json(const FitResult& fit) {
  Json params = Json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    params[fit.names[i]] = {{"value", fit.parameters(k)}, {"uncertainty", fit.uncertainties(k)}};
  }
  return {{"parameters", params},
          {"residual_norm", fit.residual_norm},
          {"gradient_norm", fit.gradient_norm},
          {"iterations", fit.iterations},
          {"converged", fit.converged}};
}

const QubitGroup& find_group(const SweepConfig& cfg, const std::string& name) {
  std::string known;
  for (const auto& g : cfg.groups) {
    if (g.qubit.label == name) return g;
    known += (known.empty() ? "" : ", ") + g.qubit.label;
  }
  throw InvalidArgument("no qubit group '" + name + "' in the config (known: " +
                        (known.empty() ? "none" : known) + ")");
}

ResonantSetup setup_for(const SweepConfig& cfg, const std::string& group, int mode_index) {
  const QubitGroup& g = find_group(cfg, group);
  const ResonatorMode& mode = cfg.mode(mode_index);
  const Ensemble single({g}, cfg.geometry);
  return ResonantSetup{g.qubit, mode, single.bare_coupling(g, mode)};
}

double parse_with_unit(const std::string& text, std::string_view dimension) {
  return parse_quantity(text, dimension);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Two-column CSV `frequency_hz,amplitude` with optional '#' comments.
void read_lineshape(const fs::path& path, std::vector<double>& omegas,
                    std::vector<double>& amplitudes) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  auto number = [&](const std::string& field) {
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
      return v;
    } catch (const std::exception&) {
      throw FormatError::in_source(path.string(),
                                   FormatError("not a number: '" + field + "'", line_no));
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "frequency_hz,amplitude") {
        throw FormatError::in_source(
            path.string(), FormatError("expected header 'frequency_hz,amplitude'", line_no));
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw FormatError::in_source(path.string(),
                                   FormatError("expected 2 comma-separated columns", line_no));
    }
    omegas.push_back(units::to_angular(number(trim(line.substr(0, comma)))));
    amplitudes.push_back(number(trim(line.substr(comma + 1))));
  }
  if (!header) throw FormatError::in_source(path.string(), FormatError("missing header row", 1));
}

// Subcommands ---------------------------------------------------------------

int cmd_sweep(const Context& ctx) {
  const SweepConfig cfg = ctx.config();
  for (const auto& w : cfg.ensemble() ? cfg.ensemble()->warnings() : std::vector<std::string>{}) {
    ctx.log() << "qmeta: warning: " << w << "\n";
  }
  const auto traces = run_sweep(cfg);
  const fs::path dir = ctx.out_dir();
  for (const auto& t : traces) ctx.write_trace(t, trace_path(dir, cfg.output_prefix, t.mode_index));
  return 0;
}

int cmd_fit_spectrum(const Context& ctx, const std::vector<std::string>& files,
                     const std::string& output) {
  const SweepConfig cfg = ctx.config();
  std::vector<CrossingPoint> points;
  Json crossings = Json::array();
  for (const auto& file : files) {
    const PhaseTrace trace = import_trace(file);
    for (const auto& p : detect_crossings(trace, cfg.mode(trace.mode_index))) {
      points.push_back(p);
      crossings.push_back({{"mode", trace.mode_index},
                           {"mode_frequency_hz", hz(p.mode_frequency)},
                           {"flux_phi0", p.flux.value()},
                           {"side", p.side}});
      ctx.log() << "qmeta: crossing mode " << trace.mode_index << " at flux "
                << format_double(p.flux.value()) << "\n";
    }
  }
  const SpectrumFit fit = fit_spectrum(points);
  ctx.log() << "qmeta: delta/2pi = " << hz(fit.delta) / 1e9 << " GHz, I = "
            << fit.persistent_current * 1e9 << " nA\n";
  ctx.write_json(output, {{"delta_hz", hz(fit.delta)},
                          {"delta_uncertainty_hz", hz(fit.fit.uncertainty("delta"))},
                          {"persistent_current_a", fit.persistent_current},
                          {"persistent_current_uncertainty_a",
                           fit.fit.uncertainty("persistent_current")},
                          {"crossings", crossings},
                          {"fit", fit_json(fit.fit)}});
  return 0;
}

int cmd_fit_mode(const Context& ctx, const std::string& file, const std::string& group,
                 int max_n, bool free_coupling, int n, const std::string& output) {
  const SweepConfig cfg = ctx.config();
  const PhaseTrace trace = import_trace(file);
  const ResonantSetup setup = setup_for(cfg, group, trace.mode_index);
  Json out;
  if (free_coupling) {
    const FitResult fit = fit_resonant_coupling(trace, setup, n);
    ctx.log() << "qmeta: g/2pi = " << hz(fit.value("g_bare")) / 1e6 << " MHz, gamma_phi/2pi = "
              << hz(fit.value("gamma_phi")) / 1e6 << " MHz at n = " << n << "\n";
    out = {{"n", n},
           {"g_bare_hz", hz(fit.value("g_bare"))},
           {"g_bare_uncertainty_hz", hz(fit.uncertainty("g_bare"))},
           {"gamma_phi_hz", hz(fit.value("gamma_phi"))},
           {"gamma_phi_uncertainty_hz", hz(fit.uncertainty("gamma_phi"))},
           {"fit", fit_json(fit)}};
  } else {
    const ResonantModeFit fit = fit_resonant_mode(trace, setup, max_n);
    ctx.log() << "qmeta: n = " << fit.n << ", gamma_phi/2pi = " << hz(fit.gamma_phi) / 1e6
              << " MHz\n";
    if (fit.ambiguous) {
      ctx.log() << "qmeta: warning: n = " << fit.runner_up_n
                << " fits within 1%; reporting the smaller count\n";
    }
    out = {{"n", fit.n},
           {"gamma_phi_hz", hz(fit.gamma_phi)},
           {"gamma_phi_uncertainty_hz", hz(fit.fit.uncertainty("gamma_phi"))},
           {"ambiguous", fit.ambiguous},
           {"runner_up_n", fit.runner_up_n},
           {"residual_by_n", fit.residual_by_n},
           {"fit", fit_json(fit.fit)}};
  }
  ctx.write_json(output, out);
  return 0;
}

int cmd_fit_two_modes(const Context& ctx, const std::string& file, const std::string& group_a,
                      const std::string& group_b, int max_n, const std::string& output) {
  const SweepConfig cfg = ctx.config();
  const PhaseTrace trace = import_trace(file);
  const TwoModeFit fit = fit_two_modes(trace, setup_for(cfg, group_a, trace.mode_index),
                                       setup_for(cfg, group_b, trace.mode_index), max_n);
  ctx.log() << "qmeta: n_" << group_a << " = " << fit.n_a << ", n_" << group_b << " = "
            << fit.n_b << "\n";
  ctx.write_json(output, {{"n_a", fit.n_a},
                          {"gamma_phi_a_hz", hz(fit.gamma_a)},
                          {"n_b", fit.n_b},
                          {"gamma_phi_b_hz", hz(fit.gamma_b)},
                          {"ambiguous", fit.ambiguous},
                          {"fit", fit_json(fit.fit)}});
  return 0;
}

int cmd_fit_dispersive(const Context& ctx, const std::string& file, const std::string& group,
                       const std::string& free, int n, int max_n, const std::string& output) {
  const SweepConfig cfg = ctx.config();
  const PhaseTrace trace = import_trace(file);
  const DispersiveSetup setup{setup_for(cfg, group, trace.mode_index), n};
  const DispersiveFit fit = fit_dispersive(
      trace, setup, free == "count" ? DispersiveFree::count : DispersiveFree::coupling, max_n);
  ctx.log() << "qmeta: n = " << fit.n << ", g/2pi = " << hz(fit.g_bare) / 1e6 << " MHz\n";
  ctx.write_json(output, {{"free", free},
                          {"n", fit.n},
                          {"g_bare_hz", hz(fit.g_bare)},
                          {"fit", fit_json(fit.fit)}});
  return 0;
}

int cmd_fit_lorentzian(const Context& ctx, const std::string& file, const std::string& output) {
  std::vector<double> omegas, amplitudes;
  read_lineshape(file, omegas, amplitudes);
  const LorentzianFit fit = fit_lorentzian(omegas, amplitudes);
  ctx.log() << "qmeta: center/2pi = " << hz(fit.center) << " Hz, kappa/2pi = " << hz(fit.width)
            << " Hz\n";
  ctx.write_json(output, {{"center_hz", hz(fit.center)},
                          {"width_hz", hz(fit.width)},
                          {"width_uncertainty_hz", hz(fit.fit.uncertainty("width"))},
                          {"height", fit.height},
                          {"baseline", fit.baseline},
                          {"fit", fit_json(fit.fit)}});
  return 0;
}

int cmd_oracle_compare(const Context& ctx, int mode_index, int fock, int points,
                       const std::string& output) {
  const SweepConfig cfg = ctx.config();
  const auto ens = cfg.ensemble();
  if (!ens) throw InvalidArgument("oracle-compare needs at least one qubit group");
  const ResonatorMode& mode = cfg.mode(mode_index == 0 ? cfg.modes.front() : mode_index);
  if (points < 2) throw InvalidArgument("--points must be >= 2");
  std::vector<FluxBias> grid;
  for (int k = 0; k < points; ++k) {
    grid.emplace_back(cfg.flux.start + (cfg.flux.stop - cfg.flux.start) * k / (points - 1));
  }
  const auto report = compare_semiclassical(*ens, mode, grid,
                                            DriveSpec::resonant(mode, cfg.drive_relative), fock);
  const double scale = ctx.degrees() ? 360.0 / units::two_pi : 1.0;
  const char* unit = ctx.degrees() ? "deg" : "rad";
  std::ostringstream csv;
  csv << "flux_phi0,oracle_phase_" << unit << ",semiclassical_phase_" << unit
      << ",oracle_amplitude,semiclassical_amplitude\n";
  for (const auto& p : report.points) {
    csv << format_double(p.flux) << ',' << format_double(p.oracle_phase * scale) << ','
        << format_double(p.semiclassical_phase * scale) << ','
        << format_double(p.oracle_amplitude) << ',' << format_double(p.semiclassical_amplitude)
        << '\n';
  }
  ctx.write_text(ctx.out_dir() / (output + ".csv"), csv.str());
  ctx.log() << "qmeta: max |dphi| = " << report.max_phase_difference << " rad (peak |phi| "
            << report.peak_phase << " rad)\n";
  ctx.write_json(output + ".json", {{"mode", mode.index},
                                    {"fock_cutoff", fock},
                                    {"max_phase_difference_rad", report.max_phase_difference},
                                    {"max_relative_amplitude_difference",
                                     report.max_relative_amplitude_difference},
                                    {"peak_phase_rad", report.peak_phase}});
  return 0;
}

int cmd_reproduce(const Context& ctx, const std::string& name, double sigma) {
  const Scenario s = parse_scenario(name);
  const ScenarioReport report = reproduce(s, ctx.seed_or(0), sigma);
  const fs::path dir = ctx.out_dir();
  for (const auto& t : report.traces) {
    ctx.write_trace(t, trace_path(dir, report.config.output_prefix, t.mode_index));
  }
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    ctx.log() << "qmeta: " << (c.pass ? "ok   " : "MISS ") << c.quantity << " = " << c.recovered
              << " " << c.unit << " (reference " << c.reference << " +- " << c.tolerance << ")\n";
    checks.push_back({{"quantity", c.quantity},
                      {"unit", c.unit},
                      {"reference", c.reference},
                      {"recovered", c.recovered},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  ctx.write_json(report.config.output_prefix + ".json",
                 {{"scenario", scenario_name(s)},
                  {"seed", report.config.noise.seed},
                  {"phase_sigma_rad", sigma},
                  {"config_hash", report.config.hash()},
                  {"passed", report.passed()},
                  {"checks", checks}});
  return report.passed() ? 0 : 2;
}

int cmd_thermal(const Context& ctx, const std::string& frequency, const std::string& temperature,
                const std::string& output) {
  const double omega = parse_with_unit(frequency, "frequency");
  const double kelvin = parse_with_unit(temperature, "temperature");
  ResonatorMode mode;
  mode.omega = omega;
  const double n = thermal_photon_number(mode, kelvin);
  ctx.log() << "qmeta: n_th = " << n << "\n";
  ctx.write_json(output,
                 {{"frequency_hz", hz(omega)}, {"temperature_k", kelvin}, {"n_th", n}});
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"Flux-qubit ensemble cavity phase-response simulation and fitting"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--config", global.config, "Sweep configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", global.seed, "Noise seed (overrides noise.seed)");
  app.add_option("--out-dir", global.out_dir, "Directory for output files");
  app.add_flag("--degrees", global.degrees, "Write phases in degrees");

  std::function<int(const Context&)> action;

  auto* sweep = app.add_subcommand("sweep", "Generate phase traces for the configured modes");
  sweep->callback([&] { action = [](const Context& c) { return cmd_sweep(c); }; });

  std::vector<std::string> spectrum_files;
  std::string spectrum_out = "fit_spectrum.json";
  auto* spectrum = app.add_subcommand("fit-spectrum", "Fit gap and persistent current to crossings");
  spectrum->add_option("traces", spectrum_files, "Trace files")->required()->check(CLI::ExistingFile);
  spectrum->add_option("--output", spectrum_out, "Result file name");
  spectrum->callback([&] {
    action = [&](const Context& c) { return cmd_fit_spectrum(c, spectrum_files, spectrum_out); };
  });

  std::string mode_file, mode_group, mode_out = "fit_mode.json";
  int mode_max_n = 40, mode_n = 1;
  bool mode_free_coupling = false;
  auto* mode = app.add_subcommand("fit-mode", "Fit qubit number and dephasing to a resonant mode");
  mode->add_option("trace", mode_file, "Trace file")->required()->check(CLI::ExistingFile);
  mode->add_option("--group", mode_group, "Qubit group name from the config")->required();
  mode->add_option("--max-n", mode_max_n, "Largest qubit number tried")->check(CLI::PositiveNumber);
  mode->add_flag("--free-coupling", mode_free_coupling, "Fit the coupling with n fixed");
  mode->add_option("--n", mode_n, "Fixed qubit number for --free-coupling")->check(CLI::PositiveNumber);
  mode->add_option("--output", mode_out, "Result file name");
  mode->callback([&] {
    action = [&](const Context& c) {
      return cmd_fit_mode(c, mode_file, mode_group, mode_max_n, mode_free_coupling, mode_n,
                          mode_out);
    };
  });

  std::string two_file, two_a, two_b, two_out = "fit_two_modes.json";
  int two_max_n = 20;
  auto* two = app.add_subcommand("fit-two-modes", "Joint fit of two groups at one harmonic");
  two->add_option("trace", two_file, "Trace file")->required()->check(CLI::ExistingFile);
  two->add_option("--group-a", two_a, "First qubit group")->required();
  two->add_option("--group-b", two_b, "Second qubit group")->required();
  two->add_option("--max-n", two_max_n, "Largest qubit number per group")->check(CLI::PositiveNumber);
  two->add_option("--output", two_out, "Result file name");
  two->callback([&] {
    action = [&](const Context& c) {
      return cmd_fit_two_modes(c, two_file, two_a, two_b, two_max_n, two_out);
    };
  });

  std::string disp_file, disp_group, disp_free = "count", disp_out = "fit_dispersive.json";
  int disp_n = 1, disp_max_n = 40;
  auto* disp = app.add_subcommand("fit-dispersive", "Fit qubit number or coupling to a dispersive trace");
  disp->add_option("trace", disp_file, "Trace file")->required()->check(CLI::ExistingFile);
  disp->add_option("--group", disp_group, "Qubit group name from the config")->required();
  disp->add_option("--free", disp_free, "Free parameter")->check(CLI::IsMember({"count", "coupling"}));
  disp->add_option("--n", disp_n, "Fixed qubit number when fitting the coupling")
      ->check(CLI::PositiveNumber);
  disp->add_option("--max-n", disp_max_n, "Largest qubit number tried")->check(CLI::PositiveNumber);
  disp->add_option("--output", disp_out, "Result file name");
  disp->callback([&] {
    action = [&](const Context& c) {
      return cmd_fit_dispersive(c, disp_file, disp_group, disp_free, disp_n, disp_max_n, disp_out);
    };
  });

  std::string lor_file, lor_out = "fit_lorentzian.json";
  auto* lor = app.add_subcommand("fit-lorentzian", "Fit a Lorentzian to a frequency_hz,amplitude CSV");
  lor->add_option("lineshape", lor_file, "Lineshape file")->required()->check(CLI::ExistingFile);
  lor->add_option("--output", lor_out, "Result file name");
  lor->callback([&] {
    action = [&](const Context& c) { return cmd_fit_lorentzian(c, lor_file, lor_out); };
  });

  int oracle_mode = 0, oracle_fock = 6, oracle_points = 41;
  std::string oracle_out = "oracle_compare";
  auto* oracle = app.add_subcommand("oracle-compare", "Compare against the master-equation oracle");
  oracle->add_option("--mode", oracle_mode, "Mode index (default: first configured mode)");
  oracle->add_option("--fock", oracle_fock, "Highest Fock level kept")->check(CLI::PositiveNumber);
  oracle->add_option("--points", oracle_points, "Flux points across the configured range");
  oracle->add_option("--output", oracle_out, "Result file stem");
  oracle->callback([&] {
    action = [&](const Context& c) {
      return cmd_oracle_compare(c, oracle_mode, oracle_fock, oracle_points, oracle_out);
    };
  });

  std::string scenario;
  double scenario_sigma = 0.5e-3;
  auto* repro = app.add_subcommand("reproduce", "Generate and refit a built-in device scenario");
  repro->add_option("scenario", scenario, "S, AB, single-qubit, dispersive-w1 or dispersive-w2")
      ->required();
  repro->add_option("--sigma", scenario_sigma, "Phase noise in rad")->check(CLI::NonNegativeNumber);
  repro->callback([&] {
    action = [&](const Context& c) { return cmd_reproduce(c, scenario, scenario_sigma); };
  });

  std::string thermal_f = "2.594GHz", thermal_t = "20mK", thermal_out = "thermal.json";
  auto* thermal = app.add_subcommand("thermal", "Thermal photon number of a mode");
  thermal->add_option("--frequency", thermal_f, "Mode frequency, e.g. 2.594GHz");
  thermal->add_option("--temperature", thermal_t, "Temperature, e.g. 20mK");
  thermal->add_option("--output", thermal_out, "Result file name");
  thermal->callback([&] {
    action = [&](const Context& c) {
      return cmd_thermal(c, thermal_f, thermal_t, thermal_out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    const int code = app.exit(e, out, log);
    log << out.str();
    return code == 0 ? 0 : 1;
  }

  try {
    return action(Context(global, log));
  } catch (const FitError& e) {
    log << "qmeta: fit failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "qmeta: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qmeta::app
