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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"
#include "qmeta/trace.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string log;
};

Run qmeta_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qmeta");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log;
  const int code = qmeta::app::run(static_cast<int>(argv.size()), argv.data(), log);
  return {code, log.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qmeta_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

const char* kEnsembleS = R"(flux.start = -0.03
flux.stop = 0.03
flux.steps = 3001
sweep.modes = 3, 4, 5
group.S.delta = 5.6GHz
group.S.current = 74nA
group.S.gamma_phi = 53MHz
group.S.count = 8
noise.phase_sigma = 0.5mrad
)";

}  // namespace

TEST(Cli, SweepThenFits) {
  const auto dir = scratch("fits");
  write(dir / "s.cfg", kEnsembleS);
  const std::string cfg = (dir / "s.cfg").string();
  const std::string out = dir.string();
  ASSERT_EQ(qmeta_cli({"--config", cfg, "--seed", "3", "--out-dir", out, "sweep"}).code, 0);
  for (int j : {3, 4, 5}) EXPECT_TRUE(fs::exists(dir / ("trace_mode" + std::to_string(j) + ".csv")));

  const auto m3 = (dir / "trace_mode3.csv").string();
  ASSERT_EQ(qmeta_cli({"--config", cfg, "--out-dir", out, "fit-spectrum", m3,
                       (dir / "trace_mode4.csv").string(), (dir / "trace_mode5.csv").string()})
                .code,
            0);
  const auto spectrum = nlohmann::json::parse(slurp(dir / "fit_spectrum.json"));
  EXPECT_NEAR(spectrum["delta_hz"].get<double>(), 5.6e9, 0.056e9);
  EXPECT_NEAR(spectrum["persistent_current_a"].get<double>(), 74e-9, 1e-9);

  ASSERT_EQ(qmeta_cli({"--config", cfg, "--out-dir", out, "fit-mode", m3, "--group", "S"}).code, 0);
  const auto mode = nlohmann::json::parse(slurp(dir / "fit_mode.json"));
  EXPECT_EQ(mode["n"].get<int>(), 8);
  EXPECT_NEAR(mode["gamma_phi_hz"].get<double>(), 53e6, 0.05 * 53e6);

  EXPECT_EQ(qmeta_cli({"--config", cfg, "--out-dir", out, "fit-dispersive", m3, "--group", "S"}).code,
            2);
  EXPECT_EQ(qmeta_cli({"--config", cfg, "--out-dir", out, "fit-mode", m3, "--group", "X"}).code, 1);
}

TEST(Cli, SweepIsByteDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  write(a / "s.cfg", kEnsembleS);
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(qmeta_cli({"--config", (a / "s.cfg").string(), "--seed", "11", "--out-dir",
                         dir.string(), "sweep"})
                  .code,
              0);
  }
  for (int j : {3, 4, 5}) {
    const auto name = "trace_mode" + std::to_string(j) + ".csv";
    EXPECT_EQ(slurp(a / name), slurp(b / name));
  }
}

TEST(Cli, FitLorentzian) {
  const auto dir = scratch("lorentzian");
  std::ostringstream csv;
  csv << "# mode 1\nfrequency_hz,amplitude\n";
  for (int k = 0; k <= 200; ++k) {
    const double f = 2.594e9 + (k - 100) * 55.5e3 / 20.0;
    const double u = 2.0 * (f - 2.594e9) / 55.5e3;
    csv << qmeta::format_double(f) << ',' << qmeta::format_double(1.0 / (1.0 + u * u)) << '\n';
  }
  write(dir / "line.csv", csv.str());
  ASSERT_EQ(qmeta_cli({"--out-dir", dir.string(), "fit-lorentzian", (dir / "line.csv").string()}).code,
            0);
  const auto fit = nlohmann::json::parse(slurp(dir / "fit_lorentzian.json"));
  EXPECT_NEAR(fit["width_hz"].get<double>(), 55.5e3, 55.5e3 * 1e-6);

  write(dir / "bad.csv", "frequency_hz,amplitude\n1,2\nx,3\n");
  const auto bad = qmeta_cli({"--out-dir", dir.string(), "fit-lorentzian", (dir / "bad.csv").string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.log.find("line 3"), std::string::npos);
}

TEST(Cli, ThermalAndErrors) {
  const auto dir = scratch("thermal");
  ASSERT_EQ(qmeta_cli({"--out-dir", dir.string(), "thermal"}).code, 0);
  const auto th = nlohmann::json::parse(slurp(dir / "thermal.json"));
  EXPECT_NEAR(th["n_th"].get<double>(), 0.002, 0.0004);
  EXPECT_EQ(qmeta_cli({"thermal", "--temperature", "20nA"}).code, 1);
  EXPECT_EQ(qmeta_cli({}).code, 1);
  EXPECT_EQ(qmeta_cli({"--help"}).code, 0);
  EXPECT_EQ(qmeta_cli({"reproduce", "XYZ"}).code, 1);

  write(dir / "bad.cfg", "flux.steps = 10\nbogus = 1\n");
  const auto bad = qmeta_cli({"--config", (dir / "bad.cfg").string(), "sweep"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.log.find("line 2"), std::string::npos);
}

TEST(Cli, OracleCompare) {
  const auto dir = scratch("oracle");
  write(dir / "q.cfg", R"(flux.start = -0.0085
flux.stop = -0.0080
sweep.modes = 3
resonator.3.frequency = 7.77GHz
resonator.3.kappa = 0.46MHz
geometry.mutual_inductance = 0.91pH
drive.relative = 0.05
group.Q.delta = 3GHz
group.Q.current = 158nA
group.Q.gamma_phi = 141MHz
group.Q.count = 1
)");
  ASSERT_EQ(qmeta_cli({"--config", (dir / "q.cfg").string(), "--out-dir", dir.string(),
                       "oracle-compare", "--points", "11"})
                .code,
            0);
  const auto report = nlohmann::json::parse(slurp(dir / "oracle_compare.json"));
  EXPECT_LT(report["max_phase_difference_rad"].get<double>(), 0.005);
  EXPECT_GT(report["peak_phase_rad"].get<double>(), 0.0);
  EXPECT_NE(slurp(dir / "oracle_compare.csv").find("flux_phi0,oracle_phase_rad"), std::string::npos);
}

TEST(Cli, ReproduceWritesTracesAndReport) {
  const auto dir = scratch("reproduce");
  ASSERT_EQ(qmeta_cli({"--seed", "7", "--out-dir", dir.string(), "reproduce", "dispersive-w2"}).code,
            0);
  EXPECT_TRUE(fs::exists(dir / "reproduce_dispersive-w2_mode2.csv"));
  const auto report = nlohmann::json::parse(slurp(dir / "reproduce_dispersive-w2.json"));
  EXPECT_TRUE(report["passed"].get<bool>());
  EXPECT_EQ(report["seed"].get<int>(), 7);
}
