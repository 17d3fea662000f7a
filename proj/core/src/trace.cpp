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

#include "qmeta/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qmeta/errors.hpp"

namespace qmeta {
namespace {

constexpr std::string_view kHeaderRad = "flux_phi0,phase_rad,amplitude";
constexpr std::string_view kHeaderDeg = "flux_phi0,phase_deg,amplitude";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("not a number: '" + std::string(field) + "'", line);
  }
  if (!std::isfinite(value)) throw FormatError("non-finite value", line);
  return value;
}

}  // namespace

void PhaseTrace::validate() const {
  if (samples.empty()) throw InvalidArgument("trace has no samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.flux) || !std::isfinite(s.phase) || !std::isfinite(s.amplitude)) {
      throw InvalidArgument("trace sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s.flux > samples[i - 1].flux)) {
      throw InvalidArgument("trace flux is not strictly increasing at sample " +
                            std::to_string(i));
    }
  }
}

std::string PhaseTrace::provenance_value(std::string_view key) const {
  for (const auto& [k, v] : provenance) {
    if (k == key) return v;
  }
  return {};
}

PhaseTrace PhaseTrace::filtered(const std::function<bool(const TraceSample&)>& keep) const {
  PhaseTrace out{mode_index, {}, provenance};
  for (const auto& s : samples) {
    if (keep(s)) out.samples.push_back(s);
  }
  return out;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_trace(const PhaseTrace& trace, bool degrees) {
  trace.validate();
  std::string out;
  out += "# mode = " + std::to_string(trace.mode_index) + "\n";
  for (const auto& [key, value] : trace.provenance) {
    if (key == "mode") continue;
    out += "# " + key + " = " + value + "\n";
  }
  out += degrees ? kHeaderDeg : kHeaderRad;
  out += '\n';
  for (const auto& s : trace.samples) {
    const double phase = degrees ? s.phase * 180.0 / std::numbers::pi : s.phase;
    out += format_double(s.flux) + ',' + format_double(phase) + ',' + format_double(s.amplitude) +
           '\n';
  }
  return out;
}

PhaseTrace parse_trace(std::string_view text) {
  PhaseTrace trace;
  bool have_header = false;
  bool degrees = false;
  bool have_mode = false;
  std::size_t line_no = 0;
  std::size_t header_line = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '#') {
      if (have_header) throw FormatError("provenance comment after the header", line_no);
      const std::string_view body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw FormatError("provenance line lacks '='", line_no);
      std::string key(trim(body.substr(0, eq)));
      std::string value(trim(body.substr(eq + 1)));
      if (key == "mode") {
        trace.mode_index = static_cast<int>(parse_number(value, line_no));
        have_mode = true;
      } else {
        trace.provenance.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }

    if (!have_header) {
      if (line == kHeaderRad) {
        degrees = false;
      } else if (line == kHeaderDeg) {
        degrees = true;
      } else {
        throw FormatError("expected header '" + std::string(kHeaderRad) + "'", line_no);
      }
      have_header = true;
      header_line = line_no;
      continue;
    }

    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw FormatError("expected 3 comma-separated columns", line_no);
    }
    TraceSample s;
    s.flux = parse_number(line.substr(0, c1), line_no);
    s.phase = parse_number(line.substr(c1 + 1, c2 - c1 - 1), line_no);
    s.amplitude = parse_number(line.substr(c2 + 1), line_no);
    if (degrees) s.phase = s.phase * std::numbers::pi / 180.0;
    if (!trace.samples.empty() && !(s.flux > trace.samples.back().flux)) {
      throw FormatError("flux is not strictly increasing", line_no);
    }
    trace.samples.push_back(s);
  }
  if (!have_header) throw FormatError("missing header row", std::max<std::size_t>(line_no, 1));
  if (!have_mode) throw FormatError("missing '# mode = ...' provenance line", header_line);
  if (trace.samples.empty()) throw FormatError("trace has a header but no samples", header_line);
  return trace;
}

void export_trace(const PhaseTrace& trace, const std::filesystem::path& path, bool degrees) {
  const std::string text = format_trace(trace, degrees);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

PhaseTrace import_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_trace(buf.str());
  } catch (const FormatError& e) {
    throw FormatError::in_source(path.string(), e);
  }
}

}  // namespace qmeta
