// Copyright 2026 The sphloc Authors
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

#include "sphloc/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "sphloc/errors.h"

namespace sphloc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

bool parse_double(std::string_view text, double& value) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(value);
}

template <typename Int>
bool parse_int(std::string_view text, Int& value) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string where(const DatasetSpec& spec, int row) {
  return (spec.path.empty() ? std::string("<input>") : spec.path) + ":" + std::to_string(row);
}

double config_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  if (!parse_double(text, value)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int config_int(std::string_view key, std::string_view text) {
  Int value = 0;
  if (!parse_int(text, value)) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<int> config_int_list(std::string_view key, std::string_view text) {
  std::vector<int> values;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const int lo = config_int<int>(key, trim(text.substr(0, dots)));
    const int hi = config_int<int>(key, trim(text.substr(dots + 2)));
    if (hi < lo) throw ConfigError(std::string(key) + ": empty range '" + std::string(text) + "'");
    for (int v = lo; v <= hi; ++v) values.push_back(v);
    return values;
  }
  for (std::string_view part : split(text, ',')) values.push_back(config_int<int>(key, part));
  return values;
}

}  // namespace

DataFormat data_format_from_name(std::string_view name) {
  if (name == "cartesian") return DataFormat::kCartesian;
  if (name == "angles_deg") return DataFormat::kAnglesDeg;
  throw DomainError("unknown data format '" + std::string(name) +
                    "' (expected cartesian or angles_deg)");
}

Sample parse_sample(std::istream& in, const DatasetSpec& spec) {
  if (spec.format == DataFormat::kAnglesDeg && spec.p != 3) {
    throw DomainError("angles_deg data requires p = 3");
  }
  if (spec.p < 2) throw UnsupportedDimension("data needs p >= 2");
  const std::size_t expected = spec.format == DataFormat::kCartesian ? spec.p : 2;
  std::vector<Vector> points;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto fields = split(content, ',');
    if (fields.size() != expected) {
      throw ParseError(where(spec, row) + ":" +
                       std::to_string(std::min(fields.size(), expected) + 1) + ": expected " +
                       std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> values(expected);
    for (std::size_t c = 0; c < expected; ++c) {
      if (!parse_double(fields[c], values[c])) {
        throw ParseError(where(spec, row) + ":" + std::to_string(c + 1) + ": '" +
                         std::string(fields[c]) + "' is not a finite number");
      }
    }
    Vector x(spec.p);
    if (spec.format == DataFormat::kCartesian) {
      for (int k = 0; k < spec.p; ++k) x[k] = values[k];
      const double norm = x.norm();
      if (std::abs(norm - 1.0) > kInputNormTolerance) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", norm);
        throw NormalizationError(where(spec, row) + ": row has norm " + buf +
                                 ", expected 1 within 1e-6");
      }
      x /= norm;
    } else {
      const double colatitude = values[0];
      const double longitude = values[1];
      if (colatitude < 0.0 || colatitude > 180.0) {
        throw ParseError(where(spec, row) + ":1: colatitude must lie in [0, 180]");
      }
      if (longitude < 0.0 || longitude >= 360.0) {
        throw ParseError(where(spec, row) + ":2: longitude must lie in [0, 360)");
      }
      const double c = colatitude * std::numbers::pi / 180.0;
      const double l = longitude * std::numbers::pi / 180.0;
      x << std::sin(c) * std::cos(l), std::sin(c) * std::sin(l), std::cos(c);
      x /= x.norm();
    }
    points.push_back(std::move(x));
  }
  if (points.empty()) throw ParseError(where(spec, row) + ": no data rows");
  Matrix m(spec.p, static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = points[j];
  return Sample(std::move(m));
}

Sample load_sample(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw ParseError(spec.path + ": cannot open file");
  return parse_sample(in, spec);
}

void write_sample_csv(const Matrix& points, std::ostream& out) {
  char buf[64];
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    for (Eigen::Index k = 0; k < points.rows(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", points(k, j));
      out << (k == 0 ? "" : ",") << buf;
    }
    out << '\n';
  }
}

ExperimentSpec parse_experiment(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(row) + ": expected key=value");
    }
    const std::string key(trim(content.substr(0, eq)));
    if (entries.count(key) != 0) throw ConfigError(key + ": given twice");
    entries[key] = std::string(trim(content.substr(eq + 1)));
  }
  const auto figure_it = entries.find("figure");
  if (figure_it == entries.end()) throw ConfigError("figure: required key is missing");
  ExperimentSpec spec = ExperimentSpec::Defaults(figure_from_name(figure_it->second));
  for (const auto& [key, value] : entries) {
    if (key == "figure") continue;
    if (key == "p") {
      spec.p = config_int<int>(key, value);
    } else if (key == "n") {
      spec.n_values = config_int_list(key, value);
    } else if (key == "M") {
      spec.replicates = config_int<int>(key, value);
    } else if (key == "alpha") {
      spec.alpha = config_double(key, value);
    } else if (key == "seed") {
      spec.seed = config_int<std::uint64_t>(key, value);
    } else if (key == "xi") {
      spec.xi = config_double(key, value);
    } else if (key == "ell") {
      spec.ell_values = config_int_list(key, value);
    } else if (key == "r") {
      spec.r_values = config_int_list(key, value);
    } else if (key == "radial") {
      spec.radial = value;
    } else if (key == "critical_draws") {
      spec.critical_draws = config_int<int>(key, value);
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }
  spec.Validate();
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_experiment(in);
}

}  // namespace sphloc
