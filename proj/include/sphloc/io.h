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

// Directional data files and experiment configuration files.

#ifndef SPHLOC_IO_H_
#define SPHLOC_IO_H_

#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "sphloc/mc.h"
#include "sphloc/stats.h"

namespace sphloc {

enum class DataFormat { kCartesian, kAnglesDeg };

DataFormat data_format_from_name(std::string_view name);

// Rows are comma-separated; blank lines and lines starting with '#' are
// skipped. Cartesian rows hold p coordinates whose norm must be within 1e-6
// of 1 (they are renormalized). angles_deg rows hold colatitude in [0, 180]
// and longitude in [0, 360) and require p = 3.
struct DatasetSpec {
  std::string path;
  DataFormat format = DataFormat::kCartesian;
  int p = 3;
};

inline constexpr double kInputNormTolerance = 1e-6;

// Throws ParseError ("path:row:column: ...") or NormalizationError
// ("path:row: ..."); rows are counted from 1 including skipped lines.
Sample load_sample(const DatasetSpec& spec);
Sample parse_sample(std::istream& in, const DatasetSpec& spec);

// One cartesian row per point with 17 significant digits.
void write_sample_csv(const Matrix& points, std::ostream& out);

// Flat key=value lines ('#' comments). Keys: figure (required), p, n, M,
// alpha, seed, xi, ell, r, radial, critical_draws. Lists are comma-separated
// or lo..hi ranges. Missing keys take ExperimentSpec::Defaults(figure).
// Throws ConfigError naming the offending key.
ExperimentSpec load_experiment(const std::string& path);
ExperimentSpec parse_experiment(std::istream& in);

}  // namespace sphloc

#endif  // SPHLOC_IO_H_
