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

// Confidence zones for the location by inverting the Watson or Wald test on
// a spherical grid, with connected components under k-nearest-neighbour
// adjacency.

#ifndef SPHLOC_ZONES_H_
#define SPHLOC_ZONES_H_

#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

#include "sphloc/geom.h"
#include "sphloc/mc_kernels.h"
#include "sphloc/stats.h"

namespace sphloc {

enum class ZoneTest { kWatson, kWald };

std::string_view zone_test_name(ZoneTest test);
// Throws DomainError for names other than "watson" and "wald".
ZoneTest zone_test_from_name(std::string_view name);

inline constexpr int kDefaultZoneResolution = 20000;
// Below this many points the CLI warns that the grid is coarse.
inline constexpr int kCoarseZoneResolution = 1000;

struct ConfidenceZone {
  int p = 3;
  ZoneTest test = ZoneTest::kWatson;
  double level = 0.95;
  double critical_value = 0.0;
  std::vector<UnitVector> grid;
  std::vector<double> statistic;     // NaN where the statistic is degenerate
  std::vector<std::uint8_t> member;  // statistic <= critical value, or degenerate
  std::vector<std::vector<int>> components;
  std::vector<int> component_of;  // -1 for non-members
  std::vector<std::uint8_t> preferred;
};

// Statistic of `test` at every grid point; NaN where degenerate.
std::vector<double> evaluate_grid_serial(const SampleSummary& sample, ZoneTest test,
                                         const std::vector<UnitVector>& grid);
std::vector<double> evaluate_grid_omp(const SampleSummary& sample, ZoneTest test,
                                      const std::vector<UnitVector>& grid, int workers);

// Builds the zone on sphere_grid(p, resolution), its components and the
// preferred component around the spherical mean. Throws DegenerateMean for
// the Wald zone when ||X_bar|| vanishes.
ConfidenceZone invert_test(const SampleSummary& sample, ZoneTest test, double level,
                           int resolution = kDefaultZoneResolution, const RunOptions& options = {});

// Exact membership of a single location (no grid).
bool zone_contains(const SampleSummary& sample, ZoneTest test, double level,
                   const UnitVector& theta);

// Symmetric k-nearest-neighbour adjacency lists (k = 6 for p = 3, 2 for p = 2).
std::vector<std::vector<int>> knn_graph(const std::vector<UnitVector>& grid, int k);

// Components of the member points, each sorted, ordered by smallest index.
std::vector<std::vector<int>> connected_components(const ConfidenceZone& zone);

// Union of the components with at least as many points in {theta'theta_hat > 0}
// as in {theta'theta_hat < 0}. Returns grid indices in increasing order.
std::vector<int> preferred_component(const ConfidenceZone& zone, const UnitVector& theta_hat);

double zone_area_fraction(const ConfidenceZone& zone);

// theta_x,theta_y[,theta_z],member,component_id,preferred
void write_zone_csv(const ConfidenceZone& zone, std::ostream& out);

struct CoverageResult {
  double coverage = 0.0;
  double stderr_value = 0.0;
  int replicates = 0;
};

// Frequency with which the zone contains the true location for FvML samples
// with kappa_n calibrated to e1 = n^{-rate_exponent} xi / sqrt(p).
CoverageResult zone_coverage(ZoneTest test, double rate_exponent, int p, int n, int replicates,
                             double level, double xi, std::uint64_t seed,
                             const RunOptions& options = {});

}  // namespace sphloc

#endif  // SPHLOC_ZONES_H_
