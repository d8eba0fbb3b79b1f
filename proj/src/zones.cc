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

#include "sphloc/zones.h"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>

#include "sphloc/errors.h"
#include "sphloc/model.h"
#include "sphloc/sampling.h"
#include "sphloc/specfn.h"

namespace sphloc {
namespace {

constexpr std::uint64_t kTagCoverage = 61;

double statistic_at(const SampleSummary& sample, ZoneTest test, const UnitVector& theta) {
  try {
    return test == ZoneTest::kWatson ? watson_statistic(sample, theta)
                                     : wald_statistic(sample, theta);
  } catch (const DegenerateDenominator&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

bool is_member(double statistic, double critical) {
  return std::isnan(statistic) || statistic <= critical;
}

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int Find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void Unite(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

// Integer cell of a point in a uniform hash grid over [-1, 1]^p.
std::array<int, 3> cell_of(const UnitVector& x, double size) {
  std::array<int, 3> c = {0, 0, 0};
  for (int k = 0; k < x.dim(); ++k) c[k] = static_cast<int>(std::floor((x[k] + 1.0) / size));
  return c;
}

std::int64_t cell_key(const std::array<int, 3>& c) {
  return (static_cast<std::int64_t>(c[0]) * 4096 + c[1]) * 4096 + c[2];
}

}  // namespace

std::string_view zone_test_name(ZoneTest test) {
  return test == ZoneTest::kWatson ? "watson" : "wald";
}

ZoneTest zone_test_from_name(std::string_view name) {
  if (name == "watson") return ZoneTest::kWatson;
  if (name == "wald") return ZoneTest::kWald;
  throw DomainError("unknown test '" + std::string(name) + "' (expected watson or wald)");
}

std::vector<double> evaluate_grid_serial(const SampleSummary& sample, ZoneTest test,
                                         const std::vector<UnitVector>& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = statistic_at(sample, test, grid[i]);
  return values;
}

std::vector<double> evaluate_grid_omp(const SampleSummary& sample, ZoneTest test,
                                      const std::vector<UnitVector>& grid, int workers) {
  std::vector<double> values(grid.size());
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static) num_threads(workers > 0 ? workers : omp_get_max_threads())
  for (std::int64_t i = 0; i < count; ++i) values[i] = statistic_at(sample, test, grid[i]);
  return values;
}

ConfidenceZone invert_test(const SampleSummary& sample, ZoneTest test, double level, int resolution,
                           const RunOptions& options) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  if (sample.p != 2 && sample.p != 3) {
    throw UnsupportedDimension("confidence zones need p in {2, 3}");
  }
  // The spherical mean exists or the Wald statistic is undefined everywhere.
  const bool has_mean = sample.mean.norm() > kDegeneracyThreshold;
  if (test == ZoneTest::kWald && !has_mean) spherical_mean(sample);

  ConfidenceZone zone;
  zone.p = sample.p;
  zone.test = test;
  zone.level = level;
  zone.critical_value = chi2_quantile(level, sample.p - 1);
  zone.grid = sphere_grid(sample.p, resolution);
  zone.statistic = options.serial
                       ? evaluate_grid_serial(sample, test, zone.grid)
                       : evaluate_grid_omp(sample, test, zone.grid, effective_workers(options));
  zone.member.resize(zone.grid.size());
  for (std::size_t i = 0; i < zone.grid.size(); ++i) {
    zone.member[i] = is_member(zone.statistic[i], zone.critical_value) ? 1 : 0;
  }
  zone.components = connected_components(zone);
  zone.component_of.assign(zone.grid.size(), -1);
  for (std::size_t c = 0; c < zone.components.size(); ++c) {
    for (int i : zone.components[c]) zone.component_of[i] = static_cast<int>(c);
  }
  zone.preferred.assign(zone.grid.size(), 0);
  if (has_mean) {
    for (int i : preferred_component(zone, spherical_mean(sample))) zone.preferred[i] = 1;
  }
  return zone;
}

bool zone_contains(const SampleSummary& sample, ZoneTest test, double level,
                   const UnitVector& theta) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  return is_member(statistic_at(sample, test, theta), chi2_quantile(level, sample.p - 1));
}

std::vector<std::vector<int>> knn_graph(const std::vector<UnitVector>& grid, int k) {
  const int count = static_cast<int>(grid.size());
  std::vector<std::vector<int>> adjacency(count);
  if (count < 2) return adjacency;
  const int p = grid.front().dim();
  if (p != 2 && p != 3) throw UnsupportedDimension("neighbour graphs need p in {2, 3}");
  k = std::min(k, count - 1);

  // Cells about twice the typical spacing keep each search to a few cells.
  const double spacing =
      p == 3 ? std::sqrt(4.0 * std::numbers::pi / count) : 2.0 * std::numbers::pi / count;
  const double size = std::max(2.0 * spacing, 1e-3);
  std::unordered_map<std::int64_t, std::vector<int>> cells;
  for (int i = 0; i < count; ++i) cells[cell_key(cell_of(grid[i], size))].push_back(i);
  const int max_radius = static_cast<int>(std::ceil(2.0 / size)) + 1;

  std::vector<std::pair<double, int>> candidates;
  for (int i = 0; i < count; ++i) {
    const std::array<int, 3> home = cell_of(grid[i], size);
    for (int radius = 1;; ++radius) {
      candidates.clear();
      const int rz = p == 3 ? radius : 0;
      for (int dx = -radius; dx <= radius; ++dx) {
        for (int dy = -radius; dy <= radius; ++dy) {
          for (int dz = -rz; dz <= rz; ++dz) {
            const auto it = cells.find(cell_key({home[0] + dx, home[1] + dy, home[2] + dz}));
            if (it == cells.end()) continue;
            for (int j : it->second) {
              if (j == i) continue;
              candidates.emplace_back((grid[i].coords() - grid[j].coords()).squaredNorm(), j);
            }
          }
        }
      }
      if (static_cast<int>(candidates.size()) < k && radius < max_radius) continue;
      std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end());
      // Every point within radius * size lies in the searched block.
      const double reach = radius * size;
      if (candidates[k - 1].first <= reach * reach || radius >= max_radius) break;
    }
    for (int m = 0; m < k; ++m) {
      adjacency[i].push_back(candidates[m].second);
      adjacency[candidates[m].second].push_back(i);
    }
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adjacency;
}

std::vector<std::vector<int>> connected_components(const ConfidenceZone& zone) {
  const int count = static_cast<int>(zone.grid.size());
  std::vector<std::vector<int>> components;
  if (count == 0) return components;
  const auto graph = knn_graph(zone.grid, zone.p == 3 ? 6 : 2);
  UnionFind sets(count);
  for (int i = 0; i < count; ++i) {
    if (!zone.member[i]) continue;
    for (int j : graph[i]) {
      if (zone.member[j]) sets.Unite(i, j);
    }
  }
  std::unordered_map<int, int> index_of_root;
  for (int i = 0; i < count; ++i) {
    if (!zone.member[i]) continue;
    const int root = sets.Find(i);
    auto [it, inserted] = index_of_root.try_emplace(root, static_cast<int>(components.size()));
    if (inserted) components.emplace_back();
    components[it->second].push_back(i);
  }
  return components;
}

std::vector<int> preferred_component(const ConfidenceZone& zone, const UnitVector& theta_hat) {
  const auto& components = zone.components.empty() ? connected_components(zone) : zone.components;
  std::vector<int> chosen;
  for (const auto& component : components) {
    int ahead = 0, behind = 0;
    for (int i : component) {
      const double c = zone.grid[i].dot(theta_hat);
      if (c > 0.0) ++ahead;
      if (c < 0.0) ++behind;
    }
    if (ahead >= behind) chosen.insert(chosen.end(), component.begin(), component.end());
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

double zone_area_fraction(const ConfidenceZone& zone) {
  if (zone.grid.empty()) return 0.0;
  const auto members = std::count(zone.member.begin(), zone.member.end(), std::uint8_t{1});
  return static_cast<double>(members) / static_cast<double>(zone.grid.size());
}

void write_zone_csv(const ConfidenceZone& zone, std::ostream& out) {
  out << (zone.p == 3 ? "theta_x,theta_y,theta_z" : "theta_x,theta_y")
      << ",member,component_id,preferred\n";
  char buf[64];
  for (std::size_t i = 0; i < zone.grid.size(); ++i) {
    for (int k = 0; k < zone.p; ++k) {
      std::snprintf(buf, sizeof buf, "%.10g", zone.grid[i][k]);
      out << buf << ',';
    }
    const int component = zone.component_of.empty() ? -1 : zone.component_of[i];
    const int preferred = zone.preferred.empty() ? 0 : zone.preferred[i];
    out << static_cast<int>(zone.member[i]) << ',' << component << ',' << preferred << '\n';
  }
}

CoverageResult zone_coverage(ZoneTest test, double rate_exponent, int p, int n, int replicates,
                             double level, double xi, std::uint64_t seed,
                             const RunOptions& options) {
  const UnitVector theta = UnitVector::Axis(p, p - 1);
  const RadialFunction f = RadialFunction::Fvml();
  const double eta = std::pow(static_cast<double>(n), -rate_exponent);
  const double kappa = calibrate_kappa(p, f, eta * xi / std::sqrt(static_cast<double>(p)));
  const auto sampler = make_sampler(RotSymModel(theta, kappa, f));
  ReplicateJob job;
  job.sampler = sampler.get();
  job.n = n;
  job.replicates = replicates;
  job.seed = seed;
  job.labels = {kTagCoverage, static_cast<std::uint64_t>(n),
                static_cast<std::uint64_t>(test == ZoneTest::kWatson ? 0 : 1),
                static_cast<std::uint64_t>(std::llround(rate_exponent * 1000.0))};
  job.outputs = 1;
  job.evaluate = [&](const Matrix&, const SampleSummary& s, double* out) {
    out[0] = zone_contains(s, test, level, theta) ? 1.0 : 0.0;
  };
  const std::vector<double> covered = run_replicates(job, options);
  CoverageResult result;
  result.replicates = replicates;
  // A replicate whose Wald mean is degenerate yields NaN and counts as covered.
  const auto hits =
      std::count_if(covered.begin(), covered.end(), [](double v) { return !(v == 0.0); });
  result.coverage = static_cast<double>(hits) / replicates;
  result.stderr_value = std::sqrt(result.coverage * (1.0 - result.coverage) / replicates);
  return result;
}

}  // namespace sphloc
