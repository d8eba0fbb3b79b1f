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

#include "sphloc/geom.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sphloc/errors.h"

namespace sphloc {
namespace {

// Below this the residual x - u*theta is treated as zero (x = +-theta).
constexpr double kPoleResidual = 1e-14;

// The lower half is the exact negation of the upper half, so its spiral has
// the opposite handedness and a few pairs straddling the equator land closer
// than the lattice spacing. Pushing those upper points apart (their mirrors
// follow) keeps every nearest-neighbour distance above kSeamTarget times the
// nominal spacing without breaking the antipodal pairing.
constexpr double kSeamTarget = 0.6;
constexpr int kSeamIterations = 20;

// Equator point farthest from the band points and their mirrors, scanned
// over a fine angular grid; used as the unpaired point of odd grids.
Vector equator_gap(const std::vector<Vector>& upper, int resolution) {
  const double nominal = std::sqrt(4.0 * std::numbers::pi / resolution);
  constexpr int kScan = 3600;
  Vector best(3);
  double best_dist = -1.0;
  for (int a = 0; a < kScan; ++a) {
    const double phi = 2.0 * std::numbers::pi * a / kScan;
    Vector x(3);
    x << std::cos(phi), std::sin(phi), 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (const Vector& u : upper) {
      if (u[2] >= 2.0 * nominal) continue;
      nearest = std::min({nearest, (x - u).norm(), (x + u).norm()});
    }
    if (nearest > best_dist) {
      best_dist = nearest;
      best = x;
    }
  }
  return best;
}

void relax_equator_seam(std::vector<Vector>& upper, int resolution, const Vector* fixed) {
  const double nominal = std::sqrt(4.0 * std::numbers::pi / resolution);
  const double target = kSeamTarget * nominal;
  std::vector<int> band;
  for (int i = 0; i < static_cast<int>(upper.size()); ++i) {
    if (upper[i][2] < 2.0 * nominal) band.push_back(i);
  }
  for (int iter = 0; iter < kSeamIterations; ++iter) {
    bool moved = false;
    for (int k : band) {
      if (upper[k][2] >= nominal) continue;
      double nearest = std::numeric_limits<double>::infinity();
      Vector neighbour;
      if (fixed != nullptr) {
        for (double sign : {1.0, -1.0}) {
          const double dist = (upper[k] - sign * *fixed).norm();
          if (dist < nearest) {
            nearest = dist;
            neighbour = sign * *fixed;
          }
        }
      }
      for (int j : band) {
        for (double sign : {1.0, -1.0}) {
          if (j == k && sign > 0.0) continue;
          const double dist = (upper[k] - sign * upper[j]).norm();
          if (dist < nearest) {
            nearest = dist;
            neighbour = sign * upper[j];
          }
        }
      }
      if (nearest >= target) continue;
      Vector away = upper[k] - neighbour;
      away -= upper[k].dot(away) * upper[k];
      const double norm = away.norm();
      if (norm < 1e-300) continue;
      upper[k] += away * ((target - nearest) / (2.0 * norm));
      upper[k].normalize();
      moved = true;
    }
    if (!moved) break;
  }
}

}  // namespace

UnitVector UnitVector::Normalize(const Vector& x) {
  if (x.size() < 2) {
    throw UnsupportedDimension("unit vectors need p >= 2, got p = " + std::to_string(x.size()));
  }
  const double norm = x.norm();
  if (!(norm > 1e-300)) throw ZeroVector("cannot normalize a zero vector");
  return UnitVector(x / norm);
}

UnitVector UnitVector::Axis(int p, int axis) {
  Vector e = Vector::Zero(p);
  e[axis] = 1.0;
  return Normalize(e);
}

TangentNormalParts tangent_normal(const UnitVector& x, const UnitVector& theta) {
  TangentNormalParts parts;
  const double u = std::clamp(x.dot(theta), -1.0, 1.0);
  Vector residual = x.coords() - u * theta.coords();
  // A second projection removes the rounding error along theta, which
  // matters when x is close to a pole.
  residual -= theta.dot(residual) * theta.coords();
  const double v = residual.norm();
  parts.u = u;
  if (v <= kPoleResidual) {
    parts.v = 0.0;
    parts.s = Vector::Zero(theta.dim());
  } else {
    parts.v = v;
    parts.s = residual / v;
  }
  return parts;
}

Vector reconstruct(const TangentNormalParts& parts, const UnitVector& theta) {
  return parts.u * theta.coords() + parts.v * parts.s;
}

Vector project_tangent(const Vector& x, const UnitVector& theta) {
  return x - theta.dot(x) * theta.coords();
}

Matrix frame_to(const UnitVector& theta) {
  const int p = theta.dim();
  const Vector& t = theta.coords();
  // w = e_p - theta; the last entry is evaluated without cancellation.
  Vector w = -t;
  const double tangential_sq = t.head(p - 1).squaredNorm();
  w[p - 1] = t[p - 1] > 0.0 ? tangential_sq / (1.0 + t[p - 1]) : 1.0 - t[p - 1];
  const double w_sq = w.squaredNorm();
  Matrix frame = Matrix::Identity(p, p);
  if (w_sq < 1e-300) return frame;
  frame -= (2.0 / w_sq) * (w * w.transpose());
  frame.col(0) = -frame.col(0);
  return frame;
}

std::vector<UnitVector> sphere_grid(int p, int resolution) {
  if (p != 2 && p != 3) {
    throw UnsupportedDimension("sphere grids are only available for p in {2, 3}, got p = " +
                               std::to_string(p));
  }
  if (resolution < 4) {
    throw DomainError("grid resolution must be at least 4, got " + std::to_string(resolution));
  }
  std::vector<UnitVector> grid;
  grid.reserve(resolution);
  if (p == 2) {
    // Even resolutions: the second half is the exact negation of the first.
    const int distinct = resolution % 2 == 0 ? resolution / 2 : resolution;
    for (int k = 0; k < resolution; ++k) {
      const int base = k % distinct;
      const double angle = 2.0 * std::numbers::pi * base / resolution;
      Vector x(2);
      x << std::cos(angle), std::sin(angle);
      if (k >= distinct) x = -x;
      grid.push_back(UnitVector::Normalize(x));
    }
    return grid;
  }

  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  auto lattice_point = [&](int i) {
    const double z = 1.0 - (2.0 * i + 1.0) / resolution;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    Vector x(3);
    x << r * std::cos(phi), r * std::sin(phi), z;
    return x;
  };
  const int half = resolution / 2;
  std::vector<Vector> upper(half);
  for (int i = 0; i < half; ++i) upper[i] = lattice_point(i);
  std::vector<Vector> coords(resolution);
  if (resolution % 2 == 1) coords[half] = equator_gap(upper, resolution);
  relax_equator_seam(upper, resolution, resolution % 2 == 1 ? &coords[half] : nullptr);
  for (int i = 0; i < half; ++i) {
    coords[i] = upper[i];
    coords[resolution - 1 - i] = -upper[i];
  }
  for (const Vector& c : coords) grid.push_back(UnitVector::Normalize(c));
  return grid;
}

int grid_antipode(int p, int resolution, int i) {
  if (p == 2) return resolution % 2 == 0 ? (i + resolution / 2) % resolution : -1;
  if (resolution % 2 == 1 && i == resolution / 2) return -1;
  return resolution - 1 - i;
}

}  // namespace sphloc
