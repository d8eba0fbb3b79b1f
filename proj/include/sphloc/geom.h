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

// Unit-sphere geometry: validated unit vectors, tangent projections, the
// tangent-normal decomposition, frame rotations and spherical grids.

#ifndef SPHLOC_GEOM_H_
#define SPHLOC_GEOM_H_

#include <Eigen/Dense>
#include <vector>

namespace sphloc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A point on S^{p-1}, p >= 2. Construction always normalizes, so the
// stored coordinates have norm 1 to within a few ulps.
class UnitVector {
 public:
  // Throws ZeroVector if ||x|| <= 1e-300 and UnsupportedDimension if p < 2.
  static UnitVector Normalize(const Vector& x);
  // Canonical basis vector e_{axis} (0-based) in dimension p.
  static UnitVector Axis(int p, int axis);

  const Vector& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }
  double dot(const UnitVector& other) const { return coords_.dot(other.coords_); }
  double dot(const Vector& other) const { return coords_.dot(other); }

  UnitVector operator-() const { return UnitVector(-coords_); }

 private:
  explicit UnitVector(Vector coords) : coords_(std::move(coords)) {}

  Vector coords_;
};

inline UnitVector normalize(const Vector& x) { return UnitVector::Normalize(x); }

// X = u*theta + v*s with u = X'theta, v = sqrt(1 - u^2) and s a unit tangent
// at theta (or zero when X = +-theta).
struct TangentNormalParts {
  double u = 0.0;
  double v = 0.0;
  Vector s;
};

TangentNormalParts tangent_normal(const UnitVector& x, const UnitVector& theta);

// Inverse of tangent_normal: u*theta + v*s.
Vector reconstruct(const TangentNormalParts& parts, const UnitVector& theta);

// (I - theta theta') x.
Vector project_tangent(const Vector& x, const UnitVector& theta);

// Deterministic rotation O (det +1) with O e_p = theta. Built from the
// Householder reflection exchanging e_p and theta, with the first column
// negated to restore det = +1.
Matrix frame_to(const UnitVector& theta);

// p = 2: `resolution` equally spaced angles starting at 0.
// p = 3: Fibonacci lattice mirrored through the origin, so point i and point
// resolution-1-i are exact antipodes (odd resolutions leave one equatorial
// point unpaired). Throws UnsupportedDimension for p outside {2, 3} and
// DomainError for resolution < 4.
std::vector<UnitVector> sphere_grid(int p, int resolution);

// Index of the antipode of grid point i in a sphere_grid() output, or -1.
int grid_antipode(int p, int resolution, int i);

}  // namespace sphloc

#endif  // SPHLOC_GEOM_H_
