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

// Exact samplers for rotationally symmetric laws. Samples are p x n matrices
// with one unit vector per column.

#ifndef SPHLOC_SAMPLING_H_
#define SPHLOC_SAMPLING_H_

#include <memory>
#include <vector>

#include "sphloc/geom.h"
#include "sphloc/model.h"
#include "sphloc/rng.h"

namespace sphloc {

// Draws X = u theta + sqrt(1 - u^2) S with u from the subclass and S uniform
// on the unit sphere of the tangent space at theta.
class Sampler {
 public:
  explicit Sampler(const UnitVector& theta);
  virtual ~Sampler() = default;

  int dim() const { return p_; }
  // out must already be p x n; every column is overwritten.
  void fill(Matrix& out, RngStream& rng) const;
  Matrix sample(int n, RngStream& rng) const;
  virtual double draw_u(RngStream& rng) const = 0;

 protected:
  // Uniform samplers bypass the tangent-normal construction.
  virtual bool is_uniform() const { return false; }

 private:
  int p_;
  Matrix frame_;
  bool identity_frame_;
};

class UniformSampler final : public Sampler {
 public:
  explicit UniformSampler(int p);
  double draw_u(RngStream& rng) const override;

 protected:
  bool is_uniform() const override { return true; }
};

// Wood's envelope-rejection scheme for the u-marginal of FvML.
class FvmlSampler final : public Sampler {
 public:
  FvmlSampler(const UnitVector& theta, double kappa);
  double draw_u(RngStream& rng) const override;

 private:
  double beta_half(RngStream& rng) const;

  double kappa_;
  double b_;
  double x0_;
  double c_;
  double half_shape_;  // (p - 1) / 2
};

// Inverse CDF of the u-marginal tabulated on kGridNodes equally spaced
// polar angles and inverted by monotone cubic (PCHIP) interpolation.
class RotSymSampler final : public Sampler {
 public:
  static constexpr int kGridNodes = 4096;

  explicit RotSymSampler(const RotSymModel& model);
  double draw_u(RngStream& rng) const override;
  // Polar angle phi with P(angle <= phi) = prob.
  double inverse_cdf_angle(double prob) const;

 private:
  std::vector<double> cdf_;    // increasing, from 0 to 1
  std::vector<double> angle_;  // polar angle at each cdf node
  std::vector<double> slope_;  // d angle / d cdf at each node
};

// FvmlSampler for f = exp, RotSymSampler otherwise, UniformSampler at kappa = 0.
std::unique_ptr<Sampler> make_sampler(const RotSymModel& model);

Matrix sample_uniform(int p, int n, RngStream& rng);
Matrix sample_fvml(const UnitVector& theta, double kappa, int n, RngStream& rng);
// Always the gridded inverse-CDF path, even for f = exp.
Matrix sample_rotsym(const RotSymModel& model, int n, RngStream& rng);

}  // namespace sphloc

#endif  // SPHLOC_SAMPLING_H_
