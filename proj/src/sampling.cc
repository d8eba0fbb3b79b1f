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

#include "sphloc/sampling.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "sphloc/errors.h"

namespace sphloc {
namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

void fill_tangent_direction(RngStream& rng, double* s, int m) {
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (int k = 0; k < m; ++k) {
      s[k] = rng.normal();
      norm_sq += s[k] * s[k];
    }
  } while (!(norm_sq > 0.0));
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (int k = 0; k < m; ++k) s[k] *= inv;
}

}  // namespace

Sampler::Sampler(const UnitVector& theta)
    : p_(theta.dim()), frame_(frame_to(theta)), identity_frame_(frame_.isIdentity(0.0)) {}

void Sampler::fill(Matrix& out, RngStream& rng) const {
  if (out.rows() != p_) throw DomainError("sample buffer has the wrong dimension");
  Vector pole(p_);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (is_uniform()) {
      fill_tangent_direction(rng, pole.data(), p_);
      out.col(j) = pole;
      continue;
    }
    const double u = draw_u(rng);
    const double v = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
    fill_tangent_direction(rng, pole.data(), p_ - 1);
    pole.head(p_ - 1) *= v;
    pole[p_ - 1] = u;
    if (identity_frame_) {
      out.col(j) = pole;
    } else {
      out.col(j).noalias() = frame_ * pole;
    }
  }
}

Matrix Sampler::sample(int n, RngStream& rng) const {
  if (n < 1) throw DomainError("sample size must be >= 1");
  Matrix out(p_, n);
  fill(out, rng);
  return out;
}

UniformSampler::UniformSampler(int p) : Sampler(UnitVector::Axis(p, p - 1)) {}

double UniformSampler::draw_u(RngStream& rng) const {
  Vector x(dim());
  fill_tangent_direction(rng, x.data(), dim());
  return x[dim() - 1];
}

FvmlSampler::FvmlSampler(const UnitVector& theta, double kappa)
    : Sampler(theta), kappa_(kappa), half_shape_(0.5 * (theta.dim() - 1)) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("concentration must be finite and >= 0");
  }
  const double m = theta.dim() - 1.0;
  b_ = m / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m * m));
  x0_ = (1.0 - b_) / (1.0 + b_);
  c_ = kappa * x0_ + m * std::log(1.0 - x0_ * x0_);
}

double FvmlSampler::beta_half(RngStream& rng) const {
  // Beta(a, a) with a = (p - 1)/2; a = 1 (p = 3) is the uniform law.
  if (half_shape_ == 1.0) return rng.uniform();
  std::gamma_distribution<double> gamma(half_shape_, 1.0);
  const double g1 = gamma(rng);
  const double g2 = gamma(rng);
  return g1 / (g1 + g2);
}

double FvmlSampler::draw_u(RngStream& rng) const {
  const double m = dim() - 1.0;
  if (kappa_ == 0.0) {
    // Under uniformity u has density proportional to (1 - t^2)^{(p-3)/2}.
    return 1.0 - 2.0 * beta_half(rng);
  }
  while (true) {
    const double z = beta_half(rng);
    const double w = (1.0 - (1.0 + b_) * z) / (1.0 - (1.0 - b_) * z);
    const double log_u = std::log(rng.uniform());
    if (kappa_ * w + m * std::log(1.0 - x0_ * w) - c_ >= log_u) return w;
  }
}

RotSymSampler::RotSymSampler(const RotSymModel& model) : Sampler(model.theta()) {
  const int p = model.dim();
  const double kappa = model.kappa();
  const RadialFunction& f = model.f();
  const double scale = f(kappa);
  auto weight = [&](double phi) {
    const double w = p == 2 ? 1.0 : std::pow(std::sin(phi), p - 2);
    return w * f(kappa * std::cos(phi)) / scale;
  };

  const int cells = kGridNodes - 1;
  const double h = std::numbers::pi / cells;
  std::vector<double> mass(kGridNodes, 0.0);
  for (int i = 0; i < cells; ++i) {
    const double mid = (i + 0.5) * h;
    double cell = 0.0;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      const double offset = 0.5 * h * kGlNodes[k];
      cell += kGlWeights[k] * (weight(mid - offset) + weight(mid + offset));
    }
    mass[i + 1] = mass[i] + 0.5 * h * cell;
  }
  const double total = mass.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NoConvergence("inverse-CDF table has no mass");
  }

  // Cells of zero mass would give duplicate abscissae; only the first node
  // of such a run is kept.
  for (int i = 0; i < kGridNodes; ++i) {
    const double value = i == cells ? 1.0 : std::min(1.0, mass[i] / total);
    if (!cdf_.empty() && value <= cdf_.back()) continue;
    cdf_.push_back(value);
    angle_.push_back(i * h);
  }
  if (cdf_.back() < 1.0) {
    cdf_.back() = 1.0;
    angle_.back() = std::numbers::pi;
  }

  // Fritsch-Carlson slopes with the three-point end conditions.
  const std::size_t nodes = cdf_.size();
  std::vector<double> width(nodes - 1), secant(nodes - 1);
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    width[i] = cdf_[i + 1] - cdf_[i];
    secant[i] = (angle_[i + 1] - angle_[i]) / width[i];
  }
  slope_.assign(nodes, 0.0);
  if (nodes == 2) {
    slope_[0] = slope_[1] = secant[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < nodes; ++i) {
    if (secant[i - 1] * secant[i] <= 0.0) continue;
    const double w1 = 2.0 * width[i] + width[i - 1];
    const double w2 = width[i] + 2.0 * width[i - 1];
    slope_[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) m = 3.0 * d0;
    return m;
  };
  slope_[0] = end_slope(width[0], width[1], secant[0], secant[1]);
  slope_[nodes - 1] =
      end_slope(width[nodes - 2], width[nodes - 3], secant[nodes - 2], secant[nodes - 3]);
}

double RotSymSampler::inverse_cdf_angle(double prob) const {
  prob = std::clamp(prob, 0.0, 1.0);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), prob);
  std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
  if (i + 1 >= cdf_.size()) return angle_.back();
  const double h = cdf_[i + 1] - cdf_[i];
  const double t = (prob - cdf_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double phi = (2.0 * t3 - 3.0 * t2 + 1.0) * angle_[i] + (t3 - 2.0 * t2 + t) * h * slope_[i] +
                     (-2.0 * t3 + 3.0 * t2) * angle_[i + 1] + (t3 - t2) * h * slope_[i + 1];
  return std::clamp(phi, angle_[i], angle_[i + 1]);
}

double RotSymSampler::draw_u(RngStream& rng) const {
  return std::cos(inverse_cdf_angle(rng.uniform()));
}

std::unique_ptr<Sampler> make_sampler(const RotSymModel& model) {
  if (model.is_uniform()) return std::make_unique<UniformSampler>(model.dim());
  if (model.f().is_fvml()) return std::make_unique<FvmlSampler>(model.theta(), model.kappa());
  return std::make_unique<RotSymSampler>(model);
}

Matrix sample_uniform(int p, int n, RngStream& rng) {
  if (p < 2) throw UnsupportedDimension("sampling needs p >= 2");
  return UniformSampler(p).sample(n, rng);
}

Matrix sample_fvml(const UnitVector& theta, double kappa, int n, RngStream& rng) {
  if (kappa == 0.0) return sample_uniform(theta.dim(), n, rng);
  return FvmlSampler(theta, kappa).sample(n, rng);
}

Matrix sample_rotsym(const RotSymModel& model, int n, RngStream& rng) {
  if (model.is_uniform()) return sample_uniform(model.dim(), n, rng);
  return RotSymSampler(model).sample(n, rng);
}

}  // namespace sphloc
