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

#include "sphloc/stats.h"

#include <cmath>
#include <cstdio>
#include <utility>

#include "sphloc/errors.h"
#include "sphloc/specfn.h"

namespace sphloc {
namespace {

void check_dim(const SampleSummary& sample, const UnitVector& theta) {
  if (sample.p != theta.dim()) {
    throw DomainError("location has dimension " + std::to_string(theta.dim()) +
                      " but the sample has dimension " + std::to_string(sample.p));
  }
}

double denominator(const SampleSummary& sample, const UnitVector& theta0) {
  const Vector& t = theta0.coords();
  const double denom = 1.0 - t.dot(sample.scatter * t);
  if (!(denom > kDegeneracyThreshold)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", denom);
    throw DegenerateDenominator(
        std::string("degenerate denominator 1 - (1/n) sum (X_i'theta0)^2 = ") + buf +
        " (all mass at +-theta0)");
  }
  return denom;
}

}  // namespace

SampleSummary SampleSummary::Of(const Matrix& points) {
  SampleSummary s;
  s.p = static_cast<int>(points.rows());
  s.n = static_cast<int>(points.cols());
  if (s.n < 1) throw DomainError("a sample needs n >= 1");
  if (s.p < 2) throw UnsupportedDimension("a sample needs p >= 2");
  s.mean = points.rowwise().mean();
  s.scatter.noalias() = points * points.transpose();
  s.scatter /= s.n;
  return s;
}

Sample::Sample(Matrix points) : points_(std::move(points)) {
  for (Eigen::Index j = 0; j < points_.cols(); ++j) {
    const double norm = points_.col(j).norm();
    if (std::abs(norm - 1.0) > 1e-9) {
      throw NormalizationError("sample point " + std::to_string(j) + " has norm " +
                               std::to_string(norm));
    }
  }
  summary_ = SampleSummary::Of(points_);
}

UnitVector spherical_mean(const SampleSummary& sample) {
  if (!(sample.mean.norm() > kDegeneracyThreshold)) {
    throw DegenerateMean("the sample mean vanishes; the spherical mean is undefined");
  }
  return UnitVector::Normalize(sample.mean);
}

double watson_statistic(const SampleSummary& sample, const UnitVector& theta0) {
  check_dim(sample, theta0);
  const double denom = denominator(sample, theta0);
  const double numer = project_tangent(sample.mean, theta0).squaredNorm();
  return sample.n * (sample.p - 1.0) * numer / denom;
}

double wald_statistic(const SampleSummary& sample, const UnitVector& theta0) {
  check_dim(sample, theta0);
  const double denom = denominator(sample, theta0);
  const UnitVector theta_hat = spherical_mean(sample);
  const double c = theta_hat.dot(theta0);
  if (c == 0.0) return 0.0;
  const double along = sample.mean.squaredNorm() * c * c;
  const double across = project_tangent(theta_hat.coords(), theta0).squaredNorm();
  return sample.n * (sample.p - 1.0) * along * across / denom;
}

double q_bc_statistic(const SampleSummary& sample, const UnitVector& theta0) {
  check_dim(sample, theta0);
  return static_cast<double>(sample.n) * sample.p *
         project_tangent(sample.mean, theta0).squaredNorm();
}

double q_c_statistic(const SampleSummary& sample, const UnitVector& theta0) {
  return q_bc_statistic(sample, theta0);
}

double oracle_statistic(const SampleSummary& sample, const UnitVector& theta0, double xi) {
  check_dim(sample, theta0);
  const double root = std::sqrt(static_cast<double>(sample.n) * sample.p);
  return (root * sample.mean - xi * theta0.coords()).squaredNorm();
}

TestOutcome decide(double statistic, const LimitLaw& null_law, double alpha, std::string test_name,
                   const McCriticalOptions& mc) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (null_law.has_cdf()) {
    TestOutcome out =
        decide(statistic, null_law.quantile(1.0 - alpha), alpha, std::move(test_name));
    out.p_value = 1.0 - null_law.cdf(statistic);
    if (null_law.kind == LawKind::kChiSquare) {
      out.p_value = statistic <= 0.0 ? 1.0 : chi2_sf(statistic, null_law.df);
    }
    return out;
  }
  RngStream rng(mc.seed, mc.stream_id);
  const double critical = mc_critical_value(null_law, alpha, mc.draws, rng, mc.cache);
  return decide(statistic, critical, alpha, std::move(test_name));
}

TestOutcome decide(double statistic, double critical_value, double alpha, std::string test_name) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  TestOutcome out;
  out.statistic = statistic;
  out.critical_value = critical_value;
  out.reject = statistic > critical_value;
  out.test_name = std::move(test_name);
  out.alpha = alpha;
  return out;
}

double fvml_log_likelihood_ratio(const SampleSummary& sample, const UnitVector& theta1,
                                 const UnitVector& theta0, double kappa) {
  check_dim(sample, theta1);
  check_dim(sample, theta0);
  if (!(kappa >= 0.0)) throw DomainError("concentration must be >= 0");
  return sample.n * kappa * sample.mean.dot(theta1.coords() - theta0.coords());
}

LanPair lan_central_sequence(const SampleSummary& sample, const UnitVector& theta,
                             const RegimeSpec& regime) {
  check_dim(sample, theta);
  const int p = sample.p;
  const double xi = regime.xi;
  const double root = std::sqrt(static_cast<double>(sample.n) * p);
  const Vector& t = theta.coords();
  LanPair lan;
  switch (regime.kind) {
    case RegimeKind::kAwayFromUniformity:
      throw UnsupportedRegime("no LAN triple is provided away from uniformity");
    case RegimeKind::kBeyondContiguity:
      lan.delta = xi * root * project_tangent(sample.mean, theta);
      lan.gamma = xi * xi * (Matrix::Identity(p, p) - t * t.transpose());
      break;
    case RegimeKind::kUnderContiguity:
      lan.delta = xi * root * sample.mean - xi * xi * t;
      lan.gamma = xi * xi * Matrix::Identity(p, p);
      break;
    case RegimeKind::kStrictContiguity:
      lan.delta = Vector::Zero(p);
      lan.gamma = Matrix::Zero(p, p);
      break;
  }
  return lan;
}

}  // namespace sphloc
