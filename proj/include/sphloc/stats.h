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

// Location test statistics on the sphere and their decision rules.
//
// Every statistic depends on the data only through the sample mean X_bar
// and the scatter matrix T = (1/n) sum X_i X_i', so both are computed once
// per sample and a whole grid of null locations costs O(p^2) per point.

#ifndef SPHLOC_STATS_H_
#define SPHLOC_STATS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "sphloc/geom.h"
#include "sphloc/limits.h"
#include "sphloc/model.h"

namespace sphloc {

// Threshold for ||X_bar|| and for 1 - theta0'T theta0.
inline constexpr double kDegeneracyThreshold = 1e-12;

struct SampleSummary {
  int n = 0;
  int p = 0;
  Vector mean;     // X_bar
  Matrix scatter;  // T

  // points is p x n with unit columns.
  static SampleSummary Of(const Matrix& points);
};

class Sample {
 public:
  // points is p x n; every column must have unit norm within 1e-9.
  explicit Sample(Matrix points);

  int n() const { return summary_.n; }
  int p() const { return summary_.p; }
  const Matrix& points() const { return points_; }
  const SampleSummary& summary() const { return summary_; }
  operator const SampleSummary&() const { return summary_; }  // NOLINT

 private:
  Matrix points_;
  SampleSummary summary_;
};

// X_bar / ||X_bar||; throws DegenerateMean when ||X_bar|| <= 1e-12.
UnitVector spherical_mean(const SampleSummary& sample);

// W = n (p-1) ||(I - theta0 theta0') X_bar||^2 / (1 - theta0'T theta0).
double watson_statistic(const SampleSummary& sample, const UnitVector& theta0);

// S = n (p-1) (X_bar'theta0)^2 ||(I - theta0 theta0') theta_hat||^2 / (1 - theta0'T theta0).
// Exactly 0 when theta0'theta_hat evaluates to 0.
double wald_statistic(const SampleSummary& sample, const UnitVector& theta0);

// n p X_bar'(I - theta0 theta0') X_bar.
double q_bc_statistic(const SampleSummary& sample, const UnitVector& theta0);
// Same expression as q_bc_statistic.
double q_c_statistic(const SampleSummary& sample, const UnitVector& theta0);

// ||sqrt(n p) X_bar - xi theta0||^2, calibrated against chi^2_p.
double oracle_statistic(const SampleSummary& sample, const UnitVector& theta0, double xi);

struct TestOutcome {
  double statistic = 0.0;
  double critical_value = 0.0;
  std::optional<double> p_value;
  bool reject = false;
  std::string test_name;
  double alpha = 0.05;
};

// Source of Monte-Carlo critical values for laws without a quantile function.
struct McCriticalOptions {
  int draws = kDefaultCriticalDraws;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t stream_id = 0;
  QuantileCache* cache = nullptr;
};

// Rejects when statistic > critical value. Chi-square laws give an analytic
// critical value and a p-value; the other laws an MC critical value only.
TestOutcome decide(double statistic, const LimitLaw& null_law, double alpha,
                   std::string test_name = "", const McCriticalOptions& mc = {});
TestOutcome decide(double statistic, double critical_value, double alpha,
                   std::string test_name = "");

// n kappa X_bar'(theta1 - theta0); exact for FvML at a common kappa.
double fvml_log_likelihood_ratio(const SampleSummary& sample, const UnitVector& theta1,
                                 const UnitVector& theta0, double kappa);

struct LanPair {
  Vector delta;
  Matrix gamma;
};

// Central sequence and information matrix at theta; uses regime.xi. Throws
// UnsupportedRegime away from uniformity.
LanPair lan_central_sequence(const SampleSummary& sample, const UnitVector& theta,
                             const RegimeSpec& regime);

}  // namespace sphloc

#endif  // SPHLOC_STATS_H_
