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

// Limit laws of the spherical mean and of the Watson and Wald statistics,
// Monte-Carlo critical values, and asymptotic power.

#ifndef SPHLOC_LIMITS_H_
#define SPHLOC_LIMITS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sphloc/geom.h"
#include "sphloc/model.h"
#include "sphloc/rng.h"

namespace sphloc {

enum class LawKind {
  kChiSquare,            // chi^2_df
  kNoncentralChiSquare,  // chi^2_df(nc)
  kWaldMixture,          // (1 + Q/(Z + lambda)^2)^{-1} Q, Q ~ chi^2_df(nc), Z ~ N(0, 1)
  kProjectedNormal,      // Z/||Z||, Z ~ N(xi theta, I_p)
  kUniformSphere,        // uniform on S^{p-1}
};

struct LimitLaw {
  LawKind kind = LawKind::kChiSquare;
  int df = 1;
  double nc = 0.0;
  double lambda = 0.0;
  int p = 0;
  double xi = 0.0;

  static LimitLaw ChiSquare(int df);
  static LimitLaw NoncentralChiSquare(int df, double nc);
  static LimitLaw WaldMixture(int df, double lambda, double nc = 0.0);
  static LimitLaw ProjectedNormal(int p, double xi);
  static LimitLaw UniformSphere(int p);

  bool is_directional() const {
    return kind == LawKind::kProjectedNormal || kind == LawKind::kUniformSphere;
  }
  // Chi-square laws only.
  bool has_cdf() const {
    return kind == LawKind::kChiSquare || kind == LawKind::kNoncentralChiSquare;
  }
  double cdf(double x) const;
  double quantile(double prob) const;

  // Stable, comma-free text key such as "waldmix(df=2;lambda=1;nc=0)".
  std::string descriptor() const;
};

// (1 + q/(z + lambda)^2)^{-1} q, defined as 0 when z + lambda = 0.
double wald_mixture_value(double z, double q, double lambda);

// m scalar draws; throws DomainError for directional laws.
std::vector<double> sample_law(const LimitLaw& law, int m, RngStream& rng);

// m draws (p x m) of a directional law centred at theta.
Matrix sample_law_directions(const LimitLaw& law, const UnitVector& theta, int m, RngStream& rng);

// Persisted MC quantiles. Each file line is
//   descriptor,alpha,m,master_seed/stream_id,value
// Readers share the lock; writers take it exclusively; the last write wins.
class QuantileCache {
 public:
  QuantileCache() = default;
  // Merges the entries of a cache file; a missing file adds nothing.
  // Malformed lines throw ParseError.
  void Load(const std::string& path);
  void Save(const std::string& path) const;

  std::optional<double> Lookup(const LimitLaw& law, double alpha, int m,
                               const RngStream& rng) const;
  void Insert(const LimitLaw& law, double alpha, int m, const RngStream& rng, double value);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::string, std::string, int, std::string>;
  static Key MakeKey(const LimitLaw& law, double alpha, int m, const RngStream& rng);

  mutable std::shared_mutex mutex_;
  std::map<Key, double> values_;
};

inline constexpr int kDefaultCriticalDraws = 1000000;

// Empirical (1 - alpha)-quantile (smallest x with F_m(x) >= 1 - alpha) of m
// draws from rng. The rng is consumed only when the cache misses.
double mc_critical_value(const LimitLaw& law, double alpha, int m, RngStream& rng,
                         QuantileCache* cache = nullptr);

// Non-centrality of the Watson limit for an alternative of size tau_norm.
// Away from uniformity requires 1 - xi^2/p - e2_tilde > 0; under contiguity
// requires tau_norm <= 2. Throws DomainError otherwise.
double watson_noncentrality(const RegimeSpec& regime, double tau_norm, int p);

enum class PowerTest { kWatson, kOracle };

// Closed-form asymptotic power. The oracle is only defined under contiguity.
double asymptotic_power(PowerTest test, const RegimeSpec& regime, double tau_norm, int p,
                        double alpha);

// Asymptotic power of the chi-square-calibrated Wald test under contiguity
// or strict contiguity, where its limit is the Wald mixture law. Estimated
// from m draws.
double wald_asymptotic_power_mc(const RegimeSpec& regime, double tau_norm, int p, double alpha,
                                int m, RngStream& rng);

struct SphericalMeanLimit {
  RegimeKind kind = RegimeKind::kUnderContiguity;
  // (i), (ii): scale(n) (theta_hat - theta) -> N(0, variance_factor (I - theta theta')).
  double variance_factor = 0.0;
  // (iii), (iv): theta_hat itself converges to this directional law.
  std::optional<LimitLaw> law;
  double rate_exponent = 0.0;

  // sqrt(n), sqrt(n) eta_n, 1 and 1 respectively.
  double scale(double n) const;
  Matrix covariance(const UnitVector& theta) const;
};

SphericalMeanLimit spherical_mean_limit(const RegimeSpec& regime, int p);

}  // namespace sphloc

#endif  // SPHLOC_LIMITS_H_
