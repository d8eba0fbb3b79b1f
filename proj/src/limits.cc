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

#include "sphloc/limits.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "sphloc/errors.h"
#include "sphloc/specfn.h"

namespace sphloc {
namespace {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string seed_text(const RngStream& rng) {
  return std::to_string(rng.master_seed()) + "/" + std::to_string(rng.stream_id());
}

double noncentral_chi2_draw(int df, double nc, RngStream& rng) {
  const double shift = std::sqrt(nc);
  const double first = rng.normal() + shift;
  double q = first * first;
  for (int k = 1; k < df; ++k) {
    const double z = rng.normal();
    q += z * z;
  }
  return q;
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

LimitLaw LimitLaw::ChiSquare(int df) {
  if (df < 1) throw DomainError("chi-square degrees of freedom must be >= 1");
  LimitLaw law;
  law.kind = LawKind::kChiSquare;
  law.df = df;
  return law;
}

LimitLaw LimitLaw::NoncentralChiSquare(int df, double nc) {
  if (!(nc >= 0.0)) throw DomainError("non-centrality must be >= 0");
  LimitLaw law = ChiSquare(df);
  law.kind = LawKind::kNoncentralChiSquare;
  law.nc = nc;
  return law;
}

LimitLaw LimitLaw::WaldMixture(int df, double lambda, double nc) {
  if (!(lambda >= 0.0)) throw DomainError("mixture shift lambda must be >= 0");
  LimitLaw law = NoncentralChiSquare(df, nc);
  law.kind = LawKind::kWaldMixture;
  law.lambda = lambda;
  return law;
}

LimitLaw LimitLaw::ProjectedNormal(int p, double xi) {
  if (p < 2) throw UnsupportedDimension("directional laws need p >= 2");
  if (!(xi >= 0.0)) throw DomainError("projected-normal xi must be >= 0");
  LimitLaw law;
  law.kind = LawKind::kProjectedNormal;
  law.p = p;
  law.xi = xi;
  return law;
}

LimitLaw LimitLaw::UniformSphere(int p) {
  LimitLaw law = ProjectedNormal(p, 0.0);
  law.kind = LawKind::kUniformSphere;
  return law;
}

double LimitLaw::cdf(double x) const {
  switch (kind) {
    case LawKind::kChiSquare:
      return chi2_cdf(std::max(0.0, x), df);
    case LawKind::kNoncentralChiSquare:
      return noncentral_chi2_cdf(std::max(0.0, x), df, nc);
    default:
      throw DomainError("law " + descriptor() + " has no closed-form CDF");
  }
}

double LimitLaw::quantile(double prob) const {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  if (kind == LawKind::kChiSquare) return chi2_quantile(prob, df);
  if (kind != LawKind::kNoncentralChiSquare) {
    throw DomainError("law " + descriptor() + " has no closed-form quantile");
  }
  double lo = 0.0;
  double hi = chi2_quantile(prob, df) + nc + 1.0;
  while (cdf(hi) < prob) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string LimitLaw::descriptor() const {
  switch (kind) {
    case LawKind::kChiSquare:
      return "chi2(df=" + std::to_string(df) + ")";
    case LawKind::kNoncentralChiSquare:
      return "ncchi2(df=" + std::to_string(df) + ";nc=" + format_number(nc) + ")";
    case LawKind::kWaldMixture:
      return "waldmix(df=" + std::to_string(df) + ";lambda=" + format_number(lambda) +
             ";nc=" + format_number(nc) + ")";
    case LawKind::kProjectedNormal:
      return "pnorm(p=" + std::to_string(p) + ";xi=" + format_number(xi) + ")";
    case LawKind::kUniformSphere:
      return "usphere(p=" + std::to_string(p) + ")";
  }
  return "unknown";
}

double wald_mixture_value(double z, double q, double lambda) {
  const double shifted = z + lambda;
  if (shifted == 0.0) return 0.0;
  return q / (1.0 + q / (shifted * shifted));
}

std::vector<double> sample_law(const LimitLaw& law, int m, RngStream& rng) {
  if (m < 1) throw DomainError("number of draws must be >= 1");
  if (law.is_directional()) {
    throw DomainError("law " + law.descriptor() + " is directional; use sample_law_directions");
  }
  std::vector<double> draws(m);
  for (double& x : draws) {
    switch (law.kind) {
      case LawKind::kChiSquare:
        x = noncentral_chi2_draw(law.df, 0.0, rng);
        break;
      case LawKind::kNoncentralChiSquare:
        x = noncentral_chi2_draw(law.df, law.nc, rng);
        break;
      default: {
        const double z = rng.normal();
        const double q = noncentral_chi2_draw(law.df, law.nc, rng);
        x = wald_mixture_value(z, q, law.lambda);
      }
    }
  }
  return draws;
}

Matrix sample_law_directions(const LimitLaw& law, const UnitVector& theta, int m, RngStream& rng) {
  if (m < 1) throw DomainError("number of draws must be >= 1");
  if (!law.is_directional()) {
    throw DomainError("law " + law.descriptor() + " is scalar; use sample_law");
  }
  if (theta.dim() != law.p) throw DomainError("direction and law dimensions differ");
  const double shift = law.kind == LawKind::kProjectedNormal ? law.xi : 0.0;
  Matrix out(law.p, m);
  for (int j = 0; j < m; ++j) {
    double norm_sq = 0.0;
    do {
      for (int k = 0; k < law.p; ++k) out(k, j) = rng.normal() + shift * theta[k];
      norm_sq = out.col(j).squaredNorm();
    } while (!(norm_sq > 0.0));
    out.col(j) /= std::sqrt(norm_sq);
  }
  return out;
}

void QuantileCache::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return;
  std::unique_lock lock(mutex_);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      throw ParseError(path + ":" + std::to_string(row) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    }
    try {
      values_[{fields[0], fields[1], std::stoi(fields[2]), fields[3]}] = std::stod(fields[4]);
    } catch (const std::logic_error&) {
      throw ParseError(path + ":" + std::to_string(row) + ": malformed number");
    }
  }
}

void QuantileCache::Save(const std::string& path) const {
  std::shared_lock lock(mutex_);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write quantile cache '" + path + "'");
  char value[64];
  for (const auto& [key, v] : values_) {
    std::snprintf(value, sizeof value, "%.17g", v);
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
        << std::get<3>(key) << ',' << value << '\n';
  }
}

QuantileCache::Key QuantileCache::MakeKey(const LimitLaw& law, double alpha, int m,
                                          const RngStream& rng) {
  return {law.descriptor(), format_number(alpha), m, seed_text(rng)};
}

std::optional<double> QuantileCache::Lookup(const LimitLaw& law, double alpha, int m,
                                            const RngStream& rng) const {
  std::shared_lock lock(mutex_);
  const auto it = values_.find(MakeKey(law, alpha, m, rng));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void QuantileCache::Insert(const LimitLaw& law, double alpha, int m, const RngStream& rng,
                           double value) {
  std::unique_lock lock(mutex_);
  values_[MakeKey(law, alpha, m, rng)] = value;
}

std::size_t QuantileCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

double mc_critical_value(const LimitLaw& law, double alpha, int m, RngStream& rng,
                         QuantileCache* cache) {
  validate_alpha(alpha);
  // The key records the stream before any draws are taken from it.
  const RngStream origin = rng;
  if (cache != nullptr) {
    if (auto hit = cache->Lookup(law, alpha, m, origin)) return *hit;
  }
  std::vector<double> draws = sample_law(law, m, rng);
  const auto rank = static_cast<long>(std::ceil(m * (1.0 - alpha) - 1e-7)) - 1;
  const auto k = static_cast<std::size_t>(std::clamp<long>(rank, 0, m - 1));
  std::nth_element(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(k), draws.end());
  const double value = draws[k];
  if (cache != nullptr) cache->Insert(law, alpha, m, origin, value);
  return value;
}

double watson_noncentrality(const RegimeSpec& regime, double tau_norm, int p) {
  if (!(tau_norm >= 0.0)) throw DomainError("tau norm must be >= 0");
  const double xi = regime.xi;
  const double base = xi * xi * tau_norm * tau_norm;
  switch (regime.kind) {
    case RegimeKind::kAwayFromUniformity: {
      const double denom = 1.0 - xi * xi / p - regime.e2_tilde;
      if (!(denom > 0.0)) {
        throw DomainError("away from uniformity requires 1 - xi^2/p - e2_tilde > 0");
      }
      return (1.0 - 1.0 / p) / denom * base;
    }
    case RegimeKind::kBeyondContiguity:
      return base;
    case RegimeKind::kUnderContiguity:
      if (tau_norm > 2.0 + 1e-12) {
        throw DomainError("under contiguity the tau norm cannot exceed 2, got " +
                          std::to_string(tau_norm));
      }
      return std::max(0.0, 0.25 * base * (4.0 - tau_norm * tau_norm));
    case RegimeKind::kStrictContiguity:
      return 0.0;
  }
  return 0.0;
}

double asymptotic_power(PowerTest test, const RegimeSpec& regime, double tau_norm, int p,
                        double alpha) {
  validate_alpha(alpha);
  if (test == PowerTest::kWatson) {
    const double nc = watson_noncentrality(regime, tau_norm, p);
    if (nc == 0.0) return alpha;
    return noncentral_chi2_sf(chi2_quantile(1.0 - alpha, p - 1), p - 1, nc);
  }
  if (regime.kind != RegimeKind::kUnderContiguity) {
    throw DomainError("the oracle test is only defined under contiguity");
  }
  if (!(tau_norm >= 0.0)) throw DomainError("tau norm must be >= 0");
  const double nc = regime.xi * regime.xi * tau_norm * tau_norm;
  if (nc == 0.0) return alpha;
  return noncentral_chi2_sf(chi2_quantile(1.0 - alpha, p), p, nc);
}

double wald_asymptotic_power_mc(const RegimeSpec& regime, double tau_norm, int p, double alpha,
                                int m, RngStream& rng) {
  validate_alpha(alpha);
  LimitLaw law;
  switch (regime.kind) {
    case RegimeKind::kAwayFromUniformity:
    case RegimeKind::kBeyondContiguity:
      return asymptotic_power(PowerTest::kWatson, regime, tau_norm, p, alpha);
    case RegimeKind::kUnderContiguity: {
      // Z + lambda is the theta0 coordinate of N(xi theta, I); only its
      // square enters the statistic, so the sign of lambda is irrelevant.
      const double lambda = std::abs(regime.xi * (1.0 - 0.5 * tau_norm * tau_norm));
      law = LimitLaw::WaldMixture(p - 1, lambda, watson_noncentrality(regime, tau_norm, p));
      break;
    }
    case RegimeKind::kStrictContiguity:
      law = LimitLaw::WaldMixture(p - 1, 0.0, 0.0);
      break;
  }
  const double critical = chi2_quantile(1.0 - alpha, p - 1);
  const std::vector<double> draws = sample_law(law, m, rng);
  const auto above =
      std::count_if(draws.begin(), draws.end(), [critical](double x) { return x > critical; });
  return static_cast<double>(above) / m;
}

double SphericalMeanLimit::scale(double n) const {
  switch (kind) {
    case RegimeKind::kAwayFromUniformity:
      return std::sqrt(n);
    case RegimeKind::kBeyondContiguity:
      return std::sqrt(n) * std::pow(n, -rate_exponent);
    default:
      return 1.0;
  }
}

Matrix SphericalMeanLimit::covariance(const UnitVector& theta) const {
  const int p = theta.dim();
  return variance_factor * (Matrix::Identity(p, p) - theta.coords() * theta.coords().transpose());
}

SphericalMeanLimit spherical_mean_limit(const RegimeSpec& regime, int p) {
  SphericalMeanLimit limit;
  limit.kind = regime.kind;
  limit.rate_exponent = regime.rate_exponent;
  const double xi = regime.xi;
  switch (regime.kind) {
    case RegimeKind::kAwayFromUniformity: {
      const double denom = 1.0 - xi * xi / p - regime.e2_tilde;
      if (!(denom > 0.0)) {
        throw DomainError("away from uniformity requires 1 - xi^2/p - e2_tilde > 0");
      }
      limit.variance_factor = denom / (xi * xi * (1.0 - 1.0 / p));
      break;
    }
    case RegimeKind::kBeyondContiguity:
      limit.variance_factor = 1.0 / (xi * xi);
      break;
    case RegimeKind::kUnderContiguity:
      limit.law = LimitLaw::ProjectedNormal(p, xi);
      break;
    case RegimeKind::kStrictContiguity:
      limit.law = LimitLaw::UniformSphere(p);
      break;
  }
  return limit;
}

}  // namespace sphloc
