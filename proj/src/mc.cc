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

#include "sphloc/mc.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sphloc/errors.h"
#include "sphloc/ks.h"
#include "sphloc/sampling.h"
#include "sphloc/specfn.h"
#include "sphloc/stats.h"

namespace sphloc {
namespace {

// Stream labels: {study tag, n, ell, r, block}; the kernel appends the
// replicate index.
constexpr std::uint64_t kTagWaldLaw = 31;
constexpr std::uint64_t kTagLan = 51;
constexpr std::uint64_t kBlockSimulate = 0;
constexpr std::uint64_t kBlockCritical = 1;
constexpr std::uint64_t kBlockAsymptotic = 2;
constexpr std::uint64_t kBlockLaw = 3;

constexpr int kWaldPowerDraws = 200000;

std::uint64_t figure_tag(Figure figure) {
  switch (figure) {
    case Figure::kFig1:
      return 1;
    case Figure::kFig2:
      return 2;
    case Figure::kFig3:
      return 3;
    case Figure::kThm21:
      return 21;
  }
  return 0;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

UnitVector pole(int p) { return UnitVector::Axis(p, p - 1); }

// Counts values strictly above each critical value; NaN never rejects.
std::vector<std::int64_t> count_rejections(const std::vector<double>& values, int outputs,
                                           const std::vector<double>& critical) {
  std::vector<std::int64_t> counts(outputs, 0);
  const std::size_t rows = values.size() / outputs;
  for (std::size_t i = 0; i < rows; ++i) {
    for (int k = 0; k < outputs; ++k) {
      if (values[i * outputs + k] > critical[k]) ++counts[k];
    }
  }
  return counts;
}

ResultRow make_row(const ExperimentSpec& spec, int ell, int r, std::string test, int n,
                   std::int64_t rejections, std::optional<double> asym) {
  ResultRow row;
  row.figure = std::string(figure_name(spec.figure));
  row.ell = ell;
  row.r = r;
  row.test = std::move(test);
  row.n = n;
  row.replicates = spec.replicates;
  row.alpha = spec.alpha;
  row.rejections = rejections;
  row.reject_freq = static_cast<double>(rejections) / spec.replicates;
  row.stderr_value = std::sqrt(row.reject_freq * (1.0 - row.reject_freq) / spec.replicates);
  row.asym_power = asym;
  row.seed = spec.seed;
  return row;
}

ResultRow metric_row(const ExperimentSpec& spec, int regime_index, std::string metric, int n,
                     int replicates, double value) {
  ResultRow row;
  row.figure = std::string(figure_name(spec.figure));
  row.ell = regime_index;
  row.test = std::move(metric);
  row.n = n;
  row.replicates = replicates;
  row.alpha = spec.alpha;
  row.reject_freq = value;
  row.seed = spec.seed;
  return row;
}

// Concentration with e1 = eta xi / sqrt(p).
double kappa_for(int p, const RadialFunction& f, double eta, double xi) {
  return calibrate_kappa(p, f, eta * xi / std::sqrt(static_cast<double>(p)));
}

std::string format_g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string_view figure_name(Figure figure) {
  switch (figure) {
    case Figure::kFig1:
      return "fig1";
    case Figure::kFig2:
      return "fig2";
    case Figure::kFig3:
      return "fig3";
    case Figure::kThm21:
      return "thm21";
  }
  return "unknown";
}

Figure figure_from_name(std::string_view name) {
  if (name == "fig1") return Figure::kFig1;
  if (name == "fig2") return Figure::kFig2;
  if (name == "fig3") return Figure::kFig3;
  if (name == "thm21") return Figure::kThm21;
  throw ConfigError("figure: unknown value '" + std::string(name) +
                    "' (expected fig1, fig2, fig3 or thm21)");
}

ExperimentSpec ExperimentSpec::Defaults(Figure figure) {
  ExperimentSpec spec;
  spec.figure = figure;
  switch (figure) {
    case Figure::kFig1:
      spec.n_values = {100, 1000};
      spec.ell_values = range(0, 5);
      spec.r_values = {0};
      break;
    case Figure::kFig2:
      spec.n_values = {200};
      spec.ell_values = range(0, 3);
      spec.r_values = range(0, 6);
      break;
    case Figure::kFig3:
      spec.n_values = {200};
      spec.ell_values = {2};
      spec.r_values = range(0, 6);
      spec.xi = 1.0;
      break;
    case Figure::kThm21:
      spec.n_values = {10000};
      spec.replicates = 5000;
      spec.ell_values = range(1, 4);
      spec.r_values = {0};
      break;
  }
  return spec;
}

void ExperimentSpec::Validate() const {
  if (p < 2) throw ConfigError("p: must be >= 2");
  if (replicates < 100) throw ConfigError("M: must be >= 100");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
  if (!(xi > 0.0)) throw ConfigError("xi: must be > 0");
  if (critical_draws < 1000) throw ConfigError("critical_draws: must be >= 1000");
  if (n_values.empty()) throw ConfigError("n: at least one sample size is required");
  for (int n : n_values) {
    if (n < 2) throw ConfigError("n: sample sizes must be >= 2");
  }
  int ell_max = 0;
  int ell_min = 0;
  switch (figure) {
    case Figure::kFig1:
      ell_max = 5;
      break;
    case Figure::kFig2:
      ell_max = 3;
      break;
    case Figure::kFig3:
      ell_min = ell_max = 2;
      break;
    case Figure::kThm21:
      ell_min = 1;
      ell_max = 4;
      break;
  }
  if (ell_values.empty()) throw ConfigError("ell: at least one value is required");
  for (int ell : ell_values) {
    if (ell < ell_min || ell > ell_max) {
      throw ConfigError("ell: value " + std::to_string(ell) + " outside " +
                        std::to_string(ell_min) + ".." + std::to_string(ell_max) + " for " +
                        std::string(figure_name(figure)));
    }
  }
  for (int r : r_values) {
    if (r < 0 || r > 6) throw ConfigError("r: values must lie in 0..6");
  }
  if ((figure == Figure::kFig2 || figure == Figure::kFig3) && r_values.empty()) {
    throw ConfigError("r: at least one value is required");
  }
  if (figure == Figure::kFig3 && xi != 1.0) throw ConfigError("xi: fig3 fixes xi = 1");
  try {
    RadialFunction::ByName(radial);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("radial: ") + e.what());
  }
}

const ResultRow* ExperimentResult::Find(int ell, int r, std::string_view test, int n) const {
  for (const ResultRow& row : rows) {
    if (row.ell == ell && row.r == r && row.test == test && row.n == n) return &row;
  }
  return nullptr;
}

void ExperimentResult::WriteCsv(std::ostream& out) const {
  out << kCsvHeader << '\n';
  for (const ResultRow& row : rows) {
    out << row.figure << ',' << row.ell << ',' << row.r << ',' << row.test << ',' << row.n << ','
        << row.replicates << ',' << format_g6(row.alpha) << ',' << format_g6(row.reject_freq) << ','
        << (row.stderr_value ? format_g6(*row.stderr_value) : "") << ','
        << (row.asym_power ? format_g6(*row.asym_power) : "") << ',' << row.seed << '\n';
  }
}

ExperimentResult run_figure1(const ExperimentSpec& spec, const RunOptions& options,
                             QuantileCache*) {
  spec.Validate();
  const int p = spec.p;
  const RadialFunction f = RadialFunction::ByName(spec.radial);
  const UnitVector theta0 = pole(p);
  const double critical = chi2_quantile(1.0 - spec.alpha, p - 1);
  const std::uint64_t tag = figure_tag(spec.figure);
  ExperimentResult result;
  for (int n : spec.n_values) {
    for (int ell : spec.ell_values) {
      const double exponent = ell / 6.0;
      const double eta = std::pow(static_cast<double>(n), -exponent);
      const double kappa = kappa_for(p, f, eta, spec.xi);
      const auto sampler = make_sampler(RotSymModel(theta0, kappa, f));

      ReplicateJob job;
      job.sampler = sampler.get();
      job.n = n;
      job.replicates = spec.replicates;
      job.seed = spec.seed;
      job.labels = {tag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(ell), 0,
                    kBlockSimulate};
      job.outputs = 2;
      job.evaluate = [&theta0](const Matrix&, const SampleSummary& s, double* out) {
        out[0] = watson_statistic(s, theta0);
        out[1] = wald_statistic(s, theta0);
      };
      const auto counts = count_rejections(run_replicates(job, options), 2, {critical, critical});

      // Under the null the Watson limit is chi^2_{p-1} in every regime; the
      // Wald limit is the mixture law from contiguity on.
      const RegimeSpec regime = RegimeSpec::FromExponent(exponent, spec.xi, 1.0 / p);
      RngStream power_rng =
          derive_stream(spec.seed, {tag, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(ell), 0, kBlockAsymptotic});
      const double wald_power =
          wald_asymptotic_power_mc(regime, 0.0, p, spec.alpha, spec.critical_draws, power_rng);
      result.rows.push_back(make_row(spec, ell, 0, "watson", n, counts[0], spec.alpha));
      result.rows.push_back(make_row(spec, ell, 0, "wald", n, counts[1], wald_power));
    }
  }
  return result;
}

ExperimentResult run_figure2(const ExperimentSpec& spec, const RunOptions& options,
                             QuantileCache* cache) {
  spec.Validate();
  const int p = spec.p;
  const RadialFunction f = RadialFunction::ByName(spec.radial);
  const UnitVector theta0 = pole(p);
  const std::uint64_t tag = figure_tag(spec.figure);
  const double chi2_critical = chi2_quantile(1.0 - spec.alpha, p - 1);

  RngStream contiguity_rng = derive_stream(spec.seed, {tag, 0, 2, 0, kBlockCritical});
  const double contiguity_critical =
      mc_critical_value(LimitLaw::WaldMixture(p - 1, spec.xi), spec.alpha, spec.critical_draws,
                        contiguity_rng, cache);
  RngStream strict_rng = derive_stream(spec.seed, {tag, 0, 3, 0, kBlockCritical});
  const double strict_critical = mc_critical_value(LimitLaw::WaldMixture(p - 1, 0.0), spec.alpha,
                                                   spec.critical_draws, strict_rng, cache);
  const std::vector<double> critical = {chi2_critical, chi2_critical, contiguity_critical,
                                        strict_critical};
  const char* names[] = {"watson", "wald", "wald_contiguity", "wald_strict"};

  ExperimentResult result;
  for (int n : spec.n_values) {
    for (int ell : spec.ell_values) {
      const double exponent = ell / 4.0;
      const double eta = std::pow(static_cast<double>(n), -exponent);
      const double kappa = kappa_for(p, f, eta, spec.xi);
      const double e2_tilde = moments(RotSymModel(theta0, kappa, f)).e2_tilde;
      const RegimeSpec regime = RegimeSpec::FromExponent(exponent, spec.xi, e2_tilde);
      for (int r : spec.r_values) {
        const UnitVector theta = local_alternative(ell, r, n, theta0);
        const auto sampler = make_sampler(RotSymModel(theta, kappa, f));
        ReplicateJob job;
        job.sampler = sampler.get();
        job.n = n;
        job.replicates = spec.replicates;
        job.seed = spec.seed;
        job.labels = {tag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(ell),
                      static_cast<std::uint64_t>(r), kBlockSimulate};
        job.outputs = 4;
        job.evaluate = [&theta0](const Matrix&, const SampleSummary& s, double* out) {
          out[0] = watson_statistic(s, theta0);
          out[1] = wald_statistic(s, theta0);
          out[2] = out[1];
          out[3] = out[1];
        };
        const auto counts = count_rejections(run_replicates(job, options), 4, critical);

        // Limit size of tau: r/3 for the shrinking alternatives, the chord
        // 2 sin(r pi/12) for the fixed ones.
        const double tau_norm = ell <= 1 ? r / 3.0 : 2.0 * std::sin(r * std::numbers::pi / 12.0);
        const double watson_power =
            asymptotic_power(PowerTest::kWatson, regime, tau_norm, p, spec.alpha);
        RngStream power_rng = derive_stream(
            spec.seed, {tag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(ell),
                        static_cast<std::uint64_t>(r), kBlockAsymptotic});
        const double wald_power =
            wald_asymptotic_power_mc(regime, tau_norm, p, spec.alpha, kWaldPowerDraws, power_rng);
        const std::optional<double> asym[] = {watson_power, wald_power, std::nullopt, std::nullopt};
        for (int k = 0; k < 4; ++k) {
          result.rows.push_back(make_row(spec, ell, r, names[k], n, counts[k], asym[k]));
        }
      }
    }
  }
  return result;
}

ExperimentResult run_figure3(const ExperimentSpec& spec, const RunOptions& options,
                             QuantileCache*) {
  spec.Validate();
  const int p = spec.p;
  const RadialFunction f = RadialFunction::ByName(spec.radial);
  const UnitVector theta0 = pole(p);
  const std::uint64_t tag = figure_tag(spec.figure);
  const std::vector<double> critical = {chi2_quantile(1.0 - spec.alpha, p - 1),
                                        chi2_quantile(1.0 - spec.alpha, p)};
  const double xi = spec.xi;
  ExperimentResult result;
  for (int n : spec.n_values) {
    const double kappa = kappa_for(p, f, 1.0 / std::sqrt(static_cast<double>(n)), xi);
    const RegimeSpec regime = RegimeSpec::FromExponent(0.5, xi);
    for (int r : spec.r_values) {
      const UnitVector theta = local_alternative(2, r, n, theta0);
      const auto sampler = make_sampler(RotSymModel(theta, kappa, f));
      ReplicateJob job;
      job.sampler = sampler.get();
      job.n = n;
      job.replicates = spec.replicates;
      job.seed = spec.seed;
      job.labels = {tag, static_cast<std::uint64_t>(n), 2, static_cast<std::uint64_t>(r),
                    kBlockSimulate};
      job.outputs = 2;
      job.evaluate = [&theta0, xi](const Matrix&, const SampleSummary& s, double* out) {
        out[0] = watson_statistic(s, theta0);
        out[1] = oracle_statistic(s, theta0, xi);
      };
      const auto counts = count_rejections(run_replicates(job, options), 2, critical);
      const double tau_norm = 2.0 * std::sin(r * std::numbers::pi / 12.0);
      result.rows.push_back(
          make_row(spec, 2, r, "watson", n, counts[0],
                   asymptotic_power(PowerTest::kWatson, regime, tau_norm, p, spec.alpha)));
      result.rows.push_back(
          make_row(spec, 2, r, "oracle", n, counts[1],
                   asymptotic_power(PowerTest::kOracle, regime, tau_norm, p, spec.alpha)));
    }
  }
  return result;
}

ExperimentResult run_thm21_study(const ExperimentSpec& spec, const RunOptions& options) {
  spec.Validate();
  const int p = spec.p;
  const RadialFunction f = RadialFunction::ByName(spec.radial);
  const UnitVector theta = pole(p);
  const std::uint64_t tag = figure_tag(spec.figure);
  constexpr RegimeKind kinds[] = {RegimeKind::kAwayFromUniformity, RegimeKind::kBeyondContiguity,
                                  RegimeKind::kUnderContiguity, RegimeKind::kStrictContiguity};
  ExperimentResult result;
  for (int n : spec.n_values) {
    for (int index : spec.ell_values) {
      RegimeSpec regime = RegimeSpec::Canonical(kinds[index - 1], spec.xi);
      const double kappa = kappa_for(p, f, regime.eta(n), spec.xi);
      regime.e2_tilde = moments(RotSymModel(theta, kappa, f)).e2_tilde;
      const SphericalMeanLimit limit = spherical_mean_limit(regime, p);
      const bool gaussian = !limit.law.has_value();
      const int replicates = gaussian ? spec.replicates : std::max(spec.replicates, 10000);
      const auto sampler = make_sampler(RotSymModel(theta, kappa, f));

      ReplicateJob job;
      job.sampler = sampler.get();
      job.n = n;
      job.replicates = replicates;
      job.seed = spec.seed;
      job.labels = {tag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(index), 0,
                    kBlockSimulate};
      job.outputs = p;
      job.evaluate = [](const Matrix&, const SampleSummary& s, double* out) {
        const UnitVector estimate = spherical_mean(s);
        for (int k = 0; k < s.p; ++k) out[k] = estimate[k];
      };
      const std::vector<double> values = run_replicates(job, options);

      if (gaussian) {
        const double scale = limit.scale(n);
        Matrix cov = Matrix::Zero(p, p);
        Vector err(p);
        int used = 0;
        for (int i = 0; i < replicates; ++i) {
          for (int k = 0; k < p; ++k) err[k] = scale * (values[i * p + k] - theta[k]);
          if (!err.allFinite()) continue;
          cov.noalias() += err * err.transpose();
          ++used;
        }
        cov /= used;
        const Matrix target = limit.covariance(theta);
        const double rel = (cov - target).norm() / target.norm();
        result.rows.push_back(metric_row(spec, index, "cov_relerr", n, replicates, rel));
        continue;
      }

      std::vector<double> u;
      u.reserve(replicates);
      for (int i = 0; i < replicates; ++i) {
        double dot = 0.0;
        for (int k = 0; k < p; ++k) dot += values[i * p + k] * theta[k];
        if (std::isfinite(dot)) u.push_back(dot);
      }
      double distance = 0.0;
      double n_eff = static_cast<double>(u.size());
      if (limit.law->kind == LawKind::kUniformSphere) {
        const RotSymModel uniform(theta, 0.0, f);
        distance = ks_distance(u, [&uniform](double t) { return marginal_u_cdf(uniform, t); });
      } else {
        RngStream law_rng = derive_stream(
            spec.seed,
            {tag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(index), 0, kBlockLaw});
        const Matrix draws = sample_law_directions(*limit.law, theta, spec.critical_draws, law_rng);
        std::vector<double> reference(draws.cols());
        for (Eigen::Index j = 0; j < draws.cols(); ++j)
          reference[j] = draws.col(j).dot(theta.coords());
        const double m = static_cast<double>(reference.size());
        n_eff = n_eff * m / (n_eff + m);
        distance = ks_distance(u, std::move(reference));
      }
      result.rows.push_back(metric_row(spec, index, "ks_distance", n, replicates, distance));
      result.rows.push_back(
          metric_row(spec, index, "ks_pvalue", n, replicates, ks_p_value(distance, n_eff)));
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options,
                                QuantileCache* cache) {
  switch (spec.figure) {
    case Figure::kFig1:
      return run_figure1(spec, options, cache);
    case Figure::kFig2:
      return run_figure2(spec, options, cache);
    case Figure::kFig3:
      return run_figure3(spec, options, cache);
    case Figure::kThm21:
      return run_thm21_study(spec, options);
  }
  throw ConfigError("figure: unknown");
}

WaldLawCheck run_wald_law_check(int p, int n, int replicates, int law_draws, double xi,
                                std::uint64_t seed, const RunOptions& options) {
  const RadialFunction f = RadialFunction::Fvml();
  const UnitVector theta0 = pole(p);
  WaldLawCheck check;
  const double exponents[] = {0.5, 1.0};
  for (int k = 0; k < 2; ++k) {
    const double eta = std::pow(static_cast<double>(n), -exponents[k]);
    const double kappa = kappa_for(p, f, eta, xi);
    const FvmlSampler sampler(theta0, kappa);
    ReplicateJob job;
    job.sampler = &sampler;
    job.n = n;
    job.replicates = replicates;
    job.seed = seed;
    job.labels = {kTagWaldLaw, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k), 0,
                  kBlockSimulate};
    job.outputs = 1;
    job.evaluate = [&theta0](const Matrix&, const SampleSummary& s, double* out) {
      out[0] = wald_statistic(s, theta0);
    };
    std::vector<double> values = run_replicates(job, options);
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    RngStream law_rng = derive_stream(seed, {kTagWaldLaw, static_cast<std::uint64_t>(n),
                                             static_cast<std::uint64_t>(k), 0, kBlockLaw});
    const double lambda = k == 0 ? xi : 0.0;
    const double distance = ks_distance(
        std::move(values), sample_law(LimitLaw::WaldMixture(p - 1, lambda), law_draws, law_rng));
    (k == 0 ? check.ks_contiguity : check.ks_strict) = distance;
  }
  return check;
}

std::vector<LanCheckRow> run_lan_check(int p, const std::vector<int>& n_values, int replicates,
                                       double xi, std::uint64_t seed, const RunOptions& options) {
  const RadialFunction f = RadialFunction::Fvml();
  const UnitVector theta0 = pole(p);
  std::vector<LanCheckRow> rows;
  constexpr RegimeKind kinds[] = {RegimeKind::kUnderContiguity, RegimeKind::kBeyondContiguity};
  for (int k = 0; k < 2; ++k) {
    const RegimeSpec regime = RegimeSpec::Canonical(kinds[k], xi);
    for (int n : n_values) {
      const double eta = regime.eta(n);
      const double kappa = kappa_for(p, f, eta, xi);
      const double nu = regime.kind == RegimeKind::kUnderContiguity ? 1.0 : eta;
      Vector direction = theta0.coords();
      if (regime.kind == RegimeKind::kUnderContiguity) {
        direction = UnitVector::Axis(p, 0).coords();
      } else {
        direction[0] += nu;
      }
      const UnitVector theta1 = UnitVector::Normalize(direction);
      const Vector tau = (theta1.coords() - theta0.coords()) / nu;

      const FvmlSampler sampler(theta0, kappa);
      ReplicateJob job;
      job.sampler = &sampler;
      job.n = n;
      job.replicates = replicates;
      job.seed = seed;
      job.labels = {kTagLan, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k), 0,
                    kBlockSimulate};
      job.outputs = 1;
      job.evaluate = [&](const Matrix&, const SampleSummary& s, double* out) {
        const double log_lr = fvml_log_likelihood_ratio(s, theta1, theta0, kappa);
        const LanPair lan = lan_central_sequence(s, theta0, regime);
        const double quadratic = tau.dot(lan.delta) - 0.5 * tau.dot(lan.gamma * tau);
        out[0] = std::abs(log_lr - quadratic);
      };
      const std::vector<double> errors = run_replicates(job, options);
      double sum = 0.0, sum_sq = 0.0;
      for (double e : errors) {
        sum += e;
        sum_sq += e * e;
      }
      const double m = static_cast<double>(errors.size());
      LanCheckRow row;
      row.regime = regime.kind;
      row.n = n;
      row.mean_abs_error = sum / m;
      row.stderr_value =
          std::sqrt(std::max(0.0, sum_sq / m - row.mean_abs_error * row.mean_abs_error) / m);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace sphloc
