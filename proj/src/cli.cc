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

#include "sphloc/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sphloc/errors.h"
#include "sphloc/io.h"
#include "sphloc/limits.h"
#include "sphloc/mc.h"
#include "sphloc/model.h"
#include "sphloc/specfn.h"
#include "sphloc/stats.h"
#include "sphloc/zones.h"

namespace sphloc::cli {
namespace {

std::string g6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(part, &used));
      if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw DomainError(flag + ": '" + part + "' is not a number");
    }
  }
  return values;
}

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_numbers(text, "--tau-grid");
  std::string spec = text;
  for (char& c : spec) {
    if (c == ':') c = ',';
  }
  const auto parts = parse_numbers(spec, "--tau-grid");
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw DomainError("--tau-grid: expected lo:hi:step with step > 0 and hi >= lo");
  }
  std::vector<double> grid;
  const auto steps = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (int i = 0; i <= steps; ++i) grid.push_back(parts[0] + i * parts[2]);
  return grid;
}

class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw ConfigError("--out: cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void echo_seed(std::ostream& err, std::uint64_t seed) { err << "sphloc: seed " << seed << '\n'; }

struct SimulateFlags {
  std::string figure;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;
  bool fast = false;
  bool serial = false;
  std::optional<int> replicates;
  std::string cache;
};

struct TestFlags {
  std::string data;
  std::string format = "cartesian";
  int p = 3;
  std::string theta0;
  std::string test = "watson";
  double alpha = 0.05;
};

struct ZoneFlags {
  std::string data;
  std::string format = "cartesian";
  int p = 3;
  std::string test = "watson";
  double level = 0.95;
  int resolution = kDefaultZoneResolution;
  std::string out;
  int workers = 0;
};

struct CalibrateFlags {
  int p = 3;
  std::string radial = "fvml";
  std::optional<double> e1;
  std::string regime;
};

struct PowerFlags {
  std::string regime = "contiguity";
  double xi = 1.0;
  int p = 3;
  double alpha = 0.05;
  std::string tau_grid = "0:2:0.25";
  double e2_tilde = 0.0;
  double rate = 0.25;
  std::string out;
};

struct QuantileFlags {
  std::string law = "waldmix";
  int df = 2;
  double lambda = 0.0;
  double nc = 0.0;
  double alpha = 0.05;
  int draws = kDefaultCriticalDraws;
  std::uint64_t seed = kDefaultSeed;
  std::string cache;
};

int do_simulate(const SimulateFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.figure.empty() && flags.config.empty()) {
    throw ConfigError("simulate: --figure or --config is required");
  }
  ExperimentSpec spec = flags.config.empty()
                            ? ExperimentSpec::Defaults(figure_from_name(flags.figure))
                            : load_experiment(flags.config);
  if (!flags.config.empty() && !flags.figure.empty() &&
      figure_from_name(flags.figure) != spec.figure) {
    throw ConfigError("figure: --figure disagrees with the config file");
  }
  if (flags.seed) spec.seed = *flags.seed;
  if (flags.fast) spec.replicates = kFastReplicates;
  if (flags.replicates) spec.replicates = *flags.replicates;
  spec.Validate();
  if (flags.workers < 0) throw ConfigError("workers: must be >= 0");
  echo_seed(err, spec.seed);

  QuantileCache cache;
  if (!flags.cache.empty()) cache.Load(flags.cache);
  RunOptions options;
  options.workers = flags.workers;
  options.serial = flags.serial;
  const ExperimentResult result = run_experiment(spec, options, &cache);
  if (!flags.cache.empty()) cache.Save(flags.cache);
  OutputTarget target(flags.out, out);
  result.WriteCsv(target.stream());
  return kExitOk;
}

int do_test(const TestFlags& flags, std::ostream& out) {
  const Sample sample = load_sample({flags.data, data_format_from_name(flags.format), flags.p});
  const auto coords = parse_numbers(flags.theta0, "--theta0");
  if (static_cast<int>(coords.size()) != sample.p()) {
    throw DomainError("--theta0: expected " + std::to_string(sample.p()) + " coordinates");
  }
  const UnitVector theta0 =
      UnitVector::Normalize(Eigen::Map<const Vector>(coords.data(), sample.p()));
  const ZoneTest test = zone_test_from_name(flags.test);
  const double statistic =
      test == ZoneTest::kWatson ? watson_statistic(sample, theta0) : wald_statistic(sample, theta0);
  const TestOutcome outcome =
      decide(statistic, LimitLaw::ChiSquare(sample.p() - 1), flags.alpha, flags.test);
  out << "test: " << outcome.test_name << '\n'
      << "n: " << sample.n() << '\n'
      << "statistic: " << g6(outcome.statistic) << '\n'
      << "critical_value: " << g6(outcome.critical_value) << '\n'
      << "p_value: " << g6(*outcome.p_value) << '\n'
      << "alpha: " << g6(outcome.alpha) << '\n'
      << "decision: " << (outcome.reject ? "reject" : "do not reject") << '\n';
  return kExitOk;
}

int do_zone(const ZoneFlags& flags, std::ostream& out, std::ostream& err) {
  if (flags.resolution < kCoarseZoneResolution) {
    err << "sphloc: warning: resolution " << flags.resolution
        << " is coarse; zone boundaries and components may be unreliable\n";
  }
  const Sample sample = load_sample({flags.data, data_format_from_name(flags.format), flags.p});
  RunOptions options;
  options.workers = flags.workers;
  const ConfidenceZone zone =
      invert_test(sample, zone_test_from_name(flags.test), flags.level, flags.resolution, options);
  if (!flags.out.empty()) {
    OutputTarget target(flags.out, out);
    write_zone_csv(zone, target.stream());
  }
  const auto preferred = std::count(zone.preferred.begin(), zone.preferred.end(), 1);
  out << "test: " << flags.test << '\n'
      << "level: " << g6(flags.level) << '\n'
      << "grid_points: " << zone.grid.size() << '\n'
      << "area_fraction: " << g6(zone_area_fraction(zone)) << '\n'
      << "components: " << zone.components.size() << '\n'
      << "preferred_points: " << preferred << '\n';
  return kExitOk;
}

int do_calibrate(const CalibrateFlags& flags, std::ostream& out) {
  const RadialFunction f = RadialFunction::ByName(flags.radial);
  double target = 0.0;
  if (flags.e1) {
    target = *flags.e1;
  } else if (!flags.regime.empty()) {
    // "ell/denominator,n": e1 = n^{-ell/denominator} / sqrt(p).
    const auto comma = flags.regime.find(',');
    const auto slash = flags.regime.find('/');
    if (comma == std::string::npos || slash == std::string::npos || slash > comma) {
      throw DomainError("--regime: expected ell/denominator,n such as 1/6,100");
    }
    const auto parts = parse_numbers(
        flags.regime.substr(0, slash) + "," + flags.regime.substr(slash + 1), "--regime");
    if (parts.size() != 3 || !(parts[1] > 0.0) || !(parts[2] >= 1.0)) {
      throw DomainError("--regime: expected ell/denominator,n such as 1/6,100");
    }
    target = std::pow(parts[2], -parts[0] / parts[1]) / std::sqrt(static_cast<double>(flags.p));
  } else {
    throw DomainError("calibrate: --e1 or --regime is required");
  }
  const double kappa = calibrate_kappa(flags.p, f, target);
  const Moments m = moments(RotSymModel(UnitVector::Axis(flags.p, flags.p - 1), kappa, f));
  out << "kappa: " << g6(kappa) << '\n'
      << "e1: " << g6(m.e1) << '\n'
      << "e2_tilde: " << g6(m.e2_tilde) << '\n'
      << "d: " << g6(m.d) << '\n';
  return kExitOk;
}

int do_power(const PowerFlags& flags, std::ostream& out) {
  const RegimeKind kind = regime_from_name(flags.regime);
  RegimeSpec regime = RegimeSpec::Canonical(kind, flags.xi, flags.e2_tilde);
  if (kind == RegimeKind::kBeyondContiguity) {
    regime = RegimeSpec::FromExponent(flags.rate, flags.xi, flags.e2_tilde);
    if (regime.kind != RegimeKind::kBeyondContiguity) {
      throw DomainError("--rate: beyond contiguity needs 0 < rate < 1/2");
    }
  }
  const std::vector<double> grid = parse_grid(flags.tau_grid);
  std::ostringstream table;
  table << "tau_norm,test,power\n";
  for (double tau : grid) {
    table << g6(tau) << ",watson,"
          << g6(asymptotic_power(PowerTest::kWatson, regime, tau, flags.p, flags.alpha)) << '\n';
    if (kind == RegimeKind::kUnderContiguity) {
      table << g6(tau) << ",oracle,"
            << g6(asymptotic_power(PowerTest::kOracle, regime, tau, flags.p, flags.alpha)) << '\n';
    }
  }
  OutputTarget target(flags.out, out);
  target.stream() << table.str();
  return kExitOk;
}

int do_quantile(const QuantileFlags& flags, std::ostream& out, std::ostream& err) {
  LimitLaw law;
  if (flags.law == "chi2") {
    law = LimitLaw::ChiSquare(flags.df);
  } else if (flags.law == "ncchi2") {
    law = LimitLaw::NoncentralChiSquare(flags.df, flags.nc);
  } else if (flags.law == "waldmix") {
    law = LimitLaw::WaldMixture(flags.df, flags.lambda, flags.nc);
  } else {
    throw DomainError("--law: expected chi2, ncchi2 or waldmix");
  }
  echo_seed(err, flags.seed);
  QuantileCache cache;
  if (!flags.cache.empty()) cache.Load(flags.cache);
  RngStream rng(flags.seed, 0);
  const double mc = mc_critical_value(law, flags.alpha, flags.draws, rng, &cache);
  if (!flags.cache.empty()) cache.Save(flags.cache);
  out << "law: " << law.descriptor() << '\n'
      << "alpha: " << g6(flags.alpha) << '\n'
      << "draws: " << flags.draws << '\n'
      << "mc_critical_value: " << g6(mc) << '\n';
  if (law.has_cdf()) out << "exact_critical_value: " << g6(law.quantile(1.0 - flags.alpha)) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Location tests, limit laws and confidence zones for directional data near "
      "uniformity.",
      "sphloc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo study and write CSV");
  simulate->add_option("--figure", sim.figure, "Study preset: fig1, fig2, fig3 or thm21");
  simulate->add_option("--config", sim.config, "key=value experiment file overriding the preset");
  simulate->add_option("--seed", sim.seed, "Master seed (default 20160309)");
  simulate->add_option("--out", sim.out, "Output CSV path (default: standard output)");
  simulate->add_option("--workers", sim.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  simulate->add_flag("--fast", sim.fast, "Use 2000 replicates per cell");
  simulate->add_flag("--serial", sim.serial, "Use the serial reference kernel");
  simulate->add_option("--replicates", sim.replicates, "Replicates per cell (overrides --fast)");
  simulate->add_option("--cache", sim.cache, "Quantile cache file to read and update");

  TestFlags tst;
  auto* test = app.add_subcommand("test", "Test a null location on a data file");
  test->add_option("--data", tst.data, "Data file")->required();
  test->add_option("--format", tst.format, "cartesian or angles_deg")->capture_default_str();
  test->add_option("--p", tst.p, "Dimension of the data")->capture_default_str();
  test->add_option("--theta0", tst.theta0, "Null location as comma-separated coordinates")
      ->required();
  test->add_option("--test", tst.test, "watson or wald")->capture_default_str();
  test->add_option("--alpha", tst.alpha, "Significance level")->capture_default_str();

  ZoneFlags zn;
  auto* zone = app.add_subcommand("zone", "Confidence zone by test inversion on a grid");
  zone->add_option("--data", zn.data, "Data file")->required();
  zone->add_option("--format", zn.format, "cartesian or angles_deg")->capture_default_str();
  zone->add_option("--p", zn.p, "Dimension of the data (2 or 3)")->capture_default_str();
  zone->add_option("--test", zn.test, "watson or wald")->capture_default_str();
  zone->add_option("--level", zn.level, "Confidence level")->capture_default_str();
  zone->add_option("--resolution", zn.resolution, "Number of grid points")->capture_default_str();
  zone->add_option("--out", zn.out, "Zone CSV path");
  zone->add_option("--workers", zn.workers, "Worker threads (0 = all cores)")
      ->capture_default_str();

  CalibrateFlags cal;
  auto* calibrate = app.add_subcommand("calibrate", "Concentration for a target mean e1");
  calibrate->add_option("--p", cal.p, "Dimension")->capture_default_str();
  calibrate->add_option("--radial", cal.radial, "fvml, linear or logistic")->capture_default_str();
  auto* e1_opt = calibrate->add_option("--e1", cal.e1, "Target E[X'theta]");
  calibrate
      ->add_option("--regime", cal.regime,
                   "ell/denominator,n for e1 = n^(-ell/denominator)/sqrt(p), e.g. 1/6,100")
      ->excludes(e1_opt);

  PowerFlags pw;
  auto* power = app.add_subcommand("power", "Asymptotic power curves on a grid of ||tau||");
  power->add_option("--regime", pw.regime, "away, beyond, contiguity or strict")
      ->capture_default_str();
  power->add_option("--xi", pw.xi, "Locality parameter")->capture_default_str();
  power->add_option("--p", pw.p, "Dimension")->capture_default_str();
  power->add_option("--alpha", pw.alpha, "Significance level")->capture_default_str();
  power->add_option("--tau-grid", pw.tau_grid, "lo:hi:step or comma-separated values")
      ->capture_default_str();
  power->add_option("--e2-tilde", pw.e2_tilde, "Var[X'theta] (away regime only)")
      ->capture_default_str();
  power->add_option("--rate", pw.rate, "Rate exponent (beyond regime only)")->capture_default_str();
  power->add_option("--out", pw.out, "Output CSV path (default: standard output)");

  QuantileFlags qf;
  auto* quantile = app.add_subcommand("limits-quantile", "Monte-Carlo critical value of a law");
  quantile->add_option("--law", qf.law, "chi2, ncchi2 or waldmix")->capture_default_str();
  quantile->add_option("--df", qf.df, "Degrees of freedom")->capture_default_str();
  quantile->add_option("--lambda", qf.lambda, "Mixture shift (waldmix)")->capture_default_str();
  quantile->add_option("--nc", qf.nc, "Non-centrality")->capture_default_str();
  quantile->add_option("--alpha", qf.alpha, "Upper tail probability")->capture_default_str();
  quantile->add_option("--draws", qf.draws, "Monte-Carlo draws")->capture_default_str();
  quantile->add_option("--seed", qf.seed, "Master seed")->capture_default_str();
  quantile->add_option("--cache", qf.cache, "Quantile cache file to read and update");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return do_simulate(sim, out, err);
    if (*test) return do_test(tst, out);
    if (*zone) return do_zone(zn, out, err);
    if (*calibrate) return do_calibrate(cal, out);
    if (*power) return do_power(pw, out);
    if (*quantile) return do_quantile(qf, out, err);
  } catch (const UsageError& e) {
    err << "sphloc: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "sphloc: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace sphloc::cli
