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

// Monte-Carlo studies: rejection frequencies under drifting concentrations
// (fig1), local alternatives (fig2), Watson against the oracle test (fig3),
// and the spherical-mean limit laws (thm21). Also the Wald-law and LAN
// checks used by the acceptance suite.

#ifndef SPHLOC_MC_H_
#define SPHLOC_MC_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sphloc/limits.h"
#include "sphloc/mc_kernels.h"
#include "sphloc/model.h"

namespace sphloc {

enum class Figure { kFig1, kFig2, kFig3, kThm21 };

std::string_view figure_name(Figure figure);
// Throws ConfigError for unknown names.
Figure figure_from_name(std::string_view name);

struct ExperimentSpec {
  Figure figure = Figure::kFig1;
  int p = 3;
  std::vector<int> n_values;
  int replicates = 10000;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  double xi = 1.0;
  std::vector<int> ell_values;
  std::vector<int> r_values;
  std::string radial = "fvml";
  int critical_draws = kDefaultCriticalDraws;

  // fig1: n {100, 1000}, ell 0..5. fig2: n 200, ell 0..3, r 0..6.
  // fig3: n 200, r 0..6, xi 1. thm21: n 10^4, M 5000, regimes 1..4.
  static ExperimentSpec Defaults(Figure figure);
  // Throws ConfigError naming the offending field.
  void Validate() const;
};

struct ResultRow {
  std::string figure;
  int ell = 0;
  int r = 0;
  std::string test;
  int n = 0;
  int replicates = 0;
  double alpha = 0.05;
  // Rejection frequency, or the metric value for thm21 rows.
  double reject_freq = 0.0;
  std::optional<double> stderr_value;
  std::optional<double> asym_power;
  std::uint64_t seed = 0;
  std::int64_t rejections = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;

  // nullptr when absent.
  const ResultRow* Find(int ell, int r, std::string_view test, int n) const;
  // Header figure,ell,r,test,n,M,alpha,reject_freq,stderr,asym_power,seed;
  // floats with 6 significant digits, absent values left empty.
  void WriteCsv(std::ostream& out) const;
};

inline constexpr const char* kCsvHeader =
    "figure,ell,r,test,n,M,alpha,reject_freq,stderr,asym_power,seed";

ExperimentResult run_figure1(const ExperimentSpec& spec, const RunOptions& options = {},
                             QuantileCache* cache = nullptr);
ExperimentResult run_figure2(const ExperimentSpec& spec, const RunOptions& options = {},
                             QuantileCache* cache = nullptr);
ExperimentResult run_figure3(const ExperimentSpec& spec, const RunOptions& options = {},
                             QuantileCache* cache = nullptr);
// Rows: ell = regime index (1 away, 2 beyond, 3 contiguity, 4 strict), r = 0,
// test = metric name (cov_relerr, ks_distance, ks_pvalue), reject_freq =
// metric value. Regimes 3 and 4 use at least 10^4 replicates.
ExperimentResult run_thm21_study(const ExperimentSpec& spec, const RunOptions& options = {});
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {},
                                QuantileCache* cache = nullptr);

struct WaldLawCheck {
  double ks_contiguity = 0.0;  // S_n under kappa_n ~ sqrt(p/n) xi vs WaldMixture(lambda = xi)
  double ks_strict = 0.0;      // S_n under kappa_n ~ sqrt(p) xi / n vs WaldMixture(lambda = 0)
};

WaldLawCheck run_wald_law_check(int p, int n, int replicates, int law_draws, double xi,
                                std::uint64_t seed, const RunOptions& options = {});

struct LanCheckRow {
  RegimeKind regime = RegimeKind::kUnderContiguity;
  int n = 0;
  double mean_abs_error = 0.0;
  double stderr_value = 0.0;
};

// Mean |log-LR - (tau'Delta - tau'Gamma tau / 2)| for FvML samples drawn at
// theta0 with kappa_n calibrated to e1 = eta_n xi / sqrt(p). Contiguity uses
// theta1 = (1, 0, ..., 0) (nu = 1); beyond contiguity eta_n = nu_n = n^{-1/4}
// and theta1 = normalize(theta0 + nu_n e_1).
std::vector<LanCheckRow> run_lan_check(int p, const std::vector<int>& n_values, int replicates,
                                       double xi, std::uint64_t seed,
                                       const RunOptions& options = {});

}  // namespace sphloc

#endif  // SPHLOC_MC_H_
