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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "sphloc/errors.h"

namespace sphloc {
namespace {

ExperimentSpec small_spec(Figure figure) {
  ExperimentSpec spec = ExperimentSpec::Defaults(figure);
  spec.replicates = 200;
  spec.critical_draws = 20000;
  return spec;
}

std::string csv(const ExperimentResult& result) {
  std::ostringstream out;
  result.WriteCsv(out);
  return out.str();
}

void expect_bookkeeping(const ExperimentResult& result) {
  for (const ResultRow& row : result.rows) {
    EXPECT_GE(row.reject_freq, 0.0);
    EXPECT_LE(row.reject_freq, 1.0);
    EXPECT_EQ(row.reject_freq, static_cast<double>(row.rejections) / row.replicates);
    ASSERT_TRUE(row.stderr_value.has_value());
    EXPECT_DOUBLE_EQ(*row.stderr_value,
                     std::sqrt(row.reject_freq * (1.0 - row.reject_freq) / row.replicates));
  }
}

TEST(FigureNameTest, RoundTrip) {
  for (Figure f : {Figure::kFig1, Figure::kFig2, Figure::kFig3, Figure::kThm21}) {
    EXPECT_EQ(figure_from_name(figure_name(f)), f);
  }
  EXPECT_THROW(figure_from_name("fig9"), ConfigError);
}

TEST(ExperimentSpecTest, DefaultsMatchFigures) {
  const ExperimentSpec fig1 = ExperimentSpec::Defaults(Figure::kFig1);
  EXPECT_EQ(fig1.n_values, (std::vector<int>{100, 1000}));
  EXPECT_EQ(fig1.ell_values, (std::vector<int>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(fig1.replicates, 10000);
  EXPECT_EQ(fig1.seed, kDefaultSeed);
  const ExperimentSpec fig2 = ExperimentSpec::Defaults(Figure::kFig2);
  EXPECT_EQ(fig2.n_values, (std::vector<int>{200}));
  EXPECT_EQ(fig2.r_values, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
  const ExperimentSpec thm = ExperimentSpec::Defaults(Figure::kThm21);
  EXPECT_EQ(thm.replicates, 5000);
  EXPECT_NO_THROW(fig1.Validate());
  EXPECT_NO_THROW(fig2.Validate());
  EXPECT_NO_THROW(ExperimentSpec::Defaults(Figure::kFig3).Validate());
  EXPECT_NO_THROW(thm.Validate());
}

TEST(ExperimentSpecTest, ValidateRejectsBadFields) {
  ExperimentSpec spec = ExperimentSpec::Defaults(Figure::kFig2);
  spec.replicates = 99;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ExperimentSpec::Defaults(Figure::kFig2);
  spec.alpha = 1.0;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ExperimentSpec::Defaults(Figure::kFig2);
  spec.ell_values = {4};
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ExperimentSpec::Defaults(Figure::kFig2);
  spec.r_values = {7};
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ExperimentSpec::Defaults(Figure::kFig3);
  spec.xi = 2.0;
  EXPECT_THROW(spec.Validate(), ConfigError);
  spec = ExperimentSpec::Defaults(Figure::kFig1);
  spec.radial = "cauchy";
  EXPECT_THROW(spec.Validate(), ConfigError);
}

TEST(ValidateTest, MessagesNameTheField) {
  ExperimentSpec spec = ExperimentSpec::Defaults(Figure::kFig1);
  spec.replicates = 5;
  try {
    spec.Validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("M"), std::string::npos) << e.what();
  }
}

TEST(Figure1Test, ShapeAndBookkeeping) {
  ExperimentSpec spec = small_spec(Figure::kFig1);
  spec.n_values = {100};
  const ExperimentResult result = run_figure1(spec);
  EXPECT_EQ(result.rows.size(), 12u);
  expect_bookkeeping(result);
  for (int ell = 0; ell <= 5; ++ell) {
    const ResultRow* watson = result.Find(ell, 0, "watson", 100);
    ASSERT_NE(watson, nullptr);
    ASSERT_TRUE(watson->asym_power.has_value());
    EXPECT_EQ(*watson->asym_power, 0.05);
    const ResultRow* wald = result.Find(ell, 0, "wald", 100);
    ASSERT_NE(wald, nullptr);
    ASSERT_TRUE(wald->asym_power.has_value());
    EXPECT_LE(*wald->asym_power, 0.05 + 0.005);
  }
}

TEST(Figure1Test, DeterministicAcrossWorkers) {
  ExperimentSpec spec = small_spec(Figure::kFig1);
  spec.n_values = {100};
  spec.ell_values = {0, 3};
  RunOptions serial;
  serial.serial = true;
  RunOptions parallel;
  parallel.workers = 3;
  EXPECT_EQ(csv(run_figure1(spec, serial)), csv(run_figure1(spec, parallel)));
  EXPECT_EQ(csv(run_figure1(spec, parallel)), csv(run_figure1(spec, parallel)));
}

TEST(Figure1Test, SeedChangesResults) {
  ExperimentSpec spec = small_spec(Figure::kFig1);
  spec.n_values = {100};
  spec.ell_values = {0};
  const std::string a = csv(run_figure1(spec));
  spec.seed += 1;
  EXPECT_NE(a, csv(run_figure1(spec)));
}

TEST(Figure2Test, ShapeAndTests) {
  ExperimentSpec spec = small_spec(Figure::kFig2);
  spec.ell_values = {2};
  spec.r_values = {0, 3};
  const ExperimentResult result = run_figure2(spec);
  expect_bookkeeping(result);
  std::set<std::string> tests;
  for (const ResultRow& row : result.rows) tests.insert(row.test);
  EXPECT_EQ(tests, (std::set<std::string>{"watson", "wald", "wald_contiguity", "wald_strict"}));
  const ResultRow* watson = result.Find(2, 3, "watson", 200);
  ASSERT_NE(watson, nullptr);
  EXPECT_NEAR(*watson->asym_power, 0.13271, 1e-4);
}

TEST(Figure3Test, ShapeAndAsymptotics) {
  ExperimentSpec spec = small_spec(Figure::kFig3);
  spec.r_values = {0, 6};
  const ExperimentResult result = run_figure3(spec);
  EXPECT_EQ(result.rows.size(), 4u);
  expect_bookkeeping(result);
  EXPECT_NEAR(*result.Find(2, 6, "oracle", 200)->asym_power, 0.35853, 1e-4);
  EXPECT_NEAR(*result.Find(2, 6, "watson", 200)->asym_power, 0.05, 1e-12);
}

TEST(Thm21Test, RowsPerRegime) {
  ExperimentSpec spec = ExperimentSpec::Defaults(Figure::kThm21);
  spec.n_values = {200};
  spec.replicates = 200;
  spec.critical_draws = 20000;
  const ExperimentResult result = run_thm21_study(spec);
  for (int regime : {1, 2}) {
    const ResultRow* row = result.Find(regime, 0, "cov_relerr", 200);
    ASSERT_NE(row, nullptr) << regime;
    EXPECT_GE(row->reject_freq, 0.0);
  }
  for (int regime : {3, 4}) {
    const ResultRow* ks = result.Find(regime, 0, "ks_distance", 200);
    const ResultRow* pv = result.Find(regime, 0, "ks_pvalue", 200);
    ASSERT_NE(ks, nullptr);
    ASSERT_NE(pv, nullptr);
    EXPECT_GE(ks->replicates, 10000);
    EXPECT_LT(ks->reject_freq, 0.05);
  }
}

TEST(CsvTest, HeaderAndFormatting) {
  ExperimentResult result;
  ResultRow row;
  row.figure = "fig2";
  row.ell = 2;
  row.r = 3;
  row.test = "watson";
  row.n = 200;
  row.replicates = 10000;
  row.alpha = 0.05;
  row.reject_freq = 0.1234567;
  row.stderr_value = 0.0032891;
  row.seed = 20160309;
  result.rows.push_back(row);
  row.test = "wald";
  row.stderr_value.reset();
  row.asym_power = 0.5;
  result.rows.push_back(row);
  EXPECT_EQ(csv(result), std::string(kCsvHeader) +
                             "\nfig2,2,3,watson,200,10000,0.05,0.123457,0.0032891,,20160309\n"
                             "fig2,2,3,wald,200,10000,0.05,0.123457,,0.5,20160309\n");
}

TEST(RunExperimentTest, DispatchesByFigure) {
  ExperimentSpec spec = small_spec(Figure::kFig3);
  spec.r_values = {0};
  EXPECT_EQ(csv(run_experiment(spec)), csv(run_figure3(spec)));
}

TEST(WaldLawCheckTest, SmallRunIsClose) {
  const WaldLawCheck check = run_wald_law_check(3, 200, 2000, 100000, 1.0, 5);
  EXPECT_LT(check.ks_contiguity, 0.06);
  EXPECT_LT(check.ks_strict, 0.06);
}

TEST(LanCheckTest, ErrorsAreSmallAndFinite) {
  const std::vector<LanCheckRow> rows = run_lan_check(3, {1000}, 200, 1.0, 9);
  ASSERT_EQ(rows.size(), 2u);
  for (const LanCheckRow& row : rows) {
    EXPECT_TRUE(std::isfinite(row.mean_abs_error));
    EXPECT_LT(row.mean_abs_error, 0.2) << regime_name(row.regime);
    EXPECT_GT(row.stderr_value, 0.0);
  }
}

}  // namespace
}  // namespace sphloc
