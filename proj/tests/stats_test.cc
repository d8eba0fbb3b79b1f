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

#include <gtest/gtest.h>

#include <cmath>

#include "sphloc/errors.h"
#include "sphloc/sampling.h"
#include "sphloc/specfn.h"
#include "test_util.h"

namespace sphloc {
namespace {

using testing::points;
using testing::unit;
using testing::vec;

const Sample& two_point_sample() {
  static const Sample sample(points({{1, 0}, {0, 1}}));
  return sample;
}

Sample random_sample(int p, int n, double kappa, RngStream& rng) {
  return Sample(sample_fvml(testing::random_unit(p, rng), kappa, n, rng));
}

TEST(SampleTest, RejectsNonUnitColumns) {
  EXPECT_THROW(Sample(points({{1, 0}, {0, 2}})), NormalizationError);
  EXPECT_NO_THROW(Sample(points({{1, 0}, {0, 1 + 1e-12}})));
}

TEST(SampleTest, SummaryHoldsMeanAndScatter) {
  const SampleSummary& s = two_point_sample();
  EXPECT_EQ(s.n, 2);
  EXPECT_EQ(s.p, 2);
  EXPECT_EQ(s.mean, vec({0.5, 0.5}));
  EXPECT_EQ(s.scatter, Matrix::Identity(2, 2) * 0.5);
}

TEST(SphericalMeanTest, SpecExamples) {
  const UnitVector theta = unit({0.2, 0.3, -0.9});
  Matrix same(3, 5);
  for (int j = 0; j < 5; ++j) same.col(j) = theta.coords();
  EXPECT_NEAR((spherical_mean(Sample(same)).coords() - theta.coords()).norm(), 0.0, 1e-15);
  const UnitVector m = spherical_mean(two_point_sample());
  EXPECT_NEAR(m[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(m[1], 1.0 / std::sqrt(2.0), 1e-15);
  Matrix opposite(3, 2);
  opposite.col(0) = theta.coords();
  opposite.col(1) = -theta.coords();
  EXPECT_THROW(spherical_mean(Sample(opposite)), DegenerateMean);
}

TEST(WatsonTest, SpecExamples) {
  const UnitVector e1 = unit({1, 0});
  EXPECT_NEAR(watson_statistic(two_point_sample(), e1), 1.0, 1e-15);
  EXPECT_NEAR(watson_statistic(Sample(points({{0, 1}, {0, 1}})), e1), 2.0, 1e-15);
}

TEST(WatsonTest, DegenerateDenominator) {
  const UnitVector e1 = unit({1, 0});
  EXPECT_THROW(watson_statistic(Sample(points({{1, 0}, {-1, 0}})), e1), DegenerateDenominator);
}

TEST(WaldTest, SpecExamples) {
  const UnitVector e1 = unit({1, 0});
  EXPECT_NEAR(wald_statistic(two_point_sample(), e1), 0.5, 1e-15);
  EXPECT_EQ(wald_statistic(Sample(points({{0, 1}, {0, 1}})), e1), 0.0);
  EXPECT_THROW(wald_statistic(Sample(points({{1, 0}, {1, 0}})), e1), DegenerateDenominator);
}

TEST(WaldTest, GreatCirclePathologyIsExact) {
  RngStream rng(201, 0);
  for (int i = 0; i < 50; ++i) {
    const Sample sample = random_sample(3, 30, 2.0, rng);
    const UnitVector hat = spherical_mean(sample);
    const Matrix frame = frame_to(hat);
    // Columns 0 and 1 of the frame span the great circle orthogonal to hat.
    for (double angle : {0.0, 0.7, 2.0, 4.5}) {
      const Vector dir = std::cos(angle) * frame.col(0) + std::sin(angle) * frame.col(1);
      const UnitVector theta = UnitVector::Normalize(dir - hat.dot(dir) * hat.coords());
      if (theta.dot(hat) != 0.0) continue;
      EXPECT_EQ(wald_statistic(sample, theta), 0.0);
    }
  }
  // A direction built to be exactly orthogonal in floating point.
  const Sample sample(points({{0.6, 0.0, 0.8}, {0.0, 0.6, 0.8}}));
  EXPECT_EQ(wald_statistic(sample, unit({1, -1, 0})), 0.0);
}

TEST(QStatisticsTest, SpecExamples) {
  const UnitVector e1 = unit({1, 0});
  EXPECT_NEAR(q_bc_statistic(two_point_sample(), e1), 1.0, 1e-15);
  EXPECT_NEAR(q_c_statistic(two_point_sample(), e1), 1.0, 1e-15);
  EXPECT_EQ(q_bc_statistic(Sample(points({{1, 0}, {1, 0}})), e1), 0.0);
  RngStream rng(202, 0);
  for (int i = 0; i < 20; ++i) {
    const Sample sample = random_sample(4, 25, 1.0, rng);
    const UnitVector theta0 = testing::random_unit(4, rng);
    EXPECT_EQ(q_bc_statistic(sample, theta0), q_c_statistic(sample, theta0));
  }
}

TEST(OracleStatisticTest, SpecExamples) {
  const UnitVector e1 = unit({1, 0});
  EXPECT_NEAR(oracle_statistic(two_point_sample(), e1, 1.0), 1.0, 1e-14);
  const SampleSummary& s = two_point_sample();
  EXPECT_NEAR(oracle_statistic(s, e1, 0.0), s.n * s.p * s.mean.squaredNorm(), 1e-14);
  // X_bar = (0.6, 0) = (xi / sqrt(np)) theta0 with xi = 1.2.
  EXPECT_NEAR(oracle_statistic(Sample(points({{0.6, 0.8}, {0.6, -0.8}})), e1, 1.2), 0.0, 1e-15);
}

TEST(StatisticsTest, AntipodalInvarianceIsExact) {
  RngStream rng(203, 0);
  for (int i = 0; i < 200; ++i) {
    const int p = 2 + i % 4;
    const Sample sample = random_sample(p, 20, 1.5, rng);
    const UnitVector theta0 = testing::random_unit(p, rng);
    EXPECT_EQ(watson_statistic(sample, theta0), watson_statistic(sample, -theta0));
    EXPECT_EQ(wald_statistic(sample, theta0), wald_statistic(sample, -theta0));
  }
}

TEST(StatisticsTest, RotationEquivariance) {
  RngStream rng(204, 0);
  for (int i = 0; i < 50; ++i) {
    const int p = 3 + i % 3;
    const Sample sample = random_sample(p, 40, 1.0, rng);
    const UnitVector theta0 = testing::random_unit(p, rng);
    const Matrix rotation = frame_to(testing::random_unit(p, rng));
    const Sample rotated(rotation * sample.points());
    const UnitVector rotated_theta = UnitVector::Normalize(rotation * theta0.coords());
    EXPECT_NEAR(watson_statistic(rotated, rotated_theta), watson_statistic(sample, theta0), 1e-10);
    EXPECT_NEAR(wald_statistic(rotated, rotated_theta), wald_statistic(sample, theta0), 1e-10);
    EXPECT_NEAR(q_bc_statistic(rotated, rotated_theta), q_bc_statistic(sample, theta0), 1e-10);
    EXPECT_NEAR(oracle_statistic(rotated, rotated_theta, 1.3),
                oracle_statistic(sample, theta0, 1.3), 1e-10);
  }
}

TEST(StatisticsTest, NonNegative) {
  RngStream rng(205, 0);
  for (int i = 0; i < 200; ++i) {
    const Sample sample = random_sample(3, 10, 0.5, rng);
    const UnitVector theta0 = testing::random_unit(3, rng);
    EXPECT_GE(watson_statistic(sample, theta0), 0.0);
    EXPECT_GE(wald_statistic(sample, theta0), 0.0);
    EXPECT_GE(q_bc_statistic(sample, theta0), 0.0);
    EXPECT_GE(oracle_statistic(sample, theta0, 1.0), 0.0);
  }
}

TEST(StatisticsTest, ScatterConcentratesOnSecondMoment) {
  const UnitVector theta = unit({1, 1, 0});
  const RotSymModel model(theta, 2.0, RadialFunction::Logistic());
  RngStream rng(206, 0);
  constexpr int n = 100000;
  const Matrix draws = make_sampler(model)->sample(n, rng);
  const Eigen::ArrayXd u2 = (theta.coords().transpose() * draws).transpose().array().square();
  const double sd = std::sqrt((u2 - u2.mean()).square().mean() / n);
  const Sample sample(draws);
  const double empirical = theta.coords().dot(sample.summary().scatter * theta.coords());
  EXPECT_NEAR(empirical, moments(model).e2, 5.0 * sd);
}

TEST(DecideTest, ChiSquareExamples) {
  const LimitLaw law = LimitLaw::ChiSquare(2);
  const TestOutcome accept = decide(5.0, law, 0.05, "watson");
  EXPECT_FALSE(accept.reject);
  EXPECT_NEAR(accept.critical_value, 5.991464547, 1e-8);
  ASSERT_TRUE(accept.p_value.has_value());
  EXPECT_NEAR(*accept.p_value, std::exp(-2.5), 1e-14);
  EXPECT_EQ(accept.test_name, "watson");
  const TestOutcome reject = decide(6.5, law, 0.05);
  EXPECT_TRUE(reject.reject);
  EXPECT_LT(*reject.p_value, 0.05);
}

TEST(DecideTest, TieIsNotARejection) {
  const double median = chi2_quantile(0.5, 2);
  const TestOutcome outcome = decide(median, LimitLaw::ChiSquare(2), 0.5);
  EXPECT_EQ(outcome.critical_value, median);
  EXPECT_FALSE(outcome.reject);
  EXPECT_FALSE(decide(3.0, 3.0, 0.05).reject);
  EXPECT_TRUE(decide(std::nextafter(3.0, 4.0), 3.0, 0.05).reject);
}

TEST(DecideTest, MonteCarloLawHasNoPValue) {
  McCriticalOptions mc;
  mc.draws = 20000;
  mc.seed = 7;
  const LimitLaw law = LimitLaw::WaldMixture(2, 1.0);
  const TestOutcome outcome = decide(100.0, law, 0.05, "wald_contiguity", mc);
  EXPECT_FALSE(outcome.p_value.has_value());
  EXPECT_TRUE(outcome.reject);
  EXPECT_GT(outcome.critical_value, 0.0);
  // The mixture is stochastically smaller than its chi-square numerator.
  EXPECT_LT(outcome.critical_value, chi2_quantile(0.95, 2));
}

TEST(DecideTest, RejectionAgreesWithPValue) {
  const LimitLaw law = LimitLaw::ChiSquare(3);
  for (double stat = 0.5; stat < 20.0; stat += 0.37) {
    const TestOutcome outcome = decide(stat, law, 0.05);
    EXPECT_EQ(outcome.reject, *outcome.p_value < 0.05) << stat;
  }
}

TEST(LogLikelihoodRatioTest, SpecExamples) {
  RngStream rng(207, 0);
  const Sample sample = random_sample(3, 50, 1.0, rng);
  const UnitVector theta0 = testing::random_unit(3, rng);
  const UnitVector theta1 = testing::random_unit(3, rng);
  EXPECT_EQ(fvml_log_likelihood_ratio(sample, theta0, theta0, 2.0), 0.0);
  double direct = 0.0;
  for (int j = 0; j < sample.n(); ++j) {
    direct += 2.0 * sample.points().col(j).dot(theta1.coords()) -
              2.0 * sample.points().col(j).dot(theta0.coords());
  }
  EXPECT_NEAR(fvml_log_likelihood_ratio(sample, theta1, theta0, 2.0), direct, 1e-10);
  EXPECT_NEAR(fvml_log_likelihood_ratio(sample, theta1, theta0, 2.0),
              -fvml_log_likelihood_ratio(sample, theta0, theta1, 2.0), 1e-12);
}

TEST(LanTest, StrictContiguityIsDegenerate) {
  const LanPair lan = lan_central_sequence(two_point_sample(), unit({1, 0}),
                                           RegimeSpec::Canonical(RegimeKind::kStrictContiguity, 1));
  EXPECT_EQ(lan.delta, Vector::Zero(2));
  EXPECT_EQ(lan.gamma, Matrix::Zero(2, 2));
}

TEST(LanTest, BeyondContiguityProjectsMean) {
  const UnitVector theta = unit({0, 0, 1});
  const Sample sample(points({{0, 0, 1}, {0.6, 0, 0.8}, {-0.6, 0, 0.8}}));
  const LanPair lan = lan_central_sequence(
      sample, theta, RegimeSpec::Canonical(RegimeKind::kBeyondContiguity, 2.0));
  EXPECT_NEAR(lan.delta.norm(), 0.0, 1e-15);
  Matrix projector = Matrix::Identity(3, 3) - theta.coords() * theta.coords().transpose();
  EXPECT_NEAR((lan.gamma - 4.0 * projector).norm(), 0.0, 1e-15);
}

TEST(LanTest, ContiguityHandExample) {
  const LanPair lan = lan_central_sequence(two_point_sample(), unit({1, 0}),
                                           RegimeSpec::Canonical(RegimeKind::kUnderContiguity, 1));
  EXPECT_NEAR((lan.delta - vec({0, 1})).norm(), 0.0, 1e-15);
  EXPECT_EQ(lan.gamma, Matrix::Identity(2, 2));
}

TEST(LanTest, AwayIsUnsupported) {
  EXPECT_THROW(lan_central_sequence(two_point_sample(), unit({1, 0}),
                                    RegimeSpec::Canonical(RegimeKind::kAwayFromUniformity, 1)),
               UnsupportedRegime);
}

TEST(LanTest, ContiguousExpansionIsExactAtNominalKappa) {
  // With kappa = sqrt(p/n) xi and theta1 on the sphere, the FvML log-LR and
  // its quadratic expansion coincide for every sample.
  RngStream rng(208, 0);
  const int p = 3, n = 500;
  const double xi = 1.7;
  const UnitVector theta0 = unit({0, 0, 1});
  const UnitVector theta1 = unit({0.6, 0, 0.8});
  const Vector tau = theta1.coords() - theta0.coords();
  const double kappa = std::sqrt(static_cast<double>(p) / n) * xi;
  const RegimeSpec regime = RegimeSpec::Canonical(RegimeKind::kUnderContiguity, xi);
  for (int i = 0; i < 20; ++i) {
    const Sample sample(sample_fvml(theta0, kappa, n, rng));
    const LanPair lan = lan_central_sequence(sample, theta0, regime);
    const double quadratic = tau.dot(lan.delta) - 0.5 * tau.dot(lan.gamma * tau);
    EXPECT_NEAR(fvml_log_likelihood_ratio(sample, theta1, theta0, kappa), quadratic, 1e-10);
  }
}

}  // namespace
}  // namespace sphloc
