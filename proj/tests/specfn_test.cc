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

#include "sphloc/specfn.h"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "sphloc/errors.h"
#include "sphloc/rng.h"

namespace sphloc {
namespace {

TEST(IntegrateTest, ElementaryIntegrals) {
  const QuadratureSpec spec;
  EXPECT_NEAR(integrate([](double) { return 1.0; }), 2.0, spec.abs_tol);
  EXPECT_NEAR(integrate([](double t) { return t * t; }), 2.0 / 3.0, spec.abs_tol);
  EXPECT_NEAR(integrate([](double t) { return std::exp(t); }), std::exp(1.0) - std::exp(-1.0),
              spec.abs_tol);
}

TEST(IntegrateTest, EndpointSingularityConverges) {
  // Kronrod nodes never touch the endpoints, so this integrable singularity
  // converges at a looser tolerance.
  QuadratureSpec spec;
  spec.abs_tol = 1e-7;
  spec.rel_tol = 1e-7;
  spec.max_subdivisions = 20000;
  const double value = integrate([](double t) { return 1.0 / std::sqrt(1.0 - t * t); }, spec);
  EXPECT_NEAR(value, std::numbers::pi, 1e-5);
}

TEST(IntegrateTest, CustomInterval) {
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, {}, 0.0, std::numbers::pi), 2.0,
              1e-13);
}

TEST(IntegrateTest, ExhaustedSubdivisionsThrow) {
  QuadratureSpec spec;
  spec.max_subdivisions = 10;
  EXPECT_THROW(integrate([](double t) { return std::sin(1.0 / (t + 1.0001)); }, spec),
               NoConvergence);
}

TEST(IntegrateTest, RejectsBadSpec) {
  QuadratureSpec spec;
  spec.abs_tol = 0.0;
  spec.rel_tol = 0.0;
  EXPECT_THROW(integrate([](double) { return 1.0; }, spec), DomainError);
}

TEST(IncompleteGammaTest, MatchesBoost) {
  for (double a : {0.5, 1.0, 1.5, 2.5, 7.0, 30.0}) {
    for (double x : {0.01, 0.3, 1.0, 2.0, 5.0, 12.0, 50.0}) {
      EXPECT_NEAR(regularized_gamma_p(a, x), boost::math::gamma_p(a, x), 1e-13)
          << "a=" << a << " x=" << x;
      EXPECT_NEAR(regularized_gamma_q(a, x), boost::math::gamma_q(a, x), 1e-13)
          << "a=" << a << " x=" << x;
    }
  }
}

TEST(NormalTest, QuantileMatchesBoost) {
  const boost::math::normal_distribution<> normal;
  for (double prob : {1e-10, 1e-4, 0.025, 0.3, 0.5, 0.8, 0.975, 1 - 1e-6}) {
    EXPECT_NEAR(normal_quantile(prob), boost::math::quantile(normal, prob), 1e-9) << prob;
  }
  for (double x : {-5.0, -1.0, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(normal_cdf(x), boost::math::cdf(normal, x), 1e-15);
  }
  EXPECT_THROW(normal_quantile(0.0), DomainError);
}

TEST(Chi2Test, SpecExamples) {
  EXPECT_EQ(chi2_cdf(0.0, 3), 0.0);
  EXPECT_NEAR(chi2_cdf(5.991, 2), 0.95, 1e-3);
  EXPECT_NEAR(chi2_cdf(1.0, 1), 2.0 * normal_cdf(1.0) - 1.0, 1e-12);
  EXPECT_NEAR(chi2_cdf(1.0, 1), 0.6827, 1e-4);
  EXPECT_NEAR(chi2_quantile(0.95, 2), -2.0 * std::log(0.05), 1e-10);
  EXPECT_NEAR(chi2_quantile(0.95, 3), 7.8147, 1e-3);
}

TEST(Chi2Test, ClosedFormForTwoDegrees) {
  for (double x : {0.1, 1.0, 4.0, 20.0}) {
    EXPECT_NEAR(chi2_cdf(x, 2), 1.0 - std::exp(-x / 2.0), 1e-14);
  }
}

TEST(Chi2Test, MatchesBoostReference) {
  for (int df : {1, 2, 3, 5, 10, 40}) {
    const boost::math::chi_squared_distribution<> law(df);
    for (double x : {0.05, 0.5, 2.0, 6.0, 15.0, 60.0}) {
      EXPECT_NEAR(chi2_cdf(x, df), boost::math::cdf(law, x), 1e-10);
      EXPECT_NEAR(chi2_sf(x, df), boost::math::cdf(boost::math::complement(law, x)), 1e-10);
      EXPECT_NEAR(chi2_pdf(x, df), boost::math::pdf(law, x), 1e-10);
    }
    for (double prob : {0.01, 0.5, 0.9, 0.95, 0.999}) {
      EXPECT_NEAR(chi2_quantile(prob, df), boost::math::quantile(law, prob),
                  1e-9 * boost::math::quantile(law, prob));
    }
  }
}

TEST(Chi2Test, MedianNearDfMinusTwoThirds) {
  for (int df : {50, 100, 400}) {
    EXPECT_NEAR(chi2_quantile(0.5, df), df - 2.0 / 3.0, 0.05);
  }
}

TEST(Chi2Test, QuantileInvertsCdf) {
  for (int df = 1; df <= 12; ++df) {
    for (double x = 0.05; x < 40.0; x *= 1.7) {
      const double prob = chi2_cdf(x, df);
      if (prob <= 1e-300 || prob >= 1.0 - 1e-15) continue;
      EXPECT_NEAR(chi2_quantile(prob, df), x, 1e-8 * std::max(1.0, x)) << "df=" << df;
    }
    for (double prob : {1e-6, 0.05, 0.5, 0.95, 0.999999}) {
      EXPECT_NEAR(chi2_cdf(chi2_quantile(prob, df), df), prob, 1e-9);
    }
  }
}

TEST(Chi2Test, QuantileRejectsBoundaryProbabilities) {
  EXPECT_THROW(chi2_quantile(0.0, 2), DomainError);
  EXPECT_THROW(chi2_quantile(1.0, 2), DomainError);
  EXPECT_THROW(chi2_cdf(1.0, 0), DomainError);
}

TEST(NoncentralChi2Test, CentralReductionIsExact) {
  for (int df : {1, 2, 3, 7}) {
    for (double x : {0.0, 0.4, 3.0, 9.0}) {
      EXPECT_EQ(noncentral_chi2_cdf(x, df, 0.0), chi2_cdf(x, df));
    }
  }
  EXPECT_EQ(noncentral_chi2_cdf(0.0, 2, 3.0), 0.0);
}

TEST(NoncentralChi2Test, MatchesBoostReference) {
  for (int df : {1, 2, 3, 5}) {
    for (double nc : {0.1, 1.0, 4.0, 16.0}) {
      const boost::math::non_central_chi_squared_distribution<> law(df, nc);
      for (double x : {0.3, 2.0, 6.0, 15.0, 40.0}) {
        EXPECT_NEAR(noncentral_chi2_cdf(x, df, nc), boost::math::cdf(law, x), 1e-10)
            << df << " " << nc << " " << x;
        EXPECT_NEAR(noncentral_chi2_sf(x, df, nc),
                    boost::math::cdf(boost::math::complement(law, x)), 1e-10);
      }
    }
  }
}

TEST(NoncentralChi2Test, MonteCarloOracle) {
  RngStream rng(42, 0);
  constexpr int kDraws = 1000000;
  int below = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double z1 = rng.normal() + 1.0;
    const double z2 = rng.normal();
    below += (z1 * z1 + z2 * z2 <= 5.991) ? 1 : 0;
  }
  EXPECT_NEAR(noncentral_chi2_cdf(5.991, 2, 1.0), static_cast<double>(below) / kDraws, 0.005);
}

TEST(NoncentralChi2Test, DecreasingInNoncentrality) {
  for (int df : {1, 2, 4}) {
    for (double x : {0.5, 3.0, 8.0}) {
      double previous = 1.0;
      for (double nc = 0.0; nc <= 16.0; nc += 0.5) {
        const double value = noncentral_chi2_cdf(x, df, nc);
        EXPECT_LT(value, previous + 1e-15);
        previous = value;
      }
    }
  }
}

TEST(BesselRatioTest, ClosedFormForThreeDimensions) {
  for (double kappa : {0.01, 0.3, 1.0, 2.0, 10.0, 50.0, 400.0}) {
    EXPECT_NEAR(bessel_ratio(1.5, kappa), 1.0 / std::tanh(kappa) - 1.0 / kappa, 1e-10) << kappa;
  }
  EXPECT_NEAR(bessel_ratio(1.5, 1.0), 0.31304, 1e-4);
  EXPECT_NEAR(bessel_ratio(1.5, 10.0), 0.9000, 1e-4);
  EXPECT_NEAR(bessel_ratio(1.5, 10.0), 1.0 / std::tanh(10.0) - 0.1, 1e-6);
}

TEST(BesselRatioTest, SmallKappaExpansion) {
  const double kappa = 1e-6;
  EXPECT_NEAR(bessel_ratio(1.5, kappa) / (kappa / 3.0), 1.0, 1e-4);
}

TEST(BesselRatioTest, MatchesBoostBessel) {
  for (double nu : {1.0, 1.5, 2.0, 2.5, 5.0}) {
    for (double kappa : {0.05, 0.5, 1.0, 5.0, 20.0}) {
      const double expected =
          boost::math::cyl_bessel_i(nu, kappa) / boost::math::cyl_bessel_i(nu - 1.0, kappa);
      EXPECT_NEAR(bessel_ratio(nu, kappa), expected, 1e-12) << nu << " " << kappa;
    }
  }
}

TEST(BesselRatioTest, InUnitIntervalAndIncreasing) {
  for (double nu : {1.0, 1.5, 2.5, 4.0}) {
    double previous = 0.0;
    for (double kappa = 0.01; kappa < 600.0; kappa *= 1.3) {
      const double value = bessel_ratio(nu, kappa);
      EXPECT_GT(value, 0.0);
      EXPECT_LT(value, 1.0);
      EXPECT_GT(value, previous);
      previous = value;
    }
  }
}

TEST(BesselRatioTest, RejectsNonPositiveKappa) {
  EXPECT_THROW(bessel_ratio(1.5, 0.0), DomainError);
}

}  // namespace
}  // namespace sphloc
