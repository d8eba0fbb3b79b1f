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

// Special functions and quadrature used by the model and the limit laws.

#ifndef SPHLOC_SPECFN_H_
#define SPHLOC_SPECFN_H_

#include <functional>

namespace sphloc {

// Every numerical tolerance of this module, in one place.
namespace tolerance {
inline constexpr double kSeriesEpsilon = 1e-16;      // incomplete gamma series
inline constexpr double kFractionEpsilon = 8.9e-16;  // continued fractions (4 ulp)
inline constexpr int kSeriesMaxIterations = 100000;
inline constexpr double kPoissonTail = 1e-12;      // noncentral chi-square truncation
inline constexpr double kQuantileRelStep = 1e-15;  // chi-square quantile Newton stop
inline constexpr int kBesselMaxIterations = 1000000;
inline constexpr double kQuadratureAbs = 1e-13;
inline constexpr double kQuadratureRel = 1e-13;
inline constexpr int kQuadratureMaxSubdivisions = 2000;
}  // namespace tolerance

struct QuadratureSpec {
  double abs_tol = tolerance::kQuadratureAbs;
  double rel_tol = tolerance::kQuadratureRel;
  int max_subdivisions = tolerance::kQuadratureMaxSubdivisions;
};

// Adaptive Gauss-Kronrod (10/21 point) quadrature of fn over [a, b]; the
// default interval is [-1, 1]. Throws DomainError for an invalid spec and
// NoConvergence when max_subdivisions is exhausted.
double integrate(const std::function<double(double)>& fn, const QuadratureSpec& spec = {},
                 double a = -1.0, double b = 1.0);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double normal_cdf(double x);
double normal_quantile(double prob);

double chi2_cdf(double x, int df);
double chi2_sf(double x, int df);
double chi2_pdf(double x, int df);
// Inverse of chi2_cdf by safeguarded Newton from a Wilson-Hilferty start.
// Throws DomainError unless 0 < prob < 1.
double chi2_quantile(double prob, int df);

// Poisson mixture of central chi-square CDFs; nc = 0 returns chi2_cdf.
double noncentral_chi2_cdf(double x, int df, double nc);
double noncentral_chi2_sf(double x, int df, double nc);

// I_nu(kappa) / I_{nu-1}(kappa) for kappa > 0 by continued fraction. With
// nu = p/2 this is the FvML mean resultant length on S^{p-1}.
double bessel_ratio(double nu, double kappa);

}  // namespace sphloc

#endif  // SPHLOC_SPECFN_H_
