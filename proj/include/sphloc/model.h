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

// Rotationally symmetric laws on S^{p-1} with density proportional to
// f(kappa x'theta), their moments, concentration calibration, and the
// neighbourhood-of-uniformity regimes.

#ifndef SPHLOC_MODEL_H_
#define SPHLOC_MODEL_H_

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "sphloc/geom.h"

namespace sphloc {

// Radial profile f: monotone increasing with f(0) = f'(0) = 1. The
// constructor spot-checks these conditions on a 101-point grid over [-1, 1].
class RadialFunction {
 public:
  RadialFunction(std::string name, std::function<double(double)> eval,
                 double max_kappa = std::numeric_limits<double>::infinity());

  // f(t) = exp(t).
  static RadialFunction Fvml();
  // f(t) = 1 + t; nonnegative on [-kappa, kappa] only for kappa <= 1.
  static RadialFunction Linear();
  // f(t) = 1 + tanh(t) = 2 e^{2t} / (1 + e^{2t}).
  static RadialFunction Logistic();
  // "fvml", "linear" or "logistic"; throws DomainError otherwise.
  static RadialFunction ByName(std::string_view name);

  double operator()(double t) const { return eval_(t); }
  const std::string& name() const { return name_; }
  // Largest concentration for which f(kappa t) stays a valid density.
  double max_kappa() const { return max_kappa_; }
  bool is_fvml() const { return name_ == "fvml"; }

 private:
  std::string name_;
  std::function<double(double)> eval_;
  double max_kappa_;
};

class RotSymModel {
 public:
  // Throws DomainError for kappa < 0 or kappa > f.max_kappa().
  RotSymModel(UnitVector theta, double kappa, RadialFunction f);

  const UnitVector& theta() const { return theta_; }
  double kappa() const { return kappa_; }
  const RadialFunction& f() const { return f_; }
  int dim() const { return theta_.dim(); }
  bool is_uniform() const { return kappa_ == 0.0; }

 private:
  UnitVector theta_;
  double kappa_;
  RadialFunction f_;
};

struct Moments {
  double e1 = 0.0;        // E[X'theta]
  double e2_tilde = 0.0;  // Var[X'theta]
  double e2 = 0.0;        // E[(X'theta)^2]
  double d = 0.0;         // (1 - e2) / (1 - 1/p)
};

double normalizing_constant(const RotSymModel& model);

// Density of u = X'theta on [-1, 1]: c (1 - t^2)^{(p-3)/2} f(kappa t).
std::function<double(double)> marginal_u_density(const RotSymModel& model);

// P(X'theta <= t) by quadrature.
double marginal_u_cdf(const RotSymModel& model, double t);

Moments moments(const RotSymModel& model);

// Closed-form FvML moments through the Bessel ratio I_{p/2}/I_{p/2-1}.
Moments fvml_moments(int p, double kappa);

// Smallest kappa with e1(kappa) = target_e1, found by bisection on
// [0, min(500, f.max_kappa())]. Throws TargetUnreachable if e1 at the upper
// end of the bracket is below the target.
double calibrate_kappa(int p, const RadialFunction& f, double target_e1);

enum class RegimeKind {
  kAwayFromUniformity,  // eta_n = 1
  kBeyondContiguity,    // eta_n = o(1), sqrt(n) eta_n -> infinity
  kUnderContiguity,     // eta_n ~ 1/sqrt(n)
  kStrictContiguity,    // sqrt(n) eta_n -> 0
};

std::string_view regime_name(RegimeKind kind);
RegimeKind regime_from_name(std::string_view name);

// eta_n = n^{-rate_exponent}; the locality parameter xi scales
// kappa_n = sqrt(p) eta_n xi. e2_tilde only matters away from uniformity.
struct RegimeSpec {
  RegimeKind kind = RegimeKind::kUnderContiguity;
  double rate_exponent = 0.5;
  double xi = 1.0;
  double e2_tilde = 0.0;

  // Classifies the exponent (tolerance 1e-9 around 0 and 1/2).
  static RegimeSpec FromExponent(double rate_exponent, double xi, double e2_tilde = 0.0);
  // Canonical exponent for a kind: 0, 1/4, 1/2 and 1.
  static RegimeSpec Canonical(RegimeKind kind, double xi, double e2_tilde = 0.0);

  double eta(double n) const;
};

struct KappaObservation {
  double n;
  double kappa;
};

// Fits kappa_n = sqrt(p) n^{-a} xi over at least two sample sizes and
// classifies the exponent. A constant sequence is "away from uniformity"
// with xi = sqrt(p) e1(kappa) and e2_tilde = Var[X'theta] under f.
RegimeSpec locality_from_kappa(std::span<const KappaObservation> sequence, int p,
                               const RadialFunction& f = RadialFunction::Fvml());

// Alternative locations used by the power study: for ell in {0, 1},
// normalize(theta0 + n^{ell/4 - 1/2} (r/6) tau_max) with tau_max = 2 e_1 in
// the frame where theta0 is the last axis; for ell in {2, 3},
// v_r = sin(r pi/6) e_1 + cos(r pi/6) theta0.
UnitVector local_alternative(int ell, int r, int n, const UnitVector& theta0);

// |theta0'tau + nu ||tau||^2 / 2| <= 1e-10, i.e. theta0 + nu tau is a unit vector.
bool check_spherical_constraint(const UnitVector& theta0, const Vector& tau, double nu);

}  // namespace sphloc

#endif  // SPHLOC_MODEL_H_
