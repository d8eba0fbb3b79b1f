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

#include "sphloc/model.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphloc/errors.h"
#include "sphloc/specfn.h"

namespace sphloc {
namespace {

constexpr double kCalibrationUpper = 500.0;
constexpr double kExponentTolerance = 1e-9;

// Integrals over the marginal of u = cos(phi) are taken in phi, where the
// weight (1 - t^2)^{(p-3)/2} dt becomes sin^{p-2}(phi) dphi and stays bounded
// for every p >= 2. The profile is divided by f(kappa) (its maximum) so that
// large concentrations do not overflow.
double marginal_integral(const RotSymModel& model, const std::function<double(double)>& h,
                         double phi_lo = 0.0, double phi_hi = std::numbers::pi) {
  const int p = model.dim();
  const double kappa = model.kappa();
  const RadialFunction& f = model.f();
  const double scale = f(kappa);
  auto integrand = [&](double phi) {
    const double t = std::cos(phi);
    const double w = p == 2 ? 1.0 : std::pow(std::sin(phi), p - 2);
    return h(t) * w * f(kappa * t) / scale;
  };
  return integrate(integrand, {}, phi_lo, phi_hi);
}

}  // namespace

RadialFunction::RadialFunction(std::string name, std::function<double(double)> eval,
                               double max_kappa)
    : name_(std::move(name)), eval_(std::move(eval)), max_kappa_(max_kappa) {
  if (std::abs(eval_(0.0) - 1.0) > 1e-12) {
    throw DomainError("radial function '" + name_ + "' must satisfy f(0) = 1");
  }
  constexpr double h = 1e-5;
  const double slope = (eval_(h) - eval_(-h)) / (2.0 * h);
  if (std::abs(slope - 1.0) > 1e-6) {
    throw DomainError("radial function '" + name_ + "' must satisfy f'(0) = 1");
  }
  double previous = eval_(-1.0);
  for (int i = 1; i <= 100; ++i) {
    const double current = eval_(-1.0 + 0.02 * i);
    if (current < previous || previous < 0.0) {
      throw DomainError("radial function '" + name_ + "' must be nonnegative and increasing");
    }
    previous = current;
  }
}

RadialFunction RadialFunction::Fvml() {
  return RadialFunction("fvml", [](double t) { return std::exp(t); });
}

RadialFunction RadialFunction::Linear() {
  return RadialFunction("linear", [](double t) { return 1.0 + t; }, 1.0);
}

RadialFunction RadialFunction::Logistic() {
  return RadialFunction("logistic", [](double t) { return 1.0 + std::tanh(t); });
}

RadialFunction RadialFunction::ByName(std::string_view name) {
  if (name == "fvml") return Fvml();
  if (name == "linear") return Linear();
  if (name == "logistic") return Logistic();
  throw DomainError("unknown radial function '" + std::string(name) +
                    "' (expected fvml, linear or logistic)");
}

RotSymModel::RotSymModel(UnitVector theta, double kappa, RadialFunction f)
    : theta_(std::move(theta)), kappa_(kappa), f_(std::move(f)) {
  if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) {
    throw DomainError("concentration must be finite and >= 0");
  }
  if (kappa_ > f_.max_kappa()) {
    throw DomainError("concentration " + std::to_string(kappa_) + " exceeds the maximum " +
                      std::to_string(f_.max_kappa()) + " for radial function '" + f_.name() + "'");
  }
}

double normalizing_constant(const RotSymModel& model) {
  const double mass = marginal_integral(model, [](double) { return 1.0; });
  return 1.0 / (mass * model.f()(model.kappa()));
}

std::function<double(double)> marginal_u_density(const RotSymModel& model) {
  const double c = normalizing_constant(model);
  const int p = model.dim();
  const double kappa = model.kappa();
  RadialFunction f = model.f();
  return [c, p, kappa, f](double t) {
    if (t < -1.0 || t > 1.0) return 0.0;
    return c * std::pow(1.0 - t * t, 0.5 * (p - 3)) * f(kappa * t);
  };
}

double marginal_u_cdf(const RotSymModel& model, double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const auto one = [](double) { return 1.0; };
  const double total = marginal_integral(model, one);
  const double below = marginal_integral(model, one, std::acos(t), std::numbers::pi);
  return std::clamp(below / total, 0.0, 1.0);
}

Moments moments(const RotSymModel& model) {
  const double p = model.dim();
  Moments m;
  if (model.is_uniform()) {
    m.e1 = 0.0;
    m.e2 = 1.0 / p;
  } else {
    const double j0 = marginal_integral(model, [](double) { return 1.0; });
    const double j1 = marginal_integral(model, [](double t) { return t; });
    const double j2 = marginal_integral(model, [](double t) { return t * t; });
    m.e1 = j1 / j0;
    m.e2 = j2 / j0;
  }
  m.e2_tilde = m.e2 - m.e1 * m.e1;
  m.d = (1.0 - m.e2) / (1.0 - 1.0 / p);
  return m;
}

Moments fvml_moments(int p, double kappa) {
  Moments m;
  if (kappa == 0.0) {
    m.e1 = 0.0;
    m.e2_tilde = 1.0 / p;
  } else {
    const double a = bessel_ratio(0.5 * p, kappa);
    m.e1 = a;
    m.e2_tilde = 1.0 - (p - 1.0) * a / kappa - a * a;
  }
  m.e2 = m.e2_tilde + m.e1 * m.e1;
  m.d = (1.0 - m.e2) / (1.0 - 1.0 / p);
  return m;
}

double calibrate_kappa(int p, const RadialFunction& f, double target_e1) {
  if (p < 2) throw UnsupportedDimension("calibration needs p >= 2");
  if (!(target_e1 >= 0.0)) throw DomainError("target e1 must be >= 0");
  if (target_e1 == 0.0) return 0.0;
  const UnitVector pole = UnitVector::Axis(p, p - 1);
  auto e1_at = [&](double kappa) { return moments(RotSymModel(pole, kappa, f)).e1; };

  double lo = 0.0;
  double hi = std::min(kCalibrationUpper, f.max_kappa());
  const double e1_hi = e1_at(hi);
  if (e1_hi < target_e1) {
    throw TargetUnreachable("target e1 = " + std::to_string(target_e1) +
                            " exceeds the largest reachable value " + std::to_string(e1_hi) +
                            " for radial function '" + f.name() + "'");
  }
  double best = hi;
  double best_gap = e1_hi - target_e1;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double gap = e1_at(mid) - target_e1;
    if (std::abs(gap) < std::abs(best_gap)) {
      best = mid;
      best_gap = gap;
    }
    if (std::abs(gap) <= 1e-13 || hi - lo <= 1e-15 * hi) break;
    (gap < 0.0 ? lo : hi) = mid;
  }
  return best;
}

std::string_view regime_name(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::kAwayFromUniformity:
      return "away";
    case RegimeKind::kBeyondContiguity:
      return "beyond";
    case RegimeKind::kUnderContiguity:
      return "contiguity";
    case RegimeKind::kStrictContiguity:
      return "strict";
  }
  return "unknown";
}

RegimeKind regime_from_name(std::string_view name) {
  if (name == "away") return RegimeKind::kAwayFromUniformity;
  if (name == "beyond") return RegimeKind::kBeyondContiguity;
  if (name == "contiguity") return RegimeKind::kUnderContiguity;
  if (name == "strict") return RegimeKind::kStrictContiguity;
  throw DomainError("unknown regime '" + std::string(name) +
                    "' (expected away, beyond, contiguity or strict)");
}

RegimeSpec RegimeSpec::FromExponent(double rate_exponent, double xi, double e2_tilde) {
  if (!(rate_exponent >= -kExponentTolerance)) {
    throw DomainError("rate exponent must be >= 0");
  }
  if (!(xi > 0.0)) throw DomainError("locality parameter xi must be > 0");
  RegimeSpec spec;
  spec.xi = xi;
  spec.e2_tilde = e2_tilde;
  if (std::abs(rate_exponent) <= kExponentTolerance) {
    spec.kind = RegimeKind::kAwayFromUniformity;
    spec.rate_exponent = 0.0;
  } else if (std::abs(rate_exponent - 0.5) <= kExponentTolerance) {
    spec.kind = RegimeKind::kUnderContiguity;
    spec.rate_exponent = 0.5;
  } else if (rate_exponent < 0.5) {
    spec.kind = RegimeKind::kBeyondContiguity;
    spec.rate_exponent = rate_exponent;
  } else {
    spec.kind = RegimeKind::kStrictContiguity;
    spec.rate_exponent = rate_exponent;
  }
  return spec;
}

RegimeSpec RegimeSpec::Canonical(RegimeKind kind, double xi, double e2_tilde) {
  switch (kind) {
    case RegimeKind::kAwayFromUniformity:
      return FromExponent(0.0, xi, e2_tilde);
    case RegimeKind::kBeyondContiguity:
      return FromExponent(0.25, xi, e2_tilde);
    case RegimeKind::kUnderContiguity:
      return FromExponent(0.5, xi, e2_tilde);
    case RegimeKind::kStrictContiguity:
      return FromExponent(1.0, xi, e2_tilde);
  }
  throw DomainError("unknown regime");
}

double RegimeSpec::eta(double n) const { return std::pow(n, -rate_exponent); }

RegimeSpec locality_from_kappa(std::span<const KappaObservation> sequence, int p,
                               const RadialFunction& f) {
  if (sequence.size() < 2) {
    throw DomainError("locality_from_kappa needs kappa at two or more sample sizes");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& obs : sequence) {
    if (!(obs.n > 0.0) || !(obs.kappa > 0.0)) {
      throw DomainError("locality_from_kappa needs n > 0 and kappa > 0");
    }
    const double x = std::log(obs.n);
    const double y = std::log(obs.kappa);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(sequence.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw DomainError("locality_from_kappa needs distinct n");
  const double exponent = -(m * sxy - sx * sy) / denom;

  if (std::abs(exponent) <= 1e-6) {
    const double kappa = sequence.front().kappa;
    const Moments mom = moments(RotSymModel(UnitVector::Axis(p, p - 1), kappa, f));
    return RegimeSpec::FromExponent(0.0, std::sqrt(static_cast<double>(p)) * mom.e1, mom.e2_tilde);
  }
  const double snapped = std::abs(exponent - 0.5) <= 1e-6 ? 0.5 : exponent;
  double xi = 0.0;
  for (const auto& obs : sequence) {
    xi += obs.kappa * std::pow(obs.n, snapped) / std::sqrt(static_cast<double>(p));
  }
  return RegimeSpec::FromExponent(snapped, xi / m, 1.0 / p);
}

UnitVector local_alternative(int ell, int r, int n, const UnitVector& theta0) {
  if (ell < 0 || ell > 3) throw DomainError("ell must be in 0..3");
  if (r < 0 || r > 6) throw DomainError("r must be in 0..6");
  if (n < 1) throw DomainError("n must be >= 1");
  if (r == 0) return theta0;
  const int p = theta0.dim();
  Vector pole_frame = Vector::Zero(p);
  if (ell <= 1) {
    const double scale = std::pow(static_cast<double>(n), ell / 4.0 - 0.5);
    pole_frame[p - 1] = 1.0;
    pole_frame[0] = scale * (r / 6.0) * 2.0;
  } else {
    const double angle = r * std::numbers::pi / 6.0;
    pole_frame[0] = std::sin(angle);
    pole_frame[p - 1] = std::cos(angle);
  }
  return UnitVector::Normalize(frame_to(theta0) * pole_frame);
}

bool check_spherical_constraint(const UnitVector& theta0, const Vector& tau, double nu) {
  return std::abs(theta0.dot(tau) + 0.5 * nu * tau.squaredNorm()) <= 1e-10;
}

}  // namespace sphloc
