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

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "sphloc/errors.h"

namespace sphloc {
namespace {

constexpr double kTiny = 1e-300;

// Kronrod 21-point abscissae (descending; the last one is the centre) and
// weights; the Gauss 10-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208814741544, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod21(const std::function<double(double)>& fn, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_centre = fn(centre);
  double kronrod = kWgk[10] * f_centre;
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = fn(centre - dx);
    const double f2 = fn(centre + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = kronrod * half;
  s.error = std::abs((kronrod - gauss) * half);
  s.abs_value = abs_sum * std::abs(half);
  if (!std::isfinite(s.value)) {
    throw NoConvergence("integrand is not finite on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
  }
  return s;
}

double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < tolerance::kSeriesMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * tolerance::kSeriesEpsilon) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NoConvergence("incomplete gamma series did not converge");
}

double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < tolerance::kSeriesMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < tolerance::kFractionEpsilon) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw NoConvergence("incomplete gamma continued fraction did not converge");
}

void check_df(int df) {
  if (df < 1) throw DomainError("degrees of freedom must be >= 1, got " + std::to_string(df));
}

double poisson_log_weight(double lambda, int j) {
  return -lambda + j * std::log(lambda) - std::lgamma(j + 1.0);
}

}  // namespace

double integrate(const std::function<double(double)>& fn, const QuadratureSpec& spec, double a,
                 double b) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 10) {
    throw DomainError("quadrature tolerances must be positive and max_subdivisions >= 10");
  }
  if (a == b) return 0.0;
  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod21(fn, a, b);
  double total = first.value;
  double total_error = first.error;
  double total_abs = first.abs_value;
  heap.push(first);
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  for (int subdivisions = 1;; ++subdivisions) {
    const double target =
        std::max({spec.abs_tol, spec.rel_tol * std::abs(total), kRoundoff * total_abs});
    if (total_error <= target) return total;
    if (subdivisions >= spec.max_subdivisions) {
      throw NoConvergence("adaptive quadrature exhausted " + std::to_string(spec.max_subdivisions) +
                          " subdivisions (error estimate " + std::to_string(total_error) + ")");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod21(fn, worst.a, mid);
    const Segment right = gauss_kronrod21(fn, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    // Re-sum occasionally to stop drift in the running totals.
    if (subdivisions % 64 == 0) {
      std::priority_queue<Segment> copy = heap;
      total = total_error = total_abs = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        total_abs += copy.top().abs_value;
        copy.pop();
      }
    }
  }
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("normal quantile needs 0 < prob < 1");
  // Acklam's rational approximation, then one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  double x;
  if (prob < kLow) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - kLow) {
    const double q = prob - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - prob;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double chi2_cdf(double x, int df) {
  check_df(df);
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, int df) {
  check_df(df);
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi2_pdf(double x, int df) {
  check_df(df);
  if (x < 0.0) return 0.0;
  const double k = 0.5 * df;
  if (x == 0.0) {
    if (df == 1) return std::numeric_limits<double>::infinity();
    return df == 2 ? 0.5 : 0.0;
  }
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
}

double chi2_quantile(double prob, int df) {
  check_df(df);
  if (!(prob > 0.0 && prob < 1.0)) {
    throw DomainError("chi-square quantile needs 0 < prob < 1, got " + std::to_string(prob));
  }
  const double k = df;
  const double z = normal_quantile(prob);
  const double h = 2.0 / (9.0 * k);
  double x = k * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
  if (!(x > 0.0)) {
    // Small-x behaviour P(x) ~ (x/2)^{k/2} / Gamma(k/2 + 1).
    x = 2.0 * std::exp((std::log(prob) + std::lgamma(0.5 * k + 1.0)) / (0.5 * k));
  }
  const bool upper = prob > 0.5;
  // residual(x) is increasing in x and vanishes at the quantile.
  auto residual = [&](double t) {
    return upper ? (1.0 - prob) - chi2_sf(t, df) : chi2_cdf(t, df) - prob;
  };
  double lo = 0.0;
  double hi = std::max(2.0 * x, 1.0);
  while (residual(hi) < 0.0) hi *= 2.0;
  for (int iter = 0; iter < 500; ++iter) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double pdf = chi2_pdf(x, df);
    double next = (pdf > 0.0 && std::isfinite(pdf)) ? x - r / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tolerance::kQuantileRelStep * x ||
        hi - lo <= tolerance::kQuantileRelStep * hi) {
      return next;
    }
    x = next;
  }
  throw NoConvergence("chi-square quantile iteration did not converge");
}

double noncentral_chi2_cdf(double x, int df, double nc) {
  check_df(df);
  if (nc < 0.0) throw DomainError("non-centrality must be >= 0");
  if (nc == 0.0) return chi2_cdf(x, df);
  if (x <= 0.0) return 0.0;
  const double lambda = 0.5 * nc;
  double cdf = 0.0;
  double mass = 0.0;
  for (int j = 0;; ++j) {
    const double w = std::exp(poisson_log_weight(lambda, j));
    cdf += w * regularized_gamma_p(0.5 * df + j, 0.5 * x);
    mass += w;
    if (j > lambda && 1.0 - mass < tolerance::kPoissonTail) break;
    if (j > tolerance::kSeriesMaxIterations) {
      throw NoConvergence("noncentral chi-square series did not converge");
    }
  }
  return std::min(cdf, 1.0);
}

double noncentral_chi2_sf(double x, int df, double nc) {
  check_df(df);
  if (nc < 0.0) throw DomainError("non-centrality must be >= 0");
  if (nc == 0.0) return chi2_sf(x, df);
  if (x <= 0.0) return 1.0;
  const double lambda = 0.5 * nc;
  double sf = 0.0;
  double mass = 0.0;
  for (int j = 0;; ++j) {
    const double w = std::exp(poisson_log_weight(lambda, j));
    sf += w * regularized_gamma_q(0.5 * df + j, 0.5 * x);
    mass += w;
    if (j > lambda && 1.0 - mass < tolerance::kPoissonTail) break;
    if (j > tolerance::kSeriesMaxIterations) {
      throw NoConvergence("noncentral chi-square series did not converge");
    }
  }
  return std::min(sf, 1.0);
}

double bessel_ratio(double nu, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("Bessel ratio needs kappa > 0");
  if (!(nu > 0.0)) throw DomainError("Bessel ratio needs nu > 0");
  // I_nu/I_{nu-1} = 1 / (b_0 + 1 / (b_1 + 1 / (b_2 + ...))), b_k = 2(nu+k)/kappa,
  // evaluated with the modified Lentz algorithm.
  double f = 2.0 * nu / kappa;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < tolerance::kBesselMaxIterations; ++k) {
    const double bk = 2.0 * (nu + k) / kappa;
    d = bk + d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = bk + 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < tolerance::kFractionEpsilon) return 1.0 / f;
  }
  throw NoConvergence("Bessel ratio continued fraction did not converge");
}

}  // namespace sphloc
