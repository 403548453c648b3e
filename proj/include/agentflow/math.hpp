#pragma once

// Numerically stable scalar helpers. Everything here works in log space so
// that quantities like exp(-beta*L) with beta*L in the hundreds neither
// overflow nor underflow intermediate results.

#include <cmath>
#include <limits>

namespace agentflow::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + e^x) without overflow for large |x|.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// log(1 - e^{-x}) for x >= 0. Returns -inf at x = 0.
inline double log1mexp(double x) {
  constexpr double kLn2 = 0.6931471805599453;
  if (x <= 0.0) return -kInf;
  if (x <= kLn2) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

// log(e^x - 1) for x > 0.
inline double logexpm1(double x) {
  if (x > 36.0) return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

// 1 - e^{-x} for x >= 0, accurate near zero.
inline double one_minus_exp_neg(double x) { return -std::expm1(-x); }

// Standard normal quantile (Acklam's rational approximation, |err| < 1.2e-9).
inline double inverse_normal_cdf(double p) {
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
  constexpr double p_low = 0.02425;

  if (!(p > 0.0) || !(p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// |x - y| <= tol * max(|x|, |y|), with exact equality accepted for zeros
// and infinities of matching sign.
inline bool approx_rel(double x, double y, double tol) {
  if (x == y) return true;
  const double scale = std::max(std::fabs(x), std::fabs(y));
  return std::fabs(x - y) <= tol * scale;
}

}  // namespace agentflow::detail
