#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>

// Log-domain helpers for error-bound bookkeeping.
namespace reclab::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLog2Of10 = 3.32192809488736234787;
inline constexpr double kLog10Of2 = 0.30102999566398119521;
inline constexpr double kLog10OfE = 0.43429448190325182765;

// log10(10^a + 10^b)
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log10(1 + std::pow(10.0, lo - hi));
}

inline double log10_abs(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return kNegInf;
  long exp = 0;
  const double m = mpfr_get_d_2exp(&exp, x, MPFR_RNDN);
  return std::log10(std::abs(m)) + static_cast<double>(exp) * kLog10Of2;
}

}  // namespace reclab::detail
