#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "reclab/errors.hpp"

namespace reclab {

using BigInt = mpz_class;

// Decimal parsing/printing for unbounded integers. parse_bigint accepts an
// optional sign followed by decimal digits only.
BigInt parse_bigint(std::string_view text);
std::string to_string(const BigInt& value);

// Number of decimal digits in |value| (1 for zero).
int digits10(const BigInt& value);

BigInt pow10(unsigned exponent);

inline constexpr int kDefaultDigits = 50;

// A real number carried at a fixed binary working precision together with a
// pessimistic accuracy claim.
//
// digits() is the number of significant decimal digits guaranteed correct:
// the absolute error is at most one unit in the digits()-th significant
// place, 10^(E - digits + 1) with E = floor(log10|x|). For an inexact zero
// the bound is 10^-digits instead. Exact values (integers, exactly
// representable literals, and exact results on exact inputs) carry no error
// at all; digits() then reports the working precision.
//
// Every operation propagates a first-order error bound plus its own rounding,
// so derived values never claim more digits than their inputs justify.
class HPReal {
 public:
  HPReal();
  HPReal(long value);  // NOLINT(runtime/explicit): exact small integers
  HPReal(const BigInt& value, int working_digits = kDefaultDigits);

  // Literal decimal with optional precision annotation, e.g. "1.41421356@9".
  // Without an annotation the literal is taken as an exact decimal (subject
  // only to binary rounding at the working precision).
  static HPReal parse(std::string_view text, int working_digits = 0);

  // Exact binary value of a double.
  static HPReal from_double(double value, int working_digits = kDefaultDigits);

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  int digits() const;
  int working_digits() const;
  bool exact() const { return exact_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }
  mpfr_srcptr raw() const { return value_; }

  int sign() const { return mpfr_sgn(value_); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  // log10|x|, -inf for zero.
  double log10_abs() const;
  // log10 of the absolute error bound, -inf when exact.
  double log10_uncertainty() const;
  // Absolute error bound as a number (0 when exact).
  HPReal uncertainty() const;

  // Re-stores the value at another working precision; shrinking rounds and
  // lowers the accuracy claim accordingly.
  HPReal with_working_digits(int working_digits) const;
  // Caps the accuracy claim at `digits`; never raises it.
  HPReal with_digits_cap(int digits) const;

  // "<decimal>@<digits>" at the guaranteed precision. Exact values print
  // without annotation when the decimal form reproduces them exactly.
  std::string to_string() const;
  // Plain decimal rendering with the given number of significant digits.
  std::string to_decimal(int significant) const;

  HPReal operator-() const;
  HPReal& operator+=(const HPReal& rhs);
  HPReal& operator-=(const HPReal& rhs);
  HPReal& operator*=(const HPReal& rhs);
  HPReal& operator/=(const HPReal& rhs);

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);

  // Comparisons act on stored values; they ignore the accuracy claim.
  friend bool operator==(const HPReal& a, const HPReal& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const HPReal& a, const HPReal& b);

  // Builds a value from a computed mpfr result. `propagated` is the log10
  // error bound inherited from the inputs; `rounded` adds one ulp.
  static HPReal from_computation(mpfr_srcptr value, double propagated,
                                 bool rounded, int digits_cap = -1);

 private:
  struct Bits {
    mpfr_prec_t n;
  };
  explicit HPReal(Bits bits);

  mpfr_t value_;
  // log10 of the absolute error bound; -inf when exact.
  double err_;
  bool exact_;
};

mpfr_prec_t bits_for_digits(int digits);

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal pi(int digits);
// x^y for x > 0.
HPReal pow(const HPReal& x, const HPReal& y);
HPReal log10(const HPReal& x);
HPReal atan2(const HPReal& y, const HPReal& x);

// Series evaluation with exact-quadrant argument reduction; accurate for
// arguments of any magnitude provided the argument itself carries the digits.
std::pair<HPReal, HPReal> sin_cos(const HPReal& x);
HPReal sin(const HPReal& x);
HPReal cos(const HPReal& x);

// sin(pi * i / d) to `digits` significant digits. i and d are positive.
HPReal sin_pi_rational(long i, long d, int digits);

// Nearest integer, ties to even. Throws AmbiguousRounding when the value is
// within its own uncertainty of a half-integer.
BigInt round_nearest(const HPReal& x);
// <x> = |x - round_nearest(x)|, in [0, 1/2].
HPReal frac_dist(const HPReal& x);
// Smallest integer >= x; AmbiguousRounding when x is within its uncertainty
// of an integer it could fall on either side of.
BigInt ceil_to_int(const HPReal& x);
BigInt floor_to_int(const HPReal& x);

// |a - b| <= tol on stored values.
bool approx_equal(const HPReal& a, const HPReal& b, const HPReal& tol);

}  // namespace reclab
