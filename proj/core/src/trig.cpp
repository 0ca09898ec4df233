#include <algorithm>
#include <cmath>

#include "log_math.hpp"
#include "reclab/hpreal.hpp"

namespace reclab {

namespace {

struct Mp {
  explicit Mp(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~Mp() { mpfr_clear(v); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_t v;
};

constexpr unsigned kHalvings = 10;

// sin and cos of |r| <= 1 by Taylor series on r / 2^h followed by h
// double-angle steps. Absolute error stays below 2^-(bits - 2h - 8).
void series_sin_cos(mpfr_t s, mpfr_t c, mpfr_srcptr r, mpfr_prec_t bits) {
  const mpfr_prec_t w = bits + 2 * kHalvings + 16;
  Mp y(w), y2(w), term(w), sum_s(w), sum_c(w), tmp(w);

  mpfr_set(y.v, r, MPFR_RNDN);
  mpfr_div_2ui(y.v, y.v, kHalvings, MPFR_RNDN);
  mpfr_sqr(y2.v, y.v, MPFR_RNDN);

  // sin: y - y^3/3! + ...
  mpfr_set(term.v, y.v, MPFR_RNDN);
  mpfr_set(sum_s.v, y.v, MPFR_RNDN);
  for (unsigned long k = 1;; ++k) {
    mpfr_mul(term.v, term.v, y2.v, MPFR_RNDN);
    mpfr_div_ui(term.v, term.v, (2 * k) * (2 * k + 1), MPFR_RNDN);
    mpfr_neg(term.v, term.v, MPFR_RNDN);
    if (mpfr_zero_p(term.v) ||
        mpfr_get_exp(term.v) < -static_cast<mpfr_exp_t>(w)) {
      break;
    }
    mpfr_add(sum_s.v, sum_s.v, term.v, MPFR_RNDN);
  }

  // cos: 1 - y^2/2! + ...
  mpfr_set_ui(term.v, 1, MPFR_RNDN);
  mpfr_set_ui(sum_c.v, 1, MPFR_RNDN);
  for (unsigned long k = 1;; ++k) {
    mpfr_mul(term.v, term.v, y2.v, MPFR_RNDN);
    mpfr_div_ui(term.v, term.v, (2 * k - 1) * (2 * k), MPFR_RNDN);
    mpfr_neg(term.v, term.v, MPFR_RNDN);
    if (mpfr_zero_p(term.v) ||
        mpfr_get_exp(term.v) < -static_cast<mpfr_exp_t>(w)) {
      break;
    }
    mpfr_add(sum_c.v, sum_c.v, term.v, MPFR_RNDN);
  }

  for (unsigned i = 0; i < kHalvings; ++i) {
    // sin 2y = 2 sin y cos y; cos 2y = (c - s)(c + s)
    mpfr_sub(tmp.v, sum_c.v, sum_s.v, MPFR_RNDN);
    mpfr_add(y.v, sum_c.v, sum_s.v, MPFR_RNDN);
    mpfr_mul(sum_s.v, sum_s.v, sum_c.v, MPFR_RNDN);
    mpfr_mul_2ui(sum_s.v, sum_s.v, 1, MPFR_RNDN);
    mpfr_mul(sum_c.v, tmp.v, y.v, MPFR_RNDN);
  }
  mpfr_set(s, sum_s.v, MPFR_RNDN);
  mpfr_set(c, sum_c.v, MPFR_RNDN);
}

// Reduces x to r = x - k*pi/2 with |r| <= pi/4 (plus rounding), carrying
// enough extra bits of pi that the reduction itself loses nothing even when
// |x| is astronomically large. Returns k mod 4.
unsigned long reduce_quadrant(mpfr_t r, mpfr_srcptr x, mpfr_prec_t bits) {
  const mpfr_exp_t ex = mpfr_get_exp(x);
  const mpfr_prec_t wext =
      bits + mpfr_get_prec(x) + std::max<mpfr_exp_t>(ex, 0) + 64;
  Mp half_pi(wext), t(wext), k_real(wext);
  mpfr_const_pi(half_pi.v, MPFR_RNDN);
  mpfr_div_2ui(half_pi.v, half_pi.v, 1, MPFR_RNDN);

  mpfr_div(t.v, x, half_pi.v, MPFR_RNDN);
  mpfr_rint(k_real.v, t.v, MPFR_RNDN);
  mpz_class k;
  mpfr_get_z(k.get_mpz_t(), k_real.v, MPFR_RNDN);

  mpfr_mul_z(t.v, half_pi.v, k.get_mpz_t(), MPFR_RNDN);
  mpfr_sub(t.v, x, t.v, MPFR_RNDN);
  mpfr_set(r, t.v, MPFR_RNDN);
  return mpz_fdiv_ui(k.get_mpz_t(), 4);
}

}  // namespace

std::pair<HPReal, HPReal> sin_cos(const HPReal& x) {
  const mpfr_prec_t bits = x.bits();
  const double ex = x.log10_uncertainty();
  const double e_eval = -static_cast<double>(bits + 8) * detail::kLog10Of2;

  if (x.is_zero()) {
    Mp zero(bits), one(bits);
    mpfr_set_zero(zero.v, 1);
    mpfr_set_ui(one.v, 1, MPFR_RNDN);
    // cos is flat at 0: a perturbation e moves it by at most e^2/2.
    const double ec = ex == detail::kNegInf ? ex : 2 * ex - detail::kLog10Of2;
    return {HPReal::from_computation(zero.v, ex, false),
            HPReal::from_computation(one.v, ec, false)};
  }

  const mpfr_prec_t w = bits + 40;
  Mp r(w), s(w), c(w);
  const unsigned long quadrant = reduce_quadrant(r.v, x.raw(), w);
  series_sin_cos(s.v, c.v, r.v, w);

  Mp out_s(bits), out_c(bits);
  switch (quadrant) {
    case 0:
      mpfr_set(out_s.v, s.v, MPFR_RNDN);
      mpfr_set(out_c.v, c.v, MPFR_RNDN);
      break;
    case 1:
      mpfr_set(out_s.v, c.v, MPFR_RNDN);
      mpfr_neg(out_c.v, s.v, MPFR_RNDN);
      break;
    case 2:
      mpfr_neg(out_s.v, s.v, MPFR_RNDN);
      mpfr_neg(out_c.v, c.v, MPFR_RNDN);
      break;
    default:
      mpfr_neg(out_s.v, c.v, MPFR_RNDN);
      mpfr_set(out_c.v, s.v, MPFR_RNDN);
      break;
  }
  const double e = detail::log_add(ex, e_eval);
  return {HPReal::from_computation(out_s.v, e, true),
          HPReal::from_computation(out_c.v, e, true)};
}

HPReal sin(const HPReal& x) { return sin_cos(x).first; }
HPReal cos(const HPReal& x) { return sin_cos(x).second; }

HPReal sin_pi_rational(long i, long d, int digits) {
  if (i <= 0 || d <= 0) {
    throw InvalidArgument("sin_pi_rational requires positive i and d");
  }
  if (digits < 1) throw InvalidArgument("sin_pi_rational requires digits >= 1");

  // Exact reduction on the rational i/d: sin(pi m/d) with m in [0, d/2].
  long m = i % (2 * d);
  bool negate = false;
  if (m >= d) {
    m -= d;
    negate = true;
  }
  if (2 * m > d) m = d - m;

  const int working = digits + 10;
  HPReal result;
  if (m == 0) {
    result = HPReal(BigInt(0), working);
  } else if (2 * m == d) {
    result = HPReal(BigInt(1), working);
  } else if (6 * m == d) {
    result = HPReal(BigInt(1), working) / HPReal(BigInt(2), working);
  } else {
    const HPReal angle = pi(working) * HPReal(BigInt(m), working) /
                         HPReal(BigInt(d), working);
    result = sin(angle);
    result = result.with_digits_cap(digits);
  }
  return negate ? -result : result;
}

}  // namespace reclab
