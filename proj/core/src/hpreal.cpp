#include "reclab/hpreal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>

#include "log_math.hpp"

namespace reclab {

namespace {

constexpr mpfr_prec_t kGuardBits = 32;

struct MpfrTemp {
  explicit MpfrTemp(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~MpfrTemp() { mpfr_clear(v); }
  MpfrTemp(const MpfrTemp&) = delete;
  MpfrTemp& operator=(const MpfrTemp&) = delete;
  mpfr_t v;
};

// floor(log10|x|) for nonzero x. The double estimate is trusted unless it
// sits next to an integer, where the decimal exponent is read off exactly.
long decimal_exponent(mpfr_srcptr x) {
  const double l = detail::log10_abs(x);
  const double f = std::floor(l);
  if (l - f > 1e-9 && f + 1 - l > 1e-9) return static_cast<long>(f);
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 10, 2, x, MPFR_RNDZ);
  mpfr_free_str(digits);
  return static_cast<long>(e) - 1;
}

// Error bound of a claim of `digits` significant digits.
double error_for_digits(mpfr_srcptr x, int digits) {
  if (mpfr_zero_p(x)) return -static_cast<double>(digits);
  return static_cast<double>(decimal_exponent(x) - digits + 1);
}

int clamp_digits(double d, int working) {
  if (!(d > 0)) return 0;
  return static_cast<int>(std::min<double>(std::floor(d), working));
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kAmbiguousRounding: return "AmbiguousRounding";
    case ErrorKind::kInsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::kSingularBasis: return "SingularBasis";
    case ErrorKind::kNoUsableVector: return "NoUsableVector";
    case ErrorKind::kNotFound: return "NotFound";
    case ErrorKind::kNoRelation: return "NoRelation";
    case ErrorKind::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kDegenerateFit: return "DegenerateFit";
    case ErrorKind::kVerificationFailed: return "VerificationFailed";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// BigInt helpers

BigInt parse_bigint(std::string_view text) {
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
  if (pos == text.size()) throw ParseError(pos, "expected decimal digit");
  for (std::size_t i = pos; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError(i, "expected decimal digit");
    }
  }
  std::string body(text.substr(text[0] == '+' ? 1 : 0));
  return BigInt(body, 10);
}

std::string to_string(const BigInt& value) { return value.get_str(10); }

int digits10(const BigInt& value) {
  if (value == 0) return 1;
  // mpz_sizeinbase may overshoot by one for base 10.
  std::string s = BigInt(abs(value)).get_str(10);
  return static_cast<int>(s.size());
}

BigInt pow10(unsigned exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

// ---------------------------------------------------------------------------
// HPReal lifecycle

mpfr_prec_t bits_for_digits(int digits) {
  digits = std::max(digits, 1);
  return static_cast<mpfr_prec_t>(std::ceil(digits * detail::kLog2Of10)) +
         kGuardBits;
}

HPReal::HPReal(Bits bits) : err_(detail::kNegInf), exact_(false) {
  mpfr_init2(value_, bits.n);
}

HPReal::HPReal() : HPReal(Bits{bits_for_digits(kDefaultDigits)}) {
  mpfr_set_zero(value_, 1);
  exact_ = true;
}

HPReal::HPReal(long value) : HPReal(Bits{bits_for_digits(kDefaultDigits)}) {
  mpfr_set_si(value_, value, MPFR_RNDN);
  exact_ = true;
}

HPReal::HPReal(const BigInt& value, int working_digits)
    : HPReal(Bits{std::max<mpfr_prec_t>(
          bits_for_digits(working_digits),
          static_cast<mpfr_prec_t>(mpz_sizeinbase(value.get_mpz_t(), 2)) + 1)}) {
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
  exact_ = true;
}

HPReal HPReal::from_double(double value, int working_digits) {
  HPReal r(Bits{std::max<mpfr_prec_t>(bits_for_digits(working_digits), 64)});
  mpfr_set_d(r.value_, value, MPFR_RNDN);
  r.exact_ = true;
  return r;
}

HPReal::HPReal(const HPReal& other)
    : err_(other.err_), exact_(other.exact_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

HPReal::HPReal(HPReal&& other) noexcept
    : err_(other.err_), exact_(other.exact_) {
  // Steal the limbs and leave `other` holding a fresh small value so its
  // destructor stays valid.
  value_[0] = other.value_[0];
  mpfr_init2(other.value_, MPFR_PREC_MIN);
  mpfr_set_zero(other.value_, 1);
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
    err_ = other.err_;
    exact_ = other.exact_;
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
    std::swap(err_, other.err_);
    std::swap(exact_, other.exact_);
  }
  return *this;
}

HPReal::~HPReal() { mpfr_clear(value_); }

int HPReal::working_digits() const {
  const double d = (bits() - kGuardBits) * detail::kLog10Of2;
  return std::max(1, static_cast<int>(std::floor(d)));
}

double HPReal::log10_abs() const { return detail::log10_abs(value_); }

int HPReal::digits() const {
  const int working = working_digits();
  if (exact_) return working;
  if (is_zero()) return clamp_digits(-err_, working);
  return clamp_digits(static_cast<double>(decimal_exponent(value_)) + 1 - err_, working);
}

double HPReal::log10_uncertainty() const {
  return exact_ ? detail::kNegInf : err_;
}

HPReal HPReal::uncertainty() const {
  HPReal r(Bits{bits_for_digits(20)});
  r.exact_ = true;
  if (exact_) {
    mpfr_set_zero(r.value_, 1);
    return r;
  }
  mpfr_set_d(r.value_, err_, MPFR_RNDU);
  mpfr_exp10(r.value_, r.value_, MPFR_RNDU);
  return r;
}

HPReal HPReal::from_computation(mpfr_srcptr value, double propagated,
                                bool rounded, int digits_cap) {
  HPReal r(Bits{mpfr_get_prec(value)});
  mpfr_set(r.value_, value, MPFR_RNDN);
  double e = propagated;
  const bool zero = mpfr_zero_p(value) != 0;
  if (rounded && !zero) {
    e = detail::log_add(e, detail::log10_abs(value) +
                               (1 - static_cast<double>(r.bits())) * detail::kLog10Of2);
  }
  if (std::isnan(e) || e == std::numeric_limits<double>::infinity()) {
    throw InsufficientPrecision("error bound overflowed");
  }
  r.exact_ = e == detail::kNegInf;
  r.err_ = e;
  if (digits_cap >= 0 && (r.exact_ || r.digits() > digits_cap)) {
    r.err_ = std::max(e, error_for_digits(r.value_, digits_cap));
    r.exact_ = false;
  }
  return r;
}

HPReal HPReal::with_working_digits(int working_digits) const {
  MpfrTemp t(bits_for_digits(working_digits));
  const int ternary = mpfr_set(t.v, value_, MPFR_RNDN);
  return from_computation(t.v, log10_uncertainty(), ternary != 0,
                          exact_ ? -1 : digits());
}

HPReal HPReal::with_digits_cap(int digits) const {
  HPReal r(*this);
  digits = std::max(digits, 0);
  if (r.exact_ || r.digits() > digits) {
    r.err_ = std::max(r.exact_ ? detail::kNegInf : r.err_, error_for_digits(r.value_, digits));
    r.exact_ = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Text

HPReal HPReal::parse(std::string_view text, int working_digits) {
  std::size_t pos = 0;
  const std::size_t n = text.size();
  auto is_digit = [&](std::size_t i) {
    return i < n && std::isdigit(static_cast<unsigned char>(text[i]));
  };
  if (pos < n && (text[pos] == '+' || text[pos] == '-')) ++pos;
  int mantissa_digits = 0;
  int significant = 0;
  bool leading = true;
  auto take_digit = [&] {
    if (text[pos] != '0') leading = false;
    if (!leading) ++significant;
    ++mantissa_digits;
    ++pos;
  };
  while (is_digit(pos)) take_digit();
  if (pos < n && text[pos] == '.') {
    ++pos;
    while (is_digit(pos)) take_digit();
  }
  if (mantissa_digits == 0) throw ParseError(pos, "expected decimal digit");
  if (pos < n && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    if (pos < n && (text[pos] == '+' || text[pos] == '-')) ++pos;
    if (!is_digit(pos)) throw ParseError(pos, "expected exponent digits");
    while (is_digit(pos)) ++pos;
  }
  const std::size_t number_end = pos;
  int annotated = -1;
  if (pos < n && text[pos] == '@') {
    ++pos;
    if (!is_digit(pos)) throw ParseError(pos, "expected precision digits after '@'");
    long d = 0;
    while (is_digit(pos)) {
      d = d * 10 + (text[pos] - '0');
      if (d > 1'000'000) throw ParseError(pos, "precision annotation too large");
      ++pos;
    }
    annotated = static_cast<int>(d);
  }
  if (pos != n) throw ParseError(pos, "unexpected character");

  int working = std::max({working_digits > 0 ? working_digits : kDefaultDigits,
                          annotated + 10, significant + 5});
  HPReal r(Bits{bits_for_digits(working)});
  std::string number(text.substr(0, number_end));
  const int ternary = mpfr_strtofr(r.value_, number.c_str(), nullptr, 10, MPFR_RNDN);
  if (annotated >= 0) {
    r.exact_ = false;
    r.err_ = error_for_digits(r.value_, std::min(annotated, r.working_digits()));
    return r;
  }
  if (ternary == 0) {
    r.exact_ = true;
    return r;
  }
  return from_computation(r.value_, detail::kNegInf, true);
}

std::string HPReal::to_decimal(int significant) const {
  if (is_zero()) return "0";
  significant = std::max(significant, 2);
  mpfr_exp_t exp = 0;
  std::unique_ptr<char, void (*)(char*)> raw(
      mpfr_get_str(nullptr, &exp, 10, static_cast<std::size_t>(significant),
                   value_, MPFR_RNDN),
      mpfr_free_str);
  std::string digits(raw.get());
  std::string sign;
  if (!digits.empty() && digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  const long len = static_cast<long>(digits.size());
  const long e = static_cast<long>(exp);
  std::string out;
  if (e > -30 && e <= 60) {
    if (e <= 0) {
      out = "0." + std::string(static_cast<std::size_t>(-e), '0') + digits;
    } else if (e >= len) {
      out = digits + std::string(static_cast<std::size_t>(e - len), '0');
    } else {
      out = digits.substr(0, static_cast<std::size_t>(e)) + "." +
            digits.substr(static_cast<std::size_t>(e));
    }
  } else {
    out = digits.substr(0, 1) + "." + digits.substr(1) + "e" +
          std::to_string(e - 1);
  }
  return sign + out;
}

std::string HPReal::to_string() const {
  if (exact_) {
    std::string s = to_decimal(working_digits());
    if (s.find('.') != std::string::npos && s.find('e') == std::string::npos) {
      while (s.back() == '0') s.pop_back();
      if (s.back() == '.') s.pop_back();
    }
    MpfrTemp back(bits());
    if (mpfr_set_str(back.v, s.c_str(), 10, MPFR_RNDN) == 0 &&
        mpfr_equal_p(back.v, value_)) {
      return s;
    }
    return to_decimal(working_digits()) + "@" +
           std::to_string(working_digits());
  }
  const int d = digits();
  if (is_zero() || d < 1) {
    // Nothing significant survives: report the bound as an inexact zero.
    const double bound = is_zero() ? err_ : std::max(err_, log10_abs()) + detail::kLog10Of2;
    const long z = static_cast<long>(std::floor(-bound + 1e-9));
    return "0@" + std::to_string(std::max(z, 0L));
  }
  return to_decimal(std::max(d, 1)) + "@" + std::to_string(d);
}

// ---------------------------------------------------------------------------
// Arithmetic

HPReal HPReal::operator-() const {
  HPReal r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

HPReal operator+(const HPReal& a, const HPReal& b) {
  MpfrTemp t(std::max(a.bits(), b.bits()));
  const int ternary = mpfr_add(t.v, a.raw(), b.raw(), MPFR_RNDN);
  return HPReal::from_computation(
      t.v, detail::log_add(a.log10_uncertainty(), b.log10_uncertainty()),
      ternary != 0);
}

HPReal operator-(const HPReal& a, const HPReal& b) {
  MpfrTemp t(std::max(a.bits(), b.bits()));
  const int ternary = mpfr_sub(t.v, a.raw(), b.raw(), MPFR_RNDN);
  return HPReal::from_computation(
      t.v, detail::log_add(a.log10_uncertainty(), b.log10_uncertainty()),
      ternary != 0);
}

HPReal operator*(const HPReal& a, const HPReal& b) {
  MpfrTemp t(std::max(a.bits(), b.bits()));
  const int ternary = mpfr_mul(t.v, a.raw(), b.raw(), MPFR_RNDN);
  const double ea = a.log10_uncertainty();
  const double eb = b.log10_uncertainty();
  const double la = a.log10_abs();
  const double lb = b.log10_abs();
  const double e =
      detail::log_add(detail::log_add(la + eb, lb + ea), ea + eb);
  return HPReal::from_computation(t.v, e, ternary != 0);
}

HPReal operator/(const HPReal& a, const HPReal& b) {
  if (b.is_zero()) {
    if (b.exact()) throw InvalidArgument("division by zero");
    throw InsufficientPrecision("divisor indistinguishable from zero");
  }
  const double ea = a.log10_uncertainty();
  const double eb = b.log10_uncertainty();
  const double la = a.log10_abs();
  const double lb = b.log10_abs();
  if (eb >= lb - detail::kLog10Of2) {
    throw InsufficientPrecision("divisor uncertainty exceeds half its value");
  }
  MpfrTemp t(std::max(a.bits(), b.bits()));
  const int ternary = mpfr_div(t.v, a.raw(), b.raw(), MPFR_RNDN);
  double e = detail::kNegInf;
  if (ea != detail::kNegInf || eb != detail::kNegInf) {
    const double num = detail::log_add(ea, la - lb + eb);
    const double den = lb + std::log10(1 - std::pow(10.0, eb - lb));
    e = num - den;
  }
  return HPReal::from_computation(t.v, e, ternary != 0);
}

HPReal& HPReal::operator+=(const HPReal& rhs) { return *this = *this + rhs; }
HPReal& HPReal::operator-=(const HPReal& rhs) { return *this = *this - rhs; }
HPReal& HPReal::operator*=(const HPReal& rhs) { return *this = *this * rhs; }
HPReal& HPReal::operator/=(const HPReal& rhs) { return *this = *this / rhs; }

std::partial_ordering operator<=>(const HPReal& a, const HPReal& b) {
  if (mpfr_nan_p(a.value_) || mpfr_nan_p(b.value_)) {
    return std::partial_ordering::unordered;
  }
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

HPReal abs(const HPReal& x) { return x.sign() < 0 ? -x : x; }

HPReal sqrt(const HPReal& x) {
  const double ex = x.log10_uncertainty();
  const double lx = x.log10_abs();
  if (x.sign() < 0) {
    if (ex < lx) throw InvalidArgument("square root of a negative number");
  }
  MpfrTemp t(x.bits());
  int ternary = 0;
  if (x.sign() < 0) {
    mpfr_set_zero(t.v, 1);
  } else {
    ternary = mpfr_sqrt(t.v, x.raw(), MPFR_RNDN);
  }
  double e = detail::kNegInf;
  if (ex != detail::kNegInf) e = (ex >= lx) ? ex / 2 : ex - 0.5 * lx;
  return HPReal::from_computation(t.v, e, ternary != 0);
}

HPReal pi(int digits) {
  MpfrTemp t(bits_for_digits(digits));
  mpfr_const_pi(t.v, MPFR_RNDN);
  return HPReal::from_computation(t.v, detail::kNegInf, true);
}

HPReal pow(const HPReal& x, const HPReal& y) {
  if (x.sign() <= 0) throw InvalidArgument("pow requires a positive base");
  const double ex = x.log10_uncertainty();
  const double lx = x.log10_abs();
  const double rel = ex - lx;
  if (rel > -1) throw InsufficientPrecision("pow base too uncertain");
  MpfrTemp t(std::max(x.bits(), y.bits()));
  const int ternary = mpfr_pow(t.v, x.raw(), y.raw(), MPFR_RNDN);
  const double lr = detail::log10_abs(t.v);
  double e = detail::kNegInf;
  if (ex != detail::kNegInf && !y.is_zero()) {
    e = lr + y.log10_abs() + rel + detail::kLog10Of2;
  }
  const double ey = y.log10_uncertainty();
  if (ey != detail::kNegInf) {
    const double ln_x = std::abs(lx / detail::kLog10OfE);
    e = detail::log_add(e, lr + std::log10(std::max(ln_x, 1e-300)) + ey +
                               detail::kLog10Of2);
  }
  return HPReal::from_computation(t.v, e, ternary != 0);
}

HPReal log10(const HPReal& x) {
  if (x.sign() <= 0) throw InvalidArgument("log10 requires a positive argument");
  const double ex = x.log10_uncertainty();
  const double rel = ex - x.log10_abs();
  if (rel > -1) throw InsufficientPrecision("log10 argument too uncertain");
  MpfrTemp t(x.bits());
  const int ternary = mpfr_log10(t.v, x.raw(), MPFR_RNDN);
  double e = detail::kNegInf;
  if (ex != detail::kNegInf) {
    e = rel - std::log10(std::log(10.0)) + detail::kLog10Of2;
  }
  return HPReal::from_computation(t.v, e, ternary != 0);
}

HPReal atan2(const HPReal& y, const HPReal& x) {
  const double e_in = detail::log_add(x.log10_uncertainty(), y.log10_uncertainty());
  const double mag = std::max(x.log10_abs(), y.log10_abs());
  if (x.is_zero() && y.is_zero()) {
    throw InvalidArgument("atan2 of the origin is undefined");
  }
  if (e_in > mag - 1) throw InsufficientPrecision("atan2 arguments too uncertain");
  MpfrTemp t(std::max(x.bits(), y.bits()));
  const int ternary = mpfr_atan2(t.v, y.raw(), x.raw(), MPFR_RNDN);
  double e = detail::kNegInf;
  if (e_in != detail::kNegInf) e = e_in - mag + detail::kLog10Of2;
  return HPReal::from_computation(t.v, e, ternary != 0);
}

// ---------------------------------------------------------------------------
// Roundings

BigInt round_nearest(const HPReal& x) {
  MpfrTemp r(x.bits());
  mpfr_rint(r.v, x.raw(), MPFR_RNDN);  // ties to even
  if (!x.exact()) {
    // |x - r| is exact at x's precision: both are multiples of ulp(x).
    MpfrTemp margin(x.bits() + 2);
    mpfr_sub(margin.v, x.raw(), r.v, MPFR_RNDN);
    mpfr_abs(margin.v, margin.v, MPFR_RNDN);
    mpfr_d_sub(margin.v, 0.5, margin.v, MPFR_RNDN);
    const double e = x.log10_uncertainty();
    if (mpfr_zero_p(margin.v) || detail::log10_abs(margin.v) <= e) {
      throw AmbiguousRounding(
          "value " + x.to_decimal(std::min(x.working_digits(), 40)) +
          " is within its uncertainty of a half-integer; raise precision");
    }
  }
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), r.v, MPFR_RNDN);
  return out;
}

HPReal frac_dist(const HPReal& x) {
  const BigInt nearest = round_nearest(x);
  return abs(x - HPReal(nearest, x.working_digits()));
}

namespace {

void check_integer_boundary(const HPReal& x) {
  if (x.exact()) return;
  MpfrTemp r(x.bits());
  mpfr_rint(r.v, x.raw(), MPFR_RNDN);
  MpfrTemp gap(x.bits() + 2);
  mpfr_sub(gap.v, x.raw(), r.v, MPFR_RNDN);
  if (mpfr_zero_p(gap.v) ||
      detail::log10_abs(gap.v) <= x.log10_uncertainty()) {
    throw AmbiguousRounding("value is within its uncertainty of an integer");
  }
}

}  // namespace

BigInt ceil_to_int(const HPReal& x) {
  check_integer_boundary(x);
  MpfrTemp r(x.bits());
  mpfr_ceil(r.v, x.raw());
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), r.v, MPFR_RNDN);
  return out;
}

BigInt floor_to_int(const HPReal& x) {
  check_integer_boundary(x);
  MpfrTemp r(x.bits());
  mpfr_floor(r.v, x.raw());
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), r.v, MPFR_RNDN);
  return out;
}

bool approx_equal(const HPReal& a, const HPReal& b, const HPReal& tol) {
  const mpfr_prec_t bits = std::max(a.bits(), b.bits()) + 64;
  MpfrTemp d(bits);
  mpfr_sub(d.v, a.raw(), b.raw(), MPFR_RNDN);
  mpfr_abs(d.v, d.v, MPFR_RNDN);
  return mpfr_lessequal_p(d.v, tol.raw()) != 0;
}

}  // namespace reclab
