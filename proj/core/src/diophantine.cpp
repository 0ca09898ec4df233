#include "reclab/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reclab {

void ApproximationProblem::validate() const {
  if (alphas.empty()) throw InvalidArgument("approximation needs at least one alpha");
  if (Q < 2) throw InvalidArgument("Q must be at least 2");
}

bool ApproximationResult::within_bounds() const {
  return HPReal(q, q_bound.working_digits()) <= q_bound && error <= error_bound;
}

LatticeBasis build_matrix(const ApproximationProblem& problem) {
  problem.validate();
  const std::size_t n = problem.alphas.size();
  IntMatrix rows(n + 1, IntVector(n + 1, 0));
  rows[0][0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const HPReal& alpha = problem.alphas[i];
    const HPReal scaled = HPReal(problem.Q, alpha.working_digits()) * alpha;
    rows[0][i + 1] = round_nearest(scaled);
    rows[i + 1][i + 1] = problem.Q;
  }
  return LatticeBasis(std::move(rows));
}

HPReal max_frac_dist(const std::vector<HPReal>& alphas, const BigInt& q) {
  if (alphas.empty()) throw InvalidArgument("max_frac_dist needs at least one alpha");
  HPReal worst = frac_dist(HPReal(q, alphas[0].working_digits()) * alphas[0]);
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    HPReal d = frac_dist(HPReal(q, alphas[i].working_digits()) * alphas[i]);
    if (d > worst) worst = std::move(d);
  }
  return worst;
}

HPReal lll_q_bound(std::size_t n, const BigInt& Q, int digits) {
  const int working = digits + 10;
  const HPReal two(BigInt(2), working);
  const HPReal nn(BigInt(static_cast<long>(n)), working);
  const HPReal n1(BigInt(static_cast<long>(n + 1)), working);
  const HPReal q_real(Q, working);
  return (pow(two, nn / HPReal(BigInt(4), working)) * pow(q_real, nn / n1))
      .with_digits_cap(digits);
}

HPReal lll_error_bound(std::size_t n, const BigInt& Q, int digits) {
  const int working = digits + 10;
  const HPReal two(BigInt(2), working);
  const HPReal nn(BigInt(static_cast<long>(n)), working);
  const HPReal n1(BigInt(static_cast<long>(n + 1)), working);
  const HPReal q_real(Q, working);
  const HPReal half_root5 = sqrt(HPReal(BigInt(5), working)) / two;
  return (half_root5 * pow(two, nn / HPReal(BigInt(4), working)) *
          pow(q_real, -(HPReal(BigInt(1), working) / n1)))
      .with_digits_cap(digits);
}

namespace {

// Result for reduced row `row_index`, whose first component must be nonzero.
ApproximationResult result_from_row(const ApproximationProblem& problem,
                                    const LatticeBasis& basis, IntVector row,
                                    std::size_t row_index) {
  const std::size_t n = problem.alphas.size();
  if (row[0] < 0) {
    for (auto& x : row) x = -x;
  }
  ApproximationResult result;
  result.q = row[0];
  result.row_index = row_index;
  result.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // row[i+1] = q round(Q a_i) - p_i Q
    BigInt numer = result.q * basis[0][i + 1] - row[i + 1];
    BigInt rem;
    mpz_tdiv_qr(result.p[i].get_mpz_t(), rem.get_mpz_t(), numer.get_mpz_t(),
                problem.Q.get_mpz_t());
    if (rem != 0) throw InvalidArgument("reduced vector is not a lattice vector");
  }
  result.error = max_frac_dist(problem.alphas, result.q);
  result.q_bound = lll_q_bound(n, problem.Q);
  result.error_bound = lll_error_bound(n, problem.Q);
  result.reduced_first_vector = std::move(row);
  return result;
}

}  // namespace

ApproximationResult solve(const ApproximationProblem& problem,
                          const SolveOptions& options) {
  const LatticeBasis basis = build_matrix(problem);
  const ReductionOutput reduced = lll_reduce(basis, options.delta);
  for (std::size_t i = 0; i < reduced.reduced.rank(); ++i) {
    if (reduced.reduced[i][0] != 0) {
      return result_from_row(problem, basis, reduced.reduced[i], i);
    }
  }
  throw NoUsableVector("every reduced vector has zero first component; increase Q");
}

std::vector<ApproximationResult> solve_all_rows(const ApproximationProblem& problem,
                                                const SolveOptions& options) {
  const LatticeBasis basis = build_matrix(problem);
  const ReductionOutput reduced = lll_reduce(basis, options.delta);
  std::vector<ApproximationResult> out;
  for (std::size_t i = 0; i < reduced.reduced.rank(); ++i) {
    if (reduced.reduced[i][0] != 0) {
      out.push_back(result_from_row(problem, basis, reduced.reduced[i], i));
    }
  }
  if (out.empty()) {
    throw NoUsableVector("every reduced vector has zero first component; increase Q");
  }
  return out;
}

BigInt choose_q_parameter(int n, const HPReal& C) {
  if (n < 1) throw InvalidArgument("choose_q_parameter requires n >= 1");
  if (C <= HPReal(1L)) throw InvalidArgument("choose_q_parameter requires C > 1");
  const double log_c = std::max(C.log10_abs(), 0.0);
  const int estimate = static_cast<int>((n + 1) * (log_c + 0.1 + 0.0753 * n)) + 1;
  const int working = std::max(estimate + 30, C.working_digits());
  const HPReal two(BigInt(2), working);
  const HPReal n1(BigInt(n + 1), working);
  const HPReal half_root5 = sqrt(HPReal(BigInt(5), working)) / two;
  const HPReal exponent2 = HPReal(BigInt(n * (n + 1)), working) /
                           HPReal(BigInt(4), working);
  const HPReal value = pow(half_root5, n1) * pow(two, exponent2) *
                       pow(C.with_working_digits(working), n1);
  if (!C.exact()) {
    // Smallest integer above every value C's uncertainty allows.
    const HPReal upper = value + HPReal(2L) * value.uncertainty();
    BigInt k;
    mpfr_get_z(k.get_mpz_t(), upper.raw(), MPFR_RNDU);
    return k;
  }

  // The bound can land exactly on an integer (n = 3, even C). Its fourth
  // power is rational, so settle the ceiling exactly.
  mpq_class c;
  mpfr_get_q(c.get_mpq_t(), C.raw());
  const unsigned long m = static_cast<unsigned long>(n + 1);
  mpq_class v4 = 1;
  mpz_class t;
  mpz_ui_pow_ui(t.get_mpz_t(), 5, 2 * m);
  v4 *= t;
  const long e2 = static_cast<long>(n) * (n + 1) - 4 * static_cast<long>(m);
  mpz_ui_pow_ui(t.get_mpz_t(), 2, static_cast<unsigned long>(std::labs(e2)));
  if (e2 >= 0) v4 *= t; else v4 /= t;
  mpq_class c4 = c * c;
  c4 *= c4;
  for (unsigned long i = 0; i < m; ++i) v4 *= c4;
  BigInt k;
  mpfr_get_z(k.get_mpz_t(), value.raw(), MPFR_RNDD);
  k -= 1;
  if (k < 1) k = 1;
  for (;;) {
    mpz_class k4 = k * k;
    k4 *= k4;
    if (mpq_class(k4) >= v4) return k;
    ++k;
  }
}

HPReal q_bound_for_precision(int n, const HPReal& C, int digits) {
  const int working = digits + 10;
  const HPReal nn(BigInt(n), working);
  const HPReal five(BigInt(5), working);
  const HPReal two(BigInt(2), working);
  return (pow(five, nn / two) *
          pow(two, HPReal(BigInt(n * (n - 3)), working) / HPReal(BigInt(4), working)) *
          pow(C.with_working_digits(working), nn))
      .with_digits_cap(digits);
}

namespace {

using u128 = unsigned __int128;

// q * alpha mod 1 tracked as a 128-bit fixed-point accumulator. The stored
// step differs from alpha * 2^128 by at most `slack` units, so after q steps
// the accumulator is within q * slack units of the true value.
struct FixedStep {
  u128 step = 0;
  double slack = 0;
};

FixedStep to_fixed(const HPReal& alpha) {
  mpfr_t t;
  mpfr_init2(t, alpha.bits() + 160);
  mpfr_mul_2ui(t, alpha.raw(), 128, MPFR_RNDN);
  mpfr_rint(t, t, MPFR_RNDN);
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  mpz_fdiv_r_2exp(z.get_mpz_t(), z.get_mpz_t(), 128);
  BigInt hi = z >> 64;
  BigInt lo = z - (hi << 64);
  FixedStep f;
  f.step = (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
           static_cast<u128>(mpz_get_ui(lo.get_mpz_t()));
  const double unc = alpha.log10_uncertainty();
  f.slack = 0.5 + (std::isinf(unc) ? 0.0 : std::pow(10.0, unc + 128 * 0.30102999566398119521));
  return f;
}

u128 fixed_threshold(const HPReal& epsilon) {
  if (epsilon >= HPReal::parse("0.5")) return static_cast<u128>(1) << 127;
  if (epsilon.sign() < 0) return 0;
  mpfr_t t;
  mpfr_init2(t, epsilon.bits() + 160);
  mpfr_mul_2ui(t, epsilon.raw(), 128, MPFR_RNDN);
  mpfr_floor(t, t);
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  BigInt hi = z >> 64;
  BigInt lo = z - (hi << 64);
  return (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
         static_cast<u128>(mpz_get_ui(lo.get_mpz_t()));
}

double to_double(u128 x) {
  return static_cast<double>(static_cast<std::uint64_t>(x >> 64)) * 18446744073709551616.0 +
         static_cast<double>(static_cast<std::uint64_t>(x));
}

// Scans q = 1..q_max, calling on_hit(q) for each q satisfying all alphas.
// Returns early when on_hit returns false.
template <typename OnHit>
void scan(const std::vector<HPReal>& alphas, const HPReal& epsilon,
          std::uint64_t q_max, OnHit on_hit) {
  if (alphas.empty()) throw InvalidArgument("scan needs at least one alpha");
  std::vector<FixedStep> steps;
  steps.reserve(alphas.size());
  for (const auto& a : alphas) steps.push_back(to_fixed(a));
  const u128 threshold = fixed_threshold(epsilon);
  const u128 half = static_cast<u128>(1) << 127;
  std::vector<u128> acc(alphas.size(), 0);

  for (std::uint64_t q = 1; q <= q_max; ++q) {
    bool all = true;
    bool borderline = false;
    for (std::size_t i = 0; i < steps.size(); ++i) acc[i] += steps[i].step;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const u128 dist = acc[i] < half ? acc[i] : static_cast<u128>(-acc[i]);
      const double margin = static_cast<double>(q) * steps[i].slack + 2;
      const double gap = dist > threshold ? to_double(dist - threshold)
                                          : -to_double(threshold - dist);
      if (gap > margin) {
        all = false;
        break;
      }
      if (gap >= -margin) borderline = true;
    }
    if (!all) continue;
    if (borderline) {
      const HPReal err = max_frac_dist(alphas, BigInt(static_cast<unsigned long>(q)));
      if (err > epsilon) continue;
    }
    if (!on_hit(q)) return;
  }
}

}  // namespace

BruteForceHit brute_force_best(const std::vector<HPReal>& alphas,
                               const HPReal& epsilon, std::uint64_t q_max) {
  std::uint64_t found = 0;
  scan(alphas, epsilon, q_max, [&](std::uint64_t q) {
    found = q;
    return false;
  });
  if (found == 0) {
    throw NotFound("no q <= " + std::to_string(q_max) +
                   " meets the requested epsilon");
  }
  return {found, max_frac_dist(alphas, BigInt(static_cast<unsigned long>(found)))};
}

std::vector<std::uint64_t> enumerate_valid_q(const std::vector<HPReal>& alphas,
                                             const HPReal& epsilon,
                                             std::uint64_t q_max) {
  std::vector<std::uint64_t> out;
  scan(alphas, epsilon, q_max, [&](std::uint64_t q) {
    out.push_back(q);
    return true;
  });
  return out;
}

}  // namespace reclab
