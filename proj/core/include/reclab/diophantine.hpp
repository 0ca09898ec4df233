#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reclab/hpreal.hpp"
#include "reclab/lattice.hpp"

namespace reclab {

// Guard digits on top of digits10(Q) for the alphas fed to build_matrix.
inline constexpr int kMatrixGuardDigits = 30;
// Guard digits on top of digits10(q) when the error is re-evaluated.
inline constexpr int kEvaluationGuardDigits = 170;

struct ApproximationProblem {
  std::vector<HPReal> alphas;
  BigInt Q;
  std::optional<HPReal> target_epsilon;

  // n >= 1 and Q >= 2.
  void validate() const;
};

struct ApproximationResult {
  BigInt q;
  IntVector p;
  // max_i <q alpha_i>, recomputed from the alphas, never read off the lattice.
  HPReal error;
  // 2^(n/4) Q^(n/(n+1))
  HPReal q_bound;
  // (sqrt5/2) 2^(n/4) Q^(-1/(n+1))
  HPReal error_bound;
  IntVector reduced_first_vector;
  // Which reduced row supplied q (0 unless earlier rows had q = 0).
  std::size_t row_index = 0;

  bool within_bounds() const;
};

// Row 0: (1, round(Q a_1), ..., round(Q a_n)); rows 1..n: Q on the diagonal.
LatticeBasis build_matrix(const ApproximationProblem& problem);

struct SolveOptions {
  Delta delta{};
};

ApproximationResult solve(const ApproximationProblem& problem,
                          const SolveOptions& options = {});

// One result per reduced row with a nonzero first component, in row order.
// Every row is an equally valid candidate; which one comes first depends on
// the reduction's tie-breaking.
std::vector<ApproximationResult> solve_all_rows(const ApproximationProblem& problem,
                                                const SolveOptions& options = {});

// max_i <q alpha_i>
HPReal max_frac_dist(const std::vector<HPReal>& alphas, const BigInt& q);

HPReal lll_q_bound(std::size_t n, const BigInt& Q, int digits = 30);
HPReal lll_error_bound(std::size_t n, const BigInt& Q, int digits = 30);

// Smallest integer Q >= (sqrt5/2)^(n+1) 2^(n(n+1)/4) C^(n+1); with that Q the
// solver's error is at most 1/C. For an inexact C the ceiling is taken above
// the whole uncertainty interval of the expression.
BigInt choose_q_parameter(int n, const HPReal& C);
// 5^(n/2) 2^(n(n-3)/4) C^n, the matching bound on q.
HPReal q_bound_for_precision(int n, const HPReal& C, int digits = 30);

struct BruteForceHit {
  std::uint64_t q;
  HPReal error;
};

// Smallest q in [1, q_max] with max_i <q alpha_i> <= epsilon. Throws
// NotFound when there is none.
BruteForceHit brute_force_best(const std::vector<HPReal>& alphas,
                               const HPReal& epsilon, std::uint64_t q_max);

// Every q in [1, q_max] with max_i <q alpha_i> <= epsilon, ascending.
std::vector<std::uint64_t> enumerate_valid_q(const std::vector<HPReal>& alphas,
                                             const HPReal& epsilon,
                                             std::uint64_t q_max);

struct RelationResult {
  IntVector coeffs;
  // |sum c_i v_i|
  HPReal residual;
};

inline constexpr int kDefaultRelationThresholdExponent = -30;
inline constexpr unsigned kDefaultCoeffBoundExponent = 6;

HPReal default_relation_threshold();
BigInt default_coeff_bound();

// Small integer c with |sum c_i v_i| <= threshold and max|c_i| <= coeff_bound,
// found as the first qualifying row of an LLL-reduced relation lattice.
// The leading nonzero coefficient is made positive. Throws NoRelation.
RelationResult find_integer_relation(const std::vector<HPReal>& values,
                                     const HPReal& threshold,
                                     const BigInt& coeff_bound);

// All qualifying rows of the reduced relation lattice; they are linearly
// independent, so the count is the number of independent relations found.
std::vector<RelationResult> find_integer_relations(
    const std::vector<HPReal>& values, const HPReal& threshold,
    const BigInt& coeff_bound);

}  // namespace reclab
