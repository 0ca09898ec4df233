#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "reclab/diophantine.hpp"
#include "reclab/hpreal.hpp"

namespace reclab {

struct ScalingSample {
  BigInt Q;
  BigInt q;
  HPReal error;
};

struct LineFit {
  HPReal slope;
  HPReal intercept;
  // root-mean-square of y - (slope x + intercept)
  HPReal residual;
};

// Ordinary least squares y = slope x + intercept. DegenerateFit when fewer
// than two distinct x values are given.
LineFit fit_loglog(const std::vector<std::pair<HPReal, HPReal>>& points);

struct ScalingRun {
  int N = 0;
  std::vector<ScalingSample> samples;
  LineFit fit;
  // 1 / (N - 1 - relations.size())
  mpq_class predicted_slope;
  std::vector<RelationResult> relations;
};

struct ScalingOptions {
  HPReal relation_threshold = default_relation_threshold();
  BigInt coeff_bound = default_coeff_bound();
  bool parallel = true;
};

// Solves the chain-ratio problem for every Q and fits
// log10(1/error) against log10 q. Q_list must be strictly ascending with at
// least five entries.
ScalingRun scaling_sweep(int N, const std::vector<BigInt>& Q_list,
                         const ScalingOptions& options = {});

// Evenly spaced exponents: "1e20:1e40:21" style ranges become
// 10^20, 10^21, ..., 10^40. Non-integer steps are rounded to the nearest
// integer Q.
std::vector<BigInt> log_spaced_q(int first_exponent, int last_exponent, int count);

// cos t + sum_r cos(sqrt(r) t)
HPReal h_eval(const HPReal& t, const std::vector<long>& roots = {2, 3, 5});

struct ChallengeResult {
  BigInt Q;
  BigInt q;
  HPReal t;
  HPReal h;
  // (1 + roots) - h(t)
  HPReal gap;
  int attempts = 0;
};

// t = 2 pi q with |h(t) - (1 + roots)| <= epsilon and t > 10, verified by
// h_eval. Throws VerificationFailed after the bounded retries.
ChallengeResult h_challenge(const HPReal& epsilon, const std::vector<long>& roots = {2, 3, 5},
                            int digits = 200);

struct Complex {
  HPReal re;
  HPReal im;
};

struct QuantumSpectrum {
  std::vector<HPReal> energies;   // ascending
  std::vector<Complex> amplitudes;

  // Sizes agree, energies ascend, sum |a_m|^2 = 1 within its uncertainty.
  void validate() const;
};

// sqrt(sum |a_m|^2 4 sin^2(E_m t / 2))
HPReal quantum_distance(const QuantumSpectrum& spectrum, const HPReal& t);
// |psi(t) - psi(0)| from the evolved components a_m (e^{-i E_m t} - 1).
HPReal quantum_distance_direct(const QuantumSpectrum& spectrum, const HPReal& t);

struct QuantumRecurrence {
  BigInt Q;
  BigInt q;
  HPReal t;
  HPReal distance;
  int attempts = 0;
};

// t = 2 pi q / E_N from the ratios E_i / E_N, verified by quantum_distance.
QuantumRecurrence quantum_recurrence(const QuantumSpectrum& spectrum,
                                     const HPReal& epsilon, int digits = 200);

// (last - first) / (count - 1); 0 for fewer than two hits.
double mean_gap(const std::vector<std::uint64_t>& hits);

}  // namespace reclab
