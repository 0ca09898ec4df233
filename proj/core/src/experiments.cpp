#include "reclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "reclab/chain.hpp"

namespace reclab {

namespace {

constexpr double kMaxPhaseLog10Uncertainty = -6;
constexpr int kFitDigits = 40;
constexpr int kMaxRetries = 5;

HPReal cos_checked(const HPReal& arg) {
  if (arg.log10_uncertainty() > kMaxPhaseLog10Uncertainty) {
    throw InsufficientPrecision("argument " + arg.to_decimal(12) +
                                " is not resolvable mod 2 pi");
  }
  return cos(arg);
}

HPReal two_pi(int digits) { return pi(digits) * HPReal(BigInt(2), digits); }

// Digits the relation lattice needs for m values: the scaling column reaches
// roughly 10^(m digits10(bound)), and residuals must still resolve below the
// threshold after that.
int relation_digits(std::size_t m, const HPReal& threshold, const BigInt& bound) {
  const double need = std::max(static_cast<double>(m) * digits10(bound),
                               -threshold.log10_abs());
  return static_cast<int>(std::ceil(need)) + 40;
}

bool square_free(long r) {
  for (long p = 2; p * p <= r; ++p) {
    if (r % (p * p) == 0) return false;
  }
  return true;
}

}  // namespace

LineFit fit_loglog(const std::vector<std::pair<HPReal, HPReal>>& points) {
  if (points.size() < 2) throw DegenerateFit("a line fit needs at least two points");
  const HPReal count(static_cast<long>(points.size()));
  HPReal sx(BigInt(0), kFitDigits), sy(BigInt(0), kFitDigits);
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const HPReal mx = sx / count;
  const HPReal my = sy / count;
  HPReal sxx(BigInt(0), kFitDigits), sxy(BigInt(0), kFitDigits);
  for (const auto& [x, y] : points) {
    const HPReal dx = x - mx;
    sxx += dx * dx;
    sxy += dx * (y - my);
  }
  if (sxx.is_zero()) throw DegenerateFit("all x values coincide");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  HPReal ss(BigInt(0), kFitDigits);
  for (const auto& [x, y] : points) {
    const HPReal r = y - (fit.slope * x + fit.intercept);
    ss += r * r;
  }
  fit.residual = ss.is_zero() ? ss : sqrt(ss / count);
  return fit;
}

std::vector<BigInt> log_spaced_q(int first_exponent, int last_exponent, int count) {
  if (count < 2) throw InvalidArgument("a Q range needs at least two points");
  if (first_exponent < 0 || last_exponent <= first_exponent) {
    throw InvalidArgument("Q range must ascend from 10^0 or above");
  }
  const int digits = last_exponent + 20;
  std::vector<BigInt> out;
  for (int k = 0; k < count; ++k) {
    const long num = static_cast<long>(first_exponent) * (count - 1) +
                     static_cast<long>(k) * (last_exponent - first_exponent);
    const long den = count - 1;
    if (num % den == 0) {
      out.push_back(pow10(static_cast<unsigned>(num / den)));
    } else {
      const HPReal e = HPReal(BigInt(num), digits) / HPReal(BigInt(den), digits);
      out.push_back(round_nearest(pow(HPReal(BigInt(10), digits), e)));
    }
    if (out.size() > 1 && out.back() <= out[out.size() - 2]) {
      throw InvalidArgument("Q range has repeated values; use fewer points");
    }
  }
  return out;
}

ScalingRun scaling_sweep(int N, const std::vector<BigInt>& Q_list,
                         const ScalingOptions& options) {
  if (N < 2) throw InvalidArgument("chain needs N >= 2");
  if (Q_list.size() < 5) throw InvalidArgument("a scaling sweep needs at least five Q values");
  for (std::size_t i = 1; i < Q_list.size(); ++i) {
    if (Q_list[i] <= Q_list[i - 1]) throw InvalidArgument("Q values must ascend");
  }

  const int digits = digits10(Q_list.back()) + kMatrixGuardDigits;
  const std::vector<HPReal> alphas = chain_ratios(N, digits);

  auto run_one = [&alphas](const BigInt& Q) {
    ApproximationProblem problem{alphas, Q, std::nullopt};
    ApproximationResult r = solve(problem);
    return ScalingSample{Q, r.q, r.error};
  };

  ScalingRun run;
  run.N = N;
  if (options.parallel) {
    std::vector<std::future<ScalingSample>> jobs;
    for (const auto& Q : Q_list) jobs.push_back(std::async(std::launch::async, run_one, Q));
    for (auto& j : jobs) run.samples.push_back(j.get());
  } else {
    for (const auto& Q : Q_list) run.samples.push_back(run_one(Q));
  }

  std::vector<std::pair<HPReal, HPReal>> points;
  for (const auto& s : run.samples) {
    if (s.error.sign() <= 0) throw DegenerateFit("zero approximation error at Q = " + to_string(s.Q));
    points.emplace_back(log10(HPReal(s.q, kFitDigits)), -log10(s.error));
  }
  run.fit = fit_loglog(points);

  const int rel_digits = relation_digits(static_cast<std::size_t>(N),
                                         options.relation_threshold, options.coeff_bound);
  run.relations = find_integer_relations(chain_frequencies(N, rel_digits),
                                         options.relation_threshold, options.coeff_bound);
  const long effective = static_cast<long>(N - 1) - static_cast<long>(run.relations.size());
  if (effective < 1) throw DegenerateFit("relations leave no independent ratio");
  run.predicted_slope = mpq_class(1, effective);
  return run;
}

HPReal h_eval(const HPReal& t, const std::vector<long>& roots) {
  const int w = t.working_digits();
  HPReal sum = cos_checked(t);
  for (long r : roots) {
    if (r < 1) throw InvalidArgument("roots must be positive");
    sum += cos_checked(sqrt(HPReal(BigInt(r), w)) * t);
  }
  return sum;
}

ChallengeResult h_challenge(const HPReal& epsilon, const std::vector<long>& roots,
                            int digits) {
  if (roots.empty()) throw InvalidArgument("h_challenge needs at least one root");
  if (epsilon.sign() <= 0) throw InvalidArgument("epsilon must be positive");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i] < 2 || !square_free(roots[i])) {
      throw InvalidArgument("root " + std::to_string(roots[i]) + " is not square-free and > 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (roots[i] == roots[j]) throw InvalidArgument("roots must be distinct");
    }
  }
  const int n = static_cast<int>(roots.size());
  const HPReal top(static_cast<long>(n + 1));

  // 1 - cos(2 pi d) <= 2 pi^2 d^2, so <q sqrt r> <= delta for every root keeps
  // the total shortfall within n 2 pi^2 delta^2 = epsilon.
  const int bd = 40;
  const HPReal pi_b = pi(bd);
  const HPReal delta = sqrt(epsilon.with_working_digits(bd) /
                            (HPReal(BigInt(2 * n), bd) * pi_b * pi_b));
  HPReal C = HPReal(BigInt(1), bd) / delta;
  if (C < HPReal(2L)) C = HPReal(BigInt(2), bd);
  BigInt Q = choose_q_parameter(n, C);

  for (int attempt = 1; attempt <= kMaxRetries + 1; ++attempt) {
    const int work = std::max(digits, digits10(Q) + kMatrixGuardDigits);
    std::vector<HPReal> alphas;
    for (long r : roots) alphas.push_back(sqrt(HPReal(BigInt(r), work)));
    const ApproximationResult r = solve({alphas, Q, epsilon});

    const int tw = std::max(digits, digits10(r.q) + kMatrixGuardDigits);
    const HPReal t = two_pi(tw) * HPReal(r.q, tw);
    if (t > HPReal(10L)) {
      const HPReal h = h_eval(t, roots);
      const HPReal gap = top - h;
      if (gap <= epsilon) return {Q, r.q, t, h, gap, attempt};
    }
    Q *= pow10(static_cast<unsigned>(n + 1));
  }
  throw VerificationFailed("no verified t after " + std::to_string(kMaxRetries) +
                           " retries");
}

void QuantumSpectrum::validate() const {
  if (energies.empty()) throw InvalidArgument("spectrum has no levels");
  if (energies.size() != amplitudes.size()) {
    throw DimensionMismatch("energies and amplitudes differ in length");
  }
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] < energies[i - 1]) throw InvalidArgument("energies must ascend");
  }
  HPReal norm(BigInt(0), amplitudes[0].re.working_digits());
  for (const auto& a : amplitudes) norm += a.re * a.re + a.im * a.im;
  const HPReal off = abs(norm - HPReal(1L));
  const double slack = std::max(norm.log10_uncertainty() + 1,
                                5.0 - norm.working_digits());
  if (!off.is_zero() && off.log10_abs() > slack) {
    throw InvalidArgument("amplitudes are not normalized (|sum|a|^2 - 1| = " +
                          off.to_decimal(6) + ")");
  }
}

HPReal quantum_distance(const QuantumSpectrum& spectrum, const HPReal& t) {
  spectrum.validate();
  const int w = std::max(t.working_digits(), spectrum.energies[0].working_digits());
  HPReal sum(BigInt(0), w);
  const HPReal two(BigInt(2), w);
  for (std::size_t m = 0; m < spectrum.energies.size(); ++m) {
    const HPReal arg = spectrum.energies[m] * t / two;
    if (arg.log10_uncertainty() > kMaxPhaseLog10Uncertainty) {
      throw InsufficientPrecision("phase E t is not resolvable mod 2 pi");
    }
    const HPReal s = sin(arg);
    const auto& a = spectrum.amplitudes[m];
    sum += (a.re * a.re + a.im * a.im) * HPReal(BigInt(4), w) * s * s;
  }
  return sum.is_zero() ? sum : sqrt(sum);
}

HPReal quantum_distance_direct(const QuantumSpectrum& spectrum, const HPReal& t) {
  spectrum.validate();
  const int w = std::max(t.working_digits(), spectrum.energies[0].working_digits());
  const HPReal one(BigInt(1), w);
  HPReal sum(BigInt(0), w);
  for (std::size_t m = 0; m < spectrum.energies.size(); ++m) {
    const HPReal arg = spectrum.energies[m] * t;
    if (arg.log10_uncertainty() > kMaxPhaseLog10Uncertainty) {
      throw InsufficientPrecision("phase E t is not resolvable mod 2 pi");
    }
    const auto [s, c] = sin_cos(arg);
    // a (e^{-i arg} - 1) = a ((c - 1) - i s)
    const auto& a = spectrum.amplitudes[m];
    const HPReal re = a.re * (c - one) + a.im * s;
    const HPReal im = a.im * (c - one) - a.re * s;
    sum += re * re + im * im;
  }
  return sum.is_zero() ? sum : sqrt(sum);
}

QuantumRecurrence quantum_recurrence(const QuantumSpectrum& spectrum,
                                     const HPReal& epsilon, int digits) {
  spectrum.validate();
  if (epsilon.sign() <= 0) throw InvalidArgument("epsilon must be positive");
  const HPReal& top = spectrum.energies.back();
  if (top.sign() <= 0) throw InvalidArgument("the highest energy must be positive");
  const std::size_t n = spectrum.energies.size() - 1;

  auto verify = [&](const BigInt& Q, const BigInt& q, int attempt,
                    QuantumRecurrence& out) {
    const int tw = std::max(digits, digits10(q) + kMatrixGuardDigits);
    HPReal t = two_pi(tw) * HPReal(q, tw) / top;
    HPReal d = quantum_distance(spectrum, t);
    if (d > epsilon) return false;
    out = {Q, q, std::move(t), std::move(d), attempt};
    return true;
  };

  QuantumRecurrence out;
  if (n == 0) {
    if (verify(BigInt(0), BigInt(1), 1, out)) return out;
    throw VerificationFailed("single-level recurrence failed verification");
  }

  // <q a_i> <= eps / (2 pi) bounds every sin^2 term by (eps/2)^2.
  const int bd = 40;
  HPReal C = two_pi(bd) / epsilon.with_working_digits(bd);
  if (C < HPReal(2L)) C = HPReal(BigInt(2), bd);
  BigInt Q = choose_q_parameter(static_cast<int>(n), C);
  for (int attempt = 1; attempt <= kMaxRetries + 1; ++attempt) {
    const int work = std::max(digits, digits10(Q) + kMatrixGuardDigits);
    std::vector<HPReal> alphas;
    const HPReal top_w = top.with_working_digits(std::max(work, top.working_digits()));
    for (std::size_t i = 0; i < n; ++i) alphas.push_back(spectrum.energies[i] / top_w);
    const ApproximationResult r = solve({alphas, Q, std::nullopt});
    if (verify(Q, r.q, attempt, out)) return out;
    Q *= pow10(static_cast<unsigned>(n + 1));
  }
  throw VerificationFailed("no verified recurrence after " + std::to_string(kMaxRetries) +
                           " retries");
}

double mean_gap(const std::vector<std::uint64_t>& hits) {
  if (hits.size() < 2) return 0;
  return static_cast<double>(hits.back() - hits.front()) /
         static_cast<double>(hits.size() - 1);
}

}  // namespace reclab
