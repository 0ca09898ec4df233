#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reclab/chain.hpp"
#include "reclab/diophantine.hpp"

using namespace reclab;

namespace {

ChainState random_state(int N, int digits) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ChainState s;
  for (int i = 0; i < N; ++i) {
    s.x.push_back(HPReal::from_double(u(oracle::rng()), digits));
    s.p.push_back(HPReal::from_double(u(oracle::rng()), digits));
  }
  return s;
}

// Number of eigenvalues of tridiag(-1, 2, -1) below x (Sturm sequence).
int sturm_count(int N, const mpfr_t x) {
  oracle::Mp d(512), t(512);
  int count = 0;
  mpfr_ui_sub(d.v, 2, x, MPFR_RNDN);
  if (mpfr_sgn(d.v) < 0) ++count;
  for (int i = 1; i < N; ++i) {
    if (mpfr_zero_p(d.v)) mpfr_set_str(d.v, "1e-140", 10, MPFR_RNDN);
    mpfr_ui_div(t.v, 1, d.v, MPFR_RNDN);
    mpfr_ui_sub(d.v, 2, x, MPFR_RNDN);
    mpfr_sub(d.v, d.v, t.v, MPFR_RNDN);
    if (mpfr_sgn(d.v) < 0) ++count;
  }
  return count;
}

// The i-th smallest eigenvalue (0-based) by bisection on [0, 4].
void eigenvalue(oracle::Mp& out, int N, int i) {
  oracle::Mp lo(512), hi(512), mid(512);
  mpfr_set_ui(lo.v, 0, MPFR_RNDN);
  mpfr_set_ui(hi.v, 4, MPFR_RNDN);
  for (int it = 0; it < 300; ++it) {
    mpfr_add(mid.v, lo.v, hi.v, MPFR_RNDN);
    mpfr_div_2ui(mid.v, mid.v, 1, MPFR_RNDN);
    if (sturm_count(N, mid.v) > i) {
      mpfr_set(hi.v, mid.v, MPFR_RNDN);
    } else {
      mpfr_set(lo.v, mid.v, MPFR_RNDN);
    }
  }
  mpfr_set(out.v, lo.v, MPFR_RNDN);
}

// Plain RK4 on x' = p, p' = -M x in double precision.
std::vector<double> rk4(int N, std::vector<double> y, double t, int steps) {
  auto f = [N](const std::vector<double>& s) {
    std::vector<double> d(2 * N);
    for (int i = 0; i < N; ++i) {
      const double left = i > 0 ? s[i - 1] : 0.0;
      const double right = i + 1 < N ? s[i + 1] : 0.0;
      d[i] = s[N + i];
      d[N + i] = -(2 * s[i] - left - right);
    }
    return d;
  };
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const auto k1 = f(y);
    std::vector<double> tmp(2 * N);
    for (int i = 0; i < 2 * N; ++i) tmp[i] = y[i] + h / 2 * k1[i];
    const auto k2 = f(tmp);
    for (int i = 0; i < 2 * N; ++i) tmp[i] = y[i] + h / 2 * k2[i];
    const auto k3 = f(tmp);
    for (int i = 0; i < 2 * N; ++i) tmp[i] = y[i] + h * k3[i];
    const auto k4 = f(tmp);
    for (int i = 0; i < 2 * N; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y;
}

double max_abs_diff(const ChainState& a, const ChainState& b) { return deviation(a, b).to_double(); }

}  // namespace

TEST(ChainModel, TwoSites) {
  const ChainModel m = make_model(2, 30);
  const auto& U = m.mode_matrix();
  EXPECT_EQ(U[0][0].to_decimal(12), "0.707106781187");
  EXPECT_EQ(U[0][1].to_decimal(12), "0.707106781187");
  EXPECT_EQ(U[1][0].to_decimal(12), "0.707106781187");
  EXPECT_EQ(U[1][1].to_decimal(12), "-0.707106781187");
}

TEST(ChainModel, Frequencies) {
  const ChainModel m3 = make_model(3, 30);
  EXPECT_EQ(m3.frequencies()[0].to_decimal(8), "0.76536686");
  EXPECT_EQ(m3.frequencies()[1].to_decimal(9), "1.41421356");
  EXPECT_EQ(m3.frequencies()[2].to_decimal(9), "1.84775907");
  EXPECT_EQ(make_model(15, 30).frequencies()[14].to_decimal(9), "1.99036945");
  const auto r = make_model(15, 40).ratios();
  EXPECT_EQ(r.size(), 14u);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r[i - 1], r[i]);
}

TEST(ChainModel, FrequenciesMatchSturmEigenvalues) {
  for (int N = 2; N <= 8; ++N) {
    const ChainModel m = make_model(N, 30);
    for (int i = 0; i < N; ++i) {
      oracle::Mp ev(512);
      eigenvalue(ev, N, i);
      const HPReal w2 = m.frequencies()[i] * m.frequencies()[i];
      oracle::Mp diff(512);
      mpfr_sub(diff.v, w2.raw(), ev.v, MPFR_RNDN);
      EXPECT_LT(std::abs(mpfr_get_d(diff.v, MPFR_RNDN)), 1e-20) << N << " " << i;
    }
  }
}

TEST(ChainModel, ModeMatrixIsOrthogonal) {
  for (int N : {2, 3, 7, 15, 24}) {
    const int digits = 40;
    const ChainModel m = make_model(N, digits);
    const auto& U = m.mode_matrix();
    const HPReal tol = HPReal::parse("1e-" + std::to_string(digits - 5));
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        HPReal s(0L);
        for (int k = 0; k < N; ++k) s += U[i][k] * U[j][k];
        EXPECT_TRUE(approx_equal(s, HPReal(i == j ? 1L : 0L), tol)) << N << " " << i << " " << j;
      }
    }
  }
}

TEST(ChainModel, Validation) {
  EXPECT_THROW(make_model(1), InvalidArgument);
  EXPECT_THROW(make_model(3, 0), InvalidArgument);
  EXPECT_THROW(make_model(3, 30, HPReal(0L)), InvalidArgument);
  EXPECT_THROW(localized_initial_state(make_model(3, 30), 0), IndexOutOfRange);
  EXPECT_THROW(localized_initial_state(make_model(3, 30), 4), IndexOutOfRange);
}

TEST(ChainState, LocalizedState) {
  const ChainModel m = make_model(3, 30);
  const ChainState s = localized_initial_state(m, 1);
  EXPECT_EQ(s.x, (std::vector<HPReal>{HPReal(1L), HPReal(0L), HPReal(0L)}));
  EXPECT_EQ(s.p, (std::vector<HPReal>{HPReal(1L), HPReal(0L), HPReal(0L)}));
  const ChainModel m15 = make_model(15, 40);
  for (int k = 2; k <= 14; ++k) {
    EXPECT_EQ(energy(m15, localized_initial_state(m15, k)).to_decimal(10), "1.500000000");
  }
  EXPECT_EQ(energy(m15, localized_initial_state(m15, 1)).to_decimal(10), "1.500000000");
}

TEST(ChainState, EnergyMatchesQuadraticForm) {
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 2 + trial % 9;
    const ChainModel m = make_model(N, 40);
    const ChainState s = random_state(N, 40);
    double e = 0;
    for (int i = 0; i < N; ++i) {
      e += 0.5 * s.p[i].to_double() * s.p[i].to_double();
      const double left = i > 0 ? s.x[i - 1].to_double() : 0.0;
      e += 0.5 * s.x[i].to_double() * (2 * s.x[i].to_double() - left -
                                        (i + 1 < N ? s.x[i + 1].to_double() : 0.0));
    }
    EXPECT_NEAR(energy(m, s).to_double(), e, 1e-12);
  }
}

TEST(NormalModes, ZeroStateHasZeroAmplitudes) {
  const ChainModel m = make_model(5, 30);
  ChainState z{std::vector<HPReal>(5, HPReal(0L)), std::vector<HPReal>(5, HPReal(0L))};
  for (const auto& a : to_normal(m, z).amplitude) EXPECT_TRUE(a.is_zero());
}

TEST(NormalModes, SingleModePhase) {
  const ChainModel m = make_model(4, 40);
  ChainState s;
  for (int j = 0; j < 4; ++j) {
    s.x.push_back(m.mode_matrix()[0][j]);
    s.p.push_back(HPReal(0L));
  }
  const NormalModeState nm = to_normal(m, s);
  EXPECT_EQ(nm.amplitude[0].to_decimal(20), "1.0000000000000000000");
  EXPECT_EQ(nm.phase[0].to_decimal(20), (pi(40) / HPReal(2L)).to_decimal(20));
  for (int i = 1; i < 4; ++i) EXPECT_LT(nm.amplitude[i].to_double(), 1e-30);
}

TEST(NormalModes, RoundTripIsIdentity) {
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 2 + trial % 14;
    const int digits = 40;
    const ChainModel m = make_model(N, digits);
    const ChainState s = random_state(N, digits + 10);
    const NormalModeState nm = to_normal(m, s);
    for (const auto& ph : nm.phase) {
      EXPECT_GE(ph.sign(), 0);
      EXPECT_LT(ph, HPReal(2L) * pi(50));
    }
    const ChainState back = from_normal(m, nm);
    EXPECT_LT(deviation(back, s).log10_abs(), -(digits - 5));
    EXPECT_TRUE(approx_equal(energy(m, back), energy(m, s), HPReal::parse("1e-35")));
  }
}

TEST(Evolve, ZeroTimeIsIdentity) {
  const ChainModel m = make_model(6, 40);
  const ChainState s = random_state(6, 50);
  EXPECT_LT(max_abs_diff(evolve(m, s, HPReal(0L)), s), 1e-35);
}

TEST(Evolve, ConservesEnergy) {
  std::uniform_real_distribution<double> u(0.0, 1e6);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = 2 + trial % 10;
    const ChainModel m = make_model(N, 50);
    const ChainState s = random_state(N, 60);
    const ChainState e = evolve(m, s, HPReal::from_double(u(oracle::rng()), 60));
    EXPECT_TRUE(approx_equal(energy(m, e), energy(m, s), HPReal::parse("1e-35")));
  }
}

TEST(Evolve, MatchesDirectIntegration) {
  for (int N : {2, 4, 7}) {
    const ChainModel m = make_model(N, 40);
    const ChainState s = random_state(N, 40);
    std::vector<double> y;
    for (const auto& v : s.x) y.push_back(v.to_double());
    for (const auto& v : s.p) y.push_back(v.to_double());
    const double t = 7.25;
    const auto ref = rk4(N, y, t, 20000);
    const ChainState e = evolve(m, s, HPReal::parse("7.25", 40));
    for (int i = 0; i < N; ++i) {
      EXPECT_NEAR(e.x[i].to_double(), ref[i], 1e-10);
      EXPECT_NEAR(e.p[i].to_double(), ref[N + i], 1e-10);
    }
  }
}

TEST(Evolve, CompositionOfTimes) {
  const ChainModel m = make_model(5, 50);
  const ChainState s = random_state(5, 60);
  const HPReal a = HPReal::parse("123.456", 60);
  const HPReal b = HPReal::parse("987.125", 60);
  const ChainState two = evolve(m, evolve(m, s, a), b);
  const ChainState one = evolve(m, s, a + b);
  EXPECT_LT(max_abs_diff(one, two), 1e-35);
}

TEST(Recurrence, Times) {
  const ChainModel m2 = make_model(2, 40);
  const HPReal t = recurrence_time(m2, 1);
  EXPECT_EQ(t.to_decimal(25), (HPReal(2L) * pi(50) / sqrt(HPReal(BigInt(3), 50))).to_decimal(25));
  const ChainModel m15 = make_model(15, 60);
  const BigInt q("84350294911456044599486768675168");
  const HPReal T = recurrence_time(m15, q);
  oracle::Mp ref, w;
  oracle::sin_pi_ratio(w, 15, 32);
  mpfr_mul_ui(w.v, w.v, 2, MPFR_RNDN);
  mpfr_const_pi(ref.v, MPFR_RNDN);
  mpfr_mul_z(ref.v, ref.v, q.get_mpz_t(), MPFR_RNDN);
  mpfr_mul_ui(ref.v, ref.v, 2, MPFR_RNDN);
  mpfr_div(ref.v, ref.v, w.v, MPFR_RNDN);
  EXPECT_TRUE(oracle::honest(T, ref));
  EXPECT_NEAR(T.to_double() / 2.6627e32, 1.0, 1e-4);
  EXPECT_GE(T.digits(), 50);
  // linear in q
  EXPECT_TRUE(approx_equal(recurrence_time(m15, BigInt(q * 7)), HPReal(7L) * T,
                           HPReal::parse("1e-10")));
}

TEST(Recurrence, ExactPhaseReductionAgreesWithDirectEvolution) {
  // Moderate q: the direct route is still affordable at high precision.
  const ChainModel m = make_model(6, 120);
  const auto alphas = m.ratios();
  ApproximationProblem p;
  p.alphas = alphas;
  p.Q = pow10(12);
  const ApproximationResult r = solve(p);
  const ChainState s = random_state(6, 120);
  const HPReal offset = HPReal::parse("-2.5", 120);
  const ChainState a = evolve_from_recurrence(m, s, r.q, offset);
  const ChainState b = evolve(m, s, recurrence_time(m, r.q) + offset);
  EXPECT_LT(max_abs_diff(a, b), 1e-60);
}

TEST(Recurrence, UniformBoundHoldsForEveryState) {
  for (int N : {3, 6, 10}) {
    const ChainModel m = make_model(N, 80);
    ApproximationProblem p;
    p.alphas = m.ratios();
    p.Q = pow10(6 * (N - 1));
    const ApproximationResult r = solve(p);
    for (int trial = 0; trial < 20; ++trial) {
      ChainState s = random_state(N, 80);
      if (trial % 2) {
        for (auto& v : s.x) v = v * HPReal(1000L);
      }
      const ChainState back = evolve_from_recurrence(m, s, r.q, HPReal(0L));
      const HPReal bound = recurrence_deviation_bound(m, s, r.error);
      EXPECT_LE(deviation(back, s), bound) << "N=" << N;
    }
  }
}

TEST(Recurrence, PublishedQReturnsCloseToStart) {
  const ChainModel m = make_model(15, 80);
  const ChainState s = localized_initial_state(m, 4);
  const BigInt q("84350294911456044599486768675168");
  const HPReal err = max_frac_dist(m.ratios(), q);
  EXPECT_EQ(err.to_decimal(4), "0.002722");
  const double at = max_abs_diff(evolve_from_recurrence(m, s, q, HPReal(0L)), s);
  const double before = max_abs_diff(evolve_from_recurrence(m, s, q, HPReal(-200L)), s);
  const double after = max_abs_diff(evolve_from_recurrence(m, s, q, HPReal(3L)), s);
  const double just_before = max_abs_diff(evolve_from_recurrence(m, s, q, HPReal(-3L)), s);
  EXPECT_LE(at, 0.05);
  EXPECT_GT(before, 0.3);
  EXPECT_GT(after, at);
  EXPECT_GT(just_before, at);
  EXPECT_LE(at, recurrence_deviation_bound(m, s, err).to_double());
}

TEST(Deviation, Properties) {
  const ChainState a = random_state(5, 40);
  const ChainState b = random_state(5, 40);
  EXPECT_TRUE(deviation(a, a).is_zero());
  EXPECT_EQ(deviation(a, b), deviation(b, a));
  double expect = 0;
  for (int i = 0; i < 5; ++i) {
    expect = std::max(expect, std::abs(a.x[i].to_double() - b.x[i].to_double()));
    expect = std::max(expect, std::abs(a.p[i].to_double() - b.p[i].to_double()));
  }
  EXPECT_NEAR(deviation(a, b).to_double(), expect, 1e-15);
  EXPECT_THROW(deviation(a, random_state(4, 40)), DimensionMismatch);
}
