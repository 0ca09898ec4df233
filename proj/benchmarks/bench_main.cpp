#include <benchmark/benchmark.h>

#include <random>

#include "reclab/chain.hpp"
#include "reclab/diophantine.hpp"
#include "reclab/experiments.hpp"
#include "reclab/lattice.hpp"

using namespace reclab;

namespace {

void BM_LllRandom(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> u(-1000, 1000);
  IntMatrix m(n, IntVector(n));
  for (;;) {
    for (auto& row : m) {
      for (auto& x : row) x = u(rng);
    }
    if (signed_determinant(m) != 0) break;
  }
  const LatticeBasis basis(m);
  for (auto _ : state) benchmark::DoNotOptimize(lll_reduce(basis));
}
BENCHMARK(BM_LllRandom)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SolveChain(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const BigInt Q = pow10(static_cast<unsigned>(state.range(1)));
  ApproximationProblem p;
  p.alphas = chain_ratios(N, digits10(Q) + kMatrixGuardDigits);
  p.Q = Q;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveChain)->Args({5, 20})->Args({15, 20})->Args({15, 35})->Unit(benchmark::kMillisecond);

void BM_SinPiRational(benchmark::State& state) {
  const int digits = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sin_pi_rational(7, 32, digits));
}
BENCHMARK(BM_SinPiRational)->Arg(50)->Arg(200)->Arg(1000);

void BM_SinHugeArgument(benchmark::State& state) {
  const HPReal t = HPReal(pow10(32), 250) + HPReal::parse("0.5", 250);
  for (auto _ : state) benchmark::DoNotOptimize(sin(t));
}
BENCHMARK(BM_SinHugeArgument);

void BM_BruteForce(benchmark::State& state) {
  const std::vector<HPReal> a{sqrt(HPReal(BigInt(2), 40)), sqrt(HPReal(BigInt(3), 40))};
  const HPReal eps = HPReal::parse("0.05");
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_valid_q(a, eps, static_cast<std::uint64_t>(state.range(0))));
  }
}
BENCHMARK(BM_BruteForce)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ChainRecurrenceSnapshot(benchmark::State& state) {
  const ChainModel m = make_model(15, 200);
  const ChainState s = localized_initial_state(m, 4);
  const BigInt q("84350294911456044599486768675168");
  for (auto _ : state) benchmark::DoNotOptimize(evolve_from_recurrence(m, s, q, HPReal(3L)));
}
BENCHMARK(BM_ChainRecurrenceSnapshot)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
