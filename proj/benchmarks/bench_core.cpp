#include <benchmark/benchmark.h>

#include <chaplygin/chaplygin.hpp>
#include <chaplygin/hamiltonization.hpp>
#include <chaplygin/integrability.hpp>
#include <chaplygin/numerics.hpp>

using namespace chaplygin;

namespace {

struct Sample {
  ChaplyginParams params;
  Vec gamma, p;
};

Sample sample(Index n, std::uint64_t seed) {
  Rng rng(seed);
  ChaplyginParams params = random_admissible_params(n, rng);
  Vec gamma, p;
  random_cotangent(n, rng, gamma, p, 1.0);
  return {params, gamma, p};
}

void BM_CotangentRk4Step(benchmark::State& state) {
  const Sample s = sample(state.range(0), 1);
  const VectorField field = cotangent_field(s.params);
  Vec y = join(s.gamma, s.p);
  for (auto _ : state) {
    y = rk4_step(field, y, 1e-3);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_CotangentRk4Step)->DenseRange(3, 8);

// Generic route: assemble and solve the reduced inertia system on so(n).
void BM_OmegaFromK(benchmark::State& state) {
  const Index n = state.range(0);
  const Sample s = sample(n, 2);
  const DiagonalInertia inertia = chaplygin_inertia(s.params);
  const SkewMatrix k = wedge(s.gamma, s.p);
  for (auto _ : state) {
    SkewMatrix w = omega_from_k(k, s.gamma, inertia, s.params.D());
    benchmark::DoNotOptimize(&w);
  }
}
BENCHMARK(BM_OmegaFromK)->DenseRange(3, 8);

// Closed route: the full right-hand side, velocity included.
void BM_CotangentRhsClosed(benchmark::State& state) {
  const Sample s = sample(state.range(0), 2);
  for (auto _ : state) {
    CotangentRates r = cotangent_rhs_closed({s.gamma, s.p}, s.params);
    benchmark::DoNotOptimize(r.p_dot.data());
  }
}
BENCHMARK(BM_CotangentRhsClosed)->DenseRange(3, 8);

void BM_StaeckelDiracBrackets(benchmark::State& state) {
  const Index n = state.range(0);
  Sample s = sample(n, 3);
  // Distinct a_i keep the chart valid.
  s.params =
      ChaplyginParams(Vec::LinSpaced(n, 0.8, 0.8 + 0.4 * (n - 1)), 4.0 * n * n);
  const TildePoint t = to_tilde({s.gamma, s.p}, s.params);
  for (auto _ : state) {
    const auto g = staeckel_gradients(t, s.params.a(), s.params.D());
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        acc += dirac_bracket(g[i], g[j], t.gamma, t.p_tilde);
      }
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_StaeckelDiracBrackets)->DenseRange(3, 6);

}  // namespace

BENCHMARK_MAIN();
