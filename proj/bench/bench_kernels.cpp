#include <benchmark/benchmark.h>

#include "ymjoin/functional.hpp"
#include "ymjoin/kernels.hpp"
#include "ymjoin/profile.hpp"

using namespace ymjoin;

namespace {

struct Fixture {
  DiscreteWeights w;
  Profile f;
  explicit Fixture(int n) {
    GridSpec gs;
    gs.nodes = n;
    Grid g(gs);
    f = levi_civita_profile(g);
    w = join_weights(make_join(identity_eigenmap(4), identity_eigenmap(4)).coeffs, g);
  }
};

template <bool Parallel>
void BM_Energy(benchmark::State& st) {
  Fixture fx(int(st.range(0)));
  for (auto _ : st) {
    auto e = Parallel ? energy_terms(fx.w, fx.f.alpha, fx.f.beta)
                      : reference::energy_terms(fx.w, fx.f.alpha, fx.f.beta);
    benchmark::DoNotOptimize(e);
  }
}

template <bool Parallel>
void BM_Gradient(benchmark::State& st) {
  Fixture fx(int(st.range(0)));
  std::vector<double> ga, gb;
  for (auto _ : st) {
    if (Parallel) gradient(fx.w, fx.f.alpha, fx.f.beta, ga, gb);
    else reference::gradient(fx.w, fx.f.alpha, fx.f.beta, ga, gb);
    benchmark::DoNotOptimize(ga.data());
  }
}

template <bool Parallel>
void BM_Hessian(benchmark::State& st) {
  Fixture fx(int(st.range(0)));
  HessianBands h;
  for (auto _ : st) {
    if (Parallel) hessian(fx.w, fx.f.alpha, fx.f.beta, h);
    else reference::hessian(fx.w, fx.f.alpha, fx.f.beta, h);
    benchmark::DoNotOptimize(h.aa.data());
  }
}

}  // namespace

BENCHMARK(BM_Energy<false>)->RangeMultiplier(8)->Range(1 << 11, 1 << 20);
BENCHMARK(BM_Energy<true>)->RangeMultiplier(8)->Range(1 << 11, 1 << 20);
BENCHMARK(BM_Gradient<false>)->RangeMultiplier(8)->Range(1 << 11, 1 << 20);
BENCHMARK(BM_Gradient<true>)->RangeMultiplier(8)->Range(1 << 11, 1 << 20);
BENCHMARK(BM_Hessian<false>)->RangeMultiplier(8)->Range(1 << 11, 1 << 20);
BENCHMARK(BM_Hessian<true>)->RangeMultiplier(8)->Range(1 << 11, 1 << 20);

BENCHMARK_MAIN();
