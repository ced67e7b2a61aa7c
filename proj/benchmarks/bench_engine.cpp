#include <benchmark/benchmark.h>

#include "qpmut/canonical.hpp"
#include "qpmut/generators.hpp"
#include "qpmut/jacobian.hpp"
#include "qpmut/mutation.hpp"
#include "qpmut/search.hpp"

using namespace qpmut;

namespace {

void BM_PremutateZ6(benchmark::State& state) {
  const QPState z6 = mckay_cyclic({6, {2, 5, 5}});
  for (auto _ : state) benchmark::DoNotOptimize(premutate(z6, 0));
}
BENCHMARK(BM_PremutateZ6);

void BM_ReduceZ6(benchmark::State& state) {
  const QPState pre = premutate(mckay_cyclic({6, {2, 5, 5}}), 0).first;
  for (auto _ : state) benchmark::DoNotOptimize(reduce(pre));
}
BENCHMARK(BM_ReduceZ6);

// McKay Z/n with weights (1, 2, n-3): arrow count grows with n.
void BM_MutateMcKay(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QPState qp = mckay_cyclic({n, {1, 2, n - 3}});
  for (auto _ : state) benchmark::DoNotOptimize(mutate(qp, 0));
}
BENCHMARK(BM_MutateMcKay)->Arg(5)->Arg(7)->Arg(11)->Arg(17);

void BM_CanonicalKey(benchmark::State& state) {
  const QPState qp = mutate(mckay_cyclic({7, {1, 2, 4}}), 0).first;
  for (auto _ : state) benchmark::DoNotOptimize(canonical_key(qp));
}
BENCHMARK(BM_CanonicalKey);

void BM_SearchZ5(benchmark::State& state) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  SearchLimits lim;
  lim.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(explore(z5, static_cast<std::size_t>(state.range(0)), lim));
}
BENCHMARK(BM_SearchZ5)->Args({2, 1})->Args({3, 1})->Args({3, 4})->Unit(benchmark::kMillisecond);

void BM_GradedDimsZ5(benchmark::State& state) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  for (auto _ : state) benchmark::DoNotOptimize(graded_dims(z5, state.range(0)));
}
BENCHMARK(BM_GradedDimsZ5)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_HH0Z5(benchmark::State& state) {
  const QPState z5 = mckay_cyclic({5, {1, 2, 2}});
  for (auto _ : state) benchmark::DoNotOptimize(hh0_dims(z5, state.range(0)));
}
BENCHMARK(BM_HH0Z5)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_LoopEliminationA2(benchmark::State& state) {
  const QPState qp = deformed_preprojective({"A~2", {1, 1, -2}});
  for (auto _ : state) benchmark::DoNotOptimize(eliminate_loops(qp));
}
BENCHMARK(BM_LoopEliminationA2);

}  // namespace

BENCHMARK_MAIN();
