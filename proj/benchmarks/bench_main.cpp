#include <benchmark/benchmark.h>

#include "finiteqp/entanglement.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/regions.hpp"
#include "finiteqp/states.hpp"

namespace {

void bm_build_canonical_pair(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto pair = finiteqp::build_canonical_pair(d);
    benchmark::DoNotOptimize(pair.p);
  }
}
BENCHMARK(bm_build_canonical_pair)->Arg(3)->Arg(8)->Arg(16)->Arg(32);

void bm_quadratics_eigensystem(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto pair = finiteqp::build_canonical_pair(d);
  auto quad = finiteqp::build_quadratics(pair);
  for (auto _ : state) {
    auto [ev, vec] = quad.t.eigensystem();
    benchmark::DoNotOptimize(ev);
    benchmark::DoNotOptimize(vec);
  }
}
BENCHMARK(bm_quadratics_eigensystem)->Arg(3)->Arg(8)->Arg(16)->Arg(32);

void bm_min_sum_variances(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto pair = finiteqp::build_canonical_pair(d);
  for (auto _ : state) {
    auto ext = finiteqp::min_sum_variances(pair, 24);
    benchmark::DoNotOptimize(ext.value);
  }
}
BENCHMARK(bm_min_sum_variances)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void bm_duan_witness(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  auto pair = finiteqp::build_canonical_pair(d);
  auto probe = finiteqp::max_entangled(d);
  finiteqp::duan_bound(pair);  // warm the cache; measure evaluation only
  for (auto _ : state) {
    auto res = finiteqp::duan_witness(probe, pair);
    benchmark::DoNotOptimize(res.delta_tilde);
  }
}
BENCHMARK(bm_duan_witness)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
