#include <benchmark/benchmark.h>

#include "peakcount/classify.hpp"
#include "peakcount/ground_state.hpp"
#include "peakcount/reduction.hpp"
#include "peakcount/weight.hpp"
#include "peakcount/zeros.hpp"

using namespace peakcount;

namespace {

SparsePoly worked_profile() {
  SparsePoly q(2);
  q.add_term({5, 0}, 1.0);
  q.add_term({1, 4}, -1.0);
  return q;
}

void bm_ground_state(benchmark::State& state) {
  for (auto _ : state) {
    GroundState gs = solve_ground_state({2.0, 3});
    benchmark::DoNotOptimize(gs.u0());
  }
}
BENCHMARK(bm_ground_state)->Unit(benchmark::kMillisecond);

void bm_moment_table(benchmark::State& state) {
  GroundState gs = solve_ground_state({2.0, 3});
  RadialWeight w(gs);
  for (auto _ : state) {
    MomentTable tab(w, 6);
    benchmark::DoNotOptimize(tab.c_moment(4));
  }
}
BENCHMARK(bm_moment_table)->Unit(benchmark::kMillisecond);

void bm_reduce_and_zeros(benchmark::State& state) {
  GroundState gs = solve_ground_state({2.0, 3});
  RadialWeight w(gs);
  MomentTable tab(w, 6);
  SparsePoly q = worked_profile();
  for (auto _ : state) {
    ReducedField f = reduce_field(q, tab);
    ZeroSet zs = find_zeros(f);
    benchmark::DoNotOptimize(zs.stable_count());
  }
}
BENCHMARK(bm_reduce_and_zeros)->Unit(benchmark::kMillisecond);

void bm_full_classify(benchmark::State& state) {
  RunConfig cfg;
  cfg.p = 2.0;
  cfg.dim = 3;
  cfg.profile = worked_profile();
  for (auto _ : state) {
    ClassificationReport rep = classify_domain(cfg);
    benchmark::DoNotOptimize(rep.predicted_count);
  }
}
BENCHMARK(bm_full_classify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
