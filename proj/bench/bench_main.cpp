// Serial vs parallel for the two OpenMP loops: pattern-cover colorings and
// dual guesses. Both inputs are no-instances so every iteration runs.
#include <benchmark/benchmark.h>

#include <random>

#include "scpm/dual_solver.hpp"
#include "scpm/generator.hpp"
#include "scpm/pattern_cover.hpp"

using namespace scpm;

namespace {

// K_{1,4} into a cubic graph with one label: no vertex has degree 4.
PatternCoverInstance star_into_cubic(int n) {
  PatternCoverInstance pc;
  pc.h = MultiGraph(5);
  for (int v = 1; v < 5; ++v) {
    pc.h.add_edge(0, v);
    pc.ell_h.push_back(0);
  }
  pc.g = MultiGraph(n);
  for (int v = 0; v < n; ++v) {
    pc.g.add_edge(v, (v + 1) % n);
    pc.ell_g.push_back(0);
  }
  for (int v = 0; v < n / 2; ++v) {
    pc.g.add_edge(v, v + n / 2);
    pc.ell_g.push_back(0);
  }
  return pc;
}

SpaceCoverInstance dual_no_instance() {
  std::mt19937_64 rng(77);
  for (;;) {
    RandomParams prm;
    prm.n = 7;
    prm.m = 11;
    prm.r = 3;
    prm.k = 2;
    prm.terminals = 2;
    prm.mode = Mode::dual;
    auto inst = random_instance(prm, rng);
    dual::DualStats st;
    if (!dual::solve(inst, {}, &st) && st.guesses >= 16) return inst;
  }
}

void BM_PatternCover(benchmark::State& state) {
  const auto pc = star_into_cubic(24);
  PatternCoverOptions opt;
  opt.policy = state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
  pattern_cover::solve(pc, opt);  // builds the cached hash family outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(pattern_cover::solve(pc, opt));
}
BENCHMARK(BM_PatternCover)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_DualGuesses(benchmark::State& state) {
  static const auto inst = dual_no_instance();
  dual::DualOptions opt;
  opt.policy = state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
  dual::solve(inst, opt);
  for (auto _ : state) benchmark::DoNotOptimize(dual::solve(inst, opt));
}
BENCHMARK(BM_DualGuesses)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
