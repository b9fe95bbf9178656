// Microbenchmarks for the sampling and parameter-evaluation hot paths.
//
// Run the binary directly (it is not registered with ctest):
//   ./build/benchmarks/treelab_bench
// Filter with --benchmark_filter=<regex>, e.g. --benchmark_filter=Sample.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "treelab/automorphisms.hpp"
#include "treelab/harness.hpp"
#include "treelab/numeric.hpp"
#include "treelab/patterns.hpp"
#include "treelab/sampler.hpp"
#include "treelab/tree.hpp"

namespace {

using namespace treelab;

constexpr std::uint64_t kBenchSeed = 424242;

// Fresh tree per iteration so shape-dependent costs are averaged over the
// tree distribution rather than pinned to one draw.
void BM_SampleStage1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(SeedSpec{kBenchSeed, 1});
  for (auto _ : state) {
    const AttachmentVector u = sample_attachment(n, rng);
    LabelledTree t = aldous_broder_stage1(u);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleStage1)->Arg(100)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SampleUniform(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(SeedSpec{kBenchSeed, 2});
  for (auto _ : state) {
    LabelledTree t = sample_uniform(n, rng);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleUniform)->Arg(100)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SamplePrufer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(SeedSpec{kBenchSeed, 3});
  for (auto _ : state) {
    LabelledTree t = sample_prufer(n, rng);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplePrufer)->Arg(100)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_PruferEncode(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 4});
  for (auto _ : state) {
    PruferSequence seq = prufer_encode(t);
    benchmark::DoNotOptimize(seq);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PruferEncode)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_PathCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int l = static_cast<int>(state.range(1));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 5});
  for (auto _ : state) {
    std::int64_t c = path_count(t, l);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PathCount)
    ->Args({1000, 3})
    ->Args({1000, 10})
    ->Args({1000, 50})
    ->Args({10000, 3})
    ->Unit(benchmark::kMicrosecond);

void BM_PatternCount(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 6});
  // 3-path whose middle vertex must have degree exactly 2 (ends free).
  Pattern p = path_pattern(3);
  p.theta = {1, 0, 1};
  for (auto _ : state) {
    std::int64_t c = pattern_count(t, p);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PatternCount)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_LogAutFull(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 7});
  for (auto _ : state) {
    double v = log_aut_full(t);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LogAutFull)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_CountBranches(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 8});
  for (auto _ : state) {
    // Leaf branches below vertex 2 in the tree rooted at 1.
    std::int64_t c = count_branches(t, 1, 2, "()");
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountBranches)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_BetaExactAdaptive(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 9});
  for (auto _ : state) {
    double v = beta_exact_adaptive(t);
    benchmark::DoNotOptimize(v);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BetaExactAdaptive)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_BetaAtLeast(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LabelledTree t = sample_uniform(n, SeedSpec{kBenchSeed, 10});
  for (auto _ : state) {
    bool b = beta_at_least(t, 2.0);
    benchmark::DoNotOptimize(b);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BetaAtLeast)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
