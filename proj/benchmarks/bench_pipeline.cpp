#include <benchmark/benchmark.h>

#include "cpufp/dtw.hpp"
#include "cpufp/preprocess.hpp"
#include "cpufp/synth.hpp"
#include "cpufp/workflow.hpp"

namespace {

using namespace cpufp;

CpuTimeSeries trace(SynthFamily fam, std::int64_t seconds, std::uint64_t seed) {
  return generate(SynthSpec{{11, 6, 20, 30}, fam, seconds, 5.0, seed});
}

void BM_FilterSeries(benchmark::State& state) {
  const auto x = trace(SynthFamily::WordCountLike, state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(filter_series(x, FilterSpec{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterSeries)->RangeMultiplier(4)->Range(64, 16384);

void BM_DtwAlign(benchmark::State& state) {
  const auto x = preprocess(trace(SynthFamily::WordCountLike, state.range(0), 1), FilterSpec{});
  const auto y = preprocess(trace(SynthFamily::EximLike, state.range(0) + state.range(0) / 8, 2), FilterSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(dtw_align(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DtwAlign)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

void BM_DtwDistanceOnly(benchmark::State& state) {
  const auto x = preprocess(trace(SynthFamily::TerasortLike, state.range(0), 3), FilterSpec{});
  const auto y = preprocess(trace(SynthFamily::EximLike, state.range(0), 4), FilterSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(x.samples(), y.samples()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DtwDistanceOnly)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

// Three apps x four configurations, one query app, as in the fixture setup.
void BM_MatchApplication(benchmark::State& state) {
  const std::vector<ConfigParams> configs{{11, 6, 20, 30}, {21, 30, 10, 80}, {32, 21, 30, 80}, {42, 33, 20, 60}};
  ReferenceDb db;
  std::vector<ConfiguredTrace> query;
  std::uint64_t seed = 10;
  for (auto fam : {SynthFamily::WordCountLike, SynthFamily::TerasortLike, SynthFamily::EximLike}) {
    std::vector<ConfiguredTrace> runs;
    for (const auto& p : configs) runs.push_back({p, generate(SynthSpec{p, fam, 180, 5.0, seed++})});
    db = profile_application(std::string(family_name(fam)), runs, db);
  }
  for (const auto& p : configs) query.push_back({p, generate(SynthSpec{p, SynthFamily::EximLike, 170, 5.0, seed++})});
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(match_application(query, db, 0.9, std::nullopt, threads));
}
BENCHMARK(BM_MatchApplication)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
