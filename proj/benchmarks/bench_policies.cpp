#include <benchmark/benchmark.h>

#include "strata/curator.hpp"
#include "strata/policy.hpp"
#include "strata/schedule.hpp"

using namespace strata;

namespace {

PolicySpec policy_for(int selector) {
  switch (selector) {
    case 0: return PolicySpec::fixed_resolution(7);
    case 1: return PolicySpec::depth_proportional(5);
    case 2: return PolicySpec::depth_proportional(5, true);
    case 3: return PolicySpec::recency_proportional(4);
    case 4: return PolicySpec::geom_seq_nth_root(4);
    default: return PolicySpec::curbed_recency_proportional(64);
  }
}

void BM_enumerate_retained(benchmark::State& state) {
  PolicySpec policy = policy_for(static_cast<int>(state.range(0)));
  TimePoint depth = static_cast<TimePoint>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_retained(policy, depth));
  }
}

void BM_schedule_advance(benchmark::State& state) {
  PolicySpec policy = policy_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    RetentionSchedule schedule(policy);
    state.ResumeTiming();
    for (int i = 0; i < 4096; ++i) {
      benchmark::DoNotOptimize(schedule.advance());
    }
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}

void BM_curator_ingest(benchmark::State& state) {
  PolicySpec policy = policy_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    StreamCurator<std::uint64_t> curator(policy);
    state.ResumeTiming();
    for (std::uint64_t i = 0; i < 4096; ++i) curator.ingest(i);
    benchmark::DoNotOptimize(curator.size());
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}

}  // namespace

BENCHMARK(BM_enumerate_retained)
    ->ArgsProduct({{0, 1, 2, 3, 4, 5}, {1 << 10, 1 << 16}});
BENCHMARK(BM_schedule_advance)->DenseRange(0, 5);
BENCHMARK(BM_curator_ingest)->DenseRange(0, 5);

BENCHMARK_MAIN();
