#include <benchmark/benchmark.h>

#include "strata/column.hpp"
#include "strata/harness.hpp"
#include "strata/perfect.hpp"
#include "strata/reconstruct.hpp"
#include "strata/rng.hpp"

using namespace strata;

namespace {

void BM_column_deposit(benchmark::State& state) {
  PolicySpec policy = PolicySpec::curbed_recency_proportional(64);
  for (auto _ : state) {
    state.PauseTiming();
    StratColumn column(policy, 64, 1);
    state.ResumeTiming();
    for (int i = 0; i < 2048; ++i) column.deposit();
    benchmark::DoNotOptimize(column.strata_count());
  }
  state.SetItemsProcessed(state.iterations() * 2048);
}

void BM_tracker_churn(benchmark::State& state) {
  const std::uint64_t population = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    PerfectTracker tracker(TrackingMode::Pruning);
    SplitMix64 rng(7);
    std::vector<std::uint64_t> live;
    std::uint64_t next_id = 0;
    for (std::uint64_t i = 0; i < population; ++i) {
      tracker.on_birth(next_id, std::nullopt, 0);
      live.push_back(next_id++);
    }
    for (int step = 0; step < 20000; ++step) {
      std::uint64_t parent = live[rng.below(live.size())];
      std::size_t victim = rng.below(live.size());
      tracker.on_birth(next_id, parent, 0);
      tracker.on_removal(live[victim]);
      live[victim] = next_id++;
    }
    benchmark::DoNotOptimize(tracker.record_count());
  }
  state.SetItemsProcessed(state.iterations() * 20000);
}

void BM_trie_reconstruction(benchmark::State& state) {
  SimConfig config{static_cast<std::uint32_t>(state.range(0)), 128,
                   SimModel::WrightFisher, PolicySpec::recency_proportional(4), 64, 11};
  SimResult result = run_sim(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        trie_to_tree(build_trie(result.population), PolytomyMode::Keep).size());
  }
}

void BM_pairwise_matrix(benchmark::State& state) {
  SimConfig config{static_cast<std::uint32_t>(state.range(0)), 128,
                   SimModel::WrightFisher, PolicySpec::recency_proportional(4), 64, 13};
  SimResult result = run_sim(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise_mrca_matrix(result.population).size());
  }
}

}  // namespace

BENCHMARK(BM_column_deposit);
BENCHMARK(BM_tracker_churn)->Arg(64)->Arg(512);
BENCHMARK(BM_trie_reconstruction)->Arg(64)->Arg(256);
BENCHMARK(BM_pairwise_matrix)->Arg(64)->Arg(128);
