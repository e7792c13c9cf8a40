#include <string>

#include <benchmark/benchmark.h>

#include "axprune/axtree.hpp"
#include "axprune/baseline_retrievers.hpp"
#include "axprune/tokens.hpp"

namespace {

// Synthetic tree: a few nested containers, then rows of buttons and links.
std::string synthetic_tree(std::size_t lines) {
  std::string out = "RootWebArea 'Bench', focused";
  for (std::size_t i = 1; i < lines; ++i) {
    const std::size_t depth = 1 + i % 4;
    out += '\n';
    out.append(depth, '\t');
    out += "[a" + std::to_string(i) + "] " + (i % 3 ? "button 'Item " : "link 'Go to ") + std::to_string(i) + "'";
    if (i % 5 == 0) out += " required: False";
  }
  return out;
}

void BM_ParseAxtree(benchmark::State& state) {
  const auto text = synthetic_tree(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(axprune::parse_axtree(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseAxtree)->Arg(100)->Arg(1000)->Arg(10000);

void BM_PruneStructure(benchmark::State& state) {
  const auto n = state.range(0);
  const auto tree = axprune::parse_axtree(synthetic_tree(static_cast<std::size_t>(n)));
  const std::vector<axprune::LineRange> ranges{{n / 10, n / 10 + 20}, {n / 2, n / 2 + 50}, {n - 5, n}};
  for (auto _ : state) benchmark::DoNotOptimize(axprune::prune_structure(tree, ranges));
}
BENCHMARK(BM_PruneStructure)->Arg(1000)->Arg(10000);

void BM_CountTokens(benchmark::State& state) {
  const auto text = synthetic_tree(static_cast<std::size_t>(state.range(0)));
  const auto counter = axprune::TokenCounter::heuristic();
  for (auto _ : state) benchmark::DoNotOptimize(counter.count(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_CountTokens)->Arg(1000)->Arg(10000);

void BM_ChunkText(benchmark::State& state) {
  const auto text = synthetic_tree(static_cast<std::size_t>(state.range(0)));
  const auto counter = axprune::TokenCounter::heuristic();
  for (auto _ : state) benchmark::DoNotOptimize(axprune::chunk_text(text, counter, 100, 10));
}
BENCHMARK(BM_ChunkText)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
