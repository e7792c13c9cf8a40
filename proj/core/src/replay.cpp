#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "axprune/baseline_retrievers.hpp"
#include "axprune/error.hpp"
#include "axprune/harness.hpp"
#include "axprune/line_retriever.hpp"

namespace axprune {
namespace {

struct EpisodeOutcome {
  std::vector<StepRow> rows;
  std::optional<EpisodeFailure> failure;
};

// Prebuilt per-run settings so prompt files are read once.
struct StrategyContext {
  PruneMode mode;
  const HarnessConfig& config;
  RetrieverConfig retriever;
  EmbedRetrieverConfig embedder;
};

PrunedObservation run(const StrategyContext& ctx, const Observation& obs, Transport& transport) {
  switch (ctx.mode) {
    case PruneMode::Remove:
    case PruneMode::Structure:
      return retrieve(obs, ctx.retriever, transport);
    case PruneMode::Embed:
      return embed_retrieve(obs, transport, ctx.embedder);
    case PruneMode::Truncate:
      return bottom_truncate(obs.axtree_text, ctx.config.truncate_budget, ctx.retriever.token_counter);
    case PruneMode::Passthrough:
      return passthrough(obs.axtree_text, ctx.retriever.token_counter);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

EpisodeOutcome replay_episode(const EpisodeRecord& ep, const StrategyContext& ctx, Transport& transport) {
  EpisodeOutcome outcome;
  Observation obs;
  obs.goal = ep.goal;
  for (std::size_t k = 0; k < ep.steps.size(); ++k) {
    obs.axtree_text = ep.steps[k].axtree_text;
    obs.step_index = k;
    try {
      const auto pruned = run(ctx, obs, transport);
      outcome.rows.push_back({ep.task_id, k, pruned.mode, pruned.original_token_count,
                              pruned.pruned_token_count, pruned.reduction, pruned.warnings});
    } catch (const Error& e) {
      outcome.failure = EpisodeFailure{ep.task_id, "step " + std::to_string(k) + ": " + e.what()};
      return outcome;
    }
    if (ep.steps[k].action_taken) obs.history.push_back(*ep.steps[k].action_taken);
  }
  return outcome;
}

}  // namespace

std::optional<PruneMode> parse_strategy(std::string_view name) noexcept {
  if (name == "line") return PruneMode::Remove;
  if (name == "line_structure") return PruneMode::Structure;
  if (name == "embed") return PruneMode::Embed;
  if (name == "truncate") return PruneMode::Truncate;
  if (name == "passthrough") return PruneMode::Passthrough;
  return std::nullopt;
}

std::string_view strategy_name(PruneMode mode) noexcept {
  switch (mode) {
    case PruneMode::Remove: return "line";
    case PruneMode::Structure: return "line_structure";
    case PruneMode::Embed: return "embed";
    case PruneMode::Truncate: return "truncate";
    case PruneMode::Passthrough: return "passthrough";
  }
  return "passthrough";
}

PrunedObservation run_strategy(PruneMode mode, const Observation& obs, const HarnessConfig& config,
                               Transport& transport) {
  const auto retriever_mode = mode == PruneMode::Structure ? PruneMode::Structure : PruneMode::Remove;
  const StrategyContext ctx{mode, config, config.retriever_config(retriever_mode), config.embed_config()};
  return run(ctx, obs, transport);
}

RunReport replay(const std::vector<EpisodeRecord>& episodes, PruneMode strategy,
                 const HarnessConfig& config, Transport& transport) {
  const auto retriever_mode = strategy == PruneMode::Structure ? PruneMode::Structure : PruneMode::Remove;
  const StrategyContext ctx{strategy, config, config.retriever_config(retriever_mode), config.embed_config()};

  std::vector<EpisodeOutcome> outcomes(episodes.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < episodes.size(); i = next++) {
      try {
        outcomes[i] = replay_episode(episodes[i], ctx, transport);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  const auto n_workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(1, episodes.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  RunReport report;
  report.strategy = std::string(strategy_name(strategy));
  report.token_counter = config.token_counter;

  std::vector<TaskResult> all;
  std::map<std::string, std::vector<TaskResult>> by_benchmark;
  std::vector<ReductionSample> samples;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    auto& outcome = outcomes[i];
    TaskResult task{episodes[i].success, {}};
    for (auto& row : outcome.rows) {
      task.step_reductions.push_back(row.reduction);
      samples.push_back({row.original_tokens, row.reduction});
      report.rows.push_back(std::move(row));
    }
    if (outcome.failure) report.errored.push_back(*outcome.failure);
    by_benchmark[episodes[i].benchmark].push_back(task);
    all.push_back(std::move(task));
  }

  if (!all.empty()) {
    const std::string name = by_benchmark.size() == 1 ? by_benchmark.begin()->first : "all";
    report.summary = summarize(name, all);
    for (const auto& [bench, tasks] : by_benchmark) report.per_benchmark.push_back(summarize(bench, tasks));
  }
  report.boxplot = bucket_reductions(samples, config.bin_edges);
  return report;
}

CostTable cost_report(const std::vector<StepRow>& rows, const CostModel& model) {
  if (rows.empty()) throw Error(ErrorCode::EmptyResults, "cost report needs at least one step");
  CostTable table;
  table.model = model;
  table.threshold = cost_threshold(model);
  std::size_t effective = 0;
  for (const auto& r : rows) {
    CostRow c;
    c.task_id = r.task_id;
    c.step = r.step;
    c.original_tokens = r.original_tokens;
    c.pruned_tokens = r.pruned_tokens;
    const auto cmp = cost_compare(model, r.original_tokens, r.pruned_tokens);
    c.retriever_cost = cmp.retriever_pipeline;
    c.plain_cost = cmp.plain_pipeline;
    if (r.original_tokens > 0) {
      c.alpha = static_cast<double>(r.pruned_tokens) / static_cast<double>(r.original_tokens);
      c.cost_effective = cmp.cost_effective();
    }
    effective += c.cost_effective ? 1 : 0;
    table.total_retriever_cost += c.retriever_cost;
    table.total_plain_cost += c.plain_cost;
    table.rows.push_back(std::move(c));
  }
  table.fraction_effective = static_cast<double>(effective) / static_cast<double>(rows.size());
  return table;
}

}  // namespace axprune
