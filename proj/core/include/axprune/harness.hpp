#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axprune/config.hpp"
#include "axprune/llm_gateway.hpp"
#include "axprune/metrics.hpp"
#include "axprune/observation.hpp"

namespace axprune {

struct EpisodeStep {
  std::string axtree_text;
  std::optional<std::string> action_taken;
};

/// One recorded task. JSONL schema, one record per line:
/// {"task_id": str, "benchmark": str, "goal": str,
///  "steps": [{"axtree_text": str, "action_taken": str|null}],
///  "success": bool|null}
struct EpisodeRecord {
  std::string task_id;
  std::string benchmark;
  std::string goal;
  std::vector<EpisodeStep> steps;
  std::optional<bool> success;
};

/// Throws FileNotFound, or SchemaError carrying the 1-based line number.
std::vector<EpisodeRecord> load_episodes(const std::filesystem::path& path);
std::vector<EpisodeRecord> parse_episodes(std::istream& in);
void save_episodes(const std::filesystem::path& path, const std::vector<EpisodeRecord>& episodes);

/// Actions taken before `step` (0-based), skipping steps without one.
std::vector<std::string> history_before(const EpisodeRecord& episode, std::size_t step);

/// Replay strategy names: line, line_structure, embed, truncate, passthrough.
std::optional<PruneMode> parse_strategy(std::string_view name) noexcept;
std::string_view strategy_name(PruneMode mode) noexcept;

/// Runs one pruning strategy on one observation.
PrunedObservation run_strategy(PruneMode mode, const Observation& obs, const HarnessConfig& config,
                               Transport& transport);

struct StepRow {
  std::string task_id;
  std::size_t step = 0;
  PruneMode mode = PruneMode::Passthrough;
  std::size_t original_tokens = 0;
  std::size_t pruned_tokens = 0;
  double reduction = 0.0;
  std::vector<std::string> warnings;
};

struct EpisodeFailure {
  std::string task_id;
  std::string message;
};

struct RunReport {
  std::string strategy;
  std::string token_counter;
  std::vector<StepRow> rows;
  BenchmarkSummary summary;
  std::vector<BenchmarkSummary> per_benchmark;
  std::vector<BoxplotBin> boxplot;
  std::vector<EpisodeFailure> errored;
};

/// Replays every episode step by step. Episodes run on config.workers
/// threads; rows keep episode order. An episode hitting a transport error
/// stops there and is listed in `errored`; the batch continues.
RunReport replay(const std::vector<EpisodeRecord>& episodes, PruneMode strategy,
                 const HarnessConfig& config, Transport& transport);

/// Writes report.csv, summary.json and boxplot.csv into `dir`.
void write_report(const std::filesystem::path& dir, const RunReport& report);
std::string report_csv(const std::vector<StepRow>& rows);
std::string summary_json(const RunReport& report);
std::string boxplot_csv(const std::vector<BoxplotBin>& bins);

/// Reads rows back from a report.csv.
std::vector<StepRow> read_report_csv(const std::filesystem::path& path);

struct CostRow {
  std::string task_id;
  std::size_t step = 0;
  std::size_t original_tokens = 0;
  std::size_t pruned_tokens = 0;
  /// pruned/original; 1 when the original is empty.
  double alpha = 1.0;
  double retriever_cost = 0.0;
  double plain_cost = 0.0;
  bool cost_effective = false;
};

struct CostTable {
  CostModel model;
  double threshold = 0.0;
  std::vector<CostRow> rows;
  double total_retriever_cost = 0.0;
  double total_plain_cost = 0.0;
  double fraction_effective = 0.0;
};

/// Per-step and total pipeline costs. Empty observations are never counted
/// as cost-effective. Throws EmptyResults when there are no rows.
CostTable cost_report(const std::vector<StepRow>& rows, const CostModel& model);
inline CostTable cost_report(const RunReport& report, const CostModel& model) {
  return cost_report(report.rows, model);
}
std::string cost_csv(const CostTable& table);

}  // namespace axprune
