#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace axprune {

/// 1 - reduced/original. Negative when the output grew. Throws ZeroOriginal.
double reduction(std::size_t original_len, std::size_t reduced_len);

struct SuccessRate {
  double sr = 0.0;
  double se = 0.0;
};

/// sr = successes/n, se = sqrt(sr(1-sr)/n) (binomial standard error).
SuccessRate success_rate_se(std::size_t successes, std::size_t n);

/// Prices in currency per 1M tokens for the small retriever model and the
/// large action model.
struct CostModel {
  double c_small = 0.0;
  double c_large = 0.0;
};

/// Largest reduced/original ratio at which retrieval still pays:
/// (c_large - c_small) / c_large. Throws NonPositiveLargeCost.
double cost_threshold(const CostModel& model);

struct CostComparison {
  /// c_small * |original| + c_large * |reduced|, scaled per 1M tokens.
  double retriever_pipeline = 0.0;
  /// c_large * |original|, scaled per 1M tokens.
  double plain_pipeline = 0.0;

  bool cost_effective() const noexcept { return retriever_pipeline <= plain_pipeline; }
};

CostComparison cost_compare(const CostModel& model, std::size_t original_tokens,
                            std::size_t reduced_tokens);

struct TaskResult {
  /// Unlabeled tasks count as failures.
  std::optional<bool> success;
  std::vector<double> step_reductions;
};

struct BenchmarkSummary {
  std::string name;
  std::size_t n_tasks = 0;
  std::size_t successes = 0;
  std::size_t n_unlabeled = 0;
  std::size_t n_steps = 0;
  double sr = 0.0;
  double se = 0.0;
  /// Mean over all steps of all tasks.
  double avg_reduction = 0.0;
};

/// Throws EmptyResults when `results` is empty.
BenchmarkSummary summarize(std::string name, const std::vector<TaskResult>& results);

struct ReductionSample {
  std::size_t original_tokens = 0;
  double reduction = 0.0;
};

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct BoxplotBin {
  double low = 0.0;
  /// Exclusive; may be +infinity.
  double high = 0.0;
  std::size_t count = 0;
  /// Empty for bins without samples.
  std::optional<BoxStats> stats;
};

/// Token-count bin edges used when none are configured; the last bin is open-ended.
std::vector<double> default_bin_edges();

/// Inclusive linear-interpolation quantile of an ascending sample.
double quantile(const std::vector<double>& sorted, double p);

/// Groups samples into [edges[i], edges[i+1]) bins by original token count
/// and computes five-number summaries of the reductions in each bin.
/// Samples outside every bin are ignored.
std::vector<BoxplotBin> bucket_reductions(const std::vector<ReductionSample>& samples,
                                          const std::vector<double>& edges = default_bin_edges());

}  // namespace axprune
