#include "axprune/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axprune/error.hpp"

namespace axprune {

double reduction(std::size_t original_len, std::size_t reduced_len) {
  if (original_len == 0) throw Error(ErrorCode::ZeroOriginal, "original length is 0");
  return 1.0 - static_cast<double>(reduced_len) / static_cast<double>(original_len);
}

SuccessRate success_rate_se(std::size_t successes, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "success_rate_se needs n >= 1");
  if (successes > n) throw Error(ErrorCode::InvalidArgument, "successes exceed n");
  const double p = static_cast<double>(successes) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

double cost_threshold(const CostModel& model) {
  if (!(model.c_large > 0.0)) {
    throw Error(ErrorCode::NonPositiveLargeCost, "c_large must be > 0");
  }
  if (model.c_small < 0.0) throw Error(ErrorCode::InvalidArgument, "c_small must be >= 0");
  return (model.c_large - model.c_small) / model.c_large;
}

CostComparison cost_compare(const CostModel& model, std::size_t original_tokens,
                            std::size_t reduced_tokens) {
  constexpr double kPerMillion = 1e6;
  const auto original = static_cast<double>(original_tokens);
  const auto reduced = static_cast<double>(reduced_tokens);
  return {
      model.c_small * original / kPerMillion + model.c_large * reduced / kPerMillion,
      model.c_large * original / kPerMillion,
  };
}

BenchmarkSummary summarize(std::string name, const std::vector<TaskResult>& results) {
  if (results.empty()) throw Error(ErrorCode::EmptyResults, "no task results to summarize");
  BenchmarkSummary s;
  s.name = std::move(name);
  s.n_tasks = results.size();
  double total = 0.0;
  for (const auto& r : results) {
    if (!r.success) {
      ++s.n_unlabeled;
    } else if (*r.success) {
      ++s.successes;
    }
    for (double x : r.step_reductions) total += x;
    s.n_steps += r.step_reductions.size();
  }
  const auto rate = success_rate_se(s.successes, s.n_tasks);
  s.sr = rate.sr;
  s.se = rate.se;
  s.avg_reduction = s.n_steps == 0 ? 0.0 : total / static_cast<double>(s.n_steps);
  return s;
}

std::vector<double> default_bin_edges() {
  return {0, 1000, 2000, 4000, 8000, 16000, 32000, std::numeric_limits<double>::infinity()};
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<BoxplotBin> bucket_reductions(const std::vector<ReductionSample>& samples,
                                          const std::vector<double>& edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw Error(ErrorCode::InvalidArgument, "bin edges must be ascending with at least two entries");
  }
  std::vector<std::vector<double>> values(edges.size() - 1);
  for (const auto& s : samples) {
    const auto x = static_cast<double>(s.original_tokens);
    // first edge strictly greater than x closes x's bin
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    if (it == edges.begin() || it == edges.end()) continue;
    values[static_cast<std::size_t>(it - edges.begin()) - 1].push_back(s.reduction);
  }

  std::vector<BoxplotBin> bins;
  bins.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    BoxplotBin bin{edges[i], edges[i + 1], values[i].size(), std::nullopt};
    if (!values[i].empty()) {
      auto& v = values[i];
      std::sort(v.begin(), v.end());
      bin.stats = BoxStats{v.front(), quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), v.back()};
    }
    bins.push_back(bin);
  }
  return bins;
}

}  // namespace axprune
