#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace axprune {

/// What the agent sees at one step of an episode.
struct Observation {
  std::string goal;
  std::vector<std::string> history;
  std::string axtree_text;
  std::size_t step_index = 0;
};

/// Inclusive, 1-based line interval. Values are signed because they come
/// straight from model output; normalize_ranges() makes them valid.
struct LineRange {
  std::int64_t start = 0;
  std::int64_t end = 0;

  std::int64_t length() const noexcept { return end - start + 1; }

  friend bool operator==(const LineRange&, const LineRange&) = default;
};

enum class PruneMode { Remove, Structure, Truncate, Embed, Passthrough };

std::string_view to_string(PruneMode mode) noexcept;
std::optional<PruneMode> parse_prune_mode(std::string_view name) noexcept;

struct PrunedObservation {
  std::string text;
  std::vector<std::size_t> kept_line_numbers;
  std::size_t original_line_count = 0;
  std::size_t original_token_count = 0;
  std::size_t pruned_token_count = 0;
  /// 1 - pruned/original in tokens; 0 when the original has no tokens.
  double reduction = 0.0;
  PruneMode mode = PruneMode::Passthrough;
  std::vector<std::string> warnings;

  /// 1 - kept/original in lines; 0 when the original has no lines.
  double line_reduction() const noexcept;
};

/// 1 - pruned/original, or 0 when the original has no tokens.
double token_reduction(std::size_t original_tokens, std::size_t pruned_tokens) noexcept;

/// Splits on '\n' only. "" yields no lines; "a\n" yields {"a", ""}.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace axprune
