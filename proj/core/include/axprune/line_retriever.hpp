#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "axprune/axtree.hpp"
#include "axprune/llm_gateway.hpp"
#include "axprune/observation.hpp"
#include "axprune/tokens.hpp"

namespace axprune {

/// System text plus a user template with {goal}, {history} and {axtree_txt} slots.
struct PromptTemplate {
  std::string system;
  std::string user;

  static const PromptTemplate& builtin();
  /// Starts from builtin() and replaces whichever parts have a file given.
  static PromptTemplate from_files(const std::optional<std::filesystem::path>& system_file,
                                   const std::optional<std::filesystem::path>& user_file);

  /// Single-pass substitution: text inserted into one slot is never rescanned.
  std::string render_user(std::string_view goal, std::string_view history,
                          std::string_view axtree_txt) const;
};

inline constexpr std::string_view kNoHistory = "(no prior actions)";

enum class FallbackPolicy { Passthrough, Truncate };

std::string_view to_string(FallbackPolicy policy) noexcept;
std::optional<FallbackPolicy> parse_fallback_policy(std::string_view name) noexcept;

struct RetrieverConfig {
  /// Remove or Structure.
  PruneMode mode = PruneMode::Remove;
  std::string model_name = "gpt-4.1-mini";
  bool include_history = true;
  FallbackPolicy fallback = FallbackPolicy::Passthrough;
  std::size_t max_prompt_tokens = 40000;
  /// Budget used when fallback == Truncate.
  std::size_t truncate_budget = 10000;
  int max_output_tokens = 4096;
  double temperature = 0.0;
  TokenCounter token_counter = TokenCounter::heuristic();
  PromptTemplate prompt = PromptTemplate::builtin();
  RetryPolicy retry;
};

/// Numbers the observation lines and fills the prompt template. Throws
/// PromptTooLarge when system + user exceed config.max_prompt_tokens.
ChatRequest build_prompt(const Observation& obs, const RetrieverConfig& config);

/// Extracts line ranges from the last <answer> block (or, failing that, the
/// last bracketed list in the text) and normalizes them against max_line.
///
/// Accepted forms: `(a,b)`, `[a,b]`, `a-b`, a lone `n` as `(n,n)`, and flat
/// integer lists read pairwise. Throws NoAnswerBlock when nothing is
/// parseable and EmptySelection when no range survives normalization.
NormalizedRanges parse_llm_response(std::string_view raw, std::int64_t max_line);

/// build_prompt -> chat -> parse_llm_response -> prune in config.mode.
///
/// PromptTooLarge, NoAnswerBlock, EmptySelection and empty observations all
/// route to config.fallback and add a warning; transport errors propagate.
PrunedObservation retrieve(const Observation& obs, const RetrieverConfig& config,
                           Transport& transport);

}  // namespace axprune
