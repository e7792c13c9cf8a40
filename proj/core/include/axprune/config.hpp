#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axprune/baseline_retrievers.hpp"
#include "axprune/line_retriever.hpp"
#include "axprune/llm_gateway.hpp"
#include "axprune/metrics.hpp"

namespace axprune {

/// Settings shared by the CLI and the replay harness.
///
/// File format: one `key = value` per line; `#` starts a comment; blank
/// lines are ignored; values may be wrapped in double quotes. Booleans
/// accept true/false/1/0/yes/no. `bin_edges` is a comma-separated list of
/// ascending numbers where `inf` is allowed. Unknown keys are an error.
///
///   model_name         retriever chat model           (gpt-4.1-mini)
///   retriever_mode     remove | structure             (remove)
///   include_history    bool                           (true)
///   fallback           passthrough | truncate         (passthrough)
///   token_counter      heuristic | chars              (heuristic)
///   max_prompt_tokens  retriever prompt budget        (40000)
///   truncate_budget    bottom-truncation budget       (10000)
///   chunk_size         embedding chunk tokens         (100)
///   chunk_overlap      embedding chunk overlap        (10)
///   top_k              embedding chunks kept          (10)
///   endpoint           chat/embeddings base URL       (https://api.openai.com/v1)
///   embedding_model    embeddings model               (text-embedding-3-small)
///   max_output_tokens  retriever reply cap            (4096)
///   temperature        retriever sampling temperature (0)
///   system_prompt_file overrides the built-in system prompt
///   user_prompt_file   overrides the built-in user template
///   workers            episodes replayed in parallel  (1)
///   bin_edges          box-plot token-count bins      (0,1000,2000,4000,8000,16000,32000,inf)
struct HarnessConfig {
  std::string model_name = "gpt-4.1-mini";
  PruneMode retriever_mode = PruneMode::Remove;
  bool include_history = true;
  FallbackPolicy fallback = FallbackPolicy::Passthrough;
  std::string token_counter = "heuristic";
  std::size_t max_prompt_tokens = 40000;
  std::size_t truncate_budget = 10000;
  std::size_t chunk_size = 100;
  std::size_t chunk_overlap = 10;
  std::size_t top_k = 10;
  std::string endpoint = "https://api.openai.com/v1";
  std::string embedding_model = "text-embedding-3-small";
  int max_output_tokens = 4096;
  double temperature = 0.0;
  std::optional<std::filesystem::path> system_prompt_file;
  std::optional<std::filesystem::path> user_prompt_file;
  std::size_t workers = 1;
  std::vector<double> bin_edges = default_bin_edges();
  RetryPolicy retry;

  TokenCounter counter() const { return TokenCounter::by_name(token_counter); }
  RetrieverConfig retriever_config(PruneMode mode) const;
  EmbedRetrieverConfig embed_config() const;
  HttpConfig http_config() const;
};

/// Throws ConfigError naming the offending line.
HarnessConfig parse_config(std::string_view text);
HarnessConfig load_config(const std::filesystem::path& path);

}  // namespace axprune
