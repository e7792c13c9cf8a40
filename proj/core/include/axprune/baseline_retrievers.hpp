#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "axprune/llm_gateway.hpp"
#include "axprune/observation.hpp"
#include "axprune/tokens.hpp"

namespace axprune {

struct Chunk {
  std::string text;
  /// Token indices [first, last) under the counter used for chunking.
  std::size_t token_begin = 0;
  std::size_t token_end = 0;
  /// Byte offsets [first, last) into the source text.
  std::size_t char_begin = 0;
  std::size_t char_end = 0;
  std::size_t index = 0;

  std::size_t token_count() const noexcept { return token_end - token_begin; }
};

struct RankedChunk {
  Chunk chunk;
  double score = 0.0;
};

/// Fixed-size token windows with stride chunk_size - overlap. The last
/// window ends at the final token and may be shorter. Chunk text spans from
/// the first token's start to the last token's end.
std::vector<Chunk> chunk_text(std::string_view text, const TokenCounter& counter,
                              std::size_t chunk_size = 100, std::size_t overlap = 10);

/// Dot product of two unit vectors. Throws DimensionMismatch.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

/// Sorted by score descending; ties go to the lower chunk index.
std::vector<RankedChunk> rank_chunks(std::vector<Chunk> chunks, const std::vector<double>& scores);

struct EmbedRetrieverConfig {
  std::size_t top_k = 10;
  std::size_t chunk_size = 100;
  std::size_t chunk_overlap = 10;
  std::string embedding_model = "text-embedding-3-small";
  TokenCounter token_counter = TokenCounter::heuristic();
  RetryPolicy retry;
};

/// Ranks chunks against a goal + history query and keeps the top_k,
/// re-assembled in document order and joined with '\n'.
PrunedObservation embed_retrieve(const Observation& obs, Transport& transport,
                                 const EmbedRetrieverConfig& config = {});

/// Longest prefix of whole lines whose token count fits the budget.
PrunedObservation bottom_truncate(std::string_view text, std::size_t token_budget,
                                  const TokenCounter& counter = TokenCounter::heuristic());

/// The observation unchanged; reduction is exactly 0.
PrunedObservation passthrough(std::string_view text,
                              const TokenCounter& counter = TokenCounter::heuristic());

}  // namespace axprune
