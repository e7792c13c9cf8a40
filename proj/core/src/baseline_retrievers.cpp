#include "axprune/baseline_retrievers.hpp"

#include <algorithm>
#include <numeric>

#include "axprune/error.hpp"

namespace axprune {
namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::size_t> all_lines(std::size_t count) {
  std::vector<std::size_t> lines(count);
  std::iota(lines.begin(), lines.end(), std::size_t{1});
  return lines;
}

}  // namespace

std::vector<Chunk> chunk_text(std::string_view text, const TokenCounter& counter,
                              std::size_t chunk_size, std::size_t overlap) {
  if (chunk_size == 0 || overlap >= chunk_size) {
    throw Error(ErrorCode::InvalidArgument, "chunk_size must exceed overlap");
  }
  const auto spans = counter.offsets(text);
  std::vector<Chunk> chunks;
  const std::size_t stride = chunk_size - overlap;
  for (std::size_t begin = 0; begin < spans.size(); begin += stride) {
    const std::size_t end = std::min(begin + chunk_size, spans.size());
    Chunk c;
    c.index = chunks.size();
    c.token_begin = begin;
    c.token_end = end;
    c.char_begin = spans[begin].start;
    c.char_end = spans[end - 1].end;
    c.text = std::string(text.substr(c.char_begin, c.char_end - c.char_begin));
    chunks.push_back(std::move(c));
    if (end == spans.size()) break;
  }
  return chunks;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "cosine_similarity of " + std::to_string(u.dimension()) +
                                                  "-d and " + std::to_string(v.dimension()) + "-d vectors");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < u.dimension(); ++i) dot += u.values()[i] * v.values()[i];
  return dot;
}

std::vector<RankedChunk> rank_chunks(std::vector<Chunk> chunks, const std::vector<double>& scores) {
  if (chunks.size() != scores.size()) {
    throw Error(ErrorCode::InvalidArgument, "one score per chunk required");
  }
  std::vector<RankedChunk> ranked;
  ranked.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) ranked.push_back({std::move(chunks[i]), scores[i]});
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedChunk& a, const RankedChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.chunk.index < b.chunk.index;
  });
  return ranked;
}

PrunedObservation embed_retrieve(const Observation& obs, Transport& transport,
                                 const EmbedRetrieverConfig& config) {
  if (config.top_k == 0) throw Error(ErrorCode::InvalidArgument, "top_k must be >= 1");
  const auto& counter = config.token_counter;

  PrunedObservation out;
  out.mode = PruneMode::Embed;
  const auto lines = split_lines(obs.axtree_text);
  out.original_line_count = lines.size();
  out.original_token_count = counter.count(obs.axtree_text);

  auto chunks = chunk_text(obs.axtree_text, counter, config.chunk_size, config.chunk_overlap);
  if (chunks.empty()) {
    out.warnings.push_back("empty observation; reduction recorded as 0");
    return out;
  }

  std::string query = obs.goal;
  if (!obs.history.empty()) query += "\n" + join(obs.history, "\n");

  EmbedRequest request;
  request.model_name = config.embedding_model;
  request.texts.reserve(chunks.size() + 1);
  request.texts.push_back(query);
  for (const auto& c : chunks) request.texts.push_back(c.text);
  const auto vectors = embed(request, transport, config.retry);

  std::vector<double> scores;
  scores.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    scores.push_back(cosine_similarity(vectors[0], vectors[i + 1]));
  }
  auto ranked = rank_chunks(std::move(chunks), scores);
  ranked.resize(std::min(ranked.size(), config.top_k));
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedChunk& a, const RankedChunk& b) { return a.chunk.index < b.chunk.index; });

  // line starts, for reporting which source lines the chunks touch
  std::vector<std::size_t> line_start;
  line_start.reserve(lines.size());
  for (const auto& l : lines) line_start.push_back(static_cast<std::size_t>(l.data() - obs.axtree_text.data()));
  std::vector<bool> touched(lines.size(), false);

  std::vector<std::string> parts;
  for (const auto& r : ranked) {
    parts.push_back(r.chunk.text);
    auto first = std::upper_bound(line_start.begin(), line_start.end(), r.chunk.char_begin) - line_start.begin() - 1;
    auto last = std::upper_bound(line_start.begin(), line_start.end(), r.chunk.char_end - 1) - line_start.begin() - 1;
    for (auto k = first; k <= last; ++k) touched[static_cast<std::size_t>(k)] = true;
  }
  for (std::size_t i = 0; i < touched.size(); ++i) {
    if (touched[i]) out.kept_line_numbers.push_back(i + 1);
  }
  out.text = join(parts, "\n");
  out.pruned_token_count = counter.count(out.text);
  out.reduction = token_reduction(out.original_token_count, out.pruned_token_count);
  return out;
}

PrunedObservation bottom_truncate(std::string_view text, std::size_t token_budget,
                                  const TokenCounter& counter) {
  PrunedObservation out;
  out.mode = PruneMode::Truncate;
  const auto lines = split_lines(text);
  out.original_line_count = lines.size();
  out.original_token_count = counter.count(text);

  if (out.original_token_count <= token_budget) {
    out.text = std::string(text);
    out.kept_line_numbers = all_lines(lines.size());
  } else {
    std::size_t keep = 0;
    std::size_t used = 0;
    while (keep < lines.size()) {
      const auto cost = counter.count(lines[keep]);
      if (used + cost > token_budget) break;
      used += cost;
      ++keep;
    }
    // Plugin counters need not be additive across '\n'; recheck the real prefix.
    auto prefix = [&](std::size_t k) {
      return k == 0 ? std::string_view() : text.substr(0, static_cast<std::size_t>(lines[k - 1].data() - text.data()) + lines[k - 1].size());
    };
    while (keep > 0 && counter.count(prefix(keep)) > token_budget) --keep;
    out.text = std::string(prefix(keep));
    out.kept_line_numbers = all_lines(keep);
  }
  out.pruned_token_count = counter.count(out.text);
  out.reduction = token_reduction(out.original_token_count, out.pruned_token_count);
  return out;
}

PrunedObservation passthrough(std::string_view text, const TokenCounter& counter) {
  PrunedObservation out;
  out.mode = PruneMode::Passthrough;
  out.text = std::string(text);
  out.original_line_count = split_lines(text).size();
  out.kept_line_numbers = all_lines(out.original_line_count);
  out.original_token_count = counter.count(text);
  out.pruned_token_count = out.original_token_count;
  out.reduction = 0.0;
  return out;
}

}  // namespace axprune
