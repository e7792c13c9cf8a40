#include "axprune/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "axprune/error.hpp"

namespace axprune {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ConfigError, "line " + std::to_string(line) + ": " + message);
}

std::size_t to_size(std::string_view v, std::size_t line) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(line, "expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

double to_double(std::string_view v, std::size_t line) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + std::string(v) + "'");
  }
}

bool to_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace

RetrieverConfig HarnessConfig::retriever_config(PruneMode mode) const {
  RetrieverConfig c;
  c.mode = mode;
  c.model_name = model_name;
  c.include_history = include_history;
  c.fallback = fallback;
  c.max_prompt_tokens = max_prompt_tokens;
  c.truncate_budget = truncate_budget;
  c.max_output_tokens = max_output_tokens;
  c.temperature = temperature;
  c.token_counter = counter();
  c.prompt = PromptTemplate::from_files(system_prompt_file, user_prompt_file);
  c.retry = retry;
  return c;
}

EmbedRetrieverConfig HarnessConfig::embed_config() const {
  EmbedRetrieverConfig c;
  c.top_k = top_k;
  c.chunk_size = chunk_size;
  c.chunk_overlap = chunk_overlap;
  c.embedding_model = embedding_model;
  c.token_counter = counter();
  c.retry = retry;
  return c;
}

HttpConfig HarnessConfig::http_config() const {
  HttpConfig c;
  c.endpoint = endpoint;
  return c;
}

HarnessConfig parse_config(std::string_view text) {
  HarnessConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view l = raw;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    const auto key = trim(l.substr(0, eq));
    auto value = trim(l.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }

    if (key == "model_name") {
      cfg.model_name = value;
    } else if (key == "retriever_mode") {
      const auto mode = parse_prune_mode(value);
      if (!mode || (*mode != PruneMode::Remove && *mode != PruneMode::Structure)) {
        fail(line, "retriever_mode must be remove or structure");
      }
      cfg.retriever_mode = *mode;
    } else if (key == "include_history") {
      cfg.include_history = to_bool(value, line);
    } else if (key == "fallback") {
      const auto policy = parse_fallback_policy(value);
      if (!policy) fail(line, "fallback must be passthrough or truncate");
      cfg.fallback = *policy;
    } else if (key == "token_counter") {
      cfg.token_counter = value;
      try {
        (void)cfg.counter();
      } catch (const Error& e) {
        fail(line, e.what());
      }
    } else if (key == "max_prompt_tokens") {
      cfg.max_prompt_tokens = to_size(value, line);
      if (cfg.max_prompt_tokens == 0) fail(line, "max_prompt_tokens must be > 0");
    } else if (key == "truncate_budget") {
      cfg.truncate_budget = to_size(value, line);
    } else if (key == "chunk_size") {
      cfg.chunk_size = to_size(value, line);
    } else if (key == "chunk_overlap") {
      cfg.chunk_overlap = to_size(value, line);
    } else if (key == "top_k") {
      cfg.top_k = to_size(value, line);
      if (cfg.top_k == 0) fail(line, "top_k must be >= 1");
    } else if (key == "endpoint") {
      cfg.endpoint = value;
    } else if (key == "embedding_model") {
      cfg.embedding_model = value;
    } else if (key == "max_output_tokens") {
      cfg.max_output_tokens = static_cast<int>(to_size(value, line));
    } else if (key == "temperature") {
      cfg.temperature = to_double(value, line);
      if (cfg.temperature < 0) fail(line, "temperature must be >= 0");
    } else if (key == "system_prompt_file") {
      cfg.system_prompt_file = std::filesystem::path(value);
    } else if (key == "user_prompt_file") {
      cfg.user_prompt_file = std::filesystem::path(value);
    } else if (key == "workers") {
      cfg.workers = std::max<std::size_t>(1, to_size(value, line));
    } else if (key == "bin_edges") {
      std::vector<double> edges;
      std::size_t pos = 0;
      while (pos <= value.size()) {
        const auto comma = std::min(value.find(',', pos), value.size());
        edges.push_back(to_double(trim(value.substr(pos, comma - pos)), line));
        pos = comma + 1;
      }
      if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
        fail(line, "bin_edges must be ascending with at least two entries");
      }
      cfg.bin_edges = std::move(edges);
    } else {
      fail(line, "unknown key '" + std::string(key) + "'");
    }
  }
  if (cfg.chunk_overlap >= cfg.chunk_size) {
    throw Error(ErrorCode::ConfigError, "chunk_overlap must be smaller than chunk_size");
  }
  return cfg;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace axprune
