#include "axprune/llm_gateway.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "axprune/error.hpp"
#include "axprune/tokens.hpp"

namespace axprune {
namespace {

using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InvalidArgument, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

template <typename Fn>
auto with_retries(const RetryPolicy& retry, Fn&& fn) -> decltype(fn()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (const Error& e) {
      if (!e.transient() || attempt >= retry.max_retries) throw;
    }
    const auto delay = retry.base_delay * (1LL << attempt);
    if (retry.sleep) {
      retry.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

EmbeddingVector EmbeddingVector::normalized(std::vector<double> values) {
  double sq = 0.0;
  for (double v : values) sq += v * v;
  const double n = std::sqrt(sq);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::ProviderError, "embedding vector has zero or non-finite norm");
  }
  for (double& v : values) v /= n;
  return EmbeddingVector(std::move(values));
}

double EmbeddingVector::norm() const noexcept {
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

std::string chat(const ChatRequest& request, Transport& transport, const RetryPolicy& retry) {
  if (request.model_name.empty()) throw Error(ErrorCode::InvalidArgument, "model_name is empty");
  if (request.system_message.empty() && request.user_message.empty()) {
    throw Error(ErrorCode::InvalidArgument, "chat request has no messages");
  }
  return with_retries(retry, [&] { return transport.complete(request); });
}

std::vector<EmbeddingVector> embed(const EmbedRequest& request, Transport& transport,
                                   const RetryPolicy& retry) {
  if (request.texts.empty()) return {};
  auto raw = with_retries(retry, [&] { return transport.embed_raw(request); });
  if (raw.size() != request.texts.size()) {
    throw Error(ErrorCode::ProviderError, "expected " + std::to_string(request.texts.size()) +
                                              " embeddings, got " + std::to_string(raw.size()));
  }
  const auto dimension = raw.front().size();
  std::vector<EmbeddingVector> out;
  out.reserve(raw.size());
  for (auto& values : raw) {
    if (values.empty() || values.size() != dimension) {
      throw Error(ErrorCode::DimensionMismatch, "provider returned ragged embedding vectors");
    }
    out.push_back(EmbeddingVector::normalized(std::move(values)));
  }
  return out;
}

std::string request_hash(const ChatRequest& request) {
  const json canonical = {
      {"kind", "chat"},
      {"model", request.model_name},
      {"system", request.system_message},
      {"user", request.user_message},
      {"max_output_tokens", request.max_output_tokens},
      {"temperature", request.temperature},
  };
  return sha256_hex(canonical.dump());
}

std::string request_hash(const EmbedRequest& request) {
  const json canonical = {
      {"kind", "embed"},
      {"model", request.model_name},
      {"texts", request.texts},
  };
  return sha256_hex(canonical.dump());
}

// --- ScriptedTransport ------------------------------------------------------

ScriptedTransport::ScriptedTransport(std::string reply)
    : chat_([reply = std::move(reply)](const ChatRequest&) { return reply; }),
      embed_(hashing_embedder()) {}

ScriptedTransport::ScriptedTransport(ChatFn chat, EmbedFn embed)
    : chat_(std::move(chat)), embed_(embed ? std::move(embed) : hashing_embedder()) {}

ScriptedTransport::ScriptedTransport(std::vector<Rule> rules, std::string default_reply)
    : chat_([rules = std::move(rules), fallback = std::move(default_reply)](
                const ChatRequest& request) {
        for (const auto& rule : rules) {
          if (request.user_message.find(rule.contains) != std::string::npos) return rule.reply;
        }
        return fallback;
      }),
      embed_(hashing_embedder()) {}

ScriptedTransport ScriptedTransport::from_script_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "mock script " + path.string() + ": " + e.what());
  }
  std::vector<Rule> rules;
  try {
    for (const auto& r : doc.value("rules", json::array())) {
      rules.push_back({r.at("contains").get<std::string>(), r.at("reply").get<std::string>()});
    }
    return ScriptedTransport(std::move(rules), doc.value("default", std::string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "mock script " + path.string() + ": " + e.what());
  }
}

ScriptedTransport::EmbedFn ScriptedTransport::hashing_embedder(std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::InvalidArgument, "embedding dimension must be > 0");
  return [dimension](const std::string& text) {
    std::vector<double> v(dimension, 0.0);
    const auto counter = TokenCounter::heuristic();
    for (const auto& span : counter.offsets(text)) {
      std::string token = text.substr(span.start, span.end - span.start);
      for (auto& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      const auto h = fnv1a(token);
      v[h % dimension] += (h >> 63) ? -1.0 : 1.0;
    }
    // bias bucket keeps empty or cancelling texts away from the zero vector
    v[0] += 1e-3;
    return v;
  };
}

std::string ScriptedTransport::complete(const ChatRequest& request) {
  ++chat_calls_;
  return chat_(request);
}

std::vector<std::vector<double>> ScriptedTransport::embed_raw(const EmbedRequest& request) {
  ++embed_calls_;
  std::vector<std::vector<double>> out;
  out.reserve(request.texts.size());
  for (const auto& t : request.texts) out.push_back(embed_(t));
  return out;
}

// --- ReplayTransport --------------------------------------------------------

ReplayTransport ReplayTransport::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  ReplayTransport replay;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      const auto hash = rec.at("request_hash").get<std::string>();
      const auto kind = rec.at("kind").get<std::string>();
      if (kind == "chat") {
        replay.chats_[hash] = rec.at("response_text").get<std::string>();
      } else if (kind == "embed") {
        replay.embeddings_[hash] =
            rec.at("response_vectors").get<std::vector<std::vector<double>>>();
      } else {
        throw SchemaError(line_no, "unknown record kind '" + kind + "'");
      }
    } catch (const json::exception& e) {
      throw SchemaError(line_no, std::string("replay fixture: ") + e.what());
    }
  }
  return replay;
}

std::string ReplayTransport::complete(const ChatRequest& request) {
  const auto hash = request_hash(request);
  const auto it = chats_.find(hash);
  if (it == chats_.end()) throw Error(ErrorCode::ReplayMiss, "no chat recording for " + hash);
  return it->second;
}

std::vector<std::vector<double>> ReplayTransport::embed_raw(const EmbedRequest& request) {
  const auto hash = request_hash(request);
  const auto it = embeddings_.find(hash);
  if (it == embeddings_.end()) {
    throw Error(ErrorCode::ReplayMiss, "no embedding recording for " + hash);
  }
  return it->second;
}

// --- RecordingTransport -----------------------------------------------------

RecordingTransport::RecordingTransport(Transport& inner, std::filesystem::path fixture)
    : inner_(inner), fixture_(std::move(fixture)) {}

std::string RecordingTransport::complete(const ChatRequest& request) {
  auto text = inner_.complete(request);
  append(json{{"request_hash", request_hash(request)}, {"kind", "chat"}, {"response_text", text}}
             .dump());
  return text;
}

std::vector<std::vector<double>> RecordingTransport::embed_raw(const EmbedRequest& request) {
  auto vectors = inner_.embed_raw(request);
  append(json{{"request_hash", request_hash(request)},
              {"kind", "embed"},
              {"response_vectors", vectors}}
             .dump());
  return vectors;
}

void RecordingTransport::append(const std::string& line) {
  std::lock_guard lock(mutex_);
  std::ofstream out(fixture_, std::ios::app);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot append to " + fixture_.string());
  out << line << '\n';
}

}  // namespace axprune
