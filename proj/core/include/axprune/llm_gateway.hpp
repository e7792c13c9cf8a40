#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace axprune {

struct ChatRequest {
  std::string system_message;
  std::string user_message;
  std::string model_name;
  int max_output_tokens = 4096;
  double temperature = 0.0;
};

struct EmbedRequest {
  std::vector<std::string> texts;
  std::string model_name = "text-embedding-3-small";
};

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  /// Scales `values` to unit L2 norm. Throws ProviderError on a zero vector.
  static EmbeddingVector normalized(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }
  double norm() const noexcept;

 private:
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

enum class TransportKind { LiveHttp, ReplayFixture, ScriptedMock };

/// Provider-neutral chat/embedding backend. Implementations must tolerate
/// concurrent calls from several threads.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportKind kind() const noexcept = 0;
  /// Returns the model's reply text for one request; no retries here.
  virtual std::string complete(const ChatRequest& request) = 0;
  /// Returns raw (unnormalized) vectors in input order; no retries here.
  virtual std::vector<std::vector<double>> embed_raw(const EmbedRequest& request) = 0;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  /// Defaults to std::this_thread::sleep_for; tests inject a recorder.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Sends one chat request, retrying RateLimited/TransportError failures with
/// delays base, 2*base, 4*base, ...
std::string chat(const ChatRequest& request, Transport& transport, const RetryPolicy& retry = {});

/// Order-preserving; every returned vector has unit norm and all share one
/// dimension (DimensionMismatch otherwise). Empty input makes no call.
std::vector<EmbeddingVector> embed(const EmbedRequest& request, Transport& transport,
                                   const RetryPolicy& retry = {});

/// Hex SHA-256 of the canonical JSON form of the request; the replay key.
std::string request_hash(const ChatRequest& request);
std::string request_hash(const EmbedRequest& request);

// ---------------------------------------------------------------------------

class ScriptedTransport final : public Transport {
 public:
  using ChatFn = std::function<std::string(const ChatRequest&)>;
  using EmbedFn = std::function<std::vector<double>(const std::string&)>;

  struct Rule {
    std::string contains;
    std::string reply;
  };

  /// Every chat call answers `reply`; embeddings use hashing_embedder().
  explicit ScriptedTransport(std::string reply);
  ScriptedTransport(ChatFn chat, EmbedFn embed);
  /// First rule whose `contains` occurs in the user message wins.
  ScriptedTransport(std::vector<Rule> rules, std::string default_reply);

  /// Reads {"rules": [{"contains", "reply"}], "default": str} from JSON.
  static ScriptedTransport from_script_file(const std::filesystem::path& path);

  /// Deterministic bag-of-tokens feature hashing into `dimension` buckets.
  static EmbedFn hashing_embedder(std::size_t dimension = 256);

  TransportKind kind() const noexcept override { return TransportKind::ScriptedMock; }
  std::string complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed_raw(const EmbedRequest& request) override;

  std::size_t chat_calls() const noexcept { return chat_calls_.load(); }
  std::size_t embed_calls() const noexcept { return embed_calls_.load(); }

 private:
  ChatFn chat_;
  EmbedFn embed_;
  std::atomic<std::size_t> chat_calls_{0};
  std::atomic<std::size_t> embed_calls_{0};
};

/// Serves recorded responses keyed by request_hash. Read-only after load.
/// Fixture lines: {"request_hash", "kind": "chat"|"embed",
/// "response_text" | "response_vectors"}.
class ReplayTransport final : public Transport {
 public:
  static ReplayTransport load(const std::filesystem::path& path);

  TransportKind kind() const noexcept override { return TransportKind::ReplayFixture; }
  std::string complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed_raw(const EmbedRequest& request) override;

  std::size_t size() const noexcept { return chats_.size() + embeddings_.size(); }

 private:
  std::unordered_map<std::string, std::string> chats_;
  std::unordered_map<std::string, std::vector<std::vector<double>>> embeddings_;
};

/// Forwards to another transport and appends every successful exchange to a
/// replay fixture file.
class RecordingTransport final : public Transport {
 public:
  RecordingTransport(Transport& inner, std::filesystem::path fixture);

  TransportKind kind() const noexcept override { return inner_.kind(); }
  std::string complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed_raw(const EmbedRequest& request) override;

 private:
  void append(const std::string& line);

  Transport& inner_;
  std::filesystem::path fixture_;
  std::mutex mutex_;
};

struct HttpConfig {
  /// Base URL; "/chat/completions" and "/embeddings" are appended.
  std::string endpoint = "https://api.openai.com/v1";
  std::string credential_env = "AXPRUNE_API_KEY";
  std::chrono::seconds timeout{120};
};

/// Chat-completions / embeddings JSON over HTTP(S) via libcurl.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(HttpConfig config = {});

  TransportKind kind() const noexcept override { return TransportKind::LiveHttp; }
  std::string complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed_raw(const EmbedRequest& request) override;

  const HttpConfig& config() const noexcept { return config_; }

 private:
  std::string post(const std::string& path, const std::string& body) const;

  HttpConfig config_;
};

}  // namespace axprune
