#include <curl/curl.h>

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <mutex>

#include <json.hpp>

#include "axprune/error.hpp"
#include "axprune/llm_gateway.hpp"

namespace axprune {
namespace {

using nlohmann::json;

void ensure_curl_initialized() {
  static std::once_flag once;
  std::call_once(once, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

std::size_t write_body(char* data, std::size_t size, std::size_t nmemb, void* user) {
  static_cast<std::string*>(user)->append(data, size * nmemb);
  return size * nmemb;
}

std::string trim_trailing_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

std::string provider_message(const std::string& body) {
  try {
    const auto doc = json::parse(body);
    if (doc.contains("error")) {
      const auto& err = doc["error"];
      if (err.is_object() && err.contains("message")) return err["message"].get<std::string>();
      if (err.is_string()) return err.get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return body.substr(0, 200);
}

}  // namespace

HttpTransport::HttpTransport(HttpConfig config) : config_(std::move(config)) {
  config_.endpoint = trim_trailing_slash(config_.endpoint);
  ensure_curl_initialized();
}

std::string HttpTransport::post(const std::string& path, const std::string& body) const {
  const char* key = std::getenv(config_.credential_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw Error(ErrorCode::AuthError, "environment variable " + config_.credential_env + " is not set");
  }

  std::unique_ptr<CURL, decltype(&curl_easy_cleanup)> curl(curl_easy_init(), curl_easy_cleanup);
  if (!curl) throw Error(ErrorCode::TransportError, "curl_easy_init failed");

  curl_slist* raw_headers = nullptr;
  raw_headers = curl_slist_append(raw_headers, "Content-Type: application/json");
  raw_headers = curl_slist_append(raw_headers, (std::string("Authorization: Bearer ") + key).c_str());
  std::unique_ptr<curl_slist, decltype(&curl_slist_free_all)> headers(raw_headers,
                                                                     curl_slist_free_all);

  const std::string url = config_.endpoint + path;
  std::string response;
  curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_HTTPHEADER, headers.get());
  curl_easy_setopt(curl.get(), CURLOPT_POSTFIELDS, body.c_str());
  curl_easy_setopt(curl.get(), CURLOPT_POSTFIELDSIZE_LARGE, static_cast<curl_off_t>(body.size()));
  curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, write_body);
  curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &response);
  curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, static_cast<long>(config_.timeout.count()));
  curl_easy_setopt(curl.get(), CURLOPT_NOSIGNAL, 1L);

  const CURLcode rc = curl_easy_perform(curl.get());
  if (rc != CURLE_OK) {
    throw Error(ErrorCode::TransportError, url + ": " + curl_easy_strerror(rc));
  }
  long status = 0;
  curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &status);
  if (status == 401 || status == 403) {
    throw Error(ErrorCode::AuthError, "HTTP " + std::to_string(status) + ": " + provider_message(response));
  }
  if (status == 429) {
    throw Error(ErrorCode::RateLimited, provider_message(response));
  }
  if (status >= 500) {
    throw Error(ErrorCode::TransportError, "HTTP " + std::to_string(status) + ": " + provider_message(response));
  }
  if (status < 200 || status >= 300) {
    throw Error(ErrorCode::ProviderError, "HTTP " + std::to_string(status) + ": " + provider_message(response));
  }
  return response;
}

std::string HttpTransport::complete(const ChatRequest& request) {
  const json body = {
      {"model", request.model_name},
      {"messages",
       json::array({
           {{"role", "system"}, {"content", request.system_message}},
           {{"role", "user"}, {"content", request.user_message}},
       })},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  const auto response = post("/chat/completions", body.dump());
  try {
    const auto doc = json::parse(response);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderError, std::string("malformed chat response: ") + e.what());
  }
}

std::vector<std::vector<double>> HttpTransport::embed_raw(const EmbedRequest& request) {
  const json body = {{"model", request.model_name}, {"input", request.texts}};
  const auto response = post("/embeddings", body.dump());
  try {
    const auto doc = json::parse(response);
    auto data = doc.at("data");
    std::vector<std::pair<std::size_t, std::vector<double>>> indexed;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data.at(i);
      indexed.emplace_back(item.value("index", i), item.at("embedding").get<std::vector<double>>());
    }
    std::stable_sort(indexed.begin(), indexed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::vector<double>> out;
    out.reserve(indexed.size());
    for (auto& [_, v] : indexed) out.push_back(std::move(v));
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderError, std::string("malformed embeddings response: ") + e.what());
  }
}

}  // namespace axprune
