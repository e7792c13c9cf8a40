#include "axprune/tokens.hpp"

#include "axprune/error.hpp"

namespace axprune {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         c >= 0x80;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::vector<TokenSpan> heuristic_spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space_byte(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      const std::size_t start = i;
      while (i < n && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
      spans.push_back({start, i});
    } else {
      spans.push_back({i, i + 1});
      ++i;
    }
  }
  return spans;
}

std::vector<TokenSpan> codepoint_spans(std::string_view text) {
  std::vector<TokenSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i++;
    // continuation bytes are 10xxxxxx
    while (i < text.size() && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
    spans.push_back({start, i});
  }
  return spans;
}

}  // namespace

TokenCounter::TokenCounter(std::string name, CounterKind kind, TokenizeFn tokenize)
    : name_(std::move(name)),
      kind_(kind),
      tokenize_(std::make_shared<const TokenizeFn>(std::move(tokenize))) {}

TokenCounter TokenCounter::heuristic() {
  return TokenCounter("heuristic", CounterKind::Heuristic, heuristic_spans);
}

TokenCounter TokenCounter::characters() {
  return TokenCounter("chars", CounterKind::Heuristic, codepoint_spans);
}

TokenCounter TokenCounter::plugin(std::string name, TokenizeFn tokenize) {
  if (!tokenize) throw Error(ErrorCode::InvalidArgument, "token counter plugin without function");
  return TokenCounter(std::move(name), CounterKind::ExactPlugin, std::move(tokenize));
}

TokenCounter TokenCounter::by_name(std::string_view name) {
  if (name == "heuristic") return heuristic();
  if (name == "chars") return characters();
  throw Error(ErrorCode::ConfigError, "unknown token_counter '" + std::string(name) + "'");
}

std::vector<TokenSpan> TokenCounter::offsets(std::string_view text) const {
  return (*tokenize_)(text);
}

std::size_t TokenCounter::count(std::string_view text) const {
  if (kind_ == CounterKind::Heuristic && name_ == "heuristic") {
    // Same segmentation as heuristic_spans without materialising the spans.
    std::size_t tokens = 0;
    std::size_t i = 0;
    while (i < text.size()) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (is_space_byte(c)) {
        ++i;
      } else if (is_word_byte(c)) {
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        ++tokens;
      } else {
        ++i;
        ++tokens;
      }
    }
    return tokens;
  }
  return offsets(text).size();
}

}  // namespace axprune
