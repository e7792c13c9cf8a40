#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace axprune {

/// Half-open byte range [start, end) of one token in the source text.
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

enum class CounterKind { Heuristic, ExactPlugin };

using TokenizeFn = std::function<std::vector<TokenSpan>(std::string_view)>;

/// Length definition shared by reduction metrics, budgets and chunking.
///
/// The default counter segments text into maximal alphanumeric runs plus
/// single non-space symbols. Bytes >= 0x80 count as alphanumeric so UTF-8
/// sequences are never split. Joining two texts without whitespace can
/// merge a trailing and a leading run, so counts are additive over
/// concatenation up to one token per joint.
///
/// Plugins supply their own span function; it must return ordered,
/// disjoint spans and be safe to call concurrently.
class TokenCounter {
 public:
  /// The word-and-symbol heuristic, registered as "heuristic".
  static TokenCounter heuristic();
  /// One token per UTF-8 code point, registered as "chars".
  static TokenCounter characters();
  static TokenCounter plugin(std::string name, TokenizeFn tokenize);

  /// Looks up a counter by the `token_counter` config value.
  static TokenCounter by_name(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  CounterKind kind() const noexcept { return kind_; }

  std::vector<TokenSpan> offsets(std::string_view text) const;
  std::size_t count(std::string_view text) const;

 private:
  TokenCounter(std::string name, CounterKind kind, TokenizeFn tokenize);

  std::string name_;
  CounterKind kind_;
  std::shared_ptr<const TokenizeFn> tokenize_;
};

inline std::size_t count_tokens(std::string_view text, const TokenCounter& counter) {
  return counter.count(text);
}

inline std::vector<TokenSpan> tokenize_offsets(std::string_view text,
                                               const TokenCounter& counter) {
  return counter.offsets(text);
}

}  // namespace axprune
