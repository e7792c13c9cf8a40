#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace axprune {

enum class ErrorCode {
  EmptyInput,
  PromptTooLarge,
  NoAnswerBlock,
  EmptySelection,
  AuthError,
  RateLimited,
  TransportError,
  ProviderError,
  ReplayMiss,
  DimensionMismatch,
  ZeroOriginal,
  NonPositiveLargeCost,
  EmptyResults,
  FileNotFound,
  SchemaError,
  ConfigError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  /// RateLimited and TransportError are worth retrying; everything else is not.
  bool transient() const noexcept;

 private:
  ErrorCode code_;
};

/// Raised by load_episodes; carries the 1-based line of the offending record.
class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace axprune
