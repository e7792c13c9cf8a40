#include "axprune/error.hpp"

namespace axprune {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::PromptTooLarge: return "PromptTooLarge";
    case ErrorCode::NoAnswerBlock: return "NoAnswerBlock";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::ProviderError: return "ProviderError";
    case ErrorCode::ReplayMiss: return "ReplayMiss";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroOriginal: return "ZeroOriginal";
    case ErrorCode::NonPositiveLargeCost: return "NonPositiveLargeCost";
    case ErrorCode::EmptyResults: return "EmptyResults";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool Error::transient() const noexcept {
  return code_ == ErrorCode::RateLimited || code_ == ErrorCode::TransportError;
}

SchemaError::SchemaError(std::size_t line, const std::string& message)
    : Error(ErrorCode::SchemaError, "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace axprune
