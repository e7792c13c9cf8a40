#include "axprune/line_retriever.hpp"

#include "axprune/baseline_retrievers.hpp"
#include "axprune/error.hpp"

namespace axprune {
namespace {

std::string render_history(const Observation& obs, bool include_history) {
  if (!include_history || obs.history.empty()) return std::string(kNoHistory);
  std::string out;
  for (std::size_t i = 0; i < obs.history.size(); ++i) {
    if (i) out += '\n';
    out += obs.history[i];
  }
  return out;
}

PrunedObservation fall_back(const Observation& obs, const RetrieverConfig& config,
                            const std::string& reason, std::vector<std::string> warnings = {}) {
  PrunedObservation out = config.fallback == FallbackPolicy::Truncate
                              ? bottom_truncate(obs.axtree_text, config.truncate_budget, config.token_counter)
                              : passthrough(obs.axtree_text, config.token_counter);
  out.warnings = std::move(warnings);
  out.warnings.push_back("fallback to " + std::string(to_string(config.fallback)) + ": " + reason);
  return out;
}

void validate(const RetrieverConfig& config) {
  if (config.mode != PruneMode::Remove && config.mode != PruneMode::Structure) {
    throw Error(ErrorCode::InvalidArgument, "line retriever mode must be remove or structure");
  }
  if (config.max_prompt_tokens == 0) {
    throw Error(ErrorCode::InvalidArgument, "max_prompt_tokens must be > 0");
  }
}

}  // namespace

std::string_view to_string(FallbackPolicy policy) noexcept {
  return policy == FallbackPolicy::Truncate ? "truncate" : "passthrough";
}

std::optional<FallbackPolicy> parse_fallback_policy(std::string_view name) noexcept {
  if (name == "passthrough") return FallbackPolicy::Passthrough;
  if (name == "truncate") return FallbackPolicy::Truncate;
  return std::nullopt;
}

ChatRequest build_prompt(const Observation& obs, const RetrieverConfig& config) {
  if (obs.goal.empty()) throw Error(ErrorCode::InvalidArgument, "observation goal is empty");

  ChatRequest request;
  request.system_message = config.prompt.system;
  request.user_message = config.prompt.render_user(
      obs.goal, render_history(obs, config.include_history), number_lines(obs.axtree_text));
  request.model_name = config.model_name;
  request.max_output_tokens = config.max_output_tokens;
  request.temperature = config.temperature;

  const auto tokens = config.token_counter.count(request.system_message) +
                      config.token_counter.count(request.user_message);
  if (tokens > config.max_prompt_tokens) {
    throw Error(ErrorCode::PromptTooLarge, "prompt has " + std::to_string(tokens) +
                                               " tokens, limit " + std::to_string(config.max_prompt_tokens));
  }
  return request;
}

PrunedObservation retrieve(const Observation& obs, const RetrieverConfig& config,
                           Transport& transport) {
  validate(config);
  if (obs.axtree_text.empty()) return fall_back(obs, config, "empty observation");

  ChatRequest request;
  try {
    request = build_prompt(obs, config);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PromptTooLarge) throw;
    return fall_back(obs, config, e.what());
  }

  const std::string reply = chat(request, transport, config.retry);

  const auto line_count = static_cast<std::int64_t>(split_lines(obs.axtree_text).size());
  NormalizedRanges selection;
  try {
    selection = parse_llm_response(reply, line_count);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoAnswerBlock && e.code() != ErrorCode::EmptySelection) throw;
    return fall_back(obs, config, e.what());
  }

  PrunedObservation out = config.mode == PruneMode::Structure
                              ? prune_structure(parse_axtree(obs.axtree_text), selection.ranges,
                                                config.token_counter)
                              : prune_remove(obs.axtree_text, selection.ranges, config.token_counter);
  out.warnings = std::move(selection.warnings);
  return out;
}

}  // namespace axprune
