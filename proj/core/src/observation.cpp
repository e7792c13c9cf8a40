#include "axprune/observation.hpp"

namespace axprune {

std::string_view to_string(PruneMode mode) noexcept {
  switch (mode) {
    case PruneMode::Remove: return "remove";
    case PruneMode::Structure: return "structure";
    case PruneMode::Truncate: return "truncate";
    case PruneMode::Embed: return "embed";
    case PruneMode::Passthrough: return "passthrough";
  }
  return "passthrough";
}

std::optional<PruneMode> parse_prune_mode(std::string_view name) noexcept {
  if (name == "remove") return PruneMode::Remove;
  if (name == "structure") return PruneMode::Structure;
  if (name == "truncate") return PruneMode::Truncate;
  if (name == "embed") return PruneMode::Embed;
  if (name == "passthrough") return PruneMode::Passthrough;
  return std::nullopt;
}

double PrunedObservation::line_reduction() const noexcept {
  if (original_line_count == 0) return 0.0;
  return 1.0 - static_cast<double>(kept_line_numbers.size()) /
                   static_cast<double>(original_line_count);
}

double token_reduction(std::size_t original_tokens, std::size_t pruned_tokens) noexcept {
  if (original_tokens == 0) return 0.0;
  return 1.0 - static_cast<double>(pruned_tokens) / static_cast<double>(original_tokens);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  if (text.empty()) return lines;
  std::size_t pos = 0;
  while (true) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace axprune
