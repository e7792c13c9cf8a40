#include "axprune/axtree.hpp"

#include <algorithm>

#include "axprune/error.hpp"

namespace axprune {
namespace {

std::size_t leading_tabs(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '\t') ++n;
  return n;
}

std::vector<std::string> split_properties(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto sep = text.find(", ", pos);
    if (sep == std::string_view::npos) {
      out.emplace_back(text.substr(pos));
      return out;
    }
    out.emplace_back(text.substr(pos, sep - pos));
    pos = sep + 2;
  }
}

// Parses the part of a line after the indentation. Returns false when the
// content does not follow the grammar.
bool parse_content(std::string_view content, AxNode& node) {
  if (content.empty()) return false;
  std::size_t pos = 0;

  if (content[0] == '[') {
    const auto close = content.find(']');
    if (close == std::string_view::npos || close == 1) return false;
    auto bid = content.substr(1, close - 1);
    if (bid.find_first_of(" \t") != std::string_view::npos) return false;
    if (close + 1 >= content.size() || content[close + 1] != ' ') return false;
    node.bid = std::string(bid);
    pos = close + 2;
  }

  const auto role_end = std::min(content.find(' ', pos), content.size());
  auto role = content.substr(pos, role_end - pos);
  if (role.empty() || role.front() == '\'' || role.front() == '[') return false;
  node.role = std::string(role);
  pos = role_end;
  if (pos == content.size()) return true;
  ++pos;  // the space after the role

  if (pos < content.size() && content[pos] == '\'') {
    // the name closes at the first quote followed by a space or end of line
    std::size_t q = pos + 1;
    while (true) {
      q = content.find('\'', q);
      if (q == std::string_view::npos) return false;
      if (q + 1 == content.size() || content[q + 1] == ' ') break;
      ++q;
    }
    node.name = std::string(content.substr(pos + 1, q - pos - 1));
    pos = q + 1;
    if (pos == content.size()) return true;
    ++pos;
  }

  auto rest = content.substr(pos);
  if (rest.empty()) return false;
  node.properties = split_properties(rest);
  return true;
}

AxNode parse_node(std::string_view line, std::size_t line_no) {
  AxNode node;
  node.line_no = line_no;
  node.indent = leading_tabs(line);
  const auto content = line.substr(node.indent);
  if (parse_content(content, node)) {
    // Accept only what re-renders to the same bytes; anything else is kept raw.
    if (node.render() == line) return node;
  }
  AxNode raw;
  raw.line_no = line_no;
  raw.indent = node.indent;
  raw.role = "text";
  raw.name = std::string(line);
  raw.malformed = true;
  return raw;
}

std::vector<bool> selection_mask(const std::vector<LineRange>& ranges, std::size_t line_count) {
  std::vector<bool> mask(line_count, false);
  const auto max_line = static_cast<std::int64_t>(line_count);
  for (const auto& r : ranges) {
    const auto lo = std::max<std::int64_t>(r.start, 1);
    const auto hi = std::min<std::int64_t>(r.end, max_line);
    for (auto k = lo; k <= hi; ++k) mask[static_cast<std::size_t>(k - 1)] = true;
  }
  return mask;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

}  // namespace

std::string AxNode::render() const {
  if (malformed) return name.value_or("");
  std::string out(indent, '\t');
  if (bid) {
    out += '[';
    out += *bid;
    out += "] ";
  }
  out += role;
  if (name) {
    out += " '";
    out += *name;
    out += '\'';
  }
  if (!properties.empty()) {
    out += ' ';
    for (std::size_t i = 0; i < properties.size(); ++i) {
      if (i) out += ", ";
      out += properties[i];
    }
  }
  return out;
}

std::string AxNode::render_skeleton() const {
  if (malformed) return render();
  std::string out(indent, '\t');
  if (bid) {
    out += '[';
    out += *bid;
    out += "] ";
  }
  out += role;
  return out;
}

std::vector<std::size_t> AxTree::roots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].parent) out.push_back(i);
  }
  return out;
}

AxTree parse_axtree(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::EmptyInput, "empty AxTree text");

  AxTree tree;
  const auto lines = split_lines(text);
  tree.nodes_.reserve(lines.size());
  tree.source_lines_.reserve(lines.size());

  // open ancestors, innermost last; malformed nodes are leaves and never pushed
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    AxNode node = parse_node(lines[i], i + 1);
    while (!open.empty() && tree.nodes_[open.back()].indent >= node.indent) open.pop_back();
    if (!open.empty()) {
      node.parent = open.back();
      node.depth = tree.nodes_[open.back()].depth + 1;
      tree.nodes_[open.back()].children.push_back(i);
    }
    const bool leaf_only = node.malformed;
    tree.nodes_.push_back(std::move(node));
    tree.source_lines_.emplace_back(lines[i]);
    if (!leaf_only) open.push_back(i);
  }
  return tree;
}

std::string serialize(const AxTree& tree) {
  std::string out;
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += '\n';
    out += nodes[i].render();
  }
  return out;
}

std::string number_lines(std::string_view text) {
  std::string out;
  out.reserve(text.size() + text.size() / 8);
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1);
    out += ": ";
    out += lines[i];
  }
  return out;
}

NormalizedRanges normalize_ranges(const std::vector<LineRange>& ranges, std::int64_t max_line) {
  NormalizedRanges result;
  std::vector<LineRange> valid;
  valid.reserve(ranges.size());
  for (const auto& r : ranges) {
    if (r.start > r.end) {
      result.warnings.push_back("dropped inverted range (" + std::to_string(r.start) + "," +
                                std::to_string(r.end) + ")");
      continue;
    }
    if (r.end < 1 || r.start > max_line || max_line < 1) {
      result.warnings.push_back("dropped out-of-bounds range (" + std::to_string(r.start) + "," +
                                std::to_string(r.end) + ")");
      continue;
    }
    valid.push_back({std::max<std::int64_t>(r.start, 1), std::min(r.end, max_line)});
  }
  std::sort(valid.begin(), valid.end(), [](const LineRange& a, const LineRange& b) {
    return a.start != b.start ? a.start < b.start : a.end < b.end;
  });
  for (const auto& r : valid) {
    if (!result.ranges.empty() && r.start <= result.ranges.back().end + 1) {
      result.ranges.back().end = std::max(result.ranges.back().end, r.end);
    } else {
      result.ranges.push_back(r);
    }
  }
  return result;
}

PrunedObservation prune_remove(std::string_view text, const std::vector<LineRange>& ranges,
                               const TokenCounter& counter) {
  const auto lines = split_lines(text);
  const auto mask = selection_mask(ranges, lines.size());

  PrunedObservation out;
  out.mode = PruneMode::Remove;
  out.original_line_count = lines.size();
  out.original_token_count = counter.count(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!mask[i]) continue;
    if (!out.kept_line_numbers.empty()) out.text += '\n';
    out.text += lines[i];
    out.kept_line_numbers.push_back(i + 1);
  }
  out.pruned_token_count = counter.count(out.text);
  out.reduction = token_reduction(out.original_token_count, out.pruned_token_count);
  return out;
}

PrunedObservation prune_structure(const AxTree& tree, const std::vector<LineRange>& ranges,
                                  const TokenCounter& counter) {
  const auto& nodes = tree.nodes();
  const auto selected = selection_mask(ranges, nodes.size());

  std::vector<bool> keep = selected;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!selected[i]) continue;
    for (auto p = nodes[i].parent; p && !keep[*p]; p = nodes[*p].parent) keep[*p] = true;
  }

  PrunedObservation out;
  out.mode = PruneMode::Structure;
  out.original_line_count = nodes.size();
  out.original_token_count = counter.count(join_lines(tree.source_lines()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!keep[i]) continue;
    if (!out.kept_line_numbers.empty()) out.text += '\n';
    out.text += selected[i] ? tree.source_lines()[i] : nodes[i].render_skeleton();
    out.kept_line_numbers.push_back(i + 1);
  }
  out.pruned_token_count = counter.count(out.text);
  out.reduction = token_reduction(out.original_token_count, out.pruned_token_count);
  return out;
}

}  // namespace axprune
