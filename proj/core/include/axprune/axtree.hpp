#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axprune/observation.hpp"
#include "axprune/tokens.hpp"

namespace axprune {

/// One line of an accessibility tree.
///
/// Line grammar: `<tabs>[<bid>] <role> '<name>' <prop>, <prop>, ...` where
/// the bid, name and properties are optional. A line that does not fit the
/// grammar (or would not re-render to the same bytes) is kept as a
/// `malformed` leaf: role "text", name = the line content after the tabs.
struct AxNode {
  std::optional<std::string> bid;
  std::string role;
  std::optional<std::string> name;
  std::vector<std::string> properties;
  /// Structural depth: parent depth + 1, or 0 for roots.
  std::size_t depth = 0;
  /// Leading tab count in the source. Equals depth unless the source skipped levels.
  std::size_t indent = 0;
  std::size_t line_no = 0;
  bool malformed = false;
  /// Index (line_no - 1) of the parent node, if any.
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;

  /// Renders the node back to its source line.
  std::string render() const;
  /// Indentation + optional `[bid] ` + role; name and properties dropped.
  std::string render_skeleton() const;
};

/// Parsed forest. nodes()[i] is source line i + 1, so pre-order traversal
/// is simply index order.
class AxTree {
 public:
  const std::vector<AxNode>& nodes() const noexcept { return nodes_; }
  const std::vector<std::string>& source_lines() const noexcept { return source_lines_; }
  std::size_t line_count() const noexcept { return nodes_.size(); }

  /// Indices of depth-0 nodes in document order.
  std::vector<std::size_t> roots() const;
  const AxNode& at_line(std::size_t line_no) const { return nodes_.at(line_no - 1); }

  friend AxTree parse_axtree(std::string_view text);

 private:
  std::vector<AxNode> nodes_;
  std::vector<std::string> source_lines_;
};

/// Throws Error(EmptyInput) on zero-length text. Deeper-than-expected
/// indentation attaches to the deepest open ancestor instead of failing.
AxTree parse_axtree(std::string_view text);

/// Byte-exact inverse of parse_axtree; lines joined with '\n'.
std::string serialize(const AxTree& tree);

/// Prefixes line k with "k: ".
std::string number_lines(std::string_view text);

struct NormalizedRanges {
  std::vector<LineRange> ranges;
  std::vector<std::string> warnings;
};

/// Drops inverted ranges (with a warning) and ranges wholly outside
/// [1, max_line], clamps the rest, then sorts and merges overlapping or
/// adjacent ranges.
NormalizedRanges normalize_ranges(const std::vector<LineRange>& ranges, std::int64_t max_line);

/// Keeps only the selected lines, verbatim and in source order.
/// `ranges` must already be normalized.
PrunedObservation prune_remove(std::string_view text, const std::vector<LineRange>& ranges,
                               const TokenCounter& counter = TokenCounter::heuristic());

/// Keeps the selected lines plus a skeleton line for every unselected
/// ancestor of a selected node.
PrunedObservation prune_structure(const AxTree& tree, const std::vector<LineRange>& ranges,
                                  const TokenCounter& counter = TokenCounter::heuristic());

}  // namespace axprune
