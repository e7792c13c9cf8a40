#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "axprune/error.hpp"
#include "axprune/line_retriever.hpp"

namespace axprune {
namespace {

struct Item {
  std::int64_t first;
  std::int64_t second;
  bool is_range;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::int64_t parse_int(std::string_view digits, bool negative) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec == std::errc::result_out_of_range) value = std::numeric_limits<std::int64_t>::max();
  (void)ptr;
  return negative ? -value : value;
}

// Length of a dash at s[pos]: ASCII '-' or the UTF-8 en dash.
std::size_t dash_at(std::string_view s, std::size_t pos) {
  if (pos < s.size() && s[pos] == '-') return 1;
  if (s.substr(pos, 3) == "\xE2\x80\x93") return 3;
  return 0;
}

std::size_t skip_spaces(std::string_view s, std::size_t pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  return pos;
}

// Reads numbers and `a-b` ranges from one group's text.
std::vector<Item> scan_items(std::string_view text) {
  std::vector<Item> items;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (is_alpha(c)) {
      // identifiers like a12 are not line numbers
      while (i < n && (is_alpha(text[i]) || is_digit(text[i]))) ++i;
      continue;
    }
    bool negative = false;
    std::size_t start = i;
    if (c == '-' && i + 1 < n && is_digit(text[i + 1]) && (i == 0 || !is_digit(text[i - 1]))) {
      negative = true;
      start = i + 1;
    } else if (!is_digit(c)) {
      ++i;
      continue;
    }
    std::size_t end = start;
    while (end < n && is_digit(text[end])) ++end;
    const auto first = parse_int(text.substr(start, end - start), negative);
    i = end;

    // a-b range?
    std::size_t j = skip_spaces(text, i);
    if (const auto d = dash_at(text, j); d > 0 && !negative) {
      std::size_t k = skip_spaces(text, j + d);
      if (k < n && is_digit(text[k])) {
        std::size_t e = k;
        while (e < n && is_digit(text[e])) ++e;
        items.push_back({first, parse_int(text.substr(k, e - k), false), true});
        i = e;
        continue;
      }
    }
    items.push_back({first, first, false});
  }
  return items;
}

void group_to_ranges(std::string_view group, std::vector<LineRange>& out,
                     std::vector<std::string>& warnings) {
  const auto items = scan_items(group);
  if (items.empty()) return;
  const auto singles = std::count_if(items.begin(), items.end(), [](const Item& it) { return !it.is_range; });

  if (singles == 0) {
    for (const auto& it : items) out.push_back({it.first, it.second});
  } else if (singles == static_cast<std::ptrdiff_t>(items.size())) {
    if (items.size() == 1) {
      out.push_back({items[0].first, items[0].first});
    } else if (items.size() % 2 == 0) {
      for (std::size_t k = 0; k < items.size(); k += 2) {
        out.push_back({items[k].first, items[k + 1].first});
      }
    } else {
      warnings.push_back("skipped group with an odd number of integers: '" + std::string(group) + "'");
    }
  } else {
    warnings.push_back("mixed ranges and single lines in group: '" + std::string(group) + "'");
    for (const auto& it : items) out.push_back({it.first, it.second});
  }
}

// Collects ranges from every innermost (...) or [...] group; if the text has
// no groups at all, the whole text is read as one group.
std::vector<LineRange> extract_ranges(std::string_view text, std::vector<std::string>& warnings) {
  struct Open {
    std::size_t pos;
    char close;
    bool has_child;
  };
  std::vector<Open> stack;
  std::vector<LineRange> out;
  bool any_group = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(' || c == '[') {
      if (!stack.empty()) stack.back().has_child = true;
      stack.push_back({i, c == '(' ? ')' : ']', false});
    } else if ((c == ')' || c == ']') && !stack.empty()) {
      // tolerate mismatched closers by unwinding to the nearest opener of this kind
      auto it = std::find_if(stack.rbegin(), stack.rend(), [c](const Open& o) { return o.close == c; });
      if (it == stack.rend()) continue;
      const Open open = *it;
      stack.erase(std::next(it).base(), stack.end());
      if (!open.has_child) {
        any_group = true;
        group_to_ranges(text.substr(open.pos + 1, i - open.pos - 1), out, warnings);
      }
    }
  }
  if (!any_group) group_to_ranges(text, out, warnings);
  return out;
}

// Top-level [...] spans in document order.
std::vector<std::pair<std::size_t, std::size_t>> bracket_lists(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') {
      if (depth++ == 0) start = i;
    } else if (text[i] == ']' && depth > 0) {
      if (--depth == 0) spans.emplace_back(start, i + 1);
    }
  }
  return spans;
}

}  // namespace

NormalizedRanges parse_llm_response(std::string_view raw, std::int64_t max_line) {
  std::vector<std::string> warnings;
  std::vector<LineRange> ranges;

  const std::string raw_lower = lower(raw);
  const auto open = raw_lower.rfind("<answer>");
  if (open != std::string::npos) {
    const auto body_start = open + std::string_view("<answer>").size();
    auto close = raw_lower.find("</answer>", body_start);
    if (close == std::string::npos) {
      warnings.push_back("unterminated <answer> block");
      close = raw.size();
    }
    ranges = extract_ranges(raw.substr(body_start, close - body_start), warnings);
  } else {
    const auto lists = bracket_lists(raw);
    for (auto it = lists.rbegin(); it != lists.rend() && ranges.empty(); ++it) {
      ranges = extract_ranges(raw.substr(it->first, it->second - it->first), warnings);
    }
    if (ranges.empty()) {
      throw Error(ErrorCode::NoAnswerBlock, "no <answer> block or bracketed line list in model output");
    }
    warnings.push_back("no <answer> block; used the last bracketed list in the output");
  }

  auto normalized = normalize_ranges(ranges, max_line);
  warnings.insert(warnings.end(), normalized.warnings.begin(), normalized.warnings.end());
  normalized.warnings = std::move(warnings);
  if (normalized.ranges.empty()) {
    throw Error(ErrorCode::EmptySelection, "model output selected no in-bounds lines");
  }
  return normalized;
}

}  // namespace axprune
