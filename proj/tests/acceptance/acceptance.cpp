// Acceptance gate: prints one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance --only N   run criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "axprune/axtree.hpp"
#include "axprune/baseline_retrievers.hpp"
#include "axprune/error.hpp"
#include "axprune/harness.hpp"
#include "axprune/line_retriever.hpp"
#include "axprune/metrics.hpp"
#include "tree_gen.hpp"

namespace fs = std::filesystem;
using axprune::ErrorCode;
using axprune::LineRange;

namespace {

const std::string kFixtures = AXPRUNE_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<LineRange> to_ranges(const std::vector<std::pair<std::int64_t, std::int64_t>>& raw) {
  std::vector<LineRange> out;
  for (auto [a, b] : raw) out.push_back({a, b});
  return out;
}

// --- 1 ---------------------------------------------------------------------

Outcome cost_model() {
  Outcome o;
  const axprune::CostModel model{0.4, 2.0};
  const double alpha = axprune::cost_threshold(model);
  if (alpha != 0.8) o.fail("threshold " + fmt("%.17g", alpha));
  const auto even = axprune::cost_compare(model, 1'000'000, 800'000);
  if (even.retriever_pipeline != even.plain_pipeline) {
    o.fail("break-even costs differ: " + fmt("%.17g", even.retriever_pipeline) + " vs " +
           fmt("%.17g", even.plain_pipeline));
  }
  if (!even.cost_effective()) o.fail("break-even not counted as cost-effective");
  const auto above = axprune::cost_compare(model, 1'000'000, 800'001);
  const auto below = axprune::cost_compare(model, 1'000'000, 799'999);
  if (above.cost_effective() || !below.cost_effective()) o.fail("ordering around alpha = 0.8 is wrong");
  if (o.pass) o.detail = "threshold 0.8, costs (2.0, 2.0) at alpha 0.8";
  return o;
}

// --- 2 ---------------------------------------------------------------------

struct Cell {
  const char* row;
  const char* benchmark;
  double sr_pct;
  double se_pct;
};

Outcome se_reproduction() {
  Outcome o;
  const std::map<std::string, std::size_t> n{{"WorkArena L1", 330}, {"Weblinx", 2650}, {"WebArena", 381}};
  const Cell cells[] = {
      {"GenericAgent-4.1 truncation", "WorkArena L1", 52.7, 2.7},
      {"GenericAgent-4.1 truncation", "Weblinx", 13.9, 0.6},
      {"GenericAgent-4.1 truncation", "WebArena", 32.3, 2.4},
      {"GenericAgent-4.1 truncation 10K", "WorkArena L1", 49.1, 2.8},
      {"GenericAgent-4.1 truncation 10K", "Weblinx", 13.1, 0.6},
      {"GenericAgent-4.1-mini truncation", "WorkArena L1", 46.4, 2.7},
      {"GenericAgent-4.1-mini truncation", "Weblinx", 13.1, 0.6},
      {"GenericAgent-4.1-mini truncation", "WebArena", 26.1, 2.2},
      {"EmbeddingRetrievalAgent", "WorkArena L1", 19.4, 2.2},
      {"EmbeddingRetrievalAgent", "Weblinx", 10.0, 0.5},
      {"EmbeddingRetrievalAgent", "WebArena", 7.8, 1.5},
      {"LineRetriever 4.1-mini", "WorkArena L1", 44.8, 2.7},
      {"LineRetriever 4.1-mini", "Weblinx", 14.1, 0.6},
      {"LineRetriever 4.1-mini", "WebArena", 24.9, 2.2},
      {"LineRetriever 4.1", "WorkArena L1", 48.2, 2.8},
      {"LineRetriever 4.1", "Weblinx", 13.9, 0.6},
      {"LineRetriever + Structure", "WorkArena L1", 49.1, 2.8},
      {"LineRetriever + Structure", "Weblinx", 13.7, 0.6},
      {"LineRetriever + Structure", "WebArena", 30.2, 2.4},
  };
  std::size_t ok = 0;
  std::string misses;
  double worst = 0.0;
  for (const auto& c : cells) {
    const auto size = n.at(c.benchmark);
    const auto successes = static_cast<std::size_t>(std::llround(c.sr_pct / 100.0 * static_cast<double>(size)));
    const auto rate = axprune::success_rate_se(successes, size);
    const double se_pct = rate.se * 100.0;
    const double diff = std::abs(se_pct - c.se_pct);
    worst = std::max(worst, diff);
    if (diff <= 0.1 + 1e-9) {
      ++ok;
    } else {
      misses += std::string(misses.empty() ? "" : "; ") + c.row + " / " + c.benchmark + ": computed " +
                fmt("%.2f", se_pct) + " vs reported " + fmt("%.1f", c.se_pct);
    }
  }
  const std::string summary = std::to_string(ok) + "/" + std::to_string(std::size(cells)) + " cells within 0.1 pp";
  if (ok != std::size(cells)) {
    o.fail(summary + " (" + misses + ")");
  } else {
    o.detail = summary + ", worst " + fmt("%.3f", worst) + " pp";
  }
  return o;
}

// --- 3 ---------------------------------------------------------------------

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

Outcome prompt_fidelity() {
  Outcome o;
  const auto system_golden = slurp(kFixtures + "/prompt_system.golden.txt");
  const auto user_golden = slurp(kFixtures + "/prompt_user_template.golden.txt");
  if (system_golden.empty() || user_golden.empty()) {
    o.fail("golden prompt files missing");
    return o;
  }
  struct Case {
    std::string goal;
    std::vector<std::string> history;
    std::string axtree;
    std::string history_text;
  };
  const Case cases[] = {
      {"Find the cheapest laptop", {}, "RootWebArea 'Shop'\n\t[a1] button 'Go'", "(no prior actions)"},
      {"G", {"click('a12')", "fill('b3', 'x')"}, "a\nb", "click('a12')\nfill('b3', 'x')"},
      {"goal with {history} inside", {"noop()"}, "x", "noop()"},
  };
  for (const auto& c : cases) {
    axprune::Observation obs;
    obs.goal = c.goal;
    obs.history = c.history;
    obs.axtree_text = c.axtree;
    const auto req = axprune::build_prompt(obs, axprune::RetrieverConfig{});
    if (req.system_message != system_golden) o.fail("system message differs from golden");
    // slots filled longhand, goal last so its braces are not re-expanded
    std::string expected = replace_all(user_golden, "{axtree_txt}", axprune::number_lines(c.axtree));
    expected = replace_all(expected, "{history}", c.history_text);
    expected = replace_all(expected, "{goal}", c.goal);
    if (req.user_message != expected) {
      const auto mismatch = std::mismatch(expected.begin(), expected.end(), req.user_message.begin(),
                                          req.user_message.end());
      o.fail("user message differs from golden at byte " +
             std::to_string(mismatch.first - expected.begin()));
    }
  }
  if (o.pass) o.detail = "system and user messages byte-identical to golden files for 3 observations";
  return o;
}

// --- 4 ---------------------------------------------------------------------

using Expect = std::variant<std::vector<LineRange>, ErrorCode>;

struct ParseCase {
  std::string raw;
  std::int64_t max_line;
  Expect expect;
};

std::vector<ParseCase> parse_cases() {
  using V = std::vector<LineRange>;
  const auto none = ErrorCode::NoAnswerBlock;
  const auto empty = ErrorCode::EmptySelection;
  return {
      {"<think>x</think>\n<answer>[(1,3), (20,25), (158,158), (200,250)]</answer>", 300,
       V{{1, 3}, {20, 25}, {158, 158}, {200, 250}}},
      {"<answer>[(1,3), (20,25), (158,158), (200,250)]</answer>", 100, V{{1, 3}, {20, 25}}},
      {"<answer>[[1,3],[3,6]]</answer>", 10, V{{1, 6}}},
      {"I cannot help", 10, none},
      {"", 10, none},
      {"Answer: 4", 10, none},
      {"<answer></answer>", 10, empty},
      {"<answer>[]</answer>", 10, empty},
      {"<answer>none</answer>", 10, empty},
      {"<answer>[(5,2)]</answer>", 10, empty},
      {"<answer>[(5,2),(1,1)]</answer>", 10, V{{1, 1}}},
      {"<answer>[(10,1)]</answer>", 10, empty},
      {"<answer>[(200,250)]</answer>", 100, empty},
      {"<answer>[(90,250)]</answer>", 100, V{{90, 100}}},
      {"<answer>[(1,3), (20,25)]</answer>", 0, empty},
      {"<think>lines (1,2) look good</think><answer>[(7,8)]</answer>", 10, V{{7, 8}}},
      {"<answer>[(1,2)]</answer><answer>[(4,5)]</answer>", 10, V{{4, 5}}},
      {"<ANSWER>[(1,2)]</ANSWER>", 10, V{{1, 2}}},
      {"<answer>\n[\n  (1, 2),\n  (4, 6)\n]\n</answer>", 10, V{{1, 2}, {4, 6}}},
      {"<answer>[1, 3]</answer>", 10, V{{1, 3}}},
      {"<answer>[3]</answer>", 10, V{{3, 3}}},
      {"<answer>[1, 2, 3]</answer>", 10, empty},
      {"<answer>1-3, 5-6</answer>", 10, V{{1, 3}, {5, 6}}},
      {"<answer>[\"1-3\", \"7\"]</answer>", 10, V{{1, 3}, {7, 7}}},
      {"<answer>[(1,3), (2,5), (6,6)]</answer>", 10, V{{1, 6}}},
      {"Sure! Here: [(2,4)]", 10, V{{2, 4}}},
      {"Lines [(1,1)] then actually [(3,4)]", 10, V{{3, 4}}},
      {"<answer>[(1,3)", 10, V{{1, 3}}},
      {"<answer>[(1,2)]</answer", 10, V{{1, 2}}},
      {"<answer>[(a12, a13)]</answer>", 10, empty},
      {"<answer>[(a12, 4)]</answer>", 10, V{{4, 4}}},
      {"<answer>[(0,0)]</answer>", 10, empty},
      {"<answer>[(0,3)]</answer>", 10, V{{1, 3}}},
      {"<answer>[(-5,2)]</answer>", 10, V{{1, 2}}},
      {"<answer>[(99999999999999999999999,3)]</answer>", 10, empty},
      {"<answer>[(1,99999999999999999999)]</answer>", 10, V{{1, 10}}},
      {"<answer>{\"ranges\": [[2,3]]}</answer>", 10, V{{2, 3}}},
      {"<answer>[(1 , 3) ,(5,5)]</answer>", 10, V{{1, 3}, {5, 5}}},
      {"<answer>[(1,3),]</answer>", 10, V{{1, 3}}},
      {"<answer>[(1,3), (5,]</answer>", 10, V{{1, 3}}},
      {"<answer>[(1\xE2\x80\x93" "3)]</answer>", 10, V{{1, 3}}},
      {"<answer>lines 4 to 6</answer>", 10, V{{4, 6}}},
      {"<answer>[(3,4)]</answer> trailing prose [(9,9)]", 10, V{{3, 4}}},
      {"```json\n[[1,2],[5,7]]\n```", 10, V{{1, 2}, {5, 7}}},
      {"<answer>[(1,2)] and [(4,4)]</answer>", 10, V{{1, 2}, {4, 4}}},
      {"<answer>[(1,2), (3,4), (5,6)]</answer>", 10, V{{1, 6}}},
      {"<answer>[(7,7), (1,1)]</answer>", 10, V{{1, 1}, {7, 7}}},
      {"<answer>(((2,3)))</answer>", 10, V{{2, 3}}},
      {"<answer>[(1,2)]]]]</answer>", 10, V{{1, 2}}},
      {"<answer>[(1.5, 3)]</answer>", 10, empty},
  };
}

std::string describe(const std::vector<LineRange>& v) {
  std::string s = "[";
  for (const auto& r : v) s += "(" + std::to_string(r.start) + "," + std::to_string(r.end) + ")";
  return s + "]";
}

Outcome range_parsing() {
  Outcome o;
  const auto cases = parse_cases();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    std::string got;
    bool match = false;
    try {
      const auto r = axprune::parse_llm_response(c.raw, c.max_line);
      got = describe(r.ranges);
      match = std::holds_alternative<std::vector<LineRange>>(c.expect) &&
              std::get<std::vector<LineRange>>(c.expect) == r.ranges;
    } catch (const axprune::Error& e) {
      got = std::string(axprune::to_string(e.code()));
      match = std::holds_alternative<ErrorCode>(c.expect) && std::get<ErrorCode>(c.expect) == e.code();
    } catch (const std::exception& e) {
      got = std::string("crash: ") + e.what();
    }
    if (match) {
      ++ok;
    } else {
      const auto want = std::holds_alternative<ErrorCode>(c.expect)
                            ? std::string(axprune::to_string(std::get<ErrorCode>(c.expect)))
                            : describe(std::get<std::vector<LineRange>>(c.expect));
      o.fail("case " + std::to_string(i + 1) + ": expected " + want + ", got " + got);
    }
  }
  if (cases.size() != 50) o.fail("suite has " + std::to_string(cases.size()) + " cases, expected 50");
  if (o.pass) o.detail = std::to_string(ok) + "/50 cases, example list parsed to its four ranges";
  return o;
}

// --- 5 ---------------------------------------------------------------------

Outcome pruning_invariants() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  testsupport::TreeGenerator gen(20251017);
  constexpr int kTrees = 1500;
  for (int i = 0; i < kTrees && o.pass; ++i) {
    const auto t = gen.generate(60, i % 5 == 0 ? 3 : 1);
    const auto n = static_cast<std::int64_t>(t.lines.size());
    const auto tree = axprune::parse_axtree(t.text);
    if (axprune::serialize(tree) != t.text) {
      o.fail("round-trip failed on tree " + std::to_string(i));
      break;
    }
    const auto full_r = axprune::prune_remove(t.text, {{1, n}});
    const auto full_s = axprune::prune_structure(tree, {{1, n}});
    if (full_r.text != t.text || full_s.text != t.text) o.fail("full-range identity failed on tree " + std::to_string(i));

    for (int trial = 0; trial < 3; ++trial) {
      const auto raw = gen.ranges(n, 5);
      const auto ranges = axprune::normalize_ranges(to_ranges(raw), n).ranges;
      const auto selected = testsupport::oracle_selected(raw, t.lines.size());
      const auto removed = axprune::prune_remove(t.text, ranges);
      const auto structured = axprune::prune_structure(tree, ranges);
      const auto r_lines = axprune::split_lines(removed.text);
      const auto s_lines = axprune::split_lines(structured.text);

      // selected-line preservation, in order, in both modes
      for (const auto* out : {&r_lines, &s_lines}) {
        auto it = out->begin();
        for (auto k : selected) {
          const auto line = testsupport::emit_line(t.lines[k]);
          it = std::find(it, out->end(), line);
          if (it == out->end()) {
            o.fail("selected line " + std::to_string(k + 1) + " missing on tree " + std::to_string(i));
            break;
          }
          ++it;
        }
      }
      // ancestor closure against the independent oracle
      if (structured.text != testsupport::join(testsupport::oracle_structure_lines(t, selected))) {
        o.fail("structure output differs from ancestor-closure oracle on tree " + std::to_string(i));
      }
      const auto parents = testsupport::oracle_parents(t.lines);
      std::set<std::size_t> kept(structured.kept_line_numbers.begin(), structured.kept_line_numbers.end());
      for (auto line_no : kept) {
        const auto p = parents[line_no - 1];
        if (p && !kept.count(*p + 1)) o.fail("kept node without its parent on tree " + std::to_string(i));
      }
      if (structured.reduction > removed.reduction) {
        o.fail("reduction(structure) > reduction(remove) on tree " + std::to_string(i));
      }
    }
  }
  const double secs = seconds_since(t0);
  if (o.pass) o.detail = std::to_string(kTrees) + " trees x 3 range sets in " + fmt("%.2f", secs) + " s";
  return o;
}

// --- 6 ---------------------------------------------------------------------

std::string numbered_words(std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? (i % 6 == 0 ? "\n" : " ") : "") + ("w" + std::to_string(i));
  return out;
}

Outcome baseline_oracles() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto h = axprune::TokenCounter::heuristic();
  std::mt19937_64 rng(6);

  // chunk coverage and overlap
  const std::string alphabet = "ab9 ('\n[]:,";
  for (int trial = 0; trial < 500 && o.pass; ++trial) {
    std::string text;
    const auto len = std::uniform_int_distribution<int>(0, 2000)(rng);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    const auto spans = h.offsets(text);
    const auto chunks = axprune::chunk_text(text, h, 100, 10);
    std::vector<int> cover(spans.size(), 0);
    for (std::size_t k = 0; k < chunks.size(); ++k) {
      for (auto t = chunks[k].token_begin; t < chunks[k].token_end; ++t) ++cover[t];
      if (chunks[k].token_count() > 100) o.fail("chunk longer than 100 tokens");
      if (k + 1 < chunks.size() && chunks[k].token_end - chunks[k + 1].token_begin != 10) o.fail("overlap != 10");
    }
    if (std::any_of(cover.begin(), cover.end(), [](int c) { return c == 0; })) o.fail("uncovered token");
    if (!spans.empty() && chunks.back().token_end != spans.size()) o.fail("last chunk does not reach the end");
  }

  // top-k against a brute-force argsort
  for (int trial = 0; trial < 3000 && o.pass; ++trial) {
    const std::size_t n_chunks = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    const auto text = numbered_words(n_chunks * 4);
    axprune::EmbedRetrieverConfig cfg;
    cfg.chunk_size = 4;
    cfg.chunk_overlap = 0;
    cfg.top_k = std::uniform_int_distribution<std::size_t>(1, 21)(rng);
    const auto chunks = axprune::chunk_text(text, h, 4, 0);
    std::map<std::string, double> score_of;
    std::vector<double> scores;
    for (const auto& c : chunks) {
      const double s = std::uniform_int_distribution<int>(-5, 5)(rng) / 5.0;
      score_of[c.text] = s;
      scores.push_back(s);
    }
    axprune::ScriptedTransport mock([](const axprune::ChatRequest&) { return std::string(); },
                                    [&score_of](const std::string& t) -> std::vector<double> {
                                      if (t == "QUERY") return {1.0, 0.0};
                                      const double s = score_of.at(t);
                                      return {s, std::sqrt(std::max(0.0, 1.0 - s * s))};
                                    });
    axprune::Observation obs;
    obs.goal = "QUERY";
    obs.axtree_text = text;
    const auto out = axprune::embed_retrieve(obs, mock, cfg);
    std::vector<std::size_t> idx(chunks.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return scores[a] != scores[b] ? scores[a] > scores[b] : a < b; });
    idx.resize(std::min(idx.size(), cfg.top_k));
    std::sort(idx.begin(), idx.end());
    std::string expected;
    for (std::size_t k = 0; k < idx.size(); ++k) expected += (k ? "\n" : "") + chunks[idx[k]].text;
    if (out.text != expected) o.fail("top-k selection differs from brute force on trial " + std::to_string(trial));
  }

  // bottom_truncate: prefix, budget, monotone
  testsupport::TreeGenerator gen(66);
  for (int trial = 0; trial < 400 && o.pass; ++trial) {
    const auto t = gen.generate(50);
    const auto total = h.count(t.text);
    std::size_t prev_len = 0;
    for (std::size_t budget = 0; budget <= total + 1; budget += 1 + budget / 10) {
      const auto out = axprune::bottom_truncate(t.text, budget);
      const bool prefix = t.text.compare(0, out.text.size(), out.text) == 0 &&
                          (out.text.size() == t.text.size() || out.text.empty() || t.text[out.text.size()] == '\n');
      if (!prefix) o.fail("output is not a line prefix");
      if (out.pruned_token_count > budget) o.fail("output exceeds budget");
      if (out.text.size() < prev_len) o.fail("larger budget shrank the output");
      prev_len = out.text.size();
    }
  }
  const double secs = seconds_since(t0);
  if (o.pass) o.detail = "chunking, top-k and truncation properties held in " + fmt("%.2f", secs) + " s";
  return o;
}

// --- 7 ---------------------------------------------------------------------

#ifdef AXPRUNE_CLI
int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + AXPRUNE_CLI + "\" " + args + " 2>/dev/null";
  return std::system(cmd.c_str());
}

bool json_close(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>()) <= 1e-12;
  if (a.type() != b.type() || a.size() != b.size()) return false;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()) || !json_close(it.value(), b.at(it.key()))) return false;
    }
    return true;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_close(a[i], b[i])) return false;
    }
    return true;
  }
  return a == b;
}
#endif

Outcome end_to_end() {
  Outcome o;
#ifndef AXPRUNE_CLI
  o.fail("built without the axprune CLI");
  return o;
#else
  const auto base = fs::temp_directory_path() / ("axprune_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const std::string episodes = kFixtures + "/episodes5.jsonl";
  const std::string script = kFixtures + "/mock_script.json";
  for (const std::string strategy : {"line", "line_structure"}) {
    const auto run1 = base / (strategy + "_1");
    const auto run2 = base / (strategy + "_2");
    for (const auto& dir : {run1, run2}) {
      const auto rc = run_cli("replay --episodes \"" + episodes + "\" --strategy " + strategy + " --out \"" +
                              dir.string() + "\" --mock-script \"" + script + "\"");
      if (rc != 0) o.fail("axprune replay exited with " + std::to_string(rc));
    }
    const auto golden = fs::path(kFixtures) / "golden" / strategy;
    for (const char* file : {"report.csv", "summary.json", "boxplot.csv"}) {
      const auto a = slurp(run1 / file);
      if (a.empty()) o.fail(strategy + "/" + file + " missing");
      if (a != slurp(run2 / file)) o.fail(strategy + "/" + file + " differs between runs");
    }
    for (const char* file : {"report.csv", "boxplot.csv"}) {
      if (slurp(run1 / file) != slurp(golden / file)) o.fail(strategy + "/" + file + " differs from golden");
    }
    try {
      const auto got = nlohmann::json::parse(slurp(run1 / "summary.json"));
      const auto want = nlohmann::json::parse(slurp(golden / "summary.json"));
      if (!json_close(got, want)) o.fail(strategy + "/summary.json differs from golden");
    } catch (const nlohmann::json::exception& e) {
      o.fail(strategy + "/summary.json unreadable: " + e.what());
    }
  }

  const auto eq_dir = base / "equal_tokens";
  const auto rc = run_cli("replay --episodes \"" + kFixtures + "/episodes_equal_tokens.jsonl\" --strategy line --out \"" +
                          eq_dir.string() + "\" --mock-answer \"<answer>[(1,10), (41,50), (93,99)]</answer>\"");
  double avg = std::nan("");
  if (rc != 0) {
    o.fail("equal-token replay exited with " + std::to_string(rc));
  } else {
    avg = nlohmann::json::parse(slurp(eq_dir / "summary.json"))["summary"]["avg_reduction"].get<double>();
    if (std::abs(avg - 0.73) > 0.005) o.fail("equal-token avg reduction " + fmt("%.6f", avg));
  }
  fs::remove_all(base);
  if (o.pass) o.detail = "two runs byte-identical, golden match, equal-token avg reduction " + fmt("%.4f", avg);
  return o;
#endif
}

// --- 8 ---------------------------------------------------------------------

Outcome fallback_totality() {
  Outcome o;
  const auto episodes = axprune::load_episodes(kFixtures + "/episodes5.jsonl");
  const std::vector<std::string> garbage{
      "", "I am not sure.", "<answer>", "<answer>[(5,2)]</answer>", "[(9999,10000)]", "\x00\xff\xfe{]}[)(",
      "<answer>[1, 2, 3]</answer>", "null", "<answer>[(a1, b2)]</answer>", "<answer>(((</answer>",
  };
  std::size_t call = 0;
  axprune::ScriptedTransport transport(
      [&](const axprune::ChatRequest&) { return garbage[call++ % garbage.size()]; }, nullptr);
  std::size_t rows = 0;
  for (auto strategy : {axprune::PruneMode::Remove, axprune::PruneMode::Structure}) {
    axprune::RunReport report;
    try {
      report = axprune::replay(episodes, strategy, axprune::HarnessConfig{}, transport);
    } catch (const std::exception& e) {
      o.fail(std::string("replay aborted: ") + e.what());
      continue;
    }
    if (!report.errored.empty()) o.fail("episode errored: " + report.errored[0].message);
    if (report.rows.size() != 11) o.fail("expected 11 rows, got " + std::to_string(report.rows.size()));
    for (const auto& r : report.rows) {
      if (r.mode != axprune::PruneMode::Passthrough || r.reduction != 0.0 || r.warnings.empty()) {
        o.fail("row " + r.task_id + "/" + std::to_string(r.step) + " is not a passthrough row with a warning");
      }
    }
    rows += report.rows.size();
  }
  if (o.pass) o.detail = std::to_string(rows) + " passthrough rows with warnings, no aborted episodes";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double limit_s;
};

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "cost model threshold and break-even", cost_model, 1.0},
      {2, "success-rate standard errors", se_reproduction, 1.0},
      {3, "prompt fidelity", prompt_fidelity, 30.0},
      {4, "range parsing", range_parsing, 30.0},
      {5, "pruning invariants", pruning_invariants, 30.0},
      {6, "baseline oracles", baseline_oracles, 30.0},
      {7, "end-to-end determinism", end_to_end, 60.0},
      {8, "fallback totality", fallback_totality, 30.0},
  };

  int failures = 0;
  bool ran = false;
  for (const auto& c : criteria) {
    if (only && *only != c.id) continue;
    ran = true;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("uncaught exception: ") + e.what());
    }
    const double ms = seconds_since(t0) * 1000.0;
    if (ms >= c.limit_s * 1000.0) outcome.fail("exceeded " + fmt("%.0f", c.limit_s) + " s");
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " - "
              << outcome.detail << " [" << fmt("%.0f", ms) << " ms]\n";
    failures += outcome.pass ? 0 : 1;
  }
  if (!ran) {
    std::cerr << "no criterion " << *only << "\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
