#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "axprune/error.hpp"
#include "axprune/line_retriever.hpp"
#include "tree_gen.hpp"

using axprune::ErrorCode;
using axprune::LineRange;
using axprune::Observation;
using axprune::PruneMode;
using axprune::RetrieverConfig;
using axprune::ScriptedTransport;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(AXPRUNE_FIXTURE_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const axprune::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an axprune::Error";
  return ErrorCode::InvalidArgument;
}

Observation obs(std::string goal, std::string axtree, std::vector<std::string> history = {}) {
  Observation o;
  o.goal = std::move(goal);
  o.axtree_text = std::move(axtree);
  o.history = std::move(history);
  return o;
}

const char* kSixLines =
    "RootWebArea 'App'\n"
    "\t[b1] navigation 'Menu'\n"
    "\t\t[b2] link 'Home'\n"
    "\t[b3] main\n"
    "\t\t[b4] button 'Save'\n"
    "\t\t[b5] button 'Cancel'";

using V = std::vector<LineRange>;

}  // namespace

TEST(PromptTemplate, BuiltinMatchesGoldenFiles) {
  const auto& t = axprune::PromptTemplate::builtin();
  EXPECT_EQ(t.system, read_fixture("prompt_system.golden.txt"));
  EXPECT_EQ(t.user, read_fixture("prompt_user_template.golden.txt"));
}

TEST(PromptTemplate, SingleSubstitutionPass) {
  axprune::PromptTemplate t{"s", "G={goal} H={history} A={axtree_txt}"};
  EXPECT_EQ(t.render_user("{history}", "h", "{goal}"), "G={history} H=h A={goal}");
}

TEST(PromptTemplate, FromFilesOverrides) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto sys = dir / "axprune_sys_prompt.txt";
  std::ofstream(sys) << "custom system";
  const auto t = axprune::PromptTemplate::from_files(sys, std::nullopt);
  EXPECT_EQ(t.system, "custom system");
  EXPECT_EQ(t.user, axprune::PromptTemplate::builtin().user);
  std::filesystem::remove(sys);
  EXPECT_THROW(axprune::PromptTemplate::from_files(dir / "axprune_missing_prompt.txt", std::nullopt), axprune::Error);
}

TEST(BuildPrompt, GoalAndNumberedObservation) {
  const auto req = axprune::build_prompt(obs("G", "a\nb"), RetrieverConfig{});
  EXPECT_NE(req.user_message.find("# Goal:\nG"), std::string::npos);
  EXPECT_NE(req.user_message.find("# Observation:\n1: a\n2: b"), std::string::npos);
  EXPECT_NE(req.user_message.find(axprune::kNoHistory), std::string::npos);
  EXPECT_EQ(req.system_message, axprune::PromptTemplate::builtin().system);
  EXPECT_EQ(req.model_name, "gpt-4.1-mini");
  EXPECT_EQ(req.temperature, 0.0);
}

TEST(BuildPrompt, HistoryRendering) {
  const auto req = axprune::build_prompt(obs("G", "a", {"click('a12')", "fill('a3', 'x')"}), RetrieverConfig{});
  const auto header = req.user_message.find("# History of interaction with the task:");
  ASSERT_NE(header, std::string::npos);
  const auto entry = req.user_message.find("click('a12')\nfill('a3', 'x')");
  ASSERT_NE(entry, std::string::npos);
  EXPECT_GT(entry, header);

  RetrieverConfig no_history;
  no_history.include_history = false;
  const auto hidden = axprune::build_prompt(obs("G", "a", {"click('a12')"}), no_history);
  EXPECT_EQ(hidden.user_message.find("click('a12')"), std::string::npos);
  EXPECT_NE(hidden.user_message.find(axprune::kNoHistory), std::string::npos);
}

TEST(BuildPrompt, TooLarge) {
  std::string big;
  for (int i = 0; i < 12500; ++i) big += "w w w w\n";  // ~50k tokens before numbering
  EXPECT_EQ(code_of([&] { axprune::build_prompt(obs("G", big), RetrieverConfig{}); }), ErrorCode::PromptTooLarge);
}

TEST(BuildPrompt, EmptyGoalRejected) {
  EXPECT_EQ(code_of([&] { axprune::build_prompt(obs("", "a"), RetrieverConfig{}); }), ErrorCode::InvalidArgument);
}

TEST(ParseResponse, ExampleList) {
  const auto r = axprune::parse_llm_response(
      "<think>x</think>\n<answer>[(1,3), (20,25), (158,158), (200,250)]</answer>", 300);
  EXPECT_EQ(r.ranges, (V{{1, 3}, {20, 25}, {158, 158}, {200, 250}}));
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ParseResponse, ArraySyntaxMerges) {
  EXPECT_EQ(axprune::parse_llm_response("<answer>[[1,3],[3,6]]</answer>", 10).ranges, (V{{1, 6}}));
}

TEST(ParseResponse, NoAnswer) {
  EXPECT_EQ(code_of([] { axprune::parse_llm_response("I cannot help", 10); }), ErrorCode::NoAnswerBlock);
}

TEST(ParseResponse, LastAnswerWins) {
  EXPECT_EQ(axprune::parse_llm_response("<answer>[(1,2)]</answer> wait <ANSWER>[(5,6)]</ANSWER>", 10).ranges,
            (V{{5, 6}}));
}

TEST(ParseResponse, BarePairsAndDashes) {
  EXPECT_EQ(axprune::parse_llm_response("<answer>1,3 7,8</answer>", 10).ranges, (V{{1, 3}, {7, 8}}));
  EXPECT_EQ(axprune::parse_llm_response("<answer>[1-3, 5\xE2\x80\x93" "6]</answer>", 10).ranges, (V{{1, 3}, {5, 6}}));
  EXPECT_EQ(axprune::parse_llm_response("<answer>[4]</answer>", 10).ranges, (V{{4, 4}}));
}

TEST(ParseResponse, FallsBackToLastBracketList) {
  const auto r = axprune::parse_llm_response("Relevant: [(2,3)] and maybe [(7,7)]", 10);
  EXPECT_EQ(r.ranges, (V{{7, 7}}));
  ASSERT_FALSE(r.warnings.empty());
}

TEST(ParseResponse, EmptySelection) {
  EXPECT_EQ(code_of([] { axprune::parse_llm_response("<answer>[]</answer>", 10); }), ErrorCode::EmptySelection);
  EXPECT_EQ(code_of([] { axprune::parse_llm_response("<answer>[(50,60)]</answer>", 10); }), ErrorCode::EmptySelection);
}

TEST(ParseResponse, BidsAreNotLineNumbers) {
  EXPECT_EQ(axprune::parse_llm_response("<answer>[(a12, 4)]</answer>", 10).ranges, (V{{4, 4}}));
}

TEST(Retrieve, FullRangeIdentity) {
  ScriptedTransport mock("<answer>[(1,6)]</answer>");
  const auto out = axprune::retrieve(obs("save", kSixLines), RetrieverConfig{}, mock);
  EXPECT_EQ(out.text, kSixLines);
  EXPECT_EQ(out.reduction, 0.0);
  EXPECT_EQ(out.mode, PruneMode::Remove);
}

TEST(Retrieve, StructureModeSixLineExample) {
  ScriptedTransport mock("<answer>[(5,5)]</answer>");
  RetrieverConfig cfg;
  cfg.mode = PruneMode::Structure;
  const auto out = axprune::retrieve(obs("save", kSixLines), cfg, mock);
  EXPECT_EQ(out.text, "RootWebArea\n\t[b3] main\n\t\t[b4] button 'Save'");
}

TEST(Retrieve, TwentySevenOfHundredEqualTokenLines) {
  std::vector<std::string> lines;
  for (int i = 1; i <= 100; ++i) lines.push_back("[c" + std::to_string(100 + i) + "] button 'Item " + std::to_string(100 + i) + "'");
  ScriptedTransport mock("<answer>[(1,10), (41,50), (93,99)]</answer>");
  const auto out = axprune::retrieve(obs("g", testsupport::join(lines)), RetrieverConfig{}, mock);
  EXPECT_EQ(out.kept_line_numbers.size(), 27u);
  EXPECT_NEAR(out.reduction, 0.73, 1e-12);
}

TEST(Retrieve, FallbackPassthroughOnGarbage) {
  ScriptedTransport mock("no idea");
  const auto out = axprune::retrieve(obs("g", kSixLines), RetrieverConfig{}, mock);
  EXPECT_EQ(out.mode, PruneMode::Passthrough);
  EXPECT_EQ(out.text, kSixLines);
  EXPECT_EQ(out.reduction, 0.0);
  ASSERT_EQ(out.warnings.size(), 1u);
  EXPECT_EQ(out.warnings[0].rfind("fallback to passthrough: NoAnswerBlock", 0), 0u);
}

TEST(Retrieve, FallbackTruncate) {
  ScriptedTransport mock("<answer>[]</answer>");
  RetrieverConfig cfg;
  cfg.fallback = axprune::FallbackPolicy::Truncate;
  cfg.truncate_budget = 5;
  const auto out = axprune::retrieve(obs("g", kSixLines), cfg, mock);
  EXPECT_EQ(out.mode, PruneMode::Truncate);
  EXPECT_EQ(out.text, "RootWebArea 'App'");
  EXPECT_NE(out.warnings.back().find("EmptySelection"), std::string::npos);
}

TEST(Retrieve, PromptTooLargeFallsBackWithoutCallingModel) {
  ScriptedTransport mock("<answer>[(1,1)]</answer>");
  RetrieverConfig cfg;
  cfg.max_prompt_tokens = 10;
  const auto out = axprune::retrieve(obs("g", kSixLines), cfg, mock);
  EXPECT_EQ(out.mode, PruneMode::Passthrough);
  EXPECT_EQ(mock.chat_calls(), 0u);
  EXPECT_NE(out.warnings.back().find("PromptTooLarge"), std::string::npos);
}

TEST(Retrieve, EmptyObservationFallsBack) {
  ScriptedTransport mock("<answer>[(1,1)]</answer>");
  const auto out = axprune::retrieve(obs("g", ""), RetrieverConfig{}, mock);
  EXPECT_EQ(out.text, "");
  EXPECT_EQ(out.reduction, 0.0);
  EXPECT_EQ(mock.chat_calls(), 0u);
  EXPECT_FALSE(out.warnings.empty());
}

TEST(Retrieve, TransportErrorsPropagate) {
  ScriptedTransport mock([](const axprune::ChatRequest&) -> std::string {
    throw axprune::Error(ErrorCode::AuthError, "bad key");
  }, nullptr);
  EXPECT_EQ(code_of([&] { axprune::retrieve(obs("g", kSixLines), RetrieverConfig{}, mock); }), ErrorCode::AuthError);
}

TEST(Retrieve, InvalidConfig) {
  ScriptedTransport mock("x");
  RetrieverConfig cfg;
  cfg.mode = PruneMode::Embed;
  EXPECT_EQ(code_of([&] { axprune::retrieve(obs("g", "a"), cfg, mock); }), ErrorCode::InvalidArgument);
  cfg.mode = PruneMode::Remove;
  cfg.max_prompt_tokens = 0;
  EXPECT_EQ(code_of([&] { axprune::retrieve(obs("g", "a"), cfg, mock); }), ErrorCode::InvalidArgument);
}

TEST(Retrieve, ParseWarningsSurface) {
  ScriptedTransport mock("<answer>[(3,1), (2,2)]</answer>");
  const auto out = axprune::retrieve(obs("g", kSixLines), RetrieverConfig{}, mock);
  EXPECT_EQ(out.text, "\t[b1] navigation 'Menu'");
  ASSERT_EQ(out.warnings.size(), 1u);
  EXPECT_NE(out.warnings[0].find("inverted"), std::string::npos);
}

TEST(Retrieve, StructureNeverReducesMoreThanRemove) {
  testsupport::TreeGenerator gen(9);
  for (int i = 0; i < 300; ++i) {
    const auto t = gen.generate(30);
    const auto n = static_cast<std::int64_t>(t.lines.size());
    std::string answer = "<answer>[";
    for (auto [a, b] : gen.ranges(n, 3)) answer += "(" + std::to_string(a) + "," + std::to_string(b) + "),";
    answer += "]</answer>";
    ScriptedTransport mock(answer);
    RetrieverConfig remove_cfg, structure_cfg;
    structure_cfg.mode = PruneMode::Structure;
    const auto o = obs("g", t.text);
    const auto r = axprune::retrieve(o, remove_cfg, mock);
    const auto s = axprune::retrieve(o, structure_cfg, mock);
    ASSERT_LE(s.reduction, r.reduction) << answer;
    // deterministic under the scripted transport
    const auto again = axprune::retrieve(o, structure_cfg, mock);
    ASSERT_EQ(again.text, s.text);
    ASSERT_EQ(again.warnings, s.warnings);
  }
}
