#include <fstream>
#include <sstream>

#include "axprune/error.hpp"
#include "axprune/line_retriever.hpp"

namespace axprune {
namespace {

constexpr std::string_view kSystemPrompt =
    "Your are part of a web agent who's job is to solve a task. Your are currently at a step of the whole episode, and your job is to extract the relevant information for solving the task. An agent will execute the task after you on the subset that you extracted. Make sure to extract sufficient information to be able to solve the task, but also remove informationcthat is irrelevant to reduce the size of the observation and all the distractions.";

constexpr std::string_view kUserTemplate =
    "# Instructions:\n"
    "Extract the lines that may be relevant for the task at this step of completion. The subset should contain the relevant information to complete the task. Your answer should be a json list of indicating line numbers ranges e.g.: [(1,3), (20,25), (158,158), (200,250)]. Make sure to return information relevant to interact with the page.\n"
    "\n"
    "Answer format:\n"
    "<think>\n"
    "...\n"
    "</think>\n"
    "<answer>\n"
    "...\n"
    "</answer>\n"
    "\n"
    "# Goal:\n"
    "{goal}\n"
    "\n"
    "# History of interaction with the task:\n"
    "{history}\n"
    "\n"
    "# Observation:\n"
    "{axtree_txt}";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const PromptTemplate& PromptTemplate::builtin() {
  static const PromptTemplate prompt{std::string(kSystemPrompt), std::string(kUserTemplate)};
  return prompt;
}

PromptTemplate PromptTemplate::from_files(const std::optional<std::filesystem::path>& system_file,
                                          const std::optional<std::filesystem::path>& user_file) {
  PromptTemplate prompt = builtin();
  if (system_file) prompt.system = read_file(*system_file);
  if (user_file) prompt.user = read_file(*user_file);
  return prompt;
}

std::string PromptTemplate::render_user(std::string_view goal, std::string_view history,
                                        std::string_view axtree_txt) const {
  static constexpr std::pair<std::string_view, int> kSlots[] = {
      {"{goal}", 0}, {"{history}", 1}, {"{axtree_txt}", 2}};
  const std::string_view values[] = {goal, history, axtree_txt};

  std::string out;
  out.reserve(user.size() + goal.size() + history.size() + axtree_txt.size());
  std::size_t pos = 0;
  while (pos < user.size()) {
    const auto brace = user.find('{', pos);
    if (brace == std::string::npos) break;
    out.append(user, pos, brace - pos);
    bool matched = false;
    for (const auto& [slot, index] : kSlots) {
      if (std::string_view(user).substr(brace, slot.size()) == slot) {
        out += values[index];
        pos = brace + slot.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      out += '{';
      pos = brace + 1;
    }
  }
  if (pos < user.size()) out.append(user, pos, std::string::npos);
  return out;
}

}  // namespace axprune
