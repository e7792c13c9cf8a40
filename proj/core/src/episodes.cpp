#include <fstream>
#include <istream>

#include <json.hpp>

#include "axprune/error.hpp"
#include "axprune/harness.hpp"

namespace axprune {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(line, std::string("missing \"") + key + "\"");
  if (!it->is_string()) throw SchemaError(line, std::string("\"") + key + "\" must be a string");
  return it->get<std::string>();
}

EpisodeRecord parse_record(const json& doc, std::size_t line) {
  if (!doc.is_object()) throw SchemaError(line, "episode must be a JSON object");
  EpisodeRecord ep;
  ep.task_id = require_string(doc, "task_id", line);
  ep.benchmark = require_string(doc, "benchmark", line);
  ep.goal = require_string(doc, "goal", line);
  if (ep.goal.empty()) throw SchemaError(line, "\"goal\" must not be empty");

  const auto steps = doc.find("steps");
  if (steps == doc.end()) throw SchemaError(line, "missing \"steps\"");
  if (!steps->is_array() || steps->empty()) {
    throw SchemaError(line, "\"steps\" must be a non-empty array");
  }
  for (std::size_t i = 0; i < steps->size(); ++i) {
    const auto& s = (*steps)[i];
    if (!s.is_object()) throw SchemaError(line, "step " + std::to_string(i) + " must be an object");
    EpisodeStep step;
    step.axtree_text = require_string(s, "axtree_text", line);
    if (const auto a = s.find("action_taken"); a != s.end() && !a->is_null()) {
      if (!a->is_string()) {
        throw SchemaError(line, "step " + std::to_string(i) + " \"action_taken\" must be a string or null");
      }
      step.action_taken = a->get<std::string>();
    }
    ep.steps.push_back(std::move(step));
  }

  if (const auto s = doc.find("success"); s != doc.end() && !s->is_null()) {
    if (!s->is_boolean()) throw SchemaError(line, "\"success\" must be a boolean or null");
    ep.success = s->get<bool>();
  }
  return ep;
}

}  // namespace

std::vector<EpisodeRecord> parse_episodes(std::istream& in) {
  std::vector<EpisodeRecord> episodes;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError(line, std::string("invalid JSON: ") + e.what());
    }
    episodes.push_back(parse_record(doc, line));
  }
  return episodes;
}

std::vector<EpisodeRecord> load_episodes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return parse_episodes(in);
}

void save_episodes(const std::filesystem::path& path, const std::vector<EpisodeRecord>& episodes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  for (const auto& ep : episodes) {
    ordered_json doc;
    doc["task_id"] = ep.task_id;
    doc["benchmark"] = ep.benchmark;
    doc["goal"] = ep.goal;
    doc["steps"] = ordered_json::array();
    for (const auto& s : ep.steps) {
      ordered_json step;
      step["axtree_text"] = s.axtree_text;
      step["action_taken"] = s.action_taken ? ordered_json(*s.action_taken) : ordered_json(nullptr);
      doc["steps"].push_back(std::move(step));
    }
    doc["success"] = ep.success ? ordered_json(*ep.success) : ordered_json(nullptr);
    out << doc.dump() << '\n';
  }
}

std::vector<std::string> history_before(const EpisodeRecord& episode, std::size_t step) {
  std::vector<std::string> history;
  for (std::size_t k = 0; k < step && k < episode.steps.size(); ++k) {
    if (episode.steps[k].action_taken) history.push_back(*episode.steps[k].action_taken);
  }
  return history;
}

}  // namespace axprune
