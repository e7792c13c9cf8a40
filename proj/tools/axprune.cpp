// axprune: prune AxTree observations, replay recorded episodes, and price
// retrieval pipelines.

#include <algorithm>
#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "axprune/config.hpp"
#include "axprune/error.hpp"
#include "axprune/harness.hpp"
#include "axprune/llm_gateway.hpp"
#include "axprune/metrics.hpp"

namespace {

struct TransportOptions {
  std::string mock_answer;
  std::string mock_script;
  std::string replay_fixture;
  std::string record;
  std::string endpoint;
};

void add_transport_options(CLI::App* cmd, TransportOptions& opts) {
  auto* answer = cmd->add_option("--mock-answer", opts.mock_answer,
                                 "Scripted transport: answer every chat request with this text");
  auto* script = cmd->add_option("--mock-script", opts.mock_script,
                                 "Scripted transport driven by a JSON rules file")
                     ->check(CLI::ExistingFile);
  auto* replay = cmd->add_option("--replay-fixture", opts.replay_fixture,
                                 "Serve responses from a recorded JSONL fixture")
                     ->check(CLI::ExistingFile);
  answer->excludes(script)->excludes(replay);
  script->excludes(replay);
  cmd->add_option("--record", opts.record, "Append every live exchange to this JSONL fixture");
  cmd->add_option("--endpoint", opts.endpoint, "Override the chat/embeddings base URL");
}

// Owns the transport stack chosen on the command line.
struct TransportStack {
  std::unique_ptr<axprune::Transport> base;
  std::unique_ptr<axprune::RecordingTransport> recorder;

  axprune::Transport& get() { return recorder ? *recorder : *base; }
};

TransportStack make_transport(const TransportOptions& opts, axprune::HarnessConfig& config) {
  if (!opts.endpoint.empty()) config.endpoint = opts.endpoint;
  TransportStack stack;
  if (!opts.mock_answer.empty()) {
    stack.base = std::make_unique<axprune::ScriptedTransport>(opts.mock_answer);
  } else if (!opts.mock_script.empty()) {
    stack.base = std::unique_ptr<axprune::Transport>(
        new axprune::ScriptedTransport(axprune::ScriptedTransport::from_script_file(opts.mock_script)));
  } else if (!opts.replay_fixture.empty()) {
    stack.base = std::make_unique<axprune::ReplayTransport>(
        axprune::ReplayTransport::load(opts.replay_fixture));
  } else {
    stack.base = std::make_unique<axprune::HttpTransport>(config.http_config());
  }
  if (!opts.record.empty()) {
    stack.recorder = std::make_unique<axprune::RecordingTransport>(*stack.base, opts.record);
  }
  return stack;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw axprune::Error(axprune::ErrorCode::FileNotFound, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> read_history(const std::string& path) {
  std::vector<std::string> history;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) history.push_back(line);
  }
  return history;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accessibility-tree observation pruning for LLM web agents"};
  app.require_subcommand(1);

  std::string config_path;

  // prune
  auto* prune = app.add_subcommand("prune", "Prune one observation; text to stdout, metrics JSON to stderr");
  std::string mode_name;
  std::string goal;
  std::string axtree_path;
  std::string history_path;
  std::optional<std::size_t> budget;
  TransportOptions prune_transport;
  prune->add_option("--mode", mode_name, "remove | structure | embed | truncate | passthrough; default from config")
      ->check(CLI::IsMember({"remove", "structure", "embed", "truncate", "passthrough"}));
  prune->add_option("--goal", goal, "Task goal")->required();
  prune->add_option("--axtree", axtree_path, "AxTree text file")->required()->check(CLI::ExistingFile);
  prune->add_option("--history", history_path, "Previous actions, one per line")->check(CLI::ExistingFile);
  prune->add_option("--budget", budget, "Token budget for truncation");
  prune->add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
  add_transport_options(prune, prune_transport);

  // replay
  auto* replay = app.add_subcommand("replay", "Replay recorded episodes and write report files");
  std::string episodes_path;
  std::string strategy_name;
  std::string out_dir;
  std::optional<std::size_t> workers;
  TransportOptions replay_transport;
  replay->add_option("--episodes", episodes_path, "Episode JSONL file")->required()->check(CLI::ExistingFile);
  replay->add_option("--strategy", strategy_name, "line | line_structure | embed | truncate | passthrough")
      ->required()
      ->check(CLI::IsMember({"line", "line_structure", "embed", "truncate", "passthrough"}));
  replay->add_option("--out", out_dir, "Output directory")->required();
  replay->add_option("--workers", workers, "Episodes replayed in parallel");
  replay->add_option("--budget", budget, "Token budget for truncation");
  replay->add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
  add_transport_options(replay, replay_transport);

  // cost
  auto* cost = app.add_subcommand("cost", "Cost-effectiveness threshold and per-step cost table");
  double c_small = 0.0;
  double c_large = 0.0;
  std::string report_dir;
  cost->add_option("--c-small", c_small, "Retriever model price per 1M tokens")->required();
  cost->add_option("--c-large", c_large, "Agent model price per 1M tokens")->required();
  cost->add_option("--report", report_dir, "Replay output directory; writes cost.csv there")
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    axprune::HarnessConfig config = config_path.empty() ? axprune::HarnessConfig{} : axprune::load_config(config_path);
    if (budget) config.truncate_budget = *budget;

    if (*prune) {
      auto transport = make_transport(prune_transport, config);
      axprune::Observation obs;
      obs.goal = goal;
      obs.axtree_text = read_file(axtree_path);
      if (!history_path.empty()) obs.history = read_history(history_path);
      const auto mode = mode_name.empty() ? config.retriever_mode : *axprune::parse_prune_mode(mode_name);
      const auto result = axprune::run_strategy(mode, obs, config, transport.get());

      std::cout << result.text;
      if (!result.text.empty() && result.text.back() != '\n') std::cout << '\n';
      nlohmann::ordered_json metrics;
      metrics["mode"] = axprune::to_string(result.mode);
      metrics["original_tokens"] = result.original_token_count;
      metrics["pruned_tokens"] = result.pruned_token_count;
      metrics["reduction"] = result.reduction;
      metrics["original_lines"] = result.original_line_count;
      metrics["kept_lines"] = result.kept_line_numbers.size();
      metrics["warnings"] = result.warnings;
      std::cerr << metrics.dump() << '\n';
      return EXIT_SUCCESS;
    }

    if (*replay) {
      if (workers) config.workers = std::max<std::size_t>(1, *workers);
      auto transport = make_transport(replay_transport, config);
      const auto episodes = axprune::load_episodes(episodes_path);
      const auto report = axprune::replay(episodes, *axprune::parse_strategy(strategy_name), config, transport.get());
      axprune::write_report(out_dir, report);
      std::cerr << "replayed " << episodes.size() << " episodes, " << report.rows.size() << " steps; "
                << report.errored.size() << " errored; avg reduction " << report.summary.avg_reduction << '\n';
      return EXIT_SUCCESS;
    }

    if (*cost) {
      const axprune::CostModel model{c_small, c_large};
      nlohmann::ordered_json out;
      out["c_small"] = c_small;
      out["c_large"] = c_large;
      out["threshold"] = axprune::cost_threshold(model);
      if (!report_dir.empty()) {
        const std::filesystem::path dir(report_dir);
        const auto table = axprune::cost_report(axprune::read_report_csv(dir / "report.csv"), model);
        std::ofstream csv(dir / "cost.csv", std::ios::binary);
        csv << axprune::cost_csv(table);
        out["steps"] = table.rows.size();
        out["total_retriever_cost"] = table.total_retriever_cost;
        out["total_plain_cost"] = table.total_plain_cost;
        out["fraction_cost_effective"] = table.fraction_effective;
      }
      std::cout << out.dump(2) << '\n';
      return EXIT_SUCCESS;
    }
  } catch (const axprune::Error& e) {
    std::cerr << "axprune: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
