#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "axprune/error.hpp"
#include "axprune/harness.hpp"

namespace axprune {
namespace {

using nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string edge(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join_warnings(const std::vector<std::string>& warnings) {
  std::string out;
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    if (i) out += "; ";
    out += warnings[i];
  }
  return out;
}

// RFC 4180 records; quoted fields may contain newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

ordered_json summary_to_json(const BenchmarkSummary& s) {
  ordered_json j;
  j["name"] = s.name;
  j["n_tasks"] = s.n_tasks;
  j["successes"] = s.successes;
  j["n_unlabeled"] = s.n_unlabeled;
  j["n_steps"] = s.n_steps;
  j["sr"] = s.sr;
  j["se"] = s.se;
  j["avg_reduction"] = s.avg_reduction;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileNotFound, "cannot write " + path.string());
  out << content;
}

}  // namespace

std::string report_csv(const std::vector<StepRow>& rows) {
  std::string out = "task_id,step,mode,original_tokens,pruned_tokens,reduction,warnings\n";
  for (const auto& r : rows) {
    out += csv_field(r.task_id) + ',' + std::to_string(r.step) + ',' + std::string(to_string(r.mode)) + ',' +
           std::to_string(r.original_tokens) + ',' + std::to_string(r.pruned_tokens) + ',' +
           fixed6(r.reduction) + ',' + csv_field(join_warnings(r.warnings)) + '\n';
  }
  return out;
}

std::string summary_json(const RunReport& report) {
  ordered_json j;
  j["strategy"] = report.strategy;
  j["token_counter"] = report.token_counter;
  j["summary"] = summary_to_json(report.summary);
  j["benchmarks"] = ordered_json::array();
  for (const auto& s : report.per_benchmark) j["benchmarks"].push_back(summary_to_json(s));
  j["errored_episodes"] = ordered_json::array();
  for (const auto& e : report.errored) {
    j["errored_episodes"].push_back({{"task_id", e.task_id}, {"message", e.message}});
  }
  return j.dump(2) + "\n";
}

std::string boxplot_csv(const std::vector<BoxplotBin>& bins) {
  std::string out = "bin_low,bin_high,count,min,q1,median,q3,max\n";
  for (const auto& b : bins) {
    out += edge(b.low) + ',' + edge(b.high) + ',' + std::to_string(b.count);
    if (b.stats) {
      for (double v : {b.stats->min, b.stats->q1, b.stats->median, b.stats->q3, b.stats->max}) {
        out += ',' + fixed6(v);
      }
    } else {
      out += ",,,,,";
    }
    out += '\n';
  }
  return out;
}

void write_report(const std::filesystem::path& dir, const RunReport& report) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.csv", report_csv(report.rows));
  write_file(dir / "summary.json", summary_json(report));
  write_file(dir / "boxplot.csv", boxplot_csv(report.boxplot));
}

std::vector<StepRow> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto records = parse_csv(ss.str());
  if (records.empty() || records.front().size() < 6 || records.front()[0] != "task_id") {
    throw SchemaError(1, "report.csv header missing");
  }
  std::vector<StepRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (rec.size() < 6) throw SchemaError(i + 1, "expected at least 6 columns");
    StepRow row;
    try {
      row.task_id = rec[0];
      row.step = std::stoull(rec[1]);
      const auto mode = parse_prune_mode(rec[2]);
      if (!mode) throw SchemaError(i + 1, "unknown mode '" + rec[2] + "'");
      row.mode = *mode;
      row.original_tokens = std::stoull(rec[3]);
      row.pruned_tokens = std::stoull(rec[4]);
      row.reduction = std::stod(rec[5]);
    } catch (const std::logic_error&) {
      throw SchemaError(i + 1, "malformed number");
    }
    if (rec.size() > 6 && !rec[6].empty()) row.warnings.push_back(rec[6]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string cost_csv(const CostTable& table) {
  std::string out = "task_id,step,original_tokens,pruned_tokens,alpha,retriever_cost,plain_cost,cost_effective\n";
  for (const auto& r : table.rows) {
    out += csv_field(r.task_id) + ',' + std::to_string(r.step) + ',' + std::to_string(r.original_tokens) + ',' +
           std::to_string(r.pruned_tokens) + ',' + fixed6(r.alpha) + ',' + fixed6(r.retriever_cost) + ',' +
           fixed6(r.plain_cost) + ',' + (r.cost_effective ? "true" : "false") + '\n';
  }
  return out;
}

}  // namespace axprune
