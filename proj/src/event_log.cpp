#include "fragalign/event_log.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "fragalign/errors.hpp"
#include "fragalign/model_io.hpp"
#include "fragalign/rng.hpp"

namespace pt = boost::property_tree;

namespace fragalign {

const char* trace_kind_name(TraceKind kind) {
  switch (kind) {
    case TraceKind::complete: return "complete";
    case TraceKind::prefix: return "prefix";
    case TraceKind::infix: return "infix";
    case TraceKind::postfix: return "postfix";
  }
  return "unknown";
}

TraceKind parse_trace_kind(const std::string& name) {
  if (name == "complete") return TraceKind::complete;
  if (name == "prefix") return TraceKind::prefix;
  if (name == "infix") return TraceKind::infix;
  if (name == "postfix") return TraceKind::postfix;
  throw Error(ErrorCode::invalid_argument, "unknown trace kind: " + name);
}

namespace {

void check_activity(const std::string& label) {
  if (label.empty() || label == "tau" || label == "\xcf\x84" || label == ">>") {
    throw Error(ErrorCode::invalid_argument, "reserved activity label: '" + label + "'");
  }
}

}  // namespace

XesLoadResult parse_xes(const std::string& xml) {
  pt::ptree doc;
  try {
    std::istringstream in(xml);
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::xml_error, std::string("xes: ") + e.what());
  }
  auto log_node = doc.get_child_optional("log");
  if (!log_node) throw Error(ErrorCode::parse_error, "xes: missing <log> root");

  XesLoadResult result;
  for (const auto& [key, trace_node] : *log_node) {
    if (key != "trace") continue;
    Trace trace;
    for (const auto& [ekey, event_node] : trace_node) {
      if (ekey != "event") continue;
      std::optional<std::string> name;
      for (const auto& [akey, attr] : event_node) {
        if (akey != "string") continue;
        if (attr.get<std::string>("<xmlattr>.key", "") == "concept:name") {
          name = attr.get<std::string>("<xmlattr>.value", "");
          break;
        }
      }
      if (!name || name->empty()) {
        result.skipped_events++;
        continue;
      }
      check_activity(*name);
      trace.activities.push_back(std::move(*name));
    }
    result.log.traces.push_back(std::move(trace));
  }
  return result;
}

XesLoadResult load_xes(const std::string& path) { return parse_xes(read_file(path)); }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  // Minimal CSV: comma separated, double quotes with "" escapes.
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); i++) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        i++;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

bool numeric(const std::string& s, double& value) {
  if (s.empty()) return false;
  char* end = nullptr;
  value = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

EventLog load_csv(const std::string& path, const std::string& case_column,
                  const std::string& activity_column, const std::string& order_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, "csv: empty file");
  std::vector<std::string> header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::missing_column, "csv: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t case_idx = column(case_column);
  std::size_t act_idx = column(activity_column);
  std::size_t order_idx = column(order_column);

  struct Row {
    std::string order;
    std::size_t file_pos;
    std::string activity;
  };
  std::map<std::string, std::vector<Row>> cases;  // key order = first-seen irrelevant; sort later
  std::vector<std::string> case_order;            // first-seen order of case ids
  std::size_t file_pos = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    std::size_t needed = std::max({case_idx, act_idx, order_idx});
    if (fields.size() <= needed) {
      throw Error(ErrorCode::parse_error, "csv: row with too few fields");
    }
    check_activity(fields[act_idx]);
    auto [it, inserted] = cases.try_emplace(fields[case_idx]);
    if (inserted) case_order.push_back(fields[case_idx]);
    it->second.push_back({fields[order_idx], file_pos++, fields[act_idx]});
  }

  EventLog log;
  for (const auto& case_id : case_order) {
    auto& rows = cases[case_id];
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      double da, db;
      if (numeric(a.order, da) && numeric(b.order, db)) {
        if (da != db) return da < db;
        return a.file_pos < b.file_pos;
      }
      if (a.order != b.order) return a.order < b.order;
      return a.file_pos < b.file_pos;
    });
    Trace trace;
    for (auto& row : rows) trace.activities.push_back(std::move(row.activity));
    log.traces.push_back(std::move(trace));
  }
  return log;
}

EventLog load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::parse_error,
                  "jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!row.is_object() || !row.contains("activities") || !row["activities"].is_array()) {
      throw Error(ErrorCode::parse_error,
                  "jsonl line " + std::to_string(line_no) + ": expected {\"case\",\"activities\"}");
    }
    Trace trace;
    for (const auto& a : row["activities"]) {
      if (!a.is_string()) {
        throw Error(ErrorCode::parse_error,
                    "jsonl line " + std::to_string(line_no) + ": activities must be strings");
      }
      std::string label = a.get<std::string>();
      check_activity(label);
      trace.activities.push_back(std::move(label));
    }
    log.traces.push_back(std::move(trace));
  }
  return log;
}

namespace {

std::vector<std::size_t> eligible_traces(const EventLog& log, std::size_t min_len) {
  if (log.traces.empty()) throw Error(ErrorCode::empty_log, "log has no traces");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < log.traces.size(); i++) {
    if (log.traces[i].activities.size() >= min_len) out.push_back(i);
  }
  if (out.empty()) {
    throw Error(ErrorCode::empty_log,
                "no trace is at least " + std::to_string(min_len) + " events long");
  }
  return out;
}

}  // namespace

std::vector<Trace> sample_infixes(const EventLog& log, std::size_t n, std::size_t min_len,
                                  std::size_t max_len, uint64_t seed) {
  if (min_len == 0 || max_len < min_len) {
    throw Error(ErrorCode::invalid_argument, "bad infix length bounds");
  }
  std::vector<std::size_t> eligible = eligible_traces(log, min_len);
  std::mt19937_64 rng(seed);
  std::vector<Trace> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; i++) {
    const Trace& t = log.traces[eligible[uniform_below(rng, eligible.size())]];
    std::size_t hi = std::min(max_len, t.activities.size());
    std::size_t len = min_len + uniform_below(rng, hi - min_len + 1);
    std::size_t start = uniform_below(rng, t.activities.size() - len + 1);
    Trace fragment;
    fragment.kind = TraceKind::infix;
    fragment.activities.assign(t.activities.begin() + start, t.activities.begin() + start + len);
    out.push_back(std::move(fragment));
  }
  return out;
}

std::vector<Trace> sample_postfixes(const EventLog& log, std::size_t n, std::size_t min_len,
                                    uint64_t seed) {
  if (min_len == 0) throw Error(ErrorCode::invalid_argument, "bad postfix length bound");
  std::vector<std::size_t> eligible = eligible_traces(log, min_len);
  std::mt19937_64 rng(seed);
  std::vector<Trace> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; i++) {
    const Trace& t = log.traces[eligible[uniform_below(rng, eligible.size())]];
    std::size_t len = min_len + uniform_below(rng, t.activities.size() - min_len + 1);
    Trace fragment;
    fragment.kind = TraceKind::postfix;
    fragment.activities.assign(t.activities.end() - len, t.activities.end());
    out.push_back(std::move(fragment));
  }
  return out;
}

}  // namespace fragalign
