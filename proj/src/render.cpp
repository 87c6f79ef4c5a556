#include <json.hpp>
#include <sstream>

#include "fragalign/alignment.hpp"
#include "fragalign/render_json.hpp"

namespace fragalign {

std::string validation_report_to_json(const ValidationReport& report) {
  nlohmann::json out;
  out["valid"] = report.ok();
  out["violations"] = nlohmann::json::array();
  for (const ValidationIssue& issue : report.issues) {
    out["violations"].push_back({{"code", issue.code}, {"detail", issue.detail}});
  }
  return out.dump(2);
}

namespace {

nlohmann::json marking_to_json(const NamedMarking& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [name, count] : m) {
    for (uint32_t i = 0; i < count; i++) out.push_back(name);
  }
  return out;
}

}  // namespace

std::string alignment_to_json(const Alignment& alignment) {
  nlohmann::json out;
  out["kind"] = trace_kind_name(alignment.kind);
  out["cost"] = alignment.cost;
  out["moves"] = nlohmann::json::array();
  for (const AlignmentMove& move : alignment.moves) {
    nlohmann::json m;
    m["log"] = move.log ? nlohmann::json(*move.log) : nlohmann::json(nullptr);
    m["model_transition"] =
        move.model_transition ? nlohmann::json(*move.model_transition) : nlohmann::json(nullptr);
    m["move_type"] = move_type_name(move.type);
    out["moves"].push_back(std::move(m));
  }
  out["start_marking"] = marking_to_json(alignment.start_marking);
  out["end_marking"] = marking_to_json(alignment.end_marking);
  out["stats"] = {{"expanded", alignment.stats.expanded},
                  {"queued", alignment.stats.queued},
                  {"ms", alignment.stats.total_ms}};
  return out.dump(2);
}

std::string alignment_to_table(const Alignment& alignment) {
  // Two-row rendering: trace on top, model underneath, skips as >>.
  std::vector<std::string> log_row, model_row;
  for (const AlignmentMove& move : alignment.moves) {
    log_row.push_back(move.log ? *move.log : ">>");
    model_row.push_back(move.model_transition ? *move.model_transition : ">>");
  }
  std::ostringstream out;
  auto render_row = [&out](const std::vector<std::string>& row,
                           const std::vector<std::string>& other) {
    out << "|";
    for (std::size_t i = 0; i < row.size(); i++) {
      std::size_t width = std::max(row[i].size(), other[i].size());
      out << " " << row[i] << std::string(width - row[i].size(), ' ') << " |";
    }
    out << "\n";
  };
  if (!alignment.moves.empty()) {
    render_row(log_row, model_row);
    render_row(model_row, log_row);
  } else {
    out << "(empty alignment)\n";
  }
  auto marking = [](const NamedMarking& m) {
    std::string s = "[";
    bool first = true;
    for (const auto& [name, count] : m) {
      if (!first) s += ",";
      first = false;
      s += name;
      if (count > 1) s += "^" + std::to_string(count);
    }
    return s + "]";
  };
  out << "kind: " << trace_kind_name(alignment.kind) << "  cost: " << alignment.cost
      << "  start: " << marking(alignment.start_marking)
      << "  end: " << marking(alignment.end_marking) << "\n";
  return out.str();
}

}  // namespace fragalign
