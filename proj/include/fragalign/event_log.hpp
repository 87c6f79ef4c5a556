#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fragalign {

enum class TraceKind { complete, prefix, infix, postfix };

const char* trace_kind_name(TraceKind kind);
TraceKind parse_trace_kind(const std::string& name);

struct Trace {
  std::vector<std::string> activities;
  TraceKind kind = TraceKind::complete;
};

struct EventLog {
  std::vector<Trace> traces;  // duplicates kept, one entry per case
};

struct XesLoadResult {
  EventLog log;
  std::size_t skipped_events = 0;  // events without concept:name
};

XesLoadResult load_xes(const std::string& path);
XesLoadResult parse_xes(const std::string& xml);

// Flat event table. Rows are grouped by the case column and ordered by the
// order column (numeric comparison when both values are numbers). Throws
// Error(missing_column) if a named column is absent.
EventLog load_csv(const std::string& path, const std::string& case_column,
                  const std::string& activity_column, const std::string& order_column);

// One JSON object per line: {"case": id, "activities": [..]}.
EventLog load_jsonl(const std::string& path);

// Contiguous random fragments of log traces. Traces are drawn uniformly
// over log entries (so variants weigh by multiplicity); traces shorter than
// min_len are excluded. Throws Error(empty_log) when nothing can be drawn.
std::vector<Trace> sample_infixes(const EventLog& log, std::size_t n, std::size_t min_len,
                                  std::size_t max_len, uint64_t seed);
std::vector<Trace> sample_postfixes(const EventLog& log, std::size_t n, std::size_t min_len,
                                    uint64_t seed);

}  // namespace fragalign
