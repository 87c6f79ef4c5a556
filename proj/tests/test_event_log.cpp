#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "fragalign/errors.hpp"
#include "fragalign/event_log.hpp"

using namespace fragalign;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name; }

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::string("fragalign_test_") + std::to_string(counter++) + ".tmp";
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("trace kinds parse and print") {
  CHECK(parse_trace_kind("complete") == TraceKind::complete);
  CHECK(parse_trace_kind("prefix") == TraceKind::prefix);
  CHECK(parse_trace_kind("infix") == TraceKind::infix);
  CHECK(parse_trace_kind("postfix") == TraceKind::postfix);
  CHECK(trace_kind_name(TraceKind::infix) == std::string("infix"));
  CHECK_THROWS_AS(parse_trace_kind("suffix"), Error);
}

TEST_CASE("xes parsing") {
  TempFile file(R"(<log>
    <trace>
      <string key="concept:name" value="case1"/>
      <event><string key="concept:name" value="a"/></event>
      <event><string key="concept:name" value="b"/></event>
    </trace>
    <trace>
      <event><string key="concept:name" value="c"/></event>
      <event><string key="lifecycle:transition" value="complete"/></event>
      <event><string key="concept:name" value=""/></event>
    </trace>
  </log>)");
  XesLoadResult result = load_xes(file.path);
  REQUIRE(result.log.traces.size() == 2);
  CHECK(result.log.traces[0].activities == std::vector<std::string>{"a", "b"});
  CHECK(result.log.traces[1].activities == std::vector<std::string>{"c"});
  CHECK(result.skipped_events == 2);
}

TEST_CASE("xes fixture loads") {
  XesLoadResult result = load_xes(fixture("synthetic_log.xes"));
  CHECK(result.log.traces.size() == 50);
  CHECK(result.skipped_events == 0);
  for (const auto& trace : result.log.traces) CHECK(trace.activities.size() >= 2);
}

TEST_CASE("xes rejects reserved activity names") {
  TempFile file(R"(<log><trace>
    <event><string key="concept:name" value="tau"/></event>
  </trace></log>)");
  CHECK_THROWS_AS(load_xes(file.path), Error);
}

TEST_CASE("csv loading groups and orders") {
  TempFile file(
      "case,activity,order\n"
      "c2,x,1\n"
      "c1,b,10\n"
      "c1,a,9\n"
      "c2,y,2\n"
      "c1,c,11\n");
  EventLog log = load_csv(file.path, "case", "activity", "order");
  REQUIRE(log.traces.size() == 2);
  // first-seen case order: c2 before c1
  CHECK(log.traces[0].activities == std::vector<std::string>{"x", "y"});
  CHECK(log.traces[1].activities == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("csv numeric-aware ordering") {
  TempFile file(
      "case,activity,order\n"
      "c,later,10\n"
      "c,first,2\n");
  EventLog log = load_csv(file.path, "case", "activity", "order");
  // numeric comparison puts 2 before 10; lexicographic would not
  CHECK(log.traces[0].activities == std::vector<std::string>{"first", "later"});
}

TEST_CASE("csv quoting and missing columns") {
  TempFile file(
      "case,activity,order\n"
      "c,\"hello, world\",1\n");
  EventLog log = load_csv(file.path, "case", "activity", "order");
  CHECK(log.traces[0].activities == std::vector<std::string>{"hello, world"});

  CHECK_THROWS_AS(load_csv(file.path, "case", "nosuch", "order"), Error);
  try {
    load_csv(file.path, "case", "nosuch", "order");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::missing_column);
  }
}

TEST_CASE("csv ties on the order column keep file order") {
  TempFile file(
      "case,activity,order\n"
      "c,b,1\n"
      "c,a,1\n");
  EventLog log = load_csv(file.path, "case", "activity", "order");
  CHECK(log.traces[0].activities == std::vector<std::string>{"b", "a"});
}

TEST_CASE("jsonl loading") {
  TempFile file(
      "{\"case\":\"c1\",\"activities\":[\"a\",\"b\"]}\n"
      "\n"
      "{\"activities\":[\"c\"]}\n");
  EventLog log = load_jsonl(file.path);
  REQUIRE(log.traces.size() == 2);
  CHECK(log.traces[0].activities == std::vector<std::string>{"a", "b"});
  CHECK(log.traces[1].activities == std::vector<std::string>{"c"});

  TempFile bad("{\"case\":\"c1\"}\n");
  CHECK_THROWS_AS(load_jsonl(bad.path), Error);
  TempFile junk("not json\n");
  CHECK_THROWS_AS(load_jsonl(junk.path), Error);
}

TEST_CASE("infix sampling is deterministic and contiguous") {
  EventLog log;
  log.traces.push_back(Trace{{"a", "b", "c", "d", "e"}, TraceKind::complete});
  log.traces.push_back(Trace{{"x", "y", "z"}, TraceKind::complete});

  std::vector<Trace> first = sample_infixes(log, 50, 2, 3, 99);
  std::vector<Trace> second = sample_infixes(log, 50, 2, 3, 99);
  REQUIRE(first.size() == 50);
  for (std::size_t i = 0; i < first.size(); i++) {
    CHECK(first[i].activities == second[i].activities);
    CHECK(first[i].kind == TraceKind::infix);
    CHECK(first[i].activities.size() >= 2);
    CHECK(first[i].activities.size() <= 3);
  }

  // every sample must be a contiguous window of one of the traces
  auto is_infix_of = [](const std::vector<std::string>& needle,
                        const std::vector<std::string>& hay) {
    if (needle.size() > hay.size()) return false;
    for (std::size_t start = 0; start + needle.size() <= hay.size(); start++) {
      bool all = true;
      for (std::size_t i = 0; i < needle.size(); i++)
        if (hay[start + i] != needle[i]) all = false;
      if (all) return true;
    }
    return false;
  };
  for (const auto& sample : first) {
    bool ok = is_infix_of(sample.activities, log.traces[0].activities) ||
              is_infix_of(sample.activities, log.traces[1].activities);
    CHECK(ok);
  }

  std::vector<Trace> other_seed = sample_infixes(log, 50, 2, 3, 100);
  bool any_difference = false;
  for (std::size_t i = 0; i < first.size(); i++)
    if (first[i].activities != other_seed[i].activities) any_difference = true;
  CHECK(any_difference);
}

TEST_CASE("postfix sampling yields true suffixes") {
  EventLog log;
  log.traces.push_back(Trace{{"a", "b", "c", "d"}, TraceKind::complete});
  std::vector<Trace> samples = sample_postfixes(log, 30, 2, 7);
  REQUIRE(samples.size() == 30);
  for (const auto& sample : samples) {
    CHECK(sample.kind == TraceKind::postfix);
    REQUIRE(sample.activities.size() >= 2);
    // must equal the tail of the source trace
    std::size_t n = sample.activities.size();
    std::vector<std::string> tail(log.traces[0].activities.end() - n,
                                  log.traces[0].activities.end());
    CHECK(sample.activities == tail);
  }
}

TEST_CASE("sampling rejects logs with no eligible trace") {
  EventLog log;
  log.traces.push_back(Trace{{"a"}, TraceKind::complete});
  CHECK_THROWS_AS(sample_infixes(log, 5, 2, 4, 1), Error);
  try {
    sample_infixes(log, 5, 2, 4, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_log);
  }
  CHECK_THROWS_AS(sample_postfixes(EventLog{}, 5, 1, 1), Error);
}
