#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "fragalign/alignment.hpp"
#include "fragalign/errors.hpp"
#include "fragalign/oracle.hpp"
#include "support/example_net.hpp"
#include "support/generators.hpp"

using namespace fragalign;

namespace {

Trace make_trace(TraceKind kind, std::vector<std::string> activities) {
  Trace t;
  t.activities = std::move(activities);
  t.kind = kind;
  return t;
}

}  // namespace

TEST_CASE("complete costs on the example net") {
  PetriNet net = make_example_net();
  CHECK(brute_force_complete_cost(net, make_trace(TraceKind::complete,
                                                  {"a", "b", "c", "d", "g", "h"})) == 0);
  CHECK(brute_force_complete_cost(net, make_trace(TraceKind::complete,
                                                  {"a", "c", "b", "d", "e", "f", "h"})) == 0);
  CHECK(brute_force_complete_cost(net, make_trace(TraceKind::complete, {"d", "a", "e", "h"})) == 5);
  CHECK(brute_force_complete_cost(net, make_trace(TraceKind::complete, {"a", "h"})) == 4);
  // empty trace: cheapest full run has six visible transitions
  CHECK(brute_force_complete_cost(net, make_trace(TraceKind::complete, {})) == 6);
}

TEST_CASE("fragment costs on the example net") {
  PetriNet net = make_example_net();
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::infix, {"d", "g"}),
                                  TraceKind::infix) == 0);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::infix, {"b", "d", "f"}),
                                  TraceKind::infix) == 0);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::infix, {"d", "a"}),
                                  TraceKind::infix) == 1);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::infix, {"h"}),
                                  TraceKind::infix) == 0);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::infix, {}),
                                  TraceKind::infix) == 0);

  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::postfix, {"d", "g"}),
                                  TraceKind::postfix) == 1);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::postfix, {"a", "d", "g"}),
                                  TraceKind::postfix) == 2);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::postfix, {"h"}),
                                  TraceKind::postfix) == 0);
  CHECK(brute_force_fragment_cost(net, make_trace(TraceKind::postfix, {}),
                                  TraceKind::postfix) == 0);
}

TEST_CASE("fragment cost rejects anchored kinds") {
  PetriNet net = make_example_net();
  Trace trace = make_trace(TraceKind::complete, {"a"});
  CHECK_THROWS_AS(brute_force_fragment_cost(net, trace, TraceKind::complete), Error);
  CHECK_THROWS_AS(brute_force_fragment_cost(net, trace, TraceKind::prefix), Error);
}

TEST_CASE("oracle reports when no alignment exists") {
  PetriNet net;
  PlaceIdx p1 = net.add_place("p1");
  PlaceIdx p2 = net.add_place("p2");
  PlaceIdx p3 = net.add_place("p3");
  TransIdx t = net.add_transition("t", "x");
  net.add_arc_pt(p1, t);
  net.add_arc_tp(t, p2);
  TransIdx u = net.add_transition("u", "y");
  net.add_arc_pt(p3, u);
  net.add_arc_tp(u, p1);
  net.initial_marking = Multiset::single(p1);
  net.final_marking = Multiset::single(p3);  // unreachable

  Trace trace = make_trace(TraceKind::postfix, {"x"});
  CHECK_THROWS_AS(brute_force_fragment_cost(net, trace, TraceKind::postfix), Error);
  try {
    brute_force_fragment_cost(net, trace, TraceKind::postfix);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_goal_reachable);
  }
  CHECK_THROWS_AS(brute_force_complete_cost(net, make_trace(TraceKind::complete, {})), Error);
}

TEST_CASE("model fragment enumeration") {
  PetriNet net = make_example_net();
  std::set<std::vector<std::string>> fragments = enumerate_model_fragments(net, 2);

  CHECK(fragments.count({}) == 1);
  for (const char* single : {"a", "b", "c", "d", "e", "f", "g", "h"}) {
    CHECK(fragments.count({single}) == 1);
  }
  CHECK(fragments.count({"d", "g"}) == 1);
  CHECK(fragments.count({"d", "e"}) == 1);  // the silent split is skipped over
  CHECK(fragments.count({"g", "h"}) == 1);
  CHECK(fragments.count({"e", "f"}) == 1);
  CHECK(fragments.count({"f", "e"}) == 1);
  CHECK(fragments.count({"b", "c"}) == 1);
  CHECK(fragments.count({"c", "b"}) == 1);

  CHECK(fragments.count({"h", "a"}) == 0);
  CHECK(fragments.count({"a", "a"}) == 0);
  CHECK(fragments.count({"a", "d"}) == 0);
  CHECK(fragments.count({"g", "g"}) == 0);

  for (const auto& fragment : fragments) CHECK(fragment.size() <= 2);

  // max_len 0 keeps only the empty window
  std::set<std::vector<std::string>> none = enumerate_model_fragments(net, 0);
  CHECK(none.size() == 1);
  CHECK(none.count({}) == 1);
}

TEST_CASE("every enumerated fragment aligns for free") {
  PetriNet net = make_example_net();
  for (const auto& fragment : enumerate_model_fragments(net, 3)) {
    Trace trace = make_trace(TraceKind::infix, fragment);
    CHECK(brute_force_fragment_cost(net, trace, TraceKind::infix) == 0);
    Alignment a = align(net, trace, TraceKind::infix, MarkingMethod::filtered);
    INFO("fragment size ", fragment.size());
    CHECK(a.cost == 0);
  }
}

TEST_CASE("engine and oracle agree on the example net") {
  PetriNet net = make_example_net();
  std::vector<std::vector<std::string>> traces = {
      {"d", "g"},       {"b", "d", "f"}, {"d", "a"},     {"a", "h"},   {"h", "a"},
      {"g", "e"},       {"b", "c", "d"}, {"e", "f"},     {"f", "e"},   {"zz"},
      {"a", "zz", "d"}, {"h", "h"},      {"c", "b", "d", "g"}, {},     {"b", "b"},
  };
  for (const auto& activities : traces) {
    for (TraceKind kind : {TraceKind::infix, TraceKind::postfix}) {
      Trace trace = make_trace(kind, activities);
      int64_t expected = brute_force_fragment_cost(net, trace, kind);
      for (MarkingMethod method : {MarkingMethod::baseline, MarkingMethod::filtered}) {
        Alignment a = align(net, trace, kind, method);
        INFO("kind ", trace_kind_name(kind), " method ", marking_method_name(method),
             " trace size ", activities.size());
        CHECK(a.cost == expected);
      }
    }
    Trace complete = make_trace(TraceKind::complete, activities);
    Alignment a = align(net, complete, TraceKind::complete, MarkingMethod::baseline);
    CHECK(a.cost == brute_force_complete_cost(net, complete));
  }
}

TEST_CASE("engine and oracle agree on random trees") {
  std::mt19937_64 rng(20240817);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e"};
  std::size_t checked = 0;
  for (int round = 0; round < 12; round++) {
    ProcessTree tree = testgen::random_tree(rng, 12, alphabet);
    TreeNetBinding binding = to_wfnet(tree);
    ReachabilityGraph graph = build_reachability_graph(binding.net);

    for (int sample = 0; sample < 6; sample++) {
      std::vector<std::string> walk = testgen::random_walk(binding.net, rng);
      std::vector<std::string> mutated = testgen::mutate_trace(walk, rng, alphabet, 2);
      if (mutated.size() > 5) mutated.resize(5);
      if (graph.markings.size() * (mutated.size() + 1) > 2000) continue;

      for (TraceKind kind : {TraceKind::infix, TraceKind::postfix}) {
        Trace trace = testgen::as_trace(mutated, kind);
        int64_t expected = brute_force_fragment_cost(binding.net, trace, kind);
        Alignment baseline = align(binding.net, trace, kind, MarkingMethod::baseline);
        Alignment filtered = align(binding.net, trace, kind, MarkingMethod::filtered);
        Alignment advanced = align(tree, binding, trace, kind, MarkingMethod::advanced);
        INFO("tree ", tree.to_text(), " kind ", trace_kind_name(kind));
        CHECK(baseline.cost == expected);
        CHECK(filtered.cost == expected);
        CHECK(advanced.cost == expected);
        checked++;
      }
      Trace complete = testgen::as_trace(mutated, TraceKind::complete);
      CHECK(align(binding.net, complete, TraceKind::complete, MarkingMethod::baseline).cost ==
            brute_force_complete_cost(binding.net, complete));
    }
  }
  CHECK(checked >= 50);
}
