#pragma once

// Deterministic generators for the randomized suites. Everything draws from
// a caller-provided mt19937_64 through uniform_below, so a fixed seed gives
// the same trees and traces on every platform.

#include <random>
#include <string>
#include <vector>

#include "fragalign/event_log.hpp"
#include "fragalign/petri_net.hpp"
#include "fragalign/process_tree.hpp"
#include "fragalign/rng.hpp"

namespace testgen {

inline std::string random_tree_text(std::mt19937_64& rng, std::size_t budget,
                                    const std::vector<std::string>& alphabet) {
  using fragalign::uniform_below;
  if (budget <= 1) {
    // Mostly activities, occasionally silent.
    if (uniform_below(rng, 100) < 12) return "tau";
    return alphabet[uniform_below(rng, alphabet.size())];
  }
  uint64_t pick = uniform_below(rng, 100);
  const char* op = pick < 35 ? "->" : pick < 60 ? "X" : pick < 85 ? "+" : "*";
  std::size_t arity = op == std::string("*") ? 2 : 2 + uniform_below(rng, 2);
  std::string out = std::string(op) + "(";
  std::size_t remaining = budget - 1;
  for (std::size_t i = 0; i < arity; i++) {
    std::size_t slots_left = arity - i;
    std::size_t share;
    if (remaining == 0) share = 0;
    else if (remaining <= slots_left) share = 1;
    else share = 1 + uniform_below(rng, remaining - slots_left + 1);
    remaining -= share;
    if (i) out += ",";
    out += random_tree_text(rng, share, alphabet);
  }
  out += ")";
  return out;
}

// Tree with at most max_nodes nodes (resamples until small enough).
inline fragalign::ProcessTree random_tree(std::mt19937_64& rng, std::size_t max_nodes,
                                          const std::vector<std::string>& alphabet) {
  for (;;) {
    std::size_t budget = 3 + fragalign::uniform_below(rng, max_nodes - 2);
    fragalign::ProcessTree tree = fragalign::ProcessTree::parse(
        random_tree_text(rng, budget, alphabet));
    if (tree.node_count() <= max_nodes) return tree;
  }
}

// Visible labels of a random run from the initial marking; stops at the
// final marking or after step_cap firings.
inline std::vector<std::string> random_walk(const fragalign::PetriNet& net,
                                            std::mt19937_64& rng, std::size_t step_cap = 200) {
  using namespace fragalign;
  std::vector<std::string> out;
  Marking m = net.initial_marking;
  for (std::size_t step = 0; step < step_cap; step++) {
    if (m == net.final_marking) break;
    std::vector<TransIdx> enabled = net.enabled_transitions(m);
    if (enabled.empty()) break;
    TransIdx t = enabled[uniform_below(rng, enabled.size())];
    if (!net.is_silent(t)) out.push_back(*net.label(t));
    m = net.fire(m, t);
  }
  return out;
}

// Random edits: drops, duplicates, swaps, and foreign insertions.
inline std::vector<std::string> mutate_trace(std::vector<std::string> trace,
                                             std::mt19937_64& rng,
                                             const std::vector<std::string>& alphabet,
                                             std::size_t edits) {
  using fragalign::uniform_below;
  for (std::size_t i = 0; i < edits; i++) {
    uint64_t kind = uniform_below(rng, 4);
    if (trace.empty()) kind = 3;
    std::size_t at = trace.empty() ? 0 : uniform_below(rng, trace.size());
    switch (kind) {
      case 0:
        trace.erase(trace.begin() + at);
        break;
      case 1:
        trace.insert(trace.begin() + at, trace[at]);
        break;
      case 2:
        if (trace.size() >= 2) {
          std::size_t other = uniform_below(rng, trace.size());
          std::swap(trace[at], trace[other]);
        }
        break;
      default:
        trace.insert(trace.begin() + at, alphabet[uniform_below(rng, alphabet.size())]);
        break;
    }
  }
  return trace;
}

inline fragalign::Trace as_trace(std::vector<std::string> activities, fragalign::TraceKind kind) {
  fragalign::Trace t;
  t.activities = std::move(activities);
  t.kind = kind;
  return t;
}

}  // namespace testgen
