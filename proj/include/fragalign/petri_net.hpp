#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fragalign/multiset.hpp"

namespace fragalign {

using PlaceIdx = uint32_t;
using TransIdx = uint32_t;

inline constexpr std::size_t default_state_cap = 100000;

// Accepting Petri net: places, labeled or silent transitions, unweighted
// arcs, an initial and a final marking. Places and transitions are dense
// indices in creation order; markings are multisets over place indices, so
// the sorted entry list of a marking is its canonical form.
class PetriNet {
public:
  PlaceIdx add_place(std::string name);
  // label = std::nullopt makes the transition silent.
  TransIdx add_transition(std::string name, std::optional<std::string> label);

  // Arcs are a set: adding the same arc twice keeps multiplicity 1.
  void add_arc_pt(PlaceIdx p, TransIdx t);
  void add_arc_tp(TransIdx t, PlaceIdx p);

  std::size_t place_count() const { return place_names_.size(); }
  std::size_t transition_count() const { return trans_names_.size(); }

  const std::string& place_name(PlaceIdx p) const { return place_names_.at(p); }
  const std::string& transition_name(TransIdx t) const { return trans_names_.at(t); }
  const std::optional<std::string>& label(TransIdx t) const { return trans_labels_.at(t); }
  bool is_silent(TransIdx t) const { return !trans_labels_.at(t).has_value(); }

  std::optional<PlaceIdx> find_place(std::string_view name) const;
  std::optional<TransIdx> find_transition(std::string_view name) const;

  const std::vector<PlaceIdx>& preset(TransIdx t) const { return pre_.at(t); }
  const std::vector<PlaceIdx>& postset(TransIdx t) const { return post_.at(t); }
  // Transitions consuming from / producing into a place.
  const std::vector<TransIdx>& consumers(PlaceIdx p) const { return consumers_.at(p); }
  const std::vector<TransIdx>& producers(PlaceIdx p) const { return producers_.at(p); }

  Marking initial_marking;
  Marking final_marking;

  // Convenience: marking from place names. Throws Error(unknown_node) for
  // names not in the net.
  Marking marking_of(std::initializer_list<std::string_view> names) const;
  Marking marking_of(const std::vector<std::string>& names) const;
  // Canonical rendering, e.g. "[p4,p5]" or "[p2^3]" for count 3.
  std::string marking_to_string(const Marking& m) const;

  bool is_enabled(const Marking& m, TransIdx t) const;
  // Enabled transitions in ascending index order.
  std::vector<TransIdx> enabled_transitions(const Marking& m) const;
  // Throws Error(not_enabled) if t is not enabled at m.
  Marking fire(const Marking& m, TransIdx t) const;

private:
  std::vector<std::string> place_names_;
  std::vector<std::string> trans_names_;
  std::vector<std::optional<std::string>> trans_labels_;
  std::vector<std::vector<PlaceIdx>> pre_;
  std::vector<std::vector<PlaceIdx>> post_;
  std::vector<std::vector<TransIdx>> consumers_;
  std::vector<std::vector<TransIdx>> producers_;
  std::vector<TransIdx> no_input_;  // transitions with empty preset: always enabled
  std::unordered_map<std::string, PlaceIdx> place_index_;
  std::unordered_map<std::string, TransIdx> trans_index_;
};

// Breadth-first closure of the initial marking. Deterministic: the result is
// ordered by the canonical marking form. Throws Error(state_cap_exceeded)
// once more than `cap` distinct markings have been found.
MarkingSet reachable_markings(const PetriNet& net, std::size_t cap = default_state_cap);

// Explicit reachability graph, used by the soundness check and the oracle.
struct ReachabilityGraph {
  std::vector<Marking> markings;  // discovery order (BFS from the initial marking)
  std::unordered_map<Marking, uint32_t, Multiset::Hash> index;
  // edges[i] = (transition, successor marking index)
  std::vector<std::vector<std::pair<TransIdx, uint32_t>>> edges;
};

ReachabilityGraph build_reachability_graph(const PetriNet& net,
                                           std::size_t cap = default_state_cap);

struct ValidationIssue {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural workflow-net checks plus the behavioural part of soundness that
// matters here: one source, one sink, markings match them, every node on a
// source-sink path, and every reachable marking can still reach the final
// marking. State-space checks are skipped (and reported) if the cap is hit.
ValidationReport validate_workflow_net(const PetriNet& net,
                                       std::size_t cap = default_state_cap);

std::string net_to_dot(const PetriNet& net);

}  // namespace fragalign
