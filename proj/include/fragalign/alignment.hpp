#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fragalign/auxiliary_net.hpp"
#include "fragalign/event_log.hpp"
#include "fragalign/petri_net.hpp"
#include "fragalign/process_tree.hpp"
#include "fragalign/relevant_markings.hpp"

namespace fragalign {

enum class MoveType { synchronous, log, visible_model, invisible_model };

const char* move_type_name(MoveType type);

struct MoveCosts {
  int64_t synchronous = 0;
  int64_t log_move = 1;
  int64_t visible_model = 1;
  int64_t invisible_model = 0;

  int64_t of(MoveType type) const;
};

struct AlignmentMove {
  MoveType type;
  std::optional<std::string> log;               // activity, empty on model-only moves
  std::optional<std::string> model_transition;  // transition name, empty on log moves
};

struct AlignmentStats {
  uint64_t expanded = 0;
  uint64_t queued = 0;
  double total_ms = 0;
  double marking_ms = 0;  // time spent generating relevant markings
};

// Markings travel with the alignment as (place name, count) lists in
// canonical order, so an alignment stays meaningful without the net object.
using NamedMarking = std::vector<std::pair<std::string, uint32_t>>;

NamedMarking to_named_marking(const PetriNet& net, const Marking& m);
Marking from_named_marking(const PetriNet& net, const NamedMarking& m);

struct Alignment {
  TraceKind kind = TraceKind::complete;
  int64_t cost = 0;
  std::vector<AlignmentMove> moves;
  NamedMarking start_marking;
  NamedMarking end_marking;
  AlignmentStats stats;
};

struct AlignConfig {
  std::size_t state_cap = default_state_cap;
  MoveCosts costs{};
  // Infix alignments on trees search only the smallest subtree covering the
  // trace activities; moves then refer to that subtree's net.
  bool restrict_submodel = true;
};

// Linear net accepting exactly the trace: places q0..qn, one labeled
// transition per event.
PetriNet build_trace_net(const Trace& trace);

// Synchronous product of a model net and a trace net. Transition order:
// model moves, then log moves, then synchronous moves.
struct SynchronousProduct {
  PetriNet net;
  struct MoveTemplate {
    MoveType type;
    std::optional<std::string> log_label;
    std::optional<TransIdx> model_transition;  // index in the model net
  };
  std::vector<MoveTemplate> moves;  // one per product transition
  std::size_t trace_place_count;    // model places start at this offset
  PlaceIdx trace_final_place;
  Marking model_final;  // model final marking in product indices
};

SynchronousProduct build_synchronous_product(const PetriNet& model, const PetriNet& trace_net);

enum class SearchGoal {
  final_marking,    // trace exhausted and model on its final marking
  trace_exhausted,  // trace exhausted, model anywhere
};

struct SearchResult {
  std::vector<TransIdx> path;  // product transitions
  int64_t cost = 0;
  Marking goal;                // product marking reached
  uint64_t expanded = 0;
  uint64_t queued = 0;
};

// Dijkstra over product markings. Ties break first-queued-first-settled, so
// results are deterministic. `must_be_empty` adds the condition that a place
// holds no token at the goal (the auxiliary start place, which forces the
// one free jump to have happened). Throws Error(no_goal_reachable) or
// Error(state_cap_exceeded).
SearchResult shortest_path(const SynchronousProduct& spn, SearchGoal goal,
                           const MoveCosts& costs,
                           std::optional<PlaceIdx> must_be_empty = std::nullopt,
                           std::size_t state_cap = default_state_cap);

// Turns a product path into an alignment: drops the jump move (auxiliary
// runs only), records its target as the start marking, and replays the rest.
// Exactly one jump must be present when `aux` is given; otherwise the path
// is malformed.
Alignment postprocess(const SynchronousProduct& spn, const SearchResult& result,
                      const AuxiliaryNet* aux, const PetriNet& model, TraceKind kind,
                      const MoveCosts& costs);

// Full pipeline for a Petri net model. `method` matters for infix/postfix
// only; advanced needs a tree and is rejected here.
Alignment align(const PetriNet& model, const Trace& trace, TraceKind kind,
                MarkingMethod method, const AlignConfig& config = {});

// Full pipeline for a process-tree model.
struct TreeAlignResult {
  Alignment alignment;
  // Set when the search ran on a restricted submodel; the alignment's
  // transitions and markings refer to restricted->net.
  std::optional<TreeNetBinding> restricted;
  std::optional<ProcessTree> restricted_tree;
};

TreeAlignResult align_tree_detailed(const ProcessTree& tree, const TreeNetBinding& binding,
                                    const Trace& trace, TraceKind kind, MarkingMethod method,
                                    const AlignConfig& config = {});

Alignment align(const ProcessTree& tree, const TreeNetBinding& binding, const Trace& trace,
                TraceKind kind, MarkingMethod method, const AlignConfig& config = {});

// Definition checks for a finished alignment against the net its moves
// refer to: log projection, move shapes, replayability and the kind's
// start/end conditions.
ValidationReport validate_alignment(const Alignment& alignment, const PetriNet& model,
                                    const Trace& trace, std::size_t cap = default_state_cap);

std::string alignment_to_json(const Alignment& alignment);
std::string alignment_to_table(const Alignment& alignment);

}  // namespace fragalign
