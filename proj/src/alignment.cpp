#include "fragalign/alignment.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <unordered_map>

#include "fragalign/errors.hpp"

namespace fragalign {

const char* move_type_name(MoveType type) {
  switch (type) {
    case MoveType::synchronous: return "synchronous";
    case MoveType::log: return "log";
    case MoveType::visible_model: return "visible_model";
    case MoveType::invisible_model: return "invisible_model";
  }
  return "unknown";
}

int64_t MoveCosts::of(MoveType type) const {
  switch (type) {
    case MoveType::synchronous: return synchronous;
    case MoveType::log: return log_move;
    case MoveType::visible_model: return visible_model;
    case MoveType::invisible_model: return invisible_model;
  }
  return 0;
}

NamedMarking to_named_marking(const PetriNet& net, const Marking& m) {
  NamedMarking out;
  for (const auto& [p, count] : m.entries()) out.emplace_back(net.place_name(p), count);
  return out;
}

Marking from_named_marking(const PetriNet& net, const NamedMarking& named) {
  Marking out;
  for (const auto& [name, count] : named) {
    auto p = net.find_place(name);
    if (!p) throw Error(ErrorCode::unknown_node, "unknown place: " + name);
    out.add(*p, count);
  }
  return out;
}

PetriNet build_trace_net(const Trace& trace) {
  PetriNet net;
  PlaceIdx prev = net.add_place("q0");
  net.initial_marking = Marking::single(prev);
  for (std::size_t i = 0; i < trace.activities.size(); i++) {
    PlaceIdx next = net.add_place("q" + std::to_string(i + 1));
    TransIdx t = net.add_transition("e" + std::to_string(i + 1), trace.activities[i]);
    net.add_arc_pt(prev, t);
    net.add_arc_tp(t, next);
    prev = next;
  }
  net.final_marking = Marking::single(prev);
  return net;
}

SynchronousProduct build_synchronous_product(const PetriNet& model, const PetriNet& trace_net) {
  SynchronousProduct spn;
  spn.trace_place_count = trace_net.place_count();

  for (PlaceIdx p = 0; p < trace_net.place_count(); p++) {
    spn.net.add_place("q::" + trace_net.place_name(p));
  }
  for (PlaceIdx p = 0; p < model.place_count(); p++) {
    spn.net.add_place("m::" + model.place_name(p));
  }
  auto model_place = [&spn](PlaceIdx p) {
    return static_cast<PlaceIdx>(p + spn.trace_place_count);
  };

  // Model moves keep the model structure.
  for (TransIdx t = 0; t < model.transition_count(); t++) {
    TransIdx pt = spn.net.add_transition("m::" + model.transition_name(t), model.label(t));
    for (PlaceIdx p : model.preset(t)) spn.net.add_arc_pt(model_place(p), pt);
    for (PlaceIdx p : model.postset(t)) spn.net.add_arc_tp(pt, model_place(p));
    spn.moves.push_back({model.is_silent(t) ? MoveType::invisible_model : MoveType::visible_model,
                         std::nullopt, t});
  }
  // Log moves step through the trace places.
  for (TransIdx t = 0; t < trace_net.transition_count(); t++) {
    TransIdx pt = spn.net.add_transition("l::" + trace_net.transition_name(t),
                                         trace_net.label(t));
    for (PlaceIdx p : trace_net.preset(t)) spn.net.add_arc_pt(p, pt);
    for (PlaceIdx p : trace_net.postset(t)) spn.net.add_arc_tp(pt, p);
    spn.moves.push_back({MoveType::log, trace_net.label(t), std::nullopt});
  }
  // Synchronous moves pair each trace event with every equally labeled
  // model transition.
  for (TransIdx e = 0; e < trace_net.transition_count(); e++) {
    for (TransIdx t = 0; t < model.transition_count(); t++) {
      if (model.is_silent(t) || *model.label(t) != *trace_net.label(e)) continue;
      TransIdx pt = spn.net.add_transition(
          "s::" + trace_net.transition_name(e) + "::" + model.transition_name(t),
          model.label(t));
      for (PlaceIdx p : trace_net.preset(e)) spn.net.add_arc_pt(p, pt);
      for (PlaceIdx p : trace_net.postset(e)) spn.net.add_arc_tp(pt, p);
      for (PlaceIdx p : model.preset(t)) spn.net.add_arc_pt(model_place(p), pt);
      for (PlaceIdx p : model.postset(t)) spn.net.add_arc_tp(pt, model_place(p));
      spn.moves.push_back({MoveType::synchronous, trace_net.label(e), t});
    }
  }

  spn.net.initial_marking = trace_net.initial_marking;
  for (const auto& [p, count] : model.initial_marking.entries()) {
    spn.net.initial_marking.add(model_place(p), count);
  }
  auto trace_final = trace_net.final_marking.entries();
  spn.trace_final_place = trace_final.at(0).first;
  spn.model_final = Marking();
  for (const auto& [p, count] : model.final_marking.entries()) {
    spn.model_final.add(model_place(p), count);
  }
  spn.net.final_marking = multiset_union(Marking::single(spn.trace_final_place), spn.model_final);
  return spn;
}

SearchResult shortest_path(const SynchronousProduct& spn, SearchGoal goal,
                           const MoveCosts& costs, std::optional<PlaceIdx> must_be_empty,
                           std::size_t state_cap) {
  for (MoveType type : {MoveType::synchronous, MoveType::log, MoveType::visible_model,
                        MoveType::invisible_model}) {
    if (costs.of(type) < 0) {
      throw Error(ErrorCode::invalid_argument, "move costs must be nonnegative");
    }
  }

  const PetriNet& net = spn.net;
  const Marking target = net.final_marking;

  auto is_goal = [&](const Marking& m) {
    if (goal == SearchGoal::final_marking) return m == target;
    if (m.count(spn.trace_final_place) == 0) return false;
    return !must_be_empty || m.count(*must_be_empty) == 0;
  };

  struct QueueEntry {
    int64_t cost;
    uint64_t seq;  // FIFO tie break
    uint32_t state;
  };
  struct Worse {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.cost != b.cost) return a.cost > b.cost;
      return a.seq > b.seq;
    }
  };

  std::vector<Marking> states;
  std::unordered_map<Marking, uint32_t, Multiset::Hash> index;
  std::vector<int64_t> dist;
  std::vector<char> settled;
  std::vector<std::pair<int64_t, TransIdx>> parent;  // (state, transition), -1 = none

  auto intern = [&](const Marking& m) -> uint32_t {
    auto [it, inserted] = index.try_emplace(m, static_cast<uint32_t>(states.size()));
    if (inserted) {
      if (states.size() >= state_cap) {
        throw Error(ErrorCode::state_cap_exceeded,
                    "alignment search exceeds cap of " + std::to_string(state_cap) + " states");
      }
      states.push_back(m);
      dist.push_back(-1);
      settled.push_back(0);
      parent.emplace_back(-1, 0);
    }
    return it->second;
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, Worse> queue;
  uint64_t seq = 0;
  uint64_t expanded = 0;
  uint64_t queued = 0;

  uint32_t start = intern(net.initial_marking);
  dist[start] = 0;
  queue.push({0, seq++, start});
  queued++;

  while (!queue.empty()) {
    QueueEntry top = queue.top();
    queue.pop();
    if (settled[top.state] || top.cost != dist[top.state]) continue;
    settled[top.state] = 1;
    expanded++;

    Marking current = states[top.state];
    if (is_goal(current)) {
      SearchResult result;
      result.cost = top.cost;
      result.goal = current;
      result.expanded = expanded;
      result.queued = queued;
      int64_t at = top.state;
      while (parent[at].first >= 0) {
        result.path.push_back(parent[at].second);
        at = parent[at].first;
      }
      std::reverse(result.path.begin(), result.path.end());
      return result;
    }

    for (TransIdx t : net.enabled_transitions(current)) {
      int64_t next_cost = top.cost + costs.of(spn.moves[t].type);
      Marking succ = net.fire(current, t);
      uint32_t s = intern(succ);
      if (settled[s]) continue;
      if (dist[s] < 0 || next_cost < dist[s]) {
        dist[s] = next_cost;
        parent[s] = {top.state, t};
        queue.push({next_cost, seq++, s});
        queued++;
      }
    }
  }
  throw Error(ErrorCode::no_goal_reachable, "no alignment reaches the goal");
}

Alignment postprocess(const SynchronousProduct& spn, const SearchResult& result,
                      const AuxiliaryNet* aux, const PetriNet& model, TraceKind kind,
                      const MoveCosts& costs) {
  Alignment out;
  out.kind = kind;

  Marking start = model.initial_marking;
  std::vector<TransIdx> model_fires;
  bool jump_seen = false;

  for (TransIdx t : result.path) {
    if (t >= spn.moves.size()) {
      throw Error(ErrorCode::malformed_path, "path transition out of range");
    }
    const auto& mv = spn.moves[t];
    if (aux && mv.model_transition &&
        *mv.model_transition >= aux->original_transition_count) {
      // The free jump that picked the start marking. It must be the only
      // one: a second jump would need the start place marked again.
      if (jump_seen) {
        throw Error(ErrorCode::malformed_path, "path contains more than one jump");
      }
      jump_seen = true;
      start = aux->jump_targets.at(*mv.model_transition);
      continue;
    }
    AlignmentMove move;
    move.type = mv.type;
    move.log = mv.log_label;
    if (mv.model_transition) {
      move.model_transition = model.transition_name(*mv.model_transition);
      model_fires.push_back(*mv.model_transition);
    }
    out.moves.push_back(std::move(move));
  }
  if (aux && !jump_seen) {
    throw Error(ErrorCode::malformed_path, "auxiliary search finished without a jump");
  }

  out.cost = 0;
  for (const auto& move : out.moves) out.cost += costs.of(move.type);

  out.start_marking = to_named_marking(model, start);
  Marking end = start;
  for (TransIdx t : model_fires) end = model.fire(end, t);
  out.end_marking = to_named_marking(model, end);
  return out;
}

namespace {

double ms_since(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - from)
      .count();
}

// Complete and prefix alignments run on the model itself; no marking
// generation, no auxiliary layer.
Alignment align_anchored(const PetriNet& model, const Trace& trace, TraceKind kind,
                         const AlignConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  PetriNet trace_net = build_trace_net(trace);
  SynchronousProduct spn = build_synchronous_product(model, trace_net);
  SearchGoal goal =
      kind == TraceKind::complete ? SearchGoal::final_marking : SearchGoal::trace_exhausted;
  SearchResult found = shortest_path(spn, goal, config.costs, std::nullopt, config.state_cap);
  Alignment out = postprocess(spn, found, nullptr, model, kind, config.costs);
  out.stats.expanded = found.expanded;
  out.stats.queued = found.queued;
  out.stats.total_ms = ms_since(t0);
  return out;
}

Alignment align_fragment(const PetriNet& model, const RelevantMarkings& rm, double marking_ms,
                         const Trace& trace, TraceKind kind, const AlignConfig& config,
                         std::chrono::steady_clock::time_point t0) {
  AuxiliaryNet aux = build_auxiliary_net(model, rm);
  PetriNet trace_net = build_trace_net(trace);
  SynchronousProduct spn = build_synchronous_product(aux.net, trace_net);
  SearchGoal goal =
      kind == TraceKind::postfix ? SearchGoal::final_marking : SearchGoal::trace_exhausted;
  // The start place must be drained even for the infix goal, otherwise a
  // pure log-move path could finish without choosing a start marking.
  std::optional<PlaceIdx> must_be_empty;
  if (goal == SearchGoal::trace_exhausted) {
    must_be_empty = static_cast<PlaceIdx>(aux.start_place + spn.trace_place_count);
  }
  SearchResult found = shortest_path(spn, goal, config.costs, must_be_empty, config.state_cap);
  Alignment out = postprocess(spn, found, &aux, model, kind, config.costs);
  out.kind = kind;
  out.stats.expanded = found.expanded;
  out.stats.queued = found.queued;
  out.stats.marking_ms = marking_ms;
  out.stats.total_ms = ms_since(t0);
  return out;
}

}  // namespace

Alignment align(const PetriNet& model, const Trace& trace, TraceKind kind, MarkingMethod method,
                const AlignConfig& config) {
  if (kind == TraceKind::complete || kind == TraceKind::prefix) {
    return align_anchored(model, trace, kind, config);
  }
  if (method == MarkingMethod::advanced) {
    throw Error(ErrorCode::invalid_argument,
                "the advanced marking method needs a process tree model");
  }
  auto t0 = std::chrono::steady_clock::now();
  RelevantMarkings rm = method == MarkingMethod::baseline
                            ? baseline_markings(model, config.state_cap)
                            : filtered_markings(model, trace, config.state_cap);
  double marking_ms = ms_since(t0);
  return align_fragment(model, rm, marking_ms, trace, kind, config, t0);
}

TreeAlignResult align_tree_detailed(const ProcessTree& tree, const TreeNetBinding& binding,
                                    const Trace& trace, TraceKind kind, MarkingMethod method,
                                    const AlignConfig& config) {
  TreeAlignResult result;
  if (kind == TraceKind::complete || kind == TraceKind::prefix) {
    result.alignment = align_anchored(binding.net, trace, kind, config);
    return result;
  }
  if (method != MarkingMethod::advanced) {
    result.alignment = align(binding.net, trace, kind, method, config);
    return result;
  }

  auto t0 = std::chrono::steady_clock::now();
  const ProcessTree* search_tree = &tree;
  const TreeNetBinding* search_binding = &binding;
  if (kind == TraceKind::infix && config.restrict_submodel) {
    ProcessTree sub = restrict_to_submodel(tree, trace.activities);
    if (sub.node_count() < tree.node_count()) {
      result.restricted_tree = std::move(sub);
      result.restricted = to_wfnet(*result.restricted_tree);
      search_tree = &*result.restricted_tree;
      search_binding = &*result.restricted;
    }
  }
  RelevantMarkings rm = advanced_markings(*search_tree, *search_binding, trace);
  double marking_ms = ms_since(t0);
  result.alignment = align_fragment(search_binding->net, rm, marking_ms, trace, kind, config, t0);
  return result;
}

Alignment align(const ProcessTree& tree, const TreeNetBinding& binding, const Trace& trace,
                TraceKind kind, MarkingMethod method, const AlignConfig& config) {
  return align_tree_detailed(tree, binding, trace, kind, method, config).alignment;
}

}  // namespace fragalign
