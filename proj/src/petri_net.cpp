#include "fragalign/petri_net.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "fragalign/errors.hpp"

namespace fragalign {

PlaceIdx PetriNet::add_place(std::string name) {
  if (place_index_.count(name)) {
    throw Error(ErrorCode::invalid_argument, "duplicate place name: " + name);
  }
  PlaceIdx idx = static_cast<PlaceIdx>(place_names_.size());
  place_index_.emplace(name, idx);
  place_names_.push_back(std::move(name));
  consumers_.emplace_back();
  producers_.emplace_back();
  return idx;
}

TransIdx PetriNet::add_transition(std::string name, std::optional<std::string> label) {
  if (trans_index_.count(name)) {
    throw Error(ErrorCode::invalid_argument, "duplicate transition name: " + name);
  }
  TransIdx idx = static_cast<TransIdx>(trans_names_.size());
  trans_index_.emplace(name, idx);
  trans_names_.push_back(std::move(name));
  trans_labels_.push_back(std::move(label));
  pre_.emplace_back();
  post_.emplace_back();
  no_input_.push_back(idx);
  return idx;
}

void PetriNet::add_arc_pt(PlaceIdx p, TransIdx t) {
  if (p >= place_count() || t >= transition_count()) {
    throw Error(ErrorCode::invalid_argument, "arc endpoint out of range");
  }
  auto& pre = pre_[t];
  auto it = std::lower_bound(pre.begin(), pre.end(), p);
  if (it != pre.end() && *it == p) return;
  if (pre.empty()) {
    no_input_.erase(std::find(no_input_.begin(), no_input_.end(), t));
  }
  pre.insert(it, p);
  consumers_[p].push_back(t);
}

void PetriNet::add_arc_tp(TransIdx t, PlaceIdx p) {
  if (p >= place_count() || t >= transition_count()) {
    throw Error(ErrorCode::invalid_argument, "arc endpoint out of range");
  }
  auto& post = post_[t];
  auto it = std::lower_bound(post.begin(), post.end(), p);
  if (it != post.end() && *it == p) return;
  post.insert(it, p);
  producers_[p].push_back(t);
}

std::optional<PlaceIdx> PetriNet::find_place(std::string_view name) const {
  auto it = place_index_.find(std::string(name));
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TransIdx> PetriNet::find_transition(std::string_view name) const {
  auto it = trans_index_.find(std::string(name));
  if (it == trans_index_.end()) return std::nullopt;
  return it->second;
}

Marking PetriNet::marking_of(std::initializer_list<std::string_view> names) const {
  Marking m;
  for (auto name : names) {
    auto p = find_place(name);
    if (!p) throw Error(ErrorCode::unknown_node, "unknown place: " + std::string(name));
    m.add(*p);
  }
  return m;
}

Marking PetriNet::marking_of(const std::vector<std::string>& names) const {
  Marking m;
  for (const auto& name : names) {
    auto p = find_place(name);
    if (!p) throw Error(ErrorCode::unknown_node, "unknown place: " + name);
    m.add(*p);
  }
  return m;
}

std::string PetriNet::marking_to_string(const Marking& m) const {
  std::string out = "[";
  bool first = true;
  for (const auto& [id, count] : m.entries()) {
    if (!first) out += ",";
    first = false;
    out += place_name(id);
    if (count > 1) {
      out += "^";
      out += std::to_string(count);
    }
  }
  out += "]";
  return out;
}

bool PetriNet::is_enabled(const Marking& m, TransIdx t) const {
  for (PlaceIdx p : pre_.at(t)) {
    if (m.count(p) == 0) return false;
  }
  return true;
}

std::vector<TransIdx> PetriNet::enabled_transitions(const Marking& m) const {
  std::vector<TransIdx> candidates = no_input_;
  for (const auto& [p, count] : m.entries()) {
    const auto& cons = consumers_[p];
    candidates.insert(candidates.end(), cons.begin(), cons.end());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<TransIdx> out;
  for (TransIdx t : candidates) {
    if (is_enabled(m, t)) out.push_back(t);
  }
  return out;
}

Marking PetriNet::fire(const Marking& m, TransIdx t) const {
  if (!is_enabled(m, t)) {
    throw Error(ErrorCode::not_enabled,
                "transition not enabled: " + transition_name(t) + " at " + marking_to_string(m));
  }
  Marking out = m;
  for (PlaceIdx p : pre_.at(t)) out.remove(p);
  for (PlaceIdx p : post_.at(t)) out.add(p);
  return out;
}

ReachabilityGraph build_reachability_graph(const PetriNet& net, std::size_t cap) {
  ReachabilityGraph g;
  std::deque<uint32_t> queue;
  g.markings.push_back(net.initial_marking);
  g.index.emplace(net.initial_marking, 0);
  g.edges.emplace_back();
  queue.push_back(0);
  while (!queue.empty()) {
    uint32_t cur = queue.front();
    queue.pop_front();
    Marking m = g.markings[cur];  // copy: g.markings may reallocate below
    for (TransIdx t : net.enabled_transitions(m)) {
      Marking succ = net.fire(m, t);
      auto [it, inserted] = g.index.try_emplace(succ, static_cast<uint32_t>(g.markings.size()));
      if (inserted) {
        if (g.markings.size() >= cap) {
          throw Error(ErrorCode::state_cap_exceeded,
                      "reachable markings exceed cap of " + std::to_string(cap));
        }
        g.markings.push_back(succ);
        g.edges.emplace_back();
        queue.push_back(it->second);
      }
      g.edges[cur].emplace_back(t, it->second);
    }
  }
  return g;
}

MarkingSet reachable_markings(const PetriNet& net, std::size_t cap) {
  ReachabilityGraph g = build_reachability_graph(net, cap);
  MarkingSet out;
  for (auto& m : g.markings) out.insert(std::move(m));
  return out;
}

namespace {

// Node-level connectivity on the bipartite arc graph, ignoring tokens.
// Nodes: places [0, P), transitions [P, P+T).
std::vector<char> graph_reach(const PetriNet& net, std::size_t start, bool forward) {
  const std::size_t P = net.place_count();
  const std::size_t T = net.transition_count();
  std::vector<char> seen(P + T, 0);
  std::deque<std::size_t> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    std::size_t node = queue.front();
    queue.pop_front();
    auto push = [&](std::size_t next) {
      if (!seen[next]) {
        seen[next] = 1;
        queue.push_back(next);
      }
    };
    if (node < P) {
      PlaceIdx p = static_cast<PlaceIdx>(node);
      for (TransIdx t : forward ? net.consumers(p) : net.producers(p)) push(P + t);
    } else {
      TransIdx t = static_cast<TransIdx>(node - P);
      for (PlaceIdx p : forward ? net.postset(t) : net.preset(t)) push(p);
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate_workflow_net(const PetriNet& net, std::size_t cap) {
  ValidationReport report;
  auto issue = [&report](std::string code, std::string detail) {
    report.issues.push_back({std::move(code), std::move(detail)});
  };

  if (net.place_count() == 0) {
    issue("empty-net", "net has no places");
    return report;
  }

  std::vector<PlaceIdx> sources, sinks;
  for (PlaceIdx p = 0; p < net.place_count(); p++) {
    if (net.producers(p).empty()) sources.push_back(p);
    if (net.consumers(p).empty()) sinks.push_back(p);
  }
  auto names = [&net](const std::vector<PlaceIdx>& ps) {
    std::string s;
    for (PlaceIdx p : ps) {
      if (!s.empty()) s += ",";
      s += net.place_name(p);
    }
    return s;
  };
  if (sources.empty()) issue("no-source", "no place with empty preset");
  if (sources.size() > 1) issue("multiple-sources", names(sources));
  if (sinks.empty()) issue("no-sink", "no place with empty postset");
  if (sinks.size() > 1) issue("multiple-sinks", names(sinks));

  if (sources.size() == 1 && net.initial_marking != Marking::single(sources[0])) {
    issue("initial-marking-mismatch",
          "expected [" + net.place_name(sources[0]) + "], have " +
              net.marking_to_string(net.initial_marking));
  }
  if (sinks.size() == 1 && net.final_marking != Marking::single(sinks[0])) {
    issue("final-marking-mismatch",
          "expected [" + net.place_name(sinks[0]) + "], have " +
              net.marking_to_string(net.final_marking));
  }

  if (sources.size() == 1 && sinks.size() == 1) {
    const std::size_t P = net.place_count();
    auto fwd = graph_reach(net, sources[0], true);
    auto bwd = graph_reach(net, sinks[0], false);
    for (PlaceIdx p = 0; p < P; p++) {
      if (!fwd[p] || !bwd[p]) issue("not-on-path", "place " + net.place_name(p));
    }
    for (TransIdx t = 0; t < net.transition_count(); t++) {
      if (!fwd[P + t] || !bwd[P + t]) issue("not-on-path", "transition " + net.transition_name(t));
    }
  }

  try {
    ReachabilityGraph g = build_reachability_graph(net, cap);
    auto fin = g.index.find(net.final_marking);
    if (fin == g.index.end()) {
      issue("final-unreachable", "final marking " + net.marking_to_string(net.final_marking) +
                                     " is not reachable");
    } else {
      // Reverse closure from the final marking; anything outside it is stuck.
      std::vector<std::vector<uint32_t>> reverse(g.markings.size());
      for (uint32_t i = 0; i < g.edges.size(); i++) {
        for (const auto& [t, j] : g.edges[i]) reverse[j].push_back(i);
      }
      std::vector<char> can_finish(g.markings.size(), 0);
      std::deque<uint32_t> queue{fin->second};
      can_finish[fin->second] = 1;
      while (!queue.empty()) {
        uint32_t cur = queue.front();
        queue.pop_front();
        for (uint32_t prev : reverse[cur]) {
          if (!can_finish[prev]) {
            can_finish[prev] = 1;
            queue.push_back(prev);
          }
        }
      }
      for (uint32_t i = 0; i < g.markings.size(); i++) {
        if (!can_finish[i]) {
          issue("cannot-complete", "no path from " + net.marking_to_string(g.markings[i]) +
                                       " to the final marking");
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::state_cap_exceeded) throw;
    issue("state-cap-exceeded", "completion check skipped: " + std::string(e.what()));
  }

  return report;
}

std::string net_to_dot(const PetriNet& net) {
  std::ostringstream out;
  out << "digraph net {\n  rankdir=LR;\n";
  for (PlaceIdx p = 0; p < net.place_count(); p++) {
    out << "  \"p_" << p << "\" [shape=circle, label=\"" << net.place_name(p) << "\"";
    uint32_t tokens = net.initial_marking.count(p);
    if (tokens > 0) out << ", xlabel=\"" << tokens << "\"";
    out << "];\n";
  }
  for (TransIdx t = 0; t < net.transition_count(); t++) {
    out << "  \"t_" << t << "\" [shape=box, label=\"";
    if (net.is_silent(t)) {
      out << net.transition_name(t) << "\", style=filled, fillcolor=black, fontcolor=white";
    } else {
      out << net.transition_name(t) << "\\n" << *net.label(t) << "\"";
    }
    out << "];\n";
  }
  for (TransIdx t = 0; t < net.transition_count(); t++) {
    for (PlaceIdx p : net.preset(t)) out << "  \"p_" << p << "\" -> \"t_" << t << "\";\n";
    for (PlaceIdx p : net.postset(t)) out << "  \"t_" << t << "\" -> \"p_" << p << "\";\n";
  }
  out << "}\n";
  return out.str();
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_enabled: return "not-enabled";
    case ErrorCode::state_cap_exceeded: return "state-cap-exceeded";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::arity_error: return "arity-error";
    case ErrorCode::unknown_node: return "unknown-node";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::xml_error: return "xml-error";
    case ErrorCode::missing_column: return "missing-column";
    case ErrorCode::empty_log: return "empty-log";
    case ErrorCode::no_matching_leaf: return "no-matching-leaf";
    case ErrorCode::unsupported_marking: return "unsupported-marking";
    case ErrorCode::malformed_path: return "malformed-path";
    case ErrorCode::no_goal_reachable: return "no-goal-reachable";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_model: return "invalid-model";
  }
  return "unknown";
}

}  // namespace fragalign
