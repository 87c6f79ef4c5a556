#include "fragalign/oracle.hpp"

#include <deque>
#include <functional>
#include <optional>

#include "fragalign/errors.hpp"

namespace fragalign {

namespace {

// State id = marking index * (trace length + 1) + events consumed.
class LayeredCostSearch {
public:
  LayeredCostSearch(const PetriNet& net, const Trace& trace, std::size_t cap)
      : net_(net), graph_(build_reachability_graph(net, cap)), trace_(trace.activities) {}

  int64_t run(bool anchored, bool end_at_final) {
    const std::size_t width = trace_.size() + 1;
    std::vector<char> seen(graph_.markings.size() * width, 0);

    std::vector<std::size_t> layer;
    if (anchored) {
      layer.push_back(state(graph_.index.at(net_.initial_marking), 0));
    } else {
      for (std::size_t m = 0; m < graph_.markings.size(); m++) layer.push_back(state(m, 0));
    }
    for (std::size_t s : layer) seen[s] = 1;

    std::optional<std::size_t> final_idx;
    if (auto it = graph_.index.find(net_.final_marking); it != graph_.index.end()) {
      final_idx = it->second;
    }

    int64_t cost = 0;
    while (!layer.empty()) {
      // Close the layer under free moves: synchronous steps and silent
      // transitions cost nothing.
      std::deque<std::size_t> queue(layer.begin(), layer.end());
      std::vector<std::size_t> closed;
      while (!queue.empty()) {
        std::size_t s = queue.front();
        queue.pop_front();
        closed.push_back(s);
        std::size_t m = s / width;
        std::size_t pos = s % width;
        for (const auto& [t, succ] : graph_.edges[m]) {
          if (net_.is_silent(t)) {
            std::size_t next = state(succ, pos);
            if (!seen[next]) {
              seen[next] = 1;
              queue.push_back(next);
            }
          } else if (pos < trace_.size() && *net_.label(t) == trace_[pos]) {
            std::size_t next = state(succ, pos + 1);
            if (!seen[next]) {
              seen[next] = 1;
              queue.push_back(next);
            }
          }
        }
      }

      for (std::size_t s : closed) {
        std::size_t m = s / width;
        std::size_t pos = s % width;
        if (pos == trace_.size() && (!end_at_final || (final_idx && m == *final_idx))) {
          return cost;
        }
      }

      // Paid moves open the next layer: skip a trace event or fire a
      // visible transition without consuming one.
      std::vector<std::size_t> next_layer;
      for (std::size_t s : closed) {
        std::size_t m = s / width;
        std::size_t pos = s % width;
        if (pos < trace_.size()) {
          std::size_t next = state(m, pos + 1);
          if (!seen[next]) {
            seen[next] = 1;
            next_layer.push_back(next);
          }
        }
        for (const auto& [t, succ] : graph_.edges[m]) {
          if (net_.is_silent(t)) continue;
          std::size_t next = state(succ, pos);
          if (!seen[next]) {
            seen[next] = 1;
            next_layer.push_back(next);
          }
        }
      }
      layer = std::move(next_layer);
      cost++;
    }
    throw Error(ErrorCode::no_goal_reachable, "no alignment exists for the trace");
  }

private:
  std::size_t state(std::size_t marking, std::size_t pos) const {
    return marking * (trace_.size() + 1) + pos;
  }

  const PetriNet& net_;
  ReachabilityGraph graph_;
  std::vector<std::string> trace_;
};

}  // namespace

int64_t brute_force_fragment_cost(const PetriNet& net, const Trace& trace, TraceKind kind,
                                  std::size_t cap) {
  if (kind != TraceKind::infix && kind != TraceKind::postfix) {
    throw Error(ErrorCode::invalid_argument, "fragment cost is defined for infix and postfix");
  }
  LayeredCostSearch search(net, trace, cap);
  return search.run(false, kind == TraceKind::postfix);
}

int64_t brute_force_complete_cost(const PetriNet& net, const Trace& trace, std::size_t cap) {
  LayeredCostSearch search(net, trace, cap);
  return search.run(true, true);
}

std::set<std::vector<std::string>> enumerate_model_fragments(const PetriNet& net,
                                                             std::size_t max_len,
                                                             std::size_t cap) {
  ReachabilityGraph graph = build_reachability_graph(net, cap);

  // Visible step relation with silent closure in front: from marking m one
  // can observe label a at marking m'' if m ->tau* m' ->t(a) m''.
  std::vector<std::vector<std::pair<std::string, uint32_t>>> visible(graph.markings.size());
  for (uint32_t m = 0; m < graph.markings.size(); m++) {
    // Silent closure of m.
    std::vector<uint32_t> closure{m};
    std::set<uint32_t> seen{m};
    for (std::size_t i = 0; i < closure.size(); i++) {
      for (const auto& [t, succ] : graph.edges[closure[i]]) {
        if (net.is_silent(t) && seen.insert(succ).second) closure.push_back(succ);
      }
    }
    for (uint32_t c : closure) {
      for (const auto& [t, succ] : graph.edges[c]) {
        if (!net.is_silent(t)) visible[m].emplace_back(*net.label(t), succ);
      }
    }
  }

  std::set<std::vector<std::string>> out;
  out.emplace();  // the empty window; insert({}) would pick the list overload
  // Windows can start at any reachable marking, so grow sequences from all
  // of them.
  std::vector<std::string> prefix;
  std::function<void(uint32_t)> grow = [&](uint32_t m) {
    if (prefix.size() >= max_len) return;
    for (const auto& [label, succ] : visible[m]) {
      prefix.push_back(label);
      out.insert(prefix);
      grow(succ);
      prefix.pop_back();
    }
  };
  for (uint32_t m = 0; m < graph.markings.size(); m++) grow(m);
  return out;
}

}  // namespace fragalign
