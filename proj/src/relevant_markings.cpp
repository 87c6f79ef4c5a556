#include "fragalign/relevant_markings.hpp"

#include <cassert>

#include "fragalign/errors.hpp"

namespace fragalign {

const char* marking_method_name(MarkingMethod method) {
  switch (method) {
    case MarkingMethod::baseline: return "baseline";
    case MarkingMethod::filtered: return "filtered";
    case MarkingMethod::advanced: return "advanced";
  }
  return "unknown";
}

MarkingMethod parse_marking_method(const std::string& name) {
  if (name == "baseline") return MarkingMethod::baseline;
  if (name == "filtered") return MarkingMethod::filtered;
  if (name == "advanced") return MarkingMethod::advanced;
  throw Error(ErrorCode::invalid_argument, "unknown marking method: " + name);
}

RelevantMarkings baseline_markings(const PetriNet& net, std::size_t cap) {
  return {reachable_markings(net, cap), MarkingMethod::baseline, &net};
}

RelevantMarkings filtered_markings(const PetriNet& net, const Trace& trace, std::size_t cap) {
  std::set<std::string> activities(trace.activities.begin(), trace.activities.end());
  MarkingSet kept;
  for (const Marking& m : reachable_markings(net, cap)) {
    for (TransIdx t : net.enabled_transitions(m)) {
      if (!net.is_silent(t) && activities.count(*net.label(t))) {
        kept.insert(m);
        break;
      }
    }
  }
  kept.insert(net.final_marking);
  return {std::move(kept), MarkingMethod::filtered, &net};
}

namespace {

Marking transition_preset(const PetriNet& net, TransIdx t) {
  Marking m;
  for (PlaceIdx p : net.preset(t)) m.add(p);
  return m;
}

Marking transition_postset(const PetriNet& net, TransIdx t) {
  Marking m;
  for (PlaceIdx p : net.postset(t)) m.add(p);
  return m;
}

}  // namespace

MarkingSet tdmg(const ProcessTree& tree, uint32_t n, const TreeNetBinding& binding,
                const std::set<std::string>& activities, bool add_final) {
  const TreeNode& nd = tree.node(n);
  if (nd.is_leaf()) {
    TransIdx t = binding.leaf_to_transition.at(n);
    MarkingSet out;
    if (nd.label && activities.count(*nd.label)) {
      out.insert(transition_preset(binding.net, t));
    }
    if (add_final) out.insert(transition_postset(binding.net, t));
    return out;
  }
  const auto& cs = nd.children;
  MarkingSet out;
  switch (*nd.op) {
    case TreeOp::sequence:
      // Only the last child's end is the block's end.
      for (std::size_t i = 0; i < cs.size(); i++) {
        MarkingSet child = tdmg(tree, cs[i], binding, activities, add_final && i + 1 == cs.size());
        out.insert(child.begin(), child.end());
      }
      break;
    case TreeOp::parallel: {
      // All branches run, so local markings combine across every child; each
      // child contributes its own end markings to make the product total.
      out = tdmg(tree, cs[0], binding, activities, true);
      for (std::size_t i = 1; i < cs.size(); i++) {
        out = marking_set_product(out, tdmg(tree, cs[i], binding, activities, true));
      }
      break;
    }
    case TreeOp::exclusive:
    case TreeOp::loop:
      // One branch at a time. The first child carries the block's end: for a
      // choice any branch end would do and one is enough, for a loop leaving
      // is only possible from the do-part's end.
      for (std::size_t i = 0; i < cs.size(); i++) {
        MarkingSet child = tdmg(tree, cs[i], binding, activities, add_final && i == 0);
        out.insert(child.begin(), child.end());
      }
      break;
  }
  return out;
}

MarkingSet bumg(const ProcessTree& tree, uint32_t n, int64_t came_from,
                const TreeNetBinding& binding, MarkingSet acc,
                const std::set<std::string>& activities) {
  const TreeNode& nd = tree.node(n);
  if (nd.is_leaf()) {
    assert(nd.label && activities.count(*nd.label));
    acc = {transition_preset(binding.net, binding.leaf_to_transition.at(n))};
  } else if (*nd.op == TreeOp::parallel) {
    // Complete the partial markings across the sibling branches.
    assert(came_from >= 0);
    for (uint32_t c : nd.children) {
      if (static_cast<int64_t>(c) == came_from) continue;
      acc = marking_set_product(acc, tdmg(tree, c, binding, activities, true));
    }
  }
  if (n == tree.root()) return acc;
  return bumg(tree, *tree.parent(n), static_cast<int64_t>(n), binding, std::move(acc), activities);
}

RelevantMarkings advanced_markings(const ProcessTree& tree, const TreeNetBinding& binding,
                                   const Trace& trace) {
  std::set<std::string> activities(trace.activities.begin(), trace.activities.end());
  MarkingSet out;
  for (uint32_t leaf : tree.leaves()) {
    const TreeNode& nd = tree.node(leaf);
    if (!nd.label || !activities.count(*nd.label)) continue;
    MarkingSet from_leaf = bumg(tree, leaf, -1, binding, {}, activities);
    out.insert(from_leaf.begin(), from_leaf.end());
  }
  out.insert(binding.net.final_marking);
  return {std::move(out), MarkingMethod::advanced, &binding.net};
}

}  // namespace fragalign
