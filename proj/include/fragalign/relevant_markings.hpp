#pragma once

#include <set>
#include <string>

#include "fragalign/event_log.hpp"
#include "fragalign/petri_net.hpp"
#include "fragalign/process_tree.hpp"

namespace fragalign {

enum class MarkingMethod { baseline, filtered, advanced };

const char* marking_method_name(MarkingMethod method);
MarkingMethod parse_marking_method(const std::string& name);

struct RelevantMarkings {
  MarkingSet markings;
  MarkingMethod method;
  const PetriNet* source_net;  // net the markings are over, not owned
};

// Every reachable marking.
RelevantMarkings baseline_markings(const PetriNet& net, std::size_t cap = default_state_cap);

// Reachable markings that enable a transition labeled with some trace
// activity, plus the final marking.
RelevantMarkings filtered_markings(const PetriNet& net, const Trace& trace,
                                   std::size_t cap = default_state_cap);

// Tree-guided generation: for each leaf labeled with a trace activity, walk
// from the leaf to the root and complete the marking across parallel
// branches (bumg); sibling context comes from a top-down pass (tdmg). The
// final marking is always included. No state-space exploration happens.
RelevantMarkings advanced_markings(const ProcessTree& tree, const TreeNetBinding& binding,
                                   const Trace& trace);

// Bottom-up walk from leaf `n`. `came_from` is the child the walk arrived
// through, -1 at the start. Exposed for tests.
MarkingSet bumg(const ProcessTree& tree, uint32_t n, int64_t came_from,
                const TreeNetBinding& binding, MarkingSet acc, const std::set<std::string>& activities);

// Top-down generation for the subtree rooted at `n`: markings local to that
// block which enable a matching leaf, plus the block's final marking when
// `add_final` is set. Exposed for tests.
MarkingSet tdmg(const ProcessTree& tree, uint32_t n, const TreeNetBinding& binding,
                const std::set<std::string>& activities, bool add_final);

}  // namespace fragalign
