#pragma once

#include <set>
#include <vector>

#include "fragalign/event_log.hpp"
#include "fragalign/petri_net.hpp"

namespace fragalign {

// Reference costs computed by layered breadth-first search over
// (model marking, trace position) pairs: free layers absorb synchronous and
// silent moves, paid layers add log and visible model moves one unit at a
// time. No priority queue, no auxiliary construction; deliberately
// independent of the alignment engine so the two can check each other.

// Minimal fragment alignment cost. kind must be infix or postfix; the
// search starts from every reachable marking at once.
int64_t brute_force_fragment_cost(const PetriNet& net, const Trace& trace, TraceKind kind,
                                  std::size_t cap = default_state_cap);

// Minimal complete alignment cost, anchored at the initial marking.
int64_t brute_force_complete_cost(const PetriNet& net, const Trace& trace,
                                  std::size_t cap = default_state_cap);

// Every label sequence of length <= max_len that some run of the net
// produces as a contiguous window (silent transitions skipped). Includes
// the empty sequence.
std::set<std::vector<std::string>> enumerate_model_fragments(const PetriNet& net,
                                                             std::size_t max_len,
                                                             std::size_t cap = default_state_cap);

}  // namespace fragalign
