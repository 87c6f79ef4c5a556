#pragma once

#include <map>

#include "fragalign/relevant_markings.hpp"

namespace fragalign {

// Original net plus a fresh start place and one silent jump transition per
// relevant marking. Places and transitions of the original keep their
// indices; the start place and the jumps are appended, so markings over the
// original net are valid here as well.
struct AuxiliaryNet {
  PetriNet net;
  PlaceIdx start_place;
  std::size_t original_transition_count;
  std::map<TransIdx, Marking> jump_targets;  // jump transition -> injected marking
};

// rm must be nonempty, computed over `net`, and all its markings must be
// plain sets (unit arcs cannot inject a place twice).
AuxiliaryNet build_auxiliary_net(const PetriNet& net, const RelevantMarkings& rm);

// DOT rendering with the jump layer highlighted. With `kept`, jumps whose
// target is in the set are drawn as kept and the others as filtered out;
// pass the filtered or advanced marking set to visualize what a method
// discards relative to this net's jump layer.
std::string auxiliary_net_to_dot(const AuxiliaryNet& aux, const MarkingSet* kept = nullptr);

}  // namespace fragalign
