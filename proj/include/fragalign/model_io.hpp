#pragma once

#include <string>

#include "fragalign/petri_net.hpp"
#include "fragalign/process_tree.hpp"

namespace fragalign {

// PNML place/transition subset. Transition labels come from <name><text>;
// a missing name or the text "tau"/"τ" makes the transition silent. The
// final marking is read from the <finalmarkings> tool element; without one,
// a unique sink place is used instead.
PetriNet load_pnml(const std::string& path);
PetriNet parse_pnml(const std::string& xml);

// ProM process-tree XML: sequence, xor, and, xorLoop nodes plus
// manualTask/automaticTask leaves, wired up by parentsNode edges. A
// three-child xorLoop is accepted when the exit child is silent.
ProcessTree load_ptml(const std::string& path);
ProcessTree parse_ptml(const std::string& xml);

// Process-tree text file (the ProcessTree::parse grammar, one expression).
ProcessTree load_tree_text(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace fragalign
