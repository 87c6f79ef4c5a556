#include "fragalign/auxiliary_net.hpp"

#include <sstream>

#include "fragalign/errors.hpp"

namespace fragalign {

AuxiliaryNet build_auxiliary_net(const PetriNet& net, const RelevantMarkings& rm) {
  if (rm.source_net != &net) {
    throw Error(ErrorCode::invalid_argument,
                "relevant markings were computed over a different net");
  }
  if (rm.markings.empty()) {
    throw Error(ErrorCode::invalid_argument, "relevant marking set is empty");
  }

  AuxiliaryNet aux;
  for (PlaceIdx p = 0; p < net.place_count(); p++) {
    aux.net.add_place(net.place_name(p));
  }
  for (TransIdx t = 0; t < net.transition_count(); t++) {
    aux.net.add_transition(net.transition_name(t), net.label(t));
    for (PlaceIdx p : net.preset(t)) aux.net.add_arc_pt(p, t);
    for (PlaceIdx p : net.postset(t)) aux.net.add_arc_tp(t, p);
  }
  aux.original_transition_count = net.transition_count();
  aux.start_place = aux.net.add_place("p0_prime");

  for (const Marking& m : rm.markings) {
    for (const auto& [p, count] : m.entries()) {
      if (count > 1) {
        throw Error(ErrorCode::unsupported_marking,
                    "marking " + net.marking_to_string(m) +
                        " puts more than one token on " + net.place_name(p));
      }
      if (p >= net.place_count()) {
        throw Error(ErrorCode::unsupported_marking, "marking references an unknown place");
      }
    }
    TransIdx jump = aux.net.add_transition("jump::" + net.marking_to_string(m), std::nullopt);
    aux.net.add_arc_pt(aux.start_place, jump);
    for (const auto& [p, count] : m.entries()) aux.net.add_arc_tp(jump, p);
    aux.jump_targets.emplace(jump, m);
  }

  aux.net.initial_marking = Marking::single(aux.start_place);
  aux.net.final_marking = net.final_marking;
  return aux;
}

std::string auxiliary_net_to_dot(const AuxiliaryNet& aux, const MarkingSet* kept) {
  const PetriNet& net = aux.net;
  std::ostringstream out;
  out << "digraph auxiliary {\n  rankdir=LR;\n";
  for (PlaceIdx p = 0; p < net.place_count(); p++) {
    out << "  \"p_" << p << "\" [shape=circle, label=\"" << net.place_name(p) << "\"";
    if (p == aux.start_place) out << ", style=bold";
    out << "];\n";
  }
  for (TransIdx t = 0; t < net.transition_count(); t++) {
    out << "  \"t_" << t << "\" [shape=box, label=\"";
    auto jump = aux.jump_targets.find(t);
    if (jump != aux.jump_targets.end()) {
      out << net.transition_name(t) << "\", style=dashed";
      if (kept) {
        bool keep = kept->count(jump->second) > 0;
        out << (keep ? ", color=blue, xlabel=\"kept\"" : ", color=red, xlabel=\"dropped\"");
      } else {
        out << ", color=blue";
      }
    } else if (net.is_silent(t)) {
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

}  // namespace fragalign
