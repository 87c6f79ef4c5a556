#include "fragalign/alignment.hpp"
#include "fragalign/errors.hpp"

namespace fragalign {

namespace {

bool marking_reachable_from(const PetriNet& net, const Marking& from, const Marking& target,
                            std::size_t cap) {
  PetriNet probe_view = net;  // cheap: nets are small, and we need a custom start
  probe_view.initial_marking = from;
  ReachabilityGraph g = build_reachability_graph(probe_view, cap);
  return g.index.count(target) > 0;
}

}  // namespace

ValidationReport validate_alignment(const Alignment& alignment, const PetriNet& model,
                                    const Trace& trace, std::size_t cap) {
  ValidationReport report;
  auto issue = [&report](std::string code, std::string detail) {
    report.issues.push_back({std::move(code), std::move(detail)});
  };

  // Move shapes: no empty move, sync moves carry matching labels, model-only
  // moves carry no activity, log-only moves carry no transition.
  std::vector<std::string> log_projection;
  std::vector<TransIdx> model_projection;
  for (std::size_t i = 0; i < alignment.moves.size(); i++) {
    const AlignmentMove& move = alignment.moves[i];
    std::string where = "move " + std::to_string(i + 1);
    if (!move.log && !move.model_transition) {
      issue("empty-move", where + " skips both sides");
      continue;
    }
    std::optional<TransIdx> t;
    if (move.model_transition) {
      t = model.find_transition(*move.model_transition);
      if (!t) {
        issue("unknown-transition", where + " fires " + *move.model_transition);
        continue;
      }
      model_projection.push_back(*t);
    }
    if (move.log) log_projection.push_back(*move.log);

    switch (move.type) {
      case MoveType::synchronous:
        if (!move.log || !t) {
          issue("bad-move", where + " is synchronous but one-sided");
        } else if (!model.label(*t) || *model.label(*t) != *move.log) {
          issue("label-mismatch", where + " pairs " + *move.log + " with " +
                                      *move.model_transition);
        }
        break;
      case MoveType::log:
        if (!move.log || t) issue("bad-move", where + " is not a pure log move");
        break;
      case MoveType::visible_model:
        if (move.log || !t) {
          issue("bad-move", where + " is not a pure model move");
        } else if (model.is_silent(*t)) {
          issue("bad-move", where + " fires a silent transition as visible");
        }
        break;
      case MoveType::invisible_model:
        if (move.log || !t) {
          issue("bad-move", where + " is not a pure model move");
        } else if (!model.is_silent(*t)) {
          issue("bad-move", where + " fires a labeled transition as invisible");
        }
        break;
    }
  }

  if (log_projection != trace.activities) {
    issue("log-projection", "the log moves do not spell the trace");
  }

  // Start and end per kind, then replay.
  Marking start, end;
  try {
    start = from_named_marking(model, alignment.start_marking);
    end = from_named_marking(model, alignment.end_marking);
  } catch (const Error& e) {
    issue("unknown-place", e.what());
    return report;
  }

  bool anchored_start = alignment.kind == TraceKind::complete || alignment.kind == TraceKind::prefix;
  if (anchored_start && start != model.initial_marking) {
    issue("start-marking", "expected the initial marking, have " + model.marking_to_string(start));
  }
  if (!anchored_start) {
    try {
      if (!marking_reachable_from(model, model.initial_marking, start, cap)) {
        issue("start-marking", model.marking_to_string(start) + " is not reachable");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::state_cap_exceeded) throw;
      issue("state-cap-exceeded", "start reachability not checked");
    }
  }

  Marking replayed = start;
  bool replay_ok = true;
  for (TransIdx t : model_projection) {
    if (!model.is_enabled(replayed, t)) {
      issue("not-fireable", "model projection blocks at " + model.transition_name(t) +
                                " from " + model.marking_to_string(replayed));
      replay_ok = false;
      break;
    }
    replayed = model.fire(replayed, t);
  }
  if (replay_ok) {
    if (replayed != end) {
      issue("end-marking", "recorded " + model.marking_to_string(end) + ", replay gives " +
                               model.marking_to_string(replayed));
    }
    bool must_end_final =
        alignment.kind == TraceKind::complete || alignment.kind == TraceKind::postfix;
    if (must_end_final && replayed != model.final_marking) {
      issue("end-marking", "expected the final marking, have " + model.marking_to_string(replayed));
    }
  }

  return report;
}

}  // namespace fragalign
