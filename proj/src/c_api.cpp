#include "fragalign.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "fragalign/alignment.hpp"
#include "fragalign/errors.hpp"
#include "fragalign/model_io.hpp"
#include "fragalign/oracle.hpp"
#include "fragalign/render_json.hpp"

using namespace fragalign;

struct fa_model {
  std::optional<PetriNet> net;  // pnml models
  std::optional<ProcessTree> tree;
  std::optional<TreeNetBinding> binding;

  const PetriNet& model_net() const { return net ? *net : binding->net; }
};

struct fa_log {
  EventLog log;
};

struct fa_traces {
  std::vector<Trace> traces;
};

struct fa_alignment {
  Alignment alignment;
};

namespace {

thread_local std::string g_last_error;

fa_status fail(fa_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

fa_status from_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::io_error:
      return fail(FA_ERROR_IO, e.what());
    case ErrorCode::xml_error:
    case ErrorCode::parse_error:
    case ErrorCode::arity_error:
    case ErrorCode::missing_column:
      return fail(FA_ERROR_PARSE, e.what());
    case ErrorCode::state_cap_exceeded:
      return fail(FA_ERROR_STATE_CAP, e.what());
    case ErrorCode::no_goal_reachable:
      return fail(FA_ERROR_NO_RESULT, e.what());
    case ErrorCode::invalid_model:
      return fail(FA_ERROR_INVALID_MODEL, e.what());
    case ErrorCode::invalid_argument:
    case ErrorCode::unknown_node:
    case ErrorCode::empty_log:
    case ErrorCode::no_matching_leaf:
    case ErrorCode::unsupported_marking:
      return fail(FA_ERROR_BAD_ARGUMENT, e.what());
    default:
      return fail(FA_ERROR_INTERNAL, e.what());
  }
}

template <typename Fn>
fa_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return fail(FA_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(FA_ERROR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string detect_format(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == "pnml") return "pnml";
  if (ext == "ptml") return "ptml";
  if (ext == "ptree" || ext == "tree" || ext == "txt") return "ptree";
  throw Error(ErrorCode::invalid_argument, "cannot infer model format from " + path);
}

std::size_t effective_cap(uint64_t state_cap) {
  return state_cap == 0 ? default_state_cap : static_cast<std::size_t>(state_cap);
}

}  // namespace

extern "C" {

const char* fa_version(void) { return "0.1.0"; }

const char* fa_last_error(void) { return g_last_error.c_str(); }

void fa_string_free(char* s) { std::free(s); }

fa_status fa_model_load(const char* path, const char* format, fa_model** out) {
  return guarded([&]() -> fa_status {
    if (!path || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    std::string fmt = format ? format : detect_format(path);
    auto model = std::make_unique<fa_model>();
    if (fmt == "pnml") {
      model->net = load_pnml(path);
    } else if (fmt == "ptml") {
      model->tree = load_ptml(path);
      model->binding = to_wfnet(*model->tree);
    } else if (fmt == "ptree") {
      model->tree = load_tree_text(path);
      model->binding = to_wfnet(*model->tree);
    } else {
      return fail(FA_ERROR_BAD_ARGUMENT, "unknown model format: " + fmt);
    }
    *out = model.release();
    return FA_OK;
  });
}

fa_status fa_model_parse_tree(const char* text, fa_model** out) {
  return guarded([&]() -> fa_status {
    if (!text || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    auto model = std::make_unique<fa_model>();
    model->tree = ProcessTree::parse(text);
    model->binding = to_wfnet(*model->tree);
    *out = model.release();
    return FA_OK;
  });
}

void fa_model_free(fa_model* model) { delete model; }

int fa_model_is_tree(const fa_model* model) { return model && model->tree ? 1 : 0; }

fa_status fa_model_validate(const fa_model* model, int* violation_count, char** report_json) {
  return guarded([&]() -> fa_status {
    if (!model) return fail(FA_ERROR_BAD_ARGUMENT, "null model");
    ValidationReport report = validate_workflow_net(model->model_net());
    if (violation_count) *violation_count = static_cast<int>(report.issues.size());
    if (report_json) *report_json = copy_string(validation_report_to_json(report));
    return FA_OK;
  });
}

fa_status fa_model_to_dot(const fa_model* model, char** dot) {
  return guarded([&]() -> fa_status {
    if (!model || !dot) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *dot = copy_string(net_to_dot(model->model_net()));
    return FA_OK;
  });
}

fa_status fa_model_aux_dot(const fa_model* model, const fa_traces* traces, size_t index,
                           const char* method, int annotate_filtered, uint64_t state_cap,
                           char** dot) {
  return guarded([&]() -> fa_status {
    if (!model || !traces || !method || !dot) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    if (index >= traces->traces.size()) return fail(FA_ERROR_BAD_ARGUMENT, "trace index out of range");
    const Trace& trace = traces->traces[index];
    const PetriNet& net = model->model_net();
    std::size_t cap = effective_cap(state_cap);
    MarkingMethod mm = parse_marking_method(method);

    if (annotate_filtered) {
      // Full jump layer, annotated with what the method would keep.
      RelevantMarkings all = baseline_markings(net, cap);
      AuxiliaryNet aux = build_auxiliary_net(net, all);
      MarkingSet kept;
      if (mm == MarkingMethod::baseline) {
        kept = all.markings;
      } else if (mm == MarkingMethod::filtered) {
        kept = filtered_markings(net, trace, cap).markings;
      } else {
        if (!model->tree) return fail(FA_ERROR_BAD_ARGUMENT, "advanced needs a process tree");
        kept = advanced_markings(*model->tree, *model->binding, trace).markings;
      }
      *dot = copy_string(auxiliary_net_to_dot(aux, &kept));
      return FA_OK;
    }

    RelevantMarkings rm = [&]() {
      switch (mm) {
        case MarkingMethod::baseline:
          return baseline_markings(net, cap);
        case MarkingMethod::filtered:
          return filtered_markings(net, trace, cap);
        case MarkingMethod::advanced:
          if (!model->tree) throw Error(ErrorCode::invalid_argument, "advanced needs a process tree");
          return advanced_markings(*model->tree, *model->binding, trace);
      }
      throw Error(ErrorCode::invalid_argument, "unknown method");
    }();
    AuxiliaryNet aux = build_auxiliary_net(net, rm);
    *dot = copy_string(auxiliary_net_to_dot(aux));
    return FA_OK;
  });
}

fa_status fa_log_load_xes(const char* path, fa_log** out, size_t* skipped_events) {
  return guarded([&]() -> fa_status {
    if (!path || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    XesLoadResult result = load_xes(path);
    if (skipped_events) *skipped_events = result.skipped_events;
    *out = new fa_log{std::move(result.log)};
    return FA_OK;
  });
}

fa_status fa_log_load_csv(const char* path, const char* case_column, const char* activity_column,
                          const char* order_column, fa_log** out) {
  return guarded([&]() -> fa_status {
    if (!path || !case_column || !activity_column || !order_column || !out) {
      return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    }
    *out = new fa_log{load_csv(path, case_column, activity_column, order_column)};
    return FA_OK;
  });
}

fa_status fa_log_load_jsonl(const char* path, fa_log** out) {
  return guarded([&]() -> fa_status {
    if (!path || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *out = new fa_log{load_jsonl(path)};
    return FA_OK;
  });
}

void fa_log_free(fa_log* log) { delete log; }

size_t fa_log_trace_count(const fa_log* log) { return log ? log->log.traces.size() : 0; }

fa_status fa_log_sample_infixes(const fa_log* log, size_t n, size_t min_len, size_t max_len,
                                uint64_t seed, fa_traces** out) {
  return guarded([&]() -> fa_status {
    if (!log || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *out = new fa_traces{sample_infixes(log->log, n, min_len, max_len, seed)};
    return FA_OK;
  });
}

fa_status fa_log_sample_postfixes(const fa_log* log, size_t n, size_t min_len, uint64_t seed,
                                  fa_traces** out) {
  return guarded([&]() -> fa_status {
    if (!log || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *out = new fa_traces{sample_postfixes(log->log, n, min_len, seed)};
    return FA_OK;
  });
}

fa_status fa_log_complete_traces(const fa_log* log, fa_traces** out) {
  return guarded([&]() -> fa_status {
    if (!log || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *out = new fa_traces{log->log.traces};
    return FA_OK;
  });
}

fa_status fa_traces_create(const char* const* labels, size_t count, fa_traces** out) {
  return guarded([&]() -> fa_status {
    if (!out || (count > 0 && !labels)) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    Trace trace;
    for (size_t i = 0; i < count; i++) {
      if (!labels[i]) return fail(FA_ERROR_BAD_ARGUMENT, "null label");
      trace.activities.emplace_back(labels[i]);
    }
    *out = new fa_traces{{std::move(trace)}};
    return FA_OK;
  });
}

void fa_traces_free(fa_traces* traces) { delete traces; }

size_t fa_traces_count(const fa_traces* traces) { return traces ? traces->traces.size() : 0; }

size_t fa_trace_length(const fa_traces* traces, size_t index) {
  if (!traces || index >= traces->traces.size()) return 0;
  return traces->traces[index].activities.size();
}

const char* fa_trace_label(const fa_traces* traces, size_t index, size_t position) {
  if (!traces || index >= traces->traces.size()) return nullptr;
  const auto& activities = traces->traces[index].activities;
  if (position >= activities.size()) return nullptr;
  return activities[position].c_str();
}

fa_status fa_align(const fa_model* model, const fa_traces* traces, size_t index, const char* kind,
                   const char* method, uint64_t state_cap, fa_alignment** out) {
  return guarded([&]() -> fa_status {
    if (!model || !traces || !kind || !out) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    if (index >= traces->traces.size()) {
      return fail(FA_ERROR_BAD_ARGUMENT, "trace index out of range");
    }
    Trace trace = traces->traces[index];
    trace.kind = parse_trace_kind(kind);
    MarkingMethod mm = method ? parse_marking_method(method) : MarkingMethod::filtered;
    AlignConfig config;
    config.state_cap = effective_cap(state_cap);
    Alignment alignment =
        model->tree ? align(*model->tree, *model->binding, trace, trace.kind, mm, config)
                    : align(*model->net, trace, trace.kind, mm, config);
    *out = new fa_alignment{std::move(alignment)};
    return FA_OK;
  });
}

void fa_alignment_free(fa_alignment* alignment) { delete alignment; }

int64_t fa_alignment_cost(const fa_alignment* alignment) {
  return alignment ? alignment->alignment.cost : -1;
}

size_t fa_alignment_move_count(const fa_alignment* alignment) {
  return alignment ? alignment->alignment.moves.size() : 0;
}

uint64_t fa_alignment_expanded(const fa_alignment* alignment) {
  return alignment ? alignment->alignment.stats.expanded : 0;
}

uint64_t fa_alignment_queued(const fa_alignment* alignment) {
  return alignment ? alignment->alignment.stats.queued : 0;
}

double fa_alignment_total_ms(const fa_alignment* alignment) {
  return alignment ? alignment->alignment.stats.total_ms : 0;
}

double fa_alignment_marking_ms(const fa_alignment* alignment) {
  return alignment ? alignment->alignment.stats.marking_ms : 0;
}

fa_status fa_alignment_to_json(const fa_alignment* alignment, char** json) {
  return guarded([&]() -> fa_status {
    if (!alignment || !json) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *json = copy_string(alignment_to_json(alignment->alignment));
    return FA_OK;
  });
}

fa_status fa_alignment_to_table(const fa_alignment* alignment, char** table) {
  return guarded([&]() -> fa_status {
    if (!alignment || !table) return fail(FA_ERROR_BAD_ARGUMENT, "null argument");
    *table = copy_string(alignment_to_table(alignment->alignment));
    return FA_OK;
  });
}

}  // extern "C"
