/* fragalign: trace-fragment alignments against workflow nets and process
 * trees. C interface of the shared library; every object is an opaque
 * handle, every call reports a status code, and details for the last
 * failure on this thread come from fa_last_error(). Strings handed out
 * through char** are malloc'd and released with fa_string_free(). */
#ifndef FRAGALIGN_H
#define FRAGALIGN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fa_status {
  FA_OK = 0,
  FA_ERROR_IO = 1,
  FA_ERROR_PARSE = 2,
  FA_ERROR_INVALID_MODEL = 3,
  FA_ERROR_BAD_ARGUMENT = 4,
  FA_ERROR_STATE_CAP = 5,
  FA_ERROR_NO_RESULT = 6,
  FA_ERROR_INTERNAL = 7
} fa_status;

typedef struct fa_model fa_model;
typedef struct fa_log fa_log;
typedef struct fa_traces fa_traces;
typedef struct fa_alignment fa_alignment;

const char* fa_version(void);
/* Message for the most recent failure on the calling thread. */
const char* fa_last_error(void);
void fa_string_free(char* s);

/* Models. format: "pnml", "ptml", "ptree" (tree text), or NULL to pick by
 * file extension. */
fa_status fa_model_load(const char* path, const char* format, fa_model** out);
fa_status fa_model_parse_tree(const char* text, fa_model** out);
void fa_model_free(fa_model* model);
int fa_model_is_tree(const fa_model* model);
/* Workflow-net checks. violation_count is set either way; report_json
 * (optional) gets {"valid": ..., "violations": [{code, detail}]}. */
fa_status fa_model_validate(const fa_model* model, int* violation_count, char** report_json);
fa_status fa_model_to_dot(const fa_model* model, char** dot);
/* Jump-layer rendering for one trace. method as in fa_align; with
 * annotate_filtered nonzero the baseline layer is drawn with the chosen
 * method's verdict on every jump. state_cap 0 means the default. */
fa_status fa_model_aux_dot(const fa_model* model, const fa_traces* traces, size_t index,
                           const char* method, int annotate_filtered, uint64_t state_cap,
                           char** dot);

/* Event logs. */
fa_status fa_log_load_xes(const char* path, fa_log** out, size_t* skipped_events);
fa_status fa_log_load_csv(const char* path, const char* case_column,
                          const char* activity_column, const char* order_column, fa_log** out);
fa_status fa_log_load_jsonl(const char* path, fa_log** out);
void fa_log_free(fa_log* log);
size_t fa_log_trace_count(const fa_log* log);

/* Trace collections. Sampling is deterministic in the seed. */
fa_status fa_log_sample_infixes(const fa_log* log, size_t n, size_t min_len, size_t max_len,
                                uint64_t seed, fa_traces** out);
fa_status fa_log_sample_postfixes(const fa_log* log, size_t n, size_t min_len, uint64_t seed,
                                  fa_traces** out);
fa_status fa_log_complete_traces(const fa_log* log, fa_traces** out);
fa_status fa_traces_create(const char* const* labels, size_t count, fa_traces** out);
void fa_traces_free(fa_traces* traces);
size_t fa_traces_count(const fa_traces* traces);
size_t fa_trace_length(const fa_traces* traces, size_t index);
/* Borrowed pointer, valid while the collection lives. */
const char* fa_trace_label(const fa_traces* traces, size_t index, size_t position);

/* Optimal alignment of one trace. kind: "complete", "prefix", "infix",
 * "postfix". method: "baseline", "filtered", "advanced" (trees only);
 * ignored for complete/prefix. state_cap 0 means the default (100000). */
fa_status fa_align(const fa_model* model, const fa_traces* traces, size_t index,
                   const char* kind, const char* method, uint64_t state_cap,
                   fa_alignment** out);
void fa_alignment_free(fa_alignment* alignment);
int64_t fa_alignment_cost(const fa_alignment* alignment);
size_t fa_alignment_move_count(const fa_alignment* alignment);
uint64_t fa_alignment_expanded(const fa_alignment* alignment);
uint64_t fa_alignment_queued(const fa_alignment* alignment);
double fa_alignment_total_ms(const fa_alignment* alignment);
double fa_alignment_marking_ms(const fa_alignment* alignment);
fa_status fa_alignment_to_json(const fa_alignment* alignment, char** json);
fa_status fa_alignment_to_table(const fa_alignment* alignment, char** table);

#ifdef __cplusplus
}
#endif

#endif /* FRAGALIGN_H */
