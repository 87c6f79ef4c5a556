// Command line front end. Talks to the engine exclusively through the C API
// in fragalign.h, the way any other binding would.
#include <CLI11.hpp>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fragalign.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;       // I/O, parse, usage, engine failures
constexpr int exit_invalid = 2;     // model failed validation
constexpr int exit_mismatch = 3;    // bench methods disagree on cost

struct ModelDeleter {
  void operator()(fa_model* m) const { fa_model_free(m); }
};
struct LogDeleter {
  void operator()(fa_log* l) const { fa_log_free(l); }
};
struct TracesDeleter {
  void operator()(fa_traces* t) const { fa_traces_free(t); }
};
struct AlignmentDeleter {
  void operator()(fa_alignment* a) const { fa_alignment_free(a); }
};

using ModelPtr = std::unique_ptr<fa_model, ModelDeleter>;
using LogPtr = std::unique_ptr<fa_log, LogDeleter>;
using TracesPtr = std::unique_ptr<fa_traces, TracesDeleter>;
using AlignmentPtr = std::unique_ptr<fa_alignment, AlignmentDeleter>;

struct OwnedString {
  char* value = nullptr;
  ~OwnedString() { fa_string_free(value); }
};

int report_failure(const std::string& context, fa_status status) {
  std::cerr << "error: " << context << ": " << fa_last_error() << "\n";
  return status == FA_ERROR_INVALID_MODEL ? exit_invalid : exit_error;
}

uint64_t state_cap_from_env() {
  const char* env = std::getenv("FRAGALIGN_STATE_CAP");
  if (!env || !*env) return 0;
  char* end = nullptr;
  unsigned long long value = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    std::cerr << "warning: ignoring malformed FRAGALIGN_STATE_CAP '" << env << "'\n";
    return 0;
  }
  return static_cast<uint64_t>(value);
}

ModelPtr load_model_or_exit(const std::string& path, const std::string& format, int& exit_code) {
  fa_model* raw = nullptr;
  fa_status status = fa_model_load(path.c_str(), format.empty() ? nullptr : format.c_str(), &raw);
  if (status != FA_OK) {
    exit_code = report_failure("loading " + path, status);
    return nullptr;
  }
  return ModelPtr(raw);
}

// Model soundness gate shared by the commands that align against the model.
bool model_valid_or_report(const fa_model* model) {
  int violations = 0;
  OwnedString report;
  fa_status status = fa_model_validate(model, &violations, &report.value);
  if (status != FA_OK) {
    std::cerr << "error: validating model: " << fa_last_error() << "\n";
    return false;
  }
  if (violations > 0) {
    std::cerr << "error: the model is not a sound workflow net\n";
    if (report.value) std::cerr << report.value << "\n";
    return false;
  }
  return true;
}

std::vector<std::string> parse_inline_trace(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    std::size_t first = item.find_first_not_of(" \t");
    std::size_t last = item.find_last_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

bool read_trace_file(const std::string& path, std::vector<std::string>& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return false;
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return false;
  }
  const nlohmann::json* items = nullptr;
  if (doc.is_array()) {
    items = &doc;
  } else if (doc.is_object() && doc.contains("activities") && doc["activities"].is_array()) {
    items = &doc["activities"];
  } else {
    std::cerr << "error: " << path << ": expected an array or {\"activities\": [..]}\n";
    return false;
  }
  for (const auto& item : *items) {
    if (!item.is_string()) {
      std::cerr << "error: " << path << ": activities must be strings\n";
      return false;
    }
    out.push_back(item.get<std::string>());
  }
  return true;
}

TracesPtr make_single_trace(const std::vector<std::string>& labels, int& exit_code) {
  std::vector<const char*> raw;
  raw.reserve(labels.size());
  for (const auto& label : labels) raw.push_back(label.c_str());
  fa_traces* traces = nullptr;
  fa_status status = fa_traces_create(raw.data(), raw.size(), &traces);
  if (status != FA_OK) {
    exit_code = report_failure("building trace", status);
    return nullptr;
  }
  return TracesPtr(traces);
}

LogPtr load_log(const std::string& path, std::string format, const std::string& case_col,
                const std::string& act_col, const std::string& order_col, int& exit_code) {
  if (format.empty()) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "xes") format = "xes";
    else if (ext == "csv") format = "csv";
    else if (ext == "jsonl" || ext == "ndjson") format = "jsonl";
    else {
      std::cerr << "error: cannot infer log format from " << path << "\n";
      exit_code = exit_error;
      return nullptr;
    }
  }
  fa_log* raw = nullptr;
  fa_status status;
  if (format == "xes") {
    size_t skipped = 0;
    status = fa_log_load_xes(path.c_str(), &raw, &skipped);
    if (status == FA_OK && skipped > 0) {
      std::cerr << "warning: skipped " << skipped << " events without concept:name\n";
    }
  } else if (format == "csv") {
    status = fa_log_load_csv(path.c_str(), case_col.c_str(), act_col.c_str(), order_col.c_str(),
                             &raw);
  } else if (format == "jsonl") {
    status = fa_log_load_jsonl(path.c_str(), &raw);
  } else {
    std::cerr << "error: unknown log format " << format << "\n";
    exit_code = exit_error;
    return nullptr;
  }
  if (status != FA_OK) {
    exit_code = report_failure("loading " + path, status);
    return nullptr;
  }
  return LogPtr(raw);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_align(const std::string& model_path, const std::string& model_format,
              const std::string& trace_text, const std::string& trace_file,
              const std::string& kind, const std::string& method, const std::string& output,
              uint64_t state_cap) {
  int exit_code = exit_ok;
  ModelPtr model = load_model_or_exit(model_path, model_format, exit_code);
  if (!model) return exit_code;
  if (!model_valid_or_report(model.get())) return exit_invalid;

  std::vector<std::string> labels;
  if (!trace_file.empty()) {
    if (!read_trace_file(trace_file, labels)) return exit_error;
  } else {
    labels = parse_inline_trace(trace_text);
  }
  TracesPtr traces = make_single_trace(labels, exit_code);
  if (!traces) return exit_code;

  fa_alignment* raw = nullptr;
  fa_status status =
      fa_align(model.get(), traces.get(), 0, kind.c_str(), method.c_str(), state_cap, &raw);
  if (status != FA_OK) return report_failure("aligning", status);
  AlignmentPtr alignment(raw);

  OwnedString text;
  status = output == "json" ? fa_alignment_to_json(alignment.get(), &text.value)
                            : fa_alignment_to_table(alignment.get(), &text.value);
  if (status != FA_OK) return report_failure("rendering", status);
  std::cout << text.value;
  if (output == "json") std::cout << "\n";
  return exit_ok;
}

int cmd_validate(const std::string& model_path, const std::string& model_format) {
  int exit_code = exit_ok;
  ModelPtr model = load_model_or_exit(model_path, model_format, exit_code);
  if (!model) return exit_code;
  int violations = 0;
  OwnedString report;
  fa_status status = fa_model_validate(model.get(), &violations, &report.value);
  if (status != FA_OK) return report_failure("validating", status);
  std::cout << report.value << "\n";
  return violations == 0 ? exit_ok : exit_invalid;
}

int cmd_dot(const std::string& model_path, const std::string& model_format, bool aux,
            const std::string& trace_text, const std::string& method, bool annotate,
            uint64_t state_cap, const std::string& out_path) {
  int exit_code = exit_ok;
  ModelPtr model = load_model_or_exit(model_path, model_format, exit_code);
  if (!model) return exit_code;

  OwnedString dot;
  if (aux) {
    TracesPtr traces = make_single_trace(parse_inline_trace(trace_text), exit_code);
    if (!traces) return exit_code;
    fa_status status = fa_model_aux_dot(model.get(), traces.get(), 0, method.c_str(),
                                        annotate ? 1 : 0, state_cap, &dot.value);
    if (status != FA_OK) return report_failure("rendering", status);
  } else {
    fa_status status = fa_model_to_dot(model.get(), &dot.value);
    if (status != FA_OK) return report_failure("rendering", status);
  }
  if (out_path.empty()) {
    std::cout << dot.value;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return exit_error;
    }
    out << dot.value;
  }
  return exit_ok;
}

struct BenchRow {
  int64_t cost = 0;
  uint64_t expanded = 0;
  uint64_t queued = 0;
  double marking_ms = 0;
  double total_ms = 0;
  fa_status status = FA_OK;
  std::string error;
};

int cmd_bench(const std::string& model_path, const std::string& model_format,
              const std::string& log_path, const std::string& log_format,
              const std::string& case_col, const std::string& act_col,
              const std::string& order_col, const std::string& kind, std::size_t n,
              std::size_t min_len, std::size_t max_len, uint64_t seed,
              std::string methods_text, uint64_t state_cap, const std::string& out_path,
              unsigned jobs) {
  int exit_code = exit_ok;
  ModelPtr model = load_model_or_exit(model_path, model_format, exit_code);
  if (!model) return exit_code;
  if (!model_valid_or_report(model.get())) return exit_invalid;

  LogPtr log = load_log(log_path, log_format, case_col, act_col, order_col, exit_code);
  if (!log) return exit_code;

  if (methods_text.empty()) {
    methods_text = fa_model_is_tree(model.get()) ? "baseline,filtered,advanced"
                                                 : "baseline,filtered";
  }
  std::vector<std::string> methods = split_list(methods_text);
  if (methods.empty()) {
    std::cerr << "error: no methods selected\n";
    return exit_error;
  }

  fa_traces* sampled = nullptr;
  fa_status status;
  if (kind == "postfix") {
    status = fa_log_sample_postfixes(log.get(), n, min_len, seed, &sampled);
  } else if (kind == "infix") {
    status = fa_log_sample_infixes(log.get(), n, min_len, max_len, seed, &sampled);
  } else {
    std::cerr << "error: bench aligns infix or postfix fragments, not " << kind << "\n";
    return exit_error;
  }
  if (status != FA_OK) return report_failure("sampling", status);
  TracesPtr traces(sampled);

  const std::size_t instances = fa_traces_count(traces.get());
  const std::size_t total = instances * methods.size();
  std::vector<BenchRow> rows(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      std::size_t instance = job / methods.size();
      const std::string& method = methods[job % methods.size()];
      fa_alignment* raw = nullptr;
      fa_status st = fa_align(model.get(), traces.get(), instance, kind.c_str(), method.c_str(),
                              state_cap, &raw);
      BenchRow& row = rows[job];
      row.status = st;
      if (st != FA_OK) {
        row.error = fa_last_error();
        continue;
      }
      AlignmentPtr alignment(raw);
      row.cost = fa_alignment_cost(alignment.get());
      row.expanded = fa_alignment_expanded(alignment.get());
      row.queued = fa_alignment_queued(alignment.get());
      row.marking_ms = fa_alignment_marking_ms(alignment.get());
      row.total_ms = fa_alignment_total_ms(alignment.get());
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; i++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t job = 0; job < total; job++) {
    if (rows[job].status != FA_OK) {
      std::cerr << "error: instance " << job / methods.size() << " ("
                << methods[job % methods.size()] << "): " << rows[job].error << "\n";
      return exit_error;
    }
  }

  // Timing columns stay rightmost: everything before them is reproducible
  // for a fixed seed, so runs can be diffed with the last two columns cut.
  std::ostringstream csv;
  csv << "instance,method,cost,expanded,queued,marking_ms,total_ms\n";
  for (std::size_t instance = 0; instance < instances; instance++) {
    for (std::size_t m = 0; m < methods.size(); m++) {
      const BenchRow& row = rows[instance * methods.size() + m];
      csv << instance << "," << methods[m] << "," << row.cost << "," << row.expanded << ","
          << row.queued << "," << std::fixed << std::setprecision(3) << row.marking_ms << ","
          << row.total_ms << "\n";
      csv.unsetf(std::ios::fixed);
    }
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return exit_error;
    }
    out << csv.str();
  } else {
    std::cout << csv.str();
  }

  // Cross-method agreement: optimal cost must not depend on the method.
  std::size_t mismatches = 0;
  for (std::size_t instance = 0; instance < instances; instance++) {
    int64_t expected = rows[instance * methods.size()].cost;
    for (std::size_t m = 1; m < methods.size(); m++) {
      if (rows[instance * methods.size() + m].cost != expected) {
        std::ostringstream trace_text;
        for (std::size_t p = 0; p < fa_trace_length(traces.get(), instance); p++) {
          if (p) trace_text << ",";
          trace_text << fa_trace_label(traces.get(), instance, p);
        }
        std::cerr << "mismatch: instance " << instance << " <" << trace_text.str() << "> "
                  << methods[0] << "=" << expected << " " << methods[m] << "="
                  << rows[instance * methods.size() + m].cost << "\n";
        mismatches++;
      }
    }
  }

  std::cerr << "bench: " << instances << " " << kind << " fragments, methods:";
  for (std::size_t m = 0; m < methods.size(); m++) {
    double mean_cost = 0, mean_expanded = 0, mean_queued = 0, mean_marking = 0, mean_total = 0;
    for (std::size_t instance = 0; instance < instances; instance++) {
      const BenchRow& row = rows[instance * methods.size() + m];
      mean_cost += static_cast<double>(row.cost);
      mean_expanded += static_cast<double>(row.expanded);
      mean_queued += static_cast<double>(row.queued);
      mean_marking += row.marking_ms;
      mean_total += row.total_ms;
    }
    double count = instances ? static_cast<double>(instances) : 1.0;
    std::cerr << "\n  " << methods[m] << ": mean cost " << mean_cost / count
              << ", mean expanded " << mean_expanded / count << ", mean queued "
              << mean_queued / count << ", mean marking ms " << mean_marking / count
              << ", mean total ms " << mean_total / count;
  }
  std::cerr << "\n";

  if (mismatches > 0) {
    std::cerr << "error: " << mismatches << " cost mismatches between methods\n";
    return exit_mismatch;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alignments of trace fragments against workflow nets and process trees"};
  app.require_subcommand(1);

  uint64_t env_cap = state_cap_from_env();

  // align
  std::string al_model, al_format, al_trace, al_trace_file, al_kind = "complete";
  std::string al_method = "filtered", al_output = "pretty";
  uint64_t al_cap = env_cap;
  CLI::App* align_cmd = app.add_subcommand("align", "Align one trace fragment against a model");
  align_cmd->add_option("--model", al_model, "Model file (.pnml, .ptml, .ptree)")->required();
  align_cmd->add_option("--model-format", al_format, "pnml|ptml|ptree (default: by extension)");
  auto* trace_opt = align_cmd->add_option("--trace", al_trace, "Comma separated activities");
  auto* trace_file_opt = align_cmd->add_option(
      "--trace-file", al_trace_file, "JSON array of activities (for labels containing commas)");
  trace_opt->excludes(trace_file_opt);
  align_cmd->add_option("--kind", al_kind, "complete|prefix|infix|postfix")
      ->check(CLI::IsMember({"complete", "prefix", "infix", "postfix"}));
  align_cmd->add_option("--method", al_method, "baseline|filtered|advanced")
      ->check(CLI::IsMember({"baseline", "filtered", "advanced"}));
  align_cmd->add_option("--output", al_output, "pretty|json")
      ->check(CLI::IsMember({"pretty", "json"}));
  align_cmd->add_option("--state-cap", al_cap, "Search state cap (0 = default)");

  // bench
  std::string be_model, be_format, be_log, be_log_format, be_kind = "infix";
  std::string be_case = "case", be_act = "activity", be_order = "order";
  std::string be_methods, be_out;
  std::size_t be_n = 200, be_min = 2, be_max = 5;
  uint64_t be_seed = 17, be_cap = env_cap;
  unsigned be_jobs = 1;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Sample fragments from a log and compare marking methods");
  bench_cmd->add_option("--model", be_model, "Model file")->required();
  bench_cmd->add_option("--model-format", be_format, "pnml|ptml|ptree");
  bench_cmd->add_option("--log", be_log, "Event log (.xes, .csv, .jsonl)")->required();
  bench_cmd->add_option("--log-format", be_log_format, "xes|csv|jsonl (default: by extension)");
  bench_cmd->add_option("--csv-case", be_case, "CSV case id column");
  bench_cmd->add_option("--csv-activity", be_act, "CSV activity column");
  bench_cmd->add_option("--csv-order", be_order, "CSV ordering column");
  bench_cmd->add_option("--kind", be_kind, "infix|postfix")
      ->check(CLI::IsMember({"infix", "postfix"}));
  bench_cmd->add_option("-n,--samples", be_n, "Number of fragments to sample");
  bench_cmd->add_option("--min-len", be_min, "Minimum fragment length");
  bench_cmd->add_option("--max-len", be_max, "Maximum infix length");
  bench_cmd->add_option("--seed", be_seed, "Sampling seed");
  bench_cmd->add_option("--methods", be_methods,
                        "Comma separated methods (default: all that apply)");
  bench_cmd->add_option("--state-cap", be_cap, "Search state cap (0 = default)");
  bench_cmd->add_option("--out", be_out, "CSV output path (default: stdout)");
  bench_cmd->add_option("--jobs", be_jobs, "Worker threads");

  // validate
  std::string va_model, va_format;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check the workflow-net requirements");
  validate_cmd->add_option("--model", va_model, "Model file")->required();
  validate_cmd->add_option("--model-format", va_format, "pnml|ptml|ptree");

  // dot
  std::string do_model, do_format, do_trace, do_method = "filtered", do_out;
  bool do_aux = false, do_annotate = false;
  uint64_t do_cap = env_cap;
  CLI::App* dot_cmd = app.add_subcommand("dot", "Render the model (or its jump layer) as DOT");
  dot_cmd->add_option("--model", do_model, "Model file")->required();
  dot_cmd->add_option("--model-format", do_format, "pnml|ptml|ptree");
  dot_cmd->add_flag("--aux", do_aux, "Render the auxiliary net for a trace");
  dot_cmd->add_option("--trace", do_trace, "Comma separated activities (with --aux)");
  dot_cmd->add_option("--method", do_method, "baseline|filtered|advanced (with --aux)")
      ->check(CLI::IsMember({"baseline", "filtered", "advanced"}));
  dot_cmd->add_flag("--annotate-filtered", do_annotate,
                    "Draw every reachable jump with the method's keep/drop verdict");
  dot_cmd->add_option("--state-cap", do_cap, "Search state cap (0 = default)");
  dot_cmd->add_option("--out", do_out, "Output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (align_cmd->parsed()) {
    if (al_trace.empty() && al_trace_file.empty()) {
      std::cerr << "error: one of --trace or --trace-file is required\n";
      return exit_error;
    }
    return cmd_align(al_model, al_format, al_trace, al_trace_file, al_kind, al_method, al_output,
                     al_cap);
  }
  if (bench_cmd->parsed()) {
    return cmd_bench(be_model, be_format, be_log, be_log_format, be_case, be_act, be_order,
                     be_kind, be_n, be_min, be_max, be_seed, be_methods, be_cap, be_out, be_jobs);
  }
  if (validate_cmd->parsed()) {
    return cmd_validate(va_model, va_format);
  }
  if (dot_cmd->parsed()) {
    if (do_aux && do_trace.empty()) {
      std::cerr << "error: --aux needs --trace\n";
      return exit_error;
    }
    return cmd_dot(do_model, do_format, do_aux, do_trace, do_method, do_annotate, do_cap, do_out);
  }
  return exit_error;
}
