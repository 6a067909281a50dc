#include <fstream>
#include <new>
#include <string>

#include "predictlab/experiments.hpp"
#include "predictlab/predictlab.h"
#include "predictlab/processes.hpp"

using namespace predictlab;
using experiments::Json;

struct plab_report {
  experiments::RunReport report;
  std::vector<std::string> results;
  std::string rendered;
  std::string table;
};

namespace {

thread_local std::string g_last_error;

plab_status status_of(int code) {
  switch (code) {
    case 0: return PLAB_OK;
    case 2: return PLAB_ERR_INVALID;
    case 3: return PLAB_ERR_BUDGET;
    case 4: return PLAB_ERR_NUMERIC;
    default: return PLAB_ERR_OTHER;
  }
}

experiments::RunOverrides to_overrides(const plab_overrides* o) {
  experiments::RunOverrides r;
  if (!o) return r;
  if (o->has_seed) r.seed = o->seed;
  if (o->has_window) r.window = Window(o->window_lo, o->window_hi);
  if (o->has_tol) r.tol = o->tol;
  if (o->format) r.format = std::string(o->format);
  if (o->out_path) r.out_path = std::string(o->out_path);
  return r;
}

template <typename F>
plab_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(experiments::exit_code_for(e.kind()));
  } catch (const Json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return PLAB_ERR_INVALID;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PLAB_ERR_BUDGET;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PLAB_ERR_OTHER;
  }
}

plab_status finish(const Json& manifest, const plab_overrides* overrides, plab_report** out) {
  require(out != nullptr, ErrorKind::InvalidArgument, "output pointer is null");
  *out = nullptr;
  auto* handle = new plab_report{experiments::run_manifest(manifest, to_overrides(overrides)), {}, {}, {}};
  for (const auto& r : handle->report.records) handle->results.push_back(r.result.dump());
  g_last_error = handle->report.error;
  *out = handle;
  return status_of(handle->report.exit_code);
}

}  // namespace

extern "C" {

plab_status plab_run_manifest_json(const char* manifest_json, const plab_overrides* overrides, plab_report** out) {
  return guarded([&] {
    require(manifest_json != nullptr, ErrorKind::InvalidArgument, "manifest is null");
    return finish(Json::parse(manifest_json), overrides, out);
  });
}

plab_status plab_run_suite(const char* name, const plab_overrides* overrides, plab_report** out) {
  return guarded([&] {
    require(name != nullptr, ErrorKind::InvalidArgument, "suite name is null");
    return finish(experiments::find_suite(name).manifest, overrides, out);
  });
}

plab_status plab_execute(const char* module, const char* op, const char* params_json, const plab_overrides* overrides,
                         plab_report** out) {
  return guarded([&] {
    require(module && op, ErrorKind::InvalidArgument, "module and op are required");
    Json params = params_json ? Json::parse(params_json) : Json::object();
    Json manifest = {{"schema_version", 1},
                     {"name", std::string(module) + "." + op},
                     {"operations", Json::array({{{"id", "op1"}, {"module", module}, {"op", op}, {"params", params}}})}};
    return finish(manifest, overrides, out);
  });
}

int plab_report_exit_code(const plab_report* r) { return r ? r->report.exit_code : 1; }

int plab_report_verdicts_pass(const plab_report* r) { return r && experiments::all_verdicts_pass(r->report) ? 1 : 0; }

double plab_report_wall_seconds(const plab_report* r) { return r ? r->report.wall_seconds : 0.0; }

const char* plab_report_error(const plab_report* r) { return r ? r->report.error.c_str() : ""; }

size_t plab_report_warning_count(const plab_report* r) { return r ? r->report.warnings.size() : 0; }

const char* plab_report_warning(const plab_report* r, size_t index) {
  if (!r || index >= r->report.warnings.size()) return nullptr;
  return r->report.warnings[index].c_str();
}

size_t plab_report_operation_count(const plab_report* r) { return r ? r->results.size() : 0; }

const char* plab_report_result_json(plab_report* r, size_t index) {
  if (!r || index >= r->results.size()) return nullptr;
  return r->results[index].c_str();
}

const char* plab_report_render(plab_report* r, const char* format) {
  if (!r || !format) return nullptr;
  const plab_status s = guarded([&] {
    r->rendered = experiments::render(r->report, format);
    return PLAB_OK;
  });
  return s == PLAB_OK ? r->rendered.c_str() : nullptr;
}

const char* plab_report_table_csv(plab_report* r) {
  if (!r) return nullptr;
  r->table = experiments::render_table_or_flat(r->report);
  return r->table.c_str();
}

void plab_report_free(plab_report* r) { delete r; }

const char* plab_list_suites_json(void) {
  static const std::string text = [] {
    Json list = Json::array();
    for (const auto& s : experiments::canned_suites()) list.push_back({{"name", s.name}, {"description", s.description}});
    return list.dump();
  }();
  return text.c_str();
}

const char* plab_list_ops_json(void) {
  static const std::string text = [] {
    Json list = Json::array();
    for (const auto& [m, o] : experiments::list_ops()) list.push_back({m, o});
    return list.dump();
  }();
  return text.c_str();
}

plab_status plab_sample_binary(const char* model_json, int64_t length, uint64_t seed, const char* path) {
  return guarded([&] {
    require(model_json && path, ErrorKind::InvalidArgument, "model and path are required");
    auto model = io::model_from_json(Json::parse(model_json));
    auto p = processes::sample(model, length, seed);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Precondition, std::string("cannot open ") + path);
    processes::write_binary(out, p);
    require(static_cast<bool>(out), ErrorKind::Precondition, std::string("cannot write ") + path);
    return PLAB_OK;
  });
}

const char* plab_last_error(void) { return g_last_error.c_str(); }

const char* plab_version(void) {
  static const std::string v = experiments::version();
  return v.c_str();
}

}  // extern "C"
