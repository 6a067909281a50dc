#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "predictlab/serialization.hpp"

namespace predictlab::experiments {

using io::Json;

/// Plot-ready data attached to an operation result.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Context {
  std::uint64_t seed = 0;
  Window window{1, 1000};
  double tol = 1e-10;
  Budget budget = Budget::defaults();
};

struct OpOutcome {
  Json result = Json::object();
  std::vector<std::string> warnings;
  std::optional<Table> table;
};

/// Runs one registered operation. Params are validated strictly; unknown keys
/// throw ErrorKind::InvalidArgument. An optional "expect" object in `params`
/// adds a "verdict" to the result (see README for the keys).
OpOutcome execute(const std::string& module, const std::string& op, const Json& params, const Context& ctx);

/// (module, op) pairs known to `execute`.
std::vector<std::pair<std::string, std::string>> list_ops();

struct OpRecord {
  std::string id;
  std::string module;
  std::string op;
  Json result;
  std::vector<std::string> warnings;
  std::optional<Table> table;
  double wall_seconds = 0;
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<Window> window;
  std::optional<double> tol;
  std::optional<std::string> format;
  std::optional<std::string> out_path;
};

struct RunReport {
  std::string name;
  std::uint64_t seed = 0;
  Window window{1, 1000};
  double tol = 1e-10;
  std::string format = "json";
  std::string out_path;  // empty: not written
  std::vector<OpRecord> records;
  std::vector<std::string> warnings;
  double wall_seconds = 0;
  int exit_code = 0;
  std::string error;  // hard error message, empty on success
};

/// Validates and executes a manifest. Hard errors stop the run and set
/// exit_code (2 schema, 3 budget, 4 numeric, 1 other); warnings never do.
/// When an output path is configured the rendered report is written there.
RunReport run_manifest(const Json& manifest, const RunOverrides& overrides = {});

/// Deterministic rendering (no wall times) in "json" or "csv".
std::string render(const RunReport& report, const std::string& format);

/// Table of a single-operation report as CSV, or the flat report CSV otherwise.
std::string render_table_or_flat(const RunReport& report);

int exit_code_for(ErrorKind kind);

/// True when every result carrying a "verdict" field has verdict true.
bool all_verdicts_pass(const RunReport& report);

struct Suite {
  std::string name;
  std::string description;
  Json manifest;
};

const std::vector<Suite>& canned_suites();
/// Throws ErrorKind::InvalidArgument for unknown names.
const Suite& find_suite(const std::string& name);

std::string version();

}  // namespace predictlab::experiments
