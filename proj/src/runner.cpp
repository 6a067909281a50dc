#include <chrono>
#include <fstream>
#include <sstream>

#include "ops_internal.hpp"

namespace predictlab::experiments {

namespace {

using io::Fields;
using Clock = std::chrono::steady_clock;

constexpr int kSchemaVersion = 1;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Budget budget_from_json(const Json& j) {
  const Budget caps = Budget::defaults();
  Budget b = caps;
  Fields f(j, "budgets");
  b.enumeration_cap = f.get_or<std::int64_t>("enumeration_cap", caps.enumeration_cap);
  b.max_path_length = f.get_or<std::int64_t>("max_path_length", caps.max_path_length);
  f.done();
  require(b.enumeration_cap > 0 && b.enumeration_cap <= caps.enumeration_cap, ErrorKind::InvalidArgument,
          "budgets.enumeration_cap must lie in [1, " + std::to_string(caps.enumeration_cap) + "]");
  require(b.max_path_length > 0 && b.max_path_length <= caps.max_path_length, ErrorKind::InvalidArgument,
          "budgets.max_path_length must lie in [1, " + std::to_string(caps.max_path_length) + "]");
  return b;
}

struct PlannedOp {
  std::string id, module, op;
  Json params;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt_double(v.get<double>());
  return v.dump();
}

Json table_json(const Table& t) { return {{"columns", t.columns}, {"rows", t.rows}}; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Precondition, "cannot open output file " + path);
  out << text;
  require(static_cast<bool>(out), ErrorKind::Precondition, "cannot write output file " + path);
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return 2;
    case ErrorKind::Budget: return 3;
    case ErrorKind::Numeric:
    case ErrorKind::Overflow: return 4;
    default: return 1;
  }
}

RunReport run_manifest(const Json& manifest, const RunOverrides& overrides) {
  const auto t0 = Clock::now();
  RunReport report;
  Context ctx;
  std::vector<PlannedOp> plan;

  // Validation happens before anything runs, so schema errors never leave partial output.
  try {
    require(manifest.is_object(), ErrorKind::InvalidArgument, "manifest must be a JSON object");
    Fields f(manifest, "manifest");
    const auto version = f.get_or<int>("schema_version", kSchemaVersion);
    require(version == kSchemaVersion, ErrorKind::InvalidArgument,
            "unsupported schema_version " + std::to_string(version));
    report.name = f.get_or<std::string>("name", "");
    ctx.seed = f.get_or<std::uint64_t>("seed", 0);
    if (const Json* w = f.find("window")) ctx.window = io::window_from_json(*w);
    ctx.tol = f.get_or<double>("tol", ctx.tol);
    require(ctx.tol > 0, ErrorKind::InvalidArgument, "tol must be positive");
    if (const Json* b = f.find("budgets")) ctx.budget = budget_from_json(*b);
    if (const Json* o = f.find("output")) {
      Fields of(*o, "output");
      report.format = of.get_or<std::string>("format", report.format);
      report.out_path = of.get_or<std::string>("path", "");
      of.done();
    }
    if (const Json* ops = f.find("operations")) {
      require(ops->is_array(), ErrorKind::InvalidArgument, "operations must be an array");
      const auto known = list_ops();
      for (std::size_t i = 0; i < ops->size(); ++i) {
        Fields of((*ops)[i], "operations[" + std::to_string(i) + "]");
        PlannedOp p;
        p.module = of.get<std::string>("module");
        p.op = of.get<std::string>("op");
        p.params = of.has("params") ? of.at("params") : Json::object();
        p.id = of.get_or<std::string>("id", "op" + std::to_string(i + 1));
        of.done();
        require(std::find(known.begin(), known.end(), std::make_pair(p.module, p.op)) != known.end(),
                ErrorKind::InvalidArgument, "unknown operation " + p.module + "." + p.op);
        require(p.params.is_object(), ErrorKind::InvalidArgument, "operations[" + std::to_string(i) + "].params must be an object");
        plan.push_back(std::move(p));
      }
    }
    f.done();

    if (overrides.seed) ctx.seed = *overrides.seed;
    if (overrides.window) ctx.window = *overrides.window;
    if (overrides.tol) {
      require(*overrides.tol > 0, ErrorKind::InvalidArgument, "tol must be positive");
      ctx.tol = *overrides.tol;
    }
    if (overrides.format) report.format = *overrides.format;
    if (overrides.out_path) report.out_path = *overrides.out_path;
    require(report.format == "json" || report.format == "csv", ErrorKind::InvalidArgument, "format must be json or csv");
  } catch (const Error& e) {
    report.exit_code = exit_code_for(e.kind());
    report.error = e.what();
    report.wall_seconds = seconds_since(t0);
    return report;
  }

  report.seed = ctx.seed;
  report.window = ctx.window;
  report.tol = ctx.tol;

  for (const auto& p : plan) {
    const auto t1 = Clock::now();
    try {
      OpOutcome o = execute(p.module, p.op, p.params, ctx);
      OpRecord rec{p.id, p.module, p.op, std::move(o.result), std::move(o.warnings), std::move(o.table), seconds_since(t1)};
      for (const auto& w : rec.warnings) report.warnings.push_back(rec.id + ": " + w);
      report.records.push_back(std::move(rec));
    } catch (const Error& e) {
      report.exit_code = exit_code_for(e.kind());
      report.error = p.id + " (" + p.module + "." + p.op + "): " + e.what();
      break;
    } catch (const std::bad_alloc&) {
      report.exit_code = 3;
      report.error = p.id + " (" + p.module + "." + p.op + "): out of memory";
      break;
    } catch (const std::exception& e) {
      report.exit_code = 1;
      report.error = p.id + " (" + p.module + "." + p.op + "): " + e.what();
      break;
    }
  }

  if (!report.out_path.empty()) {
    try {
      write_file(report.out_path, render(report, report.format));
    } catch (const Error& e) {
      if (report.exit_code == 0) report.exit_code = exit_code_for(e.kind());
      if (report.error.empty()) report.error = e.what();
    }
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

std::string render(const RunReport& report, const std::string& format) {
  if (format == "json") {
    Json ops = Json::array();
    for (const auto& r : report.records) {
      Json o = {{"id", r.id}, {"module", r.module}, {"op", r.op}, {"result", r.result}, {"warnings", r.warnings}};
      if (r.table) o["table"] = table_json(*r.table);
      ops.push_back(std::move(o));
    }
    Json j = {{"schema_version", kSchemaVersion},
              {"version", version()},
              {"name", report.name},
              {"seed", report.seed},
              {"window", {report.window.lo, report.window.hi}},
              {"tol", report.tol},
              {"operations", ops},
              {"warnings", report.warnings},
              {"exit_code", report.exit_code}};
    if (!report.error.empty()) j["error"] = report.error;
    return j.dump(2) + "\n";
  }
  require(format == "csv", ErrorKind::InvalidArgument, "format must be json or csv");
  std::ostringstream out;
  out << "id,module,op,field,value\n";
  for (const auto& r : report.records) {
    const Json flat = r.result.flatten();
    for (auto it = flat.begin(); it != flat.end(); ++it) {
      out << csv_cell(r.id) << ',' << r.module << ',' << r.op << ',' << csv_cell(it.key().substr(1)) << ','
          << csv_cell(scalar_text(it.value())) << '\n';
    }
    for (std::size_t i = 0; i < r.warnings.size(); ++i)
      out << csv_cell(r.id) << ',' << r.module << ',' << r.op << ",warning/" << i << ',' << csv_cell(r.warnings[i]) << '\n';
  }
  if (!report.error.empty()) out << ",,,error," << csv_cell(report.error) << '\n';
  return out.str();
}

std::string render_table_or_flat(const RunReport& report) {
  if (report.records.size() == 1 && report.records[0].table && report.error.empty()) {
    const Table& t = *report.records[0].table;
    std::ostringstream out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_cell(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    return out.str();
  }
  return render(report, "csv");
}

bool all_verdicts_pass(const RunReport& report) {
  if (report.exit_code != 0) return false;
  for (const auto& r : report.records)
    if (r.result.contains("verdict") && !r.result["verdict"].get<bool>()) return false;
  return true;
}

std::string version() { return "0.1.0"; }

}  // namespace predictlab::experiments
