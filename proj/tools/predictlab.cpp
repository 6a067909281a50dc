// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "predictlab/predictlab.h"

namespace {

using Json = nlohmann::json;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string window;
  std::optional<double> tol;
  std::string format;
  std::string out;
  bool quiet = false;
};

struct Overrides {
  plab_overrides raw{};
  std::string format, out;
};

Overrides make_overrides(const Globals& g) {
  Overrides o;
  if (g.seed) {
    o.raw.has_seed = 1;
    o.raw.seed = *g.seed;
  }
  if (!g.window.empty()) {
    const auto colon = g.window.find(':', 1);
    if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected LO:HI");
    try {
      o.raw.window_lo = std::stoll(g.window.substr(0, colon));
      o.raw.window_hi = std::stoll(g.window.substr(colon + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--window", "expected LO:HI with integers");
    }
    o.raw.has_window = 1;
  }
  if (g.tol) {
    o.raw.has_tol = 1;
    o.raw.tol = *g.tol;
  }
  o.format = g.format;
  o.out = g.out;
  if (!o.format.empty()) o.raw.format = o.format.c_str();
  if (!o.out.empty()) o.raw.out_path = o.out.c_str();
  return o;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts inline JSON or @path.
Json json_arg(const std::string& text) {
  return Json::parse(!text.empty() && text[0] == '@' ? read_text(text.substr(1)) : text);
}

// Prints the report (unless written to --out), the wall time on stderr, and
// returns the exit code.
int emit(plab_status status, plab_report* report, const Globals& g, bool single_op) {
  if (!report) {
    std::cerr << "error: " << plab_last_error() << "\n";
    return static_cast<int>(status);
  }
  const std::string format = g.format.empty() ? "json" : g.format;
  if (g.out.empty()) {
    const char* text = single_op && format == "csv" ? plab_report_table_csv(report) : plab_report_render(report, format.c_str());
    if (text) std::cout << text;
  }
  for (size_t i = 0; i < plab_report_warning_count(report); ++i) std::cerr << "warning: " << plab_report_warning(report, i) << "\n";
  const int code = plab_report_exit_code(report);
  if (code != 0) std::cerr << "error: " << plab_report_error(report) << "\n";
  if (!g.quiet) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", plab_report_wall_seconds(report));
    std::cerr << "wall time " << buf << " s, verdicts " << (plab_report_verdicts_pass(report) ? "pass" : "FAIL") << "\n";
  }
  plab_report_free(report);
  return code;
}

struct OpCommand {
  std::string primary;
  std::string op;
  std::vector<std::string> params;
  std::string params_json;
};

// Registers a single-operation subcommand whose positional argument fills `key`.
CLI::App* op_command(CLI::App& app, const std::string& name, const std::string& help, const std::string& default_op,
                     const std::string& key, OpCommand& cmd) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option(key, cmd.primary, key + " as JSON (or @file)");
  sub->add_option("--op", cmd.op, "operation in this module")->default_val(default_op);
  sub->add_option("-p,--param", cmd.params, "extra parameter KEY=JSON (repeatable)");
  sub->add_option("--params", cmd.params_json, "full params object as JSON (or @file)");
  return sub;
}

Json op_params(const OpCommand& cmd, const std::string& key) {
  Json params = cmd.params_json.empty() ? Json::object() : json_arg(cmd.params_json);
  if (!params.is_object()) throw std::runtime_error("--params must be a JSON object");
  if (!cmd.primary.empty()) params[key] = json_arg(cmd.primary);
  for (const auto& kv : cmd.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("--param expects KEY=JSON, got " + kv);
    const std::string value = kv.substr(eq + 1);
    Json v = Json::parse(value, nullptr, false);
    params[kv.substr(0, eq)] = v.is_discarded() ? Json(value) : v;
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"predictlab: predictive sets, spectral prediction and entropy experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(plab_version()));

  Globals g;
  app.add_option("--seed", g.seed, "run seed");
  app.add_option("--window", g.window, "default window LO:HI");
  app.add_option("--tol", g.tol, "default tolerance");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "write the report to PATH");
  app.add_flag("-q,--quiet", g.quiet, "no timing line on stderr");

  std::string manifest_path;
  auto* run = app.add_subcommand("run", "run an experiment manifest");
  run->add_option("manifest", manifest_path, "manifest JSON file ('-' for stdin)")->required();

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run a canned suite");
  suite->add_option("name", suite_name, "suite name (see list-suites)")->required();

  auto* list = app.add_subcommand("list-suites", "list canned suites");
  bool list_ops = false;
  list->add_flag("--ops", list_ops, "list every module/op pair instead");

  OpCommand gen, meas, pred, sim, ent;
  auto* gen_cmd = op_command(app, "gen-set", "materialize or analyse a set", "materialize", "spec", gen);
  auto* meas_cmd = op_command(app, "measure", "Fourier data of a circle measure", "fourier_window", "measure", meas);
  auto* pred_cmd = op_command(app, "predict", "linear prediction from a spectral measure", "linear_prediction_error", "measure", pred);
  auto* sim_cmd = op_command(app, "simulate", "sample a stationary process", "sample", "model", sim);
  std::string binary_path;
  sim_cmd->add_option("--binary", binary_path, "also write the path in the compact binary format");
  auto* ent_cmd = op_command(app, "entropy", "entropy estimates for a finite-valued model", "conditional_entropy", "model", ent);

  CLI11_PARSE(app, argc, argv);

  try {
    Overrides ov = make_overrides(g);
    plab_report* report = nullptr;
    if (run->parsed()) {
      const std::string text = manifest_path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_text(manifest_path);
      const auto st = plab_run_manifest_json(text.c_str(), &ov.raw, &report);
      return emit(st, report, g, false);
    }
    if (suite->parsed()) {
      const auto st = plab_run_suite(suite_name.c_str(), &ov.raw, &report);
      return emit(st, report, g, false);
    }
    if (list->parsed()) {
      const Json items = Json::parse(list_ops ? plab_list_ops_json() : plab_list_suites_json());
      for (const auto& it : items) {
        if (list_ops) std::cout << it[0].get<std::string>() << " " << it[1].get<std::string>() << "\n";
        else std::cout << it["name"].get<std::string>() << "\t" << it["description"].get<std::string>() << "\n";
      }
      return 0;
    }
    const std::tuple<CLI::App*, OpCommand*, const char*, const char*> ops[] = {
        {gen_cmd, &gen, "sets", "spec"},           {meas_cmd, &meas, "measures", "measure"},
        {pred_cmd, &pred, "prediction", "measure"}, {sim_cmd, &sim, "processes", "model"},
        {ent_cmd, &ent, "entropy", "model"}};
    for (const auto& [sub, cmd, module, key] : ops) {
      if (!sub->parsed()) continue;
      const Json params = op_params(*cmd, key);
      if (sub == sim_cmd && !binary_path.empty()) {
        const auto st = plab_sample_binary(params.at("model").dump().c_str(), params.at("length").get<std::int64_t>(),
                                           params.value("seed", g.seed.value_or(0)), binary_path.c_str());
        if (st != PLAB_OK) {
          std::cerr << "error: " << plab_last_error() << "\n";
          return static_cast<int>(st);
        }
      }
      const auto st = plab_execute(module, cmd->op.c_str(), params.dump().c_str(), &ov.raw, &report);
      return emit(st, report, g, true);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const Json::exception& e) {
    std::cerr << "error: invalid JSON argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
