#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "predictlab/experiments.hpp"

using namespace predictlab;
using namespace predictlab::experiments;

namespace {

Json load(const std::string& name) {
  std::ifstream in(std::string(PLAB_TEST_DATA) + "/" + name);
  return Json::parse(in);
}

Json one_op(const std::string& module, const std::string& op, Json params) {
  return {{"schema_version", 1},
          {"name", "t"},
          {"operations", Json::array({{{"module", module}, {"op", op}, {"params", std::move(params)}}})}};
}

Json ap_params() {
  return {{"spec", {{"type", "ap"}, {"a", 3}, {"d", 3}}}, {"window", {1, 20}}};
}

}  // namespace

TEST_CASE("exit codes") {
  auto empty = run_manifest(load("empty.json"));
  CHECK(empty.exit_code == 0);
  CHECK(empty.records.empty());

  auto typo = run_manifest(load("unknown_field.json"));
  CHECK(typo.exit_code == 2);
  CHECK(typo.error.find("operatons") != std::string::npos);

  auto budget = run_manifest(load("over_budget.json"));
  CHECK(budget.exit_code == 3);

  Json bad_version = one_op("sets", "materialize", ap_params());
  bad_version["schema_version"] = 2;
  CHECK(run_manifest(bad_version).exit_code == 2);

  Json bad_param = one_op("sets", "materialize", ap_params());
  bad_param["operations"][0]["params"]["colour"] = 1;
  CHECK(run_manifest(bad_param).exit_code == 2);

  Json loose = {{"schema_version", 1}, {"budgets", {{"enumeration_cap", 1'000'000'000'000LL}}}};
  CHECK(run_manifest(loose).exit_code == 2);

  CHECK(exit_code_for(ErrorKind::InvalidArgument) == 2);
  CHECK(exit_code_for(ErrorKind::Precondition) == 1);
  CHECK(exit_code_for(ErrorKind::Budget) == 3);
  CHECK(exit_code_for(ErrorKind::Numeric) == 4);
  CHECK(exit_code_for(ErrorKind::Overflow) == 4);
}

TEST_CASE("a failing op stops the run before later ops") {
  Json m = one_op("sets", "materialize", ap_params());
  m["operations"].push_back({{"module", "sets"}, {"op", "no_such_op"}, {"params", Json::object()}});
  auto r = run_manifest(m);
  CHECK(r.exit_code == 2);
}

TEST_CASE("single op results and ids") {
  auto r = run_manifest(one_op("sets", "materialize", ap_params()));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].id == "op1");
  CHECK(r.records[0].result["set"]["members"] == Json({3, 6, 9, 12, 15, 18}));
}

TEST_CASE("expect blocks add verdicts") {
  Json p = ap_params();
  p["expect"] = {{"members", {3, 6, 9, 12, 15, 18}}};
  auto good = run_manifest(one_op("sets", "materialize", p));
  CHECK(good.records[0].result["verdict"] == true);
  CHECK(all_verdicts_pass(good));

  p["expect"] = {{"members", {3}}};
  auto bad = run_manifest(one_op("sets", "materialize", p));
  CHECK(bad.exit_code == 0);
  CHECK(bad.records[0].result["verdict"] == false);
  CHECK_FALSE(all_verdicts_pass(bad));
  CHECK_FALSE(bad.records[0].warnings.empty());

  p["expect"] = {{"nonsense", 1}};
  CHECK(run_manifest(one_op("sets", "materialize", p)).exit_code == 2);
}

TEST_CASE("overrides") {
  Json m = one_op("sets", "materialize", {{"spec", {{"type", "ap"}, {"a", 2}, {"d", 2}}}});
  m["window"] = {1, 10};
  RunOverrides o;
  o.window = Window(1, 6);
  o.seed = 99;
  auto r = run_manifest(m, o);
  REQUIRE(r.exit_code == 0);
  CHECK(r.seed == 99);
  CHECK(r.records[0].result["set"]["members"] == Json({2, 4, 6}));
}

TEST_CASE("rendering is deterministic") {
  const auto& suite = find_suite("thue-morse");
  auto a = run_manifest(suite.manifest);
  auto b = run_manifest(suite.manifest);
  CHECK(render(a, "json") == render(b, "json"));
  CHECK(render(a, "csv") == render(b, "csv"));
  auto doc = Json::parse(render(a, "json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["version"] == version());
  CHECK(doc["exit_code"] == 0);
  CHECK_FALSE(doc.contains("wall_seconds"));
  CHECK(doc["operations"].size() == 3);

  std::istringstream csv(render(a, "csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "id,module,op,field,value");
  while (std::getline(csv, line)) CHECK(std::count(line.begin(), line.end(), ',') >= 4);
}

TEST_CASE("output file is written") {
  const auto path = std::filesystem::temp_directory_path() / "plab_test_cli_out.csv";
  RunOverrides o;
  o.format = "csv";
  o.out_path = path.string();
  auto r = run_manifest(find_suite("hilbert-lemma").manifest, o);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == render(r, "csv"));
  std::filesystem::remove(path);
}

TEST_CASE("table rendering of a single op") {
  auto r = run_manifest(one_op("prediction", "levinson_durbin", {{"autocorr", {2, 1, 0, 0, 0}}}));
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.records[0].table);
  auto csv = render_table_or_flat(r);
  CHECK(csv.rfind("n,e_n\n1,", 0) == 0);
}

TEST_CASE("suite registry") {
  const auto& suites = canned_suites();
  CHECK(suites.size() >= 16);
  std::set<std::string> names;
  for (const auto& s : suites) names.insert(s.name);
  CHECK(names.size() == suites.size());
  for (const char* required : {"counterexample-k3", "return-times-rotation", "khintchine-gaps", "riesz-sip-support",
                               "hilbert-lemma", "szego-ma1", "independence-kN", "squares-witness", "primes-witness",
                               "q3-witness", "ip-base3", "cube-fermat", "bessel-bound", "lacunary-avoider", "thue-morse",
                               "sturmian-entropy"})
    CHECK(names.count(required) == 1);
  CHECK_THROWS_AS(find_suite("nope"), Error);
}

TEST_CASE("quick suites pass their verdicts") {
  for (const char* name : {"thue-morse", "sip-smallness", "hilbert-lemma", "riesz-sip-support", "cube-fermat", "q3-witness"}) {
    CAPTURE(name);
    auto r = run_manifest(find_suite(name).manifest);
    CHECK(r.exit_code == 0);
    CHECK(all_verdicts_pass(r));
  }
}

TEST_CASE("op listing covers every module") {
  std::set<std::string> modules;
  for (const auto& [module, op] : list_ops()) modules.insert(module);
  for (const char* m : {"sets", "dynamics", "measures", "prediction", "processes", "entropy", "checks"})
    CHECK(modules.count(m) == 1);
}
