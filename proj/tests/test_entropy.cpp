#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "predictlab/entropy.hpp"
#include "predictlab/processes.hpp"

using namespace predictlab;
using namespace predictlab::entropy;

namespace {

const double ln2 = std::log(2.0);

PathSet one_path(processes::ProcessModel m, std::int64_t length, std::uint64_t seed) {
  return {processes::sample(m, length, seed).ints};
}

PathSet ensemble(processes::ProcessModel m, std::int64_t reps, std::int64_t length, std::uint64_t seed) {
  PathSet out;
  for (auto& p : processes::sample_ensemble(m, reps, length, seed)) out.push_back(std::move(p.ints));
  return out;
}

// Plug-in entropy of length-n blocks counted with a map.
double naive_block_entropy(const std::vector<std::int64_t>& x, std::size_t n) {
  std::map<std::vector<std::int64_t>, double> counts;
  for (std::size_t i = 0; i + n <= x.size(); ++i) counts[std::vector<std::int64_t>(x.begin() + i, x.begin() + i + n)] += 1;
  const double total = static_cast<double>(x.size() - n + 1);
  double h = 0;
  for (auto& [k, c] : counts) h -= c / total * std::log(c / total);
  return h;
}

EntropyConfig quick() {
  EntropyConfig c;
  c.resamples = 20;
  return c;
}

const processes::ProcessModel iid2{processes::IIDUniform{2}};
const processes::ProcessModel sturm{processes::Sturmian{0.6180339887498949}};

}  // namespace

TEST_CASE("block entropy matches a direct count") {
  auto paths = one_path(processes::ProcessModel{processes::IIDUniform{3}}, 5000, 4);
  for (std::size_t n : {1, 2, 3, 5}) {
    auto e = block_entropy(paths, n, quick());
    CHECK(e.value == doctest::Approx(naive_block_entropy(paths[0], n)).epsilon(1e-12));
  }
}

TEST_CASE("fair coin and constant path") {
  auto e = block_entropy(one_path(iid2, 100000, 1), 1, quick());
  CHECK(std::fabs(e.value - ln2) < 0.01);
  CHECK(e.bits() == doctest::Approx(e.value / ln2));
  PathSet constant{std::vector<std::int64_t>(1000, 7)};
  CHECK(block_entropy(constant, 4, quick()).value == 0.0);
  auto seq = sequence_entropy_along(constant, IntSet(Window(1, 5), {1, 2, 3, 4, 5}), {1, 3, 5}, quick());
  for (const auto& s : seq) CHECK(s.value == 0.0);
}

TEST_CASE("miller madow adds (K - 1) / 2N") {
  PathSet x{{0, 1, 1, 1, 1, 1, 1, 1}};
  EntropyConfig c = quick();
  auto plug = block_entropy(x, 1, c);
  c.estimator = Estimator::MillerMadow;
  auto mm = block_entropy(x, 1, c);
  CHECK(plug.value == doctest::Approx(-(std::log(0.125) / 8 + 7 * std::log(0.875) / 8)).epsilon(1e-12));
  CHECK(mm.value == doctest::Approx(plug.value + 1.0 / 16.0).epsilon(1e-12));
  // the correction never pushes past log(alphabet)
  PathSet y{{0, 1, 1, 0, 1, 1, 1, 0}};
  CHECK(block_entropy(y, 1, c).value == doctest::Approx(ln2));
}

TEST_CASE("rotation coding entropy is bounded by log complexity") {
  auto paths = one_path(sturm, 100000, 3);
  auto e = block_entropy(paths, 10, quick());
  const auto p10 = processes::factor_complexity(paths[0], 10);
  CHECK(p10 == 20);
  CHECK(e.value <= std::log(static_cast<double>(p10)) + e.bias_allowance);
  auto seq = sequence_entropy_along(paths, IntSet(Window(1, 12), {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}), {1, 4, 8, 12}, quick());
  for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i].value < seq[i - 1].value);
  CHECK(seq.back().value < 0.3);
}

TEST_CASE("counterexample conditional entropies") {
  auto paths = ensemble(processes::ProcessModel{processes::KPeriodicCounterexample{3}}, 100000, 11, 20240601);
  auto shifted = conditional_entropy(paths, 0, IntSet(Window(4, 10), {4, 7, 10}), quick());
  CHECK(std::fabs(shifted.value - ln2) < 0.02);
  auto aligned = conditional_entropy(paths, 0, IntSet(Window(3, 6), {3, 6}), quick());
  CHECK(std::fabs(aligned.value) < 0.02);
}

TEST_CASE("iid conditional entropy and sequence entropy") {
  auto paths = one_path(iid2, 200000, 8);
  auto e = conditional_entropy(paths, 0, IntSet(Window(1, 5), {1, 3, 5}), quick());
  CHECK(std::fabs(e.value - ln2) < 0.01);
  auto seq = sequence_entropy_along(paths, IntSet(Window(1, 8), {1, 2, 4, 8}), {1, 2, 3, 4}, quick());
  for (const auto& s : seq) CHECK(std::fabs(s.value - ln2) < 0.01);
}

TEST_CASE("chain rule bound") {
  auto iid = chain_rule_bound_check(one_path(iid2, 200000, 5), IntSet(Window(1, 8), {1, 2, 4, 8}), quick());
  CHECK(iid.ok);
  CHECK(std::fabs(iid.lhs - ln2) < 0.01);
  CHECK(std::fabs(iid.rhs - ln2) < 0.01);
  CHECK(iid.predictors == std::vector<std::int64_t>{1, 2, 3, 4, 6, 7});

  std::vector<std::int64_t> evens;
  for (std::int64_t v = 2; v <= 40; v += 2) evens.push_back(v);
  auto st = chain_rule_bound_check(one_path(sturm, 200000, 6), IntSet(Window(1, 40), evens), quick());
  CHECK(st.ok);

  std::vector<std::int64_t> threes;
  for (std::int64_t v = 3; v <= 60; v += 3) threes.push_back(v);
  auto k3 = chain_rule_bound_check(ensemble(processes::ProcessModel{processes::KPeriodicCounterexample{3}}, 2000, 200, 9),
                                   IntSet(Window(1, 60), threes), quick());
  CHECK(k3.ok);
  CHECK(k3.lhs < 0.01);
}

TEST_CASE("undersampling and caps") {
  auto small = one_path(iid2, 500, 2);
  CHECK(block_entropy(small, 8, quick()).undersampled);
  CHECK_FALSE(block_entropy(one_path(iid2, 100000, 2), 2, quick()).undersampled);
  CHECK_THROWS_AS(block_entropy(small, 21, quick()), Error);
  std::vector<std::int64_t> far{1, 30};
  CHECK_THROWS_AS(conditional_entropy(small, 0, IntSet(Window(1, 30), far), quick()), Error);
}

TEST_CASE("bootstrap is seeded") {
  auto paths = one_path(iid2, 20000, 12);
  auto a = block_entropy(paths, 3, quick());
  auto b = block_entropy(paths, 3, quick());
  CHECK(a.std_error == b.std_error);
  CHECK(a.std_error > 0);
}
