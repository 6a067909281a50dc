#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "predictlab/dynamics.hpp"
#include "predictlab/sets.hpp"

using namespace predictlab;
using namespace predictlab::dynamics;
using boost::multiprecision::cpp_rational;

namespace {

using V = std::vector<std::int64_t>;

CycleSubset subset(V r) { return CycleSubset{std::move(r)}; }

// frac(x) with x a long double, as an oracle independent of frac_mul.
double slow_frac(std::int64_t n, double a) {
  long double v = static_cast<long double>(n) * static_cast<long double>(a);
  return static_cast<double>(v - std::floor(v));
}

}  // namespace

TEST_CASE("cycle return times") {
  auto sys = finite_cycle(5, 1);
  auto t = return_times(sys, subset({0}), Window(1, 12), 0.0);
  CHECK(t.exact);
  CHECK(t.set.members == V{5, 10});
  auto whole = return_times(sys, subset({0, 1, 2, 3, 4}), Window(1, 12), 0.0);
  CHECK(whole.set.size() == 12);

  // symmetry n -> q - n and multiples of q, against a direct orbit scan
  auto sys2 = finite_cycle(12, 5);
  const V a{0, 1, 7};
  auto r = return_times(sys2, subset(a), Window(1, 48), 0.0);
  V oracle;
  for (std::int64_t n = 1; n <= 48; ++n) {
    bool hit = false;
    for (auto x : a)
      for (auto y : a) hit = hit || (x + 5 * n) % 12 == y;
    if (hit) oracle.push_back(n);
  }
  CHECK(r.set.members == oracle);
  for (auto n : r.set.members)
    if (n % 12) CHECK(r.set.contains(12 - n % 12));
}

TEST_CASE("torus return times") {
  auto t = return_times(torus_rotation({0.5}), Box{{Arc{0, 0.25}}}, Window(1, 6), 1e-12);
  CHECK_FALSE(t.exact);
  CHECK(t.set.members == V{2, 4, 6});
  auto full = return_times(torus_rotation({0.3}), Box{{Arc{0, 1}}}, Window(1, 10), 1e-12);
  CHECK(full.set.size() == 10);
  // arcs [0, 0.1): overlap after rotation iff the distance of n alpha to Z is < 0.1
  const double alpha = 0.6180339887498949;
  auto g = return_times(torus_rotation({alpha}), Box{{Arc{0, 0.1}}}, Window(1, 2000), 1e-12);
  V oracle;
  for (std::int64_t n = 1; n <= 2000; ++n) {
    const double f = slow_frac(n, alpha);
    if (std::min(f, 1 - f) < 0.1) oracle.push_back(n);
  }
  CHECK(g.set.members == oracle);
  CHECK_THROWS_AS(return_times(torus_rotation({0.3}), Box{{Arc{0, 0.5}}}, Window(1, 10), 0.0), Error);
}

TEST_CASE("visit times") {
  auto c = visit_times(finite_cycle(5, 1), Point{0, {}}, subset({0}), Window(1, 12), 0.0);
  CHECK(c.set.members == V{5, 10});
  const double alpha = 0.6180339887498949;
  auto t = visit_times(torus_rotation({alpha}), Point{0, {0.0}}, Box{{Arc{0, 0.5}}}, Window(1, 10), 1e-12);
  V oracle;
  for (std::int64_t n = 1; n <= 10; ++n)
    if (slow_frac(n, alpha) < 0.5) oracle.push_back(n);
  CHECK(t.set.members == oracle);
  CHECK(oracle == V{2, 4, 5, 7, 10});
}

TEST_CASE("skew orbits follow (n alpha, n^2 alpha)") {
  const double alpha = std::sqrt(2.0) - 1;
  RotationSystem skew = QuadraticSkew{alpha};
  for (std::int64_t n : {1, 2, 7, 100, 12345}) {
    auto p = iterate(skew, Point{0, {0.0, 0.0}}, n);
    CHECK(p.coords[0] == doctest::Approx(slow_frac(n, alpha)).epsilon(1e-9));
    const double want = slow_frac(n * n, alpha);
    const double d = std::fabs(p.coords[1] - want);
    CHECK(std::min(d, 1 - d) < 1e-8);
  }
  // squared-orbit visits {n : frac(n^2 alpha) in (-eps, eps)}
  const double eps = 0.05;
  auto v = visit_times(skew, Point{0, {0.0, 0.0}}, Box{{Arc{0, 1}, Arc{1 - eps, eps}}}, Window(1, 500), 1e-12);
  V oracle;
  for (std::int64_t n = 1; n <= 500; ++n) {
    const double f = slow_frac(n * n, alpha);
    if (f < eps || f >= 1 - eps) oracle.push_back(n);
  }
  CHECK(v.set.members == oracle);
  CHECK_THROWS_AS(return_times(skew, Box{{Arc{0, 1}, Arc{0, 0.1}}}, Window(1, 5), 1e-12), Error);
}

TEST_CASE("correlation sequence") {
  auto s = correlation_sequence(FiniteCycle{5, 1}, subset({0}), 6);
  REQUIRE(s.size() == 7);  // lags 0..6
  CHECK(s[0] == Rational(1, 5));
  for (int n = 1; n <= 4; ++n) CHECK(s[n] == Rational(0));
  CHECK(s[5] == Rational(1, 5));
  auto all = correlation_sequence(FiniteCycle{4, 1}, subset({0, 1, 2, 3}), 5);
  for (const auto& v : all) CHECK(v == Rational(1));
  auto two = correlation_sequence(FiniteCycle{2, 1}, subset({0}), 3);
  CHECK(two[1] == Rational(0));
  CHECK(two[2] == Rational(1, 2));
}

TEST_CASE("khintchine sets") {
  auto s = khintchine_set(FiniteCycle{5, 1}, subset({0}), 0.03, Window(1, 50));
  V mult5;
  for (std::int64_t n = 5; n <= 50; n += 5) mult5.push_back(n);
  CHECK(s.members == mult5);
  CHECK(sets::gap_statistics(s)->max_gap == 5);
  auto full = khintchine_set(FiniteCycle{5, 1}, subset({0}), 0.04, Window(1, 20));
  CHECK(full.size() == 20);
  auto s6 = khintchine_set(FiniteCycle{6, 1}, subset({0, 3}), 0.05, Window(1, 30));
  V mult3;
  for (std::int64_t n = 3; n <= 30; n += 3) mult3.push_back(n);
  CHECK(s6.members == mult3);
  // gaps shrink weakly as eps grows
  std::int64_t prev = INT64_MAX;
  for (double eps : {0.001, 0.01, 0.05, 0.1, 0.2}) {
    auto g = sets::gap_statistics(khintchine_set(FiniteCycle{17, 3}, subset({0, 2, 5, 11}), eps, Window(1, 340)));
    REQUIRE(g);
    CHECK(g->max_gap <= prev);
    prev = g->max_gap;
  }
}

TEST_CASE("lacunary avoider certificates") {
  auto check = [](const std::vector<BigInt>& lambdas, std::size_t depth) {
    auto cert = lacunary_avoider(lambdas, depth);
    REQUIRE(verify_avoider(lambdas, depth, cert.numerator, cert.denominator));
    // independent rational frac check
    cpp_rational alpha(cert.numerator, cert.denominator);
    for (std::size_t i = 0; i < depth; ++i) {
      cpp_rational x = alpha * cpp_rational(lambdas[i]);
      BigInt fl = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
      cpp_rational f = x - cpp_rational(fl);
      CHECK(f >= cpp_rational(1, 4));
      CHECK(f <= cpp_rational(3, 4));
    }
  };
  std::vector<BigInt> powers;
  BigInt p = 1;
  for (int i = 0; i < 30; ++i) {
    p *= 5;
    powers.push_back(p);
  }
  check(powers, 30);
  check({BigInt(2)}, 1);
  std::vector<BigInt> l{8};
  for (int i = 1; i < 10; ++i) l.push_back(l.back() * 4 + 1);
  check(l, 10);
  CHECK_FALSE(verify_avoider({BigInt(2)}, 1, BigInt(0), BigInt(1)));
  CHECK_THROWS_AS(lacunary_avoider({BigInt(2), BigInt(3)}, 2), Error);
}

TEST_CASE("thue morse") {
  CHECK(thue_morse_set(Window(0, 7)).members == V{0, 3, 5, 6});
  CHECK(thue_morse_set(Window(8, 15)).members == V{9, 10, 12, 15});
  auto big = thue_morse_set(Window(0, 100000));
  for (auto n : big.members) CHECK(__builtin_popcountll(static_cast<unsigned long long>(n)) % 2 == 0);
  CHECK(sets::gap_statistics(big)->max_gap <= 3);
}
