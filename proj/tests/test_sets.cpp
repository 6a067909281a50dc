#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "predictlab/sets.hpp"

using namespace predictlab;
using namespace predictlab::sets;

namespace {

std::vector<std::int64_t> members(const SpecPtr& s, std::int64_t lo, std::int64_t hi) {
  return materialize(s, Window(lo, hi)).members;
}

// Positive values of all signed sums e_1 g_1 + ... with e_i in {-1, 0, 1}.
std::set<std::int64_t> naive_sip(const std::vector<std::int64_t>& g) {
  std::set<std::int64_t> out;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < g.size(); ++i) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t x = c;
    std::int64_t s = 0;
    for (auto gi : g) {
      s += (static_cast<std::int64_t>(x % 3) - 1) * gi;
      x /= 3;
    }
    if (s > 0) out.insert(s);
  }
  return out;
}

}  // namespace

TEST_CASE("sip plus matches brute force") {
  CHECK(members(sip_plus({1, 4, 13}), 1, 18) == std::vector<std::int64_t>{1, 3, 4, 5, 8, 9, 10, 12, 13, 14, 16, 17, 18});
  const std::vector<std::int64_t> g{5, 25, 125, 625};
  auto oracle = naive_sip(g);
  auto got = members(sip_plus(g), 1, 800);
  std::vector<std::int64_t> want;
  for (auto v : oracle)
    if (v <= 800) want.push_back(v);
  CHECK(got == want);
}

TEST_CASE("progressions, polynomials and primes") {
  CHECK(members(progression(2, 3), 1, 10) == std::vector<std::int64_t>{2, 5, 8});
  CHECK(members(poly_image({0, 0, 1}), 1, 50) == std::vector<std::int64_t>{1, 4, 9, 16, 25, 36, 49});
  CHECK(members(primes(), 1, 30) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(materialize(primes(), Window(1, 1'000'000)).size() == 78498);
}

TEST_CASE("ip sets exclude the empty sum") {
  CHECK(members(ip({1, 3, 9}), 0, 20) == std::vector<std::int64_t>{1, 3, 4, 9, 10, 12, 13});
}

TEST_CASE("difference set and set algebra") {
  CHECK(members(difference_set(explicit_set({1, 4, 13, 40})), 1, 40) == std::vector<std::int64_t>{3, 9, 12, 27, 36, 39});
  auto evens = progression(0, 2);
  auto threes = progression(0, 3);
  CHECK(members(intersection({evens, threes}), 1, 20) == std::vector<std::int64_t>{6, 12, 18});
  CHECK(members(set_union({explicit_set({1}), explicit_set({7})}), 1, 10) == std::vector<std::int64_t>{1, 7});
  CHECK(members(complement(evens), 1, 6) == std::vector<std::int64_t>{1, 3, 5});
  CHECK(members(shift(explicit_set({1, 2}), 3), 1, 10) == std::vector<std::int64_t>{4, 5});
  CHECK(members(dilate(explicit_set({1, 2}), 3), 1, 10) == std::vector<std::int64_t>{3, 6});
}

TEST_CASE("lacunary sets grow by the ratio") {
  CHECK(members(lacunary(3, Rational(5, 1)), 1, 10000) == std::vector<std::int64_t>{3, 15, 75, 375, 1875, 9375});
  // ceil(l * 9/2): 2, 9, 41, 185
  CHECK(members(lacunary(2, Rational(9, 2)), 1, 200) == std::vector<std::int64_t>{2, 9, 41, 185});
}

TEST_CASE("gap statistics") {
  auto g = gap_statistics(IntSet(Window(1, 10), {2, 5, 8}));
  REQUIRE(g);
  CHECK(g->max_gap == 3);
  CHECK(g->leading_gap == 1);
  CHECK(g->trailing_gap == 2);
  CHECK(g->histogram.at(3) == 2);
  CHECK(gap_statistics(materialize(progression(0, 3), Window(1, 3000)))->max_gap == 3);
  CHECK_FALSE(gap_statistics(IntSet(Window(1, 5), {})));
}

TEST_CASE("complement of squares") {
  auto s = materialize(complement(poly_image({0, 0, 1})), Window(1, 1'000'000));
  auto g = gap_statistics(s);
  REQUIRE(g);
  // every square n^2 >= 4 sits between two members, leaving a gap of exactly 2
  CHECK(g->max_gap == 2);
  std::int64_t max_after_5 = 0;
  for (std::size_t i = 1; i < s.members.size(); ++i)
    if (s.members[i - 1] >= 5) max_after_5 = std::max(max_after_5, s.members[i] - s.members[i - 1]);
  CHECK(max_after_5 == 2);
}

TEST_CASE("sumset disjointness") {
  auto squares = materialize(poly_image({0, 0, 1}), Window(1, 10000));
  auto cx = sumset_counterexample(squares, squares.window);
  REQUIRE(cx);
  CHECK(cx->a + cx->b == cx->sum);
  CHECK(cx->sum == 25);
  auto cubes = materialize(poly_image({0, 0, 0, 1}), Window(1, 1'000'000));
  CHECK(sumset_disjoint(cubes, cubes.window));
  auto small = sumset_counterexample(IntSet(Window(1, 3), {1, 2, 3}), Window(1, 3));
  REQUIRE(small);
  CHECK(small->sum == 2);  // 1 + 1: a = b is allowed
}

TEST_CASE("sip star witness") {
  CHECK(sip_star_witness({1, 4, 13}, *progression(0, 2), Window(1, 20)) == 4);
  CHECK_FALSE(sip_star_witness({5, 25, 125}, *complement(sip_plus({5, 25, 125})), Window(1, 200)));
  CHECK(sip_star_witness({1, 4, 13}, *explicit_set({3}), Window(1, 20)) == 3);
}

TEST_CASE("smallness check") {
  auto s = materialize(sip_plus({5, 25, 125}), Window(1, 700));
  auto r = smallness_check(s, 3);
  CHECK(r.status == SmallnessStatus::Checked);
  CHECK(r.bound == 28);
  CHECK(r.ok);
  // independent scan of avoiders {i : [i, i+3] misses s}
  std::set<std::int64_t> in(s.members.begin(), s.members.end());
  std::vector<std::int64_t> av;
  for (std::int64_t i = 1; i + 3 <= 700; ++i) {
    bool miss = true;
    for (std::int64_t j = i; j <= i + 3; ++j) miss = miss && !in.count(j);
    if (miss) av.push_back(i);
  }
  std::int64_t gap = 0;
  for (std::size_t i = 1; i < av.size(); ++i) gap = std::max(gap, av[i] - av[i - 1]);
  CHECK(r.max_gap_of_avoiders == gap);
  CHECK(r.avoider_count == static_cast<std::int64_t>(av.size()));

  auto all = smallness_check(materialize(progression(1, 1), Window(1, 100)), 1);
  CHECK(all.status == SmallnessStatus::NoAvoiders);
  CHECK_FALSE(all.ok);
  auto none = smallness_check(IntSet(Window(1, 100), {}), 1);
  CHECK(none.max_gap_of_avoiders == 1);
}

TEST_CASE("delta r set") {
  CHECK(delta_r_set(IntSet(Window(1, 20), {2, 5, 11})).members == std::vector<std::int64_t>{3, 6, 9});
  CHECK(delta_r_set(IntSet(Window(1, 2), {1, 2})).members == std::vector<std::int64_t>{1});
  CHECK(delta_r_set(IntSet(Window(1, 40), {1, 4, 13, 40})).size() == 6);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(Window(5, 1), Error);
  Budget tiny;
  tiny.enumeration_cap = 100;
  try {
    materialize(progression(1, 1), Window(1, 1000), tiny);
    FAIL("expected a budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Budget);
  }
  CHECK_THROWS_AS(progression(0, 0), Error);
  CHECK_THROWS_AS(checked_mul(INT64_MAX, 2), Error);
}
