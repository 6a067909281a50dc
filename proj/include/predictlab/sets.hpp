#pragma once

#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "predictlab/common.hpp"

namespace predictlab::sets {

struct SetSpec;
using SpecPtr = std::shared_ptr<const SetSpec>;

struct Explicit { std::vector<std::int64_t> members; };
/// Two-sided progression {a + k d : k in Z}; use the window to truncate.
struct ArithmeticProgression { std::int64_t a = 0; std::int64_t d = 1; };
/// SIP+(gens) = {sum eps_i g_i : eps_i in {-1,0,1}} intersected with N.
struct SIPPlus { std::vector<std::int64_t> gens; };
/// IP(gens) = nonempty finite sums of distinct generators.
struct IP { std::vector<std::int64_t> gens; };
/// lambda_1 = seed, lambda_{i+1} = ceil(ratio * lambda_i).
struct Lacunary { std::int64_t seed = 1; Rational ratio{2}; };
/// {p(n) : n in N} with p(n) = sum coeffs[i] n^i.
struct PolyImage { std::vector<std::int64_t> coeffs; };
/// Delta(A) = {|a - b| : a != b in A}; A is materialized on `inner_window`
/// (defaults to the query window).
struct DifferenceSet { SpecPtr inner; std::optional<Window> inner_window; };
struct Complement { SpecPtr inner; };
struct Union { std::vector<SpecPtr> parts; };
struct Intersection { std::vector<SpecPtr> parts; };
struct Shift { SpecPtr inner; std::int64_t k = 0; };
struct Dilate { SpecPtr inner; std::int64_t k = 1; };
struct Primes {};

/// Symbolic generator for a subset of Z. Infinite sets only ever exist here;
/// `materialize` realizes them on a window.
struct SetSpec {
  using Variant = std::variant<Explicit, ArithmeticProgression, SIPPlus, IP, Lacunary, PolyImage,
                               DifferenceSet, Complement, Union, Intersection, Shift, Dilate, Primes>;
  Variant v;
};

// Constructors. These validate the per-variant invariants.
SpecPtr explicit_set(std::vector<std::int64_t> members);
SpecPtr progression(std::int64_t a, std::int64_t d);
SpecPtr sip_plus(std::vector<std::int64_t> gens);
SpecPtr ip(std::vector<std::int64_t> gens);
SpecPtr lacunary(std::int64_t seed, Rational ratio);
SpecPtr poly_image(std::vector<std::int64_t> coeffs);
SpecPtr difference_set(SpecPtr inner, std::optional<Window> inner_window = std::nullopt);
SpecPtr complement(SpecPtr inner);
SpecPtr set_union(std::vector<SpecPtr> parts);
SpecPtr intersection(std::vector<SpecPtr> parts);
SpecPtr shift(SpecPtr inner, std::int64_t k);
SpecPtr dilate(SpecPtr inner, std::int64_t k);
SpecPtr primes();

/// Realize `spec` on `window`. Throws ErrorKind::Budget when the enumeration
/// would exceed `budget.enumeration_cap` generated values.
IntSet materialize(const SetSpec& spec, Window window, const Budget& budget = Budget::defaults());
inline IntSet materialize(const SpecPtr& spec, Window window, const Budget& budget = Budget::defaults()) {
  return materialize(*spec, window, budget);
}

struct GapStats {
  std::int64_t max_gap = 0;               // over consecutive members
  std::map<std::int64_t, std::int64_t> histogram;  // gap -> count
  std::int64_t leading_gap = 0;           // first member - window.lo
  std::int64_t trailing_gap = 0;          // window.hi - last member
};

/// Gap statistics; std::nullopt is the explicit empty-set result.
std::optional<GapStats> gap_statistics(const IntSet& s);

struct SumsetCounterexample {
  std::int64_t a, b, sum;
};

/// Window test for (Q + Q) ∩ Q = ∅ (a = b allowed). Returns the counterexample
/// with the smallest sum, then the smallest a, or std::nullopt when disjoint.
std::optional<SumsetCounterexample> sumset_counterexample(const IntSet& q, Window window);
inline bool sumset_disjoint(const IntSet& q, Window window) { return !sumset_counterexample(q, window); }

/// Smallest element of SIP+(gens) ∩ p inside the window. std::nullopt means
/// inconclusive on this window, never a disproof.
std::optional<std::int64_t> sip_star_witness(const std::vector<std::int64_t>& gens, const SetSpec& p,
                                             Window window, const Budget& budget = Budget::defaults());

enum class SmallnessStatus { Checked, NoAvoiders, Inconclusive };

struct SmallnessResult {
  SmallnessStatus status = SmallnessStatus::Inconclusive;
  std::int64_t max_gap_of_avoiders = 0;
  std::int64_t bound = 0;  // n + 5^(m+1), m least with n < 5^m
  bool ok = false;
  std::int64_t avoider_count = 0;
};

/// Gaps of {i : [i, i+n] ∩ s = ∅} with [i, i+n] inside s.window, compared
/// against the base-5 bound.
SmallnessResult smallness_check(const IntSet& s, std::int64_t n);

/// Delta(A) materialized on [1, max(A) - min(A)]. Throws for |A| < 2.
IntSet delta_r_set(const IntSet& a);

}  // namespace predictlab::sets
