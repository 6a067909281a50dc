#pragma once

#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "predictlab/common.hpp"

namespace predictlab::dynamics {

using BigInt = boost::multiprecision::cpp_int;

/// Rotation by `step` on Z/q.
struct FiniteCycle {
  std::int64_t q = 1;
  std::int64_t step = 1;  // reduced mod q
};
/// x -> x + alpha on T^d.
struct TorusRotation { std::vector<double> alpha; };
/// S(x, y) = (x + y, y + alpha); alpha = 0 gives T(x, y) = (x + y, y).
struct SkewProduct { double alpha = 0; };
/// T(x, y) = (x + alpha, y + 2x + alpha); the orbit of the origin is (n alpha, n^2 alpha).
struct QuadraticSkew { double alpha = 0; };

using RotationSystem = std::variant<FiniteCycle, TorusRotation, SkewProduct, QuadraticSkew>;

RotationSystem finite_cycle(std::int64_t q, std::int64_t step);
RotationSystem torus_rotation(std::vector<double> alpha);

/// Number of torus coordinates (0 for FiniteCycle).
std::size_t dimension(const RotationSystem& sys);

/// Arc [a, b) of the circle; a > b wraps through 0. [0, 1) is the full circle.
struct Arc {
  double a = 0;
  double b = 1;
  double length() const noexcept { return a < b ? b - a : 1.0 - a + b; }
  bool contains(double x) const noexcept { return a < b ? (x >= a && x < b) : (x >= a || x < b); }
};

struct CycleSubset { std::vector<std::int64_t> residues; };
struct Box { std::vector<Arc> arcs; };
using TargetSet = std::variant<CycleSubset, Box>;

/// A point of the phase space: `residue` for cycles, `coords` otherwise.
struct Point {
  std::int64_t residue = 0;
  std::vector<double> coords;
};

/// T^n(x) for any integer n, computed in closed form with exact fractional parts.
Point iterate(const RotationSystem& sys, const Point& x, std::int64_t n);

/// An IntSet with a provenance tag: exact (cyclic arithmetic) or approximate
/// (floating torus arithmetic, decided at tolerance `tol`).
struct TaggedSet {
  IntSet set;
  bool exact = true;
  double tol = 0;
  std::int64_t boundary_hits = 0;  // decisions within tol of an arc endpoint
};

/// N(U, U) = {n : mu(U ∩ T^-n U) > 0} on the window. Supported for cycles and torus rotations.
TaggedSet return_times(const RotationSystem& sys, const TargetSet& u, Window window, double tol,
                       const Budget& budget = Budget::defaults());

/// N(x, U) = {n : T^n x ∈ U} on the window.
TaggedSet visit_times(const RotationSystem& sys, const Point& x, const TargetSet& u, Window window, double tol,
                      const Budget& budget = Budget::defaults());

/// Exact correlations mu(A ∩ T^-n A) for lags 0..maxlag.
std::vector<Rational> correlation_sequence(const FiniteCycle& sys, const CycleSubset& a, std::int64_t maxlag);

/// {n : mu(A ∩ T^-n A) > mu(A)^2 - eps}.
IntSet khintchine_set(const FiniteCycle& sys, const CycleSubset& a, double eps, Window window,
                      const Budget& budget = Budget::defaults());

struct AvoiderCertificate {
  BigInt numerator;    // alpha = numerator / denominator exactly
  BigInt denominator;
  double alpha = 0;
  std::vector<BigInt> interval_index;  // level i interval is [(4k+1)/(4 l_i), (4k+3)/(4 l_i)]
};

/// Nested-interval descent for alpha with frac(l_i alpha) ∈ [1/4, 3/4] for i < depth.
/// Requires l_{i+1} > 4 l_i.
AvoiderCertificate lacunary_avoider(const std::vector<BigInt>& lambdas, std::size_t depth);

/// Direct modular check of a certificate: frac(l_i * num / den) ∈ [1/4, 3/4] for all i < depth.
bool verify_avoider(const std::vector<BigInt>& lambdas, std::size_t depth, const BigInt& numerator,
                    const BigInt& denominator);

/// {i : binary digit sum of i is even}, i.e. positions of 1 in 1,0,0,1,0,1,1,0,...
IntSet thue_morse_set(Window window, const Budget& budget = Budget::defaults());

}  // namespace predictlab::dynamics
