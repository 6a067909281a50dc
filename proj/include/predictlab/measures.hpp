#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "predictlab/common.hpp"
#include "predictlab/sets.hpp"

namespace predictlab::measures {

using Complex = std::complex<double>;

struct CircleMeasure;
using MeasurePtr = std::shared_ptr<const CircleMeasure>;

struct Atom {
  double angle = 0;  // in [0, 1)
  Complex mass{1.0, 0.0};
};
struct Atomic { std::vector<Atom> atoms; };

/// Density f(j/N) on the uniform grid of N = 2^k points, with respect to
/// Lebesgue measure on [0, 1).
struct GridDensity { std::vector<double> values; };

/// scale * Lebesgue restricted to [lo, hi] (mod 1); hi - lo ∈ (0, 1].
struct IntervalLebesgue {
  double lo = 0;
  double hi = 1;
  double scale = 1;
};

/// Probability measure with density prod_{m <= depth} (1 + cos(2 pi r_m x)),
/// r_{m+1} > 3 r_m.
struct RieszProduct {
  std::vector<std::int64_t> gens;
  std::size_t depth = 0;
};

struct Component {
  double weight = 1;
  MeasurePtr measure;
};
struct Mixture { std::vector<Component> components; };

struct CircleMeasure {
  using Variant = std::variant<Atomic, GridDensity, IntervalLebesgue, RieszProduct, Mixture>;
  Variant v;
};

MeasurePtr atomic(std::vector<Atom> atoms);
MeasurePtr grid_density(std::vector<double> values);
MeasurePtr interval_lebesgue(double lo, double hi, double scale = 1.0);
/// Lebesgue measure on [-c, c] mod 1, times `scale`.
MeasurePtr centered_interval(double c, double scale = 1.0);
MeasurePtr lebesgue();
MeasurePtr riesz_product(std::vector<std::int64_t> gens, std::size_t depth);
MeasurePtr mixture(std::vector<Component> components);
/// Density |1 + c e^{2 pi i q x}|^2 / (1 + |c|^2) sampled on an N-point grid.
MeasurePtr single_frequency_density(Complex c, std::int64_t q, std::size_t grid_size);

/// mu^(n) = ∫ e^{-2 pi i n t} dmu(t). Throws for GridDensity when |n| >= N/2.
Complex fourier(const CircleMeasure& mu, std::int64_t n);
inline Complex fourier(const MeasurePtr& mu, std::int64_t n) { return fourier(*mu, n); }

/// True when every mass / density / weight is real (so mu^(-n) = conj mu^(n)).
bool is_real(const CircleMeasure& mu);

/// ‖f‖∞ (window width) / N summed over grid components; 0 when no grid is involved.
double aliasing_bound(const CircleMeasure& mu, std::int64_t window_width);

/// Signed-digit representation n = sum eps_m r_m (eps in {-1,0,1}) under the
/// gap condition, found greedily from the largest generator.
std::optional<std::vector<int>> riesz_representation(const std::vector<std::int64_t>& gens, std::size_t depth,
                                                     std::int64_t n);

/// Exact Riesz product coefficient: 2^-k when n has a representation with k
/// nonzero digits, else 0.
Rational riesz_coefficient(const std::vector<std::int64_t>& gens, std::size_t depth, std::int64_t n);

/// Validates r_1 >= 1, r_{m+1} > 3 r_m over the first `depth` generators.
void check_riesz_gaps(const std::vector<std::int64_t>& gens, std::size_t depth);

struct FourierWindow {
  std::int64_t first = 0;            // index of coefficients[0]
  std::vector<Complex> coefficients;
  double tol = 1e-10;
  double aliasing_bound = 0;
};

FourierWindow fourier_window(const CircleMeasure& mu, Window window, double tol = 1e-10);

/// {n ∈ window : |mu^(n)| > tol}.
IntSet fourier_support(const CircleMeasure& mu, Window window, double tol = 1e-10);

struct PositiveDefiniteResult {
  bool positive_definite = false;
  double min_eigenvalue = 0;
};

/// PSD test of the Hermitian Toeplitz matrix [a_{i-j}] (a_{-k} = conj a_k) of
/// size N+1, with eigenvalue tolerance -1e-10.
PositiveDefiniteResult positive_definite_check(std::span<const Complex> seq);
PositiveDefiniteResult positive_definite_check(std::span<const double> seq);

struct ThresholdResult {
  IntSet set;
  std::optional<sets::GapStats> gaps;
};

/// {n ∈ window : a_n > -eps}; `seq[n]` is a_n and must cover the window.
ThresholdResult threshold_set(std::span<const double> seq, double eps, Window window);

enum class BesselVerdict { BoundApplies, BoundNotApplicable, BoundViolated };

struct BesselResult {
  double sum = 0;
  BesselVerdict verdict = BesselVerdict::BoundNotApplicable;
  bool normalized = false;
  bool support_ok = false;
  bool sumset_ok = false;
  std::optional<std::int64_t> support_violation;  // first n with |mu^(n)| > tol outside ±Q ∪ {0}
};

/// sum_{s ∈ q} |mu^(s)|^2, with the bound sum <= 1 asserted only when mu^(0) = 1,
/// the Fourier support lies in Q ∪ -Q ∪ {0}, and (Q + Q) ∩ Q = ∅ are all
/// verified on the window.
BesselResult bessel_sum(const CircleMeasure& mu, const IntSet& q, double tol = 1e-10);

/// |mu| for Atomic (|Re m| + |Im m| per atom) and GridDensity (pointwise |f|).
MeasurePtr absolute_value(const CircleMeasure& mu);

}  // namespace predictlab::measures
