#pragma once

#include <functional>
#include <span>
#include <vector>

#include "predictlab/measures.hpp"

namespace predictlab::prediction {

using measures::Complex;
using measures::MeasurePtr;

struct PredictionProblem {
  MeasurePtr measure;
  std::int64_t target = 0;
  IntSet predictors;
};

struct PredictionResult {
  double squared_error = 0;
  std::vector<Complex> coefficients;  // aligned with predictors.members
  double gram_condition = 0;          // largest / smallest eigenvalue (inf when singular)
  double regularization_used = 0;     // spectral floor when any mode was dropped, else 0
  std::size_t dropped_modes = 0;
  bool flagged() const noexcept { return regularization_used > 0; }
};

/// Best L²(mu) approximation of e^{2 pi i target x} from the span of the
/// predictor exponentials.
PredictionResult linear_prediction_error(const PredictionProblem& problem);

struct LevinsonResult {
  std::vector<double> errors;       // errors[n-1] = e_n
  std::vector<Complex> reflection;  // reflection[n-1] = kappa_n
  bool truncated = false;           // recursion stopped on e_n <= 0
};

/// Classical recursion on a_0..a_N; a_0 must be real and positive.
LevinsonResult levinson_durbin(std::span<const Complex> autocorr);
LevinsonResult levinson_durbin(std::span<const double> autocorr);

struct SzegoResult {
  double value = 0;
  double error_estimate = 0;  // |value - value on every second grid point|
  bool log_integrable = true;
  std::size_t vanishing_points = 0;  // points with f < 1e-300 (omitted when below threshold)
};

/// exp(mean log f) on a grid; 0 when more than 0.1% of the points have f < 1e-300.
SzegoResult szego_bound(std::span<const double> density);
/// Same quadrature for a density given as a function on the midpoint grid (j + 1/2)/n.
SzegoResult szego_bound(const std::function<double(double)>& density, std::size_t n);

/// True iff |mu^(n)| <= tol for all n in p. mu must be real.
bool independence_check(const measures::CircleMeasure& mu, const IntSet& p, double tol = 1e-10);

struct SimplexResult {
  bool feasible = false;
  double min_eigenvalue = 0;
};

/// Existence of r unit vectors with pairwise inner products <= -eps, decided by
/// the PSD test of (1+eps) I - eps J.
SimplexResult simplex_feasibility(double eps, std::int64_t r);

/// Squared errors e_n from linear_prediction_error with predictors {1..n}, n = 1..max_n.
std::vector<double> error_curve(const MeasurePtr& mu, std::int64_t max_n);

}  // namespace predictlab::prediction
