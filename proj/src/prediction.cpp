#include "predictlab/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>

namespace predictlab::prediction {

namespace {

constexpr double kSpectralFloor = 1e-12;
constexpr double kVanishing = 1e-300;
constexpr double kVanishingShare = 1e-3;

struct CoefficientCache {
  const measures::CircleMeasure& mu;
  std::unordered_map<std::int64_t, Complex> seen;

  Complex operator()(std::int64_t n) {
    auto it = seen.find(n);
    if (it != seen.end()) return it->second;
    return seen.emplace(n, measures::fourier(mu, n)).first->second;
  }
};

SzegoResult szego_from_logs(const std::vector<double>& logs, std::size_t total, std::size_t vanishing,
                            double half_mean) {
  SzegoResult r;
  r.vanishing_points = vanishing;
  if (static_cast<double>(vanishing) > kVanishingShare * static_cast<double>(total)) {
    r.log_integrable = false;
    return r;
  }
  double sum = 0;
  for (double v : logs) sum += v;
  const double mean = logs.empty() ? 0.0 : sum / static_cast<double>(logs.size());
  r.value = std::exp(mean);
  r.error_estimate = std::fabs(r.value - std::exp(half_mean));
  return r;
}

// Accumulates log f over a grid, skipping points where f vanishes; also tracks
// the mean over even-indexed points for the error estimate.
template <typename Sample>
SzegoResult szego_impl(std::size_t n, Sample&& sample) {
  require(n >= 2, ErrorKind::InvalidArgument, "szego_bound needs at least two grid points");
  std::vector<double> logs;
  logs.reserve(n);
  std::size_t vanishing = 0;
  double half_sum = 0;
  std::size_t half_count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double f = sample(j);
    require(std::isfinite(f) && f >= 0, ErrorKind::InvalidArgument, "szego_bound: density must be finite and >= 0");
    if (f < kVanishing) {
      ++vanishing;
      continue;
    }
    const double l = std::log(f);
    logs.push_back(l);
    if (j % 2 == 0) {
      half_sum += l;
      ++half_count;
    }
  }
  return szego_from_logs(logs, n, vanishing, half_count ? half_sum / static_cast<double>(half_count) : 0.0);
}

}  // namespace

PredictionResult linear_prediction_error(const PredictionProblem& problem) {
  require(problem.measure != nullptr, ErrorKind::InvalidArgument, "prediction problem without a measure");
  require(!problem.predictors.empty(), ErrorKind::InvalidArgument, "prediction needs at least one predictor");
  require(!problem.predictors.contains(problem.target), ErrorKind::InvalidArgument,
          "the target frequency may not be a predictor");
  CoefficientCache coef{*problem.measure, {}};
  const auto& p = problem.predictors.members;
  const auto m = static_cast<Eigen::Index>(p.size());

  Eigen::MatrixXcd gram(m, m);
  Eigen::VectorXcd rhs(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    rhs(j) = coef(checked_sub(p[j], problem.target));
    for (Eigen::Index k = 0; k < m; ++k) gram(j, k) = coef(checked_sub(p[j], p[k]));
  }
  const double mass = coef(0).real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Numeric, "Gram eigendecomposition failed");
  const auto& lambda = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();
  const double lmax = lambda.maxCoeff();
  const double lmin = lambda.minCoeff();

  PredictionResult r;
  r.gram_condition = lmin > 0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  const double floor = kSpectralFloor * std::max(lmax, 0.0);
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (lambda(i) <= floor) {
      ++r.dropped_modes;
      continue;
    }
    const Complex proj = vecs.col(i).dot(rhs);  // conj(v)^T rhs
    a += vecs.col(i) * (proj / lambda(i));
  }
  if (r.dropped_modes > 0) r.regularization_used = floor > 0 ? floor : kSpectralFloor;

  const Complex cross = a.dot(rhs);                  // sum conj(a_j) h_j
  const Complex quad = a.dot(gram * a);              // a^H G a
  double err = mass - 2.0 * cross.real() + quad.real();
  r.squared_error = std::clamp(err, 0.0, std::max(mass, 0.0));
  r.coefficients.assign(a.data(), a.data() + m);
  return r;
}

LevinsonResult levinson_durbin(std::span<const Complex> autocorr) {
  require(!autocorr.empty(), ErrorKind::InvalidArgument, "levinson_durbin needs a_0");
  require(autocorr[0].real() > 0 && std::fabs(autocorr[0].imag()) <= 1e-12 * autocorr[0].real(),
          ErrorKind::Precondition, "levinson_durbin needs a real positive a_0");
  const std::size_t n = autocorr.size() - 1;
  LevinsonResult out;
  std::vector<Complex> a;  // current predictor coefficients a_1..a_m
  double e = autocorr[0].real();
  const double breakdown = 1e-14 * e;
  for (std::size_t m = 1; m <= n; ++m) {
    Complex num = autocorr[m];
    for (std::size_t k = 1; k < m; ++k) num -= a[k - 1] * autocorr[m - k];
    const Complex kappa = num / e;
    std::vector<Complex> next(m);
    for (std::size_t k = 1; k < m; ++k) next[k - 1] = a[k - 1] - kappa * std::conj(a[m - k - 1]);
    next[m - 1] = kappa;
    const double e_next = e * (1.0 - std::norm(kappa));
    if (!(e_next > breakdown)) {
      out.truncated = true;
      break;
    }
    a = std::move(next);
    e = e_next;
    out.errors.push_back(e);
    out.reflection.push_back(kappa);
  }
  return out;
}

LevinsonResult levinson_durbin(std::span<const double> autocorr) {
  std::vector<Complex> c(autocorr.begin(), autocorr.end());
  return levinson_durbin(std::span<const Complex>(c));
}

SzegoResult szego_bound(std::span<const double> density) {
  double peak = 0;
  for (double v : density) peak = std::max(peak, std::fabs(v));
  const double slack = 1e-12 * peak;
  return szego_impl(density.size(), [&](std::size_t j) {
    const double v = density[j];
    return v < 0 && v >= -slack ? 0.0 : v;
  });
}

SzegoResult szego_bound(const std::function<double(double)>& density, std::size_t n) {
  return szego_impl(n, [&](std::size_t j) {
    return density((static_cast<double>(j) + 0.5) / static_cast<double>(n));
  });
}

bool independence_check(const measures::CircleMeasure& mu, const IntSet& p, double tol) {
  require(measures::is_real(mu), ErrorKind::Precondition, "independence_check needs a real measure");
  return std::all_of(p.members.begin(), p.members.end(),
                     [&](std::int64_t n) { return std::abs(measures::fourier(mu, n)) <= tol; });
}

SimplexResult simplex_feasibility(double eps, std::int64_t r) {
  require(eps > 0 && std::isfinite(eps), ErrorKind::InvalidArgument, "simplex_feasibility needs eps > 0");
  require(r >= 2 && r <= 4096, ErrorKind::InvalidArgument, "simplex_feasibility needs 2 <= r <= 4096");
  const auto size = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(size, size, -eps);
  g.diagonal().setConstant(1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  SimplexResult out;
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.feasible = out.min_eigenvalue >= -1e-9 * (1.0 + eps * static_cast<double>(r));
  return out;
}

std::vector<double> error_curve(const MeasurePtr& mu, std::int64_t max_n) {
  require(mu != nullptr && max_n >= 1, ErrorKind::InvalidArgument, "error_curve needs a measure and max_n >= 1");
  std::vector<Complex> autocorr;
  for (std::int64_t k = 0; k <= max_n; ++k) autocorr.push_back(measures::fourier(*mu, k));
  return levinson_durbin(std::span<const Complex>(autocorr)).errors;
}

}  // namespace predictlab::prediction
