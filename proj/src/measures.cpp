#include "predictlab/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace predictlab::measures {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MeasurePtr make(CircleMeasure::Variant v) { return std::make_shared<const CircleMeasure>(CircleMeasure{std::move(v)}); }

Complex unit_phase(long double turns) {
  // e^{-2 pi i turns}
  const double t = static_cast<double>(turns);
  return {std::cos(kTwoPi * t), -std::sin(kTwoPi * t)};
}

Complex grid_coefficient(const GridDensity& g, std::int64_t n) {
  const auto size = static_cast<std::int64_t>(g.values.size());
  if (2 * (n < 0 ? -n : n) >= size)
    fail(ErrorKind::InvalidArgument, "grid density coefficient |n| >= N/2 is aliased (n = " + std::to_string(n) +
                                         ", N = " + std::to_string(size) + ")");
  Complex acc{0, 0};
  std::int64_t step = ((n % size) + size) % size;
  std::int64_t idx = 0;
  for (std::int64_t j = 0; j < size; ++j) {
    const double angle = kTwoPi * static_cast<double>(idx) / static_cast<double>(size);
    acc += g.values[j] * Complex(std::cos(angle), -std::sin(angle));
    idx += step;
    if (idx >= size) idx -= size;
  }
  return acc / static_cast<double>(size);
}

Complex interval_coefficient(const IntervalLebesgue& iv, std::int64_t n) {
  const double len = iv.hi - iv.lo;
  if (n == 0) return {iv.scale * len, 0.0};
  const double pn = std::numbers::pi * static_cast<double>(n);
  const double s = std::sin(kTwoPi * static_cast<double>(frac_mul(n, len / 2)));
  const double mid = (iv.hi + iv.lo) / 2;
  return iv.scale * (s / pn) * unit_phase(frac_mul(n, mid));
}

}  // namespace

MeasurePtr atomic(std::vector<Atom> atoms) {
  for (auto& a : atoms) {
    require(std::isfinite(a.angle) && std::isfinite(a.mass.real()) && std::isfinite(a.mass.imag()),
            ErrorKind::InvalidArgument, "atom angle and mass must be finite");
    a.angle = frac(a.angle);
  }
  return make(Atomic{std::move(atoms)});
}

MeasurePtr grid_density(std::vector<double> values) {
  require(!values.empty() && std::has_single_bit(values.size()), ErrorKind::InvalidArgument,
          "grid density size must be a power of two");
  for (double v : values) require(std::isfinite(v), ErrorKind::InvalidArgument, "grid density values must be finite");
  return make(GridDensity{std::move(values)});
}

MeasurePtr interval_lebesgue(double lo, double hi, double scale) {
  require(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(scale), ErrorKind::InvalidArgument,
          "interval bounds must be finite");
  require(hi > lo && hi - lo <= 1.0, ErrorKind::InvalidArgument, "interval needs 0 < hi - lo <= 1");
  return make(IntervalLebesgue{lo, hi, scale});
}

MeasurePtr centered_interval(double c, double scale) { return interval_lebesgue(-c, c, scale); }

MeasurePtr lebesgue() { return interval_lebesgue(0.0, 1.0, 1.0); }

void check_riesz_gaps(const std::vector<std::int64_t>& gens, std::size_t depth) {
  require(depth <= gens.size(), ErrorKind::InvalidArgument, "Riesz depth exceeds the number of generators");
  require(depth <= 62, ErrorKind::InvalidArgument, "Riesz depth above 62 is not representable exactly");
  for (std::size_t m = 0; m < depth; ++m) {
    require(gens[m] >= 1, ErrorKind::Precondition, "Riesz generators must be positive");
    if (m > 0)
      require(static_cast<__int128>(gens[m]) > 3 * static_cast<__int128>(gens[m - 1]), ErrorKind::Precondition,
              "Riesz gap condition r_{m+1} > 3 r_m violated at m = " + std::to_string(m));
  }
}

MeasurePtr riesz_product(std::vector<std::int64_t> gens, std::size_t depth) {
  check_riesz_gaps(gens, depth);
  return make(RieszProduct{std::move(gens), depth});
}

MeasurePtr mixture(std::vector<Component> components) {
  require(!components.empty(), ErrorKind::InvalidArgument, "mixture needs at least one component");
  for (const auto& c : components) {
    require(c.measure != nullptr, ErrorKind::InvalidArgument, "mixture component without a measure");
    require(std::isfinite(c.weight), ErrorKind::InvalidArgument, "mixture weight must be finite");
  }
  return make(Mixture{std::move(components)});
}

MeasurePtr single_frequency_density(Complex c, std::int64_t q, std::size_t grid_size) {
  require(std::has_single_bit(grid_size), ErrorKind::InvalidArgument, "grid size must be a power of two");
  require(2 * std::abs(q) < static_cast<std::int64_t>(grid_size), ErrorKind::InvalidArgument,
          "frequency must lie inside the grid band");
  const double norm = 1.0 + std::norm(c);
  std::vector<double> values(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    std::int64_t idx = ((q * static_cast<std::int64_t>(j)) % static_cast<std::int64_t>(grid_size) +
                        static_cast<std::int64_t>(grid_size)) %
                       static_cast<std::int64_t>(grid_size);
    const double angle = kTwoPi * static_cast<double>(idx) / static_cast<double>(grid_size);
    values[j] = std::norm(1.0 + c * Complex(std::cos(angle), std::sin(angle))) / norm;
  }
  return grid_density(std::move(values));
}

std::optional<std::vector<int>> riesz_representation(const std::vector<std::int64_t>& gens, std::size_t depth,
                                                     std::int64_t n) {
  check_riesz_gaps(gens, depth);
  std::vector<__int128> lower(depth + 1, 0);  // lower[m] = r_0 + ... + r_{m-1}
  for (std::size_t m = 0; m < depth; ++m) lower[m + 1] = lower[m] + gens[m];
  std::vector<int> digits(depth, 0);
  __int128 rest = n;
  for (std::size_t m = depth; m-- > 0;) {
    int chosen = 0;
    int candidates = 0;
    for (int eps : {-1, 0, 1}) {
      __int128 r = rest - static_cast<__int128>(eps) * gens[m];
      if ((r < 0 ? -r : r) <= lower[m]) {
        chosen = eps;
        ++candidates;
      }
    }
    if (candidates == 0) return std::nullopt;
    if (candidates > 1) fail(ErrorKind::Numeric, "Riesz signed representation is not unique");
    digits[m] = chosen;
    rest -= static_cast<__int128>(chosen) * gens[m];
  }
  if (rest != 0) return std::nullopt;
  return digits;
}

Rational riesz_coefficient(const std::vector<std::int64_t>& gens, std::size_t depth, std::int64_t n) {
  auto rep = riesz_representation(gens, depth, n);
  if (!rep) return Rational(0);
  auto k = std::count_if(rep->begin(), rep->end(), [](int d) { return d != 0; });
  return Rational(1, std::int64_t{1} << k);
}

Complex fourier(const CircleMeasure& mu, std::int64_t n) {
  return std::visit(
      [&](const auto& m) -> Complex {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Atomic>) {
          Complex acc{0, 0};
          for (const auto& a : m.atoms) acc += a.mass * unit_phase(frac_mul(n, a.angle));
          return acc;
        } else if constexpr (std::is_same_v<M, GridDensity>) {
          return grid_coefficient(m, n);
        } else if constexpr (std::is_same_v<M, IntervalLebesgue>) {
          return interval_coefficient(m, n);
        } else if constexpr (std::is_same_v<M, RieszProduct>) {
          return {riesz_coefficient(m.gens, m.depth, n).to_double(), 0.0};
        } else {
          Complex acc{0, 0};
          for (const auto& c : m.components) acc += c.weight * fourier(*c.measure, n);
          return acc;
        }
      },
      mu.v);
}

bool is_real(const CircleMeasure& mu) {
  return std::visit(
      [](const auto& m) -> bool {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Atomic>) {
          return std::all_of(m.atoms.begin(), m.atoms.end(), [](const Atom& a) { return a.mass.imag() == 0.0; });
        } else if constexpr (std::is_same_v<M, Mixture>) {
          return std::all_of(m.components.begin(), m.components.end(),
                             [](const Component& c) { return is_real(*c.measure); });
        } else {
          return true;
        }
      },
      mu.v);
}

double aliasing_bound(const CircleMeasure& mu, std::int64_t window_width) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, GridDensity>) {
          double sup = 0;
          for (double v : m.values) sup = std::max(sup, std::fabs(v));
          return sup * static_cast<double>(window_width) / static_cast<double>(m.values.size());
        } else if constexpr (std::is_same_v<M, Mixture>) {
          double acc = 0;
          for (const auto& c : m.components) acc += std::fabs(c.weight) * aliasing_bound(*c.measure, window_width);
          return acc;
        } else {
          return 0.0;
        }
      },
      mu.v);
}

FourierWindow fourier_window(const CircleMeasure& mu, Window window, double tol) {
  FourierWindow out;
  out.first = window.lo;
  out.tol = tol;
  out.aliasing_bound = aliasing_bound(mu, window.width());
  for (std::int64_t n = window.lo;; ++n) {
    out.coefficients.push_back(fourier(mu, n));
    if (n == window.hi) break;
  }
  return out;
}

IntSet fourier_support(const CircleMeasure& mu, Window window, double tol) {
  require(tol > 0, ErrorKind::InvalidArgument, "fourier_support needs tol > 0");
  std::vector<std::int64_t> members;
  for (std::int64_t n = window.lo;; ++n) {
    if (std::abs(fourier(mu, n)) > tol) members.push_back(n);
    if (n == window.hi) break;
  }
  return IntSet(window, std::move(members));
}

PositiveDefiniteResult positive_definite_check(std::span<const Complex> seq) {
  require(!seq.empty(), ErrorKind::InvalidArgument, "positive_definite_check needs a_0");
  const auto n = static_cast<Eigen::Index>(seq.size());
  Eigen::MatrixXcd t(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) t(i, j) = i >= j ? seq[i - j] : std::conj(seq[j - i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(t, Eigen::EigenvaluesOnly);
  PositiveDefiniteResult r;
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.positive_definite = r.min_eigenvalue >= -1e-10;
  return r;
}

PositiveDefiniteResult positive_definite_check(std::span<const double> seq) {
  std::vector<Complex> c(seq.begin(), seq.end());
  return positive_definite_check(std::span<const Complex>(c));
}

ThresholdResult threshold_set(std::span<const double> seq, double eps, Window window) {
  require(eps > 0, ErrorKind::InvalidArgument, "threshold_set needs eps > 0");
  require(window.lo >= 0 && window.hi < static_cast<std::int64_t>(seq.size()), ErrorKind::InvalidArgument,
          "threshold_set: sequence does not cover the window");
  std::vector<std::int64_t> members;
  for (std::int64_t n = window.lo; n <= window.hi; ++n)
    if (seq[n] > -eps) members.push_back(n);
  ThresholdResult r{IntSet(window, std::move(members)), std::nullopt};
  r.gaps = sets::gap_statistics(r.set);
  return r;
}

BesselResult bessel_sum(const CircleMeasure& mu, const IntSet& q, double tol) {
  BesselResult r;
  for (auto s : q.members) r.sum += std::norm(fourier(mu, s));
  r.normalized = std::abs(fourier(mu, 0) - Complex(1.0, 0.0)) <= tol;
  r.sumset_ok = sets::sumset_disjoint(q, q.window);
  const std::int64_t reach = std::max(std::abs(q.window.lo), std::abs(q.window.hi));
  r.support_ok = true;
  for (std::int64_t n = -reach; n <= reach; ++n) {
    if (n == 0 || q.contains(n) || q.contains(-n)) continue;
    if (std::abs(fourier(mu, n)) > tol) {
      r.support_ok = false;
      r.support_violation = n;
      break;
    }
  }
  if (r.normalized && r.support_ok && r.sumset_ok)
    r.verdict = r.sum <= 1.0 + tol ? BesselVerdict::BoundApplies : BesselVerdict::BoundViolated;
  else
    r.verdict = BesselVerdict::BoundNotApplicable;
  return r;
}

MeasurePtr absolute_value(const CircleMeasure& mu) {
  if (const auto* a = std::get_if<Atomic>(&mu.v)) {
    std::vector<Atom> atoms;
    for (const auto& atom : a->atoms)
      atoms.push_back({atom.angle, Complex(std::abs(atom.mass), 0.0)});
    return atomic(std::move(atoms));
  }
  if (const auto* g = std::get_if<GridDensity>(&mu.v)) {
    std::vector<double> values(g->values.size());
    std::transform(g->values.begin(), g->values.end(), values.begin(), [](double v) { return std::fabs(v); });
    return grid_density(std::move(values));
  }
  fail(ErrorKind::InvalidArgument, "absolute value is implemented for Atomic and GridDensity measures only");
}

}  // namespace predictlab::measures
