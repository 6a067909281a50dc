#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "predictlab/prediction.hpp"
#include "predictlab/sets.hpp"

using namespace predictlab;
using namespace predictlab::prediction;
using measures::Atom;

namespace {

constexpr double pi = std::numbers::pi;

IntSet range_set(std::int64_t lo, std::int64_t hi, std::int64_t step = 1) {
  std::vector<std::int64_t> m;
  for (std::int64_t v = lo; v <= hi; v += step) m.push_back(v);
  return IntSet(Window(lo, hi), m);
}

// Residual of the returned predictor evaluated directly on the atoms.
double atomic_residual(const std::vector<Atom>& atoms, std::int64_t target, const IntSet& p, const PredictionResult& r) {
  double err = 0;
  for (const auto& a : atoms) {
    Complex f = std::exp(Complex(0, 2 * pi * static_cast<double>(target) * a.angle));
    for (std::size_t k = 0; k < p.members.size(); ++k)
      f -= r.coefficients[k] * std::exp(Complex(0, 2 * pi * static_cast<double>(p.members[k]) * a.angle));
    err += a.mass.real() * std::norm(f);
  }
  return err;
}

}  // namespace

TEST_CASE("single atom is predicted exactly") {
  auto mu = measures::atomic({Atom{0.0, 1.0}});
  auto r = linear_prediction_error({mu, 0, IntSet(Window(1, 1), {1})});
  CHECK(r.squared_error < 1e-14);
  REQUIRE(r.coefficients.size() == 1);
  CHECK(std::abs(r.coefficients[0] - Complex(1, 0)) < 1e-12);
}

TEST_CASE("m atoms are predicted from m lags") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int m = 1; m <= 20; ++m) {
    std::vector<Atom> atoms;
    for (int j = 0; j < m; ++j) atoms.push_back(Atom{(j + 0.5 * u(rng)) / m, 1.0 / m});
    auto p = range_set(1, m);
    auto r = linear_prediction_error({measures::atomic(atoms), 0, p});
    CHECK(r.squared_error < 1e-8);
    CHECK(atomic_residual(atoms, 0, p, r) < 1e-6);
  }
}

TEST_CASE("gram error agrees with a direct residual") {
  std::vector<Atom> atoms{{0.1, 0.2}, {0.35, 0.3}, {0.6, 0.1}, {0.8, 0.25}, {0.9, 0.15}};
  auto p = IntSet(Window(1, 5), {2, 5});
  auto r = linear_prediction_error({measures::atomic(atoms), 0, p});
  CHECK(r.squared_error == doctest::Approx(atomic_residual(atoms, 0, p, r)).epsilon(1e-10));
  CHECK(r.squared_error > 0.01);
}

TEST_CASE("independence example") {
  for (std::int64_t k : {2, 3, 5}) {
    auto mu = measures::centered_interval(0.5 / static_cast<double>(k));
    for (std::int64_t kk : {1, 10, 50}) {
      auto r = linear_prediction_error({mu, 0, range_set(k, k * kk, k)});
      CHECK(r.squared_error == doctest::Approx(1.0 / static_cast<double>(k)).epsilon(1e-12));
    }
  }
  auto riesz = measures::riesz_product({1, 4, 13}, 3);
  auto complement_sip = sets::materialize(sets::complement(sets::sip_plus({1, 4, 13})), Window(1, 40));
  CHECK(independence_check(*riesz, complement_sip));
  CHECK_FALSE(independence_check(*riesz, IntSet(Window(1, 10), {5})));
  CHECK(independence_check(*measures::lebesgue(), range_set(1, 30)));
}

TEST_CASE("levinson durbin") {
  std::vector<double> ma(51, 0.0);
  ma[0] = 2;
  ma[1] = 1;
  auto r = levinson_durbin(std::span<const double>(ma));
  REQUIRE(r.errors.size() == 50);
  for (std::size_t n = 1; n <= 50; ++n)
    CHECK(r.errors[n - 1] == doctest::Approx((n + 2.0) / (n + 1.0)).epsilon(1e-12));
  CHECK(r.errors[0] == doctest::Approx(1.5));
  CHECK(r.errors[3] == doctest::Approx(1.2));

  std::vector<double> white(20, 0.0);
  white[0] = 1;
  for (double e : levinson_durbin(std::span<const double>(white)).errors) CHECK(e == doctest::Approx(1.0));

  // AR(1) autocorrelation 0.5^k / (1 - 0.25): innovation variance 1 from lag 1 on
  std::vector<double> ar(30);
  for (std::size_t k = 0; k < ar.size(); ++k) ar[k] = std::pow(0.5, static_cast<double>(k)) / 0.75;
  for (double e : levinson_durbin(std::span<const double>(ar)).errors) CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("levinson agrees with the gram solve") {
  auto mu = measures::interval_lebesgue(-0.3, 0.2);
  std::vector<Complex> a;
  for (int n = 0; n <= 12; ++n) a.push_back(measures::fourier(mu, n));
  auto ld = levinson_durbin(std::span<const Complex>(a));
  for (std::int64_t n = 1; n <= 12; ++n) {
    auto g = linear_prediction_error({mu, 0, range_set(1, n)});
    CHECK(ld.errors[static_cast<std::size_t>(n - 1)] == doctest::Approx(g.squared_error).epsilon(1e-8));
  }
}

TEST_CASE("singular measure error curve decreases") {
  auto e = error_curve(measures::riesz_product({1, 4, 13, 40, 121, 364}, 6), 60);
  REQUIRE(e.size() == 60);
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] <= e[i - 1] + 1e-15);
  CHECK(e.back() < e.front());
}

TEST_CASE("szego bound") {
  CHECK(szego_bound([](double) { return 1.0; }, 1024).value == doctest::Approx(1.0));
  auto s = szego_bound([](double x) { return 2 + 2 * std::cos(2 * pi * x); }, std::size_t{1} << 22);
  CHECK(std::fabs(s.value - 1.0) < 1e-6);
  auto z = szego_bound([](double x) { return std::fabs(x - std::round(x)) <= 0.25 ? 2.0 : 0.0; }, 4096);
  CHECK(z.value == 0.0);
  CHECK_FALSE(z.log_integrable);
  // geometric mean of e^{cos}: exp(0) = 1
  std::vector<double> grid(4096);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = std::exp(std::cos(2 * pi * (j + 0.5) / 4096));
  CHECK(szego_bound(std::span<const double>(grid)).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simplex feasibility") {
  CHECK(simplex_feasibility(0.5, 3).feasible);
  CHECK_FALSE(simplex_feasibility(0.5, 4).feasible);
  for (double eps : {0.1, 0.5, 1.0}) CHECK(simplex_feasibility(eps, 2).feasible);
  CHECK(simplex_feasibility(0.5, 3).min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(simplex_feasibility(0.5, 1), Error);
}
