#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "ops_internal.hpp"
#include "predictlab/prediction.hpp"
#include "predictlab/processes.hpp"

namespace predictlab::experiments {

namespace {

using io::Fields;
using measures::Complex;

// Exact expansion of prod (1 + z^r / 2 + z^-r / 2) as exponent -> coefficient.
std::map<std::int64_t, Rational> expand_riesz(const std::vector<std::int64_t>& gens, std::size_t depth) {
  std::map<std::int64_t, Rational> poly{{0, Rational(1)}};
  for (std::size_t m = 0; m < depth; ++m) {
    std::map<std::int64_t, Rational> next;
    auto add = [&](std::int64_t e, Rational c) {
      auto& slot = next[e];
      slot = Rational(checked_add(checked_mul(slot.num, c.den), checked_mul(c.num, slot.den)), checked_mul(slot.den, c.den));
    };
    for (const auto& [e, c] : poly) {
      add(e, c);
      add(e + gens[m], Rational(c.num, checked_mul(c.den, 2)));
      add(e - gens[m], Rational(c.num, checked_mul(c.den, 2)));
    }
    poly = std::move(next);
  }
  return poly;
}

OpOutcome check_riesz_sip_support(Fields& f, const Context& ctx) {
  auto gens = f.get_or<std::vector<std::int64_t>>("gens", {1, 4, 13});
  const auto depth = f.get_or<std::size_t>("depth", gens.size());
  Window w = f.has("window") ? io::window_from_json(f.at("window")) : Window(-18, 18);
  const double tol = f.get_or<double>("tol", 1e-12);
  const auto grid = f.get_or<std::size_t>("grid", 1024);
  require(depth <= 16, ErrorKind::InvalidArgument, "riesz_sip_support expands at most 16 factors");
  auto mu = measures::riesz_product(gens, depth);

  auto support = measures::fourier_support(*mu, w, tol);
  const std::int64_t reach = std::max(std::abs(w.lo), std::abs(w.hi));
  std::vector<std::int64_t> sip_gens(gens.begin(), gens.begin() + static_cast<std::ptrdiff_t>(depth));
  auto positive = sets::materialize(sets::sip_plus(sip_gens), Window(1, std::max<std::int64_t>(reach, 1)), ctx.budget);
  std::vector<std::int64_t> expected;
  for (auto s : positive.members) {
    if (w.contains(s)) expected.push_back(s);
    if (w.contains(-s)) expected.push_back(-s);
  }
  if (w.contains(0)) expected.push_back(0);
  const bool support_equal = support == IntSet(w, expected);

  auto poly = expand_riesz(gens, depth);
  bool exact = true, dyadic = true;
  std::int64_t mismatch = 0;
  for (std::int64_t n = w.lo;; ++n) {
    auto c = measures::riesz_coefficient(gens, depth, n);
    auto it = poly.find(n);
    const Rational want = it == poly.end() ? Rational(0) : it->second;
    if (!(c == want)) {
      exact = false;
      ++mismatch;
    }
    if (c.num != 0 && (c.num != 1 || (c.den & (c.den - 1)) != 0)) dyadic = false;
    if (n == w.hi) break;
  }

  // Grid quadrature of the density against e^{-2 pi i n x}.
  std::vector<double> density(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    double v = 1.0;
    for (std::size_t m = 0; m < depth; ++m)
      v *= 1.0 + std::cos(2.0 * std::numbers::pi * static_cast<double>((static_cast<std::uint64_t>(gens[m]) * j) % grid) /
                          static_cast<double>(grid));
    density[j] = v;
  }
  double quad_err = 0;
  for (std::int64_t n = w.lo;; ++n) {
    Complex acc = 0;
    const auto nn = static_cast<std::int64_t>(grid);
    for (std::size_t j = 0; j < grid; ++j) {
      const auto idx = ((n * static_cast<std::int64_t>(j)) % nn + nn) % nn;
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(grid);
      acc += density[j] * Complex(std::cos(ang), -std::sin(ang));
    }
    acc /= static_cast<double>(grid);
    quad_err = std::max(quad_err, std::abs(acc - Complex(measures::riesz_coefficient(gens, depth, n).to_double(), 0.0)));
    if (n == w.hi) break;
  }

  OpOutcome o;
  o.result = {{"support", set_json(support)},
              {"support_equal", support_equal},
              {"exact_match", exact},
              {"exact_mismatches", mismatch},
              {"dyadic", dyadic},
              {"quadrature_grid", grid},
              {"quadrature_max_error", quad_err},
              {"verdict", support_equal && exact && dyadic && quad_err <= 1e-10}};
  return o;
}

struct Witness {
  std::int64_t r;
  std::int64_t step;
};

// Step a_r for progressions avoiding a set Q covered (up to a finite set) by
// blocks [t n_k, t n_k + l_k].
std::int64_t block_step(const IntSet& q, std::int64_t r, const std::vector<std::pair<std::int64_t, std::int64_t>>& blocks) {
  for (auto [n, l] : blocks) {
    if (n - l - 1 < r) continue;
    std::int64_t last_exception = 0;
    for (auto x : q.members)
      if (x % n > l) last_exception = x;
    const std::int64_t t = (last_exception + r) / n + 1;
    return checked_mul(t, n);
  }
  fail(ErrorKind::InvalidArgument, "no block scale n_k - l_k > r available for r = " + std::to_string(r));
}

OpOutcome check_witness_progressions(Fields& f, const Context& ctx) {
  const auto family = f.get<std::string>("family");
  const auto hi = f.get_or<std::int64_t>("window_hi", 1'000'000);
  const auto r_max = f.get_or<std::int64_t>("r_max", 200);
  require(hi >= 1 && hi <= 100'000'000, ErrorKind::InvalidArgument, "window_hi must lie in [1, 1e8]");
  const Window w(1, hi);

  IntSet q;
  std::int64_t r_min = f.get_or<std::int64_t>("r_min", family == "primes" ? 2 : 1);
  require(r_min >= 1 && r_min <= r_max, ErrorKind::InvalidArgument, "need 1 <= r_min <= r_max");
  std::function<std::int64_t(std::int64_t)> step;
  Json blocks_json = Json::array();
  std::vector<std::pair<std::int64_t, std::int64_t>> blocks;
  if (family == "squares") {
    q = sets::materialize(sets::poly_image({0, 0, 1}), w, ctx.budget);
    step = [](std::int64_t r) { return checked_mul(3, checked_mul(r, r)); };
  } else if (family == "primes") {
    q = sets::materialize(sets::primes(), w, ctx.budget);
    require(r_min >= 2, ErrorKind::InvalidArgument, "primes family needs r >= 2");
    step = [](std::int64_t r) { return checked_mul(3, r); };
  } else if (family == "factorials") {
    std::vector<std::int64_t> facts;
    std::int64_t v = 1;
    for (std::int64_t k = 1; v <= hi / k; ++k) {
      v *= k;
      facts.push_back(v);
      blocks.emplace_back(v, 0);
    }
    q = IntSet(w, facts);
    step = [&](std::int64_t r) { return block_step(q, r, blocks); };
  } else if (family == "ip_base3") {
    std::vector<std::int64_t> gens;
    std::int64_t tail = 0;
    for (std::int64_t g = 1; g <= hi; g *= 3) {
      gens.push_back(g);
      blocks.emplace_back(g, tail);
      tail += g;
    }
    q = sets::materialize(sets::ip(gens), w, ctx.budget);
    step = [&](std::int64_t r) { return block_step(q, r, blocks); };
  } else {
    fail(ErrorKind::InvalidArgument, "unknown witness family '" + family + "'");
  }
  for (auto [n, l] : blocks) blocks_json.push_back({n, l});

  std::vector<char> in_q(static_cast<std::size_t>(hi) + 1, 0);
  for (auto x : q.members) in_q[static_cast<std::size_t>(x)] = 1;
  std::int64_t terms = 0;
  Json violations = Json::array();
  Json steps = Json::array();
  for (std::int64_t r = r_min; r <= r_max; ++r) {
    const auto a = step(r);
    require(a >= 1, ErrorKind::Numeric, "witness step must be positive");
    if (steps.size() < 16) steps.push_back({r, a});
    for (std::int64_t v = a - r; v <= hi; v += a) {
      ++terms;
      if (v >= 1 && in_q[static_cast<std::size_t>(v)]) {
        if (violations.size() < 16) violations.push_back({r, a, v});
        else break;
      }
    }
  }
  OpOutcome o;
  o.result = {{"family", family}, {"window", {1, hi}},        {"r_range", {r_min, r_max}},
              {"set_size", q.size()}, {"terms_checked", terms}, {"steps_sample", steps},
              {"violations", violations}, {"verdict", violations.empty()}};
  if (!blocks.empty()) o.result["blocks"] = blocks_json;
  return o;
}

OpOutcome check_bessel_family(Fields& f, const Context&) {
  const auto grid = f.get_or<std::size_t>("grid", 1024);
  const double tol = f.get_or<double>("tol", 1e-10);
  const std::vector<Complex> cs{{0.1, 0}, {0.5, 0}, {1, 0}, {2, 0}, {10, 0}, {0, 1}, {1, 1}, {-0.5, 0}, {0.3, -0.7}, {0, 3}};
  const std::vector<std::int64_t> freqs{3, 7, 11, 25, 90};
  const Window w(1, 100);
  std::int64_t checked = 0, applies = 0;
  double worst = 0, closed_form_err = 0;
  auto tally = [&](const measures::CircleMeasure& mu, const std::vector<std::int64_t>& qs) {
    auto r = measures::bessel_sum(mu, IntSet(w, qs), tol);
    ++checked;
    if (r.verdict == measures::BesselVerdict::BoundApplies && r.sum <= 1.0 + tol) ++applies;
    worst = std::max(worst, r.sum);
    return r.sum;
  };
  std::vector<std::vector<measures::MeasurePtr>> dens(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (auto q : freqs) {
      dens[i].push_back(measures::single_frequency_density(cs[i], q, grid));
      const double s = tally(*dens[i].back(), {q});
      const double n2 = std::norm(cs[i]);
      closed_form_err = std::max(closed_form_err, std::fabs(s - n2 / ((1 + n2) * (1 + n2))));
    }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& other = dens[(i + 1) % cs.size()];
    for (std::size_t a = 0; a < freqs.size(); ++a)
      for (std::size_t b = a + 1; b < freqs.size(); ++b)
        tally(*measures::mixture({{0.5, dens[i][a]}, {0.5, other[b]}}), {freqs[a], freqs[b]});
    std::vector<measures::Component> all;
    for (const auto& d : dens[i]) all.push_back({1.0 / static_cast<double>(freqs.size()), d});
    tally(*measures::mixture(all), freqs);
  }
  OpOutcome o;
  o.result = {{"measures_checked", checked}, {"bound_applies", applies}, {"max_sum", worst},
              {"closed_form_max_error", closed_form_err},
              {"verdict", applies == checked && worst <= 1.0 + tol && closed_form_err <= 1e-12}};
  return o;
}

OpOutcome check_lacunary_family(Fields& f, const Context& ctx) {
  const auto count = f.get_or<std::int64_t>("count", 20);
  const auto depth = f.get_or<std::size_t>("depth", 30);
  const auto seed = f.get_or<std::uint64_t>("seed", ctx.seed);
  require(count >= 1 && count <= 10000 && depth >= 1 && depth <= 2000, ErrorKind::InvalidArgument,
          "lacunary_family needs 1 <= count <= 1e4 and 1 <= depth <= 2000");
  std::int64_t passed = 0;
  Json samples = Json::array();
  for (std::int64_t s = 0; s < count; ++s) {
    auto rng = processes::make_rng(seed, static_cast<std::uint64_t>(s));
    std::vector<dynamics::BigInt> lambdas;
    dynamics::BigInt v = std::uniform_int_distribution<std::int64_t>(1, 50)(rng);
    for (std::size_t i = 0; i < depth; ++i) {
      lambdas.push_back(v);
      // next / current ∈ (4, 7]
      const auto extra = std::uniform_int_distribution<std::int64_t>(1, 1000)(rng);
      v = 4 * v + (3 * v * extra + 999) / 1000;
    }
    auto cert = dynamics::lacunary_avoider(lambdas, depth);
    const bool ok = dynamics::verify_avoider(lambdas, depth, cert.numerator, cert.denominator);
    passed += ok ? 1 : 0;
    if (samples.size() < 3)
      samples.push_back({{"lambda_1", lambdas[0].str()}, {"numerator", cert.numerator.str()},
                         {"denominator", cert.denominator.str()}, {"verified", ok}});
  }
  OpOutcome o;
  o.result = {{"count", count}, {"depth", depth}, {"passed", passed}, {"samples", samples}, {"verdict", passed == count}};
  return o;
}

OpOutcome check_khintchine_family(Fields& f, const Context& ctx) {
  const auto count = f.get_or<std::int64_t>("count", 50);
  const auto seed = f.get_or<std::uint64_t>("seed", ctx.seed);
  require(count >= 1 && count <= 100000, ErrorKind::InvalidArgument, "count must lie in [1, 1e5]");
  std::int64_t passed = 0;
  Json failures = Json::array();
  for (std::int64_t s = 0; s < count; ++s) {
    auto rng = processes::make_rng(seed, 0x4B48ULL + static_cast<std::uint64_t>(s));
    const auto q = std::uniform_int_distribution<std::int64_t>(2, 60)(rng);
    const auto step = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
    std::vector<std::int64_t> residues;
    std::bernoulli_distribution pick(0.3);
    for (std::int64_t r = 0; r < q; ++r)
      if (pick(rng)) residues.push_back(r);
    if (residues.empty()) residues.push_back(std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng));
    const double eps = std::uniform_real_distribution<double>(0.001, 0.2)(rng);
    auto cyc = std::get<dynamics::FiniteCycle>(dynamics::finite_cycle(q, step));
    auto set = dynamics::khintchine_set(cyc, {residues}, eps, Window(1, 10 * q), ctx.budget);
    auto g = sets::gap_statistics(set);
    const bool ok = g && g->max_gap <= q && g->leading_gap < q;
    passed += ok ? 1 : 0;
    if (!ok && failures.size() < 8) failures.push_back({{"q", q}, {"step", step}, {"eps", eps}});
  }
  OpOutcome o;
  o.result = {{"count", count}, {"passed", passed}, {"failures", failures}, {"verdict", passed == count}};
  return o;
}

OpOutcome check_hilbert_grid(Fields& f, const Context&) {
  const auto r_max = f.get_or<std::int64_t>("r_max", 20);
  require(r_max >= 2 && r_max <= 500, ErrorKind::InvalidArgument, "r_max must lie in [2, 500]");
  std::int64_t cases = 0, agree = 0;
  Json rows = Json::array();
  for (std::int64_t k = 1; k <= 10; ++k) {
    const double eps = static_cast<double>(k) / 10.0;
    std::int64_t largest = 0;
    for (std::int64_t r = 2; r <= r_max; ++r) {
      const bool analytic = r * k <= 10 + k;  // r <= 1 + 1/eps in exact tenths
      const bool numeric = prediction::simplex_feasibility(eps, r).feasible;
      ++cases;
      agree += analytic == numeric ? 1 : 0;
      if (numeric) largest = r;
    }
    rows.push_back({{"eps", eps}, {"largest_feasible_r", largest}});
  }
  OpOutcome o;
  o.result = {{"cases", cases}, {"agree", agree}, {"table", rows}, {"verdict", agree == cases}};
  return o;
}

OpOutcome check_szego_ma1(Fields& f, const Context&) {
  const auto n = f.get_or<std::int64_t>("n", 50);
  const auto grid = f.get_or<std::size_t>("grid", std::size_t{1} << 22);
  require(n >= 1 && n <= 10000, ErrorKind::InvalidArgument, "n must lie in [1, 1e4]");
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  a[0] = 2.0;
  a[1] = 1.0;
  auto ld = prediction::levinson_durbin(std::span<const double>(a));
  double max_err = 0;
  for (std::size_t i = 0; i < ld.errors.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    max_err = std::max(max_err, std::fabs(ld.errors[i] - (m + 2) / (m + 1)));
  }
  auto sz = prediction::szego_bound([](double x) { return 2.0 + 2.0 * std::cos(2.0 * std::numbers::pi * x); }, grid);
  const bool complete = ld.errors.size() == static_cast<std::size_t>(n) && !ld.truncated;
  const bool above = complete && ld.errors.back() >= sz.value - 1e-6;
  OpOutcome o;
  o.result = {{"n", n},
              {"levinson_max_error", max_err},
              {"e_last", complete ? Json(ld.errors.back()) : Json(nullptr)},
              {"szego", sz.value},
              {"szego_error_estimate", sz.error_estimate},
              {"errors_above_szego", above},
              {"verdict", complete && max_err <= 1e-10 && std::fabs(sz.value - 1.0) <= 1e-6 && above}};
  o.table = Table{{"n", "e_n"}, {}};
  for (std::size_t i = 0; i < ld.errors.size(); ++i) o.table->rows.push_back({std::to_string(i + 1), fmt_double(ld.errors[i])});
  return o;
}

OpOutcome check_independence_kn(Fields& f, const Context&) {
  const auto k = f.get_or<std::int64_t>("k", 3);
  const auto kmax = f.get_or<std::int64_t>("K", 100);
  require(k >= 2 && kmax >= 1 && kmax <= 400, ErrorKind::InvalidArgument, "need k >= 2 and 1 <= K <= 400");
  auto mu = measures::centered_interval(1.0 / (2.0 * static_cast<double>(k)));
  const double mass = measures::fourier(*mu, 0).real();
  double worst = 0;
  std::vector<std::int64_t> preds;
  for (std::int64_t m = 1; m <= kmax; ++m) {
    preds.push_back(k * m);
    prediction::PredictionProblem p{mu, 0, IntSet(Window(k, k * kmax), preds)};
    worst = std::max(worst, std::fabs(prediction::linear_prediction_error(p).squared_error - mass));
  }
  OpOutcome o;
  o.result = {{"k", k}, {"K", kmax}, {"mass", mass}, {"max_deviation", worst},
              {"verdict", worst <= 1e-10 && std::fabs(mass - 1.0 / static_cast<double>(k)) <= 1e-15}};
  return o;
}

using CheckFn = OpOutcome (*)(Fields&, const Context&);

const std::map<std::string, CheckFn>& checks() {
  static const std::map<std::string, CheckFn> table{
      {"riesz_sip_support", check_riesz_sip_support},
      {"witness_progressions", check_witness_progressions},
      {"bessel_family", check_bessel_family},
      {"lacunary_family", check_lacunary_family},
      {"khintchine_family", check_khintchine_family},
      {"hilbert_grid", check_hilbert_grid},
      {"szego_ma1", check_szego_ma1},
      {"independence_kn", check_independence_kn},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : checks()) out.push_back(name);
    return out;
  }();
  return names;
}

OpOutcome run_check(const std::string& name, Fields& f, const Context& ctx) { return checks().at(name)(f, ctx); }

}  // namespace predictlab::experiments
