#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "ops_internal.hpp"
#include "predictlab/entropy.hpp"
#include "predictlab/prediction.hpp"

namespace predictlab::experiments {

using io::Fields;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json set_json(const IntSet& s) {
  Json j = io::to_json(s);
  j["size"] = s.size();
  return j;
}

Json gaps_json(const std::optional<sets::GapStats>& g) {
  if (!g) return nullptr;
  Json hist = Json::array();
  for (auto [gap, count] : g->histogram) hist.push_back({gap, count});
  return {{"max_gap", g->max_gap},
          {"histogram", hist},
          {"leading_gap", g->leading_gap},
          {"trailing_gap", g->trailing_gap}};
}

Window window_param(Fields& f, const Context& ctx, const std::string& key) {
  const Json* w = f.find(key);
  return w ? io::window_from_json(*w) : ctx.window;
}

IntSet set_param(Fields& f, const Context& ctx, const std::string& key, Window w) {
  const Json& v = f.at(key);
  if (v.is_object() && v.contains("members") && v.contains("window")) return io::int_set_from_json(v);
  if (v.is_array()) return IntSet(w, v.get<std::vector<std::int64_t>>());
  if (v.is_string()) return io::int_set_from_run_length(v.get<std::string>());
  return sets::materialize(io::set_spec_from_json(v), w, ctx.budget);
}

namespace {

std::vector<measures::Complex> complex_list(const Json& j, const std::string& what) {
  require(j.is_array(), ErrorKind::InvalidArgument, what + " must be an array");
  std::vector<measures::Complex> out;
  for (const auto& e : j) out.push_back(io::complex_from_json(e));
  return out;
}

Json complex_list_json(const std::vector<measures::Complex>& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back({c.real(), c.imag()});
  return out;
}

Table curve_table(const std::vector<double>& e) {
  Table t{{"n", "e_n"}, {}};
  for (std::size_t i = 0; i < e.size(); ++i) t.rows.push_back({std::to_string(i + 1), fmt_double(e[i])});
  return t;
}

// ---- sets -----------------------------------------------------------------

OpOutcome sets_materialize(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  auto s = sets::materialize(io::set_spec_from_json(f.at("spec")), w, ctx.budget);
  OpOutcome o;
  o.result = {{"set", set_json(s)}, {"run_length", io::to_run_length(s)}};
  return o;
}

OpOutcome sets_gap_statistics(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  auto s = set_param(f, ctx, f.has("spec") ? "spec" : "set", w);
  OpOutcome o;
  auto g = sets::gap_statistics(s);
  o.result = {{"window", {s.window.lo, s.window.hi}}, {"size", s.size()}, {"empty", !g.has_value()}, {"gaps", gaps_json(g)}};
  return o;
}

OpOutcome sets_sumset_disjoint(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  auto s = set_param(f, ctx, f.has("spec") ? "spec" : "set", w);
  auto cx = sets::sumset_counterexample(s, w);
  OpOutcome o;
  o.result = {{"window", {w.lo, w.hi}}, {"size", s.size()}, {"disjoint", !cx.has_value()}, {"counterexample", nullptr}};
  if (cx) o.result["counterexample"] = {cx->a, cx->b, cx->sum};
  return o;
}

OpOutcome sets_sip_star_witness(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  auto gens = f.get<std::vector<std::int64_t>>("gens");
  auto p = io::set_spec_from_json(f.at("spec"));
  auto hit = sets::sip_star_witness(gens, *p, w, ctx.budget);
  OpOutcome o;
  o.result = {{"window", {w.lo, w.hi}}, {"witness", nullptr}, {"conclusive", hit.has_value()}};
  if (hit) o.result["witness"] = *hit;
  else o.warnings.push_back("no SIP+ element of the set inside the window (inconclusive, not a disproof)");
  return o;
}

OpOutcome sets_smallness_check(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  auto s = set_param(f, ctx, f.has("spec") ? "spec" : "set", w);
  auto r = sets::smallness_check(s, f.get<std::int64_t>("n"));
  static const char* names[] = {"checked", "no_avoiders", "inconclusive"};
  OpOutcome o;
  o.result = {{"status", names[static_cast<int>(r.status)]},
              {"max_gap_of_avoiders", r.max_gap_of_avoiders},
              {"bound", r.bound},
              {"ok", r.ok},
              {"avoider_count", r.avoider_count}};
  if (r.status == sets::SmallnessStatus::Inconclusive) o.warnings.push_back("smallness check inconclusive on this window");
  return o;
}

OpOutcome sets_delta_r_set(Fields& f, const Context& ctx) {
  auto members = f.get<std::vector<std::int64_t>>("members");
  require(!members.empty(), ErrorKind::InvalidArgument, "delta_r_set needs members");
  auto [lo, hi] = std::minmax_element(members.begin(), members.end());
  auto d = sets::delta_r_set(IntSet(Window(*lo, *hi), members));
  (void)ctx;
  OpOutcome o;
  o.result = {{"set", set_json(d)}};
  return o;
}

// ---- dynamics -------------------------------------------------------------

Json tagged_json(const dynamics::TaggedSet& t) {
  return {{"set", set_json(t.set)},
          {"exact", t.exact},
          {"tag", t.exact ? "exact" : "approximate"},
          {"tol", t.tol},
          {"boundary_hits", t.boundary_hits},
          {"gaps", gaps_json(sets::gap_statistics(t.set))}};
}

void tag_warnings(const dynamics::TaggedSet& t, OpOutcome& o) {
  if (t.boundary_hits > 0)
    o.warnings.push_back(std::to_string(t.boundary_hits) + " approximate decisions within tol of an arc endpoint");
}

OpOutcome dyn_return_times(Fields& f, const Context& ctx) {
  auto sys = io::system_from_json(f.at("system"));
  auto u = io::target_from_json(f.at("target"));
  Window w = window_param(f, ctx, "window");
  auto t = dynamics::return_times(sys, u, w, f.get_or<double>("tol", 1e-12), ctx.budget);
  OpOutcome o;
  o.result = tagged_json(t);
  tag_warnings(t, o);
  return o;
}

OpOutcome dyn_visit_times(Fields& f, const Context& ctx) {
  auto sys = io::system_from_json(f.at("system"));
  auto u = io::target_from_json(f.at("target"));
  auto x = io::point_from_json(f.at("point"));
  Window w = window_param(f, ctx, "window");
  auto t = dynamics::visit_times(sys, x, u, w, f.get_or<double>("tol", 1e-12), ctx.budget);
  OpOutcome o;
  o.result = tagged_json(t);
  tag_warnings(t, o);
  return o;
}

dynamics::FiniteCycle cycle_param(Fields& f) {
  auto sys = dynamics::finite_cycle(f.get<std::int64_t>("q"), f.get_or<std::int64_t>("step", 1));
  return std::get<dynamics::FiniteCycle>(sys);
}

OpOutcome dyn_correlation_sequence(Fields& f, const Context&) {
  auto cyc = cycle_param(f);
  dynamics::CycleSubset a{f.get<std::vector<std::int64_t>>("residues")};
  auto seq = dynamics::correlation_sequence(cyc, a, f.get<std::int64_t>("maxlag"));
  Json exact = Json::array(), approx = Json::array();
  std::vector<double> values;
  for (const auto& r : seq) {
    exact.push_back(to_string(r));
    approx.push_back(r.to_double());
    values.push_back(r.to_double());
  }
  auto pd = measures::positive_definite_check(std::span<const double>(values));
  OpOutcome o;
  o.result = {{"exact", exact},
              {"values", approx},
              {"positive_definite", pd.positive_definite},
              {"min_eigenvalue", pd.min_eigenvalue}};
  return o;
}

OpOutcome dyn_khintchine_set(Fields& f, const Context& ctx) {
  auto cyc = cycle_param(f);
  dynamics::CycleSubset a{f.get<std::vector<std::int64_t>>("residues")};
  Window w = window_param(f, ctx, "window");
  auto s = dynamics::khintchine_set(cyc, a, f.get<double>("eps"), w, ctx.budget);
  auto g = sets::gap_statistics(s);
  OpOutcome o;
  o.result = {{"set", set_json(s)}, {"gaps", gaps_json(g)}};
  o.result["bounded_by_q"] = g && g->max_gap <= cyc.q && g->leading_gap < cyc.q && g->trailing_gap < cyc.q;
  return o;
}

std::vector<dynamics::BigInt> lambda_param(Fields& f) {
  std::vector<dynamics::BigInt> out;
  if (const Json* p = f.find("powers")) {
    Fields pf(*p, "powers");
    const auto base = pf.get<std::int64_t>("base");
    const auto count = pf.get<std::size_t>("count");
    pf.done();
    require(base >= 2 && count >= 1 && count <= 4096, ErrorKind::InvalidArgument, "powers needs base >= 2, 1 <= count <= 4096");
    dynamics::BigInt v = base;
    for (std::size_t i = 0; i < count; ++i, v *= base) out.push_back(v);
    return out;
  }
  const Json& list = f.at("lambdas");
  require(list.is_array(), ErrorKind::InvalidArgument, "lambdas must be an array");
  for (const auto& e : list) {
    if (e.is_number_integer()) out.emplace_back(e.get<std::int64_t>());
    else if (e.is_string()) {
      try {
        out.emplace_back(e.get<std::string>());
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "lambda '" + e.get<std::string>() + "' is not an integer");
      }
    } else fail(ErrorKind::InvalidArgument, "lambdas must be integers or decimal strings");
  }
  return out;
}

OpOutcome dyn_lacunary_avoider(Fields& f, const Context&) {
  auto lambdas = lambda_param(f);
  const auto depth = f.get_or<std::size_t>("depth", lambdas.size());
  auto cert = dynamics::lacunary_avoider(lambdas, depth);
  const bool ok = dynamics::verify_avoider(lambdas, depth, cert.numerator, cert.denominator);
  Json idx = Json::array();
  for (const auto& k : cert.interval_index) idx.push_back(k.str());
  OpOutcome o;
  o.result = {{"numerator", cert.numerator.str()}, {"denominator", cert.denominator.str()}, {"alpha", cert.alpha},
              {"depth", depth},  {"interval_index", idx},          {"verified", ok},
              {"verdict", ok}};
  return o;
}

OpOutcome dyn_thue_morse_set(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  auto s = dynamics::thue_morse_set(w, ctx.budget);
  OpOutcome o;
  o.result = {{"set", set_json(s)}, {"gaps", gaps_json(sets::gap_statistics(s))}};
  return o;
}

// ---- measures -------------------------------------------------------------

OpOutcome meas_fourier_window(Fields& f, const Context& ctx) {
  auto mu = io::measure_from_json(f.at("measure"));
  Window w = window_param(f, ctx, "window");
  const double tol = f.get_or<double>("tol", ctx.tol);
  auto fw = measures::fourier_window(*mu, w, tol);
  OpOutcome o;
  o.result = {{"first", fw.first}, {"tol", fw.tol}, {"aliasing_bound", fw.aliasing_bound},
              {"coefficients", complex_list_json(fw.coefficients)}};
  Table t{{"n", "re", "im", "abs"}, {}};
  for (std::size_t i = 0; i < fw.coefficients.size(); ++i) {
    const auto& c = fw.coefficients[i];
    t.rows.push_back({std::to_string(fw.first + static_cast<std::int64_t>(i)), fmt_double(c.real()),
                      fmt_double(c.imag()), fmt_double(std::abs(c))});
  }
  o.table = std::move(t);
  if (fw.aliasing_bound > tol) o.warnings.push_back("grid aliasing bound " + fmt_double(fw.aliasing_bound) + " exceeds tol");
  return o;
}

OpOutcome meas_fourier_support(Fields& f, const Context& ctx) {
  auto mu = io::measure_from_json(f.at("measure"));
  Window w = window_param(f, ctx, "window");
  const double tol = f.get_or<double>("tol", ctx.tol);
  auto s = measures::fourier_support(*mu, w, tol);
  OpOutcome o;
  o.result = {{"set", set_json(s)}, {"tol", tol}};
  return o;
}

std::vector<measures::Complex> sequence_param(Fields& f, const std::string& key) {
  if (f.has(key)) return complex_list(f.at(key), key);
  auto mu = io::measure_from_json(f.at("measure"));
  const auto n = f.get<std::int64_t>("n");
  require(n >= 0 && n <= 100000, ErrorKind::InvalidArgument, "n must lie in [0, 100000]");
  std::vector<measures::Complex> out;
  for (std::int64_t k = 0; k <= n; ++k) out.push_back(measures::fourier(*mu, k));
  return out;
}

OpOutcome meas_positive_definite_check(Fields& f, const Context&) {
  auto seq = sequence_param(f, "sequence");
  auto r = measures::positive_definite_check(std::span<const measures::Complex>(seq));
  OpOutcome o;
  o.result = {{"positive_definite", r.positive_definite}, {"min_eigenvalue", r.min_eigenvalue}, {"size", seq.size()}};
  return o;
}

OpOutcome meas_threshold_set(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  std::vector<double> seq;
  if (f.has("sequence")) {
    seq = f.get<std::vector<double>>("sequence");
  } else {
    auto mu = io::measure_from_json(f.at("measure"));
    require(w.lo >= 0, ErrorKind::InvalidArgument, "threshold window must start at 0 or later");
    for (std::int64_t k = 0; k <= w.hi; ++k) seq.push_back(measures::fourier(*mu, k).real());
  }
  auto r = measures::threshold_set(seq, f.get<double>("eps"), w);
  OpOutcome o;
  o.result = {{"set", set_json(r.set)}, {"gaps", gaps_json(r.gaps)}};
  return o;
}

OpOutcome meas_bessel_sum(Fields& f, const Context& ctx) {
  auto mu = io::measure_from_json(f.at("measure"));
  Window w = window_param(f, ctx, "window");
  auto q = set_param(f, ctx, "q", w);
  auto r = measures::bessel_sum(*mu, q, f.get_or<double>("tol", ctx.tol));
  static const char* names[] = {"bound-applies", "bound-not-applicable", "bound-violated"};
  OpOutcome o;
  o.result = {{"value", r.sum},
              {"verdict_label", names[static_cast<int>(r.verdict)]},
              {"normalized", r.normalized},
              {"support_ok", r.support_ok},
              {"sumset_ok", r.sumset_ok},
              {"support_violation", r.support_violation ? Json(*r.support_violation) : Json(nullptr)}};
  if (r.verdict == measures::BesselVerdict::BoundNotApplicable)
    o.warnings.push_back("Bessel bound not applicable: preconditions fail on the window");
  return o;
}

OpOutcome meas_riesz_coefficient(Fields& f, const Context&) {
  auto gens = f.get<std::vector<std::int64_t>>("gens");
  const auto depth = f.get_or<std::size_t>("depth", gens.size());
  auto r = measures::riesz_coefficient(gens, depth, f.get<std::int64_t>("n"));
  OpOutcome o;
  o.result = {{"exact", to_string(r)}, {"value", r.to_double()}};
  return o;
}

// ---- prediction -------------------------------------------------------------

Json prediction_json(const prediction::PredictionResult& r) {
  return {{"value", r.squared_error},
          {"squared_error", r.squared_error},
          {"coefficients", complex_list_json(r.coefficients)},
          {"gram_condition", std::isfinite(r.gram_condition) ? Json(r.gram_condition) : Json("inf")},
          {"regularization_used", r.regularization_used},
          {"dropped_modes", r.dropped_modes}};
}

OpOutcome pred_linear_prediction_error(Fields& f, const Context& ctx) {
  prediction::PredictionProblem p;
  p.measure = io::measure_from_json(f.at("measure"));
  p.target = f.get_or<std::int64_t>("target", 0);
  Window w = window_param(f, ctx, "window");
  p.predictors = set_param(f, ctx, "predictors", w);
  auto r = prediction::linear_prediction_error(p);
  OpOutcome o;
  o.result = prediction_json(r);
  o.result["mass"] = measures::fourier(*p.measure, 0).real();
  if (r.flagged())
    o.warnings.push_back("Gram system regularized: " + std::to_string(r.dropped_modes) + " modes below the spectral floor");
  return o;
}

OpOutcome pred_levinson_durbin(Fields& f, const Context&) {
  auto seq = sequence_param(f, "autocorr");
  auto r = prediction::levinson_durbin(std::span<const measures::Complex>(seq));
  OpOutcome o;
  o.result = {{"errors", r.errors}, {"reflection", complex_list_json(r.reflection)}, {"truncated", r.truncated}};
  if (!r.errors.empty()) o.result["value"] = r.errors.back();
  o.table = curve_table(r.errors);
  if (r.truncated) o.warnings.push_back("Levinson-Durbin breakdown: recursion truncated after " + std::to_string(r.errors.size()) + " steps");
  return o;
}

OpOutcome pred_error_curve(Fields& f, const Context&) {
  auto mu = io::measure_from_json(f.at("measure"));
  auto e = prediction::error_curve(mu, f.get<std::int64_t>("n"));
  OpOutcome o;
  o.result = {{"errors", e}};
  o.table = curve_table(e);
  return o;
}

// Density of an absolutely continuous measure at x (Lebesgue, intervals, Riesz products, mixtures).
double density_at(const measures::CircleMeasure& mu, double x) {
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, measures::IntervalLebesgue>) {
          const double len = m.hi - m.lo;
          if (len >= 1.0) return m.scale;
          const double t = frac(x - m.lo);
          return t < len ? m.scale : 0.0;
        } else if constexpr (std::is_same_v<M, measures::RieszProduct>) {
          double v = 1.0;
          for (std::size_t i = 0; i < m.depth; ++i)
            v *= 1.0 + std::cos(2.0 * std::numbers::pi * static_cast<double>(frac_mul(m.gens[i], x)));
          return v;
        } else if constexpr (std::is_same_v<M, measures::Mixture>) {
          double v = 0;
          for (const auto& c : m.components) v += c.weight * density_at(*c.measure, x);
          return v;
        } else {
          fail(ErrorKind::InvalidArgument, "szego_bound needs an absolutely continuous measure");
        }
      },
      mu.v);
}

OpOutcome pred_szego_bound(Fields& f, const Context&) {
  prediction::SzegoResult r;
  if (f.has("density")) {
    auto values = f.get<std::vector<double>>("density");
    r = prediction::szego_bound(values);
  } else if (f.has("trig")) {
    // density a_0 + 2 Re sum_{k>=1} a_k e^{2 pi i k x} from real coefficients
    auto a = f.get<std::vector<double>>("trig");
    require(!a.empty(), ErrorKind::InvalidArgument, "trig needs a_0");
    const auto n = f.get_or<std::size_t>("grid", std::size_t{1} << 22);
    r = prediction::szego_bound(
        [&](double x) {
          double v = a[0];
          for (std::size_t k = 1; k < a.size(); ++k) v += 2.0 * a[k] * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) * x);
          return std::max(v, 0.0);
        },
        n);
  } else {
    auto mu = io::measure_from_json(f.at("measure"));
    if (const auto* g = std::get_if<measures::GridDensity>(&mu->v)) {
      r = prediction::szego_bound(g->values);
    } else {
      const auto n = f.get_or<std::size_t>("grid", std::size_t{1} << 20);
      r = prediction::szego_bound([&](double x) { return density_at(*mu, x); }, n);
    }
  }
  OpOutcome o;
  o.result = {{"value", r.value},
              {"error_estimate", r.error_estimate},
              {"log_integrable", r.log_integrable},
              {"vanishing_points", r.vanishing_points}};
  if (r.vanishing_points > 0 && r.log_integrable)
    o.warnings.push_back(std::to_string(r.vanishing_points) + " vanishing grid points omitted from the log quadrature");
  return o;
}

OpOutcome pred_independence_check(Fields& f, const Context& ctx) {
  auto mu = io::measure_from_json(f.at("measure"));
  Window w = window_param(f, ctx, "window");
  auto p = set_param(f, ctx, "p", w);
  const double tol = f.get_or<double>("tol", ctx.tol);
  OpOutcome o;
  o.result = {{"independent", prediction::independence_check(*mu, p, tol)}, {"tol", tol}, {"size", p.size()}};
  return o;
}

OpOutcome pred_simplex_feasibility(Fields& f, const Context&) {
  auto r = prediction::simplex_feasibility(f.get<double>("eps"), f.get<std::int64_t>("r"));
  OpOutcome o;
  o.result = {{"feasible", r.feasible}, {"min_eigenvalue", r.min_eigenvalue}};
  return o;
}

// ---- processes --------------------------------------------------------------

Json path_values(const processes::SamplePath& p) {
  return p.is_real ? Json(p.reals) : Json(p.ints);
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

OpOutcome proc_sample(Fields& f, const Context& ctx) {
  auto model = io::model_from_json(f.at("model"));
  auto path = processes::sample(model, f.get<std::int64_t>("length"), f.get_or<std::uint64_t>("seed", ctx.seed),
                                f.get_or<std::int64_t>("offset", 0), f.get_or<std::uint64_t>("stream", 0), ctx.budget);
  OpOutcome o;
  o.result = {{"values", path_values(path)},
              {"offset", path.offset},
              {"seed", path.seed},
              {"stream", path.stream},
              {"fingerprint", hex64(path.model_fingerprint)},
              {"spectral_error_bound", path.spectral_error_bound},
              {"frequency_bins", path.frequency_bins}};
  Table t{{"index", "value"}, {}};
  for (std::size_t i = 0; i < path.size(); ++i)
    t.rows.push_back({std::to_string(path.offset + static_cast<std::int64_t>(i)),
                      path.is_real ? fmt_double(path.reals[i]) : std::to_string(path.ints[i])});
  o.table = std::move(t);
  if (path.spectral_error_bound > ctx.tol)
    o.warnings.push_back("approximate spectral synthesis: covariance error bound " + fmt_double(path.spectral_error_bound));
  return o;
}

OpOutcome proc_empirical_autocorrelation(Fields& f, const Context& ctx) {
  const auto maxlag = f.get<std::int64_t>("maxlag");
  const auto norm = f.get_or<std::string>("norm", "biased");
  require(norm == "biased" || norm == "unbiased", ErrorKind::InvalidArgument, "norm must be biased or unbiased");
  const auto mode = norm == "biased" ? processes::AutocorrNorm::Biased : processes::AutocorrNorm::Unbiased;
  std::vector<double> c;
  double bound = 0;
  if (f.has("values")) {
    auto v = f.get<std::vector<double>>("values");
    c = processes::empirical_autocorrelation(std::span<const double>(v), maxlag, mode);
  } else {
    auto model = io::model_from_json(f.at("model"));
    auto path = processes::sample(model, f.get<std::int64_t>("length"), f.get_or<std::uint64_t>("seed", ctx.seed), 0, 0,
                                  ctx.budget);
    bound = path.spectral_error_bound;
    c = path.is_real ? processes::empirical_autocorrelation(std::span<const double>(path.reals), maxlag, mode)
                     : processes::empirical_autocorrelation(std::span<const std::int64_t>(path.ints), maxlag, mode);
  }
  OpOutcome o;
  o.result = {{"values", c}, {"norm", norm}, {"spectral_error_bound", bound}};
  Table t{{"lag", "value"}, {}};
  for (std::size_t k = 0; k < c.size(); ++k) t.rows.push_back({std::to_string(k), fmt_double(c[k])});
  o.table = std::move(t);
  return o;
}

OpOutcome proc_sign_process(Fields& f, const Context&) {
  auto v = f.get<std::vector<double>>("values");
  OpOutcome o;
  o.result = {{"values", processes::sign_process(v)}};
  return o;
}

OpOutcome proc_sturmian_coding(Fields& f, const Context& ctx) {
  Window w = window_param(f, ctx, "window");
  const double cut = f.get_or<double>("cut", 0.5);
  auto v = processes::sturmian_coding(f.get<double>("alpha"), w, ctx.budget, cut);
  OpOutcome o;
  o.result = {{"values", v}, {"window", {w.lo, w.hi}}, {"cut", cut}};
  if (const Json* c = f.find("complexity_up_to")) {
    const auto n = c->get<std::size_t>();
    Json counts = Json::array();
    bool sturmian = true, linear = true;
    for (std::size_t k = 1; k <= n; ++k) {
      const auto p = processes::factor_complexity(v, k);
      counts.push_back(p);
      sturmian = sturmian && p == k + 1;
      linear = linear && p <= 2 * k;
    }
    o.result["complexity"] = counts;
    o.result["sturmian"] = sturmian;
    o.result["linear"] = linear;
    o.result["verdict"] = linear;
  }
  return o;
}

// ---- entropy ----------------------------------------------------------------

struct Source {
  entropy::PathSet paths;
  std::string description;
};

Source source_param(Fields& f, const Context& ctx) {
  Source s;
  if (f.has("values")) {
    s.paths.push_back(f.get<std::vector<std::int64_t>>("values"));
    s.description = "values";
    return s;
  }
  auto model = io::model_from_json(f.at("model"));
  require(!processes::real_valued(model), ErrorKind::InvalidArgument, "entropy needs a finite-valued model");
  const auto length = f.get<std::int64_t>("length");
  const auto replicates = f.get_or<std::int64_t>("replicates", 1);
  const auto seed = f.get_or<std::uint64_t>("seed", ctx.seed);
  for (auto& p : processes::sample_ensemble(model, replicates, length, seed, ctx.budget)) s.paths.push_back(std::move(p.ints));
  s.description = std::to_string(replicates) + " x " + std::to_string(length);
  return s;
}

entropy::EntropyConfig config_param(Fields& f, const Context& ctx) {
  entropy::EntropyConfig c;
  const auto est = f.get_or<std::string>("estimator", "plugin");
  require(est == "plugin" || est == "miller_madow", ErrorKind::InvalidArgument, "estimator must be plugin or miller_madow");
  c.estimator = est == "plugin" ? entropy::Estimator::Plugin : entropy::Estimator::MillerMadow;
  c.cap = f.get_or<std::size_t>("cap", 20);
  c.resamples = f.get_or<std::size_t>("resamples", 200);
  c.seed = f.get_or<std::uint64_t>("bootstrap_seed", ctx.seed);
  return c;
}

Json estimate_json(const entropy::EntropyEstimate& e, bool bits) {
  const double unit = bits ? std::numbers::ln2 : 1.0;
  return {{"value", e.value / unit},
          {"units", bits ? "bits" : "nats"},
          {"offsets", e.offsets},
          {"target_offset", e.target_offset},
          {"sample_count", e.sample_count},
          {"distinct_blocks", e.distinct_blocks},
          {"alphabet", e.alphabet},
          {"estimator", e.estimator == entropy::Estimator::Plugin ? "plugin" : "miller_madow"},
          {"std_error", e.std_error / unit},
          {"bias_allowance", e.bias_allowance / unit},
          {"undersampled", e.undersampled}};
}

bool bits_param(Fields& f) {
  const auto u = f.get_or<std::string>("units", "nats");
  require(u == "nats" || u == "bits", ErrorKind::InvalidArgument, "units must be nats or bits");
  return u == "bits";
}

void undersampled_warning(bool flag, OpOutcome& o) {
  if (flag) o.warnings.push_back("undersampled entropy estimate (too few samples for the block alphabet)");
}

OpOutcome ent_block_entropy(Fields& f, const Context& ctx) {
  auto src = source_param(f, ctx);
  auto cfg = config_param(f, ctx);
  const bool bits = bits_param(f);
  auto e = entropy::block_entropy(src.paths, f.get<std::size_t>("n"), cfg);
  OpOutcome o;
  o.result = estimate_json(e, bits);
  o.result["source"] = src.description;
  undersampled_warning(e.undersampled, o);
  return o;
}

OpOutcome ent_conditional_entropy(Fields& f, const Context& ctx) {
  auto src = source_param(f, ctx);
  auto cfg = config_param(f, ctx);
  const bool bits = bits_param(f);
  const auto target = f.get_or<std::int64_t>("target", 0);
  auto offs = f.get<std::vector<std::int64_t>>("predictors");
  require(!offs.empty(), ErrorKind::InvalidArgument, "predictors must be nonempty");
  auto [lo, hi] = std::minmax_element(offs.begin(), offs.end());
  auto e = entropy::conditional_entropy(src.paths, target, IntSet(Window(*lo, *hi), offs), cfg);
  OpOutcome o;
  o.result = estimate_json(e, bits);
  o.result["source"] = src.description;
  undersampled_warning(e.undersampled, o);
  return o;
}

OpOutcome ent_sequence_entropy_along(Fields& f, const Context& ctx) {
  auto src = source_param(f, ctx);
  auto cfg = config_param(f, ctx);
  const bool bits = bits_param(f);
  Window w = window_param(f, ctx, "window");
  auto q = set_param(f, ctx, "q", w);
  auto prefixes = f.get<std::vector<std::size_t>>("prefixes");
  auto est = entropy::sequence_entropy_along(src.paths, q, prefixes, cfg);
  OpOutcome o;
  Json list = Json::array();
  Json values = Json::array();
  bool nonincreasing = true;
  bool under = false;
  for (std::size_t i = 0; i < est.size(); ++i) {
    list.push_back(estimate_json(est[i], bits));
    values.push_back(est[i].value);
    if (i && est[i].value > est[i - 1].value + 2 * (est[i].std_error + est[i - 1].std_error) + est[i].bias_allowance)
      nonincreasing = false;
    under = under || est[i].undersampled;
  }
  o.result = {{"prefixes", prefixes}, {"values", values}, {"estimates", list}, {"nonincreasing", nonincreasing},
              {"source", src.description}};
  undersampled_warning(under, o);
  return o;
}

OpOutcome ent_chain_rule_bound_check(Fields& f, const Context& ctx) {
  auto src = source_param(f, ctx);
  auto cfg = config_param(f, ctx);
  Window w = window_param(f, ctx, "window");
  auto q = set_param(f, ctx, "q", w);
  auto r = entropy::chain_rule_bound_check(src.paths, q, cfg);
  OpOutcome o;
  o.result = {{"lhs", r.lhs},   {"rhs", r.rhs},         {"rhs_prefix", r.rhs_prefix},
              {"slack", r.slack}, {"predictors", r.predictors}, {"undersampled", r.undersampled},
              {"ok", r.ok},     {"verdict", r.ok},      {"source", src.description}};
  undersampled_warning(r.undersampled, o);
  return o;
}

using Handler = std::function<OpOutcome(Fields&, const Context&)>;

const std::map<std::pair<std::string, std::string>, Handler>& registry() {
  static const std::map<std::pair<std::string, std::string>, Handler> table = [] {
    std::map<std::pair<std::string, std::string>, Handler> t;
    t[{"sets", "materialize"}] = sets_materialize;
    t[{"sets", "gap_statistics"}] = sets_gap_statistics;
    t[{"sets", "sumset_disjoint"}] = sets_sumset_disjoint;
    t[{"sets", "sip_star_witness"}] = sets_sip_star_witness;
    t[{"sets", "smallness_check"}] = sets_smallness_check;
    t[{"sets", "delta_r_set"}] = sets_delta_r_set;
    t[{"dynamics", "return_times"}] = dyn_return_times;
    t[{"dynamics", "visit_times"}] = dyn_visit_times;
    t[{"dynamics", "correlation_sequence"}] = dyn_correlation_sequence;
    t[{"dynamics", "khintchine_set"}] = dyn_khintchine_set;
    t[{"dynamics", "lacunary_avoider"}] = dyn_lacunary_avoider;
    t[{"dynamics", "thue_morse_set"}] = dyn_thue_morse_set;
    t[{"measures", "fourier_window"}] = meas_fourier_window;
    t[{"measures", "fourier_support"}] = meas_fourier_support;
    t[{"measures", "positive_definite_check"}] = meas_positive_definite_check;
    t[{"measures", "threshold_set"}] = meas_threshold_set;
    t[{"measures", "bessel_sum"}] = meas_bessel_sum;
    t[{"measures", "riesz_coefficient"}] = meas_riesz_coefficient;
    t[{"prediction", "linear_prediction_error"}] = pred_linear_prediction_error;
    t[{"prediction", "levinson_durbin"}] = pred_levinson_durbin;
    t[{"prediction", "error_curve"}] = pred_error_curve;
    t[{"prediction", "szego_bound"}] = pred_szego_bound;
    t[{"prediction", "independence_check"}] = pred_independence_check;
    t[{"prediction", "simplex_feasibility"}] = pred_simplex_feasibility;
    t[{"processes", "sample"}] = proc_sample;
    t[{"processes", "empirical_autocorrelation"}] = proc_empirical_autocorrelation;
    t[{"processes", "sign_process"}] = proc_sign_process;
    t[{"processes", "sturmian_coding"}] = proc_sturmian_coding;
    t[{"entropy", "block_entropy"}] = ent_block_entropy;
    t[{"entropy", "conditional_entropy"}] = ent_conditional_entropy;
    t[{"entropy", "sequence_entropy_along"}] = ent_sequence_entropy_along;
    t[{"entropy", "chain_rule_bound_check"}] = ent_chain_rule_bound_check;
    for (const auto& name : check_names())
      t[{"checks", name}] = [name](Fields& f, const Context& ctx) { return run_check(name, f, ctx); };
    return t;
  }();
  return table;
}

// Applies the optional "expect" block: every listed key must hold for the verdict.
void apply_expect(const Json& expect, OpOutcome& o) {
  Fields f(expect, "expect");
  bool ok = true;
  if (const Json* m = f.find("members")) {
    const Json* set = o.result.contains("set") ? &o.result["set"] : nullptr;
    require(set != nullptr, ErrorKind::InvalidArgument, "expect.members needs a set result");
    ok = ok && (*set)["members"] == *m;
  }
  if (const Json* v = f.find("value")) {
    require(o.result.contains("value"), ErrorKind::InvalidArgument, "expect.value needs a value result");
    const double tol = f.get_or<double>("tol", 0.0);
    ok = ok && std::fabs(o.result["value"].get<double>() - v->get<double>()) <= tol;
  } else if (f.has("tol")) {
    fail(ErrorKind::InvalidArgument, "expect.tol without expect.value");
  }
  if (const Json* at_most = f.find("at_most")) {
    require(o.result.contains("value"), ErrorKind::InvalidArgument, "expect.at_most needs a value result");
    ok = ok && o.result["value"].get<double>() <= at_most->get<double>();
  }
  if (const Json* g = f.find("max_gap_at_most")) {
    const Json& gaps = o.result.contains("gaps") ? o.result["gaps"] : Json(nullptr);
    ok = ok && !gaps.is_null() && gaps["max_gap"].get<std::int64_t>() <= g->get<std::int64_t>();
  }
  if (const Json* fields = f.find("fields")) {
    require(fields->is_object(), ErrorKind::InvalidArgument, "expect.fields must be an object");
    for (auto it = fields->begin(); it != fields->end(); ++it) {
      require(o.result.contains(it.key()), ErrorKind::InvalidArgument, "expect.fields names unknown result field '" + it.key() + "'");
      ok = ok && o.result[it.key()] == it.value();
    }
  }
  f.done();
  o.result["verdict"] = o.result.value("verdict", true) && ok;
}

}  // namespace

OpOutcome execute(const std::string& module, const std::string& op, const Json& params, const Context& ctx) {
  const auto& table = registry();
  auto it = table.find({module, op});
  if (it == table.end()) fail(ErrorKind::InvalidArgument, "unknown operation " + module + "." + op);
  Json body = params.is_null() ? Json::object() : params;
  require(body.is_object(), ErrorKind::InvalidArgument, module + "." + op + " params must be an object");
  Json expect;
  if (body.contains("expect")) {
    expect = body["expect"];
    body.erase("expect");
  }
  Fields f(body, module + "." + op);
  OpOutcome o = it->second(f, ctx);
  f.done();
  if (!expect.is_null()) apply_expect(expect, o);
  if (o.result.contains("verdict") && !o.result["verdict"].get<bool>()) o.warnings.push_back("verdict false");
  return o;
}

std::vector<std::pair<std::string, std::string>> list_ops() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, h] : registry()) out.push_back(key);
  return out;
}

}  // namespace predictlab::experiments
