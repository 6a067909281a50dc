#include "predictlab/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace predictlab::io {

namespace {

std::int64_t parse_int(std::string_view s, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::InvalidArgument, std::string("cannot parse ") + what + " '" + std::string(s) + "'");
  return v;
}

std::string type_of(Fields& f) { return f.get<std::string>("type"); }

std::vector<sets::SpecPtr> spec_list(const Json& j, const std::string& ctx) {
  require(j.is_array(), ErrorKind::InvalidArgument, ctx + " must be an array");
  std::vector<sets::SpecPtr> out;
  for (const auto& e : j) out.push_back(set_spec_from_json(e));
  return out;
}

}  // namespace

Fields::Fields(const Json& j, std::string context) : j_(j), context_(std::move(context)) {
  require(j.is_object(), ErrorKind::InvalidArgument, context_ + " must be a JSON object");
}

bool Fields::has(const std::string& key) const { return j_.contains(key); }

const Json* Fields::find(const std::string& key) {
  auto it = j_.find(key);
  if (it == j_.end()) return nullptr;
  used_.push_back(key);
  return &*it;
}

const Json& Fields::at(const std::string& key) {
  const Json* v = find(key);
  if (!v) fail(ErrorKind::InvalidArgument, context_ + " is missing field '" + key + "'");
  return *v;
}

void Fields::done() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (std::find(used_.begin(), used_.end(), it.key()) == used_.end())
      fail(ErrorKind::InvalidArgument, context_ + " has unknown field '" + it.key() + "'");
}

Json to_json(const IntSet& s) { return Json{{"window", {s.window.lo, s.window.hi}}, {"members", s.members}}; }

Window window_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer(),
          ErrorKind::InvalidArgument, "window must be [lo, hi]");
  return Window(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
}

Window parse_window(const std::string& text) {
  auto colon = text.find(':', text[0] == '-' ? 1 : 0);
  require(colon != std::string::npos, ErrorKind::InvalidArgument, "window must look like LO:HI");
  return Window(parse_int(std::string_view(text).substr(0, colon), "window bound"),
                parse_int(std::string_view(text).substr(colon + 1), "window bound"));
}

IntSet int_set_from_json(const Json& j) {
  Fields f(j, "int set");
  Window w = window_from_json(f.at("window"));
  auto members = f.get<std::vector<std::int64_t>>("members");
  f.done();
  return IntSet(w, std::move(members));
}

std::string to_run_length(const IntSet& s) {
  std::ostringstream out;
  out << s.window.lo << ':' << s.window.hi << ';';
  const auto& m = s.members;
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j + 1 < m.size() && m[j + 1] == m[j] + 1) ++j;
    if (i) out << ',';
    out << m[i];
    if (j > i) out << ".." << m[j];
    i = j + 1;
  }
  return out.str();
}

IntSet int_set_from_run_length(const std::string& text) {
  auto semi = text.find(';');
  require(semi != std::string::npos, ErrorKind::InvalidArgument, "run-length set needs 'lo:hi;' prefix");
  Window w = parse_window(text.substr(0, semi));
  std::vector<std::int64_t> members;
  std::string_view rest = std::string_view(text).substr(semi + 1);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      members.push_back(parse_int(item, "member"));
    } else {
      const auto a = parse_int(item.substr(0, dots), "range start");
      const auto b = parse_int(item.substr(dots + 2), "range end");
      require(a <= b && b - a <= 100'000'000, ErrorKind::InvalidArgument, "bad run in run-length set");
      for (auto x = a; x <= b; ++x) members.push_back(x);
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return IntSet(w, std::move(members));
}

Json to_json(const sets::SetSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, sets::Explicit>) return {{"type", "explicit"}, {"members", s.members}};
        else if constexpr (std::is_same_v<S, sets::ArithmeticProgression>) return {{"type", "ap"}, {"a", s.a}, {"d", s.d}};
        else if constexpr (std::is_same_v<S, sets::SIPPlus>) return {{"type", "sip"}, {"gens", s.gens}};
        else if constexpr (std::is_same_v<S, sets::IP>) return {{"type", "ip"}, {"gens", s.gens}};
        else if constexpr (std::is_same_v<S, sets::Lacunary>)
          return {{"type", "lacunary"}, {"seed", s.seed}, {"ratio", {s.ratio.num, s.ratio.den}}};
        else if constexpr (std::is_same_v<S, sets::PolyImage>) return {{"type", "poly"}, {"coeffs", s.coeffs}};
        else if constexpr (std::is_same_v<S, sets::DifferenceSet>) {
          Json j{{"type", "difference"}, {"inner", to_json(*s.inner)}};
          if (s.inner_window) j["inner_window"] = {s.inner_window->lo, s.inner_window->hi};
          return j;
        } else if constexpr (std::is_same_v<S, sets::Complement>) return {{"type", "complement"}, {"inner", to_json(*s.inner)}};
        else if constexpr (std::is_same_v<S, sets::Union> || std::is_same_v<S, sets::Intersection>) {
          Json parts = Json::array();
          for (const auto& p : s.parts) parts.push_back(to_json(*p));
          return {{"type", std::is_same_v<S, sets::Union> ? "union" : "intersection"}, {"parts", parts}};
        } else if constexpr (std::is_same_v<S, sets::Shift>) return {{"type", "shift"}, {"inner", to_json(*s.inner)}, {"k", s.k}};
        else if constexpr (std::is_same_v<S, sets::Dilate>) return {{"type", "dilate"}, {"inner", to_json(*s.inner)}, {"k", s.k}};
        else return {{"type", "primes"}};
      },
      spec.v);
}

sets::SpecPtr set_spec_from_json(const Json& j) {
  Fields f(j, "set spec");
  const auto type = type_of(f);
  sets::SpecPtr out;
  if (type == "explicit") out = sets::explicit_set(f.get<std::vector<std::int64_t>>("members"));
  else if (type == "ap") out = sets::progression(f.get<std::int64_t>("a"), f.get<std::int64_t>("d"));
  else if (type == "sip") out = sets::sip_plus(f.get<std::vector<std::int64_t>>("gens"));
  else if (type == "ip") out = sets::ip(f.get<std::vector<std::int64_t>>("gens"));
  else if (type == "lacunary") {
    auto r = f.get<std::vector<std::int64_t>>("ratio");
    require(r.size() == 2, ErrorKind::InvalidArgument, "lacunary ratio must be [num, den]");
    out = sets::lacunary(f.get<std::int64_t>("seed"), Rational(r[0], r[1]));
  } else if (type == "poly") out = sets::poly_image(f.get<std::vector<std::int64_t>>("coeffs"));
  else if (type == "difference") {
    auto inner = set_spec_from_json(f.at("inner"));
    std::optional<Window> w;
    if (const Json* iw = f.find("inner_window")) w = window_from_json(*iw);
    out = sets::difference_set(inner, w);
  } else if (type == "complement") out = sets::complement(set_spec_from_json(f.at("inner")));
  else if (type == "union") out = sets::set_union(spec_list(f.at("parts"), "union.parts"));
  else if (type == "intersection") out = sets::intersection(spec_list(f.at("parts"), "intersection.parts"));
  else if (type == "shift") out = sets::shift(set_spec_from_json(f.at("inner")), f.get<std::int64_t>("k"));
  else if (type == "dilate") out = sets::dilate(set_spec_from_json(f.at("inner")), f.get<std::int64_t>("k"));
  else if (type == "primes") out = sets::primes();
  else fail(ErrorKind::InvalidArgument, "unknown set spec type '" + type + "'");
  f.done();
  return out;
}

Json complex_to_json(const measures::Complex& c) {
  if (c.imag() == 0) return c.real();
  return Json::array({c.real(), c.imag()});
}

measures::Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::InvalidArgument,
          "complex value must be a number or [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const measures::CircleMeasure& mu) {
  return std::visit(
      [](const auto& m) -> Json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, measures::Atomic>) {
          Json atoms = Json::array();
          for (const auto& a : m.atoms) atoms.push_back({{"angle", a.angle}, {"mass", complex_to_json(a.mass)}});
          return {{"type", "atomic"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<M, measures::GridDensity>) {
          return {{"type", "grid"}, {"values", m.values}};
        } else if constexpr (std::is_same_v<M, measures::IntervalLebesgue>) {
          return {{"type", "interval"}, {"lo", m.lo}, {"hi", m.hi}, {"scale", m.scale}};
        } else if constexpr (std::is_same_v<M, measures::RieszProduct>) {
          return {{"type", "riesz"}, {"gens", m.gens}, {"depth", m.depth}};
        } else {
          Json comps = Json::array();
          for (const auto& c : m.components) comps.push_back({{"weight", c.weight}, {"measure", to_json(*c.measure)}});
          return {{"type", "mixture"}, {"components", comps}};
        }
      },
      mu.v);
}

measures::MeasurePtr measure_from_json(const Json& j) {
  Fields f(j, "measure");
  const auto type = type_of(f);
  measures::MeasurePtr out;
  if (type == "atomic") {
    std::vector<measures::Atom> atoms;
    const Json& list = f.at("atoms");
    require(list.is_array(), ErrorKind::InvalidArgument, "measure.atoms must be an array");
    for (const auto& a : list) {
      Fields af(a, "atom");
      measures::Atom atom;
      atom.angle = af.get<double>("angle");
      if (const Json* m = af.find("mass")) atom.mass = complex_from_json(*m);
      af.done();
      atoms.push_back(atom);
    }
    out = measures::atomic(std::move(atoms));
  } else if (type == "grid") {
    out = measures::grid_density(f.get<std::vector<double>>("values"));
  } else if (type == "interval") {
    out = measures::interval_lebesgue(f.get<double>("lo"), f.get<double>("hi"), f.get_or<double>("scale", 1.0));
  } else if (type == "lebesgue") {
    out = measures::lebesgue();
  } else if (type == "riesz") {
    auto gens = f.get<std::vector<std::int64_t>>("gens");
    const auto depth = f.get_or<std::size_t>("depth", gens.size());
    out = measures::riesz_product(std::move(gens), depth);
  } else if (type == "mixture") {
    std::vector<measures::Component> comps;
    const Json& list = f.at("components");
    require(list.is_array(), ErrorKind::InvalidArgument, "measure.components must be an array");
    for (const auto& c : list) {
      Fields cf(c, "mixture component");
      measures::Component comp;
      comp.weight = cf.get_or<double>("weight", 1.0);
      comp.measure = measure_from_json(cf.at("measure"));
      cf.done();
      comps.push_back(comp);
    }
    out = measures::mixture(std::move(comps));
  } else if (type == "single_frequency") {
    out = measures::single_frequency_density(complex_from_json(f.at("c")), f.get<std::int64_t>("q"),
                                             f.get_or<std::size_t>("grid", 1024));
  } else {
    fail(ErrorKind::InvalidArgument, "unknown measure type '" + type + "'");
  }
  f.done();
  return out;
}

dynamics::RotationSystem system_from_json(const Json& j) {
  Fields f(j, "system");
  const auto type = type_of(f);
  dynamics::RotationSystem out;
  if (type == "cycle") out = dynamics::finite_cycle(f.get<std::int64_t>("q"), f.get_or<std::int64_t>("step", 1));
  else if (type == "torus") out = dynamics::torus_rotation(f.get<std::vector<double>>("alpha"));
  else if (type == "skew") out = dynamics::SkewProduct{f.get_or<double>("alpha", 0.0)};
  else if (type == "quadratic_skew") out = dynamics::QuadraticSkew{f.get<double>("alpha")};
  else fail(ErrorKind::InvalidArgument, "unknown system type '" + type + "'");
  f.done();
  return out;
}

dynamics::TargetSet target_from_json(const Json& j) {
  Fields f(j, "target");
  const auto type = type_of(f);
  dynamics::TargetSet out;
  if (type == "cycle_subset") {
    out = dynamics::CycleSubset{f.get<std::vector<std::int64_t>>("residues")};
  } else if (type == "box") {
    dynamics::Box box;
    for (const auto& a : f.get<std::vector<std::vector<double>>>("arcs")) {
      require(a.size() == 2, ErrorKind::InvalidArgument, "arc must be [a, b]");
      require(a[0] >= 0 && a[0] < 1 && a[1] >= 0 && a[1] <= 1, ErrorKind::InvalidArgument,
              "arc endpoints must lie in [0, 1]");
      box.arcs.push_back({a[0], a[1]});
    }
    out = box;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown target type '" + type + "'");
  }
  f.done();
  return out;
}

dynamics::Point point_from_json(const Json& j) {
  dynamics::Point p;
  if (j.is_number_integer()) p.residue = j.get<std::int64_t>();
  else if (j.is_array()) p.coords = j.get<std::vector<double>>();
  else fail(ErrorKind::InvalidArgument, "point must be a residue or a coordinate array");
  return p;
}

processes::ProcessModel model_from_json(const Json& j) {
  Fields f(j, "model");
  const auto type = type_of(f);
  processes::ProcessModel out;
  if (type == "kperiodic") {
    out.v = processes::KPeriodicCounterexample{f.get<std::int64_t>("k")};
  } else if (type == "iid") {
    out.v = processes::IIDUniform{f.get<std::int64_t>("alphabet")};
  } else if (type == "rotation_coding") {
    processes::RotationCoding rc;
    rc.system = system_from_json(f.at("system"));
    const Json& cells = f.at("partition");
    require(cells.is_array(), ErrorKind::InvalidArgument, "model.partition must be an array");
    for (const auto& c : cells) rc.partition.push_back(target_from_json(c));
    out.v = std::move(rc);
  } else if (type == "skew_coding") {
    out.v = processes::SkewCoding{f.get_or<double>("alpha", 0.0)};
  } else if (type == "gaussian" || type == "sign") {
    processes::GaussianSpectral g{measure_from_json(f.at("measure")), f.get_or<std::size_t>("grid", 4096)};
    if (type == "gaussian") out.v = g;
    else out.v = processes::SignOf{g};
  } else if (type == "sturmian") {
    out.v = processes::Sturmian{f.get<double>("alpha")};
  } else {
    fail(ErrorKind::InvalidArgument, "unknown model type '" + type + "'");
  }
  f.done();
  return out;
}

}  // namespace predictlab::io
