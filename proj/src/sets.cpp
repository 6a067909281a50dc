#include "predictlab/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace predictlab::sets {

namespace {

using Members = std::vector<std::int64_t>;

void sort_unique(Members& m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

void validate_gens(const std::vector<std::int64_t>& gens, const char* what) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    require(gens[i] > 0, ErrorKind::InvalidArgument, std::string(what) + " generators must be positive");
    if (i > 0)
      require(gens[i] >= gens[i - 1], ErrorKind::InvalidArgument,
              std::string(what) + " generators must be sorted increasingly");
  }
}

class Enumerator {
 public:
  explicit Enumerator(const Budget& b) : budget_(b) {}

  Members run(const SetSpec& spec, Window w) {
    return std::visit([&](const auto& node) { return eval(node, w); }, spec.v);
  }

 private:
  void charge(std::int64_t n) {
    spent_ += n;
    if (spent_ > budget_.enumeration_cap)
      fail(ErrorKind::Budget, "enumeration cap exceeded (" + std::to_string(budget_.enumeration_cap) +
                                  "); raise PREDICTLAB_BUDGET or shrink the window");
  }

  Members eval(const Explicit& e, Window w) {
    Members out;
    for (auto x : e.members)
      if (w.contains(x)) out.push_back(x);
    sort_unique(out);
    return out;
  }

  Members eval(const ArithmeticProgression& ap, Window w) {
    Members out;
    __int128 d = ap.d;
    __int128 a = ap.a;
    // smallest k with a + k d >= lo
    __int128 num = static_cast<__int128>(w.lo) - a;
    __int128 k = num / d;
    if (num % d != 0 && num > 0) ++k;
    for (__int128 x = a + k * d; x <= w.hi; x += d) {
      charge(1);
      out.push_back(static_cast<std::int64_t>(x));
    }
    return out;
  }

  Members eval(const SIPPlus& sip, Window w) {
    const std::int64_t lo = std::max<std::int64_t>(w.lo, 1);
    Members out;
    if (lo > w.hi) return out;
    std::vector<std::int64_t> g(sip.gens.rbegin(), sip.gens.rend());  // largest first
    std::vector<std::int64_t> tail(g.size() + 1, 0);
    for (std::size_t i = g.size(); i-- > 0;) tail[i] = checked_add(tail[i + 1], g[i]);
    std::int64_t nodes = 0;
    const std::int64_t node_cap = budget_.enumeration_cap * static_cast<std::int64_t>(g.size() + 1);
    auto dfs = [&](auto&& self, std::size_t i, std::int64_t s) -> void {
      if (++nodes > node_cap) fail(ErrorKind::Budget, "SIP enumeration node cap exceeded");
      if (i == g.size()) {
        if (s >= lo && s <= w.hi) {
          charge(1);
          out.push_back(s);
        }
        return;
      }
      if (s - tail[i] > w.hi || s + tail[i] < lo) return;
      self(self, i + 1, checked_add(s, g[i]));
      self(self, i + 1, s);
      self(self, i + 1, checked_sub(s, g[i]));
    };
    dfs(dfs, 0, 0);
    sort_unique(out);
    return out;
  }

  Members eval(const IP& ipset, Window w) {
    const std::int64_t lo = std::max<std::int64_t>(w.lo, 1);
    Members out;
    if (lo > w.hi) return out;
    const auto& g = ipset.gens;
    std::vector<std::int64_t> tail(g.size() + 1, 0);
    for (std::size_t i = g.size(); i-- > 0;) tail[i] = checked_add(tail[i + 1], g[i]);
    std::int64_t nodes = 0;
    const std::int64_t node_cap = budget_.enumeration_cap * static_cast<std::int64_t>(g.size() + 1);
    auto dfs = [&](auto&& self, std::size_t i, std::int64_t s, bool used) -> void {
      if (++nodes > node_cap) fail(ErrorKind::Budget, "IP enumeration node cap exceeded");
      if (s > w.hi) return;
      if (i == g.size()) {
        if (used && s >= lo) {
          charge(1);
          out.push_back(s);
        }
        return;
      }
      if (s + tail[i] < lo) return;
      self(self, i + 1, s, used);
      self(self, i + 1, checked_add(s, g[i]), true);
    };
    dfs(dfs, 0, 0, false);
    sort_unique(out);
    return out;
  }

  Members eval(const Lacunary& lac, Window w) {
    Members out;
    __int128 lambda = lac.seed;
    while (lambda <= w.hi) {
      charge(1);
      if (lambda >= w.lo) out.push_back(static_cast<std::int64_t>(lambda));
      __int128 next = (lambda * lac.ratio.num + lac.ratio.den - 1) / lac.ratio.den;
      lambda = next;
    }
    return out;
  }

  Members eval(const PolyImage& poly, Window w) {
    std::vector<std::int64_t> c = poly.coeffs;
    while (!c.empty() && c.back() == 0) c.pop_back();
    Members out;
    if (c.empty()) {
      if (w.contains(0)) out.push_back(0);
      return out;
    }
    if (c.size() == 1) {
      if (w.contains(c[0])) out.push_back(c[0]);
      return out;
    }
    const std::size_t d = c.size() - 1;
    const long double lead = static_cast<long double>(c[d]);
    // Beyond the Fujiwara root bound of p - edge, p stays on one side of the window.
    std::vector<long double> q(c.begin(), c.end());
    q[0] -= static_cast<long double>(lead > 0 ? w.hi : w.lo);
    long double bound = 0;
    for (std::size_t k = 1; k <= d; ++k) {
      long double ratio = std::fabs(q[d - k] / lead);
      if (k == d) ratio /= 2;
      bound = std::max(bound, 2 * std::pow(ratio, 1.0L / static_cast<long double>(k)));
    }
    long double limit = std::floor(bound) + 1;
    if (limit > static_cast<long double>(budget_.enumeration_cap))
      fail(ErrorKind::Budget, "polynomial image scan exceeds the enumeration cap");
    auto nmax = static_cast<std::int64_t>(limit);
    for (std::int64_t n = 1; n <= nmax; ++n) {
      charge(1);
      __int128 v = 0;
      bool overflow = false;
      for (std::size_t i = d + 1; i-- > 0;) {
        if (__builtin_mul_overflow(v, static_cast<__int128>(n), &v) ||
            __builtin_add_overflow(v, static_cast<__int128>(c[i]), &v)) {
          overflow = true;
          break;
        }
      }
      if (overflow) fail(ErrorKind::Overflow, "polynomial value overflow inside the scan range");
      if (v >= w.lo && v <= w.hi) out.push_back(static_cast<std::int64_t>(v));
    }
    sort_unique(out);
    return out;
  }

  Members eval(const DifferenceSet& ds, Window w) {
    Members a = run(*ds.inner, ds.inner_window.value_or(w));
    Members out;
    if (a.size() < 2) return out;
    const auto n = static_cast<std::int64_t>(a.size());
    if (n > 1 && (n - 1) > budget_.enumeration_cap / n)
      fail(ErrorKind::Budget, "difference set pair count exceeds the enumeration cap");
    charge(n * (n - 1) / 2);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        std::int64_t diff = checked_sub(a[j], a[i]);
        if (w.contains(diff)) out.push_back(diff);
      }
    sort_unique(out);
    return out;
  }

  Members eval(const Complement& c, Window w) {
    charge(w.width());
    Members inner = run(*c.inner, w);
    Members out;
    out.reserve(static_cast<std::size_t>(w.width()) - inner.size());
    auto it = inner.begin();
    for (std::int64_t x = w.lo;; ++x) {
      while (it != inner.end() && *it < x) ++it;
      if (it == inner.end() || *it != x) out.push_back(x);
      if (x == w.hi) break;
    }
    return out;
  }

  Members eval(const Union& u, Window w) {
    Members out;
    for (const auto& p : u.parts) {
      Members m = run(*p, w);
      out.insert(out.end(), m.begin(), m.end());
    }
    sort_unique(out);
    return out;
  }

  Members eval(const Intersection& in, Window w) {
    Members out = run(*in.parts.front(), w);
    for (std::size_t i = 1; i < in.parts.size(); ++i) {
      Members m = run(*in.parts[i], w);
      Members next;
      std::set_intersection(out.begin(), out.end(), m.begin(), m.end(), std::back_inserter(next));
      out.swap(next);
    }
    return out;
  }

  Members eval(const Shift& s, Window w) {
    Window inner(checked_sub(w.lo, s.k), checked_sub(w.hi, s.k));
    Members out = run(*s.inner, inner);
    for (auto& x : out) x = checked_add(x, s.k);
    return out;
  }

  Members eval(const Dilate& d, Window w) {
    std::int64_t lo, hi;
    if (d.k > 0) {
      lo = ceil_div(w.lo, d.k);
      hi = floor_div(w.hi, d.k);
    } else {
      lo = ceil_div(w.hi, d.k);
      hi = floor_div(w.lo, d.k);
    }
    Members out;
    if (lo > hi) return out;
    out = run(*d.inner, Window(lo, hi));
    for (auto& x : out) x = checked_mul(x, d.k);
    sort_unique(out);
    return out;
  }

  Members eval(const Primes&, Window w) {
    Members out;
    const std::int64_t lo = std::max<std::int64_t>(w.lo, 2);
    if (lo > w.hi) return out;
    const std::int64_t span = w.hi - lo + 1;
    charge(span);
    auto root = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(w.hi))) + 1;
    std::vector<bool> small(static_cast<std::size_t>(root + 1), true);
    std::vector<bool> seg(static_cast<std::size_t>(span), true);
    for (std::int64_t p = 2; p <= root; ++p) {
      if (!small[p]) continue;
      for (std::int64_t m = p * p; m <= root; m += p) small[m] = false;
      if (p * p > w.hi) break;
      std::int64_t start = std::max(p * p, ceil_div(lo, p) * p);
      for (std::int64_t m = start; m <= w.hi; m += p) seg[m - lo] = false;
    }
    for (std::int64_t i = 0; i < span; ++i)
      if (seg[i]) out.push_back(lo + i);
    return out;
  }

  const Budget& budget_;
  std::int64_t spent_ = 0;
};

SpecPtr make(SetSpec::Variant v) { return std::make_shared<const SetSpec>(SetSpec{std::move(v)}); }

void require_inner(const SpecPtr& p) {
  require(p != nullptr, ErrorKind::InvalidArgument, "set spec: missing inner set");
}

}  // namespace

SpecPtr explicit_set(std::vector<std::int64_t> members) { return make(Explicit{std::move(members)}); }

SpecPtr progression(std::int64_t a, std::int64_t d) {
  require(d > 0, ErrorKind::InvalidArgument, "arithmetic progression step must be positive");
  return make(ArithmeticProgression{a, d});
}

SpecPtr sip_plus(std::vector<std::int64_t> gens) {
  validate_gens(gens, "SIP");
  return make(SIPPlus{std::move(gens)});
}

SpecPtr ip(std::vector<std::int64_t> gens) {
  validate_gens(gens, "IP");
  return make(IP{std::move(gens)});
}

SpecPtr lacunary(std::int64_t seed, Rational ratio) {
  require(seed > 0, ErrorKind::InvalidArgument, "lacunary seed must be positive");
  require(ratio.num > ratio.den, ErrorKind::InvalidArgument, "lacunary ratio must exceed 1");
  return make(Lacunary{seed, ratio});
}

SpecPtr poly_image(std::vector<std::int64_t> coeffs) { return make(PolyImage{std::move(coeffs)}); }

SpecPtr difference_set(SpecPtr inner, std::optional<Window> inner_window) {
  require_inner(inner);
  return make(DifferenceSet{std::move(inner), inner_window});
}

SpecPtr complement(SpecPtr inner) {
  require_inner(inner);
  return make(Complement{std::move(inner)});
}

SpecPtr set_union(std::vector<SpecPtr> parts) {
  for (const auto& p : parts) require_inner(p);
  return make(Union{std::move(parts)});
}

SpecPtr intersection(std::vector<SpecPtr> parts) {
  require(!parts.empty(), ErrorKind::InvalidArgument, "intersection of zero sets");
  for (const auto& p : parts) require_inner(p);
  return make(Intersection{std::move(parts)});
}

SpecPtr shift(SpecPtr inner, std::int64_t k) {
  require_inner(inner);
  return make(Shift{std::move(inner), k});
}

SpecPtr dilate(SpecPtr inner, std::int64_t k) {
  require_inner(inner);
  require(k != 0, ErrorKind::InvalidArgument, "dilation factor must be nonzero");
  return make(Dilate{std::move(inner), k});
}

SpecPtr primes() { return make(Primes{}); }

IntSet materialize(const SetSpec& spec, Window window, const Budget& budget) {
  Enumerator e(budget);
  return IntSet(window, e.run(spec, window));
}

std::optional<GapStats> gap_statistics(const IntSet& s) {
  if (s.empty()) return std::nullopt;
  GapStats g;
  g.leading_gap = s.members.front() - s.window.lo;
  g.trailing_gap = s.window.hi - s.members.back();
  for (std::size_t i = 1; i < s.members.size(); ++i) {
    std::int64_t gap = s.members[i] - s.members[i - 1];
    g.max_gap = std::max(g.max_gap, gap);
    ++g.histogram[gap];
  }
  return g;
}

std::optional<SumsetCounterexample> sumset_counterexample(const IntSet& q, Window window) {
  for (auto c : q.members) {
    if (c > window.hi) break;
    for (auto a : q.members) {
      __int128 b = static_cast<__int128>(c) - a;
      if (b < a) break;
      if (q.contains(static_cast<std::int64_t>(b))) return SumsetCounterexample{a, static_cast<std::int64_t>(b), c};
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> sip_star_witness(const std::vector<std::int64_t>& gens, const SetSpec& p, Window window,
                                             const Budget& budget) {
  IntSet sip = materialize(sip_plus(gens), window, budget);
  IntSet target = materialize(p, window, budget);
  for (auto x : sip.members)
    if (target.contains(x)) return x;
  return std::nullopt;
}

SmallnessResult smallness_check(const IntSet& s, std::int64_t n) {
  require(n > 0, ErrorKind::InvalidArgument, "smallness_check: n must be positive");
  SmallnessResult r;
  std::int64_t m = 0;
  std::int64_t pow5 = 1;
  while (pow5 <= n) {
    pow5 = checked_mul(pow5, 5);
    ++m;
  }
  r.bound = checked_add(n, checked_mul(pow5, 5));
  const Window& w = s.window;
  if (w.hi - w.lo < n) {
    r.status = SmallnessStatus::Inconclusive;
    return r;
  }
  std::vector<std::int64_t> avoiders;
  auto it = s.members.begin();
  for (std::int64_t i = w.lo; i <= w.hi - n; ++i) {
    while (it != s.members.end() && *it < i) ++it;
    if (it == s.members.end() || *it > i + n) avoiders.push_back(i);
  }
  r.avoider_count = static_cast<std::int64_t>(avoiders.size());
  if (avoiders.empty()) {
    r.status = SmallnessStatus::NoAvoiders;
    return r;
  }
  for (std::size_t i = 1; i < avoiders.size(); ++i)
    r.max_gap_of_avoiders = std::max(r.max_gap_of_avoiders, avoiders[i] - avoiders[i - 1]);
  r.status = SmallnessStatus::Checked;
  r.ok = r.max_gap_of_avoiders <= r.bound;
  return r;
}

IntSet delta_r_set(const IntSet& a) {
  require(a.size() >= 2, ErrorKind::InvalidArgument, "difference set needs at least two elements");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) out.push_back(checked_sub(a.members[j], a.members[i]));
  return IntSet(Window(1, checked_sub(a.members.back(), a.members.front())), std::move(out));
}

}  // namespace predictlab::sets
