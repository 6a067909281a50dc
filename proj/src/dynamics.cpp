#include "predictlab/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace predictlab::dynamics {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t q) {
  std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

double wrap(long double x) {
  long double f = x - std::floor(x);
  auto d = static_cast<double>(f);
  return d >= 1.0 ? 0.0 : d;
}

void charge_window(Window w, const Budget& budget) {
  if (w.width() > budget.enumeration_cap)
    fail(ErrorKind::Budget, "window wider than the enumeration cap");
}

std::vector<char> residue_mask(const FiniteCycle& sys, const CycleSubset& a) {
  require(!a.residues.empty(), ErrorKind::InvalidArgument, "cycle subset must be nonempty");
  std::vector<char> mask(static_cast<std::size_t>(sys.q), 0);
  for (auto r : a.residues) mask[mod(r, sys.q)] = 1;
  return mask;
}

/// overlap[s] = |A ∩ (A - s)| for every shift s mod q.
std::vector<std::int64_t> overlap_counts(const FiniteCycle& sys, const std::vector<char>& mask) {
  std::vector<std::int64_t> members;
  for (std::int64_t r = 0; r < sys.q; ++r)
    if (mask[r]) members.push_back(r);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(sys.q), 0);
  for (std::int64_t s = 0; s < sys.q; ++s)
    for (auto u : members)
      if (mask[(u + s) % sys.q]) ++counts[s];
  return counts;
}

double arc_overlap(const Arc& arc, double t) {
  double len = arc.length();
  return std::min(len, std::max(0.0, len - t) + std::max(0.0, len - (1.0 - t)));
}

double endpoint_distance(const Arc& arc, double x) {
  auto d = [](double p, double q) {
    double diff = std::fabs(p - q);
    return std::min(diff, 1.0 - diff);
  };
  return std::min(d(x, arc.a), d(x, arc.b));
}

}  // namespace

RotationSystem finite_cycle(std::int64_t q, std::int64_t step) {
  require(q > 0, ErrorKind::InvalidArgument, "cycle length must be positive");
  return FiniteCycle{q, mod(step, q)};
}

RotationSystem torus_rotation(std::vector<double> alpha) {
  require(!alpha.empty(), ErrorKind::InvalidArgument, "torus rotation needs at least one coordinate");
  for (auto& a : alpha) {
    require(std::isfinite(a), ErrorKind::InvalidArgument, "torus rotation angle must be finite");
    a = frac(a);
  }
  return TorusRotation{std::move(alpha)};
}

std::size_t dimension(const RotationSystem& sys) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FiniteCycle>) return 0;
        else if constexpr (std::is_same_v<S, TorusRotation>) return s.alpha.size();
        else return 2;
      },
      sys);
}

Point iterate(const RotationSystem& sys, const Point& x, std::int64_t n) {
  Point out;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, FiniteCycle>) {
          __int128 v = static_cast<__int128>(x.residue) + static_cast<__int128>(n) * s.step;
          v %= s.q;
          if (v < 0) v += s.q;
          out.residue = static_cast<std::int64_t>(v);
        } else {
          require(x.coords.size() == dimension(sys), ErrorKind::InvalidArgument, "point dimension mismatch");
          if constexpr (std::is_same_v<S, TorusRotation>) {
            out.coords.resize(s.alpha.size());
            for (std::size_t i = 0; i < s.alpha.size(); ++i)
              out.coords[i] = wrap(static_cast<long double>(x.coords[i]) + frac_mul(n, s.alpha[i]));
          } else if constexpr (std::is_same_v<S, SkewProduct>) {
            // S^n(x, y) = (x + n y + C(n,2) alpha, y + n alpha)
            __int128 pairs = static_cast<__int128>(n) * (static_cast<__int128>(n) - 1) / 2;
            require(pairs <= INT64_MAX && pairs >= INT64_MIN, ErrorKind::Overflow, "skew iterate overflow");
            long double px = x.coords[0] + frac_mul(n, x.coords[1]) + frac_mul(static_cast<std::int64_t>(pairs), s.alpha);
            long double py = x.coords[1] + frac_mul(n, s.alpha);
            out.coords = {wrap(px), wrap(py)};
          } else {
            // T^n(x, y) = (x + n alpha, y + 2 n x + n^2 alpha)
            std::int64_t sq = checked_mul(n, n);
            long double px = x.coords[0] + frac_mul(n, s.alpha);
            long double py = x.coords[1] + frac_mul(checked_mul(2, n), x.coords[0]) + frac_mul(sq, s.alpha);
            out.coords = {wrap(px), wrap(py)};
          }
        }
      },
      sys);
  return out;
}

TaggedSet return_times(const RotationSystem& sys, const TargetSet& u, Window window, double tol,
                       const Budget& budget) {
  charge_window(window, budget);
  TaggedSet out;
  std::vector<std::int64_t> members;
  if (const auto* cyc = std::get_if<FiniteCycle>(&sys)) {
    const auto* subset = std::get_if<CycleSubset>(&u);
    require(subset != nullptr, ErrorKind::InvalidArgument, "cycle systems take a cycle subset target");
    auto counts = overlap_counts(*cyc, residue_mask(*cyc, *subset));
    for (std::int64_t n = window.lo;; ++n) {
      std::int64_t s = static_cast<std::int64_t>((static_cast<__int128>(n) * cyc->step) % cyc->q);
      if (s < 0) s += cyc->q;
      if (counts[s] > 0) members.push_back(n);
      if (n == window.hi) break;
    }
    out.exact = true;
  } else if (const auto* torus = std::get_if<TorusRotation>(&sys)) {
    require(tol > 0, ErrorKind::InvalidArgument, "torus return times need tol > 0");
    const auto* box = std::get_if<Box>(&u);
    require(box != nullptr && box->arcs.size() == torus->alpha.size(), ErrorKind::InvalidArgument,
            "torus target must be a box with one arc per coordinate");
    for (const auto& arc : box->arcs)
      require(arc.length() > 0, ErrorKind::InvalidArgument, "target arcs must have positive length");
    for (std::int64_t n = window.lo;; ++n) {
      bool all = true;
      for (std::size_t i = 0; i < torus->alpha.size(); ++i) {
        double t = wrap(frac_mul(n, torus->alpha[i]));
        double ov = arc_overlap(box->arcs[i], t);
        if (std::fabs(ov) <= tol) ++out.boundary_hits;
        if (ov <= tol) all = false;
      }
      if (all) members.push_back(n);
      if (n == window.hi) break;
    }
    out.exact = false;
    out.tol = tol;
  } else {
    fail(ErrorKind::InvalidArgument, "return_times supports FiniteCycle and TorusRotation systems");
  }
  out.set = IntSet(window, std::move(members));
  return out;
}

TaggedSet visit_times(const RotationSystem& sys, const Point& x, const TargetSet& u, Window window, double tol,
                      const Budget& budget) {
  charge_window(window, budget);
  TaggedSet out;
  std::vector<std::int64_t> members;
  if (const auto* cyc = std::get_if<FiniteCycle>(&sys)) {
    const auto* subset = std::get_if<CycleSubset>(&u);
    require(subset != nullptr, ErrorKind::InvalidArgument, "cycle systems take a cycle subset target");
    auto mask = residue_mask(*cyc, *subset);
    for (std::int64_t n = window.lo;; ++n) {
      if (mask[iterate(sys, x, n).residue]) members.push_back(n);
      if (n == window.hi) break;
    }
    out.exact = true;
  } else {
    require(tol > 0, ErrorKind::InvalidArgument, "torus visit times need tol > 0");
    const auto* box = std::get_if<Box>(&u);
    require(box != nullptr && box->arcs.size() == dimension(sys), ErrorKind::InvalidArgument,
            "target must be a box with one arc per coordinate");
    for (std::int64_t n = window.lo;; ++n) {
      Point p = iterate(sys, x, n);
      bool inside = true;
      for (std::size_t i = 0; i < p.coords.size(); ++i) {
        if (endpoint_distance(box->arcs[i], p.coords[i]) <= tol) ++out.boundary_hits;
        if (!box->arcs[i].contains(p.coords[i])) inside = false;
      }
      if (inside) members.push_back(n);
      if (n == window.hi) break;
    }
    out.exact = false;
    out.tol = tol;
  }
  out.set = IntSet(window, std::move(members));
  return out;
}

std::vector<Rational> correlation_sequence(const FiniteCycle& sys, const CycleSubset& a, std::int64_t maxlag) {
  require(maxlag >= 1, ErrorKind::InvalidArgument, "maxlag must be at least 1");
  auto counts = overlap_counts(sys, residue_mask(sys, a));
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(maxlag) + 1);
  for (std::int64_t n = 0; n <= maxlag; ++n)
    out.emplace_back(counts[static_cast<std::size_t>((static_cast<__int128>(n) * sys.step) % sys.q)], sys.q);
  return out;
}

IntSet khintchine_set(const FiniteCycle& sys, const CycleSubset& a, double eps, Window window, const Budget& budget) {
  require(eps > 0, ErrorKind::InvalidArgument, "khintchine_set needs eps > 0");
  charge_window(window, budget);
  auto mask = residue_mask(sys, a);
  auto counts = overlap_counts(sys, mask);
  const long double q = static_cast<long double>(sys.q);
  const long double measure = static_cast<long double>(std::count(mask.begin(), mask.end(), 1)) / q;
  const long double threshold = measure * measure - eps;
  std::vector<std::int64_t> members;
  for (std::int64_t n = window.lo;; ++n) {
    std::int64_t s = static_cast<std::int64_t>((static_cast<__int128>(n) * sys.step) % sys.q);
    if (s < 0) s += sys.q;
    if (static_cast<long double>(counts[s]) / q > threshold) members.push_back(n);
    if (n == window.hi) break;
  }
  return IntSet(window, std::move(members));
}

AvoiderCertificate lacunary_avoider(const std::vector<BigInt>& lambdas, std::size_t depth) {
  require(depth >= 1 && depth <= lambdas.size(), ErrorKind::InvalidArgument,
          "lacunary_avoider: depth must be in [1, number of lambdas]");
  require(lambdas[0] >= 1, ErrorKind::InvalidArgument, "lacunary_avoider: lambdas must be positive");
  for (std::size_t i = 0; i + 1 < depth; ++i)
    require(lambdas[i + 1] > 4 * lambdas[i], ErrorKind::Precondition,
            "lacunary_avoider: ratio condition l_{i+1} > 4 l_i violated at level " + std::to_string(i + 1));

  AvoiderCertificate cert;
  BigInt k = 0;  // leftmost interval of the first level
  cert.interval_index.push_back(k);
  for (std::size_t i = 0; i + 1 < depth; ++i) {
    const BigInt& l = lambdas[i];
    const BigInt& next = lambdas[i + 1];
    // leftmost k' with (4k'+1)/(4 next) >= (4k+1)/(4 l)
    BigInt num = next * (4 * k + 1) - l;
    BigInt den = 4 * l;
    BigInt kn = num / den;
    if (kn * den < num) ++kn;
    if (kn < 0) kn = 0;
    if ((4 * kn + 3) * l > (4 * k + 3) * next)
      fail(ErrorKind::Numeric, "lacunary_avoider: nested interval not contained in its parent");
    k = kn;
    cert.interval_index.push_back(k);
  }
  cert.numerator = 2 * k + 1;
  cert.denominator = 2 * lambdas[depth - 1];
  cert.alpha = static_cast<double>(boost::multiprecision::cpp_bin_float_50(cert.numerator) /
                                   boost::multiprecision::cpp_bin_float_50(cert.denominator));
  return cert;
}

bool verify_avoider(const std::vector<BigInt>& lambdas, std::size_t depth, const BigInt& numerator,
                    const BigInt& denominator) {
  if (depth > lambdas.size() || denominator <= 0) return false;
  for (std::size_t i = 0; i < depth; ++i) {
    BigInt r = (lambdas[i] * numerator) % denominator;
    if (r < 0) r += denominator;
    // r / den ∈ [1/4, 3/4]
    if (4 * r < denominator || 4 * r > 3 * denominator) return false;
  }
  return true;
}

IntSet thue_morse_set(Window window, const Budget& budget) {
  require(window.lo >= 0, ErrorKind::InvalidArgument, "Thue-Morse window must start at 0 or later");
  charge_window(window, budget);
  std::vector<std::int64_t> members;
  for (std::int64_t i = window.lo;; ++i) {
    if (std::popcount(static_cast<std::uint64_t>(i)) % 2 == 0) members.push_back(i);
    if (i == window.hi) break;
  }
  return IntSet(window, std::move(members));
}

}  // namespace predictlab::dynamics
