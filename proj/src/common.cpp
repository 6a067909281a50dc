#include "predictlab/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace predictlab {

std::int64_t Window::width() const noexcept {
  __int128 w = static_cast<__int128>(hi) - lo + 1;
  if (w > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(w);
}

IntSet::IntSet(Window w, std::vector<std::int64_t> m) : window(w), members(std::move(m)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty()) {
    require(window.contains(members.front()) && window.contains(members.back()),
            ErrorKind::InvalidArgument, "IntSet members must lie inside the window");
  }
}

bool IntSet::contains(std::int64_t x) const {
  return std::binary_search(members.begin(), members.end(), x);
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  require(d != 0, ErrorKind::InvalidArgument, "rational with zero denominator");
  if (d < 0) {
    n = checked_mul(n, -1);
    d = checked_mul(d, -1);
  }
  std::int64_t g = std::gcd(n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorKind::Overflow, "int64 overflow in addition");
  return out;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) fail(ErrorKind::Overflow, "int64 overflow in subtraction");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) fail(ErrorKind::Overflow, "int64 overflow in multiplication");
  return out;
}

Budget Budget::defaults() {
  Budget b;
  if (const char* env = std::getenv("PREDICTLAB_BUDGET")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) b.enumeration_cap = v;
  }
  return b;
}

long double frac_mul(std::int64_t k, double x) {
  if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "non-finite angle");
  if (x == 0.0 || k == 0) return 0.0L;
  int exp2 = 0;
  double mant = std::frexp(x, &exp2);  // x = mant * 2^exp2, |mant| in [0.5, 1)
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  int e = exp2 - 53;  // x = m * 2^e exactly
  if (e >= 0) return 0.0L;
  __int128 prod = static_cast<__int128>(k) * m;
  int s = -e;
  long double value;
  if (s >= 126) {
    value = std::ldexp(static_cast<long double>(prod), e);
    if (value < 0) value += 1.0L;
  } else {
    __int128 mask = (static_cast<__int128>(1) << s) - 1;
    __int128 r = prod & mask;
    value = std::ldexp(static_cast<long double>(r), e);
  }
  if (value >= 1.0L) value = 0.0L;
  return value;
}

}  // namespace predictlab
