#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace predictlab {

/// Error categories. The C API and the CLI map these onto error/exit codes.
enum class ErrorKind {
  InvalidArgument,  // bad parameters, schema violations
  Precondition,     // operation precondition violated (e.g. gap condition)
  Budget,           // enumeration / length cap exceeded
  Overflow,         // checked 64-bit overflow
  Numeric,          // numeric hard failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

/// Inclusive integer window [lo, hi].
struct Window {
  std::int64_t lo = 1;
  std::int64_t hi = 1;

  Window() = default;
  Window(std::int64_t lo_, std::int64_t hi_) : lo(lo_), hi(hi_) {
    require(lo <= hi, ErrorKind::InvalidArgument, "window requires lo <= hi");
  }

  bool contains(std::int64_t x) const noexcept { return x >= lo && x <= hi; }
  /// Number of integers in the window; saturates at INT64_MAX.
  std::int64_t width() const noexcept;

  friend bool operator==(const Window&, const Window&) = default;
};

/// A finite materialization of a subset of Z: sorted, strictly increasing
/// members, all inside `window`. Every verdict built on an IntSet is window
/// evidence only.
struct IntSet {
  Window window;
  std::vector<std::int64_t> members;

  IntSet() = default;
  /// Sorts and deduplicates; rejects members outside the window.
  IntSet(Window w, std::vector<std::int64_t> m);

  bool empty() const noexcept { return members.empty(); }
  std::size_t size() const noexcept { return members.size(); }
  bool contains(std::int64_t x) const;

  friend bool operator==(const IntSet&, const IntSet&) = default;
};

/// Exact rational with int64 parts, always normalized (den > 0, gcd 1).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
};

std::string to_string(const Rational& r);

/// Checked int64 arithmetic.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Global enumeration / sampling caps. The environment variable
/// PREDICTLAB_BUDGET overrides `enumeration_cap`.
struct Budget {
  std::int64_t enumeration_cap = 10'000'000;
  std::int64_t max_path_length = 50'000'000;

  static Budget defaults();
};

/// frac(k * x) computed exactly on the binary value of `x`, then rounded
/// once. Stays accurate for |k| far beyond where k*x in double would drift.
long double frac_mul(std::int64_t k, double x);

/// frac(x) in [0, 1).
inline double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

}  // namespace predictlab
