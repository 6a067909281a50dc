#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "predictlab/dynamics.hpp"
#include "predictlab/measures.hpp"

namespace predictlab::processes {

/// Value at time n is the index of the partition cell containing T^n x, or
/// partition.size() when no cell contains it. x is drawn uniformly.
struct RotationCoding {
  dynamics::RotationSystem system;
  std::vector<dynamics::TargetSet> partition;
};
/// X_{kn+r} = (Z ⊕ r) zeta_r with Z uniform on {1..k} and i.i.d. signs zeta_r.
struct KPeriodicCounterexample { std::int64_t k = 2; };
/// Y_n = 2 * 1[first coordinate of S^n(x, y) ∈ [0, 1/2]] - 1, S(x, y) = (x + y, y + alpha).
struct SkewCoding { double alpha = 0; };
/// Real Gaussian process whose covariance is Re mu^(n); `grid` is the minimum
/// number of frequency bins.
struct GaussianSpectral {
  measures::MeasurePtr measure;
  std::size_t grid = 4096;
};
struct SignOf { GaussianSpectral inner; };
struct IIDUniform { std::int64_t alphabet = 2; };
/// x_n = 1 iff frac(n alpha + phase) ∈ [0, 1/2), phase uniform.
struct Sturmian { double alpha = 0; };

struct ProcessModel {
  using Variant =
      std::variant<RotationCoding, KPeriodicCounterexample, SkewCoding, GaussianSpectral, SignOf, IIDUniform, Sturmian>;
  Variant v;
};

/// True for models whose paths are real valued (GaussianSpectral only).
bool real_valued(const ProcessModel& model);

/// Stable 64-bit FNV-1a fingerprint of the model parameters.
std::uint64_t fingerprint(const ProcessModel& model);

struct SamplePath {
  std::vector<std::int64_t> ints;  // finite-valued models
  std::vector<double> reals;       // GaussianSpectral
  bool is_real = false;
  std::int64_t offset = 0;         // absolute time of the first value
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t model_fingerprint = 0;
  /// Bound on |empirical covariance model - Re mu^(n)| over lags < length due
  /// to spectral discretization (0 when synthesis is exact on those lags).
  double spectral_error_bound = 0;
  std::size_t frequency_bins = 0;

  std::size_t size() const noexcept { return is_real ? reals.size() : ints.size(); }
};

/// Deterministic generator for substream `stream` of `seed`.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

/// One stationary sample of X_offset .. X_{offset+length-1}, drawn from
/// substream `stream`.
SamplePath sample(const ProcessModel& model, std::int64_t length, std::uint64_t seed, std::int64_t offset = 0,
                  std::uint64_t stream = 0, const Budget& budget = Budget::defaults());

/// Independent replicates; replicate i uses substream i.
std::vector<SamplePath> sample_ensemble(const ProcessModel& model, std::int64_t replicates, std::int64_t length,
                                        std::uint64_t seed, const Budget& budget = Budget::defaults());

enum class AutocorrNorm { Biased, Unbiased };

/// c_k = (1/N) sum_{i < N-k} x_i x_{i+k} for k = 0..maxlag (1/(N-k) when Unbiased).
/// No mean subtraction. Requires maxlag < N/4.
std::vector<double> empirical_autocorrelation(std::span<const double> path, std::int64_t maxlag,
                                              AutocorrNorm norm = AutocorrNorm::Biased);
std::vector<double> empirical_autocorrelation(std::span<const std::int64_t> path, std::int64_t maxlag,
                                              AutocorrNorm norm = AutocorrNorm::Biased);

/// sign with sign(0) = +1.
std::vector<std::int64_t> sign_process(std::span<const double> path);

/// x_n = 1 iff frac(n alpha) ∈ [0, 1/2) for n in the window. Rejects alpha
/// outside (0, 1) or within 1e-12 of a rational with denominator <= 64.
/// Cut 1/2 is the default coding; cut = alpha gives the mechanical (Sturmian)
/// word with complexity n + 1, other cuts give complexity 2n.
std::vector<std::int64_t> sturmian_coding(double alpha, Window window, const Budget& budget = Budget::defaults(),
                                          double cut = 0.5);

/// Number of distinct length-n factors of a path.
std::size_t factor_complexity(std::span<const std::int64_t> path, std::size_t n);

/// CSV "index,value" with one row per sample.
void write_csv(std::ostream& out, const SamplePath& path);
/// Binary layout: "PLABPATH", u32 version, u32 kind (0 int, 1 real), u64 seed,
/// u64 stream, u64 fingerprint, i64 offset, u64 length, then 64-bit little-endian values.
void write_binary(std::ostream& out, const SamplePath& path);
SamplePath read_binary(std::istream& in);

}  // namespace predictlab::processes
