#include "predictlab/processes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <string_view>

#include <fftw3.h>

namespace predictlab::processes {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Fnv {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void value(const T& v) {
    bytes(&v, sizeof v);
  }
  void tag(std::string_view s) { bytes(s.data(), s.size()); }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void hash_measure(Fnv& f, const measures::CircleMeasure& mu) {
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, measures::Atomic>) {
          f.tag("atomic");
          for (const auto& a : m.atoms) {
            f.value(a.angle);
            f.value(a.mass.real());
            f.value(a.mass.imag());
          }
        } else if constexpr (std::is_same_v<M, measures::GridDensity>) {
          f.tag("grid");
          for (double v : m.values) f.value(v);
        } else if constexpr (std::is_same_v<M, measures::IntervalLebesgue>) {
          f.tag("interval");
          f.value(m.lo);
          f.value(m.hi);
          f.value(m.scale);
        } else if constexpr (std::is_same_v<M, measures::RieszProduct>) {
          f.tag("riesz");
          f.value(m.depth);
          for (std::size_t i = 0; i < m.depth; ++i) f.value(m.gens[i]);
        } else {
          f.tag("mixture");
          for (const auto& c : m.components) {
            f.value(c.weight);
            hash_measure(f, *c.measure);
          }
          f.tag("end");
        }
      },
      mu.v);
}

void hash_system(Fnv& f, const dynamics::RotationSystem& sys) {
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, dynamics::FiniteCycle>) {
          f.tag("cycle");
          f.value(s.q);
          f.value(s.step);
        } else if constexpr (std::is_same_v<S, dynamics::TorusRotation>) {
          f.tag("torus");
          for (double a : s.alpha) f.value(a);
        } else if constexpr (std::is_same_v<S, dynamics::SkewProduct>) {
          f.tag("skew");
          f.value(s.alpha);
        } else {
          f.tag("quadratic_skew");
          f.value(s.alpha);
        }
      },
      sys);
}

// Spectral lines: bins[j] is the weight at frequency j/N, `atoms` are off-grid lines.
struct Spectrum {
  std::size_t n = 0;
  std::vector<double> bins;
  std::vector<measures::Atom> atoms;
  double error_per_lag = 0;
};

std::size_t synthesis_size(const measures::CircleMeasure& mu, std::size_t floor_size) {
  std::size_t n = floor_size;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, measures::GridDensity>) {
          n = std::max(n, m.values.size());
        } else if constexpr (std::is_same_v<M, measures::RieszProduct>) {
          std::int64_t total = 0;
          for (std::size_t i = 0; i < m.depth; ++i) total = checked_add(total, m.gens[i]);
          n = std::max(n, static_cast<std::size_t>(4 * total));
        } else if constexpr (std::is_same_v<M, measures::Mixture>) {
          for (const auto& c : m.components) n = std::max(n, synthesis_size(*c.measure, floor_size));
        }
      },
      mu.v);
  return std::bit_ceil(n);
}

void add_lines(Spectrum& s, const measures::CircleMeasure& mu, double weight) {
  require(weight >= 0, ErrorKind::Precondition, "Gaussian spectral weights must be nonnegative");
  const double nd = static_cast<double>(s.n);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, measures::Atomic>) {
          for (const auto& a : m.atoms) {
            require(a.mass.imag() == 0 && a.mass.real() >= 0, ErrorKind::Precondition,
                    "Gaussian synthesis needs real nonnegative atoms");
            s.atoms.push_back({a.angle, a.mass * weight});
          }
        } else if constexpr (std::is_same_v<M, measures::GridDensity>) {
          const std::size_t stride = s.n / m.values.size();
          const double scale = weight / static_cast<double>(m.values.size());
          for (std::size_t j = 0; j < m.values.size(); ++j) {
            require(m.values[j] >= 0, ErrorKind::Precondition, "Gaussian synthesis needs a nonnegative density");
            s.bins[j * stride] += m.values[j] * scale;
          }
        } else if constexpr (std::is_same_v<M, measures::IntervalLebesgue>) {
          require(m.scale >= 0, ErrorKind::Precondition, "Gaussian synthesis needs a nonnegative interval scale");
          // Exact overlap of the (wrapped) interval with each bin [(j - 1/2)/N, (j + 1/2)/N).
          const double lo = m.lo * nd + 0.5;
          const double hi = m.hi * nd + 0.5;
          const double first = std::floor(lo);
          for (double b = first; b < hi; b += 1.0) {
            const double left = std::max(b, lo);
            const double right = std::min(b + 1.0, hi);
            if (right <= left) continue;
            auto j = static_cast<std::int64_t>(b) % static_cast<std::int64_t>(s.n);
            if (j < 0) j += static_cast<std::int64_t>(s.n);
            s.bins[j] += weight * m.scale * (right - left) / nd;
          }
          s.error_per_lag += std::numbers::pi * weight * m.scale * (m.hi - m.lo) / nd;
        } else if constexpr (std::is_same_v<M, measures::RieszProduct>) {
          for (std::size_t j = 0; j < s.n; ++j) {
            double f = 1.0;
            for (std::size_t i = 0; i < m.depth; ++i) {
              const auto idx = static_cast<std::size_t>((static_cast<unsigned __int128>(m.gens[i]) * j) % s.n);
              f *= 1.0 + std::cos(kTwoPi * static_cast<double>(idx) / nd);
            }
            s.bins[j] += weight * f / nd;
          }
        } else {
          for (const auto& c : m.components) add_lines(s, *c.measure, weight * c.weight);
        }
      },
      mu.v);
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> gaussian_path(const GaussianSpectral& g, std::int64_t length, std::int64_t offset,
                                  std::mt19937_64& rng, double& error_bound, std::size_t& bins_used) {
  require(g.measure != nullptr, ErrorKind::InvalidArgument, "Gaussian model without a measure");
  require(measures::is_real(*g.measure), ErrorKind::Precondition, "Gaussian spectral measure must be real");
  const std::size_t floor_size = std::max<std::size_t>({g.grid, 4096, 2 * static_cast<std::size_t>(length)});
  Spectrum s;
  s.n = synthesis_size(*g.measure, floor_size);
  s.bins.assign(s.n, 0.0);
  add_lines(s, *g.measure, 1.0);
  bins_used = s.n;
  error_bound = s.error_per_lag * static_cast<double>(std::max<std::int64_t>(length - 1, 0));

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(length), 0.0);

  // Grid lines via one inverse DFT: X_t = Re sum_j z_j e^{2 pi i j t / N}.
  fftw_complex* buf = fftw_alloc_complex(s.n);
  const auto nn = static_cast<std::int64_t>(s.n);
  const std::int64_t shift = ((offset % nn) + nn) % nn;
  for (std::size_t j = 0; j < s.n; ++j) {
    const double xi = normal(rng);
    const double eta = normal(rng);
    const double amp = std::sqrt(std::max(s.bins[j], 0.0));
    std::complex<double> z = amp * std::complex<double>(xi, -eta);
    const auto idx = static_cast<std::int64_t>((static_cast<__int128>(j) * shift) % nn);
    const double ang = kTwoPi * static_cast<double>(idx) / static_cast<double>(nn);
    z *= std::complex<double>(std::cos(ang), std::sin(ang));
    buf[j][0] = z.real();
    buf[j][1] = z.imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(s.n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  for (std::int64_t t = 0; t < length; ++t) out[t] = buf[t][0];
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);

  for (const auto& a : s.atoms) {
    const double amp = std::sqrt(a.mass.real());
    const double xi = normal(rng);
    const double eta = normal(rng);
    for (std::int64_t t = 0; t < length; ++t) {
      const double ang = kTwoPi * static_cast<double>(frac_mul(checked_add(offset, t), a.angle));
      out[t] += amp * (xi * std::cos(ang) + eta * std::sin(ang));
    }
  }
  return out;
}

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

bool in_target(const dynamics::TargetSet& u, const dynamics::Point& p) {
  if (const auto* c = std::get_if<dynamics::CycleSubset>(&u))
    return std::find(c->residues.begin(), c->residues.end(), p.residue) != c->residues.end();
  const auto& box = std::get<dynamics::Box>(u);
  for (std::size_t i = 0; i < box.arcs.size(); ++i)
    if (!box.arcs[i].contains(p.coords[i])) return false;
  return true;
}

bool near_small_rational(double alpha) {
  for (std::int64_t q = 1; q <= 64; ++q) {
    const double p = std::round(alpha * static_cast<double>(q));
    if (std::fabs(alpha - p / static_cast<double>(q)) <= 1e-12) return true;
  }
  return false;
}

template <typename T>
std::vector<double> autocorr_impl(std::span<const T> path, std::int64_t maxlag, AutocorrNorm norm) {
  const auto n = static_cast<std::int64_t>(path.size());
  require(maxlag >= 0 && 4 * maxlag < n, ErrorKind::InvalidArgument,
          "empirical_autocorrelation needs maxlag < length / 4");
  std::vector<double> out;
  for (std::int64_t k = 0; k <= maxlag; ++k) {
    long double acc = 0;
    for (std::int64_t i = 0; i + k < n; ++i)
      acc += static_cast<long double>(path[i]) * static_cast<long double>(path[i + k]);
    const auto denom = static_cast<long double>(norm == AutocorrNorm::Biased ? n : n - k);
    out.push_back(static_cast<double>(acc / denom));
  }
  return out;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}
void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}
std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) fail(ErrorKind::InvalidArgument, "truncated path file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) fail(ErrorKind::InvalidArgument, "truncated path file");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

constexpr char kMagic[8] = {'P', 'L', 'A', 'B', 'P', 'A', 'T', 'H'};

}  // namespace

bool real_valued(const ProcessModel& model) { return std::holds_alternative<GaussianSpectral>(model.v); }

std::uint64_t fingerprint(const ProcessModel& model) {
  Fnv f;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, RotationCoding>) {
          f.tag("rotation_coding");
          hash_system(f, m.system);
          for (const auto& cell : m.partition) {
            if (const auto* c = std::get_if<dynamics::CycleSubset>(&cell)) {
              f.tag("cells");
              for (auto r : c->residues) f.value(r);
            } else {
              f.tag("box");
              for (const auto& arc : std::get<dynamics::Box>(cell).arcs) {
                f.value(arc.a);
                f.value(arc.b);
              }
            }
          }
        } else if constexpr (std::is_same_v<M, KPeriodicCounterexample>) {
          f.tag("kperiodic");
          f.value(m.k);
        } else if constexpr (std::is_same_v<M, SkewCoding>) {
          f.tag("skew_coding");
          f.value(m.alpha);
        } else if constexpr (std::is_same_v<M, GaussianSpectral>) {
          f.tag("gaussian");
          f.value(m.grid);
          hash_measure(f, *m.measure);
        } else if constexpr (std::is_same_v<M, SignOf>) {
          f.tag("sign");
          f.value(m.inner.grid);
          hash_measure(f, *m.inner.measure);
        } else if constexpr (std::is_same_v<M, IIDUniform>) {
          f.tag("iid");
          f.value(m.alphabet);
        } else {
          f.tag("sturmian");
          f.value(m.alpha);
        }
      },
      model.v);
  return f.digest();
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

SamplePath sample(const ProcessModel& model, std::int64_t length, std::uint64_t seed, std::int64_t offset,
                  std::uint64_t stream, const Budget& budget) {
  require(length >= 1, ErrorKind::InvalidArgument, "path length must be at least 1");
  if (length > budget.max_path_length)
    fail(ErrorKind::Budget, "path length " + std::to_string(length) + " exceeds the budget of " +
                                std::to_string(budget.max_path_length));
  checked_add(offset, length);
  SamplePath path;
  path.offset = offset;
  path.seed = seed;
  path.stream = stream;
  path.model_fingerprint = fingerprint(model);
  path.is_real = real_valued(model);
  auto rng = make_rng(seed, stream);
  const auto len = static_cast<std::size_t>(length);

  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, RotationCoding>) {
          require(!m.partition.empty(), ErrorKind::InvalidArgument, "rotation coding needs a partition");
          dynamics::Point x;
          if (const auto* c = std::get_if<dynamics::FiniteCycle>(&m.system)) {
            x.residue = std::uniform_int_distribution<std::int64_t>(0, c->q - 1)(rng);
          } else {
            x.coords.resize(dynamics::dimension(m.system));
            for (auto& v : x.coords) v = uniform01(rng);
          }
          path.ints.resize(len);
          for (std::size_t t = 0; t < len; ++t) {
            auto p = dynamics::iterate(m.system, x, offset + static_cast<std::int64_t>(t));
            std::size_t cell = 0;
            while (cell < m.partition.size() && !in_target(m.partition[cell], p)) ++cell;
            path.ints[t] = static_cast<std::int64_t>(cell);
          }
        } else if constexpr (std::is_same_v<M, KPeriodicCounterexample>) {
          require(m.k >= 2, ErrorKind::InvalidArgument, "k-periodic counterexample needs k >= 2");
          const std::int64_t z = std::uniform_int_distribution<std::int64_t>(1, m.k)(rng);
          std::vector<std::int64_t> signs(static_cast<std::size_t>(m.k));
          std::bernoulli_distribution coin(0.5);
          for (auto& s : signs) s = coin(rng) ? 1 : -1;
          path.ints.resize(len);
          for (std::size_t t = 0; t < len; ++t) {
            std::int64_t r = (offset + static_cast<std::int64_t>(t)) % m.k;
            if (r < 0) r += m.k;
            path.ints[t] = ((z - 1 + r) % m.k + 1) * signs[r];
          }
        } else if constexpr (std::is_same_v<M, SkewCoding>) {
          dynamics::RotationSystem sys = dynamics::SkewProduct{m.alpha};
          dynamics::Point x;
          x.coords = {uniform01(rng), uniform01(rng)};
          path.ints.resize(len);
          for (std::size_t t = 0; t < len; ++t) {
            auto p = dynamics::iterate(sys, x, offset + static_cast<std::int64_t>(t));
            path.ints[t] = p.coords[0] <= 0.5 ? 1 : -1;
          }
        } else if constexpr (std::is_same_v<M, GaussianSpectral>) {
          path.reals = gaussian_path(m, length, offset, rng, path.spectral_error_bound, path.frequency_bins);
        } else if constexpr (std::is_same_v<M, SignOf>) {
          auto reals = gaussian_path(m.inner, length, offset, rng, path.spectral_error_bound, path.frequency_bins);
          path.ints = sign_process(reals);
        } else if constexpr (std::is_same_v<M, IIDUniform>) {
          require(m.alphabet >= 1, ErrorKind::InvalidArgument, "alphabet size must be positive");
          std::uniform_int_distribution<std::int64_t> pick(0, m.alphabet - 1);
          path.ints.resize(len);
          for (auto& v : path.ints) v = pick(rng);
        } else {
          require(m.alpha > 0 && m.alpha < 1, ErrorKind::InvalidArgument, "Sturmian alpha must lie in (0, 1)");
          const double phase = uniform01(rng);
          path.ints.resize(len);
          for (std::size_t t = 0; t < len; ++t) {
            const long double v = frac_mul(offset + static_cast<std::int64_t>(t), m.alpha) + phase;
            path.ints[t] = (v - std::floor(v)) < 0.5L ? 1 : 0;
          }
        }
      },
      model.v);
  return path;
}

std::vector<SamplePath> sample_ensemble(const ProcessModel& model, std::int64_t replicates, std::int64_t length,
                                        std::uint64_t seed, const Budget& budget) {
  require(replicates >= 1, ErrorKind::InvalidArgument, "ensemble needs at least one replicate");
  if (checked_mul(replicates, length) > budget.max_path_length)
    fail(ErrorKind::Budget, "ensemble size exceeds the path budget");
  std::vector<SamplePath> out;
  out.reserve(static_cast<std::size_t>(replicates));
  for (std::int64_t i = 0; i < replicates; ++i)
    out.push_back(sample(model, length, seed, 0, static_cast<std::uint64_t>(i), budget));
  return out;
}

std::vector<double> empirical_autocorrelation(std::span<const double> path, std::int64_t maxlag, AutocorrNorm norm) {
  return autocorr_impl(path, maxlag, norm);
}

std::vector<double> empirical_autocorrelation(std::span<const std::int64_t> path, std::int64_t maxlag,
                                              AutocorrNorm norm) {
  return autocorr_impl(path, maxlag, norm);
}

std::vector<std::int64_t> sign_process(std::span<const double> path) {
  std::vector<std::int64_t> out(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    require(!std::isnan(path[i]), ErrorKind::InvalidArgument, "sign of NaN");
    out[i] = path[i] < 0 ? -1 : 1;
  }
  return out;
}

std::vector<std::int64_t> sturmian_coding(double alpha, Window window, const Budget& budget, double cut) {
  require(alpha > 0 && alpha < 1, ErrorKind::InvalidArgument, "Sturmian alpha must lie in (0, 1)");
  require(!near_small_rational(alpha), ErrorKind::InvalidArgument,
          "Sturmian alpha is within 1e-12 of a rational with denominator <= 64");
  require(cut > 0 && cut < 1, ErrorKind::InvalidArgument, "coding cut must lie in (0, 1)");
  if (window.width() > budget.max_path_length) fail(ErrorKind::Budget, "Sturmian window exceeds the path budget");
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(window.width()));
  for (std::int64_t n = window.lo;; ++n) {
    out.push_back(frac_mul(n, alpha) < static_cast<long double>(cut) ? 1 : 0);
    if (n == window.hi) break;
  }
  return out;
}

std::size_t factor_complexity(std::span<const std::int64_t> path, std::size_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "factor length must be positive");
  if (path.size() < n) return 0;
  std::set<std::vector<std::int64_t>> seen;
  for (std::size_t i = 0; i + n <= path.size(); ++i) seen.emplace(path.begin() + i, path.begin() + i + n);
  return seen.size();
}

void write_csv(std::ostream& out, const SamplePath& path) {
  out << "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << path.offset + static_cast<std::int64_t>(i) << ',';
    if (path.is_real) {
      std::snprintf(buf, sizeof buf, "%.17g", path.reals[i]);
      out << buf;
    } else {
      out << path.ints[i];
    }
    out << '\n';
  }
}

void write_binary(std::ostream& out, const SamplePath& path) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, 1);
  put_u32(out, path.is_real ? 1 : 0);
  put_u64(out, path.seed);
  put_u64(out, path.stream);
  put_u64(out, path.model_fingerprint);
  put_u64(out, static_cast<std::uint64_t>(path.offset));
  put_u64(out, path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::uint64_t bits;
    if (path.is_real)
      std::memcpy(&bits, &path.reals[i], sizeof bits);
    else
      bits = static_cast<std::uint64_t>(path.ints[i]);
    put_u64(out, bits);
  }
}

SamplePath read_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    fail(ErrorKind::InvalidArgument, "not a path file");
  if (get_u32(in) != 1) fail(ErrorKind::InvalidArgument, "unsupported path file version");
  SamplePath p;
  const auto kind = get_u32(in);
  require(kind <= 1, ErrorKind::InvalidArgument, "unknown path kind");
  p.is_real = kind == 1;
  p.seed = get_u64(in);
  p.stream = get_u64(in);
  p.model_fingerprint = get_u64(in);
  p.offset = static_cast<std::int64_t>(get_u64(in));
  const auto n = get_u64(in);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto bits = get_u64(in);
    if (p.is_real) {
      double d;
      std::memcpy(&d, &bits, sizeof d);
      p.reals.push_back(d);
    } else {
      p.ints.push_back(static_cast<std::int64_t>(bits));
    }
  }
  return p;
}

}  // namespace predictlab::processes
