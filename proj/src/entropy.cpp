#include "predictlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <unordered_map>

#include "predictlab/processes.hpp"

namespace predictlab::entropy {

namespace {

// Dense ids of the tuples (X_{t+o})_{o} for every admissible t, in path order.
struct Encoded {
  std::vector<std::int32_t> ids;
  std::int64_t distinct = 0;
};

// `spread` fixes the admissible positions; it is at least offsets.back().
Encoded encode(const PathSet& paths, const std::vector<std::int64_t>& offsets, std::int64_t spread) {
  Encoded e;
  if (offsets.empty()) {
    std::size_t total = 0;
    for (const auto& p : paths) total += p.size();
    e.ids.assign(total, 0);
    e.distinct = total ? 1 : 0;
    return e;
  }
  std::unordered_map<std::string, std::int32_t> table;
  std::string key(offsets.size() * sizeof(std::int64_t), '\0');
  for (const auto& p : paths) {
    const auto len = static_cast<std::int64_t>(p.size());
    for (std::int64_t t = 0; t + spread < len; ++t) {
      for (std::size_t i = 0; i < offsets.size(); ++i)
        std::memcpy(key.data() + i * sizeof(std::int64_t), &p[t + offsets[i]], sizeof(std::int64_t));
      auto [it, fresh] = table.try_emplace(key, static_cast<std::int32_t>(table.size()));
      e.ids.push_back(it->second);
    }
  }
  e.distinct = static_cast<std::int64_t>(table.size());
  return e;
}

std::int64_t alphabet_size(const PathSet& paths) {
  std::set<std::int64_t> seen;
  for (const auto& p : paths) seen.insert(p.begin(), p.end());
  return static_cast<std::int64_t>(seen.size());
}

double plugin(const std::vector<std::int64_t>& counts, std::int64_t n) {
  if (n == 0) return 0;
  double h = 0;
  const double nd = static_cast<double>(n);
  for (auto c : counts)
    if (c > 0) {
      const double p = static_cast<double>(c) / nd;
      h -= p * std::log(p);
    }
  return h;
}

double estimate(const std::vector<std::int32_t>& ids, std::int64_t distinct, Estimator est) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(distinct), 0);
  for (auto id : ids) ++counts[id];
  const auto n = static_cast<std::int64_t>(ids.size());
  double h = plugin(counts, n);
  if (est == Estimator::MillerMadow && n > 0) {
    const auto k = std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; });
    h += static_cast<double>(k - 1) / (2.0 * static_cast<double>(n));
  }
  return h;
}

// Block bootstrap of H(a) - H(b) (b may be empty) over the shared sample order.
double bootstrap_se(const Encoded& a, const Encoded* b, std::size_t block, const EntropyConfig& cfg) {
  const std::size_t n = a.ids.size();
  if (cfg.resamples < 2 || n < 2) return 0;
  block = std::clamp<std::size_t>(block, 1, n);
  auto rng = processes::make_rng(cfg.seed, 0xB0075742ULL);
  std::uniform_int_distribution<std::size_t> start(0, n - block);
  std::vector<std::int32_t> ra(n), rb(b ? n : 0);
  double sum = 0, sumsq = 0;
  for (std::size_t r = 0; r < cfg.resamples; ++r) {
    std::size_t filled = 0;
    while (filled < n) {
      const std::size_t s = start(rng);
      for (std::size_t i = 0; i < block && filled < n; ++i, ++filled) {
        ra[filled] = a.ids[s + i];
        if (b) rb[filled] = b->ids[s + i];
      }
    }
    double v = estimate(ra, a.distinct, cfg.estimator);
    if (b) v -= estimate(rb, b->distinct, cfg.estimator);
    sum += v;
    sumsq += v * v;
  }
  const double m = sum / static_cast<double>(cfg.resamples);
  const double var = (sumsq - static_cast<double>(cfg.resamples) * m * m) / static_cast<double>(cfg.resamples - 1);
  return std::sqrt(std::max(var, 0.0));
}

std::vector<std::int64_t> normalize_offsets(std::vector<std::int64_t> offsets, std::int64_t& shift) {
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  shift = offsets.empty() ? 0 : offsets.front();
  for (auto& o : offsets) o -= shift;
  return offsets;
}

void check_samples(const Encoded& e) {
  require(!e.ids.empty(), ErrorKind::InvalidArgument, "paths are too short for the requested offsets");
}

bool undersampled(std::int64_t samples, std::int64_t alphabet, std::size_t coords, std::int64_t distinct) {
  const double need = 50.0 * std::pow(static_cast<double>(std::max<std::int64_t>(alphabet, 1)),
                                      static_cast<double>(coords));
  return static_cast<double>(samples) < need ||
         static_cast<double>(distinct) > std::sqrt(static_cast<double>(samples));
}

double bias_term(std::int64_t distinct, std::int64_t samples) {
  return samples > 0 ? static_cast<double>(std::max<std::int64_t>(distinct - 1, 0)) / (2.0 * static_cast<double>(samples))
                     : 0.0;
}

}  // namespace

double EntropyEstimate::bits() const noexcept { return value / std::numbers::ln2; }

EntropyEstimate joint_entropy(const PathSet& paths, std::vector<std::int64_t> offsets, const EntropyConfig& cfg) {
  std::int64_t shift = 0;
  auto norm = normalize_offsets(std::move(offsets), shift);
  require(norm.size() <= cfg.cap, ErrorKind::InvalidArgument,
          "joint entropy of " + std::to_string(norm.size()) + " coordinates exceeds the cap of " +
              std::to_string(cfg.cap));
  Encoded e = encode(paths, norm, norm.empty() ? 0 : norm.back());
  check_samples(e);
  EntropyEstimate out;
  for (auto o : norm) out.offsets.push_back(o + shift);
  out.sample_count = static_cast<std::int64_t>(e.ids.size());
  out.distinct_blocks = e.distinct;
  out.alphabet = alphabet_size(paths);
  out.estimator = cfg.estimator;
  const double ceiling = std::log(static_cast<double>(std::max<std::int64_t>(out.alphabet, 1))) *
                         static_cast<double>(norm.size());
  out.value = std::clamp(estimate(e.ids, e.distinct, cfg.estimator), 0.0, ceiling);
  const std::int64_t spread = norm.empty() ? 0 : norm.back();
  out.std_error = bootstrap_se(e, nullptr, static_cast<std::size_t>(std::max<std::int64_t>(10 * spread, 10)), cfg);
  out.bias_allowance = bias_term(e.distinct, out.sample_count);
  out.undersampled = undersampled(out.sample_count, out.alphabet, norm.size(), e.distinct);
  return out;
}

EntropyEstimate block_entropy(const PathSet& paths, std::size_t n, const EntropyConfig& cfg) {
  require(n >= 1, ErrorKind::InvalidArgument, "block length must be at least 1");
  require(n <= cfg.cap, ErrorKind::InvalidArgument, "block length exceeds the coordinate cap");
  std::vector<std::int64_t> offsets(n);
  for (std::size_t i = 0; i < n; ++i) offsets[i] = static_cast<std::int64_t>(i);
  return joint_entropy(paths, std::move(offsets), cfg);
}

EntropyEstimate conditional_entropy(const PathSet& paths, std::int64_t target_offset, const IntSet& predictors,
                                    const EntropyConfig& cfg) {
  require(!predictors.contains(target_offset), ErrorKind::InvalidArgument, "target offset is also a predictor");
  require(predictors.size() + 1 <= cfg.cap, ErrorKind::InvalidArgument, "too many predictor coordinates for the cap");
  std::vector<std::int64_t> all = predictors.members;
  all.push_back(target_offset);
  std::int64_t shift = 0;
  auto joint_off = normalize_offsets(all, shift);
  require(joint_off.back() <= static_cast<std::int64_t>(cfg.cap), ErrorKind::InvalidArgument,
          "offset spread exceeds the cap");
  std::vector<std::int64_t> pred_off;
  for (auto p : predictors.members) pred_off.push_back(p - shift);

  // Both encodings use the joint window positions so samples stay paired.
  Encoded joint = encode(paths, joint_off, joint_off.back());
  check_samples(joint);
  Encoded pred = encode(paths, pred_off, joint_off.back());

  EntropyEstimate out;
  out.offsets = predictors.members;
  out.target_offset = target_offset;
  out.sample_count = static_cast<std::int64_t>(joint.ids.size());
  out.distinct_blocks = joint.distinct;
  out.alphabet = alphabet_size(paths);
  out.estimator = cfg.estimator;
  const double h = estimate(joint.ids, joint.distinct, cfg.estimator) - estimate(pred.ids, pred.distinct, cfg.estimator);
  out.value = std::clamp(h, 0.0, std::log(static_cast<double>(std::max<std::int64_t>(out.alphabet, 1))));
  out.std_error = bootstrap_se(joint, &pred, static_cast<std::size_t>(std::max<std::int64_t>(10 * joint_off.back(), 10)),
                               cfg);
  out.bias_allowance = bias_term(joint.distinct, out.sample_count) + bias_term(pred.distinct, out.sample_count);
  out.undersampled = undersampled(out.sample_count, out.alphabet, joint_off.size(), joint.distinct);
  return out;
}

std::vector<EntropyEstimate> sequence_entropy_along(const PathSet& paths, const IntSet& q,
                                                    const std::vector<std::size_t>& prefix_sizes,
                                                    const EntropyConfig& cfg) {
  std::vector<EntropyEstimate> out;
  for (auto n : prefix_sizes) {
    require(n >= 1 && n <= q.size(), ErrorKind::InvalidArgument, "prefix size outside 1..|q|");
    require(n <= cfg.cap, ErrorKind::InvalidArgument, "prefix size exceeds the coordinate cap");
    std::vector<std::int64_t> offsets(q.members.begin(), q.members.begin() + static_cast<std::ptrdiff_t>(n));
    auto e = joint_entropy(paths, offsets, cfg);
    const double nd = static_cast<double>(n);
    e.value /= nd;
    e.std_error /= nd;
    e.bias_allowance /= nd;
    out.push_back(std::move(e));
  }
  return out;
}

ChainRuleResult chain_rule_bound_check(const PathSet& paths, const IntSet& q, const EntropyConfig& cfg) {
  require(q.size() >= 2, ErrorKind::InvalidArgument, "chain rule check needs |Q| >= 2");
  const auto cap = static_cast<std::int64_t>(cfg.cap);
  std::set<std::int64_t> diffs;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const auto d = q.members[i] - q.members[j];
      if (d >= 1 && d <= cap) diffs.insert(d);
    }
  ChainRuleResult r;
  r.predictors.assign(diffs.begin(), diffs.end());
  if (r.predictors.size() + 1 > cfg.cap) r.predictors.resize(cfg.cap - 1);
  require(!r.predictors.empty(), ErrorKind::InvalidArgument, "(Q - Q) ∩ [1, cap] is empty");

  const IntSet pred(Window(1, cap), r.predictors);
  auto lhs = conditional_entropy(paths, 0, pred, cfg);
  r.lhs = lhs.value;

  std::size_t longest = 0;
  for (const auto& p : paths) longest = std::max(longest, p.size());
  std::vector<std::size_t> prefixes;
  for (std::size_t n = 1; n <= std::min(q.size(), cfg.cap); ++n)
    if (q.members[n - 1] - q.members[0] < static_cast<std::int64_t>(longest)) prefixes.push_back(n);
  require(!prefixes.empty(), ErrorKind::InvalidArgument, "paths are too short for any prefix of Q");
  auto seq = sequence_entropy_along(paths, q, prefixes, cfg);
  std::size_t best = 0;
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i].value < seq[best].value) best = i;
  r.rhs = seq[best].value;
  r.rhs_prefix = prefixes[best];
  r.slack = 2.0 * (lhs.std_error + seq[best].std_error) + lhs.bias_allowance + seq[best].bias_allowance;
  r.undersampled = lhs.undersampled || seq[best].undersampled;
  r.ok = r.lhs <= r.rhs + r.slack;
  return r;
}

}  // namespace predictlab::entropy
