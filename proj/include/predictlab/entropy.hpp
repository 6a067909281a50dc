#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "predictlab/common.hpp"

namespace predictlab::entropy {

enum class Estimator { Plugin, MillerMadow };

/// One or more finite-valued paths. Samples are pooled over all paths; a
/// window never straddles two paths.
using PathSet = std::vector<std::vector<std::int64_t>>;

struct EntropyConfig {
  Estimator estimator = Estimator::Plugin;
  std::size_t cap = 20;          // max jointly estimated coordinates (and offset spread)
  std::size_t resamples = 200;   // block bootstrap resamples; 0 disables
  std::uint64_t seed = 0;        // bootstrap seed
};

struct EntropyEstimate {
  double value = 0;              // nats
  std::vector<std::int64_t> offsets;  // coordinates jointly estimated (conditioning set for conditionals)
  std::int64_t target_offset = 0;
  std::int64_t sample_count = 0;
  std::int64_t distinct_blocks = 0;
  std::int64_t alphabet = 0;
  Estimator estimator = Estimator::Plugin;
  double std_error = 0;
  double bias_allowance = 0;     // (K - 1) / (2N) summed over the plug-in terms involved
  bool undersampled = false;

  double bits() const noexcept;
};

/// Entropy of the joint law of (X_{t+o})_{o in offsets} over all positions t.
EntropyEstimate joint_entropy(const PathSet& paths, std::vector<std::int64_t> offsets, const EntropyConfig& cfg = {});

/// H of length-n blocks over sliding windows.
EntropyEstimate block_entropy(const PathSet& paths, std::size_t n, const EntropyConfig& cfg = {});

/// H(X_target | X_p, p in predictors) = H(joint) - H(predictors).
EntropyEstimate conditional_entropy(const PathSet& paths, std::int64_t target_offset, const IntSet& predictors,
                                    const EntropyConfig& cfg = {});

/// H(X_{Q_n}) / n for each requested prefix size n, Q_n the first n members of q.
std::vector<EntropyEstimate> sequence_entropy_along(const PathSet& paths, const IntSet& q,
                                                    const std::vector<std::size_t>& prefix_sizes,
                                                    const EntropyConfig& cfg = {});

struct ChainRuleResult {
  double lhs = 0;                 // H(X_0 | X_d, d in (Q - Q) ∩ [1, cap])
  double rhs = 0;                 // min_n H(X_{Q_n}) / n over computed prefixes
  std::size_t rhs_prefix = 0;     // prefix attaining the minimum
  std::vector<std::int64_t> predictors;
  double slack = 0;               // 2 (se_lhs + se_rhs) + bias allowances
  bool undersampled = false;
  bool ok = false;
};

ChainRuleResult chain_rule_bound_check(const PathSet& paths, const IntSet& q, const EntropyConfig& cfg = {});

}  // namespace predictlab::entropy
