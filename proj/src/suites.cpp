#include <algorithm>

#include "ops_internal.hpp"

namespace predictlab::experiments {

namespace {

Suite make(const char* name, const char* description, const char* operations) {
  Json m = {{"schema_version", 1}, {"name", name}, {"seed", 20240601}, {"operations", Json::parse(operations)}};
  return {name, description, std::move(m)};
}

std::vector<Suite> build() {
  std::vector<Suite> s;
  s.push_back(make("counterexample-k3",
                   "k-periodic counterexample, k = 3: X_0 keeps log 2 nats given the shifted progression 3N+1 and none given 3N",
                   R"([
    {"id": "shifted", "module": "entropy", "op": "conditional_entropy",
     "params": {"model": {"type": "kperiodic", "k": 3}, "length": 11, "replicates": 100000, "predictors": [4, 7, 10],
                "expect": {"value": 0.6931471805599453, "tol": 0.02}}},
    {"id": "aligned", "module": "entropy", "op": "conditional_entropy",
     "params": {"model": {"type": "kperiodic", "k": 3}, "length": 11, "replicates": 100000, "predictors": [3, 6, 9],
                "expect": {"value": 0.0, "tol": 0.02}}}
  ])"));
  s.push_back(make("return-times-rotation", "Return-time sets N(U,U) of a cyclic and a circle rotation",
                   R"([
    {"id": "cycle", "module": "dynamics", "op": "return_times",
     "params": {"system": {"type": "cycle", "q": 5, "step": 1}, "target": {"type": "cycle_subset", "residues": [0]},
                "window": [1, 12], "expect": {"members": [5, 10]}}},
    {"id": "half-turn", "module": "dynamics", "op": "return_times",
     "params": {"system": {"type": "torus", "alpha": [0.5]}, "target": {"type": "box", "arcs": [[0, 0.25]]},
                "window": [1, 6], "expect": {"members": [2, 4, 6]}}},
    {"id": "golden", "module": "dynamics", "op": "return_times",
     "params": {"system": {"type": "torus", "alpha": [0.6180339887498949]}, "target": {"type": "box", "arcs": [[0, 0.1]]},
                "window": [1, 10000], "expect": {"max_gap_at_most": 21}}}
  ])"));
  s.push_back(make("khintchine-gaps", "Correlation-large lags of cyclic rotations have bounded gaps",
                   R"([
    {"id": "q5", "module": "dynamics", "op": "khintchine_set",
     "params": {"q": 5, "residues": [0], "eps": 0.03, "window": [1, 100], "expect": {"fields": {"bounded_by_q": true}, "max_gap_at_most": 5}}},
    {"id": "q6", "module": "dynamics", "op": "khintchine_set",
     "params": {"q": 6, "residues": [0, 3], "eps": 0.05, "window": [1, 30], "expect": {"members": [3, 6, 9, 12, 15, 18, 21, 24, 27, 30]}}},
    {"id": "random", "module": "checks", "op": "khintchine_family", "params": {"count": 50}}
  ])"));
  s.push_back(make("riesz-sip-support", "Fourier support of the Riesz product over 1, 4, 13 equals the symmetric SIP set",
                   R"([
    {"id": "support", "module": "checks", "op": "riesz_sip_support", "params": {}}
  ])"));
  s.push_back(make("hilbert-lemma", "Unit vectors with pairwise inner products -eps exist iff r <= 1 + 1/eps",
                   R"([
    {"id": "grid", "module": "checks", "op": "hilbert_grid", "params": {"r_max": 20}}
  ])"));
  s.push_back(make("szego-ma1", "Levinson errors for autocorrelation (2, 1, 0, ...) converge to the geometric-mean bound 1",
                   R"([
    {"id": "ma1", "module": "checks", "op": "szego_ma1", "params": {"n": 50}}
  ])"));
  s.push_back(make("independence-kN", "Lebesgue on [-1/6, 1/6] cannot be predicted from lags in 3N",
                   R"([
    {"id": "sweep", "module": "checks", "op": "independence_kn", "params": {"k": 3, "K": 100}},
    {"id": "direct", "module": "prediction", "op": "independence_check",
     "params": {"measure": {"type": "interval", "lo": -0.16666666666666666, "hi": 0.16666666666666666},
                "p": {"type": "dilate", "k": 3, "inner": {"type": "ap", "a": 1, "d": 1}}, "window": [1, 300]}}
  ])"));
  s.push_back(make("squares-witness", "Progressions -r + 3r^2 N miss the squares (always -1 mod 3)",
                   R"([
    {"id": "squares", "module": "checks", "op": "witness_progressions", "params": {"family": "squares", "r_max": 200}}
  ])"));
  s.push_back(make("primes-witness", "Progressions -r + 3r N miss the primes for r >= 2",
                   R"([
    {"id": "primes", "module": "checks", "op": "witness_progressions", "params": {"family": "primes", "r_min": 2, "r_max": 200}}
  ])"));
  s.push_back(make("q3-witness", "Factorials lie in blocks [t k!, t k!] up to a finite set; witness progressions avoid them",
                   R"([
    {"id": "factorials", "module": "checks", "op": "witness_progressions", "params": {"family": "factorials", "r_max": 200}}
  ])"));
  s.push_back(make("ip-base3", "IP(1, 3, 9, ...) lies in blocks [t 3^k, t 3^k + (3^k - 1)/2]; witness progressions avoid it",
                   R"([
    {"id": "ip", "module": "checks", "op": "witness_progressions", "params": {"family": "ip_base3", "r_max": 200}},
    {"id": "complement-gaps", "module": "sets", "op": "gap_statistics",
     "params": {"spec": {"type": "complement", "inner": {"type": "ip", "gens": [1, 3, 9, 27, 81, 243, 729, 2187]}},
                "window": [1, 3000]}}
  ])"));
  s.push_back(make("cube-fermat", "No cube is a sum of two cubes in [1, 10^6]",
                   R"([
    {"id": "cubes", "module": "sets", "op": "sumset_disjoint",
     "params": {"spec": {"type": "poly", "coeffs": [0, 0, 0, 1]}, "window": [1, 1000000], "expect": {"fields": {"disjoint": true}}}}
  ])"));
  s.push_back(make("bessel-bound", "Squared Fourier mass on a sum-free Q stays below 1 for probability densities",
                   R"([
    {"id": "family", "module": "checks", "op": "bessel_family", "params": {}},
    {"id": "single", "module": "measures", "op": "bessel_sum",
     "params": {"measure": {"type": "single_frequency", "c": 1, "q": 7}, "q": [7], "window": [1, 100],
                "expect": {"value": 0.25, "tol": 1e-12}}}
  ])"));
  s.push_back(make("lacunary-avoider", "Nested-interval construction of alpha with frac(lambda_i alpha) in [1/4, 3/4]",
                   R"([
    {"id": "powers5", "module": "dynamics", "op": "lacunary_avoider", "params": {"powers": {"base": 5, "count": 30}}},
    {"id": "random", "module": "checks", "op": "lacunary_family", "params": {"count": 20, "depth": 30}}
  ])"));
  s.push_back(make("thue-morse", "Thue-Morse ones: prefix values and bounded gaps",
                   R"([
    {"id": "prefix", "module": "dynamics", "op": "thue_morse_set", "params": {"window": [0, 7], "expect": {"members": [0, 3, 5, 6]}}},
    {"id": "next", "module": "dynamics", "op": "thue_morse_set", "params": {"window": [8, 15], "expect": {"members": [9, 10, 12, 15]}}},
    {"id": "gaps", "module": "dynamics", "op": "thue_morse_set", "params": {"window": [0, 100000], "expect": {"max_gap_at_most": 3}}}
  ])"));
  s.push_back(make("sturmian-entropy", "Golden-mean rotation codings: linear complexity (n + 1 at cut alpha, 2n at cut 1/2) and vanishing normalized entropy",
                   R"([
    {"id": "half-cut", "module": "processes", "op": "sturmian_coding",
     "params": {"alpha": 0.6180339887498949, "window": [1, 20000], "complexity_up_to": 12,
                "expect": {"fields": {"complexity": [2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24]}}}},
    {"id": "alpha-cut", "module": "processes", "op": "sturmian_coding",
     "params": {"alpha": 0.6180339887498949, "cut": 0.6180339887498949, "window": [1, 20000], "complexity_up_to": 12,
                "expect": {"fields": {"sturmian": true}}}},
    {"id": "along-prefixes", "module": "entropy", "op": "sequence_entropy_along",
     "params": {"model": {"type": "sturmian", "alpha": 0.6180339887498949}, "length": 20000, "replicates": 5,
                "q": {"type": "ap", "a": 1, "d": 1}, "window": [1, 12], "prefixes": [1, 2, 4, 8, 12],
                "expect": {"fields": {"nonincreasing": true}}}}
  ])"));
  s.push_back(make("chain-rule-shadow", "H(X_0 | X over (Q-Q)) <= normalized entropy along Q for the bundled models",
                   R"([
    {"id": "iid", "module": "entropy", "op": "chain_rule_bound_check",
     "params": {"model": {"type": "iid", "alphabet": 2}, "length": 200000, "q": [1, 2, 4, 8], "window": [1, 8]}},
    {"id": "sturmian", "module": "entropy", "op": "chain_rule_bound_check",
     "params": {"model": {"type": "sturmian", "alpha": 0.6180339887498949}, "length": 200000,
                "q": {"type": "ap", "a": 2, "d": 2}, "window": [1, 40]}},
    {"id": "counterexample", "module": "entropy", "op": "chain_rule_bound_check",
     "params": {"model": {"type": "kperiodic", "k": 3}, "length": 200, "replicates": 2000,
                "q": {"type": "ap", "a": 3, "d": 3}, "window": [1, 60]}}
  ])"));
  s.push_back(make("sip-smallness", "Avoiders of SIP+(5, 25, 125) have gaps at most n + 5^(m+1)",
                   R"([
    {"id": "n3", "module": "sets", "op": "smallness_check",
     "params": {"spec": {"type": "sip", "gens": [5, 25, 125]}, "window": [1, 700], "n": 3,
                "expect": {"fields": {"ok": true, "bound": 28}}}},
    {"id": "n7", "module": "sets", "op": "smallness_check",
     "params": {"spec": {"type": "sip", "gens": [5, 25, 125, 625]}, "window": [1, 3500], "n": 7,
                "expect": {"fields": {"ok": true, "bound": 132}}}}
  ])"));
  return s;
}

}  // namespace

const std::vector<Suite>& canned_suites() {
  static const std::vector<Suite> suites = build();
  return suites;
}

const Suite& find_suite(const std::string& name) {
  const auto& all = canned_suites();
  auto it = std::find_if(all.begin(), all.end(), [&](const Suite& s) { return s.name == name; });
  if (it == all.end()) fail(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
  return *it;
}

}  // namespace predictlab::experiments
