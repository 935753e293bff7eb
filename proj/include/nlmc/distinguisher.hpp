#pragma once
// Desk-scale distinguisher: query the oracle on all 2^s points with the
// trailing data variables fixed to zero, compute the exact multiplicative
// complexity of that restriction, and output 1 iff it exceeds the AND
// budget. Restrictions of a keyed circuit family can never exceed the
// family's own AND count, so the keyed arm is one-sidedly silent; a random
// oracle's restriction is a uniform element of B_s.
//
// The approximate variant replaces the exact value by an approximation
// with guaranteed factor rho (value in [exact, rho*exact]) and compares
// against the threshold (budget+1)*rho.
//
// toy_family builds a small keyed circuit family for experiments: r rounds
// of key-XOR mixing plus a fixed layer of ceil(n/2) ANDs per round, output
// the parity of the state. It is a fixture with a documented AND count —
// it is NOT claimed to be pseudorandom, and at these sizes it is not.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlmc/circuit.hpp"
#include "nlmc/errors.hpp"
#include "nlmc/mc_solver.hpp"
#include "nlmc/truth_table.hpp"

namespace nlmc {

inline constexpr int kMaxRestrictionVars = kMaxExactMcVars;  // per-query solver cap

struct DistinguisherConfig {
  int s = 4;           // restriction width, 1 <= s <= kMaxRestrictionVars
  int and_budget = 4;  // plays n^c: the AND-count bound of the keyed family
  double rho = 1.0;    // approximation factor of the approximate variant
  double epsilon = 0.0;  // informational: rho target (2-epsilon)^(n/2)

  double threshold() const { return (and_budget + 1) * rho; }

  void validate() const {
    if (s < 1 || s > kMaxRestrictionVars) {
      throw DomainError("restriction width s outside [1, " + std::to_string(kMaxRestrictionVars) + "]");
    }
    if (and_budget < 0) throw DomainError("AND budget must be nonnegative");
    if (rho < 1.0) throw DomainError("approximation factor must be at least 1");
  }
};

struct ToyFamily {
  int n = 0;       // key width == data width
  int rounds = 0;
  int and_count = 0;  // rounds * ceil(n/2), exact by construction
  Circuit circuit;    // 2n inputs: w1..wn key, w(n+1)..w(2n) data
};

inline ToyFamily toy_family(int n, int rounds = 2) {
  if (n < 1 || 2 * n > kMaxTableVars) throw DomainError("toy family width outside [1, 12]");
  if (rounds < 0) throw DomainError("toy family rounds must be nonnegative");
  CircuitBuilder b(2 * n);
  std::vector<std::uint32_t> state(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) state[static_cast<std::size_t>(j)] = b.input(n + j);
  const int pairs = (n + 1) / 2;
  for (int r = 0; r < rounds; ++r) {
    for (int j = 0; j < n; ++j) {
      state[static_cast<std::size_t>(j)] = b.add_xor(state[static_cast<std::size_t>(j)], b.input(j));
    }
    for (int p = 0; p < pairs; ++p) {
      const std::uint32_t prod = b.add_and(state[static_cast<std::size_t>((2 * p) % n)],
                                           state[static_cast<std::size_t>((2 * p + 1) % n)]);
      const std::size_t sink = static_cast<std::size_t>((2 * p + 2) % n);
      state[sink] = b.add_xor(state[sink], prod);
    }
    std::rotate(state.begin(), state.begin() + 1, state.end());
  }
  std::uint32_t out = state[0];
  for (int j = 1; j < n; ++j) out = b.add_xor(out, state[static_cast<std::size_t>(j)]);
  return {n, rounds, rounds * pairs, b.build(out)};
}

// Data-indexed oracle H : {0,1}^n -> {0,1} in one of three modes: a keyed
// family member (key inputs fixed, constants folded), a lazily sampled
// random function, or a fixed table.
class Oracle {
 public:
  static Oracle keyed(const Circuit& family, const Assignment& key) {
    if (key.size() >= family.n()) throw DomainError("key leaves no data inputs");
    std::vector<std::pair<int, std::uint8_t>> fixed;
    for (int j = 0; j < key.size(); ++j) fixed.emplace_back(j, key.bit(j));
    Oracle o(family.n() - key.size());
    o.data_circuit_ = restrict_circuit(family, fixed);
    return o;
  }

  static Oracle keyed(const ToyFamily& family, const Assignment& key) {
    if (key.size() != family.n) throw DomainError("key width mismatch");
    return keyed(family.circuit, key);
  }

  // Bits are drawn lazily from the seeded stream in query order and
  // memoized, so a fixed query schedule sees a reproducible function.
  static Oracle random_function(int n, std::uint64_t seed) {
    detail::check_var_count(n);
    Oracle o(n);
    o.rng_.emplace(seed);
    return o;
  }

  static Oracle from_table(TruthTable t) {
    Oracle o(t.n());
    o.table_ = std::move(t);
    return o;
  }

  int data_vars() const { return n_; }

  int query(std::uint64_t index) {
    if (index >= detail::table_size(n_)) throw DomainError("oracle query out of range");
    ++queries_;
    if (data_circuit_) return evaluate_circuit(*data_circuit_, Assignment::from_index(n_, index));
    if (table_) return table_->bit(index);
    const auto it = memo_.find(index);
    if (it != memo_.end()) return it->second;
    const int bit = static_cast<int>((*rng_)() & 1);
    memo_.emplace(index, bit);
    return bit;
  }

  std::uint64_t query_count() const { return queries_; }

  const std::optional<Circuit>& data_circuit() const { return data_circuit_; }

 private:
  explicit Oracle(int n) : n_(n) {}

  int n_;
  std::optional<Circuit> data_circuit_;
  std::optional<TruthTable> table_;
  std::optional<std::mt19937_64> rng_;
  std::unordered_map<std::uint64_t, int> memo_;
  std::uint64_t queries_ = 0;
};

// The 2^s queries x = (x1..xs, 0..0); little-endian indexing makes the
// queried indices exactly 0..2^s-1. Non-adaptive by construction.
inline TruthTable query_restriction(Oracle& oracle, int s) {
  if (s < 1 || s > kMaxRestrictionVars) {
    throw DomainError("restriction width s outside [1, " + std::to_string(kMaxRestrictionVars) + "]");
  }
  if (s > oracle.data_vars()) throw DomainError("restriction width exceeds oracle arity");
  TruthTable h(s);
  for (std::uint64_t i = 0; i < detail::table_size(s); ++i) h.set_bit(i, oracle.query(i));
  return h;
}

inline int restriction_mc(Oracle& oracle, const DistinguisherConfig& cfg) {
  cfg.validate();
  return mc_exact(query_restriction(oracle, cfg.s)).value;
}

inline int distinguish_exact(Oracle& oracle, const DistinguisherConfig& cfg) {
  return restriction_mc(oracle, cfg) > cfg.and_budget ? 1 : 0;
}

// Wraps an approximate MC procedure after checking the [exact, rho*exact]
// contract exhaustively on B_2 and B_3.
class ValidatedApproximator {
 public:
  ValidatedApproximator(std::function<double(const TruthTable&)> fn, double rho)
      : fn_(std::move(fn)), rho_(rho) {
    if (rho_ < 1.0) throw DomainError("approximation factor must be at least 1");
    for (int s = 2; s <= 3; ++s) {
      for (std::uint64_t f = 0; f < (std::uint64_t{1} << (1 << s)); ++f) {
        TruthTable t(s);
        for (int i = 0; i < (1 << s); ++i) t.set_bit(static_cast<std::uint64_t>(i), (f >> i) & 1);
        const double exact = static_cast<double>(mc_exact(t).value);
        const double got = fn_(t);
        if (got < exact - 1e-9 || got > rho_ * exact + 1e-9) {
          throw DomainError("approximator breaks its contract on n:" + std::to_string(s) +
                            " tt:" + t.to_binary_string() + " (exact " + std::to_string(exact) +
                            ", got " + std::to_string(got) + ")");
        }
      }
    }
  }

  double operator()(const TruthTable& t) const { return fn_(t); }
  double rho() const { return rho_; }

 private:
  std::function<double(const TruthTable&)> fn_;
  double rho_;
};

inline ValidatedApproximator scaled_exact_approximator(double rho) {
  return ValidatedApproximator(
      [rho](const TruthTable& t) { return rho * static_cast<double>(mc_exact(t).value); }, rho);
}

inline int distinguish_approx(Oracle& oracle, const DistinguisherConfig& cfg,
                              const ValidatedApproximator& approx) {
  cfg.validate();
  if (approx.rho() != cfg.rho) throw DomainError("approximator factor disagrees with config");
  const TruthTable h = query_restriction(oracle, cfg.s);
  return approx(h) >= cfg.threshold() ? 1 : 0;
}

struct ExperimentReport {
  int n = 0;
  int s = 0;
  int and_budget = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  int family_rounds = 0;
  int family_and_count = 0;
  std::vector<int> mc_keyed;   // per-trial restriction MC, keyed arm
  std::vector<int> mc_random;  // per-trial restriction MC, random arm
  double freq_keyed = 0.0;
  double freq_random = 0.0;
  double advantage = 0.0;
  std::uint64_t census_tail_count = 0;  // #functions in B_s with MC > budget
  std::uint64_t census_total = 0;       // 2^(2^s)
  double census_tail = 0.0;             // exact Pr[MC > budget] over B_s
};

// One-sided experiment: the keyed family is sized so its AND count
// never exceeds the budget (rounds shrink if the budget is small), which
// makes the keyed arm deterministically silent; the random arm is
// calibrated against the exact census tail mass.
inline ExperimentReport run_experiment(int n, const DistinguisherConfig& cfg, int trials,
                                       std::uint64_t seed) {
  cfg.validate();
  if (trials < 1) throw DomainError("trial count must be positive");
  if (cfg.s > kMaxCensusVars) {
    throw DomainError("experiment restriction width capped at s <= " + std::to_string(kMaxCensusVars));
  }
  const int pairs = (n + 1) / 2;
  const int rounds = std::min(2, cfg.and_budget / pairs);
  const ToyFamily family = toy_family(n, rounds);
  if (family.and_count > cfg.and_budget) {
    throw std::logic_error("family AND count exceeds the budget");
  }
  if (cfg.s > n) throw DomainError("restriction width exceeds data width");

  ExperimentReport report;
  report.n = n;
  report.s = cfg.s;
  report.and_budget = cfg.and_budget;
  report.trials = trials;
  report.seed = seed;
  report.family_rounds = family.rounds;
  report.family_and_count = family.and_count;

  const auto stream = [&](std::uint32_t arm, int trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      arm, static_cast<std::uint32_t>(trial)};
    return std::mt19937_64(seq);
  };

  std::uint64_t keyed_ones = 0;
  std::uint64_t random_ones = 0;
  for (int trial = 0; trial < trials; ++trial) {
    auto key_rng = stream(1, trial);
    std::vector<std::uint8_t> key_bits(static_cast<std::size_t>(n));
    for (auto& bit : key_bits) bit = static_cast<std::uint8_t>(key_rng() & 1);
    Oracle keyed = Oracle::keyed(family, Assignment(std::move(key_bits)));
    const int mc_k = restriction_mc(keyed, cfg);
    report.mc_keyed.push_back(mc_k);
    if (mc_k > cfg.and_budget) {
      ++keyed_ones;  // unreachable: restriction cannot exceed the family count
      throw std::logic_error("keyed restriction exceeded the family AND count");
    }

    auto oracle_rng = stream(2, trial);
    Oracle random = Oracle::random_function(n, oracle_rng());
    const int mc_r = restriction_mc(random, cfg);
    report.mc_random.push_back(mc_r);
    random_ones += mc_r > cfg.and_budget;
  }

  report.freq_keyed = static_cast<double>(keyed_ones) / trials;
  report.freq_random = static_cast<double>(random_ones) / trials;
  report.advantage = report.freq_random - report.freq_keyed;
  if (report.advantage < 0) report.advantage = -report.advantage;

  const McCensus census = classify(cfg.s);
  report.census_tail_count = census.tail_count(cfg.and_budget);
  report.census_total = census.total();
  report.census_tail = static_cast<double>(report.census_tail_count) /
                       static_cast<double>(report.census_total);
  return report;
}

}  // namespace nlmc
