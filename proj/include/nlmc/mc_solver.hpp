#pragma once
// Exact multiplicative complexity over the (AND, XOR, 1) basis.
//
// A function has MC <= k iff it lies in the span of {1, x1..xn, o1..ok}
// where each o_i is the AND of two elements of the preceding span. The
// search walks those spans directly: packed tables (n <= 5 means a table
// fits one 64-bit word) in a reduced-echelon basis, products deduplicated
// per coset, spans deduplicated globally by their canonical basis. Operand
// symmetry is cut by fixing each operand's value at the all-zero point to 0
// (complementing an operand shifts the product by a span element) and by
// operand order.
//
// classify(s) runs the same extension as a breadth-first closure over all
// of B_s at once, marking reached tables in a byte map.
//
// counting_bound(s, k) is the exact power 2^(k^2+2k+2ks+s+1) bounding the
// number of functions in B_s computable with at most k AND gates.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nlmc/circuit.hpp"
#include "nlmc/errors.hpp"
#include "nlmc/normal_form.hpp"
#include "nlmc/truth_table.hpp"

namespace nlmc {

inline constexpr int kMaxExactMcVars = 5;
inline constexpr int kMaxCensusVars = 4;

// Exact power of two; exponents grow quadratically in k, so the value is
// kept symbolic and rendered to decimal on demand.
struct PowerOfTwo {
  std::uint64_t exponent = 0;

  bool covers(std::uint64_t value) const {
    if (exponent >= 64) return true;
    return value <= (std::uint64_t{1} << exponent);
  }

  std::string to_string() const {
    std::vector<std::uint8_t> digits{1};  // little-endian decimal
    for (std::uint64_t i = 0; i < exponent; ++i) {
      int carry = 0;
      for (auto& d : digits) {
        const int v = d * 2 + carry;
        d = static_cast<std::uint8_t>(v % 10);
        carry = v / 10;
      }
      if (carry) digits.push_back(static_cast<std::uint8_t>(carry));
    }
    std::string out(digits.size(), '0');
    for (std::size_t i = 0; i < digits.size(); ++i) {
      out[digits.size() - 1 - i] = static_cast<char>('0' + digits[i]);
    }
    return out;
  }
};

inline PowerOfTwo counting_bound(int s, int k) {
  if (s < 0 || s > 30) throw DomainError("counting bound: s outside [0, 30]");
  if (k < 0 || static_cast<std::uint64_t>(k) > (std::uint64_t{1} << s)) {
    throw DomainError("counting bound: k outside [0, 2^s]");
  }
  const std::uint64_t ku = static_cast<std::uint64_t>(k);
  const std::uint64_t su = static_cast<std::uint64_t>(s);
  return {ku * ku + 2 * ku + 2 * ku * su + su + 1};
}

namespace detail_mc {

using Tab = std::uint64_t;  // packed table, 2^n bits, n <= 5

inline Tab full_mask(int n) {
  const std::uint64_t live = std::uint64_t{1} << n;
  return live == 64 ? ~Tab{0} : (Tab{1} << live) - 1;
}

inline Tab var_table(int j, int n) {
  static constexpr Tab kVarPattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  return kVarPattern[j] & full_mask(n);
}

// Reduced echelon basis: every row has a distinct pivot (highest set bit),
// each pivot occurs in exactly one row, rows sorted by pivot descending.
// The row list is therefore a canonical signature of the span.
struct Echelon {
  std::vector<Tab> rows;

  Tab reduce(Tab v) const {
    for (Tab r : rows) {
      if (v & std::bit_floor(r)) v ^= r;
    }
    return v;
  }

  bool contains(Tab v) const { return reduce(v) == 0; }

  // v must already be reduced and nonzero.
  void insert_reduced(Tab v) {
    const Tab pivot = std::bit_floor(v);
    for (Tab& r : rows) {
      if (r & pivot) r ^= v;
    }
    const auto pos = std::find_if(rows.begin(), rows.end(), [&](Tab r) { return r < v; });
    rows.insert(pos, v);
  }

  // All 2^rank span elements, in deterministic order.
  std::vector<Tab> elements() const {
    std::vector<Tab> out;
    out.reserve(std::size_t{1} << rows.size());
    out.push_back(0);
    for (Tab r : rows) {
      const std::size_t size = out.size();
      for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] ^ r);
    }
    return out;
  }
};

inline Echelon affine_echelon(int n) {
  Echelon e;
  e.insert_reduced(full_mask(n));  // constant 1
  for (int j = 0; j < n; ++j) e.insert_reduced(e.reduce(var_table(j, n)));
  return e;
}

struct SpanHash {
  std::size_t operator()(const std::vector<Tab>& rows) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Tab r : rows) {
      h ^= r;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct ChainGate {
  Tab u = 0;
  Tab v = 0;
};

// Iterative-deepening DFS for one target function.
class McSearch {
 public:
  McSearch(Tab target, int n) : target_(target), n_(n) {}

  std::optional<std::vector<ChainGate>> run(int k) {
    const Echelon base = affine_echelon(n_);
    if (base.contains(target_)) return std::vector<ChainGate>{};
    if (k <= 0) return std::nullopt;
    visited_.clear();
    stack_.clear();
    if (dfs(base, k)) return stack_;
    return std::nullopt;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct Child {
    Tab r;
    Tab u;
    Tab v;
    bool operator<(const Child& o) const { return r < o.r; }
  };

  // Precondition: target not in span, remaining >= 1.
  bool dfs(const Echelon& span, int remaining) {
    ++nodes_;
    const Tab rt = span.reduce(target_);
    std::vector<Tab> canon;
    for (Tab e : span.elements()) {
      if (e != 0 && (e & 1) == 0) canon.push_back(e);
    }
    std::vector<Child> children;
    for (std::size_t i = 0; i < canon.size(); ++i) {
      for (std::size_t j = i + 1; j < canon.size(); ++j) {
        const Tab w = canon[i] & canon[j];
        const Tab r = span.reduce(w);
        if (r == rt) {
          stack_.push_back({canon[i], canon[j]});
          return true;
        }
        if (r != 0 && remaining > 1) children.push_back({r, canon[i], canon[j]});
      }
    }
    if (remaining == 1) return false;
    std::sort(children.begin(), children.end());
    Tab last = 0;
    for (const Child& child : children) {
      if (child.r == last) continue;
      last = child.r;
      Echelon next = span;
      next.insert_reduced(child.r);
      if (!visited_.insert(next.rows).second) continue;
      stack_.push_back({child.u, child.v});
      if (dfs(next, remaining - 1)) return true;
      stack_.pop_back();
    }
    return false;
  }

  Tab target_;
  int n_;
  std::uint64_t nodes_ = 0;
  std::vector<ChainGate> stack_;
  std::unordered_set<std::vector<Tab>, SpanHash> visited_;
};

// Expresses each chain operand over {1, x's, earlier products} by Gaussian
// elimination with combination tracking; combination bits already use the
// normal-form mask layout.
inline NormalForm chain_to_normal_form(const std::vector<ChainGate>& chain, Tab target, int n) {
  const int m = static_cast<int>(chain.size());
  const int width = 1 + n + m;

  struct TaggedRow {
    Tab vec;
    std::uint64_t combo;
  };
  std::vector<TaggedRow> rows;

  const auto reduce = [&](Tab v) -> TaggedRow {
    std::uint64_t combo = 0;
    for (const TaggedRow& r : rows) {
      if (v & std::bit_floor(r.vec)) {
        v ^= r.vec;
        combo ^= r.combo;
      }
    }
    return {v, combo};
  };
  const auto insert = [&](Tab v, std::uint64_t own_bit) {
    TaggedRow r = reduce(v);
    r.combo ^= own_bit;
    if (r.vec == 0) throw std::logic_error("chain vector unexpectedly dependent");
    const auto pos = std::find_if(rows.begin(), rows.end(),
                                  [&](const TaggedRow& o) { return o.vec < r.vec; });
    rows.insert(pos, r);
  };
  const auto express = [&](Tab v) -> AffineMask {
    const TaggedRow r = reduce(v);
    if (r.vec != 0) throw std::logic_error("chain operand outside its span");
    AffineMask mask(width);
    for (int p = 0; p < width; ++p) {
      if ((r.combo >> p) & 1) mask.set(p);
    }
    return mask;
  };

  insert(full_mask(n), 1);
  for (int j = 0; j < n; ++j) insert(var_table(j, n), std::uint64_t{1} << (1 + j));

  NormalForm nf{n, {}, AffineMask(width)};
  for (int i = 0; i < m; ++i) {
    AffineMask left = express(chain[static_cast<std::size_t>(i)].u);
    AffineMask right = express(chain[static_cast<std::size_t>(i)].v);
    if (right < left) std::swap(left, right);
    nf.gates.push_back({std::move(left), std::move(right)});
    const Tab w = chain[static_cast<std::size_t>(i)].u & chain[static_cast<std::size_t>(i)].v;
    insert(w, std::uint64_t{1} << (1 + n + i));
  }
  nf.out = express(target);
  return nf;
}

inline Tab pack_table(const TruthTable& t) {
  if (t.n() > kMaxExactMcVars) {
    throw DomainError("exact multiplicative complexity capped at n <= " +
                      std::to_string(kMaxExactMcVars));
  }
  return t.words()[0];
}

}  // namespace detail_mc

struct McResult {
  int value = 0;
  NormalForm witness;
  std::uint64_t nodes_explored = 0;
};

inline std::optional<NormalForm> mc_decision_witness(const TruthTable& t, int k,
                                                     std::uint64_t* nodes = nullptr) {
  if (k < 0) throw DomainError("AND budget must be nonnegative");
  const detail_mc::Tab target = detail_mc::pack_table(t);
  const int cap = 1 << t.n();
  detail_mc::McSearch search(target, t.n());
  const auto chain = search.run(std::min(k, cap));
  if (nodes) *nodes = search.nodes();
  if (!chain) return std::nullopt;
  NormalForm nf = detail_mc::chain_to_normal_form(*chain, target, t.n());
  if (circuit_truth_table(from_normal_form(nf)) != t) {
    throw std::logic_error("witness normal form does not recompute the target");
  }
  return nf;
}

inline bool mc_decision(const TruthTable& t, int k) {
  return mc_decision_witness(t, k).has_value();
}

inline McResult mc_exact(const TruthTable& t) {
  const int cap = 1 << t.n();
  std::uint64_t total_nodes = 0;
  for (int k = 0; k <= cap; ++k) {
    std::uint64_t nodes = 0;
    if (auto witness = mc_decision_witness(t, k, &nodes)) {
      total_nodes += nodes;
      if (witness->and_count() != k) {
        throw std::logic_error("witness gate count disagrees with the deepening level");
      }
      return {k, std::move(*witness), total_nodes};
    }
    total_nodes += nodes;
  }
  throw std::logic_error("exact search exhausted the 2^n AND-gate cap");
}

struct McCensus {
  int s = 0;
  std::vector<std::uint64_t> counts;  // counts[k] = #functions with MC exactly k

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts) sum += c;
    return sum;
  }

  std::uint64_t cumulative(int k) const {
    std::uint64_t sum = 0;
    for (int i = 0; i <= k && i < static_cast<int>(counts.size()); ++i) {
      sum += counts[static_cast<std::size_t>(i)];
    }
    return sum;
  }

  std::uint64_t tail_count(int budget) const { return total() - cumulative(budget); }

  int max_mc() const { return static_cast<int>(counts.size()) - 1; }
};

namespace detail_mc {

inline McCensus compute_census(int s) {
  const std::uint64_t total = std::uint64_t{1} << (std::uint64_t{1} << s);
  std::vector<std::uint8_t> mc(total, 0xFF);

  const Echelon base = affine_echelon(s);
  std::uint64_t remaining = total;
  for (Tab e : base.elements()) {
    mc[e] = 0;
    --remaining;
  }

  std::vector<Echelon> frontier{base};
  std::unordered_set<std::vector<Tab>, SpanHash> seen;
  seen.insert(base.rows);

  int k = 0;
  while (remaining > 0) {
    ++k;
    if (k > (1 << s)) throw std::logic_error("census exhausted the 2^s AND-gate cap");
    std::vector<Echelon> next;
    for (const Echelon& span : frontier) {
      const std::vector<Tab> elems = span.elements();
      std::vector<Tab> canon;
      for (Tab e : elems) {
        if (e != 0 && (e & 1) == 0) canon.push_back(e);
      }
      std::vector<Tab> cosets;
      for (std::size_t i = 0; i < canon.size(); ++i) {
        for (std::size_t j = i + 1; j < canon.size(); ++j) {
          const Tab r = span.reduce(canon[i] & canon[j]);
          if (r != 0) cosets.push_back(r);
        }
      }
      std::sort(cosets.begin(), cosets.end());
      cosets.erase(std::unique(cosets.begin(), cosets.end()), cosets.end());
      for (Tab r : cosets) {
        for (Tab e : elems) {
          std::uint8_t& slot = mc[e ^ r];
          if (slot == 0xFF) {
            slot = static_cast<std::uint8_t>(k);
            --remaining;
          }
        }
        if (remaining > 0) {
          Echelon child = span;
          child.insert_reduced(r);
          if (seen.insert(child.rows).second) next.push_back(std::move(child));
        }
      }
      if (remaining == 0) break;
    }
    frontier = std::move(next);
  }

  McCensus census;
  census.s = s;
  census.counts.assign(static_cast<std::size_t>(k) + 1, 0);
  for (std::uint64_t f = 0; f < total; ++f) ++census.counts[mc[f]];
  while (!census.counts.empty() && census.counts.back() == 0) census.counts.pop_back();
  return census;
}

}  // namespace detail_mc

// Census of all of B_s by forward closure; results are memoized per process.
inline McCensus classify(int s) {
  if (s < 0 || s > kMaxCensusVars) {
    throw DomainError("census capped at s <= " + std::to_string(kMaxCensusVars));
  }
  static std::mutex mu;
  static std::map<int, McCensus> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  return cache.emplace(s, detail_mc::compute_census(s)).first->second;
}

struct BoundCheckRow {
  int k = 0;
  std::uint64_t count = 0;
  std::uint64_t cumulative = 0;
  PowerOfTwo bound;
  bool ok = false;
};

inline std::vector<BoundCheckRow> verify_counting_bound(int s, int k_max) {
  const McCensus census = classify(s);
  const int top = std::max(k_max, census.max_mc());
  std::vector<BoundCheckRow> rows;
  for (int k = 0; k <= top; ++k) {
    BoundCheckRow row;
    row.k = k;
    row.count = k <= census.max_mc() ? census.counts[static_cast<std::size_t>(k)] : 0;
    row.cumulative = census.cumulative(k);
    row.bound = counting_bound(s, k);
    row.ok = row.bound.covers(row.cumulative);
    rows.push_back(row);
  }
  return rows;
}

inline std::string format_census_row(const BoundCheckRow& row) {
  return "k=" + std::to_string(row.k) + " count=" + std::to_string(row.count) +
         " cumulative=" + std::to_string(row.cumulative) + " bound=" + row.bound.to_string() +
         " ok=" + (row.ok ? "true" : "false");
}

}  // namespace nlmc
