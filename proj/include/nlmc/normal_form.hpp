#pragma once
// XOR-AND normal forms: M AND gates in topological order, each operand an
// F2-sum over {1, x1..xn, o1..o_{i-1}}, plus an output sum over all of
// {1, x1..xn, o1..oM}.
//
// Masks are bit vectors of width 1+n+M: bit 0 is the constant term, bits
// 1..n the inputs, bit n+i the i-th AND output (1-based i). Gate i may only
// reference o_j with j < i.
//
// from_normal_form realizes every sum as a left-deep XOR chain, so the
// emitted circuit has exactly M AND gates, at most (2M+1)(n+M+1) XOR gates,
// and (for n >= 3) total size at most 2(M+n)^2 + M; both bounds are
// asserted on every conversion.

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlmc/circuit.hpp"
#include "nlmc/errors.hpp"

namespace nlmc {

class AffineMask {
 public:
  explicit AffineMask(int width) : width_(width), bits_(static_cast<std::size_t>((width + 63) / 64), 0) {
    if (width < 1) throw DomainError("mask width must be at least 1");
  }

  int width() const { return width_; }

  bool test(int pos) const {
    check(pos);
    return (bits_[static_cast<std::size_t>(pos / 64)] >> (pos % 64)) & 1;
  }

  void set(int pos) {
    check(pos);
    bits_[static_cast<std::size_t>(pos / 64)] |= std::uint64_t{1} << (pos % 64);
  }

  void xor_with(const AffineMask& o) {
    if (o.width_ != width_) throw DomainError("mask width mismatch");
    for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] ^= o.bits_[w];
  }

  bool is_zero() const {
    for (std::uint64_t w : bits_) {
      if (w != 0) return false;
    }
    return true;
  }

  int popcount() const {
    int total = 0;
    for (std::uint64_t w : bits_) total += std::popcount(w);
    return total;
  }

  // Order of the masks read as integers (bit p has weight 2^p).
  std::strong_ordering operator<=>(const AffineMask& o) const {
    if (width_ != o.width_) return width_ <=> o.width_;
    for (std::size_t w = bits_.size(); w-- > 0;) {
      if (bits_[w] != o.bits_[w]) return bits_[w] <=> o.bits_[w];
    }
    return std::strong_ordering::equal;
  }

  bool operator==(const AffineMask&) const = default;

  // Terms joined by '+': "1", "x<j>", "o<i>"; the empty sum renders as "0".
  std::string to_string(int n) const {
    std::string out;
    const auto append = [&](const std::string& term) {
      if (!out.empty()) out += '+';
      out += term;
    };
    if (test(0)) append("1");
    for (int p = 1; p < width_; ++p) {
      if (!test(p)) continue;
      if (p <= n) append("x" + std::to_string(p));
      else append("o" + std::to_string(p - n));
    }
    return out.empty() ? "0" : out;
  }

 private:
  void check(int pos) const {
    if (pos < 0 || pos >= width_) throw DomainError("mask position out of range");
  }

  int width_;
  std::vector<std::uint64_t> bits_;
};

struct NormalFormGate {
  AffineMask left;
  AffineMask right;

  bool operator==(const NormalFormGate&) const = default;
};

struct NormalForm {
  int n = 0;
  std::vector<NormalFormGate> gates;
  AffineMask out{1};

  int and_count() const { return static_cast<int>(gates.size()); }
  int mask_width() const { return 1 + n + and_count(); }

  bool operator==(const NormalForm&) const = default;
};

// XOR budget for realizing all 2M+1 sums of a normal form as chains.
inline std::uint64_t normal_form_xor_bound(int n, std::uint64_t m) {
  return (2 * m + 1) * (static_cast<std::uint64_t>(n) + m + 1);
}

inline void validate_normal_form(const NormalForm& nf) {
  if (nf.n < 0) throw DomainError("normal form: negative input count");
  const int width = nf.mask_width();
  for (std::size_t i = 0; i < nf.gates.size(); ++i) {
    const auto& g = nf.gates[i];
    if (g.left.width() != width || g.right.width() != width) {
      throw DomainError("normal form: gate mask width mismatch");
    }
    for (int j = static_cast<int>(i) + 1; j <= nf.and_count(); ++j) {
      const int pos = nf.n + j;
      if (g.left.test(pos) || g.right.test(pos)) {
        throw DomainError("normal form: gate references a later AND output");
      }
    }
  }
  if (nf.out.width() != width) throw DomainError("normal form: output mask width mismatch");
}

// Forward mask propagation. AND count is preserved exactly, dead gates
// included.
inline NormalForm to_normal_form(const Circuit& c) {
  const int n = c.n();
  const int m = count_and(c);
  const int width = 1 + n + m;
  NormalForm nf{n, {}, AffineMask(width)};

  std::vector<AffineMask> wire;
  wire.reserve(c.wire_count());
  for (int j = 0; j < n; ++j) {
    AffineMask mask(width);
    mask.set(1 + j);
    wire.push_back(std::move(mask));
  }
  for (const Gate& g : c.gates()) {
    AffineMask mask(width);
    switch (g.op) {
      case GateOp::One:
        mask.set(0);
        break;
      case GateOp::Xor:
        mask = wire[g.a];
        mask.xor_with(wire[g.b]);
        break;
      case GateOp::And:
        nf.gates.push_back({wire[g.a], wire[g.b]});
        mask.set(n + static_cast<int>(nf.gates.size()));
        break;
    }
    wire.push_back(std::move(mask));
  }
  nf.out = wire[c.output()];
  return nf;
}

inline Circuit from_normal_form(const NormalForm& nf) {
  validate_normal_form(nf);
  const int n = nf.n;
  CircuitBuilder builder(n);
  std::vector<std::uint32_t> and_wire;
  and_wire.reserve(nf.gates.size());

  const auto realize = [&](const AffineMask& mask) -> std::uint32_t {
    std::vector<std::uint32_t> terms;
    if (mask.test(0)) terms.push_back(builder.one_wire());
    for (int j = 0; j < n; ++j) {
      if (mask.test(1 + j)) terms.push_back(builder.input(j));
    }
    for (std::size_t i = 0; i < and_wire.size(); ++i) {
      if (mask.test(n + 1 + static_cast<int>(i))) terms.push_back(and_wire[i]);
    }
    if (terms.empty()) return builder.zero_wire();
    std::uint32_t acc = terms[0];
    for (std::size_t t = 1; t < terms.size(); ++t) acc = builder.add_xor(acc, terms[t]);
    return acc;
  };

  for (const NormalFormGate& g : nf.gates) {
    const std::uint32_t left = realize(g.left);
    const std::uint32_t right = realize(g.right);
    and_wire.push_back(builder.add_and(left, right));
  }
  const Circuit out = builder.build(realize(nf.out));

  const std::uint64_t m = nf.gates.size();
  if (static_cast<std::uint64_t>(count_xor(out)) > normal_form_xor_bound(n, m)) {
    throw std::logic_error("normal form emission exceeded the XOR bound");
  }
  if (n >= 3) {
    const std::uint64_t size_bound = 2 * (m + static_cast<std::uint64_t>(n)) * (m + static_cast<std::uint64_t>(n)) + m;
    if (out.gates().size() > size_bound) {
      throw std::logic_error("normal form emission exceeded the size bound");
    }
  }
  return out;
}

inline std::string format_normal_form(const NormalForm& nf) {
  std::string out = "NORMALFORM n=" + std::to_string(nf.n) + " ands=" + std::to_string(nf.and_count()) + "\n";
  for (std::size_t i = 0; i < nf.gates.size(); ++i) {
    out += "o" + std::to_string(i + 1) + " = (" + nf.gates[i].left.to_string(nf.n) + ") AND (" +
           nf.gates[i].right.to_string(nf.n) + ")\n";
  }
  out += "out = " + nf.out.to_string(nf.n) + "\n";
  return out;
}

}  // namespace nlmc
