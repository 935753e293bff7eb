#pragma once
// XOR/AND/ONE circuits: immutable IR, the textual format, evaluation, and
// restriction with constant propagation.
//
// Wire references are dense: refs 0..n-1 are the inputs x1..xn, ref n+g is
// the output of gate g. Gates only reference earlier wires, so a Circuit is
// acyclic by construction.
//
// Text format ('#' starts a comment, wire names are 1-based):
//
//     INPUTS <n>
//     w<k> = AND w<i> w<j>
//     w<k> = XOR w<i> w<j>
//     w<k> = ONE
//     OUTPUT w<k>
//
// Gate wire numbers are strictly increasing and operands satisfy i, j < k.
// serialize_circuit re-emits dense numbering, so parse(serialize(c)) == c.
//
// AND gates are counted syntactically: a dead AND gate still counts.
// eliminate_dead_gates is the explicit normalization pass for callers who
// want reachable-only counts.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlmc/errors.hpp"
#include "nlmc/truth_table.hpp"

namespace nlmc {

enum class GateOp { And, Xor, One };

struct Gate {
  GateOp op;
  std::uint32_t a = 0;  // wire refs; unused by One
  std::uint32_t b = 0;

  bool operator==(const Gate&) const = default;
};

class Circuit {
 public:
  Circuit(int n, std::vector<Gate> gates, std::uint32_t output)
      : n_(n), gates_(std::move(gates)), output_(output) {
    if (n < 0) throw DomainError("circuit input count must be nonnegative");
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const std::uint32_t limit = static_cast<std::uint32_t>(n_) + static_cast<std::uint32_t>(g);
      const Gate& gate = gates_[g];
      if (gate.op != GateOp::One && (gate.a >= limit || gate.b >= limit)) {
        throw DomainError("gate operand references a later wire");
      }
    }
    if (output_ >= wire_count()) throw DomainError("output references an undefined wire");
  }

  int n() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::uint32_t output() const { return output_; }
  std::uint32_t wire_count() const {
    return static_cast<std::uint32_t>(n_) + static_cast<std::uint32_t>(gates_.size());
  }

  bool operator==(const Circuit&) const = default;

 private:
  int n_;
  std::vector<Gate> gates_;
  std::uint32_t output_;
};

inline int count_and(const Circuit& c) {
  int total = 0;
  for (const Gate& g : c.gates()) total += g.op == GateOp::And;
  return total;
}

inline int count_xor(const Circuit& c) {
  int total = 0;
  for (const Gate& g : c.gates()) total += g.op == GateOp::Xor;
  return total;
}

inline int evaluate_circuit(const Circuit& c, const Assignment& x) {
  if (x.size() != c.n()) throw DomainError("assignment dimension mismatch");
  std::vector<std::uint8_t> value(c.wire_count());
  for (int j = 0; j < c.n(); ++j) value[static_cast<std::size_t>(j)] = x.bit(j);
  std::size_t w = static_cast<std::size_t>(c.n());
  for (const Gate& g : c.gates()) {
    switch (g.op) {
      case GateOp::And: value[w] = value[g.a] & value[g.b]; break;
      case GateOp::Xor: value[w] = value[g.a] ^ value[g.b]; break;
      case GateOp::One: value[w] = 1; break;
    }
    ++w;
  }
  return value[c.output()];
}

// Whole-table evaluation, 64 assignments per word; input j < 6 is a fixed
// in-word pattern, higher inputs are constant per block.
inline TruthTable circuit_truth_table(const Circuit& c) {
  const int n = c.n();
  detail::check_var_count(n);
  static constexpr std::uint64_t kVarPattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const std::size_t word_count = detail::word_count(n);
  std::vector<std::uint64_t> out(word_count);
  std::vector<std::uint64_t> wire(c.wire_count());
  for (std::size_t blk = 0; blk < word_count; ++blk) {
    for (int j = 0; j < n; ++j) {
      wire[static_cast<std::size_t>(j)] =
          j < 6 ? kVarPattern[j] : ((blk >> (j - 6)) & 1 ? ~std::uint64_t{0} : 0);
    }
    std::size_t w = static_cast<std::size_t>(n);
    for (const Gate& g : c.gates()) {
      switch (g.op) {
        case GateOp::And: wire[w] = wire[g.a] & wire[g.b]; break;
        case GateOp::Xor: wire[w] = wire[g.a] ^ wire[g.b]; break;
        case GateOp::One: wire[w] = ~std::uint64_t{0}; break;
      }
      ++w;
    }
    out[blk] = wire[c.output()];
  }
  out.back() &= detail::tail_mask(n);
  return TruthTable::from_words(n, std::move(out));
}

// Incremental construction helper. Negation and disjunction are desugared
// here: NOT u = XOR(u, ONE) (one shared ONE wire), u OR v = XOR(XOR(u,v), AND(u,v)).
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int n) : n_(n) {
    if (n < 0) throw DomainError("circuit input count must be nonnegative");
  }

  std::uint32_t input(int j) const {
    if (j < 0 || j >= n_) throw DomainError("input index out of range");
    return static_cast<std::uint32_t>(j);
  }

  std::uint32_t add_and(std::uint32_t a, std::uint32_t b) { return push({GateOp::And, a, b}); }
  std::uint32_t add_xor(std::uint32_t a, std::uint32_t b) { return push({GateOp::Xor, a, b}); }
  std::uint32_t add_one() { return push({GateOp::One, 0, 0}); }

  std::uint32_t one_wire() {
    if (!one_) one_ = add_one();
    return *one_;
  }

  std::uint32_t zero_wire() {
    if (!zero_) {
      const std::uint32_t one = one_wire();
      zero_ = add_xor(one, one);
    }
    return *zero_;
  }

  std::uint32_t add_not(std::uint32_t a) { return add_xor(a, one_wire()); }

  std::uint32_t add_or(std::uint32_t a, std::uint32_t b) {
    const std::uint32_t sum = add_xor(a, b);
    const std::uint32_t prod = add_and(a, b);
    return add_xor(sum, prod);
  }

  std::size_t gate_count() const { return gates_.size(); }

  Circuit build(std::uint32_t output) const { return Circuit(n_, gates_, output); }

 private:
  std::uint32_t push(Gate g) {
    const std::uint32_t ref = static_cast<std::uint32_t>(n_) + static_cast<std::uint32_t>(gates_.size());
    if (g.op != GateOp::One && (g.a >= ref || g.b >= ref)) {
      throw DomainError("gate operand references a later wire");
    }
    gates_.push_back(g);
    return ref;
  }

  int n_;
  std::vector<Gate> gates_;
  std::optional<std::uint32_t> one_;
  std::optional<std::uint32_t> zero_;
};

namespace detail {

struct CircuitLine {
  std::vector<std::string_view> tokens;
  int number = 0;
};

inline std::vector<CircuitLine> tokenize_circuit(std::string_view text) {
  std::vector<CircuitLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++number;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    CircuitLine out;
    out.number = number;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t end = i;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
      if (end > i) out.tokens.push_back(line.substr(i, end - i));
      i = end;
    }
    if (!out.tokens.empty()) lines.push_back(std::move(out));
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  return lines;
}

inline ParseError circuit_error(int line, const std::string& what) {
  return ParseError("circuit line " + std::to_string(line) + ": " + what);
}

inline std::uint64_t parse_wire_name(std::string_view token, int line) {
  if (token.size() < 2 || token[0] != 'w') throw circuit_error(line, "bad wire name");
  std::uint64_t id = 0;
  for (char c : token.substr(1)) {
    if (c < '0' || c > '9') throw circuit_error(line, "bad wire name");
    id = id * 10 + static_cast<std::uint64_t>(c - '0');
    if (id > 100000000) throw circuit_error(line, "wire number too large");
  }
  if (id == 0) throw circuit_error(line, "wire numbers start at 1");
  return id;
}

inline std::uint64_t parse_count(std::string_view token, int line) {
  if (token.empty()) throw circuit_error(line, "bad count");
  std::uint64_t v = 0;
  for (char c : token) {
    if (c < '0' || c > '9') throw circuit_error(line, "bad count");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > 100000000) throw circuit_error(line, "count too large");
  }
  return v;
}

}  // namespace detail

inline Circuit parse_circuit(std::string_view text) {
  const auto lines = detail::tokenize_circuit(text);
  if (lines.empty()) throw ParseError("circuit: empty input");

  std::size_t li = 0;
  const auto& header = lines[li];
  if (header.tokens.size() != 2 || header.tokens[0] != "INPUTS") {
    throw detail::circuit_error(header.number, "expected \"INPUTS <n>\"");
  }
  const std::uint64_t n = detail::parse_count(header.tokens[1], header.number);
  ++li;

  std::vector<Gate> gates;
  // wire id -> ref; inputs are implicit.
  std::unordered_map<std::uint64_t, std::uint32_t> defined;
  std::uint64_t last_id = n;

  const auto resolve = [&](std::uint64_t id, int line) -> std::uint32_t {
    if (id <= n) return static_cast<std::uint32_t>(id - 1);
    const auto it = defined.find(id);
    if (it == defined.end()) {
      throw detail::circuit_error(line, "undefined wire w" + std::to_string(id));
    }
    return it->second;
  };

  std::optional<std::uint32_t> output;
  for (; li < lines.size(); ++li) {
    const auto& ln = lines[li];
    if (ln.tokens[0] == "OUTPUT") {
      if (ln.tokens.size() != 2) throw detail::circuit_error(ln.number, "expected \"OUTPUT w<k>\"");
      output = resolve(detail::parse_wire_name(ln.tokens[1], ln.number), ln.number);
      if (li + 1 != lines.size()) {
        throw detail::circuit_error(lines[li + 1].number, "text after OUTPUT");
      }
      break;
    }
    if (ln.tokens.size() < 3 || ln.tokens[1] != "=") {
      throw detail::circuit_error(ln.number, "expected \"w<k> = <OP> ...\"");
    }
    const std::uint64_t id = detail::parse_wire_name(ln.tokens[0], ln.number);
    if (id <= last_id) {
      throw detail::circuit_error(
          ln.number, id <= n ? "gate redefines an input wire" : "wire numbers must strictly increase");
    }
    const std::string_view op = ln.tokens[2];
    Gate gate{GateOp::One, 0, 0};
    if (op == "AND" || op == "XOR") {
      if (ln.tokens.size() != 5) throw detail::circuit_error(ln.number, "binary gate takes two operands");
      const std::uint64_t ia = detail::parse_wire_name(ln.tokens[3], ln.number);
      const std::uint64_t ib = detail::parse_wire_name(ln.tokens[4], ln.number);
      if (ia >= id || ib >= id) throw detail::circuit_error(ln.number, "forward reference");
      gate = {op == "AND" ? GateOp::And : GateOp::Xor, resolve(ia, ln.number), resolve(ib, ln.number)};
    } else if (op == "ONE") {
      if (ln.tokens.size() != 3) throw detail::circuit_error(ln.number, "ONE takes no operands");
    } else {
      throw detail::circuit_error(ln.number, "unknown opcode");
    }
    defined.emplace(id, static_cast<std::uint32_t>(n + gates.size()));
    gates.push_back(gate);
    last_id = id;
  }
  if (!output) throw ParseError("circuit: missing OUTPUT line");
  return Circuit(static_cast<int>(n), std::move(gates), *output);
}

inline std::string serialize_circuit(const Circuit& c) {
  const auto wire = [&](std::uint32_t ref) { return "w" + std::to_string(ref + 1); };
  std::string out = "INPUTS " + std::to_string(c.n()) + "\n";
  std::uint32_t next = static_cast<std::uint32_t>(c.n());
  for (const Gate& g : c.gates()) {
    out += wire(next) + " = ";
    switch (g.op) {
      case GateOp::And: out += "AND " + wire(g.a) + " " + wire(g.b); break;
      case GateOp::Xor: out += "XOR " + wire(g.a) + " " + wire(g.b); break;
      case GateOp::One: out += "ONE"; break;
    }
    out += "\n";
    ++next;
  }
  out += "OUTPUT " + wire(c.output()) + "\n";
  return out;
}

// Fixes inputs and folds constants through the DAG; no AND gate in the
// result has a (propagated) constant operand, and the AND count never
// increases. Surviving variables are renumbered in ascending order.
inline Circuit restrict_circuit(const Circuit& c,
                                const std::vector<std::pair<int, std::uint8_t>>& fixed) {
  std::vector<int> fixed_value(static_cast<std::size_t>(c.n()), -1);
  for (const auto& [var, v] : fixed) {
    if (var < 0 || var >= c.n()) throw DomainError("restriction variable out of range");
    if (v > 1) throw DomainError("restriction values must be 0 or 1");
    if (fixed_value[static_cast<std::size_t>(var)] != -1) throw DomainError("duplicate restriction variable");
    fixed_value[static_cast<std::size_t>(var)] = v;
  }

  int n_new = 0;
  for (int j = 0; j < c.n(); ++j) n_new += fixed_value[static_cast<std::size_t>(j)] == -1;
  CircuitBuilder builder(n_new);

  struct State {
    enum Kind { Zero, One, Wire } kind;
    std::uint32_t ref = 0;
  };
  std::vector<State> state(c.wire_count());
  int next_input = 0;
  for (int j = 0; j < c.n(); ++j) {
    const int v = fixed_value[static_cast<std::size_t>(j)];
    if (v == -1) state[static_cast<std::size_t>(j)] = {State::Wire, builder.input(next_input++)};
    else state[static_cast<std::size_t>(j)] = {v ? State::One : State::Zero, 0};
  }

  std::size_t w = static_cast<std::size_t>(c.n());
  for (const Gate& g : c.gates()) {
    const State a = state[g.a];
    const State b = state[g.b];
    State out{State::Zero, 0};
    switch (g.op) {
      case GateOp::One:
        out = {State::One, 0};
        break;
      case GateOp::And:
        if (a.kind == State::Zero || b.kind == State::Zero) out = {State::Zero, 0};
        else if (a.kind == State::One) out = b;
        else if (b.kind == State::One) out = a;
        else out = {State::Wire, builder.add_and(a.ref, b.ref)};
        break;
      case GateOp::Xor:
        if (a.kind != State::Wire && b.kind != State::Wire) {
          out = {(a.kind == State::One) != (b.kind == State::One) ? State::One : State::Zero, 0};
        } else if (a.kind == State::Zero) out = b;
        else if (b.kind == State::Zero) out = a;
        else if (a.kind == State::One) out = {State::Wire, builder.add_not(b.ref)};
        else if (b.kind == State::One) out = {State::Wire, builder.add_not(a.ref)};
        else out = {State::Wire, builder.add_xor(a.ref, b.ref)};
        break;
    }
    state[w++] = out;
  }

  const State out = state[c.output()];
  std::uint32_t out_ref;
  if (out.kind == State::Wire) out_ref = out.ref;
  else if (out.kind == State::One) out_ref = builder.one_wire();
  else out_ref = builder.zero_wire();
  return builder.build(out_ref);
}

// Drops gates unreachable from the output (renumbering survivors). Kept as
// a separate pass so syntactic AND counts stay meaningful.
inline Circuit eliminate_dead_gates(const Circuit& c) {
  std::vector<bool> live(c.wire_count(), false);
  live[c.output()] = true;
  for (std::size_t g = c.gates().size(); g-- > 0;) {
    const std::size_t w = static_cast<std::size_t>(c.n()) + g;
    if (!live[w]) continue;
    const Gate& gate = c.gates()[g];
    if (gate.op != GateOp::One) {
      live[gate.a] = true;
      live[gate.b] = true;
    }
  }
  std::vector<std::uint32_t> remap(c.wire_count(), 0);
  for (int j = 0; j < c.n(); ++j) remap[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(j);
  std::vector<Gate> gates;
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    const std::size_t w = static_cast<std::size_t>(c.n()) + g;
    if (!live[w]) continue;
    Gate gate = c.gates()[g];
    if (gate.op != GateOp::One) {
      gate.a = remap[gate.a];
      gate.b = remap[gate.b];
    }
    remap[w] = static_cast<std::uint32_t>(c.n() + gates.size());
    gates.push_back(gate);
  }
  return Circuit(c.n(), std::move(gates), remap[c.output()]);
}

}  // namespace nlmc
