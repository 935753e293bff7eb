#pragma once
// Reductions connecting circuit questions to the spectral measures.
//
// * Affinity: f computed by a circuit is affine iff no pair (x, y) has
//   f(x+y) + f(x) + f(y) + f(0) = 1; such a pair is a certificate of
//   non-affineness checkable with four evaluations.
// * tautology_to_affine: probing F at 0 and the unit vectors maps
//   tautology instances to affine circuits and everything else to a fixed
//   non-affine instance.
// * sat_count_gadget: AND-chaining t >= 1 fresh inputs onto C makes the
//   best affine approximation of the padded function constant zero, so
//   NL(padded) equals the number of satisfying assignments of C.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlmc/circuit.hpp"
#include "nlmc/errors.hpp"
#include "nlmc/truth_table.hpp"
#include "nlmc/walsh.hpp"

namespace nlmc {

struct NonAffineWitness {
  Assignment x;
  Assignment y;
};

inline bool check_affine_certificate(const Circuit& c, const Assignment& x, const Assignment& y) {
  if (x.size() != c.n() || y.size() != c.n()) throw DomainError("assignment dimension mismatch");
  const Assignment zero = Assignment::from_index(c.n(), 0);
  const int v = evaluate_circuit(c, x ^ y) ^ evaluate_circuit(c, x) ^ evaluate_circuit(c, y) ^
                evaluate_circuit(c, zero);
  return v == 1;
}

struct AffineDecision {
  bool affine = false;
  std::optional<NonAffineWitness> witness;  // set iff not affine
};

// Truth-table exhaustion. The witness splits the first point where the
// affine fit from f(0) and the unit vectors fails: that point has at least
// two set bits, and peeling its lowest set bit yields a certificate pair.
inline AffineDecision is_affine(const Circuit& c) {
  const int n = c.n();
  if (n > kMaxBruteForceVars) {
    throw DomainError("affinity test capped at n <= " + std::to_string(kMaxBruteForceVars));
  }
  const TruthTable t = circuit_truth_table(c);
  const int c0 = t.bit(0);
  std::uint32_t a = 0;
  for (int j = 0; j < n; ++j) {
    a |= static_cast<std::uint32_t>(t.bit(std::uint64_t{1} << j) ^ c0) << j;
  }
  for (std::uint64_t i = 0; i < t.size(); ++i) {
    const int fit = (std::popcount(static_cast<std::uint64_t>(a) & i) & 1) ^ c0;
    if (t.bit(i) == fit) continue;
    const std::uint64_t low = i & (~i + 1);
    NonAffineWitness w{Assignment::from_index(n, low), Assignment::from_index(n, i ^ low)};
    if (!check_affine_certificate(c, w.x, w.y)) {
      throw std::logic_error("constructed certificate failed to verify");
    }
    return {false, std::move(w)};
  }
  return {true, std::nullopt};
}

// Canonical non-affine instance: a bare AND of the first two inputs, padded
// with ignored inputs up to the requested arity.
inline Circuit canonical_non_affine(int arity) {
  const int n = arity < 2 ? 2 : arity;
  return Circuit(n, {{GateOp::And, 0, 1}}, static_cast<std::uint32_t>(n));
}

// n+1 probes: F(0) and every F(e_j). All ones leaves F untouched (an affine
// F passing the probes is constant 1); any zero probe proves F is not a
// tautology and maps to the canonical non-affine instance.
inline Circuit tautology_to_affine(const Circuit& f) {
  const int n = f.n();
  Assignment probe = Assignment::from_index(n, 0);
  if (evaluate_circuit(f, probe) == 0) return canonical_non_affine(n);
  for (int j = 0; j < n; ++j) {
    if (evaluate_circuit(f, Assignment::from_index(n, std::uint64_t{1} << j)) == 0) {
      return canonical_non_affine(n);
    }
  }
  return f;
}

struct GadgetInstance {
  Circuit original;
  Circuit padded;  // n + t inputs
  int t = 0;
};

// Pads f(x) to F(x, y) = f(x) AND y1 AND .. AND yt. With s = #SAT(f):
// the all-zero function agrees with F on 2^(n+t) - s points, and any other
// affine function agrees on at most 2^(n+t) - (2^(n+t-1) - s), so
//   NL(F) = s  whenever  s <= 2^(n+t-2),
// which holds for every f once t >= 2 (s <= 2^n). At t = 1 a dense f
// breaks the identity (f == 1 gives F = y1, nonlinearity 0) and the true
// value is NL(F) = min(s, 2^n - s). The default t = 10 keeps an enormous
// margin on top of the t >= 2 requirement.
inline GadgetInstance sat_count_gadget(const Circuit& c, int t) {
  if (t < 1) throw DomainError("gadget padding width must be at least 1");
  const int n = c.n();
  if (n + t > kMaxTableVars) {
    throw DomainError("gadget arity n + t capped at " + std::to_string(kMaxTableVars));
  }
  // Old gate refs shift past the fresh inputs; input refs are unchanged.
  std::vector<Gate> gates;
  gates.reserve(c.gates().size() + static_cast<std::size_t>(t));
  const auto remap = [&](std::uint32_t ref) {
    return ref < static_cast<std::uint32_t>(n) ? ref : ref + static_cast<std::uint32_t>(t);
  };
  for (Gate g : c.gates()) {
    if (g.op != GateOp::One) {
      g.a = remap(g.a);
      g.b = remap(g.b);
    }
    gates.push_back(g);
  }
  std::uint32_t cur = remap(c.output());
  for (int i = 0; i < t; ++i) {
    const std::uint32_t next = static_cast<std::uint32_t>(n + t) + static_cast<std::uint32_t>(gates.size());
    gates.push_back({GateOp::And, cur, static_cast<std::uint32_t>(n + i)});
    cur = next;
  }
  return {c, Circuit(n + t, std::move(gates), cur), t};
}

// Independent of the packed table path: one gate-by-gate evaluation per
// assignment.
inline std::uint64_t count_sat_bruteforce(const Circuit& c) {
  if (c.n() > kMaxBruteForceVars) {
    throw DomainError("satisfying-assignment count capped at n <= " + std::to_string(kMaxBruteForceVars));
  }
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < detail::table_size(c.n()); ++i) {
    total += static_cast<std::uint64_t>(evaluate_circuit(c, Assignment::from_index(c.n(), i)));
  }
  return total;
}

// NL of the padded table; equals the satisfying-assignment count of c.
// Requires t >= 2: that is the smallest padding for which the equality
// holds for every circuit (see sat_count_gadget).
inline std::uint64_t count_sat_via_nl(const Circuit& c, int t = 10) {
  if (t < 2) throw DomainError("counting through nonlinearity needs padding t >= 2");
  const GadgetInstance gadget = sat_count_gadget(c, t);
  return static_cast<std::uint64_t>(nonlinearity(circuit_truth_table(gadget.padded)));
}

}  // namespace nlmc
