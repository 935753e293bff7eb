#pragma once
// Walsh-Hadamard spectra, nonlinearity, and best affine approximations.
//
// The spectrum of f is W_f(a) = sum_x (-1)^(f(x) + <a,x>), indexed by the
// same little-endian convention as truth-table positions. Nonlinearity is
// NL(f) = 2^(n-1) - max_a |W_f(a)| / 2, the Hamming distance from f to the
// nearest affine function.
//
// nonlinearity_bruteforce enumerates all 2^(n+1) affine functions and is the
// independent oracle used by the tests and by the CLI's --paranoid mode.

#include <cstdint>
#include <cstdlib>
#include <vector>

#include "nlmc/errors.hpp"
#include "nlmc/truth_table.hpp"

namespace nlmc {

inline constexpr int kMaxBruteForceVars = 16;  // oracle is O(4^n) worst case

struct WalshSpectrum {
  int n = 0;
  std::vector<std::int32_t> coeff;  // index a, coefficient W_f(a)

  std::int32_t at(std::uint64_t a) const {
    if (a >= coeff.size()) throw DomainError("spectrum index out of range");
    return coeff[static_cast<std::size_t>(a)];
  }

  std::int32_t max_abs() const {
    std::int32_t best = 0;
    for (std::int32_t w : coeff) {
      const std::int32_t m = w < 0 ? -w : w;
      if (m > best) best = m;
    }
    return best;
  }
};

// In-place butterfly; length must be a power of two. Applying it twice
// multiplies every entry by the length.
inline void hadamard_inplace(std::vector<std::int32_t>& v) {
  const std::size_t size = v.size();
  if (size == 0 || (size & (size - 1)) != 0) throw DomainError("transform length must be a power of two");
  for (std::size_t h = 1; h < size; h <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * h) {
      for (std::size_t i = block; i < block + h; ++i) {
        const std::int32_t a = v[i];
        const std::int32_t b = v[i + h];
        v[i] = a + b;
        v[i + h] = a - b;
      }
    }
  }
}

inline WalshSpectrum fwt(const TruthTable& t) {
  WalshSpectrum s;
  s.n = t.n();
  s.coeff.resize(static_cast<std::size_t>(t.size()));
  for (std::uint64_t i = 0; i < t.size(); ++i) {
    s.coeff[static_cast<std::size_t>(i)] = t.bit(i) ? -1 : 1;
  }
  hadamard_inplace(s.coeff);
  return s;
}

// Exact: sum_a W(a)^2 = 2^(2n), so 2^n and max|W| have equal parity.
inline std::uint64_t parseval_sum(const WalshSpectrum& s) {
  std::uint64_t total = 0;
  for (std::int32_t w : s.coeff) {
    total += static_cast<std::uint64_t>(static_cast<std::int64_t>(w) * w);
  }
  return total;
}

inline int nonlinearity(const TruthTable& t) {
  const WalshSpectrum s = fwt(t);
  return static_cast<int>((t.size() - static_cast<std::uint64_t>(s.max_abs())) / 2);
}

struct AffineApproximation {
  std::uint32_t a = 0;  // coefficient mask, bit j-1 = a_j
  int c = 0;
  std::uint64_t agreements = 0;  // 2^n - NL(f)
};

// Ties resolve to the smallest coefficient mask, and to c=0 before c=1.
inline AffineApproximation best_affine_approximation(const TruthTable& t) {
  const WalshSpectrum s = fwt(t);
  const std::int64_t size = static_cast<std::int64_t>(t.size());
  const std::int64_t best = (size + s.max_abs()) / 2;
  for (std::uint64_t a = 0; a < t.size(); ++a) {
    const std::int64_t w = s.coeff[static_cast<std::size_t>(a)];
    if ((size + w) / 2 == best) {
      return {static_cast<std::uint32_t>(a), 0, static_cast<std::uint64_t>(best)};
    }
    if ((size - w) / 2 == best) {
      return {static_cast<std::uint32_t>(a), 1, static_cast<std::uint64_t>(best)};
    }
  }
  throw std::logic_error("best affine approximation: no maximizer found");
}

// Direct affine enumeration; independent of the transform path.
inline int nonlinearity_bruteforce(const TruthTable& t) {
  if (t.n() > kMaxBruteForceVars) {
    throw DomainError("brute-force nonlinearity capped at n <= " + std::to_string(kMaxBruteForceVars));
  }
  const std::uint64_t size = t.size();
  std::uint64_t best_agreements = 0;
  for (std::uint64_t a = 0; a < size; ++a) {
    const TruthTable lin = affine_table(static_cast<std::uint32_t>(a), 0, t.n());
    const std::uint64_t agree = size - hamming_distance(t, lin);
    const std::uint64_t agree_complement = size - agree;
    if (agree > best_agreements) best_agreements = agree;
    if (agree_complement > best_agreements) best_agreements = agree_complement;
  }
  return static_cast<int>(size - best_agreements);
}

}  // namespace nlmc
