#pragma once
// Bit-packed truth tables for Boolean functions on up to kMaxTableVars
// variables, plus the textual formats used across the toolkit.
//
// Index convention (used everywhere): position i of the table of
// f : {0,1}^n -> {0,1} holds f(x) where
//
//     i = sum_j x_j * 2^(j-1),   j = 1..n
//
// i.e. variable x1 is the least-significant bit of the position. All
// serializations list positions in increasing order.
//
// Text forms accepted by from_text:
//   binary  exactly 2^n characters '0'/'1', position order
//   hex     exactly 2^n/4 digits (n >= 2); digit k encodes positions
//           4k..4k+3, position i contributing bit value 2^(i mod 4)
//
// File format: one table per line, "n:<int> tt:<string>".

#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlmc/errors.hpp"

namespace nlmc {

inline constexpr int kMaxTableVars = 24;  // 2 MiB packed per table

namespace detail {

inline void check_var_count(int n) {
  if (n < 0 || n > kMaxTableVars) {
    throw DomainError("variable count " + std::to_string(n) + " outside [0, " +
                      std::to_string(kMaxTableVars) + "]");
  }
}

inline std::uint64_t table_size(int n) { return std::uint64_t{1} << n; }

inline std::size_t word_count(int n) {
  return static_cast<std::size_t>((table_size(n) + 63) / 64);
}

// Mask selecting the live bits of the last word.
inline std::uint64_t tail_mask(int n) {
  const std::uint64_t live = table_size(n) % 64;
  return live == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << live) - 1;
}

}  // namespace detail

// One point of {0,1}^n; bit j (0-based) is the value of variable x_{j+1}.
class Assignment {
 public:
  Assignment() = default;

  explicit Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::uint8_t b : bits_) {
      if (b > 1) throw DomainError("assignment bits must be 0 or 1");
    }
  }

  static Assignment from_index(int n, std::uint64_t index) {
    detail::check_var_count(n);
    if (index >= detail::table_size(n)) {
      throw DomainError("assignment index out of range for n=" + std::to_string(n));
    }
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) bits[j] = (index >> j) & 1;
    return Assignment(std::move(bits));
  }

  std::uint64_t to_index() const {
    std::uint64_t index = 0;
    for (int j = 0; j < size(); ++j) index |= std::uint64_t{bits_[j]} << j;
    return index;
  }

  int size() const { return static_cast<int>(bits_.size()); }

  std::uint8_t bit(int j) const {
    if (j < 0 || j >= size()) throw DomainError("assignment variable index out of range");
    return bits_[j];
  }

  void set_bit(int j, std::uint8_t v) {
    if (j < 0 || j >= size()) throw DomainError("assignment variable index out of range");
    if (v > 1) throw DomainError("assignment bits must be 0 or 1");
    bits_[j] = v;
  }

  // Characters x1..xn in variable order.
  std::string to_string() const {
    std::string s(static_cast<std::size_t>(size()), '0');
    for (int j = 0; j < size(); ++j) s[j] = bits_[j] ? '1' : '0';
    return s;
  }

  friend Assignment operator^(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size()) throw DomainError("assignment dimension mismatch");
    std::vector<std::uint8_t> bits(a.bits_);
    for (int j = 0; j < b.size(); ++j) bits[j] ^= b.bits_[j];
    return Assignment(std::move(bits));
  }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

class TruthTable {
 public:
  // All-zero table on n variables.
  explicit TruthTable(int n) : n_((detail::check_var_count(n), n)), words_(detail::word_count(n), 0) {}

  // Adopts pre-packed words; dead tail bits must be zero.
  static TruthTable from_words(int n, std::vector<std::uint64_t> words) {
    detail::check_var_count(n);
    if (words.size() != detail::word_count(n)) throw DomainError("packed word count mismatch");
    if ((words.back() & ~detail::tail_mask(n)) != 0) {
      throw DomainError("dead tail bits must be zero");
    }
    TruthTable t(n);
    t.words_ = std::move(words);
    return t;
  }

  static TruthTable from_text(int n, std::string_view text) {
    detail::check_var_count(n);
    const std::uint64_t size = detail::table_size(n);
    TruthTable t(n);
    if (text.size() == size) {
      for (std::uint64_t i = 0; i < size; ++i) {
        const char c = text[static_cast<std::size_t>(i)];
        if (c != '0' && c != '1') throw ParseError("binary table: illegal character");
        t.set_bit(i, c == '1');
      }
      return t;
    }
    if (n >= 2 && text.size() == size / 4) {
      for (std::uint64_t k = 0; k < size / 4; ++k) {
        const char c = text[static_cast<std::size_t>(k)];
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw ParseError("hex table: illegal character");
        for (int b = 0; b < 4; ++b) t.set_bit(4 * k + b, (v >> b) & 1);
      }
      return t;
    }
    throw ParseError("table text for n=" + std::to_string(n) + " must have " +
                     std::to_string(size) + " binary or " +
                     (n >= 2 ? std::to_string(size / 4) + " hex" : std::string("(no hex form)")) +
                     " characters, got " + std::to_string(text.size()));
  }

  int n() const { return n_; }
  std::uint64_t size() const { return detail::table_size(n_); }
  const std::vector<std::uint64_t>& words() const { return words_; }

  int bit(std::uint64_t i) const {
    if (i >= size()) throw DomainError("table position out of range");
    return static_cast<int>((words_[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1);
  }

  void set_bit(std::uint64_t i, int v) {
    if (i >= size()) throw DomainError("table position out of range");
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (v) words_[static_cast<std::size_t>(i / 64)] |= mask;
    else words_[static_cast<std::size_t>(i / 64)] &= ~mask;
  }

  int evaluate(const Assignment& x) const {
    if (x.size() != n_) throw DomainError("assignment dimension mismatch");
    return bit(x.to_index());
  }

  std::uint64_t popcount() const {
    std::uint64_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
  }

  // Canonical serialization: binary, position order.
  std::string to_binary_string() const {
    std::string s(static_cast<std::size_t>(size()), '0');
    for (std::uint64_t i = 0; i < size(); ++i) s[static_cast<std::size_t>(i)] = bit(i) ? '1' : '0';
    return s;
  }

  std::string to_hex_string() const {
    if (n_ < 2) throw DomainError("hex form requires n >= 2");
    std::string s(static_cast<std::size_t>(size() / 4), '0');
    for (std::uint64_t k = 0; k < size() / 4; ++k) {
      int v = 0;
      for (int b = 0; b < 4; ++b) v |= bit(4 * k + b) << b;
      s[static_cast<std::size_t>(k)] = "0123456789abcdef"[v];
    }
    return s;
  }

  bool operator==(const TruthTable&) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;  // bit i of word i/64; tail bits zero
};

// Table of the affine function c + sum_{j : a_j = 1} x_j; coefficient bit
// j-1 of `a` is a_j.
inline TruthTable affine_table(std::uint32_t a, int c, int n) {
  detail::check_var_count(n);
  if (c != 0 && c != 1) throw DomainError("affine constant must be 0 or 1");
  if (n < 32 && (a >> n) != 0) throw DomainError("coefficient mask exceeds variable count");

  // Block doubling: appending variable j duplicates the prefix, complemented
  // when a_j = 1.
  std::uint64_t word0 = c ? 1 : 0;
  std::uint64_t len = 1;
  int j = 0;
  for (; j < n && len < 64; ++j, len <<= 1) {
    const std::uint64_t low = word0 & ((std::uint64_t{1} << len) - 1);
    const std::uint64_t top = ((a >> j) & 1) ? (~low & ((std::uint64_t{1} << len) - 1)) : low;
    word0 = low | (top << len);
  }
  std::vector<std::uint64_t> words(detail::word_count(n), 0);
  words[0] = word0 & detail::tail_mask(n);
  std::uint64_t filled = 1;
  for (; j < n; ++j, filled <<= 1) {
    const bool complement = (a >> j) & 1;
    for (std::uint64_t w = 0; w < filled; ++w) {
      words[static_cast<std::size_t>(filled + w)] = complement ? ~words[static_cast<std::size_t>(w)] : words[static_cast<std::size_t>(w)];
    }
  }
  return TruthTable::from_words(n, std::move(words));
}

// Uniform random table; bit i is bit (i mod 64) of the (i/64)-th engine
// output, so the whole table is a prefix of the seeded stream.
inline TruthTable random_table(int n, std::uint64_t seed) {
  detail::check_var_count(n);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> words(detail::word_count(n));
  for (auto& w : words) w = rng();
  words.back() &= detail::tail_mask(n);
  return TruthTable::from_words(n, std::move(words));
}

inline std::uint64_t hamming_distance(const TruthTable& a, const TruthTable& b) {
  if (a.n() != b.n()) throw DomainError("table dimension mismatch");
  std::uint64_t total = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    total += static_cast<std::uint64_t>(std::popcount(a.words()[w] ^ b.words()[w]));
  }
  return total;
}

// Variables are fixed by 0-based index; the survivors keep their relative
// order and are renumbered from 0.
inline TruthTable restrict_table(const TruthTable& t,
                                 const std::vector<std::pair<int, std::uint8_t>>& fixed) {
  std::vector<int> value(static_cast<std::size_t>(t.n()), -1);
  for (const auto& [var, v] : fixed) {
    if (var < 0 || var >= t.n()) throw DomainError("restriction variable out of range");
    if (v > 1) throw DomainError("restriction values must be 0 or 1");
    if (value[static_cast<std::size_t>(var)] != -1) throw DomainError("duplicate restriction variable");
    value[static_cast<std::size_t>(var)] = v;
  }
  std::uint64_t base = 0;
  std::vector<int> free_vars;
  for (int j = 0; j < t.n(); ++j) {
    if (value[static_cast<std::size_t>(j)] == -1) free_vars.push_back(j);
    else base |= std::uint64_t{static_cast<std::uint64_t>(value[static_cast<std::size_t>(j)])} << j;
  }
  const int k = static_cast<int>(free_vars.size());
  TruthTable out(k);
  for (std::uint64_t idx = 0; idx < detail::table_size(k); ++idx) {
    std::uint64_t orig = base;
    for (int j = 0; j < k; ++j) orig |= ((idx >> j) & 1) << free_vars[static_cast<std::size_t>(j)];
    out.set_bit(idx, t.bit(orig));
  }
  return out;
}

inline std::string format_table_line(const TruthTable& t) {
  return "n:" + std::to_string(t.n()) + " tt:" + t.to_binary_string();
}

inline TruthTable parse_table_line(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (end > pos) tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  if (tokens.size() != 2 || !tokens[0].starts_with("n:") || !tokens[1].starts_with("tt:")) {
    throw ParseError("table line must be \"n:<int> tt:<string>\"");
  }
  int n = 0;
  const std::string_view n_text = tokens[0].substr(2);
  if (n_text.empty()) throw ParseError("table line: missing variable count");
  for (char c : n_text) {
    if (c < '0' || c > '9') throw ParseError("table line: bad variable count");
    n = n * 10 + (c - '0');
    if (n > 1000) throw ParseError("table line: bad variable count");
  }
  return TruthTable::from_text(n, tokens[1].substr(3));
}

}  // namespace nlmc
