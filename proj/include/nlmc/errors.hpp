#pragma once
// Error taxonomy shared by the whole library.
//
// ParseError:  malformed textual input (truth-table strings, circuit files).
// DomainError: structurally valid input outside an operation's domain
//              (size caps, dimension mismatches, out-of-range indices).
//
// Anything thrown as std::logic_error signals a broken internal invariant,
// never bad user input.

#include <stdexcept>
#include <string>

namespace nlmc {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlmc
