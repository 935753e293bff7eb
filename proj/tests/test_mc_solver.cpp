#include <catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "nlmc/circuit.hpp"
#include "nlmc/errors.hpp"
#include "nlmc/mc_solver.hpp"
#include "nlmc/normal_form.hpp"
#include "nlmc/truth_table.hpp"

using nlmc::TruthTable;

namespace {

TruthTable table_from_bits(int n, std::uint64_t f) {
  TruthTable t(n);
  for (std::uint64_t i = 0; i < t.size(); ++i) t.set_bit(i, (f >> i) & 1);
  return t;
}

// Independent oracle for the one-AND level: enumerate every
// affine + (affine AND affine) directly on packed 8-bit tables.
// No solver code involved.
std::set<std::uint8_t> all_mc_at_most_one_3() {
  std::vector<std::uint8_t> affine;
  for (std::uint32_t a = 0; a < 8; ++a) {
    for (int c = 0; c <= 1; ++c) {
      std::uint8_t t = 0;
      for (std::uint32_t i = 0; i < 8; ++i) {
        t |= static_cast<std::uint8_t>(((std::popcount(a & i) + c) & 1) << i);
      }
      affine.push_back(t);
    }
  }
  std::set<std::uint8_t> reachable(affine.begin(), affine.end());
  for (std::uint8_t u : affine) {
    for (std::uint8_t v : affine) {
      const std::uint8_t prod = u & v;
      for (std::uint8_t base : affine) reachable.insert(static_cast<std::uint8_t>(prod ^ base));
    }
  }
  return reachable;
}

}  // namespace

TEST_CASE("affine functions have complexity zero, with empty witnesses") {
  for (int s = 0; s <= 3; ++s) {
    for (std::uint32_t a = 0; a < (1u << s); ++a) {
      for (int c = 0; c <= 1; ++c) {
        const nlmc::McResult r = nlmc::mc_exact(nlmc::affine_table(a, c, s));
        REQUIRE(r.value == 0);
        REQUIRE(r.witness.and_count() == 0);
      }
    }
  }
}

TEST_CASE("AND_2 needs exactly one gate") {
  const nlmc::McResult r = nlmc::mc_exact(TruthTable::from_text(2, "0001"));
  CHECK(r.value == 1);
  CHECK(r.witness.and_count() == 1);
  CHECK(nlmc::circuit_truth_table(nlmc::from_normal_form(r.witness)) ==
        TruthTable::from_text(2, "0001"));
}

TEST_CASE("majority of three has complexity one") {
  // maj(x1,x2,x3) = (x1 xor x3)(x2 xor x3) xor x3: a single AND suffices.
  // The one-AND enumeration oracle below is independent of the solver.
  const TruthTable maj = TruthTable::from_text(3, "00010111");
  const std::set<std::uint8_t> one = all_mc_at_most_one_3();
  std::uint8_t packed = 0;
  for (std::uint64_t i = 0; i < 8; ++i) packed |= static_cast<std::uint8_t>(maj.bit(i) << i);
  REQUIRE(one.count(packed) == 1);

  const nlmc::McResult r = nlmc::mc_exact(maj);
  CHECK(r.value == 1);
  CHECK(nlmc::circuit_truth_table(nlmc::from_normal_form(r.witness)) == maj);
}

TEST_CASE("solver agrees with the one-AND oracle on every 3-variable function") {
  const std::set<std::uint8_t> one = all_mc_at_most_one_3();
  for (std::uint32_t f = 0; f < 256; ++f) {
    const bool oracle_le1 = one.count(static_cast<std::uint8_t>(f)) == 1;
    const bool solver_le1 = nlmc::mc_decision(table_from_bits(3, f), 1);
    REQUIRE(oracle_le1 == solver_le1);
  }
}

TEST_CASE("triple product needs two gates") {
  // x1x2x3 has algebraic degree 3, so one AND (degree <= 2) cannot reach it;
  // (x1 AND x2) AND x3 shows two suffice.
  const nlmc::McResult r = nlmc::mc_exact(table_from_bits(3, 0x80));
  CHECK(r.value == 2);
}

TEST_CASE("every witness re-verifies over all of B_3") {
  for (std::uint32_t f = 0; f < 256; ++f) {
    const TruthTable t = table_from_bits(3, f);
    const nlmc::McResult r = nlmc::mc_exact(t);
    REQUIRE(r.value <= 2);
    REQUIRE(r.witness.and_count() == r.value);
    CHECK_NOTHROW(nlmc::validate_normal_form(r.witness));
    REQUIRE(nlmc::circuit_truth_table(nlmc::from_normal_form(r.witness)) == t);
  }
}

TEST_CASE("decision is monotone in the budget") {
  const TruthTable t = table_from_bits(3, 0x80);  // complexity 2
  CHECK_FALSE(nlmc::mc_decision(t, 0));
  CHECK_FALSE(nlmc::mc_decision(t, 1));
  CHECK(nlmc::mc_decision(t, 2));
  CHECK(nlmc::mc_decision(t, 3));

  std::uint64_t nodes = 0;
  const auto witness = nlmc::mc_decision_witness(t, 2, &nodes);
  REQUIRE(witness.has_value());
  CHECK(witness->and_count() == 2);
  CHECK(nodes > 0);
}

TEST_CASE("census of B_2") {
  const nlmc::McCensus c = nlmc::classify(2);
  REQUIRE(c.counts == std::vector<std::uint64_t>{8, 8});
  CHECK(c.total() == 16);
  CHECK(c.max_mc() == 1);
  CHECK(c.cumulative(0) == 8);
  CHECK(c.cumulative(1) == 16);
  CHECK(c.tail_count(0) == 8);
  CHECK(c.tail_count(1) == 0);
}

TEST_CASE("census of B_3") {
  // 16 affine; the one-AND oracle confirms exactly 128 functions at
  // complexity <= 1; the remaining 128 (the degree-3 half) sit at 2.
  const nlmc::McCensus c = nlmc::classify(3);
  REQUIRE(c.counts == std::vector<std::uint64_t>{16, 112, 128});
  CHECK(c.total() == 256);
  CHECK(all_mc_at_most_one_3().size() == 128);
}

TEST_CASE("census of B_4 matches the published classification") {
  const nlmc::McCensus c = nlmc::classify(4);
  REQUIRE(c.counts == std::vector<std::uint64_t>{32, 1120, 31616, 32768});
  CHECK(c.total() == 65536);
  CHECK(c.max_mc() == 3);
}

TEST_CASE("census is memoized: repeated calls return the same object content") {
  const nlmc::McCensus a = nlmc::classify(3);
  const nlmc::McCensus b = nlmc::classify(3);
  CHECK(a.counts == b.counts);
}

TEST_CASE("census agrees with per-function exact values on B_3") {
  std::vector<std::uint64_t> counts(3, 0);
  for (std::uint32_t f = 0; f < 256; ++f) {
    counts[static_cast<std::size_t>(nlmc::mc_exact(table_from_bits(3, f)).value)]++;
  }
  CHECK(counts == nlmc::classify(3).counts);
}

TEST_CASE("counting bound values") {
  // 2^(k^2 + 2k + 2ks + s + 1)
  CHECK(nlmc::counting_bound(2, 0).exponent == 3);
  CHECK(nlmc::counting_bound(2, 0).to_string() == "8");
  CHECK(nlmc::counting_bound(2, 1).to_string() == "1024");
  CHECK(nlmc::counting_bound(5, 3).exponent == 51);
  CHECK(nlmc::counting_bound(5, 3).to_string() == "2251799813685248");
  CHECK_THROWS_AS(nlmc::counting_bound(-1, 0), nlmc::DomainError);
  CHECK_THROWS_AS(nlmc::counting_bound(2, -1), nlmc::DomainError);
}

TEST_CASE("power-of-two covers across the 64-bit edge") {
  CHECK(nlmc::PowerOfTwo{10}.covers(1024));
  CHECK(nlmc::PowerOfTwo{10}.covers(1023));
  CHECK_FALSE(nlmc::PowerOfTwo{10}.covers(1025));
  CHECK(nlmc::PowerOfTwo{63}.covers(std::uint64_t{1} << 63));
  CHECK_FALSE(nlmc::PowerOfTwo{63}.covers((std::uint64_t{1} << 63) + 1));
  CHECK(nlmc::PowerOfTwo{64}.covers(~std::uint64_t{0}));
  CHECK(nlmc::PowerOfTwo{200}.covers(~std::uint64_t{0}));
  CHECK(nlmc::PowerOfTwo{0}.to_string() == "1");
  CHECK(nlmc::PowerOfTwo{64}.to_string() == "18446744073709551616");
}

TEST_CASE("cumulative counts never exceed the counting bound") {
  for (int s = 2; s <= 3; ++s) {
    const std::vector<nlmc::BoundCheckRow> rows = nlmc::verify_counting_bound(s, -1);
    REQUIRE(!rows.empty());
    for (const nlmc::BoundCheckRow& row : rows) {
      INFO("s=" << s << " k=" << row.k);
      REQUIRE(row.ok);
    }
    // Equality at k=0: both sides are 2^(s+1).
    REQUIRE(rows[0].bound.covers(rows[0].cumulative));
    REQUIRE(rows[0].cumulative == (std::uint64_t{1} << (s + 1)));
    REQUIRE(rows[0].bound.exponent == static_cast<std::uint64_t>(s + 1));
  }
}

TEST_CASE("census row formatting") {
  const std::vector<nlmc::BoundCheckRow> rows = nlmc::verify_counting_bound(2, 0);
  REQUIRE(!rows.empty());
  CHECK(nlmc::format_census_row(rows[0]) == "k=0 count=8 cumulative=8 bound=8 ok=true");
}

TEST_CASE("size caps") {
  CHECK_THROWS_AS(nlmc::mc_exact(nlmc::random_table(6, 1)), nlmc::DomainError);
  CHECK_THROWS_AS(nlmc::classify(5), nlmc::DomainError);
  CHECK_THROWS_AS(nlmc::classify(-1), nlmc::DomainError);
}

TEST_CASE("witness chains respect the normal form discipline") {
  // Deeper functions exercise gates whose operands include earlier products.
  for (std::uint64_t f : {0x6996u, 0x1ee1u, 0x8001u, 0xcafeu}) {
    const TruthTable t = table_from_bits(4, f);
    const nlmc::McResult r = nlmc::mc_exact(t);
    CHECK_NOTHROW(nlmc::validate_normal_form(r.witness));
    REQUIRE(nlmc::circuit_truth_table(nlmc::from_normal_form(r.witness)) == t);
  }
}
