#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "nlmc/circuit.hpp"
#include "nlmc/distinguisher.hpp"
#include "nlmc/errors.hpp"
#include "nlmc/mc_solver.hpp"
#include "nlmc/truth_table.hpp"

using nlmc::Assignment;
using nlmc::DistinguisherConfig;
using nlmc::Oracle;
using nlmc::TruthTable;

TEST_CASE("config validation and threshold") {
  DistinguisherConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.threshold() == 5.0);  // (4+1)*1.0

  cfg.rho = 2.0;
  cfg.and_budget = 0;
  CHECK(cfg.threshold() == 2.0);

  DistinguisherConfig bad = cfg;
  bad.s = 0;
  CHECK_THROWS_AS(bad.validate(), nlmc::DomainError);
  bad = cfg;
  bad.s = 6;
  CHECK_THROWS_AS(bad.validate(), nlmc::DomainError);
  bad = cfg;
  bad.and_budget = -1;
  CHECK_THROWS_AS(bad.validate(), nlmc::DomainError);
  bad = cfg;
  bad.rho = 0.5;
  CHECK_THROWS_AS(bad.validate(), nlmc::DomainError);
}

TEST_CASE("toy family shape: AND count by construction") {
  const nlmc::ToyFamily fam = nlmc::toy_family(4);
  CHECK(fam.n == 4);
  CHECK(fam.rounds == 2);
  CHECK(fam.and_count == 4);  // 2 rounds * ceil(4/2)
  CHECK(fam.circuit.n() == 8);
  CHECK(nlmc::count_and(fam.circuit) == 4);

  const nlmc::ToyFamily odd = nlmc::toy_family(5, 3);
  CHECK(odd.and_count == 9);  // 3 * ceil(5/2)
  CHECK(nlmc::count_and(odd.circuit) == 9);

  const nlmc::ToyFamily affine = nlmc::toy_family(4, 0);
  CHECK(affine.and_count == 0);
  CHECK(nlmc::count_and(affine.circuit) == 0);

  CHECK_THROWS_AS(nlmc::toy_family(0), nlmc::DomainError);
  CHECK_THROWS_AS(nlmc::toy_family(13), nlmc::DomainError);
}

TEST_CASE("toy family separates at least one key pair") {
  const nlmc::ToyFamily fam = nlmc::toy_family(4);
  std::set<std::string> tables;
  for (std::uint64_t k = 0; k < 16; ++k) {
    Oracle o = Oracle::keyed(fam, Assignment::from_index(4, k));
    tables.insert(nlmc::query_restriction(o, 4).to_binary_string());
  }
  CHECK(tables.size() > 1);
}

TEST_CASE("every keyed member respects the family AND bound") {
  const nlmc::ToyFamily fam = nlmc::toy_family(4);
  for (std::uint64_t k = 0; k < 16; ++k) {
    Oracle o = Oracle::keyed(fam, Assignment::from_index(4, k));
    REQUIRE(o.data_circuit().has_value());
    REQUIRE(nlmc::count_and(*o.data_circuit()) <= fam.and_count);
    const TruthTable h = nlmc::query_restriction(o, 4);
    REQUIRE(nlmc::mc_exact(h).value <= fam.and_count);
  }
}

TEST_CASE("oracle modes") {
  // Keyed: the key must leave data inputs.
  const nlmc::ToyFamily fam = nlmc::toy_family(2);
  CHECK_THROWS_AS(Oracle::keyed(fam.circuit, Assignment::from_index(4, 0)), nlmc::DomainError);
  CHECK_THROWS_AS(Oracle::keyed(fam, Assignment::from_index(3, 0)), nlmc::DomainError);

  // Table-backed: answers are the table bits; queries are counted.
  Oracle t = Oracle::from_table(TruthTable::from_text(2, "0110"));
  CHECK(t.query(0) == 0);
  CHECK(t.query(1) == 1);
  CHECK(t.query_count() == 2);
  CHECK_THROWS_AS(t.query(4), nlmc::DomainError);

  // Random: deterministic per seed, stable across repeat queries.
  Oracle r1 = Oracle::random_function(3, 11);
  Oracle r2 = Oracle::random_function(3, 11);
  for (std::uint64_t i = 0; i < 8; ++i) REQUIRE(r1.query(i) == r2.query(i));
  const int first = r1.query(5);
  CHECK(r1.query(5) == first);

  // Different seeds eventually differ.
  bool differs = false;
  for (std::uint64_t seed = 12; seed < 20 && !differs; ++seed) {
    Oracle a = Oracle::random_function(3, 11);
    Oracle b = Oracle::random_function(3, seed);
    for (std::uint64_t i = 0; i < 8; ++i) differs = differs || a.query(i) != b.query(i);
  }
  CHECK(differs);
}

TEST_CASE("restriction query hits exactly the prefix cube") {
  // Oracle over 4 data bits; restriction width 2 reads indices 0..3 only.
  Oracle o = Oracle::from_table(nlmc::random_table(4, 77));
  const TruthTable h = nlmc::query_restriction(o, 2);
  CHECK(h.n() == 2);
  CHECK(o.query_count() == 4);
  Oracle o2 = Oracle::from_table(nlmc::random_table(4, 77));
  for (std::uint64_t i = 0; i < 4; ++i) REQUIRE(h.bit(i) == o2.query(i));
  CHECK_THROWS_AS(nlmc::query_restriction(o, 5), nlmc::DomainError);
}

TEST_CASE("exact distinguisher golden cases") {
  DistinguisherConfig cfg;
  cfg.s = 3;

  // Affine oracle: complexity 0, never flagged.
  for (int budget : {0, 1, 4}) {
    cfg.and_budget = budget;
    Oracle o = Oracle::from_table(nlmc::affine_table(0b101, 1, 3));
    CHECK(nlmc::distinguish_exact(o, cfg) == 0);
  }

  // Triple product x1x2x3 has complexity 2: flagged iff budget < 2.
  TruthTable triple(3);
  triple.set_bit(7, 1);
  cfg.and_budget = 1;
  Oracle o1 = Oracle::from_table(triple);
  CHECK(nlmc::distinguish_exact(o1, cfg) == 1);
  cfg.and_budget = 2;
  Oracle o2 = Oracle::from_table(triple);
  CHECK(nlmc::distinguish_exact(o2, cfg) == 0);
}

TEST_CASE("keyed family members are never flagged at their own budget") {
  const nlmc::ToyFamily fam = nlmc::toy_family(4);
  DistinguisherConfig cfg;
  cfg.s = 4;
  cfg.and_budget = fam.and_count;
  for (std::uint64_t k = 0; k < 16; ++k) {
    Oracle o = Oracle::keyed(fam, Assignment::from_index(4, k));
    REQUIRE(nlmc::distinguish_exact(o, cfg) == 0);
  }
}

TEST_CASE("approximator validation enforces the contract") {
  CHECK_NOTHROW(nlmc::scaled_exact_approximator(1.0));
  CHECK_NOTHROW(nlmc::scaled_exact_approximator(2.0));
  CHECK_THROWS_AS(nlmc::scaled_exact_approximator(0.9), nlmc::DomainError);

  // Undershooting breaks the lower end of [exact, rho*exact].
  CHECK_THROWS_AS(nlmc::ValidatedApproximator([](const TruthTable&) { return 0.0; }, 2.0),
                  nlmc::DomainError);
  // Overshooting breaks the upper end.
  CHECK_THROWS_AS(
      nlmc::ValidatedApproximator(
          [](const TruthTable& t) { return 3.0 * nlmc::mc_exact(t).value; }, 2.0),
      nlmc::DomainError);
}

TEST_CASE("approximate distinguisher with rho=1 behaves exactly") {
  const nlmc::ValidatedApproximator exact = nlmc::scaled_exact_approximator(1.0);
  DistinguisherConfig cfg;
  cfg.s = 3;
  cfg.rho = 1.0;
  for (int budget : {0, 1, 2}) {
    cfg.and_budget = budget;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const TruthTable t = nlmc::random_table(3, seed);
      Oracle a = Oracle::from_table(t);
      Oracle b = Oracle::from_table(t);
      REQUIRE(nlmc::distinguish_approx(a, cfg, exact) == nlmc::distinguish_exact(b, cfg));
    }
  }
}

TEST_CASE("approximate distinguisher flags an inflated hard function") {
  // Triple product: exact 2, inflated answer 4 >= T = (0+1)*2.
  const nlmc::ValidatedApproximator doubled = nlmc::scaled_exact_approximator(2.0);
  TruthTable triple(3);
  triple.set_bit(7, 1);
  DistinguisherConfig cfg;
  cfg.s = 3;
  cfg.and_budget = 0;
  cfg.rho = 2.0;
  Oracle o = Oracle::from_table(triple);
  CHECK(nlmc::distinguish_approx(o, cfg, doubled) == 1);

  // Same shape one level down: majority has exact complexity 1, inflated 2,
  // still at threshold T=2 for budget 0.
  Oracle maj = Oracle::from_table(TruthTable::from_text(3, "00010111"));
  CHECK(nlmc::distinguish_approx(maj, cfg, doubled) == 1);

  DistinguisherConfig mismatched = cfg;
  mismatched.rho = 3.0;
  Oracle o2 = Oracle::from_table(triple);
  CHECK_THROWS_AS(nlmc::distinguish_approx(o2, mismatched, doubled), nlmc::DomainError);
}

TEST_CASE("keyed arm stays silent under an inflating approximator") {
  // approx(h) <= rho*B < (B+1)*rho = T for every key.
  const nlmc::ToyFamily fam = nlmc::toy_family(4);
  const nlmc::ValidatedApproximator doubled = nlmc::scaled_exact_approximator(2.0);
  DistinguisherConfig cfg;
  cfg.s = 4;
  cfg.and_budget = fam.and_count;
  cfg.rho = 2.0;
  for (std::uint64_t k = 0; k < 16; ++k) {
    Oracle o = Oracle::keyed(fam, Assignment::from_index(4, k));
    REQUIRE(nlmc::distinguish_approx(o, cfg, doubled) == 0);
  }
}

TEST_CASE("experiment: keyed arm is exactly zero and the random arm is calibrated") {
  DistinguisherConfig cfg;
  cfg.s = 2;
  cfg.and_budget = 0;
  const nlmc::ExperimentReport rep = nlmc::run_experiment(4, cfg, 400, 2024);
  CHECK(rep.freq_keyed == 0.0);
  CHECK(rep.family_and_count <= cfg.and_budget);
  CHECK(rep.census_tail_count == 8);
  CHECK(rep.census_total == 16);
  // Binomial check at 4 sigma, p = 1/2, N = 400.
  const double sigma = std::sqrt(0.5 * 0.5 / 400.0);
  CHECK(std::abs(rep.freq_random - rep.census_tail) <= 4.0 * sigma);
  CHECK(rep.advantage == rep.freq_random - rep.freq_keyed);
}

TEST_CASE("experiment with the budget above the census maximum has zero advantage") {
  DistinguisherConfig cfg;
  cfg.s = 3;
  cfg.and_budget = 2;  // max complexity over B_3
  const nlmc::ExperimentReport rep = nlmc::run_experiment(4, cfg, 150, 99);
  CHECK(rep.freq_keyed == 0.0);
  CHECK(rep.freq_random == 0.0);
  CHECK(rep.advantage == 0.0);
  CHECK(rep.census_tail_count == 0);
}

TEST_CASE("experiment reports are deterministic in the seed") {
  const DistinguisherConfig cfg;
  const nlmc::ExperimentReport a = nlmc::run_experiment(4, cfg, 50, 7);
  const nlmc::ExperimentReport b = nlmc::run_experiment(4, cfg, 50, 7);
  CHECK(a.freq_random == b.freq_random);
  CHECK(a.mc_random == b.mc_random);
  CHECK(a.mc_keyed == b.mc_keyed);
  const nlmc::ExperimentReport c = nlmc::run_experiment(4, cfg, 50, 8);
  CHECK((a.mc_random != c.mc_random || a.freq_random == c.freq_random));
}

TEST_CASE("experiment validates its inputs") {
  const DistinguisherConfig cfg;
  CHECK_THROWS_AS(nlmc::run_experiment(4, cfg, 0, 1), nlmc::DomainError);
  DistinguisherConfig wide = cfg;
  wide.s = 5;  // exact solver allows it, census does not
  CHECK_THROWS_AS(nlmc::run_experiment(4, wide, 10, 1), nlmc::DomainError);
}
