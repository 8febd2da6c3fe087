#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "stepfn/normalize.hpp"
#include "stepfn/verify.hpp"

using namespace stepfn;

namespace {

const CantorPoint kAlpha = CantorPoint::parse("(01)");

WitnessPair or_into_and() {
  return compile_reduction(TruthTable::from_bits(2, "0111"),
                           TruthTable::from_bits(2, "0001"), kAlpha)
      .witness;
}

}  // namespace

TEST_CASE("the chain enumerator agrees with the covering-edge recursion") {
  for (int n = 1; n <= 3; ++n) {
    for (uint32_t code = 0; code < (uint32_t{1} << (1u << n)); ++code) {
      TruthTable f(n);
      for (uint32_t i = 0; i < f.size(); ++i) f.set(i, (code >> i) & 1);
      CAPTURE(n);
      CAPTURE(f.bits());
      CHECK(brute_force_l(f) == alternation_length(f));
    }
  }
  CHECK(brute_force_l(make_parity(4)) == 4);
  CHECK_THROWS_AS(brute_force_l(TruthTable(5)), std::invalid_argument);
}

TEST_CASE("sampling is seeded, covers every cell, and includes the threshold") {
  auto a = sample_points(kAlpha, 2, 64, 17);
  auto b = sample_points(kAlpha, 2, 64, 17);
  auto c = sample_points(kAlpha, 2, 64, 18);
  CHECK(a == b);
  CHECK(a != c);
  REQUIRE(a.size() == 64);
  for (const auto& t : a) REQUIRE(t.size() == 2);

  CHECK(a[0] == std::vector<CantorPoint>{kAlpha, kAlpha});
  auto zero = CantorPoint::zeros();
  CHECK(a[1] == std::vector<CantorPoint>{zero, zero});
  CHECK(a[2] == std::vector<CantorPoint>{kAlpha, zero});
  CHECK(a[3] == std::vector<CantorPoint>{zero, kAlpha});
  CHECK(a[4] == std::vector<CantorPoint>{kAlpha, kAlpha});

  CHECK_THROWS_AS(sample_points(CantorPoint::zeros(), 2, 8, 0),
                  std::invalid_argument);
}

TEST_CASE("a compiled witness verifies on the full sample set") {
  auto w = or_into_and();
  auto f = TruthTable::from_bits(2, "0111");
  auto g = TruthTable::from_bits(2, "0001");
  auto report = check_witness(w, f, g, kAlpha, sample_points(kAlpha, 2, 64, 5));
  CHECK(report.samples == 64);
  CHECK(report.pass());
  CHECK(report.exit_code() == 0);
  CHECK(report.text().find("status=pass") != std::string::npos);
}

TEST_CASE("a corrupted answer map is caught with a concrete counterexample") {
  auto w = or_into_and();
  w.post = PostMap::strong_negation();
  auto f = TruthTable::from_bits(2, "0111");
  auto g = TruthTable::from_bits(2, "0001");
  auto report = check_witness(w, f, g, kAlpha, sample_points(kAlpha, 2, 64, 5));
  CHECK(!report.pass());
  CHECK(report.exit_code() == 1);
  REQUIRE(!report.failures.empty());
  // every recorded failure replays: the expected side really is the direct
  // evaluation, and the claimed answer really differs
  for (const auto& fail : report.failures) {
    CHECK(fail.expected == (eval_sF(f, kAlpha, fail.inputs) ? 1 : 0));
    CHECK(fail.got != fail.expected);
  }
  auto text = report.text();
  CHECK(text.find("fail inputs=") != std::string::npos);
  CHECK(text.find("status=fail") != std::string::npos);
}

TEST_CASE("a stalling pre-processor is reported, not passed") {
  WitnessPair w;
  w.pre = build_stall(2);
  w.post = PostMap::strong_identity();
  auto f = TruthTable::from_bits(2, "0110");
  auto samples = sample_points(kAlpha, 2, 8, 1);
  auto report = check_witness(w, f, f, kAlpha, samples);
  CHECK(report.failures.empty());
  CHECK(report.undetermined.size() == samples.size());
  CHECK(report.exit_code() == 2);
  CHECK(report.text().find("status=undetermined") != std::string::npos);
}

TEST_CASE("witness arity must match the claimed tables") {
  auto w = or_into_and();
  auto f3 = TruthTable::from_bits(3, "01110111");
  auto g = TruthTable::from_bits(2, "0001");
  CHECK_THROWS_AS(check_witness(w, f3, g, kAlpha, {}), std::invalid_argument);
  CHECK_THROWS_AS(
      check_witness(w, g, g, CantorPoint::zeros(), {}), std::invalid_argument);
}

TEST_CASE("boundary law holds for the identity and the bit flip") {
  WitnessPair ident;
  ident.pre = build_identity(1);
  ident.post = PostMap::strong_identity();
  CHECK(boundary_check(ident, kAlpha, kAlpha, 4096) == Outcome::Pass);

  WitnessPair flip;
  flip.pre = build_bit_flip();
  flip.post = PostMap::strong_identity();
  // the complement machine carries 0101... onto 1010...
  CHECK(boundary_check(flip, kAlpha, CantorPoint::parse("(10)"), 4096) ==
        Outcome::Pass);
}

TEST_CASE("boundary law rejects a mapped threshold that misses") {
  WitnessPair ident;
  ident.pre = build_identity(1);
  ident.post = PostMap::strong_identity();
  CHECK(boundary_check(ident, kAlpha, CantorPoint::parse("(10)"), 4096) ==
        Outcome::Fail);

  // a strong answer map that negates can never satisfy the strong law
  WitnessPair neg;
  neg.pre = build_identity(1);
  neg.post = PostMap::strong_negation();
  CHECK(boundary_check(neg, kAlpha, kAlpha, 4096) == Outcome::Fail);

  WitnessPair stall;
  stall.pre = build_stall(1);
  stall.post = PostMap::strong_identity();
  CHECK(boundary_check(stall, kAlpha, kAlpha, 64) == Outcome::Undetermined);

  WitnessPair wide = or_into_and();
  CHECK_THROWS_AS(boundary_check(wide, kAlpha, kAlpha, 64),
                  std::invalid_argument);
}

TEST_CASE("searching a sound witness finds nothing") {
  auto w = or_into_and();
  auto f = TruthTable::from_bits(2, "0111");
  auto g = TruthTable::from_bits(2, "0001");
  CHECK(!counterexample_search(w, f, g, kAlpha, 500).has_value());
}

TEST_CASE("searching a projection fake finds a refuting tuple") {
  // claims the parity pair only ever needs its first coordinate
  WitnessPair fake;
  fake.pre = build_wires(2, {1});
  fake.post = PostMap::strong_identity();
  auto f = TruthTable::from_bits(2, "0110");
  auto g = TruthTable::from_bits(1, "01");
  auto hit = counterexample_search(fake, f, g, kAlpha, 500);
  REQUIRE(hit.has_value());
  CHECK(hit->expected == (eval_sF(f, kAlpha, hit->inputs) ? 1 : 0));
  CHECK(hit->got != hit->expected);
}

TEST_CASE("search respects a zero budget") {
  auto w = or_into_and();
  auto f = TruthTable::from_bits(2, "0111");
  auto g = TruthTable::from_bits(2, "0001");
  CHECK(!counterexample_search(w, f, g, kAlpha, 0).has_value());
}
