#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "stepfn/truthtable.hpp"

using namespace stepfn;

TEST_CASE("vertex display string puts coordinate 1 first") {
  Vertex v(3, 0b011);  // coordinates 1 and 2
  CHECK(v.str() == "110");
  CHECK(v.weight() == 2);
  CHECK(v.get(1));
  CHECK(v.get(2));
  CHECK(!v.get(3));

  CHECK(Vertex::parse(3, "110") == v);
  CHECK(Vertex::parse(3, "100").bits == 1u);
  CHECK(Vertex::parse(3, "010").bits == 2u);
  CHECK(Vertex::parse(3, "001").bits == 4u);
}

TEST_CASE("vertex subset and covering relations") {
  Vertex bot(3, 0), a(3, 1), ab(3, 3), abc(3, 7);
  CHECK(bot.subset_of(a));
  CHECK(a.subset_of(ab));
  CHECK(!ab.subset_of(a));
  CHECK(a.covers(bot));
  CHECK(ab.covers(a));
  CHECK(!abc.covers(a));    // two bits added
  CHECK(!a.covers(a));

  CHECK(a.with(2, true) == ab);
  CHECK(ab.with(1, false) == Vertex(3, 2));
}

TEST_CASE("table bits round-trip and value lookup by vertex") {
  auto f = TruthTable::from_bits(2, "0111");
  CHECK(f.n() == 2);
  CHECK(f.size() == 4);
  CHECK(f.bits() == "0111");
  CHECK(!f.value(Vertex::parse(2, "00")));
  CHECK(f.value(Vertex::parse(2, "10")));
  CHECK(f.value(Vertex::parse(2, "01")));
  CHECK(f.value(Vertex::parse(2, "11")));

  f.set(0, true);
  CHECK(f.bits() == "1111");
}

TEST_CASE("alternation length of the standard connectives") {
  CHECK(alternation_length(TruthTable::from_bits(2, "0111")) == 1);  // or
  CHECK(alternation_length(TruthTable::from_bits(2, "0001")) == 1);  // and
  CHECK(alternation_length(TruthTable::from_bits(2, "1011")) == 2);
  CHECK(alternation_length(TruthTable::from_bits(2, "1101")) == 2);
  CHECK(alternation_length(TruthTable::from_bits(2, "1001")) == 2);
  CHECK(alternation_length(TruthTable::from_bits(2, "0110")) == 2);
  CHECK(alternation_length(TruthTable::from_bits(1, "00")) == 0);
  CHECK(alternation_length(TruthTable::from_bits(1, "11")) == 0);
  CHECK(alternation_length(TruthTable::from_bits(1, "01")) == 1);
}

TEST_CASE("parity alternates on every covering edge") {
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(alternation_length(make_parity(n)) == n);
  }
  CHECK(make_parity(2).bits() == "0110");
  CHECK(make_parity(3).bits() == "01101001");
}

TEST_CASE("the running three-variable example has length three") {
  auto f = TruthTable::from_bits(3, "01011011");
  CHECK(alternation_length(f) == 3);

  auto chain = optimal_covering_chain(f);
  REQUIRE(chain.vertices.size() == 4);
  CHECK(chain.vertices[0].str() == "000");
  CHECK(chain.vertices[1].str() == "100");
  CHECK(chain.vertices[2].str() == "101");
  CHECK(chain.vertices[3].str() == "111");
  CHECK(chain.word == "0101");
  CHECK(chain.added_coord(1) == 1);
  CHECK(chain.added_coord(2) == 3);
  CHECK(chain.added_coord(3) == 2);
}

TEST_CASE("optimal chains are valid and realize the table's length") {
  // Every 3-variable table: the chain must climb one coordinate per step,
  // read off the table along the way, and alternate exactly l times.
  for (uint32_t code = 0; code < 256; ++code) {
    TruthTable f(3);
    for (uint32_t i = 0; i < 8; ++i) f.set(i, (code >> i) & 1);
    auto chain = optimal_covering_chain(f);
    REQUIRE(chain.vertices.size() == 4);
    CHECK(chain.vertices[0].weight() == 0);
    for (int i = 1; i <= 3; ++i)
      CHECK(chain.vertices[i].covers(chain.vertices[i - 1]));
    std::string word;
    for (const auto& v : chain.vertices) word += f.value(v) ? '1' : '0';
    CHECK(word == chain.word);
    CHECK(word_alternations(chain.word) == alternation_length(f));
  }
}

TEST_CASE("word alternation counting") {
  CHECK(word_alternations("0000") == 0);
  CHECK(word_alternations("0101") == 3);
  CHECK(word_alternations("0011") == 1);
  CHECK(word_alternations("1001") == 2);
  CHECK(word_alternations("0") == 0);
}

TEST_CASE("classification of the running example") {
  auto c = classify(TruthTable::from_bits(3, "01011011"));
  CHECK(c.complete);
  CHECK(!c.homogeneous);
  CHECK(c.homogeneous_levels == std::vector<int>{0, 3});
}

TEST_CASE("level-constant tables are homogeneous") {
  auto h = make_H(4, "11010");
  auto c = classify(h);
  CHECK(c.homogeneous);
  CHECK(c.homogeneous_levels == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(alternation_length(h) == word_alternations("11010"));

  // Completeness means the length cannot be raised any further.
  CHECK(classify(make_parity(4)).complete);
  CHECK(!classify(TruthTable::from_bits(2, "0111")).complete);
}

TEST_CASE("staircase tables and their level words") {
  CHECK(make_K(2, 1).bits() == "0001");
  CHECK(level_word_K(4, 2) == "00010");
  CHECK(level_word_K(3, 3) == "0101");
  for (int n = 1; n <= 5; ++n)
    for (int l = 0; l <= n; ++l) {
      CAPTURE(n);
      CAPTURE(l);
      auto k = make_K(n, l);
      CHECK(alternation_length(k) == l);
      CHECK(k == make_H(n, level_word_K(n, l)));
    }
  // Full-length staircase is parity up to the leading constant run.
  CHECK(make_K(3, 3) == make_parity(3));
}

TEST_CASE("plugging coordinates") {
  auto andt = TruthTable::from_bits(2, "0001");
  CHECK(fix_coords(andt, {1}, {1}).bits() == "0011");
  CHECK(fix_coords(andt, {1}, {0}).bits() == "0000");
  CHECK(fix_coords(make_parity(3), {2, 3}, {1, 0}).bits() == "10101010");
  CHECK(fix_coords(andt, {}, {}) == andt);
  CHECK_THROWS_AS(fix_coords(andt, {3}, {0}), std::invalid_argument);
}

TEST_CASE("plugging can only shrink the alternation length") {
  for (uint32_t code = 0; code < 256; ++code) {
    TruthTable f(3);
    for (uint32_t i = 0; i < 8; ++i) f.set(i, (code >> i) & 1);
    int l = alternation_length(f);
    for (int idx = 1; idx <= 3; ++idx)
      for (uint8_t b = 0; b <= 1; ++b)
        CHECK(alternation_length(fix_coords(f, {idx}, {b})) <= l);
  }
}

TEST_CASE("recognizing tables that arise by plugging and negating") {
  auto andt = TruthTable::from_bits(2, "0001");
  auto proj = fix_coords(andt, {1}, {1});  // second coordinate passthrough

  auto w = trivially_comparable(proj, andt);
  REQUIRE(w.has_value());
  CHECK(w->idx == std::vector<int>{1});
  CHECK(w->bits == std::vector<uint8_t>{1});
  CHECK(!w->negated);

  auto wn = trivially_comparable(complement(proj), andt);
  REQUIRE(wn.has_value());
  CHECK(wn->negated);

  auto self = trivially_comparable(andt, andt);
  REQUIRE(self.has_value());
  CHECK(self->idx.empty());

  // Parity does not arise from or by plugging: lengths already forbid it.
  CHECK(!trivially_comparable(make_parity(2),
                              TruthTable::from_bits(2, "0111")));
}

TEST_CASE("flip hypotheses reject the staircase but accept the worked case") {
  CHECK(!check_flip_conditions(make_K(3, 1), Vertex::parse(3, "110")));
  CHECK(check_flip_conditions(TruthTable::from_bits(3, "01001111"),
                              Vertex::parse(3, "001")));
}

TEST_CASE("complement flips every entry") {
  auto f = TruthTable::from_bits(2, "0110");
  CHECK(complement(f).bits() == "1001");
  CHECK(complement(complement(f)) == f);
  CHECK(alternation_length(complement(f)) == alternation_length(f));
}
