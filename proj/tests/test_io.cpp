#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "stepfn/io.hpp"
#include "stepfn/normalize.hpp"

using namespace stepfn;

namespace {

TruthTable fig_table() { return TruthTable::from_bits(3, "01011011"); }

int error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("table files round-trip through emit and parse") {
  TruthTable t = fig_table();
  std::string text = emit_table(t);
  CHECK(text == "n=3\n01011011\n");
  CHECK(parse_table_text(text) == t);

  // Whitespace and blank lines around both lines are tolerated.
  CHECK(parse_table_text("\n\n  n=2  \n\n  0110  \n") ==
        TruthTable::from_bits(2, "0110"));
}

TEST_CASE("the fixture table file parses to the expected function") {
  std::ifstream in(std::string(FIXTURES_DIR) + "/fig2.table");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_table_text(ss.str()) == fig_table());
}

TEST_CASE("hex headers expand most-significant nibble bit first") {
  CHECK(parse_table_text("n=3 hex=5b") == fig_table());
  CHECK(parse_table_text("n=2 hex=6") == TruthTable::from_bits(2, "0110"));
  // A nibble covers more than 2^1 bits; the low bits are the payload.
  CHECK(parse_table_text("n=1 hex=2") == TruthTable::from_bits(1, "10"));

  CHECK_THROWS_WITH_AS(parse_table_text("n=3 hex=5"),
                       "line 1: hex payload has the wrong size", ParseError);
  CHECK_THROWS_WITH_AS(parse_table_text("n=2 hex=g1"),
                       "line 1: bad hex digit", ParseError);
}

TEST_CASE("table errors carry the offending line number") {
  CHECK_THROWS_WITH_AS(parse_table_text(""), "line 1: empty table file",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_table_text("m=3\n01011011\n"),
                       "line 1: table header must start with n=", ParseError);
  CHECK_THROWS_WITH_AS(parse_table_text("n=17 hex=00"),
                       "line 1: dimension out of range", ParseError);
  CHECK_THROWS_WITH_AS(parse_table_text("n=2\n011\n"),
                       "line 2: expected 4 value characters", ParseError);
  CHECK_THROWS_WITH_AS(parse_table_text("n=2\n"),
                       "line 1: missing table value line", ParseError);

  // Leading blank lines shift the reported numbers accordingly.
  CHECK(error_line([] { parse_table_text("\nn=2\n01x0\n"); }) == 3);
  CHECK(error_line([] { parse_table_text("\n\nbad header\n"); }) == 3);
}

TEST_CASE("every stage line survives a parse and re-describe") {
  const char* lines[] = {
      "identity n=3",
      "bit_flip",
      "wires n=2 map=2,1",
      "max",
      "min",
      "maxmin",
      "switch_on_split",
      "sorted n=4",
      "wtow n=3 k0=2",
      "wtow1 n=4 k0=1",
      "flip n=3 v=110",
      "chain_embed n=3 add=1,3,2",
      "const_plug n=3 idx=2 bits=1",
      "const_plug n=2 idx= bits=",
      "pad_ones from=1 to=3",
      "pad_zeros from=2 to=4",
      "keep_smallest n=3 l=2",
      "stall n=2",
      "interval_pre thresholds=(01),(10) seps=1(0):101(0)",
      "product( max ; min )",
      "product( product( max ; min ) ; bit_flip )",
  };
  for (const char* line : lines) {
    CAPTURE(line);
    Transducer t = parse_stage_line(line, 1);
    REQUIRE(t.stages().size() == 1);
    CHECK(t.stages().front()->describe() == line);
  }

  // Indentation from certificate bodies is stripped before matching.
  CHECK(parse_stage_line("  max  ", 1).stages().front()->describe() == "max");
}

TEST_CASE("stage parse failures name the problem and the line") {
  CHECK_THROWS_WITH_AS(parse_stage_line("frobnicate n=2", 4),
                       "line 4: unknown stage 'frobnicate'", ParseError);
  CHECK_THROWS_WITH_AS(parse_stage_line("", 2), "line 2: empty stage line",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_stage_line("wires n=2", 9), "line 9: missing map=",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_stage_line("wtow n=3 k0=x", 5),
                       "line 5: expected an integer, got 'x'", ParseError);
  CHECK_THROWS_WITH_AS(parse_stage_line("chain_embed n=2 add=1", 1),
                       "line 1: chain_embed needs n added coordinates",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_stage_line("chain_embed n=2 add=1,1", 1),
                       "line 1: bad added coordinate list", ParseError);
  CHECK_THROWS_WITH_AS(parse_stage_line("product( max )", 3),
                       "line 3: malformed product stage", ParseError);
  // Argument validation inside the builder is surfaced with context.
  CHECK_THROWS_AS(parse_stage_line("wtow n=3 k0=5", 1), ParseError);
  CHECK(error_line([] { parse_stage_line("wtow n=3 k0=5", 7); }) == 7);
}

TEST_CASE("post lines round-trip for both answer kinds") {
  for (const char* line : {"post strong map=0,1", "post strong map=1,0",
                           "post plain thresholds=(01),(10) seps=1(0):101(0)",
                           "post plain thresholds=(01) seps="}) {
    CAPTURE(line);
    PostMap p = parse_post_line(line, 1);
    CHECK(emit_post_line(p) == line);
  }
  CHECK(parse_post_line("post strong map=1,0", 1).kind ==
        PostMap::Kind::Strong);
  CHECK(parse_post_line("post plain thresholds=(01) seps=", 1).kind ==
        PostMap::Kind::Plain);

  CHECK_THROWS_WITH_AS(parse_post_line("post strong map=2,0", 1),
                       "line 1: strong map must list two bits", ParseError);
  CHECK_THROWS_WITH_AS(parse_post_line("post plain thresholds=(01),1(01) seps=",
                                       1),
                       "line 1: need one separator per threshold pair",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_post_line("post weird", 1),
                       "line 1: post kind must be strong or plain", ParseError);
  CHECK_THROWS_WITH_AS(parse_post_line("nonsense", 6),
                       "line 6: expected a post line", ParseError);
}

TEST_CASE("a compiled certificate is byte-stable across emit and parse") {
  TruthTable f = TruthTable::from_bits(2, "0111");
  TruthTable g = TruthTable::from_bits(2, "0001");
  WitnessPair w = compile_reduction(f, g, CantorPoint("", "01")).witness;
  std::string text = emit_certificate(w);
  CHECK(text ==
        "certificate v1\n"
        "source n=2 table=0111\n"
        "target n=2 table=0001\n"
        "alpha (01)\n"
        "stages 5\n"
        "  flip n=2 v=10\n"
        "  flip n=2 v=01\n"
        "  keep_smallest n=2 l=1\n"
        "  pad_ones from=1 to=2\n"
        "  chain_embed n=2 add=1,2\n"
        "post strong map=0,1\n");

  WitnessPair back = parse_certificate(text);
  CHECK(emit_certificate(back) == text);
  REQUIRE(back.source.has_value());
  REQUIRE(back.target.has_value());
  REQUIRE(back.alpha.has_value());
  CHECK(*back.source == f);
  CHECK(*back.target == g);
  CHECK(back.alpha->str() == "(01)");
  CHECK(back.pre.stages().size() == 5);
  CHECK(back.pre.arity_in() == 2);
  CHECK(back.pre.arity_out() == 2);
  CHECK(back.post.kind == PostMap::Kind::Strong);
}

TEST_CASE("certificates without instance headers stay minimal") {
  WitnessPair w;
  w.pre = build_bit_flip();
  w.post = PostMap::strong_identity();
  std::string text = emit_certificate(w);
  CHECK(text ==
        "certificate v1\n"
        "stages 1\n"
        "  bit_flip\n"
        "post strong map=0,1\n");
  WitnessPair back = parse_certificate(text);
  CHECK(!back.source.has_value());
  CHECK(!back.target.has_value());
  CHECK(!back.alpha.has_value());
  CHECK(emit_certificate(back) == text);
}

TEST_CASE("certificate structure violations are rejected with context") {
  CHECK_THROWS_WITH_AS(parse_certificate("bogus\n"),
                       "line 1: expected 'certificate v1'", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_certificate("certificate v1\npost strong map=0,1\n"),
      "line 2: post must follow the stage list", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_certificate("certificate v1\nstages 0\npost strong map=0,1\n"),
      "line 2: certificate needs stages", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_certificate("certificate v1\nwidget 3\n"),
      "line 2: unknown certificate section 'widget'", ParseError);

  std::string good =
      "certificate v1\nstages 1\n  bit_flip\npost strong map=0,1\n";
  CHECK_NOTHROW(parse_certificate(good));

  std::string truncated = good.substr(0, good.find("post"));
  CHECK_THROWS_WITH_AS(parse_certificate(truncated),
                       "line 4: certificate ended before the post line",
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_certificate(good + "extra stuff\n"),
                       "line 5: trailing content after post line", ParseError);

  // Stage arities must agree along the pipeline; max narrows 2 ports to 1.
  std::string mismatched =
      "certificate v1\nstages 2\n  max\n  max\npost strong map=0,1\n";
  CHECK_THROWS_AS(parse_certificate(mismatched), ParseError);
  CHECK(error_line([&] { parse_certificate(mismatched); }) == 4);
  try {
    parse_certificate(mismatched);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("stage does not fit the pipeline") !=
          std::string::npos);
  }
}

TEST_CASE("opponent lists round-trip including stage bodies") {
  std::vector<Opponent> ops;
  ops.push_back(Opponent{build_identity(1), PostMap::strong_identity()});
  ops.push_back(Opponent{build_bit_flip(), PostMap::strong_identity()});
  std::string text = emit_opponents(ops);
  CHECK(text ==
        "opponents 2\n"
        "opponent 0\n"
        "pre 1\n"
        "  identity n=1\n"
        "post strong map=0,1\n"
        "opponent 1\n"
        "pre 1\n"
        "  bit_flip\n"
        "post strong map=0,1\n");

  std::vector<Opponent> back = parse_opponents(text);
  REQUIRE(back.size() == 2);
  CHECK(emit_opponents(back) == text);
  CHECK(back[0].pre.stages().front()->describe() == "identity n=1");
  CHECK(back[1].pre.stages().front()->describe() == "bit_flip");

  CHECK_THROWS_WITH_AS(
      parse_opponents("opponents 1\nopponent 1\npre 1\n  bit_flip\n"
                      "post strong map=0,1\n"),
      "line 2: opponents must be listed in order", ParseError);
  CHECK_THROWS_WITH_AS(parse_opponents(text + "junk\n"),
                       "line 10: trailing content", ParseError);
  CHECK(parse_opponents("opponents 0\n").empty());
}

TEST_CASE("quadruple lists round-trip with their inline tables") {
  Quadruple q;
  q.g = TruthTable::from_bits(2, "0110");
  q.f = TruthTable::from_bits(2, "0111");
  q.op = Opponent{build_identity(2), PostMap::strong_identity()};
  std::string text = emit_quadruples({q});
  CHECK(text ==
        "quadruples 1\n"
        "quadruple 0\n"
        "g n=2 table=0110\n"
        "f n=2 table=0111\n"
        "pre 1\n"
        "  identity n=2\n"
        "post strong map=0,1\n");

  std::vector<Quadruple> back = parse_quadruples(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].g == q.g);
  CHECK(back[0].f == q.f);
  CHECK(emit_quadruples(back) == text);

  CHECK_THROWS_WITH_AS(
      parse_quadruples("quadruples 1\nquadruple 0\ng n=2 table=011\n"),
      "line 3: table size does not match dimension", ParseError);
  CHECK_THROWS_WITH_AS(
      parse_quadruples("quadruples 1\nquadruple 4\n"),
      "line 2: quadruples must be listed in order", ParseError);
}

TEST_CASE("the cube diagram shades true vertices and highlights the chain") {
  std::string dot = dot_diagram(fig_table());
  CHECK(dot.find("digraph cube {") == 0);
  CHECK(dot.find("\"110\" [fillcolor=gray75];") != std::string::npos);
  CHECK(dot.find("\"101\" [fillcolor=white];") != std::string::npos);
  CHECK(dot.find("rank=same") != std::string::npos);

  // The chain 000 -> 100 -> 101 -> 111 gets exactly its three edges in red.
  for (const char* edge :
       {"\"000\" -> \"100\" [color=red, penwidth=2];",
        "\"100\" -> \"101\" [color=red, penwidth=2];",
        "\"101\" -> \"111\" [color=red, penwidth=2];"}) {
    CAPTURE(edge);
    CHECK(dot.find(edge) != std::string::npos);
  }
  size_t reds = 0;
  for (size_t at = dot.find("color=red"); at != std::string::npos;
       at = dot.find("color=red", at + 1))
    ++reds;
  CHECK(reds == 3);
  CHECK(dot.find("\"000\" -> \"010\";") != std::string::npos);
}
