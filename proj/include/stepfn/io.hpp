#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stepfn/injury.hpp"
#include "stepfn/transducer.hpp"
#include "stepfn/truthtable.hpp"

namespace stepfn {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// Table file: "n=<dim>" on the first line, the 2^n value characters on the
// second; or the single-line form "n=<dim> hex=<digits>" for larger tables.
TruthTable parse_table_text(const std::string& text);
std::string emit_table(const TruthTable& t);

// One pipeline stage per line, exactly the stage's describe() string.
Transducer parse_stage_line(const std::string& line, int line_no = 0);

PostMap parse_post_line(const std::string& line, int line_no = 0);
std::string emit_post_line(const PostMap& post);

// Certificate: header, the problem instance, the numbered stage list (two
// space indent), then the answer map line. Byte-stable across emit/parse.
std::string emit_certificate(const WitnessPair& w);
WitnessPair parse_certificate(const std::string& text);

std::string emit_opponents(const std::vector<Opponent>& ops);
std::vector<Opponent> parse_opponents(const std::string& text);

std::string emit_quadruples(const std::vector<Quadruple>& quads);
std::vector<Quadruple> parse_quadruples(const std::string& text);

// Hypercube diagram: vertices grouped by weight, true vertices filled, the
// optimal chain edges highlighted.
std::string dot_diagram(const TruthTable& f);

}  // namespace stepfn
