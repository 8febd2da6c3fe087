#pragma once

#include <string>
#include <vector>

#include "stepfn/cantor.hpp"
#include "stepfn/transducer.hpp"
#include "stepfn/truthtable.hpp"

namespace stepfn {

struct FlipCertificate {
  Vertex v;
  bool from = false;   // value before the flip; it becomes !from
  int sweep_level = 0; // level the sweep was homogenizing
  bool conditions_ok = false;
};

struct NormalizeResult {
  TruthTable table;      // equals the canonical staircase table for l(f)
  bool negated = false;  // the flips act on the complemented table
  std::vector<FlipCertificate> flips;
};

// Certified rewrite of f (or its complement, see `negated`) into the
// canonical table with the same alternation length, by single-vertex flips
// that each preserve the alternation length.
NormalizeResult normalize_to_K(const TruthTable& f);

struct ShiftMove {
  bool up = false;    // false: duplicate-bottom move; true: drop-and-append move
  int k0 = 0;
  std::string word;   // level word after the move
};

// Move sequence rewriting one level word into another with the same
// alternation count (equal lengths required). Breadth-first over single
// moves, so the plan is valid, minimal, and deterministic.
std::vector<ShiftMove> word_shift_plan(const std::string& from,
                                       const std::string& to);

struct ReductionPlan {
  WitnessPair witness;
  std::vector<std::string> stage_lines;
  int l_source = 0;
  int l_target = 0;
};

// End-to-end witness for s^F <= s^G over one proper threshold; refused when
// l(F) > l(G).
ReductionPlan compile_reduction(const TruthTable& f, const TruthTable& g,
                                const CantorPoint& alpha);

enum class Comparison { SourceBelow, TargetBelow, Equivalent };

Comparison decide_sB(const TruthTable& f, const TruthTable& g);

}  // namespace stepfn
