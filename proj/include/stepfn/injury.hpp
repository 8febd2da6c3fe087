#pragma once

#include <set>
#include <string>
#include <vector>

#include "stepfn/cantor.hpp"
#include "stepfn/transducer.hpp"
#include "stepfn/truthtable.hpp"

namespace stepfn {

// Candidate reduction pair under attack, indexed by its list position.
struct Opponent {
  Transducer pre;
  PostMap post;
};

// Two mutually mirrored c.e. sets built against a finite opponent list.
// A carries the data: B(2n) = A(2n+1) and B(2n+1) = A(2n), and positions
// 4n+2, 4n+3 are in A from the start so both points stay proper.
struct InjuryState {
  int stage = 0;
  int requirement_count = 0;
  std::set<int> enumerated;   // elements of A beyond the fixed coding bits
  std::vector<int> markers;   // markers[k] for requirement k
  std::vector<int> init_counts;

  bool in_A(int x) const;
  bool in_B(int x) const;
  std::string alpha_prefix(int len) const;
  std::string beta_prefix(int len) const;
  CantorPoint alpha() const;  // exact current approximation
  CantorPoint beta() const;

  // Requirement k is down once one of its two marker positions entered its
  // set; a later re-initialization moves the markers and reopens it.
  bool requirement_satisfied(int k) const;

  void check_invariants() const;  // throws std::logic_error on violation
};

struct InjuryResult {
  InjuryState state;
  std::vector<std::string> log;
};

// Priority construction: requirement 2e defeats opponent e as a claimed
// reduction from the A-threshold to the B-threshold, requirement 2e+1 the
// other direction. Runs the stage loop with attention checks, the two
// enumeration actions, bulk fill below the stage, and re-initialization of
// lower-priority markers.
InjuryResult run_injury(const std::vector<Opponent>& opponents, int stages);

struct Quadruple {
  TruthTable g;  // claimed reducible side
  TruthTable f;  // claimed oracle side
  Opponent op;
};

struct DiagResult {
  // history[s][k] is the k-th prefix after stage s; every stage appends
  // exactly three bits to every tracked coordinate.
  std::vector<std::vector<std::string>> history;
  std::vector<std::string> log;
};

// Finite-extension diagonalization: stage s+1 defeats the s-th quadruple by
// probing its pre on the joint prefixes padded with 0 1^m and steering each
// coordinate with one of the three-bit extension rules.
DiagResult run_diagonalization(const std::vector<Quadruple>& quads, int stages,
                               int m_cap = 256);

}  // namespace stepfn
