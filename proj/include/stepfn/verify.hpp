#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stepfn/cantor.hpp"
#include "stepfn/transducer.hpp"
#include "stepfn/truthtable.hpp"

namespace stepfn {

enum class Outcome { Pass, Fail, Undetermined };

struct SampleFailure {
  std::vector<CantorPoint> inputs;
  int expected = 0;
  int got = 0;
};

struct UndeterminedEntry {
  std::vector<CantorPoint> inputs;
  int depth = 0;  // deepest column budget that still failed to stabilize
};

struct VerificationReport {
  int samples = 0;
  std::vector<SampleFailure> failures;
  std::vector<UndeterminedEntry> undetermined;
  std::optional<Outcome> boundary_outcome;

  bool pass() const;
  int exit_code() const;  // 0 pass, 1 any failure, 2 undetermined only
  std::string text() const;
};

// Replays every sample through the witness and compares against direct
// evaluation of both step functions. Column budgets escalate per sample;
// a sample that never stabilizes is reported, never silently passed.
VerificationReport check_witness(
    const WitnessPair& w, const TruthTable& f, const TruthTable& g,
    const CantorPoint& alpha,
    const std::vector<std::vector<CantorPoint>>& samples);

// For a 1-to-1 witness claimed between two single thresholds: the forward
// map must send alpha to beta exactly, and a strong answer map must be the
// identity.
Outcome boundary_check(const WitnessPair& w, const CantorPoint& alpha,
                       const CantorPoint& beta, int depth);

// Deterministic-by-seed sample tuples: the threshold itself, its prefix
// family padded with zeros and ones, every truth-vector cell, then random
// short-period points up to the requested count.
std::vector<std::vector<CantorPoint>> sample_points(const CantorPoint& alpha,
                                                    int n, int count,
                                                    std::uint64_t seed);

// Independent oracle: maximum alternation count over all strict chains in
// the subset order, by explicit memoized enumeration. Refuses n > 4.
int brute_force_l(const TruthTable& f);

struct Counterexample {
  std::vector<CantorPoint> inputs;
  int expected = 0;
  int got = 0;
};

// Heuristic search: replays boundary tuples, and wherever the answer locks
// at some finite depth, drags one high coordinate below the threshold past
// that depth and re-checks. The budget counts witness replays.
std::optional<Counterexample> counterexample_search(const WitnessPair& w,
                                                    const TruthTable& f,
                                                    const TruthTable& g,
                                                    const CantorPoint& alpha,
                                                    int budget);

}  // namespace stepfn
