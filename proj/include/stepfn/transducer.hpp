#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stepfn/cantor.hpp"
#include "stepfn/truthtable.hpp"

namespace stepfn {

// Output coordinate of a running machine. Starts out buffering explicit bits;
// after finitely many decisions it enters a terminal mode and the rest of the
// output is a verbatim (possibly complemented) copy of one input tail or a
// constant point.
struct PortState {
  enum class Mode { Buffering, Copy, Const };
  Mode mode = Mode::Buffering;
  std::string buffer;
  int src = -1;            // Copy: input coordinate, 0-based
  uint64_t offset = 0;     // Copy: first copied input position
  bool negate = false;     // Copy: complement the copied tail
  CantorPoint constant;    // Const: tail after the buffer

  bool terminal() const { return mode != Mode::Buffering; }
};

// One run's mutable state for a primitive stage.
class Machine {
public:
  virtual ~Machine() = default;
  // Consume one synchronized column: one bit per input coordinate.
  virtual void feed(const std::vector<uint8_t>& column) = 0;
  virtual const std::vector<PortState>& ports() const = 0;
  // Position-free fingerprint of everything that determines future behavior.
  virtual std::string state_key() const = 0;

  bool all_terminal() const {
    for (const auto& p : ports())
      if (!p.terminal()) return false;
    return true;
  }
};

// Immutable description of a primitive stage.
class Stage {
public:
  virtual ~Stage() = default;
  virtual int arity_in() const = 0;
  virtual int arity_out() const = 0;
  virtual std::unique_ptr<Machine> instantiate() const = 0;
  virtual std::string describe() const = 0;  // one certificate line
};

// A pipeline of primitive stages, applied first to last.
class Transducer {
public:
  Transducer() = default;
  explicit Transducer(std::shared_ptr<const Stage> stage);

  int arity_in() const;
  int arity_out() const;
  const std::vector<std::shared_ptr<const Stage>>& stages() const {
    return stages_;
  }
  bool empty() const { return stages_.empty(); }

private:
  friend Transducer compose(const Transducer& outer, const Transducer& inner);
  friend Transducer product(const Transducer& a, const Transducer& b);
  std::vector<std::shared_ptr<const Stage>> stages_;
};

// outer after inner (function composition).
Transducer compose(const Transducer& outer, const Transducer& inner);
// Side-by-side juxtaposition.
Transducer product(const Transducer& a, const Transducer& b);

struct RunResult {
  bool ok = false;
  std::vector<CantorPoint> outputs;    // exact, when ok
  std::vector<std::string> partials;   // known prefixes, when not ok
  uint64_t depth = 0;                  // columns consumed until stabilization
};

constexpr uint64_t kDefaultBudget = 4096;

// Exact evaluation on total eventually periodic inputs. Stages run one after
// another; coordinates that never terminalize are closed by state recurrence
// over the joint input cycle, so ties like max(x,x) still come out exact.
RunResult run(const Transducer& t, const std::vector<CantorPoint>& xs,
              uint64_t budget = kDefaultBudget);

// Longest determined output prefixes after feeding finite input prefixes.
std::vector<std::string> prefix_run(const Transducer& t,
                                    const std::vector<std::string>& inputs);

// Post-processing half of a reduction witness.
struct PostMap {
  enum class Kind { Strong, Plain };
  Kind kind = Kind::Strong;
  // Strong: oracle answer -> final answer, no access to the input.
  std::vector<int> table = {0, 1};
  // Plain: re-reads the input, races the interval cases cut out by the
  // separators, and answers (case index) + oracle bit.
  ThresholdVector thresholds;
  std::vector<std::pair<CantorPoint, CantorPoint>> separators;

  static PostMap strong_identity() { return PostMap{}; }
  static PostMap strong_negation() {
    PostMap p;
    p.table = {1, 0};
    return p;
  }
  bool is_identity() const { return kind == Kind::Strong && table == std::vector<int>{0, 1}; }
};

struct WitnessPair {
  Transducer pre;
  PostMap post;
  // Problem descriptors; informational but serialized with certificates.
  std::optional<TruthTable> source;
  std::optional<TruthTable> target;
  std::optional<CantorPoint> alpha;
};

// Interval-case race shared by the localizer machine and plain posts: scan the
// cases in a fixed order each depth, first fully decided case wins. Returns
// nothing while undecided within the available bits.
class IntervalRace {
public:
  IntervalRace(const ThresholdVector& t,
               const std::vector<std::pair<CantorPoint, CantorPoint>>& seps);
  // Feed the next input bit; returns the decided case once there is one.
  std::optional<int> feed(bool bit);
  std::optional<int> decided() const { return decided_; }
  std::string state_key() const;

private:
  struct Cmp {
    CantorPoint q;
    bool want_less = false;  // condition x < q (else x > q)
    int status = 0;          // 0 pending, +1 true, -1 false
  };
  std::vector<Cmp> cmps_;
  std::vector<std::vector<int>> case_conds_;  // indices into cmps_ per case
  uint64_t depth_ = 0;
  std::optional<int> decided_;
};

int eval_post(const PostMap& post, const std::vector<CantorPoint>& inputs,
              int oracle_answer);
// Prefix variant; empty when the plain reader cannot decide yet.
std::optional<int> eval_post_prefix(const PostMap& post,
                                    const std::vector<std::string>& inputs,
                                    int oracle_answer);

// ---- builders ----

Transducer build_identity(int n);
Transducer build_bit_flip();
// Output j is a verbatim copy of input map[j] (1-based).
Transducer build_wires(int n, const std::vector<int>& map);
Transducer build_max();
Transducer build_min();
Transducer build_maxmin_pair();
Transducer build_switch_on_split();
Transducer build_sorted(int n);
Transducer build_wtow(int n, int k0);
Transducer build_wtow1(int n, int k0);
Transducer build_keylemma_flip(int n, const Vertex& v);
Transducer build_chain_embed(const CoveringChain& chain);
Transducer build_const_plug(int n, const std::vector<int>& idx,
                            const std::vector<uint8_t>& bits);
Transducer build_pad_ones(int l, int n);
Transducer build_pad_zeros(int l, int n);
Transducer build_keep_smallest(int n, int l);
Transducer build_stall(int n);

WitnessPair build_interval_localizer(
    const ThresholdVector& t,
    const std::vector<std::pair<CantorPoint, CantorPoint>>& separators);

}  // namespace stepfn
