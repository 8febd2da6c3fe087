#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stepfn/truthtable.hpp"

namespace stepfn {

// Eventually periodic point of Cantor space in canonical form: the period is
// primitive and the prefix cannot be shortened by absorbing its last bit into
// a rotation of the period. Equality of canonical forms is point equality.
class CantorPoint {
public:
  CantorPoint() : period_("0") {}  // 0^ω
  CantorPoint(std::string prefix, std::string period);

  static CantorPoint parse(const std::string& text);  // "prefix(period)"
  static CantorPoint zeros() { return CantorPoint("", "0"); }
  static CantorPoint ones() { return CantorPoint("", "1"); }

  const std::string& prefix() const { return prefix_; }
  const std::string& period() const { return period_; }

  bool bit(uint64_t i) const;
  std::string take(uint64_t k) const;
  CantorPoint drop(uint64_t k) const;
  CantorPoint flipped() const;
  std::string str() const;

  friend bool operator==(const CantorPoint&, const CantorPoint&) = default;

private:
  std::string prefix_;
  std::string period_;
};

enum class Order { LT, EQ, GT };

Order lex_compare(const CantorPoint& x, const CantorPoint& y);
bool lex_less(const CantorPoint& x, const CantorPoint& y);

// head, then the point: head + x as a sequence.
CantorPoint prepend(const std::string& head, const CantorPoint& x);

bool is_proper(const CantorPoint& alpha);

// s_alpha(x) = 1 iff x >= alpha lexicographically.
bool step(const CantorPoint& alpha, const CantorPoint& x);

struct ThresholdVector {
  std::vector<CantorPoint> thresholds;

  int n() const { return static_cast<int>(thresholds.size()); }
  void require_increasing() const;
};

// Number of thresholds <= x.
int multi_step(const ThresholdVector& t, const CantorPoint& x);

bool eval_sF(const TruthTable& f, const ThresholdVector& t,
             const std::vector<CantorPoint>& xs);
// Equal-threshold mode; alpha must be proper.
bool eval_sF(const TruthTable& f, const CantorPoint& alpha,
             const std::vector<CantorPoint>& xs);

// Finite-support separators alpha_i < q_lo_i < q_hi_i < alpha_{i+1} for each
// consecutive pair, shortest supports first, smallest values on ties.
std::vector<std::pair<CantorPoint, CantorPoint>> dyadic_separators(
    const ThresholdVector& t);

}  // namespace stepfn
