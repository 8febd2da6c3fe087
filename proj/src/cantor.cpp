#include "stepfn/cantor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace stepfn {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_bits(const std::string& s) {
  for (char c : s) require(c == '0' || c == '1', "bit strings must be 0/1");
}

}  // namespace

CantorPoint::CantorPoint(std::string prefix, std::string period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  require(!period_.empty(), "period must be nonempty");
  check_bits(prefix_);
  check_bits(period_);
  // primitive period
  size_t len = period_.size();
  for (size_t d = 1; d < len; ++d) {
    if (len % d != 0) continue;
    bool rep = true;
    for (size_t i = d; i < len && rep; ++i) rep = period_[i] == period_[i % d];
    if (rep) {
      period_.resize(d);
      break;
    }
  }
  // absorb prefix tail into a rotation of the period
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    prefix_.pop_back();
    period_.insert(period_.begin(), period_.back());
    period_.pop_back();
  }
}

CantorPoint CantorPoint::parse(const std::string& text) {
  size_t open = text.find('(');
  require(open != std::string::npos && !text.empty() && text.back() == ')',
          "point format is prefix(period)");
  return CantorPoint(text.substr(0, open),
                     text.substr(open + 1, text.size() - open - 2));
}

bool CantorPoint::bit(uint64_t i) const {
  if (i < prefix_.size()) return prefix_[i] == '1';
  return period_[(i - prefix_.size()) % period_.size()] == '1';
}

std::string CantorPoint::take(uint64_t k) const {
  std::string out;
  out.reserve(k);
  for (uint64_t i = 0; i < k; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

CantorPoint CantorPoint::drop(uint64_t k) const {
  if (k <= prefix_.size()) return CantorPoint(prefix_.substr(k), period_);
  uint64_t r = (k - prefix_.size()) % period_.size();
  std::string per = period_.substr(r) + period_.substr(0, r);
  return CantorPoint("", per);
}

CantorPoint CantorPoint::flipped() const {
  std::string p = prefix_, q = period_;
  for (char& c : p) c = c == '0' ? '1' : '0';
  for (char& c : q) c = c == '0' ? '1' : '0';
  return CantorPoint(p, q);
}

std::string CantorPoint::str() const { return prefix_ + "(" + period_ + ")"; }

Order lex_compare(const CantorPoint& x, const CantorPoint& y) {
  uint64_t bound = std::max(x.prefix().size(), y.prefix().size()) +
                   std::lcm(x.period().size(), y.period().size());
  for (uint64_t i = 0; i < bound; ++i) {
    bool a = x.bit(i), b = y.bit(i);
    if (a != b) return a < b ? Order::LT : Order::GT;
  }
  return Order::EQ;
}

bool lex_less(const CantorPoint& x, const CantorPoint& y) {
  return lex_compare(x, y) == Order::LT;
}

CantorPoint prepend(const std::string& head, const CantorPoint& x) {
  return CantorPoint(head + x.prefix(), x.period());
}

bool is_proper(const CantorPoint& alpha) {
  return alpha.period().find('1') != std::string::npos;
}

bool step(const CantorPoint& alpha, const CantorPoint& x) {
  return lex_compare(x, alpha) != Order::LT;
}

void ThresholdVector::require_increasing() const {
  for (size_t i = 0; i + 1 < thresholds.size(); ++i)
    require(lex_less(thresholds[i], thresholds[i + 1]),
            "thresholds must be strictly increasing");
}

int multi_step(const ThresholdVector& t, const CantorPoint& x) {
  t.require_increasing();
  int count = 0;
  for (const auto& a : t.thresholds)
    if (step(a, x)) ++count;
  return count;
}

bool eval_sF(const TruthTable& f, const ThresholdVector& t,
             const std::vector<CantorPoint>& xs) {
  require(t.n() == f.n() && xs.size() == static_cast<size_t>(f.n()),
          "arity mismatch");
  Vertex v(f.n(), 0);
  for (int i = 1; i <= f.n(); ++i)
    v = v.with(i, step(t.thresholds[static_cast<size_t>(i) - 1],
                       xs[static_cast<size_t>(i) - 1]));
  return f.value(v);
}

bool eval_sF(const TruthTable& f, const CantorPoint& alpha,
             const std::vector<CantorPoint>& xs) {
  require(is_proper(alpha), "equal-threshold evaluation needs a proper alpha");
  ThresholdVector t;
  t.thresholds.assign(static_cast<size_t>(f.n()), alpha);
  require(xs.size() == static_cast<size_t>(f.n()), "arity mismatch");
  Vertex v(f.n(), 0);
  for (int i = 1; i <= f.n(); ++i)
    v = v.with(i, step(alpha, xs[static_cast<size_t>(i) - 1]));
  return f.value(v);
}

std::vector<std::pair<CantorPoint, CantorPoint>> dyadic_separators(
    const ThresholdVector& t) {
  t.require_increasing();
  require(t.n() >= 1, "empty threshold vector");
  require(lex_less(CantorPoint::zeros(), t.thresholds.front()) &&
              lex_less(t.thresholds.back(), CantorPoint::ones()),
          "thresholds must lie strictly between 0^w and 1^w");

  std::vector<std::pair<CantorPoint, CantorPoint>> out;
  for (size_t i = 0; i + 1 < t.thresholds.size(); ++i) {
    const CantorPoint& lo = t.thresholds[i];
    const CantorPoint& hi = t.thresholds[i + 1];
    size_t cap = 2 * (lo.prefix().size() + hi.prefix().size() +
                      lo.period().size() + hi.period().size() +
                      std::lcm(lo.period().size(), hi.period().size())) +
                 8;
    // Shortest sigma with a < sigma 0^w < b, smallest value on ties. For a
    // fixed length the least candidate above a is a's truncation plus one;
    // larger candidates only move further right, so that single string
    // decides the length.
    auto find_between = [&](const CantorPoint& a,
                            const CantorPoint& b) -> CantorPoint {
      for (size_t len = 1; len <= cap; ++len) {
        std::string sigma = a.take(len);
        size_t j = len;
        while (j > 0 && sigma[j - 1] == '1') sigma[--j] = '0';
        if (j == 0) continue;  // a starts with 1^len; nothing above it here
        sigma[j - 1] = '1';
        CantorPoint q(sigma, "0");
        if (lex_less(q, b)) return q;
      }
      throw std::invalid_argument("no separator exists between " + a.str() +
                                  " and " + b.str());
    };
    CantorPoint q_lo = find_between(lo, hi);
    CantorPoint q_hi = find_between(q_lo, hi);
    out.emplace_back(q_lo, q_hi);
  }
  return out;
}

}  // namespace stepfn
