#include "stepfn/verify.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace stepfn {

namespace {

const uint64_t kBudgets[] = {1u << 6, 1u << 8, 1u << 10, 1u << 12};

std::string render_inputs(const std::vector<CantorPoint>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += xs[i].str();
  }
  return out;
}

}  // namespace

bool VerificationReport::pass() const {
  return failures.empty() && undetermined.empty();
}

int VerificationReport::exit_code() const {
  if (!failures.empty()) return 1;
  if (!undetermined.empty()) return 2;
  return 0;
}

std::string VerificationReport::text() const {
  std::ostringstream os;
  os << "samples=" << samples << " failures=" << failures.size()
     << " undetermined=" << undetermined.size() << "\n";
  if (boundary_outcome) {
    const char* name = *boundary_outcome == Outcome::Pass         ? "pass"
                       : *boundary_outcome == Outcome::Fail       ? "fail"
                                                                  : "undetermined";
    os << "boundary=" << name << "\n";
  }
  std::vector<std::string> lines;
  for (const auto& f : failures) {
    std::ostringstream ls;
    ls << "fail inputs=" << render_inputs(f.inputs) << " expected=" << f.expected
       << " got=" << f.got;
    lines.push_back(ls.str());
  }
  for (const auto& u : undetermined) {
    std::ostringstream ls;
    ls << "undetermined inputs=" << render_inputs(u.inputs)
       << " depth=" << u.depth;
    lines.push_back(ls.str());
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& line : lines) os << line << "\n";
  os << "status="
     << (pass() ? "pass" : (failures.empty() ? "undetermined" : "fail"))
     << "\n";
  return os.str();
}

VerificationReport check_witness(
    const WitnessPair& w, const TruthTable& f, const TruthTable& g,
    const CantorPoint& alpha,
    const std::vector<std::vector<CantorPoint>>& samples) {
  if (!is_proper(alpha))
    throw std::invalid_argument("threshold must be proper");
  if (w.pre.arity_in() != f.n() || w.pre.arity_out() != g.n())
    throw std::invalid_argument("witness arity does not match the tables");

  VerificationReport report;
  for (const auto& xs : samples) {
    ++report.samples;
    bool settled = false;
    uint64_t last_budget = 0;
    for (uint64_t budget : kBudgets) {
      last_budget = budget;
      RunResult r = run(w.pre, xs, budget);
      if (!r.ok) continue;
      int a = eval_sF(g, alpha, r.outputs) ? 1 : 0;
      int expected = eval_sF(f, alpha, xs) ? 1 : 0;
      int got;
      try {
        got = eval_post(w.post, xs, a);
      } catch (const std::exception&) {
        break;  // plain reader undecided; fall through to undetermined
      }
      settled = true;
      if (got != expected) report.failures.push_back({xs, expected, got});
      break;
    }
    if (!settled)
      report.undetermined.push_back({xs, static_cast<int>(last_budget)});
  }
  return report;
}

Outcome boundary_check(const WitnessPair& w, const CantorPoint& alpha,
                       const CantorPoint& beta, int depth) {
  if (!is_proper(alpha))
    throw std::invalid_argument("threshold must be proper");
  if (w.pre.arity_in() != 1 || w.pre.arity_out() != 1)
    throw std::invalid_argument("boundary check needs a 1-to-1 witness");
  RunResult r = run(w.pre, {alpha}, static_cast<uint64_t>(depth));
  if (!r.ok) return Outcome::Undetermined;
  if (!(r.outputs[0] == beta)) return Outcome::Fail;
  if (w.post.kind == PostMap::Kind::Strong && !w.post.is_identity())
    return Outcome::Fail;
  return Outcome::Pass;
}

std::vector<std::vector<CantorPoint>> sample_points(const CantorPoint& alpha,
                                                    int n, int count,
                                                    std::uint64_t seed) {
  if (!is_proper(alpha))
    throw std::invalid_argument("threshold must be proper");
  std::mt19937_64 rng(seed);
  const int cap = static_cast<int>(alpha.prefix().size() +
                                   2 * alpha.period().size());

  std::vector<CantorPoint> hi, lo;  // hi[j] >= alpha, lo[j] < alpha
  hi.push_back(alpha);
  for (int k = 0; k <= cap; ++k) {
    hi.push_back(CantorPoint(alpha.take(k), "1"));
    lo.push_back(CantorPoint(alpha.take(k), "0"));
  }

  auto cell_tuple = [&](unsigned cell, const CantorPoint& h,
                        const CantorPoint& l) {
    std::vector<CantorPoint> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back((cell >> i) & 1u ? h : l);
    return t;
  };

  std::vector<std::vector<CantorPoint>> out;
  out.push_back(std::vector<CantorPoint>(n, alpha));
  const unsigned cells = n >= 1 ? 1u << n : 1u;
  for (unsigned cell = 0; cell < cells; ++cell)
    out.push_back(cell_tuple(cell, alpha, lo[0]));
  for (size_t k = 0; k < lo.size(); ++k) {
    out.push_back(std::vector<CantorPoint>(n, hi[k + 1]));
    out.push_back(std::vector<CantorPoint>(n, lo[k]));
    out.push_back(cell_tuple(static_cast<unsigned>(rng() % cells), hi[k + 1],
                             lo[k]));
  }

  auto random_point = [&]() -> CantorPoint {
    switch (rng() % 3) {
      case 0:
        return hi[rng() % hi.size()];
      case 1:
        return lo[rng() % lo.size()];
      default: {
        std::string prefix, period;
        const int pl = static_cast<int>(rng() % 5);
        for (int i = 0; i < pl; ++i) prefix += (rng() & 1) ? '1' : '0';
        const int ql = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < ql; ++i) period += (rng() & 1) ? '1' : '0';
        return CantorPoint(prefix, period);
      }
    }
  };
  while (static_cast<int>(out.size()) < count) {
    std::vector<CantorPoint> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.push_back(random_point());
    out.push_back(std::move(t));
  }
  return out;
}

int brute_force_l(const TruthTable& f) {
  if (f.n() > 4)
    throw std::invalid_argument("chain enumeration is limited to n <= 4");
  const unsigned size = f.size();
  const unsigned full = size - 1;
  std::vector<unsigned> order(size);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
    return std::popcount(a) > std::popcount(b);
  });
  std::vector<int> best(size, 0);
  int answer = 0;
  for (unsigned v : order) {
    const unsigned free_mask = full & ~v;
    int b = 0;
    for (unsigned extra = free_mask; extra; extra = (extra - 1) & free_mask) {
      const unsigned u = v | extra;
      b = std::max(b, best[u] + (f.value(u) != f.value(v) ? 1 : 0));
    }
    best[v] = b;
    answer = std::max(answer, b);
  }
  return answer;
}

std::optional<Counterexample> counterexample_search(const WitnessPair& w,
                                                    const TruthTable& f,
                                                    const TruthTable& g,
                                                    const CantorPoint& alpha,
                                                    int budget) {
  auto tuples = sample_points(alpha, f.n(), 64, 0x5eedu);
  int probes = 0;
  std::optional<Counterexample> hit;

  // One replay; fills `hit` on a semantic mismatch, reports lock depth.
  auto probe = [&](const std::vector<CantorPoint>& xs,
                   uint64_t* lock_depth) -> bool {
    if (probes >= budget) return false;
    ++probes;
    RunResult r = run(w.pre, xs);
    if (!r.ok) return true;
    if (lock_depth) *lock_depth = r.depth;
    int a = eval_sF(g, alpha, r.outputs) ? 1 : 0;
    int got;
    try {
      got = eval_post(w.post, xs, a);
    } catch (const std::exception&) {
      return true;
    }
    int expected = eval_sF(f, alpha, xs) ? 1 : 0;
    if (got != expected) hit = Counterexample{xs, expected, got};
    return true;
  };

  for (const auto& xs : tuples) {
    uint64_t lock = 0;
    if (!probe(xs, &lock)) return hit;
    if (hit) return hit;
    // The answer is pinned after `lock` columns; drag one high coordinate
    // below the threshold while agreeing with it past that depth.
    for (int i = 0; i < f.n(); ++i) {
      if (lex_less(xs[i], alpha)) continue;
      auto ys = xs;
      ys[i] = CantorPoint(alpha.take(lock + 2), "0");
      if (!probe(ys, nullptr)) return hit;
      if (hit) return hit;
    }
  }
  return hit;
}

}  // namespace stepfn
