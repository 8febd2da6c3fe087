#include "stepfn/normalize.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

namespace stepfn {

namespace {

int level_value(const TruthTable& t, int level) {
  int seen = -1;
  for (unsigned idx = 0; idx < t.size(); ++idx) {
    if (std::popcount(idx) != level) continue;
    int v = t.value(idx);
    if (seen < 0) seen = v;
    if (seen != v) throw std::logic_error("sweep reached an inhomogeneous level");
  }
  return seen;
}

// First vertex by (weight, index) whose full cone up to the given ceiling
// carries the value d. The weight-first order makes the hit minimal under
// inclusion among all qualifying vertices.
bool find_flip_vertex(const TruthTable& t, int ceiling, int d, Vertex& out) {
  const int n = t.n();
  for (int wt = 1; wt < ceiling; ++wt) {
    for (unsigned idx = 1; idx < t.size(); ++idx) {
      if (std::popcount(idx) != wt) continue;
      const unsigned free_mask = (t.size() - 1) & ~idx;
      bool ok = true;
      for (unsigned extra = 0;; extra = (extra - free_mask) & free_mask) {
        unsigned up = idx | extra;
        if (std::popcount(up) <= ceiling && t.value(up) != d) {
          ok = false;
          break;
        }
        if (extra == free_mask) break;
      }
      if (ok) {
        out = Vertex(n, idx);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

NormalizeResult normalize_to_K(const TruthTable& f) {
  const int n = f.n();
  const int l = alternation_length(f);
  NormalizeResult res{f, false, {}};

  // Single-vertex flips never touch the all-ones vertex, so the staircase
  // endpoint is reachable only when the value there already matches l mod 2.
  // Otherwise rewrite the complement and fold one negation into the answer.
  if (f.value(f.size() - 1) != l % 2) {
    res.table = complement(f);
    res.negated = true;
  }

  const TruthTable target = make_K(n, l);
  TruthTable& g = res.table;
  for (int L = n - 1; L >= 1 && !(g == target); --L) {
    const int d = level_value(g, L + 1);
    while (!(g == target)) {
      Vertex v(n, 0);
      if (!find_flip_vertex(g, L + 1, d, v)) break;
      FlipCertificate cert;
      cert.v = v;
      cert.from = d != 0;
      cert.sweep_level = L;
      cert.conditions_ok = check_flip_conditions(g, v);
      if (!cert.conditions_ok)
        throw std::logic_error("sweep selected a vertex the flip move rejects");
      g.set(v.bits, d == 0);
      if (alternation_length(g) != l)
        throw std::logic_error("flip changed the alternation length");
      res.flips.push_back(cert);
    }
  }
  if (!(g == target))
    throw std::logic_error("sweeps stalled before the staircase form");
  return res;
}

std::vector<ShiftMove> word_shift_plan(const std::string& from,
                                       const std::string& to) {
  if (from.size() != to.size())
    throw std::invalid_argument("level words must have equal length");
  const int alts = word_alternations(from);
  if (alts != word_alternations(to))
    throw std::invalid_argument("level words must have equal alternation count");
  if (from == to) return {};

  const int n = static_cast<int>(from.size()) - 1;
  std::map<std::string, std::pair<std::string, ShiftMove>> parent;
  std::queue<std::string> pending;
  parent[from] = {from, {}};
  pending.push(from);
  auto offer = [&](const std::string& u, bool up, int k0, std::string r) {
    if (word_alternations(r) != alts) return;
    if (parent.count(r)) return;
    parent[r] = {u, ShiftMove{up, k0, r}};
    pending.push(r);
  };
  while (!pending.empty() && !parent.count(to)) {
    std::string u = pending.front();
    pending.pop();
    for (int k0 = 1; k0 <= n - 1; ++k0) {
      if (u[0] == u[1]) {
        for (char free_bit : {'0', '1'}) {
          std::string r = u;
          for (int j = 0; j < k0; ++j) r[j] = u[j + 1];
          r[k0] = free_bit;
          offer(u, false, k0, r);
        }
      }
      if (u[k0] == u[k0 + 1]) {
        for (char free_bit : {'0', '1'}) {
          std::string r = u;
          r[0] = free_bit;
          for (int j = 0; j <= k0; ++j) r[j + 1] = u[j];
          offer(u, true, k0, r);
        }
      }
    }
  }
  if (!parent.count(to))
    throw std::runtime_error("no move sequence connects the level words");
  std::vector<ShiftMove> plan;
  for (std::string w = to; w != from; w = parent[w].first)
    plan.push_back(parent[w].second);
  std::reverse(plan.begin(), plan.end());
  return plan;
}

ReductionPlan compile_reduction(const TruthTable& f, const TruthTable& g,
                                const CantorPoint& alpha) {
  if (!is_proper(alpha))
    throw std::invalid_argument("threshold must be proper");
  const int nf = f.n();
  const int ng = g.n();
  const int lf = alternation_length(f);
  const int lg = alternation_length(g);
  if (lf > lg)
    throw std::invalid_argument("l(source)=" + std::to_string(lf) +
                                " > l(target)=" + std::to_string(lg));

  int polarity = 0;
  std::vector<Transducer> parts;

  NormalizeResult nr = normalize_to_K(f);
  if (nr.negated) polarity ^= 1;
  for (const FlipCertificate& cert : nr.flips)
    parts.push_back(build_keylemma_flip(nf, cert.v));
  parts.push_back(build_keep_smallest(nf, lf));
  if (lf < lg) parts.push_back(build_pad_zeros(lf, lg));
  if (lg < ng) parts.push_back(build_pad_ones(lg, ng));

  CoveringChain chain = optimal_covering_chain(g);
  std::string w = chain.word;
  if (w[0] == '1') {
    for (char& c : w) c = c == '0' ? '1' : '0';
    polarity ^= 1;
  }
  for (const ShiftMove& move : word_shift_plan(level_word_K(ng, lg), w))
    parts.push_back(move.up ? build_wtow1(ng, move.k0)
                            : build_wtow(ng, move.k0));
  parts.push_back(build_chain_embed(chain));

  Transducer pre = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) pre = compose(parts[i], pre);

  ReductionPlan plan;
  plan.l_source = lf;
  plan.l_target = lg;
  plan.witness.pre = pre;
  plan.witness.post =
      polarity ? PostMap::strong_negation() : PostMap::strong_identity();
  plan.witness.source = f;
  plan.witness.target = g;
  plan.witness.alpha = alpha;
  for (const auto& stage : pre.stages())
    plan.stage_lines.push_back(stage->describe());
  return plan;
}

Comparison decide_sB(const TruthTable& f, const TruthTable& g) {
  const int lf = alternation_length(f);
  const int lg = alternation_length(g);
  if (lf < lg) return Comparison::SourceBelow;
  if (lf > lg) return Comparison::TargetBelow;
  return Comparison::Equivalent;
}

}  // namespace stepfn
