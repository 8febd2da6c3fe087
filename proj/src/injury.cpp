#include "stepfn/injury.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace stepfn {

namespace {

// B mirrors A across adjacent pairs.
int mirror(int y) { return y % 2 == 0 ? y + 1 : y - 1; }

}  // namespace

bool InjuryState::in_A(int x) const {
  if (x < 0) return false;
  if (x % 4 == 2 || x % 4 == 3) return true;  // properness coding
  return enumerated.count(x) != 0;
}

bool InjuryState::in_B(int y) const { return in_A(mirror(y)); }

std::string InjuryState::alpha_prefix(int len) const {
  std::string s(len, '0');
  for (int i = 0; i < len; ++i)
    if (in_A(i)) s[i] = '1';
  return s;
}

std::string InjuryState::beta_prefix(int len) const {
  std::string s(len, '0');
  for (int i = 0; i < len; ++i)
    if (in_B(i)) s[i] = '1';
  return s;
}

CantorPoint InjuryState::alpha() const {
  int hi = 0;
  for (int e : enumerated) hi = std::max(hi, e + 1);
  const int m = (hi + 3) / 4 * 4;
  return CantorPoint(alpha_prefix(m), "0011");
}

CantorPoint InjuryState::beta() const {
  int hi = 0;
  for (int e : enumerated) hi = std::max(hi, e + 1);
  const int m = (hi + 3) / 4 * 4;
  return CantorPoint(beta_prefix(m), "0011");
}

bool InjuryState::requirement_satisfied(int k) const {
  const int m = markers[k];
  if (k % 2 == 0) return in_A(m) || in_A(m + 1);
  return in_B(m) || in_B(m + 1);
}

void InjuryState::check_invariants() const {
  int prev = -1;
  for (int m : markers) {
    if (m % 4 != 0) throw std::logic_error("marker is not a multiple of 4");
    if (m <= prev) throw std::logic_error("markers are not strictly increasing");
    prev = m;
  }
  const int bound = 4 * (stage + requirement_count + 2);
  for (int n = 0; 2 * n + 1 < bound; ++n) {
    if (in_B(2 * n) != in_A(2 * n + 1) || in_B(2 * n + 1) != in_A(2 * n))
      throw std::logic_error("mirror coding broken");
    if (2 * n + 1 < bound / 2 && (!in_A(4 * n + 2) || !in_A(4 * n + 3)))
      throw std::logic_error("properness coding broken");
  }
}

InjuryResult run_injury(const std::vector<Opponent>& opponents, int stages) {
  if (stages <= 0) throw std::invalid_argument("stage budget must be positive");
  for (const auto& op : opponents)
    if (op.pre.arity_in() != 1 || op.pre.arity_out() != 1)
      throw std::invalid_argument("opponents must be 1-to-1 here");

  InjuryResult result;
  InjuryState& st = result.state;
  const int reqs = 2 * static_cast<int>(opponents.size());
  st.requirement_count = reqs;
  st.markers.resize(reqs);
  st.init_counts.assign(reqs, 0);
  int marker_high = 0;
  for (int k = 0; k < reqs; ++k) {
    st.markers[k] = 4 * k;
    marker_high = std::max(marker_high, 4 * k);
  }

  auto log_line = [&](int s, int k, const std::string& action,
                      const std::string& detail) {
    std::ostringstream os;
    os << "stage=" << s << " req=" << k << " action=" << action
       << " detail=" << detail;
    result.log.push_back(os.str());
  };

  for (int s = 1; s <= stages; ++s) {
    st.stage = s;
    const int active = std::min(reqs, s);
    for (int k = 0; k < active; ++k) {
      const Opponent& op = opponents[k / 2];
      const int m = st.markers[k];
      const bool even = k % 2 == 0;
      const bool pair_free = even ? (!st.in_A(m) && !st.in_A(m + 1))
                                  : (!st.in_B(m) && !st.in_B(m + 1));
      if (!pair_free) continue;

      const std::string own =
          even ? st.alpha_prefix(m) : st.beta_prefix(m);
      const std::string other =
          even ? st.beta_prefix(m) : st.alpha_prefix(m);
      const std::string probe = own + "01" + std::string(s, '1');
      const std::string out = prefix_run(op.pre, {probe})[0];
      if (out.size() < static_cast<size_t>(m) + 2) continue;  // (i) fails

      const std::string target = other + "10";
      const bool not_sup = out.compare(0, m + 2, target) != 0;
      const auto post_val = eval_post_prefix(op.post, {probe}, 1);
      const bool post_fires = post_val.has_value() && *post_val == 1;
      if (!not_sup && !post_fires) continue;  // (ii) fails

      // Attend to the least requirement only.
      const int elem = not_sup ? m + 1 : m;
      auto put = [&](int y) {
        const int x = even ? y : mirror(y);
        if (!st.in_A(x)) st.enumerated.insert(x);
      };
      put(elem);
      int bulk_lo = m + 2, bulk_hi = s - 1;
      for (int x = bulk_lo; x <= bulk_hi; ++x) put(x);

      std::ostringstream detail;
      detail << "case=" << (not_sup ? 1 : 2) << " via="
             << (not_sup && post_fires ? "both" : (not_sup ? "prefix" : "post"))
             << " m=" << m << " enumerated=" << elem << " bulk=";
      if (bulk_lo > bulk_hi)
        detail << "none";
      else
        detail << bulk_lo << ".." << bulk_hi;
      log_line(s, k, "attended", detail.str());
      log_line(s, k, "satisfied", "marker=" + std::to_string(m));

      for (int j = k + 1; j < reqs; ++j) {
        int fresh = (std::max(marker_high, s) / 4 + 1) * 4;
        marker_high = fresh;
        st.markers[j] = fresh;
        ++st.init_counts[j];
        log_line(s, j, "initialized", "marker=" + std::to_string(fresh));
      }
      break;
    }
    st.check_invariants();
  }
  return result;
}

DiagResult run_diagonalization(const std::vector<Quadruple>& quads, int stages,
                               int m_cap) {
  if (stages <= 0) throw std::invalid_argument("stage budget must be positive");
  if (m_cap < 0) throw std::invalid_argument("probe cap must be nonnegative");
  int coords = 3;
  for (size_t q = 0; q < quads.size(); ++q) {
    const Quadruple& quad = quads[q];
    const int n = quad.g.n();
    if (n < 2) throw std::invalid_argument("tables must have dimension >= 2");
    if (quad.f.n() != n)
      throw std::invalid_argument("table dimensions must agree");
    if (quad.op.pre.arity_in() != n || quad.op.pre.arity_out() != n)
      throw std::invalid_argument("opponent arity must match the tables");
    if (trivially_comparable(quad.g, quad.f))
      throw std::invalid_argument("quadruple " + std::to_string(q) +
                                  " is trivially comparable");
    coords = std::max(coords, n);
  }

  DiagResult result;
  result.log.push_back(
      "note=prefix construction only; the 1-equivalence coding of the "
      "sequence is not applied");
  std::vector<std::string> sigma(coords);
  result.history.push_back(sigma);

  for (int s = 0; s < stages; ++s) {
    std::vector<std::string> ext(coords, "000");
    std::ostringstream detail;
    if (static_cast<size_t>(s) >= quads.size()) {
      detail << "stage=" << s + 1 << " quad=none case=pad";
    } else {
      const Quadruple& quad = quads[s];
      const int n = quad.g.n();
      size_t max_len = 0;
      for (int k = 0; k < n; ++k) max_len = std::max(max_len, sigma[k].size());

      // Search the least m whose probe produces three fresh columns and an
      // answer map that distinguishes the two oracle bits.
      bool have_i = false;
      int m_hit = -1;
      std::vector<std::string> tau;
      int v0 = 0, v1 = 0;
      for (int m = 0; m <= m_cap; ++m) {
        std::vector<std::string> probes(n);
        for (int k = 0; k < n; ++k)
          probes[k] = sigma[k] + "0" + std::string(m, '1');
        auto outs = prefix_run(quad.op.pre, probes);
        size_t min_out = outs[0].size();
        for (const auto& o : outs) min_out = std::min(min_out, o.size());
        if (min_out < max_len + 3) continue;
        have_i = true;
        auto p0 = eval_post_prefix(quad.op.post, probes, 0);
        auto p1 = eval_post_prefix(quad.op.post, probes, 1);
        if (p0 && p1 && *p0 != *p1) {
          m_hit = m;
          tau = std::move(outs);
          v0 = *p0;
          v1 = *p1;
          break;
        }
      }

      if (!have_i) {
        detail << "stage=" << s + 1 << " quad=" << s << " case=no-output";
      } else if (m_hit < 0) {
        // The answer map never separates the bits: pick a value it misses
        // on the limit probes and steer every coordinate accordingly.
        std::vector<CantorPoint> limits(n);
        for (int k = 0; k < n; ++k)
          limits[k] = CantorPoint(sigma[k] + "0", "1");
        std::optional<int> w0, w1;
        try {
          w0 = eval_post(quad.op.post, limits, 0);
        } catch (const std::exception&) {
        }
        try {
          w1 = eval_post(quad.op.post, limits, 1);
        } catch (const std::exception&) {
        }
        int b = -1;
        for (int cand : {0, 1})
          if ((!w0 || *w0 != cand) && (!w1 || *w1 != cand)) {
            b = cand;
            break;
          }
        if (b < 0)
          throw std::logic_error("blind answer map still covers both bits");
        uint32_t cell = 0;
        while (cell < quad.g.size() && quad.g.value(cell) != (b != 0)) ++cell;
        if (cell == quad.g.size())
          throw std::logic_error("non-constant table misses a value");
        for (int k = 0; k < n; ++k)
          ext[k] = ((cell >> k) & 1u) ? "000" : "100";
        detail << "stage=" << s + 1 << " quad=" << s
               << " case=blind-answer b=" << b << " x="
               << Vertex(n, cell).str();
      } else {
        const bool flipped = v0 == 1 && v1 == 0;
        std::vector<int> idx;
        std::vector<uint8_t> fixed;
        for (int k = 0; k < n; ++k) {
          const std::string window = tau[k].substr(0, sigma[k].size() + 3);
          const std::string left_edge = sigma[k] + "001";
          const std::string right_edge = sigma[k] + "100";
          if (window < left_edge) {
            idx.push_back(k + 1);
            fixed.push_back(0);
          } else if (window > right_edge) {
            idx.push_back(k + 1);
            fixed.push_back(1);
          }
        }
        const TruthTable plugged = fix_coords(quad.f, idx, fixed);
        uint32_t cell = 0;
        for (; cell < quad.g.size(); ++cell) {
          const bool diff = quad.g.value(cell) != plugged.value(cell);
          if (flipped ? !diff : diff) break;
        }
        if (cell == quad.g.size())
          throw std::logic_error("tables admit no separating cell");
        for (int k = 0; k < n; ++k) {
          const bool xk = ((cell >> k) & 1u) != 0;
          const bool pinned =
              std::find(idx.begin(), idx.end(), k + 1) != idx.end();
          if (pinned)
            ext[k] = xk ? "001" : "100";
          else
            ext[k] = xk ? "000" : "110";
        }
        detail << "stage=" << s + 1 << " quad=" << s << " case=split m="
               << m_hit << (flipped ? " post=flip" : " post=plain") << " i=";
        for (size_t u = 0; u < idx.size(); ++u)
          detail << (u ? "," : "") << idx[u];
        if (idx.empty()) detail << "none";
        detail << " b=";
        for (size_t u = 0; u < fixed.size(); ++u)
          detail << (u ? "," : "") << int(fixed[u]);
        if (fixed.empty()) detail << "none";
        detail << " x=" << Vertex(n, cell).str();
      }
    }
    for (int k = 0; k < coords; ++k) sigma[k] += ext[k];
    result.history.push_back(sigma);
    result.log.push_back(detail.str());
  }
  return result;
}

}  // namespace stepfn
