#include "stepfn/truthtable.hpp"

#include <algorithm>
#include <bit>
#include <iostream>
#include <stdexcept>

namespace stepfn {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Vertex::Vertex(int n_, uint32_t bits_) : n(n_), bits(bits_) {
  require(n >= 1 && n <= 16, "vertex dimension out of range");
  require((bits >> n) == 0, "vertex has bits beyond its dimension");
}

int Vertex::weight() const { return std::popcount(bits); }

bool Vertex::get(int coord) const {
  require(coord >= 1 && coord <= n, "coordinate out of range");
  return (bits >> (coord - 1)) & 1u;
}

Vertex Vertex::with(int coord, bool b) const {
  require(coord >= 1 && coord <= n, "coordinate out of range");
  uint32_t m = uint32_t{1} << (coord - 1);
  return Vertex(n, b ? (bits | m) : (bits & ~m));
}

bool Vertex::subset_of(const Vertex& o) const {
  require(n == o.n, "dimension mismatch");
  return (bits & ~o.bits) == 0;
}

bool Vertex::covers(const Vertex& o) const {
  require(n == o.n, "dimension mismatch");
  return o.subset_of(*this) && weight() == o.weight() + 1;
}

std::string Vertex::str() const {
  std::string s(static_cast<size_t>(n), '0');
  for (int i = 0; i < n; ++i)
    if ((bits >> i) & 1u) s[static_cast<size_t>(i)] = '1';
  return s;
}

Vertex Vertex::parse(int n, const std::string& s) {
  require(static_cast<int>(s.size()) == n, "vertex string length mismatch");
  uint32_t b = 0;
  for (int i = 0; i < n; ++i) {
    char c = s[static_cast<size_t>(i)];
    require(c == '0' || c == '1', "vertex string must be 0/1");
    if (c == '1') b |= uint32_t{1} << i;
  }
  return Vertex(n, b);
}

TruthTable::TruthTable(int n) : n_(n) {
  require(n >= 1 && n <= 16, "table dimension out of range");
  if (n > 12)
    std::cerr << "warning: truth table with n=" << n
              << " has " << (1u << n) << " entries\n";
  values_.assign(size(), 0);
}

TruthTable::TruthTable(int n, std::vector<uint8_t> values) : TruthTable(n) {
  require(values.size() == size(), "wrong number of table entries");
  for (auto v : values) require(v <= 1, "table entries must be 0/1");
  values_ = std::move(values);
}

TruthTable TruthTable::from_bits(int n, const std::string& bits) {
  require(n >= 1 && n <= 16, "table dimension out of range");
  require(bits.size() == (size_t{1} << n), "wrong number of table entries");
  std::vector<uint8_t> vals(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    require(bits[i] == '0' || bits[i] == '1', "table entries must be 0/1");
    vals[i] = static_cast<uint8_t>(bits[i] - '0');
  }
  return TruthTable(n, std::move(vals));
}

bool TruthTable::value(uint32_t index) const {
  require(index < size(), "table index out of range");
  return values_[index] != 0;
}

bool TruthTable::value(const Vertex& v) const {
  require(v.n == n_, "dimension mismatch");
  return value(v.bits);
}

void TruthTable::set(uint32_t index, bool b) {
  require(index < size(), "table index out of range");
  values_[index] = b ? 1 : 0;
}

std::string TruthTable::bits() const {
  std::string s(size(), '0');
  for (uint32_t i = 0; i < size(); ++i)
    if (values_[i]) s[i] = '1';
  return s;
}

bool eval(const TruthTable& f, const Vertex& v) { return f.value(v); }

TruthTable fix_coords(const TruthTable& f, const std::vector<int>& idx,
                      const std::vector<uint8_t>& bits) {
  require(idx.size() == bits.size(), "idx/bits length mismatch");
  uint32_t set_mask = 0, coord_mask = 0;
  for (size_t j = 0; j < idx.size(); ++j) {
    require(idx[j] >= 1 && idx[j] <= f.n(), "index out of range");
    require(bits[j] <= 1, "bits must be 0/1");
    uint32_t m = uint32_t{1} << (idx[j] - 1);
    require((coord_mask & m) == 0, "repeated index");
    coord_mask |= m;
    if (bits[j]) set_mask |= m;
  }
  TruthTable out(f.n());
  for (uint32_t v = 0; v < f.size(); ++v)
    out.set(v, f.value((v & ~coord_mask) | set_mask));
  return out;
}

TruthTable complement(const TruthTable& f) {
  TruthTable out(f.n());
  for (uint32_t v = 0; v < f.size(); ++v) out.set(v, !f.value(v));
  return out;
}

int alternation_length(const TruthTable& f) {
  uint32_t sz = f.size();
  std::vector<int> best(sz, 0);
  for (uint32_t v = 1; v < sz; ++v) {
    int b = 0;
    for (uint32_t m = v; m; m &= m - 1) {
      uint32_t u = v ^ (m & -m);
      b = std::max(b, best[u] + (f.value(u) != f.value(v) ? 1 : 0));
    }
    best[v] = b;
  }
  return best[sz - 1];
}

CoveringChain optimal_covering_chain(const TruthTable& f) {
  uint32_t sz = f.size();
  int n = f.n();
  std::vector<int> down(sz, 0), up(sz, 0);
  for (uint32_t v = 1; v < sz; ++v) {
    int b = 0;
    for (uint32_t m = v; m; m &= m - 1) {
      uint32_t u = v ^ (m & -m);
      b = std::max(b, down[u] + (f.value(u) != f.value(v) ? 1 : 0));
    }
    down[v] = b;
  }
  uint32_t full = sz - 1;
  for (uint32_t i = sz - 1; i-- > 0;) {
    uint32_t v = i;
    int b = 0;
    for (uint32_t rest = full & ~v; rest; rest &= rest - 1) {
      uint32_t u = v | (rest & -rest);
      b = std::max(b, up[u] + (f.value(u) != f.value(v) ? 1 : 0));
    }
    up[v] = b;
  }
  int l = down[full];

  CoveringChain chain;
  uint32_t v = 0;
  int alt = 0;
  chain.vertices.push_back(Vertex(n, 0));
  chain.word.push_back(f.value(0u) ? '1' : '0');
  while (v != full) {
    bool advanced = false;
    for (int c = 1; c <= n && !advanced; ++c) {
      uint32_t m = uint32_t{1} << (c - 1);
      if (v & m) continue;
      uint32_t u = v | m;
      int d = f.value(u) != f.value(v) ? 1 : 0;
      if (alt + d + up[u] == l) {
        v = u;
        alt += d;
        chain.vertices.push_back(Vertex(n, v));
        chain.word.push_back(f.value(v) ? '1' : '0');
        advanced = true;
      }
    }
    if (!advanced) throw std::logic_error("chain traceback stuck");
  }
  return chain;
}

int CoveringChain::added_coord(int i) const {
  if (i < 1 || i >= static_cast<int>(vertices.size()))
    throw std::invalid_argument("chain step out of range");
  uint32_t diff = vertices[static_cast<size_t>(i)].bits ^
                  vertices[static_cast<size_t>(i) - 1].bits;
  return std::countr_zero(diff) + 1;
}

Classification classify(const TruthTable& f) {
  Classification c;
  int n = f.n();
  c.complete = alternation_length(f) == n;
  c.homogeneous = true;
  for (int lvl = 0; lvl <= n; ++lvl) {
    bool constant = true;
    int first = -1;
    for (uint32_t v = 0; v < f.size(); ++v) {
      if (std::popcount(v) != lvl) continue;
      int b = f.value(v) ? 1 : 0;
      if (first < 0)
        first = b;
      else if (b != first)
        constant = false;
    }
    if (constant)
      c.homogeneous_levels.push_back(lvl);
    else
      c.homogeneous = false;
  }
  return c;
}

int word_alternations(const std::string& w) {
  require(!w.empty(), "empty word");
  int count = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] != w[i + 1]) ++count;
  return count;
}

TruthTable make_H(int n, const std::string& word) {
  require(static_cast<int>(word.size()) == n + 1, "level word length must be n+1");
  for (char c : word) require(c == '0' || c == '1', "level word must be 0/1");
  TruthTable out(n);
  for (uint32_t v = 0; v < out.size(); ++v)
    out.set(v, word[static_cast<size_t>(std::popcount(v))] == '1');
  return out;
}

std::string level_word_K(int n, int l) {
  require(l >= 0 && l <= n, "alternation count out of range");
  std::string w(static_cast<size_t>(n + 1), '0');
  for (int j = 1; j <= l; ++j)
    w[static_cast<size_t>(n - l + j)] = (j % 2) ? '1' : '0';
  return w;
}

TruthTable make_K(int n, int l) { return make_H(n, level_word_K(n, l)); }

TruthTable make_parity(int n) {
  TruthTable out(n);
  for (uint32_t v = 0; v < out.size(); ++v) out.set(v, std::popcount(v) % 2 == 1);
  return out;
}

std::optional<TrivialWitness> trivially_comparable(const TruthTable& g,
                                                   const TruthTable& f) {
  require(g.n() == f.n(), "dimension mismatch");
  int n = f.n();

  std::vector<int> idx;
  std::vector<uint8_t> bits;
  auto matches = [&](bool neg) {
    TruthTable fixed = fix_coords(f, idx, bits);
    if (neg) fixed = complement(fixed);
    return fixed == g;
  };
  // k fixed coordinates, combinations in lexicographic order, then bit
  // patterns (bits[0] most significant), plain before negated.
  for (int k = 0; k <= n; ++k) {
    idx.assign(static_cast<size_t>(k), 0);
    for (int j = 0; j < k; ++j) idx[static_cast<size_t>(j)] = j + 1;
    while (true) {
      for (uint32_t pat = 0; pat < (uint32_t{1} << k); ++pat) {
        bits.assign(static_cast<size_t>(k), 0);
        for (int j = 0; j < k; ++j)
          bits[static_cast<size_t>(j)] = (pat >> (k - 1 - j)) & 1u;
        for (int neg = 0; neg <= 1; ++neg)
          if (matches(neg != 0)) return TrivialWitness{idx, bits, neg != 0};
      }
      // next k-combination of {1..n} in lexicographic order
      int j = k - 1;
      while (j >= 0 && idx[static_cast<size_t>(j)] == n - (k - 1 - j)) --j;
      if (j < 0) break;
      ++idx[static_cast<size_t>(j)];
      for (int t = j + 1; t < k; ++t)
        idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t) - 1] + 1;
    }
  }
  return std::nullopt;
}

bool check_flip_conditions(const TruthTable& f, const Vertex& v) {
  require(v.n == f.n(), "dimension mismatch");
  int n = f.n();
  int tv = v.weight();
  require(tv < n, "flip vertex must lie below the top");

  uint32_t full = f.size() - 1;
  uint32_t free_mask = full & ~v.bits;
  // (b) one-bit extensions keep the value
  for (uint32_t rest = free_mask; rest; rest &= rest - 1) {
    uint32_t w = v.bits | (rest & -rest);
    if (f.value(w) != f.value(v.bits)) return false;
  }
  // (a) constant on each higher level of the upper cone
  std::vector<int> seen(static_cast<size_t>(n + 1), -1);
  for (uint32_t sub = free_mask; sub; sub = (sub - 1) & free_mask) {
    uint32_t w = v.bits | sub;
    int tw = std::popcount(w);
    if (tw <= tv + 1) continue;  // level tv+1 already forced equal by (b)
    int b = f.value(w) ? 1 : 0;
    if (seen[static_cast<size_t>(tw)] < 0)
      seen[static_cast<size_t>(tw)] = b;
    else if (seen[static_cast<size_t>(tw)] != b)
      return false;
  }
  return true;
}

}  // namespace stepfn
