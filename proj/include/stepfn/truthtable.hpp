#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stepfn {

// Vertex of the n-cube. Coordinate i (1-based) is stored at bit i-1, so the
// display string "110" means coordinates 1,2 are set and coordinate 3 is not.
struct Vertex {
  int n = 0;
  uint32_t bits = 0;

  Vertex() = default;
  Vertex(int n_, uint32_t bits_);

  int weight() const;
  bool get(int coord) const;        // 1-based
  Vertex with(int coord, bool b) const;
  bool subset_of(const Vertex& o) const;
  bool covers(const Vertex& o) const;  // o ⊂ *this with exactly one bit added
  std::string str() const;

  static Vertex parse(int n, const std::string& s);

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

class TruthTable {
public:
  TruthTable() = default;
  explicit TruthTable(int n);  // all false
  TruthTable(int n, std::vector<uint8_t> values);

  static TruthTable from_bits(int n, const std::string& bits);

  int n() const { return n_; }
  uint32_t size() const { return uint32_t{1} << n_; }
  bool value(uint32_t index) const;
  bool value(const Vertex& v) const;
  void set(uint32_t index, bool b);
  std::string bits() const;

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

private:
  int n_ = 0;
  std::vector<uint8_t> values_;
};

struct CoveringChain {
  std::vector<Vertex> vertices;  // v_0 = 0^n up to v_n = 1^n, one bit per step
  std::string word;              // F(v_0) ... F(v_n)

  // Coordinate added at step i (1-based step, 1-based coordinate).
  int added_coord(int i) const;
};

struct Classification {
  bool complete = false;
  bool homogeneous = false;
  std::vector<int> homogeneous_levels;
};

struct TrivialWitness {
  std::vector<int> idx;        // fixed coordinates, 1-based, ascending
  std::vector<uint8_t> bits;   // values plugged in, parallel to idx
  bool negated = false;
};

bool eval(const TruthTable& f, const Vertex& v);

TruthTable fix_coords(const TruthTable& f, const std::vector<int>& idx,
                      const std::vector<uint8_t>& bits);

TruthTable complement(const TruthTable& f);

// Longest alternating chain value, via the covering-edge DP.
int alternation_length(const TruthTable& f);

CoveringChain optimal_covering_chain(const TruthTable& f);

Classification classify(const TruthTable& f);

int word_alternations(const std::string& w);

TruthTable make_H(int n, const std::string& word);
TruthTable make_K(int n, int l);
TruthTable make_parity(int n);
std::string level_word_K(int n, int l);

// Does g arise from f by fixing some coordinates, possibly negated afterwards?
std::optional<TrivialWitness> trivially_comparable(const TruthTable& g,
                                                   const TruthTable& f);

// Hypotheses for flipping f at v without changing the alternation length:
// (a) f constant on the weight-m extensions of v for every m > t(v), and
// (b) every one-bit extension of v agrees with f(v).
bool check_flip_conditions(const TruthTable& f, const Vertex& v);

}  // namespace stepfn
