#include <algorithm>
#include <memory>
#include <stdexcept>

#include "stepfn/transducer.hpp"

namespace stepfn {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s.push_back(',');
    s += std::to_string(v[i]);
  }
  return s;
}

// ---- pure routing: every port terminal from the start ----

struct RoutePort {
  bool is_copy = true;
  int src = 0;
  bool negate = false;
  CantorPoint constant;
};

class RouteMachine : public Machine {
public:
  explicit RouteMachine(const std::vector<RoutePort>& ports) {
    for (const auto& rp : ports) {
      PortState p;
      if (rp.is_copy) {
        p.mode = PortState::Mode::Copy;
        p.src = rp.src;
        p.offset = 0;
        p.negate = rp.negate;
      } else {
        p.mode = PortState::Mode::Const;
        p.constant = rp.constant;
      }
      ports_.push_back(std::move(p));
    }
  }
  void feed(const std::vector<uint8_t>&) override {}
  const std::vector<PortState>& ports() const override { return ports_; }
  std::string state_key() const override { return "route"; }

private:
  std::vector<PortState> ports_;
};

class RouteStage : public Stage {
public:
  RouteStage(int in, std::vector<RoutePort> ports, std::string desc)
      : in_(in), ports_(std::move(ports)), desc_(std::move(desc)) {
    for (const auto& p : ports_)
      if (p.is_copy) require(p.src >= 0 && p.src < in_, "source out of range");
  }
  int arity_in() const override { return in_; }
  int arity_out() const override { return static_cast<int>(ports_.size()); }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<RouteMachine>(ports_);
  }
  std::string describe() const override { return desc_; }

private:
  int in_;
  std::vector<RoutePort> ports_;
  std::string desc_;
};

// ---- rank selection over the running sort of the inputs ----

// Ordered partition of input indices by their prefixes; sorting length-k
// prefixes gives the length-k prefixes of the sorted streams, so rank r's
// next bit is the bit of the refined group containing position r.
struct OrderedPartition {
  std::vector<std::vector<int>> groups;

  explicit OrderedPartition(const std::vector<int>& members) {
    if (!members.empty()) groups.push_back(members);
  }

  // refine by this column's bits; returns the bit at each rank position
  std::vector<uint8_t> refine(const std::vector<uint8_t>& column) {
    std::vector<std::vector<int>> next;
    std::vector<uint8_t> rank_bits;
    for (const auto& g : groups) {
      std::vector<int> zeros, ones;
      for (int i : g)
        (column[static_cast<size_t>(i)] ? ones : zeros).push_back(i);
      if (!zeros.empty()) {
        next.push_back(zeros);
        rank_bits.insert(rank_bits.end(), zeros.size(), 0);
      }
      if (!ones.empty()) {
        next.push_back(ones);
        rank_bits.insert(rank_bits.end(), ones.size(), 1);
      }
    }
    groups = std::move(next);
    return rank_bits;
  }

  // input holding rank r alone, or -1 while its group is still tied
  int sole_owner(int rank) const {
    int acc = 0;
    for (const auto& g : groups) {
      acc += static_cast<int>(g.size());
      if (rank <= acc)
        return g.size() == 1 ? g.front() : -1;
    }
    return -1;
  }

  std::string key() const {
    std::string s;
    for (const auto& g : groups) {
      for (int i : g) s += std::to_string(i) + ",";
      s.push_back('|');
    }
    return s;
  }
};

struct RankPort {
  bool is_rank = true;
  int rank = 1;  // 1-based among the sorted inputs
  CantorPoint constant;
};

class RankMachine : public Machine {
public:
  RankMachine(int n, const std::vector<RankPort>& outs)
      : part_([n] {
          std::vector<int> all(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
          return all;
        }()) {
    for (const auto& o : outs) {
      PortState p;
      if (!o.is_rank) {
        p.mode = PortState::Mode::Const;
        p.constant = o.constant;
      }
      ports_.push_back(std::move(p));
      ranks_.push_back(o.is_rank ? o.rank : -1);
    }
  }

  void feed(const std::vector<uint8_t>& column) override {
    std::vector<uint8_t> bits = part_.refine(column);
    ++consumed_;
    for (size_t j = 0; j < ports_.size(); ++j) {
      if (ports_[j].terminal()) continue;
      int r = ranks_[j];
      ports_[j].buffer.push_back(bits[static_cast<size_t>(r) - 1] ? '1' : '0');
      int owner = part_.sole_owner(r);
      if (owner >= 0) {
        ports_[j].mode = PortState::Mode::Copy;
        ports_[j].src = owner;
        ports_[j].offset = consumed_;
      }
    }
  }

  const std::vector<PortState>& ports() const override { return ports_; }
  std::string state_key() const override { return part_.key(); }

private:
  OrderedPartition part_;
  std::vector<PortState> ports_;
  std::vector<int> ranks_;
  uint64_t consumed_ = 0;
};

class RankStage : public Stage {
public:
  RankStage(int n, std::vector<RankPort> outs, std::string desc)
      : n_(n), outs_(std::move(outs)), desc_(std::move(desc)) {
    for (const auto& o : outs_)
      if (o.is_rank) require(o.rank >= 1 && o.rank <= n_, "rank out of range");
  }
  int arity_in() const override { return n_; }
  int arity_out() const override { return static_cast<int>(outs_.size()); }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<RankMachine>(n_, outs_);
  }
  std::string describe() const override { return desc_; }

private:
  int n_;
  std::vector<RankPort> outs_;
  std::string desc_;
};

// ---- split switch for the 2->2 equivalences ----

class SwitchMachine : public Machine {
public:
  SwitchMachine() : ports_(2) {}

  void feed(const std::vector<uint8_t>& column) override {
    if (!watching_) return;
    uint8_t a = column[0], b = column[1];
    if (a == b) {
      ports_[0].buffer.push_back(a ? '1' : '0');
      ports_[1].buffer.push_back(b ? '1' : '0');
      ++consumed_;
      return;
    }
    // first disagreement: x < y collapses to (x,x), x > y stays (x,y)
    ports_[0].mode = PortState::Mode::Copy;
    ports_[0].src = 0;
    ports_[0].offset = consumed_;
    ports_[1].mode = PortState::Mode::Copy;
    ports_[1].src = a < b ? 0 : 1;
    ports_[1].offset = consumed_;
    watching_ = false;
    ++consumed_;
  }

  const std::vector<PortState>& ports() const override { return ports_; }
  std::string state_key() const override { return watching_ ? "w" : "d"; }

private:
  std::vector<PortState> ports_;
  bool watching_ = true;
  uint64_t consumed_ = 0;
};

class SwitchStage : public Stage {
public:
  int arity_in() const override { return 2; }
  int arity_out() const override { return 2; }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<SwitchMachine>();
  }
  std::string describe() const override { return "switch_on_split"; }
};

// ---- single-vertex flip machine ----

// Coordinates with v(i)=1 (set T) pass through; the others (set Z) pass
// through until the running max over Z first compares below the running min
// over T. At that trigger the least apparent maximum switches to copying the
// min-over-T stream, the other apparent maxima carry the smallest values
// among themselves, and everything else keeps its own stream. min over an
// empty T is taken as 1^w.
class KeyFlipMachine : public Machine {
public:
  KeyFlipMachine(int n, const Vertex& v) : ports_(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) {
      if (v.get(i + 1))
        t_.push_back(i);
      else
        z_.push_back(i);
    }
    for (int i : t_) {
      auto& p = ports_[static_cast<size_t>(i)];
      p.mode = PortState::Mode::Copy;
      p.src = i;
      p.offset = 0;
    }
    max_cand_ = z_;
    min_cand_ = t_;
  }

  void feed(const std::vector<uint8_t>& column) override {
    if (phase_ == Phase::Wait)
      feed_wait(column);
    else if (phase_ == Phase::Trig)
      feed_trig(column);
    ++consumed_;
  }

  const std::vector<PortState>& ports() const override { return ports_; }

  std::string state_key() const override {
    std::string key = phase_ == Phase::Wait  ? "W"
                      : phase_ == Phase::Trig ? "T"
                                              : "I";
    key += join_ints(max_cand_) + "/" + join_ints(min_cand_) + "/";
    if (upart_) key += upart_->key();
    return key;
  }

private:
  enum class Phase { Wait, Trig, Ident };

  static std::vector<int> keep_matching(const std::vector<int>& cand,
                                        const std::vector<uint8_t>& column,
                                        uint8_t bit) {
    std::vector<int> out;
    for (int i : cand)
      if (column[static_cast<size_t>(i)] == bit) out.push_back(i);
    return out;
  }

  void feed_wait(const std::vector<uint8_t>& column) {
    uint8_t mb = 0;
    for (int i : max_cand_) mb = std::max(mb, column[static_cast<size_t>(i)]);
    uint8_t nb = 1;
    for (int i : min_cand_) nb = std::min(nb, column[static_cast<size_t>(i)]);

    if (mb > nb) {  // max over Z is provably right of min over T: identity
      for (int i : z_) {
        auto& p = ports_[static_cast<size_t>(i)];
        p.mode = PortState::Mode::Copy;
        p.src = i;
        p.offset = consumed_;
      }
      phase_ = Phase::Ident;
      return;
    }
    if (mb == nb) {
      max_cand_ = keep_matching(max_cand_, column, mb);
      min_cand_ = keep_matching(min_cand_, column, nb);
      for (int i : z_)
        ports_[static_cast<size_t>(i)].buffer.push_back(
            column[static_cast<size_t>(i)] ? '1' : '0');
      return;
    }

    // mb < nb: the comparison first looks true at this column
    u_ = keep_matching(max_cand_, column, mb);
    istar_ = u_.front();
    auto& star = ports_[static_cast<size_t>(istar_)];
    star.buffer.push_back('1');  // nb is 1 whenever mb < nb
    if (t_.empty()) {
      star.mode = PortState::Mode::Const;
      star.constant = CantorPoint::ones();
    } else {
      min_cand_ = keep_matching(min_cand_, column, nb);
      if (min_cand_.size() == 1) {
        star.mode = PortState::Mode::Copy;
        star.src = min_cand_.front();
        star.offset = consumed_ + 1;
      }
    }
    std::vector<int> rest(u_.begin() + 1, u_.end());
    for (size_t k = 0; k < rest.size(); ++k) {
      auto& p = ports_[static_cast<size_t>(rest[k])];
      p.buffer.push_back('0');  // all apparent maxima read 0 here
      rank_port_.push_back(static_cast<int>(rest[k]));
    }
    upart_.emplace(u_);
    for (int i : z_) {
      if (std::find(u_.begin(), u_.end(), i) != u_.end()) continue;
      auto& p = ports_[static_cast<size_t>(i)];
      p.mode = PortState::Mode::Copy;
      p.src = i;
      p.offset = consumed_;
    }
    phase_ = Phase::Trig;
  }

  void feed_trig(const std::vector<uint8_t>& column) {
    auto& star = ports_[static_cast<size_t>(istar_)];
    if (!star.terminal()) {
      uint8_t nb = 1;
      for (int i : min_cand_) nb = std::min(nb, column[static_cast<size_t>(i)]);
      star.buffer.push_back(nb ? '1' : '0');
      min_cand_ = keep_matching(min_cand_, column, nb);
      if (min_cand_.size() == 1) {
        star.mode = PortState::Mode::Copy;
        star.src = min_cand_.front();
        star.offset = consumed_ + 1;
      }
    }
    bool open = false;
    for (int i : rank_port_)
      if (!ports_[static_cast<size_t>(i)].terminal()) open = true;
    if (open) {
      std::vector<uint8_t> bits = upart_->refine(column);
      for (size_t k = 0; k < rank_port_.size(); ++k) {
        auto& p = ports_[static_cast<size_t>(rank_port_[k])];
        if (p.terminal()) continue;
        int r = static_cast<int>(k) + 1;
        p.buffer.push_back(bits[static_cast<size_t>(r) - 1] ? '1' : '0');
        int owner = upart_->sole_owner(r);
        if (owner >= 0) {
          p.mode = PortState::Mode::Copy;
          p.src = owner;
          p.offset = consumed_ + 1;
        }
      }
    }
  }

  std::vector<int> t_, z_;
  std::vector<int> max_cand_, min_cand_;
  std::vector<int> u_, rank_port_;
  std::optional<OrderedPartition> upart_;
  int istar_ = -1;
  Phase phase_ = Phase::Wait;
  uint64_t consumed_ = 0;
  std::vector<PortState> ports_;
};

class KeyFlipStage : public Stage {
public:
  KeyFlipStage(int n, const Vertex& v) : n_(n), v_(v) {
    require(v.n == n, "dimension mismatch");
    require(v.weight() < n, "flip vertex must lie below the top");
  }
  int arity_in() const override { return n_; }
  int arity_out() const override { return n_; }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<KeyFlipMachine>(n_, v_);
  }
  std::string describe() const override {
    return "flip n=" + std::to_string(n_) + " v=" + v_.str();
  }

private:
  int n_;
  Vertex v_;
};

// ---- interval localizer pre-processing ----

class IntervalMachine : public Machine {
public:
  IntervalMachine(const ThresholdVector& t,
                  const std::vector<std::pair<CantorPoint, CantorPoint>>& seps)
      : race_(t, seps), ports_(static_cast<size_t>(t.n())) {
    if (race_.decided()) settle(*race_.decided());
  }

  void feed(const std::vector<uint8_t>& column) override {
    if (done_) return;
    auto d = race_.feed(column[0] != 0);
    if (d) settle(*d);
  }

  const std::vector<PortState>& ports() const override { return ports_; }
  std::string state_key() const override {
    return done_ ? "d" : race_.state_key();
  }

private:
  void settle(int c) {
    for (size_t j = 0; j < ports_.size(); ++j) {
      if (static_cast<int>(j) == c) {
        ports_[j].mode = PortState::Mode::Copy;
        ports_[j].src = 0;
        ports_[j].offset = 0;
      } else {
        ports_[j].mode = PortState::Mode::Const;
        ports_[j].constant = CantorPoint::zeros();
      }
    }
    done_ = true;
  }

  IntervalRace race_;
  std::vector<PortState> ports_;
  bool done_ = false;
};

class IntervalStage : public Stage {
public:
  IntervalStage(ThresholdVector t,
                std::vector<std::pair<CantorPoint, CantorPoint>> seps)
      : t_(std::move(t)), seps_(std::move(seps)) {}
  int arity_in() const override { return 1; }
  int arity_out() const override { return t_.n(); }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<IntervalMachine>(t_, seps_);
  }
  std::string describe() const override {
    std::string s = "interval_pre thresholds=";
    for (size_t i = 0; i < t_.thresholds.size(); ++i) {
      if (i) s.push_back(',');
      s += t_.thresholds[i].str();
    }
    s += " seps=";
    for (size_t i = 0; i < seps_.size(); ++i) {
      if (i) s.push_back(',');
      s += seps_[i].first.str() + ":" + seps_[i].second.str();
    }
    return s;
  }

private:
  ThresholdVector t_;
  std::vector<std::pair<CantorPoint, CantorPoint>> seps_;
};

// ---- adversarial fixture: consumes input, never produces ----

class StallMachine : public Machine {
public:
  explicit StallMachine(int n) : ports_(static_cast<size_t>(n)) {}
  void feed(const std::vector<uint8_t>&) override {}
  const std::vector<PortState>& ports() const override { return ports_; }
  std::string state_key() const override { return "stall"; }

private:
  std::vector<PortState> ports_;
};

class StallStage : public Stage {
public:
  explicit StallStage(int n) : n_(n) {}
  int arity_in() const override { return n_; }
  int arity_out() const override { return n_; }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<StallMachine>(n_);
  }
  std::string describe() const override {
    return "stall n=" + std::to_string(n_);
  }

private:
  int n_;
};

Transducer route_stage(int in, std::vector<RoutePort> ports,
                       std::string desc) {
  return Transducer(
      std::make_shared<RouteStage>(in, std::move(ports), std::move(desc)));
}

Transducer rank_stage(int n, std::vector<RankPort> outs, std::string desc) {
  return Transducer(
      std::make_shared<RankStage>(n, std::move(outs), std::move(desc)));
}

}  // namespace

Transducer build_identity(int n) {
  require(n >= 0, "negative arity");
  std::vector<RoutePort> ports;
  for (int i = 0; i < n; ++i) ports.push_back(RoutePort{true, i, false, {}});
  return route_stage(n, std::move(ports), "identity n=" + std::to_string(n));
}

Transducer build_bit_flip() {
  return route_stage(1, {RoutePort{true, 0, true, {}}}, "bit_flip");
}

Transducer build_wires(int n, const std::vector<int>& map) {
  std::vector<RoutePort> ports;
  for (int s : map) {
    require(s >= 1 && s <= n, "wire source out of range");
    ports.push_back(RoutePort{true, s - 1, false, {}});
  }
  return route_stage(n, std::move(ports),
                     "wires n=" + std::to_string(n) + " map=" + join_ints(map));
}

Transducer build_max() { return rank_stage(2, {RankPort{true, 2, {}}}, "max"); }

Transducer build_min() { return rank_stage(2, {RankPort{true, 1, {}}}, "min"); }

Transducer build_maxmin_pair() {
  return rank_stage(2, {RankPort{true, 2, {}}, RankPort{true, 1, {}}},
                    "maxmin");
}

Transducer build_switch_on_split() {
  return Transducer(std::make_shared<SwitchStage>());
}

Transducer build_sorted(int n) {
  require(n >= 1, "arity must be positive");
  std::vector<RankPort> outs;
  for (int r = 1; r <= n; ++r) outs.push_back(RankPort{true, r, {}});
  return rank_stage(n, std::move(outs), "sorted n=" + std::to_string(n));
}

Transducer build_wtow(int n, int k0) {
  require(n >= 2 && k0 >= 1 && k0 <= n - 1, "k0 out of range");
  std::vector<RankPort> outs;
  for (int r = 1; r <= n - k0; ++r) outs.push_back(RankPort{true, r, {}});
  outs.push_back(RankPort{true, n - k0, {}});
  for (int r = n - k0 + 1; r <= n - 1; ++r)
    outs.push_back(RankPort{true, r, {}});
  return rank_stage(n, std::move(outs),
                    "wtow n=" + std::to_string(n) +
                        " k0=" + std::to_string(k0));
}

Transducer build_wtow1(int n, int k0) {
  require(n >= 1 && k0 >= 1 && k0 <= n - 1, "k0 out of range");
  std::vector<RankPort> outs;
  for (int r = 1; r <= n - k0 - 1; ++r) outs.push_back(RankPort{true, r, {}});
  for (int r = n - k0 + 1; r <= n; ++r) outs.push_back(RankPort{true, r, {}});
  outs.push_back(RankPort{false, 0, CantorPoint::ones()});
  return rank_stage(n, std::move(outs),
                    "wtow1 n=" + std::to_string(n) +
                        " k0=" + std::to_string(k0));
}

Transducer build_keylemma_flip(int n, const Vertex& v) {
  return Transducer(std::make_shared<KeyFlipStage>(n, v));
}

Transducer build_chain_embed(const CoveringChain& chain) {
  require(!chain.vertices.empty(), "empty chain");
  int n = chain.vertices.front().n;
  require(static_cast<int>(chain.vertices.size()) == n + 1 &&
              chain.vertices.front().bits == 0,
          "malformed chain");
  for (int i = 1; i <= n; ++i)
    require(chain.vertices[static_cast<size_t>(i)].covers(
                chain.vertices[static_cast<size_t>(i) - 1]),
            "malformed chain");
  std::vector<RankPort> outs(static_cast<size_t>(n));
  std::vector<int> added;
  for (int i = 1; i <= n; ++i) {
    int c = chain.added_coord(i);
    added.push_back(c);
    outs[static_cast<size_t>(c) - 1] = RankPort{true, n + 1 - i, {}};
  }
  return rank_stage(n, std::move(outs),
                    "chain_embed n=" + std::to_string(n) +
                        " add=" + join_ints(added));
}

Transducer build_const_plug(int n, const std::vector<int>& idx,
                            const std::vector<uint8_t>& bits) {
  require(idx.size() == bits.size(), "idx/bits length mismatch");
  std::vector<RoutePort> ports;
  for (int i = 0; i < n; ++i) ports.push_back(RoutePort{true, i, false, {}});
  std::string idx_s, bits_s;
  for (size_t j = 0; j < idx.size(); ++j) {
    require(idx[j] >= 1 && idx[j] <= n, "index out of range");
    require(bits[j] <= 1, "bits must be 0/1");
    auto& p = ports[static_cast<size_t>(idx[j]) - 1];
    require(p.is_copy, "repeated index");
    p = RoutePort{false, 0, false,
                  bits[j] ? CantorPoint::ones() : CantorPoint::zeros()};
    if (j) {
      idx_s.push_back(',');
      bits_s.push_back(',');
    }
    idx_s += std::to_string(idx[j]);
    bits_s += std::to_string(static_cast<int>(bits[j]));
  }
  return route_stage(n, std::move(ports),
                     "const_plug n=" + std::to_string(n) + " idx=" + idx_s +
                         " bits=" + bits_s);
}

namespace {

Transducer pad_with(int l, int n, const CantorPoint& c, const char* name) {
  require(l >= 0 && l <= n, "padding bounds");
  std::vector<RoutePort> ports;
  for (int i = 0; i < l; ++i) ports.push_back(RoutePort{true, i, false, {}});
  for (int i = l; i < n; ++i) ports.push_back(RoutePort{false, 0, false, c});
  return route_stage(l, std::move(ports),
                     std::string(name) + " from=" + std::to_string(l) +
                         " to=" + std::to_string(n));
}

}  // namespace

Transducer build_pad_ones(int l, int n) {
  return pad_with(l, n, CantorPoint::ones(), "pad_ones");
}

Transducer build_pad_zeros(int l, int n) {
  return pad_with(l, n, CantorPoint::zeros(), "pad_zeros");
}

Transducer build_keep_smallest(int n, int l) {
  require(l >= 0 && l <= n, "keep bounds");
  std::vector<RankPort> outs;
  for (int r = 1; r <= l; ++r) outs.push_back(RankPort{true, r, {}});
  return rank_stage(n, std::move(outs),
                    "keep_smallest n=" + std::to_string(n) +
                        " l=" + std::to_string(l));
}

Transducer build_stall(int n) {
  return Transducer(std::make_shared<StallStage>(n));
}

WitnessPair build_interval_localizer(
    const ThresholdVector& t,
    const std::vector<std::pair<CantorPoint, CantorPoint>>& separators) {
  t.require_increasing();
  require(static_cast<int>(separators.size()) == t.n() - 1,
          "separator count must be n-1");
  for (size_t i = 0; i + 1 < t.thresholds.size(); ++i) {
    const auto& [lo, hi] = separators[i];
    require(lex_less(t.thresholds[i], lo) && lex_less(lo, hi) &&
                lex_less(hi, t.thresholds[i + 1]),
            "invalid separators");
  }
  WitnessPair w;
  w.pre = Transducer(std::make_shared<IntervalStage>(t, separators));
  w.post.kind = PostMap::Kind::Plain;
  w.post.thresholds = t;
  w.post.separators = separators;
  return w;
}

}  // namespace stepfn
