#include "stepfn/transducer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace stepfn {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string transform_copy(const std::string& bits, bool negate) {
  if (!negate) return bits;
  std::string out = bits;
  for (char& c : out) c = c == '0' ? '1' : '0';
  return out;
}

CantorPoint copy_tail(const CantorPoint& src, uint64_t offset, bool negate) {
  CantorPoint tail = src.drop(offset);
  return negate ? tail.flipped() : tail;
}

}  // namespace

Transducer::Transducer(std::shared_ptr<const Stage> stage) {
  require(stage != nullptr, "null stage");
  stages_.push_back(std::move(stage));
}

int Transducer::arity_in() const {
  require(!stages_.empty(), "empty transducer");
  return stages_.front()->arity_in();
}

int Transducer::arity_out() const {
  require(!stages_.empty(), "empty transducer");
  return stages_.back()->arity_out();
}

Transducer compose(const Transducer& outer, const Transducer& inner) {
  require(inner.arity_out() == outer.arity_in(),
          "arity mismatch in composition");
  Transducer t;
  t.stages_ = inner.stages_;
  t.stages_.insert(t.stages_.end(), outer.stages_.begin(),
                   outer.stages_.end());
  return t;
}

namespace {

class ProductMachine : public Machine {
public:
  ProductMachine(std::unique_ptr<Machine> left, std::unique_ptr<Machine> right,
                 int left_in)
      : left_(std::move(left)), right_(std::move(right)), left_in_(left_in) {
    merge();
  }

  void feed(const std::vector<uint8_t>& column) override {
    std::vector<uint8_t> a(column.begin(), column.begin() + left_in_);
    std::vector<uint8_t> b(column.begin() + left_in_, column.end());
    left_->feed(a);
    right_->feed(b);
    merge();
  }

  const std::vector<PortState>& ports() const override { return merged_; }

  std::string state_key() const override {
    return left_->state_key() + "*" + right_->state_key();
  }

private:
  void merge() {
    merged_ = left_->ports();
    for (PortState p : right_->ports()) {
      if (p.mode == PortState::Mode::Copy) p.src += left_in_;
      merged_.push_back(std::move(p));
    }
  }

  std::unique_ptr<Machine> left_, right_;
  int left_in_;
  std::vector<PortState> merged_;
};

class ProductStage : public Stage {
public:
  ProductStage(std::shared_ptr<const Stage> left,
               std::shared_ptr<const Stage> right)
      : left_(std::move(left)), right_(std::move(right)) {}

  int arity_in() const override {
    return left_->arity_in() + right_->arity_in();
  }
  int arity_out() const override {
    return left_->arity_out() + right_->arity_out();
  }
  std::unique_ptr<Machine> instantiate() const override {
    return std::make_unique<ProductMachine>(
        left_->instantiate(), right_->instantiate(), left_->arity_in());
  }
  std::string describe() const override {
    return "product( " + left_->describe() + " ; " + right_->describe() + " )";
  }

private:
  std::shared_ptr<const Stage> left_, right_;
};

}  // namespace

Transducer product(const Transducer& a, const Transducer& b) {
  require(!a.stages_.empty() && !b.stages_.empty(), "empty transducer");
  // Pad the shorter pipeline with identities so the stages zip up.
  size_t len = std::max(a.stages_.size(), b.stages_.size());
  Transducer t;
  for (size_t i = 0; i < len; ++i) {
    std::shared_ptr<const Stage> l =
        i < a.stages_.size()
            ? a.stages_[i]
            : build_identity(a.arity_out()).stages().front();
    std::shared_ptr<const Stage> r =
        i < b.stages_.size()
            ? b.stages_[i]
            : build_identity(b.arity_out()).stages().front();
    t.stages_.push_back(std::make_shared<ProductStage>(l, r));
  }
  return t;
}

namespace {

struct StageRun {
  bool ok = false;
  std::vector<CantorPoint> outputs;
  std::vector<std::string> partials;
  uint64_t depth = 0;
};

std::vector<CantorPoint> assemble_terminal(
    const Machine& m, const std::vector<CantorPoint>& xs) {
  std::vector<CantorPoint> out;
  for (const auto& p : m.ports()) {
    if (p.mode == PortState::Mode::Copy)
      out.push_back(prepend(
          p.buffer, copy_tail(xs[static_cast<size_t>(p.src)], p.offset,
                              p.negate)));
    else
      out.push_back(prepend(p.buffer, p.constant));
  }
  return out;
}

std::vector<std::string> partial_prefixes(const Machine& m,
                                          const std::vector<CantorPoint>& xs,
                                          uint64_t t) {
  std::vector<std::string> out;
  for (const auto& p : m.ports()) {
    switch (p.mode) {
      case PortState::Mode::Buffering:
        out.push_back(p.buffer);
        break;
      case PortState::Mode::Copy:
        out.push_back(p.buffer +
                      copy_tail(xs[static_cast<size_t>(p.src)], p.offset,
                                p.negate)
                          .take(t + 64));
        break;
      case PortState::Mode::Const:
        out.push_back(p.buffer + p.constant.take(t + 64));
        break;
    }
  }
  return out;
}

StageRun run_stage(const Stage& st, const std::vector<CantorPoint>& xs,
                   uint64_t budget) {
  auto m = st.instantiate();
  uint64_t pre = 0, cycle = 1;
  for (const auto& x : xs) {
    pre = std::max(pre, static_cast<uint64_t>(x.prefix().size()));
    cycle = std::lcm(cycle, static_cast<uint64_t>(x.period().size()));
  }

  // (phase, state fingerprint) -> time and buffer lengths at first sighting
  std::map<std::pair<uint64_t, std::string>,
           std::pair<uint64_t, std::vector<size_t>>>
      seen;

  StageRun res;
  for (uint64_t t = 0;; ++t) {
    if (m->all_terminal()) {
      res.ok = true;
      res.outputs = assemble_terminal(*m, xs);
      res.depth = t;
      return res;
    }
    if (t >= budget) break;
    if (t >= pre) {
      std::string key = m->state_key() + "|";
      for (const auto& p : m->ports())
        key.push_back(p.terminal() ? 'T' : 'B');
      std::vector<size_t> lens;
      for (const auto& p : m->ports()) lens.push_back(p.buffer.size());
      auto id = std::make_pair((t - pre) % cycle, key);
      auto it = seen.find(id);
      if (it != seen.end()) {
        // Same state, same upcoming columns: the run repeats from here.
        const auto& [t0, lens0] = it->second;
        bool closable = true;
        for (size_t j = 0; j < lens.size(); ++j) {
          const auto& p = m->ports()[j];
          if (!p.terminal() && lens[j] <= lens0[j]) closable = false;
        }
        if (!closable) break;  // silent port: no total output exists
        res.ok = true;
        res.depth = t;
        size_t j = 0;
        for (const auto& p : m->ports()) {
          if (p.terminal()) {
            if (p.mode == PortState::Mode::Copy)
              res.outputs.push_back(prepend(
                  p.buffer, copy_tail(xs[static_cast<size_t>(p.src)],
                                      p.offset, p.negate)));
            else
              res.outputs.push_back(prepend(p.buffer, p.constant));
          } else {
            std::string head = p.buffer.substr(0, lens0[j]);
            std::string block = p.buffer.substr(lens0[j]);
            res.outputs.emplace_back(head, block);
          }
          ++j;
        }
        return res;
      }
      seen.emplace(id, std::make_pair(t, std::move(lens)));
    }
    std::vector<uint8_t> column;
    column.reserve(xs.size());
    for (const auto& x : xs) column.push_back(x.bit(t) ? 1 : 0);
    m->feed(column);
    res.depth = t + 1;
  }
  res.partials = partial_prefixes(*m, xs, res.depth);
  return res;
}

std::vector<std::string> prefix_run_stage(const Stage& st,
                                          const std::vector<std::string>& in) {
  require(static_cast<int>(in.size()) == st.arity_in(),
          "arity mismatch in prefix run");
  auto m = st.instantiate();
  size_t len = SIZE_MAX;
  for (const auto& s : in) len = std::min(len, s.size());
  if (in.empty()) len = 0;
  for (size_t t = 0; t < len && !m->all_terminal(); ++t) {
    std::vector<uint8_t> column;
    column.reserve(in.size());
    for (const auto& s : in)
      column.push_back(s[t] == '1' ? 1 : 0);
    m->feed(column);
  }
  size_t cap = len + 64;
  std::vector<std::string> out;
  for (const auto& p : m->ports()) {
    switch (p.mode) {
      case PortState::Mode::Buffering:
        out.push_back(p.buffer);
        break;
      case PortState::Mode::Copy: {
        const std::string& s = in[static_cast<size_t>(p.src)];
        size_t off = std::min<size_t>(p.offset, s.size());
        out.push_back(p.buffer + transform_copy(s.substr(off), p.negate));
        break;
      }
      case PortState::Mode::Const:
        out.push_back(p.buffer + p.constant.take(cap));
        break;
    }
  }
  return out;
}

}  // namespace

RunResult run(const Transducer& t, const std::vector<CantorPoint>& xs,
              uint64_t budget) {
  require(static_cast<int>(xs.size()) == t.arity_in(), "arity mismatch");
  RunResult res;
  std::vector<CantorPoint> cur = xs;
  uint64_t depth = 0;
  for (size_t i = 0; i < t.stages().size(); ++i) {
    StageRun sr = run_stage(*t.stages()[i], cur, budget);
    depth = std::max(depth, sr.depth);
    if (!sr.ok) {
      // Push what is known through the rest of the pipeline.
      std::vector<std::string> partial = sr.partials;
      for (size_t j = i + 1; j < t.stages().size(); ++j)
        partial = prefix_run_stage(*t.stages()[j], partial);
      res.ok = false;
      res.partials = std::move(partial);
      res.depth = depth;
      return res;
    }
    cur = std::move(sr.outputs);
  }
  res.ok = true;
  res.outputs = std::move(cur);
  res.depth = depth;
  return res;
}

std::vector<std::string> prefix_run(const Transducer& t,
                                    const std::vector<std::string>& inputs) {
  std::vector<std::string> cur = inputs;
  for (const auto& st : t.stages()) cur = prefix_run_stage(*st, cur);
  return cur;
}

IntervalRace::IntervalRace(
    const ThresholdVector& t,
    const std::vector<std::pair<CantorPoint, CantorPoint>>& seps) {
  int n = t.n();
  require(n >= 1, "empty threshold vector");
  require(static_cast<int>(seps.size()) == n - 1,
          "separator count must be n-1");
  auto add_cmp = [&](const CantorPoint& q, bool want_less) {
    cmps_.push_back(Cmp{q, want_less, 0});
    return static_cast<int>(cmps_.size()) - 1;
  };
  case_conds_.resize(static_cast<size_t>(n));
  if (n >= 2) {
    case_conds_[0].push_back(add_cmp(seps[0].second, true));
    for (int c = 1; c <= n - 2; ++c) {
      case_conds_[static_cast<size_t>(c)].push_back(
          add_cmp(seps[static_cast<size_t>(c) - 1].first, false));
      case_conds_[static_cast<size_t>(c)].push_back(
          add_cmp(seps[static_cast<size_t>(c)].second, true));
    }
    case_conds_[static_cast<size_t>(n) - 1].push_back(
        add_cmp(seps[static_cast<size_t>(n) - 2].first, false));
  } else {
    decided_ = 0;  // single case, no conditions
  }
}

std::optional<int> IntervalRace::feed(bool bit) {
  if (decided_) return decided_;
  for (auto& c : cmps_) {
    if (c.status != 0) continue;
    bool qbit = c.q.bit(depth_);
    if (bit == qbit) continue;
    bool lt = !bit && qbit;
    c.status = (c.want_less == lt) ? 1 : -1;
  }
  ++depth_;
  for (size_t c = 0; c < case_conds_.size(); ++c) {
    bool all = true;
    for (int ci : case_conds_[c])
      if (cmps_[static_cast<size_t>(ci)].status != 1) all = false;
    if (all) {
      decided_ = static_cast<int>(c);
      break;
    }
  }
  return decided_;
}

std::string IntervalRace::state_key() const {
  std::string key = decided_ ? "d" + std::to_string(*decided_) : "u";
  for (const auto& c : cmps_) {
    key.push_back(';');
    if (c.status != 0) {
      key.push_back(c.status > 0 ? '+' : '-');
    } else if (depth_ >= c.q.prefix().size()) {
      key.push_back('z');  // inside the all-zero tail of the dyadic
    } else {
      key += "p" + std::to_string(depth_);
    }
  }
  return key;
}

int eval_post(const PostMap& post, const std::vector<CantorPoint>& inputs,
              int oracle_answer) {
  if (post.kind == PostMap::Kind::Strong) {
    require(oracle_answer >= 0 &&
                oracle_answer < static_cast<int>(post.table.size()),
            "oracle answer outside post table");
    return post.table[static_cast<size_t>(oracle_answer)];
  }
  require(inputs.size() == 1, "plain post reads a single input");
  IntervalRace race(post.thresholds, post.separators);
  uint64_t cap = 4096 + inputs[0].prefix().size() + inputs[0].period().size();
  for (uint64_t i = 0; !race.decided() && i <= cap; ++i)
    race.feed(inputs[0].bit(i));
  if (!race.decided())
    throw std::runtime_error("plain post failed to decide a case");
  return *race.decided() + oracle_answer;
}

std::optional<int> eval_post_prefix(const PostMap& post,
                                    const std::vector<std::string>& inputs,
                                    int oracle_answer) {
  if (post.kind == PostMap::Kind::Strong) {
    if (oracle_answer < 0 ||
        oracle_answer >= static_cast<int>(post.table.size()))
      return std::nullopt;
    return post.table[static_cast<size_t>(oracle_answer)];
  }
  if (inputs.size() != 1) return std::nullopt;
  IntervalRace race(post.thresholds, post.separators);
  for (char c : inputs[0]) {
    if (race.decided()) break;
    race.feed(c == '1');
  }
  if (!race.decided()) return std::nullopt;
  return *race.decided() + oracle_answer;
}

}  // namespace stepfn
