#include "stepfn/io.hpp"

#include <map>
#include <sstream>

namespace stepfn {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, int line_no) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected an integer, got '" + s + "'");
  }
}

std::vector<int> parse_int_list(const std::string& s, int line_no) {
  std::vector<int> out;
  if (s.empty()) return out;
  for (const auto& part : split(s, ',')) out.push_back(parse_int(part, line_no));
  return out;
}

// Key=value arguments after the stage or section name.
std::map<std::string, std::string> parse_kv(
    const std::vector<std::string>& tokens, size_t from, int line_no) {
  std::map<std::string, std::string> kv;
  for (size_t i = from; i < tokens.size(); ++i) {
    size_t eq = tokens[i].find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, "expected key=value, got '" + tokens[i] + "'");
    kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv,
                        const std::string& key, int line_no) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(line_no, "missing " + key + "=");
  return it->second;
}

CantorPoint parse_point(const std::string& s, int line_no) {
  try {
    return CantorPoint::parse(s);
  } catch (const std::exception& e) {
    throw ParseError(line_no, std::string("bad point '") + s + "': " + e.what());
  }
}

// Split "A ; B" at the top level of product nesting.
std::pair<std::string, std::string> split_product(const std::string& inner,
                                                  int line_no) {
  int depth = 0;
  for (size_t i = 0; i + 2 < inner.size(); ++i) {
    if (inner[i] == '(') ++depth;
    if (inner[i] == ')') --depth;
    if (depth == 0 && inner.compare(i, 3, " ; ") == 0)
      return {trim(inner.substr(0, i)), trim(inner.substr(i + 3))};
  }
  throw ParseError(line_no, "malformed product stage");
}

}  // namespace

TruthTable parse_table_text(const std::string& text) {
  auto lines = split_lines(text);
  size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i >= lines.size()) throw ParseError(1, "empty table file");
  const int line_no = static_cast<int>(i) + 1;
  std::string head = trim(lines[i]);
  std::istringstream hs(head);
  std::string tok;
  hs >> tok;
  if (tok.rfind("n=", 0) != 0)
    throw ParseError(line_no, "table header must start with n=");
  const int n = parse_int(tok.substr(2), line_no);
  if (n < 0 || n > 16) throw ParseError(line_no, "dimension out of range");
  std::string rest;
  hs >> rest;
  std::string bits;
  if (!rest.empty()) {
    if (rest.rfind("hex=", 0) != 0)
      throw ParseError(line_no, "unexpected token '" + rest + "'");
    for (char c : rest.substr(4)) {
      int v;
      if (c >= '0' && c <= '9')
        v = c - '0';
      else if (c >= 'a' && c <= 'f')
        v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        v = c - 'A' + 10;
      else
        throw ParseError(line_no, "bad hex digit");
      for (int b = 3; b >= 0; --b) bits.push_back((v >> b) & 1 ? '1' : '0');
    }
    const size_t want = size_t{1} << n;
    if (bits.size() < want || bits.size() >= want + 4)
      throw ParseError(line_no, "hex payload has the wrong size");
    bits = bits.substr(bits.size() - want);  // leading pad bits are zero-fill
  } else {
    ++i;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i >= lines.size())
      throw ParseError(line_no, "missing table value line");
    bits = trim(lines[i]);
  }
  if (bits.size() != size_t{1} << n)
    throw ParseError(static_cast<int>(i) + 1, "expected " +
                                                  std::to_string(1u << n) +
                                                  " value characters");
  for (char c : bits)
    if (c != '0' && c != '1')
      throw ParseError(static_cast<int>(i) + 1, "values must be 0 or 1");
  return TruthTable::from_bits(n, bits);
}

std::string emit_table(const TruthTable& t) {
  return "n=" + std::to_string(t.n()) + "\n" + t.bits() + "\n";
}

Transducer parse_stage_line(const std::string& raw, int line_no) {
  const std::string line = trim(raw);
  if (line.rfind("product( ", 0) == 0) {
    if (line.size() < 11 || line.compare(line.size() - 2, 2, " )") != 0)
      throw ParseError(line_no, "malformed product stage");
    auto [l, r] = split_product(line.substr(9, line.size() - 11), line_no);
    return product(parse_stage_line(l, line_no), parse_stage_line(r, line_no));
  }
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  if (tokens.empty()) throw ParseError(line_no, "empty stage line");
  const std::string& name = tokens[0];
  auto kv = parse_kv(tokens, 1, line_no);
  auto geti = [&](const std::string& key) {
    return parse_int(need(kv, key, line_no), line_no);
  };
  try {
    if (name == "identity") return build_identity(geti("n"));
    if (name == "bit_flip") return build_bit_flip();
    if (name == "wires")
      return build_wires(geti("n"), parse_int_list(need(kv, "map", line_no),
                                                   line_no));
    if (name == "max") return build_max();
    if (name == "min") return build_min();
    if (name == "maxmin") return build_maxmin_pair();
    if (name == "switch_on_split") return build_switch_on_split();
    if (name == "sorted") return build_sorted(geti("n"));
    if (name == "wtow") return build_wtow(geti("n"), geti("k0"));
    if (name == "wtow1") return build_wtow1(geti("n"), geti("k0"));
    if (name == "flip") {
      const int n = geti("n");
      return build_keylemma_flip(n, Vertex::parse(n, need(kv, "v", line_no)));
    }
    if (name == "chain_embed") {
      const int n = geti("n");
      auto added = parse_int_list(need(kv, "add", line_no), line_no);
      if (static_cast<int>(added.size()) != n)
        throw ParseError(line_no, "chain_embed needs n added coordinates");
      CoveringChain chain;
      chain.vertices.push_back(Vertex(n, 0));
      for (int c : added) {
        Vertex prev = chain.vertices.back();
        if (c < 1 || c > n || prev.get(c))
          throw ParseError(line_no, "bad added coordinate list");
        chain.vertices.push_back(prev.with(c, true));
      }
      return build_chain_embed(chain);
    }
    if (name == "const_plug") {
      auto idx = parse_int_list(need(kv, "idx", line_no), line_no);
      auto raw_bits = parse_int_list(need(kv, "bits", line_no), line_no);
      std::vector<uint8_t> bits(raw_bits.begin(), raw_bits.end());
      return build_const_plug(geti("n"), idx, bits);
    }
    if (name == "pad_ones") return build_pad_ones(geti("from"), geti("to"));
    if (name == "pad_zeros") return build_pad_zeros(geti("from"), geti("to"));
    if (name == "keep_smallest")
      return build_keep_smallest(geti("n"), geti("l"));
    if (name == "stall") return build_stall(geti("n"));
    if (name == "interval_pre") {
      ThresholdVector t;
      for (const auto& p : split(need(kv, "thresholds", line_no), ','))
        t.thresholds.push_back(parse_point(p, line_no));
      std::vector<std::pair<CantorPoint, CantorPoint>> seps;
      const std::string& sep_s = need(kv, "seps", line_no);
      if (!sep_s.empty())
        for (const auto& p : split(sep_s, ',')) {
          auto halves = split(p, ':');
          if (halves.size() != 2)
            throw ParseError(line_no, "separator must be lo:hi");
          seps.emplace_back(parse_point(halves[0], line_no),
                            parse_point(halves[1], line_no));
        }
      return build_interval_localizer(t, seps).pre;
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(line_no, std::string("bad stage arguments: ") + e.what());
  }
  throw ParseError(line_no, "unknown stage '" + name + "'");
}

PostMap parse_post_line(const std::string& raw, int line_no) {
  const std::string line = trim(raw);
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  if (tokens.size() < 2 || tokens[0] != "post")
    throw ParseError(line_no, "expected a post line");
  auto kv = parse_kv(tokens, 2, line_no);
  PostMap post;
  if (tokens[1] == "strong") {
    post.kind = PostMap::Kind::Strong;
    auto map = parse_int_list(need(kv, "map", line_no), line_no);
    if (map.size() != 2 || map[0] < 0 || map[0] > 1 || map[1] < 0 ||
        map[1] > 1)
      throw ParseError(line_no, "strong map must list two bits");
    post.table = map;
    return post;
  }
  if (tokens[1] == "plain") {
    post.kind = PostMap::Kind::Plain;
    for (const auto& p : split(need(kv, "thresholds", line_no), ','))
      post.thresholds.thresholds.push_back(parse_point(p, line_no));
    const std::string& sep_s = need(kv, "seps", line_no);
    if (!sep_s.empty())
      for (const auto& p : split(sep_s, ',')) {
        auto halves = split(p, ':');
        if (halves.size() != 2)
          throw ParseError(line_no, "separator must be lo:hi");
        post.separators.emplace_back(parse_point(halves[0], line_no),
                                     parse_point(halves[1], line_no));
      }
    if (post.separators.size() + 1 != post.thresholds.thresholds.size())
      throw ParseError(line_no, "need one separator per threshold pair");
    return post;
  }
  throw ParseError(line_no, "post kind must be strong or plain");
}

std::string emit_post_line(const PostMap& post) {
  if (post.kind == PostMap::Kind::Strong)
    return "post strong map=" + std::to_string(post.table[0]) + "," +
           std::to_string(post.table[1]);
  std::string s = "post plain thresholds=";
  for (size_t i = 0; i < post.thresholds.thresholds.size(); ++i) {
    if (i) s.push_back(',');
    s += post.thresholds.thresholds[i].str();
  }
  s += " seps=";
  for (size_t i = 0; i < post.separators.size(); ++i) {
    if (i) s.push_back(',');
    s += post.separators[i].first.str() + ":" + post.separators[i].second.str();
  }
  return s;
}

std::string emit_certificate(const WitnessPair& w) {
  std::ostringstream os;
  os << "certificate v1\n";
  if (w.source)
    os << "source n=" << w.source->n() << " table=" << w.source->bits() << "\n";
  if (w.target)
    os << "target n=" << w.target->n() << " table=" << w.target->bits() << "\n";
  if (w.alpha) os << "alpha " << w.alpha->str() << "\n";
  os << "stages " << w.pre.stages().size() << "\n";
  for (const auto& stage : w.pre.stages()) os << "  " << stage->describe() << "\n";
  os << emit_post_line(w.post) << "\n";
  return os.str();
}

namespace {

TruthTable parse_inline_table(const std::map<std::string, std::string>& kv,
                              int line_no) {
  const int n = parse_int(need(kv, "n", line_no), line_no);
  const std::string& bits = need(kv, "table", line_no);
  if (n < 0 || n > 16 || bits.size() != size_t{1} << n)
    throw ParseError(line_no, "table size does not match dimension");
  for (char c : bits)
    if (c != '0' && c != '1')
      throw ParseError(line_no, "table values must be 0 or 1");
  return TruthTable::from_bits(n, bits);
}

struct LineReader {
  std::vector<std::string> lines;
  size_t pos = 0;

  explicit LineReader(const std::string& text) : lines(split_lines(text)) {}

  bool done() {
    while (pos < lines.size() && trim(lines[pos]).empty()) ++pos;
    return pos >= lines.size();
  }
  int line_no() const { return static_cast<int>(pos) + 1; }
  std::string next() {
    if (done()) throw ParseError(line_no(), "unexpected end of file");
    return lines[pos++];
  }
};

// "<head> <k=v>..." section line; returns its key-value map.
std::map<std::string, std::string> expect_section(
    LineReader& r, const std::string& head, std::string* second = nullptr) {
  const int at = r.line_no();
  std::istringstream ss(trim(r.next()));
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  if (tokens.empty() || tokens[0] != head)
    throw ParseError(at, "expected '" + head + "' section");
  size_t from = 1;
  if (second) {
    if (tokens.size() < 2) throw ParseError(at, head + " needs an argument");
    *second = tokens[1];
    from = 2;
  }
  return parse_kv(tokens, from, at);
}

Transducer parse_pre_block(LineReader& r) {
  std::string count_s;
  expect_section(r, "pre", &count_s);
  const int count = parse_int(count_s, r.line_no() - 1);
  if (count < 1) throw ParseError(r.line_no() - 1, "pre needs stages");
  Transducer pre;
  for (int i = 0; i < count; ++i) {
    const int at = r.line_no();
    Transducer stage = parse_stage_line(r.next(), at);
    try {
      pre = pre.empty() ? stage : compose(stage, pre);
    } catch (const std::exception& e) {
      throw ParseError(at, std::string("stage does not fit the pipeline: ") +
                               e.what());
    }
  }
  return pre;
}

}  // namespace

WitnessPair parse_certificate(const std::string& text) {
  LineReader r(text);
  const int at = r.line_no();
  if (trim(r.next()) != "certificate v1")
    throw ParseError(at, "expected 'certificate v1'");
  WitnessPair w;
  bool saw_stages = false;
  int stage_count = 0;
  while (!r.done()) {
    const int line_no = r.line_no();
    std::string line = trim(r.next());
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    const std::string& head = tokens[0];
    if (head == "source" || head == "target") {
      auto kv = parse_kv(tokens, 1, line_no);
      TruthTable t = parse_inline_table(kv, line_no);
      if (head == "source")
        w.source = t;
      else
        w.target = t;
    } else if (head == "alpha") {
      if (tokens.size() != 2) throw ParseError(line_no, "alpha needs a point");
      w.alpha = parse_point(tokens[1], line_no);
    } else if (head == "stages") {
      if (tokens.size() != 2)
        throw ParseError(line_no, "stages needs a count");
      stage_count = parse_int(tokens[1], line_no);
      if (stage_count < 1) throw ParseError(line_no, "certificate needs stages");
      for (int i = 0; i < stage_count; ++i) {
        const int at2 = r.line_no();
        Transducer stage = parse_stage_line(r.next(), at2);
        try {
          w.pre = w.pre.empty() ? stage : compose(stage, w.pre);
        } catch (const std::exception& e) {
          throw ParseError(
              at2, std::string("stage does not fit the pipeline: ") + e.what());
        }
      }
      saw_stages = true;
    } else if (head == "post") {
      w.post = parse_post_line(line, line_no);
      if (!saw_stages)
        throw ParseError(line_no, "post must follow the stage list");
      if (!r.done())
        throw ParseError(r.line_no(), "trailing content after post line");
      return w;
    } else {
      throw ParseError(line_no, "unknown certificate section '" + head + "'");
    }
  }
  throw ParseError(r.line_no(), "certificate ended before the post line");
}

std::string emit_opponents(const std::vector<Opponent>& ops) {
  std::ostringstream os;
  os << "opponents " << ops.size() << "\n";
  for (size_t e = 0; e < ops.size(); ++e) {
    os << "opponent " << e << "\n";
    os << "pre " << ops[e].pre.stages().size() << "\n";
    for (const auto& stage : ops[e].pre.stages())
      os << "  " << stage->describe() << "\n";
    os << emit_post_line(ops[e].post) << "\n";
  }
  return os.str();
}

std::vector<Opponent> parse_opponents(const std::string& text) {
  LineReader r(text);
  std::string count_s;
  expect_section(r, "opponents", &count_s);
  const int count = parse_int(count_s, r.line_no() - 1);
  if (count < 0) throw ParseError(r.line_no() - 1, "negative opponent count");
  std::vector<Opponent> ops;
  for (int e = 0; e < count; ++e) {
    std::string idx_s;
    expect_section(r, "opponent", &idx_s);
    if (parse_int(idx_s, r.line_no() - 1) != e)
      throw ParseError(r.line_no() - 1, "opponents must be listed in order");
    Opponent op;
    op.pre = parse_pre_block(r);
    const int at = r.line_no();
    op.post = parse_post_line(r.next(), at);
    ops.push_back(std::move(op));
  }
  if (!r.done()) throw ParseError(r.line_no(), "trailing content");
  return ops;
}

std::string emit_quadruples(const std::vector<Quadruple>& quads) {
  std::ostringstream os;
  os << "quadruples " << quads.size() << "\n";
  for (size_t q = 0; q < quads.size(); ++q) {
    os << "quadruple " << q << "\n";
    os << "g n=" << quads[q].g.n() << " table=" << quads[q].g.bits() << "\n";
    os << "f n=" << quads[q].f.n() << " table=" << quads[q].f.bits() << "\n";
    os << "pre " << quads[q].op.pre.stages().size() << "\n";
    for (const auto& stage : quads[q].op.pre.stages())
      os << "  " << stage->describe() << "\n";
    os << emit_post_line(quads[q].op.post) << "\n";
  }
  return os.str();
}

std::vector<Quadruple> parse_quadruples(const std::string& text) {
  LineReader r(text);
  std::string count_s;
  expect_section(r, "quadruples", &count_s);
  const int count = parse_int(count_s, r.line_no() - 1);
  if (count < 0) throw ParseError(r.line_no() - 1, "negative quadruple count");
  std::vector<Quadruple> quads;
  for (int q = 0; q < count; ++q) {
    std::string idx_s;
    expect_section(r, "quadruple", &idx_s);
    if (parse_int(idx_s, r.line_no() - 1) != q)
      throw ParseError(r.line_no() - 1, "quadruples must be listed in order");
    Quadruple quad;
    const int g_at = r.line_no();
    quad.g = parse_inline_table(expect_section(r, "g"), g_at);
    const int f_at = r.line_no();
    quad.f = parse_inline_table(expect_section(r, "f"), f_at);
    quad.op.pre = parse_pre_block(r);
    const int at = r.line_no();
    quad.op.post = parse_post_line(r.next(), at);
    quads.push_back(std::move(quad));
  }
  if (!r.done()) throw ParseError(r.line_no(), "trailing content");
  return quads;
}

std::string dot_diagram(const TruthTable& f) {
  const int n = f.n();
  CoveringChain chain = optimal_covering_chain(f);
  std::ostringstream os;
  os << "digraph cube {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=box, style=filled, fontname=\"monospace\"];\n";
  for (uint32_t idx = 0; idx < f.size(); ++idx) {
    Vertex v(n, idx);
    os << "  \"" << v.str() << "\" [fillcolor="
       << (f.value(idx) ? "gray75" : "white") << "];\n";
  }
  for (int w = 0; w <= n; ++w) {
    os << "  { rank=same;";
    for (uint32_t idx = 0; idx < f.size(); ++idx)
      if (Vertex(n, idx).weight() == w) os << " \"" << Vertex(n, idx).str() << "\";";
    os << " }\n";
  }
  auto on_chain = [&](const Vertex& a, const Vertex& b) {
    for (size_t i = 0; i + 1 < chain.vertices.size(); ++i)
      if (chain.vertices[i] == a && chain.vertices[i + 1] == b) return true;
    return false;
  };
  for (uint32_t idx = 0; idx < f.size(); ++idx) {
    Vertex v(n, idx);
    for (int c = 1; c <= n; ++c) {
      if (v.get(c)) continue;
      Vertex u = v.with(c, true);
      os << "  \"" << v.str() << "\" -> \"" << u.str() << "\"";
      if (on_chain(v, u)) os << " [color=red, penwidth=2]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace stepfn
