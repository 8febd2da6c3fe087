#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stepfn/io.hpp"
#include "stepfn/normalize.hpp"
#include "stepfn/verify.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << content;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

int cmd_analyze(const std::string& table_path, bool dot,
                const std::string& out_path) {
  using namespace stepfn;
  TruthTable f = parse_table_text(read_file(table_path));
  Classification cls = classify(f);
  CoveringChain chain = optimal_covering_chain(f);
  std::ostringstream os;
  os << "n=" << f.n() << " l=" << alternation_length(f)
     << " complete=" << yesno(cls.complete)
     << " homogeneous=" << yesno(cls.homogeneous) << " levels=";
  for (size_t i = 0; i < cls.homogeneous_levels.size(); ++i)
    os << (i ? "," : "") << cls.homogeneous_levels[i];
  if (cls.homogeneous_levels.empty()) os << "none";
  os << "\nchain=";
  for (size_t i = 0; i < chain.vertices.size(); ++i)
    os << (i ? "->" : "") << chain.vertices[i].str();
  os << " word=" << chain.word << "\n";
  if (dot) os << dot_diagram(f);
  write_out(out_path, os.str());
  return 0;
}

int cmd_normalize(const std::string& table_path, const std::string& out_path) {
  using namespace stepfn;
  TruthTable f = parse_table_text(read_file(table_path));
  NormalizeResult res = normalize_to_K(f);
  std::ostringstream os;
  os << "negated=" << yesno(res.negated) << " flips=" << res.flips.size()
     << "\n";
  for (const auto& flip : res.flips)
    os << "flip v=" << flip.v.str() << " from=" << (flip.from ? 1 : 0)
       << " sweep=" << flip.sweep_level << "\n";
  os << emit_table(res.table);
  write_out(out_path, os.str());
  return 0;
}

int cmd_compile(const std::string& f_path, const std::string& g_path,
                const std::string& alpha_s, const std::string& out_path) {
  using namespace stepfn;
  TruthTable f = parse_table_text(read_file(f_path));
  TruthTable g = parse_table_text(read_file(g_path));
  CantorPoint alpha = CantorPoint::parse(alpha_s);
  ReductionPlan plan = compile_reduction(f, g, alpha);
  write_out(out_path, emit_certificate(plan.witness));
  return 0;
}

int cmd_verify(const std::string& cert_path, const std::string& f_path,
               const std::string& g_path, const std::string& alpha_s,
               std::uint64_t seed, int depth, const std::string& out_path) {
  using namespace stepfn;
  WitnessPair w = parse_certificate(read_file(cert_path));
  TruthTable f = parse_table_text(read_file(f_path));
  TruthTable g = parse_table_text(read_file(g_path));
  CantorPoint alpha = CantorPoint::parse(alpha_s);
  if (w.source && !(*w.source == f))
    throw std::runtime_error("certificate source table disagrees");
  if (w.target && !(*w.target == g))
    throw std::runtime_error("certificate target table disagrees");
  auto samples = sample_points(alpha, f.n(), 64, seed);
  VerificationReport report = check_witness(w, f, g, alpha, samples);
  const TruthTable ident = TruthTable::from_bits(1, "01");
  if (f == ident && g == ident)
    report.boundary_outcome = boundary_check(w, alpha, alpha, depth);
  write_out(out_path, report.text());
  return report.exit_code();
}

int cmd_injury(const std::string& ops_path, int stages,
               const std::string& out_path) {
  using namespace stepfn;
  auto ops = parse_opponents(read_file(ops_path));
  InjuryResult res = run_injury(ops, stages);
  std::ostringstream os;
  for (const auto& line : res.log) os << line << "\n";
  for (int k = 0; k < res.state.requirement_count; ++k)
    os << "requirement=" << k << " marker=" << res.state.markers[k]
       << " status="
       << (res.state.requirement_satisfied(k) ? "satisfied" : "waiting")
       << " initialized=" << res.state.init_counts[k] << "\n";
  os << "alpha=" << res.state.alpha().str() << "\n";
  os << "beta=" << res.state.beta().str() << "\n";
  write_out(out_path, os.str());
  return 0;
}

int cmd_diag(const std::string& quads_path, int stages,
             const std::string& out_path) {
  using namespace stepfn;
  auto quads = parse_quadruples(read_file(quads_path));
  DiagResult res = run_diagonalization(quads, stages);
  std::ostringstream os;
  for (const auto& line : res.log) os << line << "\n";
  const auto& final_row = res.history.back();
  for (size_t k = 0; k < final_row.size(); ++k)
    os << "sigma_" << k + 1 << "=" << final_row[k] << "\n";
  write_out(out_path, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"step function reduction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int depth = 4096;
  bool dot = false;
  std::string out_path;
  app.add_option("--seed", seed, "random seed");
  app.add_option("--depth", depth, "column budget for exact runs");
  app.add_flag("--dot", dot, "emit a diagram with analyze");
  app.add_option("--out", out_path, "write output to a file");

  std::string table_a, table_b, cert, alpha, list_file;
  int stages = 64;

  auto* analyze = app.add_subcommand("analyze", "classify a table");
  analyze->add_option("table", table_a)->required();

  auto* normalize = app.add_subcommand("normalize", "rewrite to the staircase");
  normalize->add_option("table", table_a)->required();

  auto* compile = app.add_subcommand("compile", "build a reduction witness");
  compile->add_option("source", table_a)->required();
  compile->add_option("target", table_b)->required();
  compile->add_option("alpha", alpha)->required();

  auto* verify = app.add_subcommand("verify", "replay a certificate");
  verify->add_option("certificate", cert)->required();
  verify->add_option("source", table_a)->required();
  verify->add_option("target", table_b)->required();
  verify->add_option("alpha", alpha)->required();

  auto* injury = app.add_subcommand("injury", "run the marker construction");
  injury->add_option("opponents", list_file)->required();
  injury->add_option("stages", stages)->required();

  auto* diag = app.add_subcommand("diag", "run the prefix diagonalization");
  diag->add_option("quadruples", list_file)->required();
  diag->add_option("stages", stages)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(table_a, dot, out_path);
    if (normalize->parsed()) return cmd_normalize(table_a, out_path);
    if (compile->parsed()) return cmd_compile(table_a, table_b, alpha, out_path);
    if (verify->parsed())
      return cmd_verify(cert, table_a, table_b, alpha, seed, depth, out_path);
    if (injury->parsed()) return cmd_injury(list_file, stages, out_path);
    if (diag->parsed()) return cmd_diag(list_file, stages, out_path);
  } catch (const stepfn::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
