// Command line front end.
//
// Exit codes: 0 ok / trivial, 2 domain or input error, 3 resource cap,
// 4 unknown, 5 refuted.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pantcx/pantcx.hpp"

namespace {

enum Exit { kOk = 0, kDomain = 2, kResource = 3, kUnknown = 4, kRefuted = 5 };

struct RunConfig {
  int g = -1;
  int n = -1;
  bool decorated = false;
  std::string in;
  std::string out;
  std::string format = "text";
  std::int64_t max_cosets = 1000000;
  int max_area = 64;
  int threads = 1;
  std::size_t max_vertices = 100000;
  std::string edge_rule = "orbit";
  bool unfolded = false;
  std::string map_kind;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw pantcx::DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw pantcx::DomainError("cannot write " + cfg.out);
  os << text;
}

pantcx::BuildOptions build_options(const RunConfig& cfg) {
  pantcx::BuildOptions opt;
  opt.threads = cfg.threads;
  opt.max_vertices = cfg.max_vertices;
  if (cfg.edge_rule == "single") opt.edge_rule = pantcx::EdgeRule::SinglePerPair;
  else if (cfg.edge_rule != "orbit") throw pantcx::DomainError("edge rule must be orbit or single");
  return opt;
}

void require_gn(const RunConfig& cfg) {
  if (cfg.g < 0 || cfg.n < 0) throw pantcx::DomainError("--g and --n are required");
}

pantcx::TwoComplex obtain_complex(const RunConfig& cfg) {
  if (!cfg.in.empty()) return pantcx::deserialize_complex(read_file(cfg.in));
  require_gn(cfg);
  const auto opt = build_options(cfg);
  return cfg.decorated ? pantcx::build_s_decorated(cfg.g, cfg.n, opt) : pantcx::build_s(cfg.g, cfg.n, opt);
}

int cmd_enumerate(const RunConfig& cfg) {
  require_gn(cfg);
  const auto graphs = pantcx::enumerate_keyed(cfg.g, cfg.n, cfg.threads);
  std::ostringstream os;
  os << "g=" << cfg.g << " n=" << cfg.n << " count=" << graphs.size() << "\n";
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto& g = graphs[i].graph;
    os << i << " key=" << graphs[i].key.digest() << " aut=" << pantcx::automorphism_count(g)
       << " vertex_aut=" << pantcx::vertex_automorphism_count(g) << "\n";
    if (cfg.format == "graphs") os << pantcx::serialize(g);
  }
  emit(cfg, os.str());
  return kOk;
}

int cmd_build(const RunConfig& cfg) {
  const auto c = obtain_complex(cfg);
  std::cout << pantcx::census_line(c) << "\n";
  if (!cfg.out.empty()) emit(cfg, cfg.format == "dot" ? pantcx::export_dot(c) : pantcx::serialize(c));
  return kOk;
}

int cmd_export(const RunConfig& cfg) {
  const auto c = obtain_complex(cfg);
  emit(cfg, cfg.format == "dot" ? pantcx::export_dot(c) : pantcx::serialize(c));
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const auto c = obtain_complex(cfg);
  const auto v = pantcx::check_simply_connected(c, cfg.max_cosets, !cfg.unfolded);
  std::cout << v.line() << "\n";
  if (cfg.format == "presentation" && !cfg.out.empty())
    emit(cfg, pantcx::serialize(pantcx::pi1_presentation(c, 0, !cfg.unfolded).presentation));
  if (v.kind == pantcx::VerdictKind::Trivial) return kOk;
  if (v.kind == pantcx::VerdictKind::Unknown) return kUnknown;
  return kRefuted;
}

int cmd_map(const RunConfig& cfg) {
  const auto opt = build_options(cfg);
  pantcx::CellularMap m;
  if (cfg.map_kind == "phi") {
    require_gn(cfg);
    m = pantcx::phi_map(cfg.g, cfg.n, opt);
  } else if (cfg.map_kind == "psi") {
    if (cfg.g < 0) throw pantcx::DomainError("--g is required");
    m = pantcx::psi_map(cfg.g, opt);
  } else {
    throw pantcx::DomainError("map kind must be phi or psi");
  }
  pantcx::FibrationOptions fopt;
  fopt.max_area = cfg.max_area;
  fopt.max_cosets = cfg.max_cosets;
  const auto report = pantcx::check_fibration_conditions(m, fopt);
  std::cout << report.text();
  if (!cfg.out.empty()) emit(cfg, pantcx::serialize(m));
  bool failed = false, unresolved = false;
  for (const auto& c : report.conditions) {
    failed |= c.status == pantcx::Status::Failed;
    unresolved |= c.status == pantcx::Status::Unresolved;
  }
  return failed ? kRefuted : unresolved ? kUnknown : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pants decomposition complexes S_{g,n}"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool with_in) {
    sub->add_option("--g", cfg.g, "genus")->check(CLI::NonNegativeNumber);
    sub->add_option("--n", cfg.n, "number of free ends")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output file");
    sub->add_option("--max-vertices", cfg.max_vertices, "vertex cap")->check(CLI::PositiveNumber);
    sub->add_option("--edge-rule", cfg.edge_rule, "orbit or single");
    if (with_in) {
      sub->add_option("--in", cfg.in, "complex file");
      sub->add_flag("--decorated", cfg.decorated, "build the decorated complex");
    }
  };

  auto* en = app.add_subcommand("enumerate", "list graphs up to isomorphism");
  en->add_option("--g", cfg.g)->required()->check(CLI::NonNegativeNumber);
  en->add_option("--n", cfg.n)->required()->check(CLI::NonNegativeNumber);
  en->add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
  en->add_option("--out", cfg.out);
  en->add_option("--format", cfg.format, "text or graphs");

  auto* bu = app.add_subcommand("build", "build a complex and print its census");
  add_common(bu, true);
  bu->add_option("--format", cfg.format, "text or dot")->check(CLI::IsMember({"text", "dot"}));

  auto* ve = app.add_subcommand("verify", "decide simple connectivity");
  add_common(ve, true);
  ve->add_option("--max-cosets", cfg.max_cosets)->check(CLI::PositiveNumber);
  ve->add_option("--format", cfg.format, "text or presentation");
  ve->add_flag("--unfolded", cfg.unfolded, "treat involutive loops as plain loops");

  auto* ma = app.add_subcommand("map", "build phi or psi and check the fibration conditions");
  ma->add_option("kind", cfg.map_kind, "phi or psi")->required()->check(CLI::IsMember({"phi", "psi"}));
  add_common(ma, false);
  ma->add_option("--max-area", cfg.max_area)->check(CLI::PositiveNumber);
  ma->add_option("--max-cosets", cfg.max_cosets)->check(CLI::PositiveNumber);

  auto* ex = app.add_subcommand("export", "serialize or render a complex");
  add_common(ex, true);
  ex->add_option("--format", cfg.format, "text or dot")->check(CLI::IsMember({"text", "dot"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kDomain;
  }

  try {
    if (*en) return cmd_enumerate(cfg);
    if (*bu) return cmd_build(cfg);
    if (*ve) return cmd_verify(cfg);
    if (*ma) return cmd_map(cfg);
    if (*ex) return cmd_export(cfg);
  } catch (const pantcx::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const pantcx::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kDomain;
  } catch (const pantcx::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const pantcx::StructuralError& e) {
    std::cerr << "invalid graph: " << e.what() << "\n";
    return kDomain;
  } catch (const pantcx::MoveError& e) {
    std::cerr << "invalid move: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}
