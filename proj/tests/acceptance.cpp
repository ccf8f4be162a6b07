// Acceptance suite: one PASS/FAIL line per criterion, followed by INFO lines
// for the edge-rule and loop-model sensitivity runs.
//
//   acceptance <path to pantcx binary> [scratch dir]

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"
#include "pantcx/pantcx.hpp"

using namespace pantcx;

namespace {

// Pinned limits, in seconds.
constexpr double kEnumerationBudget = 10.0;
constexpr double kVerifyBudgetPerInstance = 300.0;
constexpr double kMoveSoundnessBudget = 30.0;
constexpr std::int64_t kCosetCap = 1000000;
constexpr int kAreaBound = 64;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Surface {
  int g, n;
};

// Buildable surfaces with 3g-3+n <= 3.
const std::vector<Surface> kUpToThree = {{0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 1}, {1, 2}, {1, 3}, {2, 0}};

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << title << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string gn(int g, int n) { return "(" + std::to_string(g) + "," + std::to_string(n) + ")"; }

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void enumeration_counts() {
  const auto t0 = Clock::now();
  const std::map<std::pair<int, int>, std::size_t> pinned = {{{0, 3}, 1}, {{1, 1}, 1}, {{0, 4}, 3},
                                                             {{0, 5}, 15}, {{1, 2}, 2}, {{2, 0}, 2}};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& s : kUpToThree) {
    const auto graphs = enumerate_graphs(s.g, s.n);
    std::set<std::vector<int>> forms;
    for (const auto& g : graphs) forms.insert(oracle::form_of(g));
    const auto oracle_forms = oracle::enumerate_forms(s.g, s.n);
    const bool agree = forms == oracle_forms && forms.size() == graphs.size();
    const auto it = pinned.find({s.g, s.n});
    const bool pin_ok = it == pinned.end() || it->second == graphs.size();
    ok &= agree && pin_ok;
    detail << gn(s.g, s.n) << "=" << graphs.size() << (agree ? "" : "!oracle=" + std::to_string(oracle_forms.size()))
           << (pin_ok ? "" : "!pinned") << " ";
  }
  const double dt = seconds_since(t0);
  detail << std::fixed << std::setprecision(2) << "time=" << dt << "s";
  report(1, "enumeration counts", ok && dt < kEnumerationBudget, detail.str());
}

void census_thresholds() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& s : kUpToThree) {
    const auto c = build_s(s.g, s.n).census();
    const int t = 2 * s.g - 2 + s.n;
    const std::vector<std::pair<std::string, std::pair<bool, bool>>> checks = {
        {"triangle", {c.at(CellKind::Triangle) > 0, t >= 2}},
        {"dcsquare", {c.at(CellKind::DCSquare) > 0, t >= 3}},
        {"pentagon", {c.at(CellKind::Pentagon) > 0, t >= 3}},
        {"bigon", {c.at(CellKind::Bigon) > 0, s.g >= 1}},
    };
    for (const auto& [name, pr] : checks)
      if (pr.first != pr.second) {
        ok = false;
        detail << gn(s.g, s.n) << " " << name << (pr.first ? " present" : " absent") << " ";
      }
  }
  report(2, "cell census thresholds", ok, ok ? "all thresholds match" : detail.str());
}

void simple_connectedness() {
  struct Case {
    Surface s;
    bool decorated;
  };
  std::vector<Case> cases;
  for (const auto& s : std::vector<Surface>{{0, 4}, {1, 1}, {0, 5}, {1, 2}}) {
    cases.push_back({s, false});
    cases.push_back({s, true});
  }
  for (const auto& s : std::vector<Surface>{{0, 6}, {1, 3}, {2, 0}, {2, 1}}) cases.push_back({s, false});

  bool ok = true;
  std::ostringstream detail;
  std::ostringstream info;
  for (const auto& cs : cases) {
    const auto t0 = Clock::now();
    const auto c = cs.decorated ? build_s_decorated(cs.s.g, cs.s.n) : build_s(cs.s.g, cs.s.n);
    const auto v = check_simply_connected(c, kCosetCap);
    const double dt = seconds_since(t0);
    const bool pass = v.kind == VerdictKind::Trivial && dt < kVerifyBudgetPerInstance;
    ok &= pass;
    detail << (cs.decorated ? "Sdec" : "S") << gn(cs.s.g, cs.s.n) << "=" << (pass ? "trivial" : v.line()) << " ";

    BuildOptions single;
    single.edge_rule = EdgeRule::SinglePerPair;
    const auto cs2 = cs.decorated ? build_s_decorated(cs.s.g, cs.s.n, single) : build_s(cs.s.g, cs.s.n, single);
    info << "INFO 3 sensitivity " << (cs.decorated ? "Sdec" : "S") << gn(cs.s.g, cs.s.n)
         << " orbit+fold: " << v.line() << " | single-edge: " << check_simply_connected(cs2, kCosetCap).line()
         << " | loop model: " << check_simply_connected(c, kCosetCap, false).line() << "\n";
  }
  report(3, "simple connectedness", ok, detail.str());
  std::cout << info.str();
}

void negative_control(const std::string& cli, const std::filesystem::path& dir) {
  const auto skeleton = one_skeleton(build_s(0, 4));
  const auto h = h1(skeleton);
  const auto path = dir / "s04_skeleton.cx";
  std::ofstream(path, std::ios::binary) << serialize(skeleton);
  const int rc = run("\"" + cli + "\" verify --in \"" + path.string() + "\" > /dev/null");
  const bool ok = h.betti == 1 && h.torsion.empty() && rc == 5;
  report(4, "negative control", ok, "H1=" + h.to_string() + " exit=" + std::to_string(rc));
}

void fibration_conditions() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& s : std::vector<Surface>{{0, 5}, {1, 2}, {0, 6}, {1, 3}}) {
    FibrationOptions opt;
    opt.max_area = kAreaBound;
    opt.max_cosets = kCosetCap;
    const auto r = check_fibration_conditions(phi_map(s.g, s.n), opt);
    int fibers = 0, squares = 0, lifts = 0, bad = 0;
    for (const auto& c : r.conditions) {
      const bool counted = c.name.find("connected") != std::string::npos && c.name.find("simply") == std::string::npos;
      const bool square = c.name.rfind("lifting squares", 0) == 0;
      const bool lifting = c.name.rfind("liftings", 0) == 0;
      if (!(counted || square || lifting)) continue;
      fibers += counted;
      squares += square;
      lifts += lifting;
      if (c.status != Status::Proven) {
        ++bad;
        detail << gn(s.g, s.n) << " " << c.name << " " << to_string(c.status) << " " << c.detail << "; ";
      }
    }
    ok &= bad == 0;
    detail << gn(s.g, s.n) << " fibers=" << fibers << " edges-lifted=" << lifts << " square-checks=" << squares
           << " max_area=" << r.max_area_used << " ";
  }
  report(5, "fibration conditions", ok, detail.str());
}

void move_soundness() {
  const auto t0 = Clock::now();
  long long moves = 0, bad = 0;
  for (const auto& s : kUpToThree)
    for (const auto& g : enumerate_graphs(s.g, s.n))
      for (const auto& [m, out] : all_moves(g)) {
        ++moves;
        const auto c = counts(out);
        if (!validate(out).empty() || c.genus != s.g || c.boundary != s.n) ++bad;
      }
  const double dt = seconds_since(t0);
  std::ostringstream detail;
  detail << "moves=" << moves << " failed=" << bad << std::fixed << std::setprecision(2) << " time=" << dt << "s";
  report(6, "move soundness", bad == 0 && dt < kMoveSoundnessBudget, detail.str());
}

void determinism(const std::string& cli, const std::filesystem::path& dir) {
  const auto a = dir / "s13_t1.cx", b = dir / "s13_t8.cx";
  const int ra = run("\"" + cli + "\" build --g 1 --n 3 --threads 1 --out \"" + a.string() + "\" > /dev/null");
  const int rb = run("\"" + cli + "\" build --g 1 --n 3 --threads 8 --out \"" + b.string() + "\" > /dev/null");
  const auto ta = slurp(a), tb = slurp(b);
  const bool ok = ra == 0 && rb == 0 && !ta.empty() && ta == tb;
  report(7, "determinism", ok,
         "bytes=" + std::to_string(ta.size()) + (ta == tb ? " identical" : " differ") + " exit=" +
             std::to_string(ra) + "," + std::to_string(rb));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <pantcx binary> [scratch dir]\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path dir = argc > 2 ? argv[2] : std::filesystem::temp_directory_path() / "pantcx-acceptance";
  std::filesystem::create_directories(dir);

  enumeration_counts();
  census_thresholds();
  simple_connectedness();
  negative_control(cli, dir);
  fibration_conditions();
  move_soundness();
  determinism(cli, dir);

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failures ? 1 : 0;
}
