#pragma once

// The cellular maps phi_{g,n}: S_{g,n} -> S_{g,n-1} (forget the last free
// end) and psi_g: S_{g-1,2} -> S_{g,0} (join the two free ends), their fibers
// and edge liftings, and a checker for the two fibration conditions.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pantcx/complex.hpp"
#include "pantcx/presentation.hpp"
#include "pantcx/surgery.hpp"

namespace pantcx {

/// Removes free end n and smooths its neighbor.
inline PantGraph phi_vertex(const PantGraph& g) {
  const auto c = counts(g);
  if (c.boundary < 1) throw DomainError("phi needs at least one free end");
  require_admissible(c.genus, c.boundary - 1);
  return contract_last_leaf(g);
}

/// Joins the two free ends of a (g-1, 2) graph.
inline PantGraph psi_vertex(const PantGraph& g) {
  if (g.leaf_count() != 2) throw DomainError("psi needs exactly two free ends");
  return join_free_ends(g);
}

/// Lookup structure over a built or loaded complex: vertex by key, and the
/// complex edge traversed by a move on any concrete graph.
class ComplexIndex {
 public:
  explicit ComplexIndex(const TwoComplex& c) : c_(&c) {
    for (int v = 0; v < static_cast<int>(c.vertices.size()); ++v) index_[c.vertices[v].key] = v;
    auts_.resize(c.vertices.size());
    for (std::size_t v = 0; v < c.vertices.size(); ++v) {
      const auto s = rep(static_cast<int>(v));
      auts_[v] = automorphisms(s.graph, detail::colors_of(s));
    }
    steps_.resize(c.vertices.size());
    for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) {
      const auto& ed = c.edges[e];
      const auto s = rep(ed.src);
      const auto inst = detail::from_move_spec(s, ed.witness);
      steps_[ed.src][canonical(ed.src, inst)] = {e, true};
      if (ed.involutive) continue;
      const auto t = detail::apply_instance(s, inst);
      auto [dst, iso] = locate(t);
      detail::Instance back = inst;
      if (const auto* r = std::get_if<Recoupling>(&inst)) back = inverse_recoupling(s.graph, *r);
      steps_[dst][canonical(dst, transport(back, iso))] = {e, false};
    }
  }

  detail::State rep(int v) const { return {c_->vertices[v].graph, c_->vertices[v].position}; }

  std::optional<int> find(const detail::State& s) const {
    const auto it = index_.find(canonical_key(s.graph, detail::colors_of(s)));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::pair<int, std::vector<Dart>> locate(const detail::State& s) const {
    const auto v = find(s);
    if (!v) throw std::logic_error("graph is not a vertex of the complex");
    const auto r = rep(*v);
    auto iso = find_isomorphism(s.graph, r.graph, detail::colors_of(s), detail::colors_of(r));
    if (!iso) throw std::logic_error("canonical key and isomorphism search disagree");
    return {*v, std::move(*iso)};
  }

  std::optional<Step> step_for(const detail::State& s, const detail::Instance& inst) const {
    auto [v, iso] = locate(s);
    const auto it = steps_[v].find(canonical(v, transport(inst, iso)));
    if (it == steps_[v].end()) return std::nullopt;
    return it->second;
  }

 private:
  const TwoComplex* c_;
  std::map<CanonicalKey, int> index_;
  std::vector<std::vector<std::vector<Dart>>> auts_;
  std::vector<std::map<std::array<int, 5>, Step>> steps_;

  static detail::Instance transport(const detail::Instance& inst, const std::vector<Dart>& f) {
    if (const auto* r = std::get_if<Recoupling>(&inst)) return r->mapped(f);
    return inst;
  }

  std::array<int, 5> canonical(int v, const detail::Instance& inst) const {
    auto best = detail::instance_code(inst);
    if (const auto* r = std::get_if<Recoupling>(&inst))
      for (const auto& f : auts_[v]) best = std::min(best, detail::instance_code(detail::Instance{r->mapped(f)}));
    return best;
  }
};

enum class MapKind { Phi, Psi, Identity };

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::Phi: return "phi";
    case MapKind::Psi: return "psi";
    case MapKind::Identity: return "identity";
  }
  return "?";
}

struct EdgeImage {
  bool collapsed = false;
  int vertex = -1;  // when collapsed
  Step step;        // otherwise
};

enum class CellImageKind { Cell, Edge, Vertex, Unmatched };

struct CellImage {
  CellImageKind kind = CellImageKind::Unmatched;
  int index = -1;
};

struct CellularMap {
  MapKind kind = MapKind::Identity;
  TwoComplex source;
  TwoComplex target;
  std::vector<int> vertex_image;
  std::vector<EdgeImage> edge_image;
  std::vector<CellImage> cell_image;
};

namespace detail {

/// Old dart -> new dart for phi (or -1 when removed).
inline std::vector<Dart> phi_dart_map(const PantGraph& g) {
  const Dart l = g.leaf_dart(g.leaf_count());
  const Dart m = g.mate(l);
  std::vector<char> keep(g.dart_count(), 1);
  keep[l] = keep[m] = 0;
  for (Dart d : g.vertex(g.vertex_of(m))) keep[d] = 0;
  std::vector<Dart> out(g.dart_count(), -1);
  int next = 0;
  for (Dart d = 0; d < g.dart_count(); ++d)
    if (keep[d]) out[d] = next++;
  return out;
}

inline std::vector<Dart> psi_dart_map(const PantGraph& g) {
  std::vector<Dart> out(g.dart_count(), -1);
  int next = 0;
  for (Dart d = 0; d < g.dart_count(); ++d)
    if (d != g.leaf_dart(1) && d != g.leaf_dart(2)) out[d] = next++;
  return out;
}

/// Freely reduces a cyclic edge word; a folded (involutive) edge is its own
/// inverse.
inline std::vector<Step> cyclic_reduce_steps(const TwoComplex& c, const std::vector<Step>& w) {
  auto cancels = [&](Step a, Step b) { return a.edge == b.edge && (a.forward != b.forward || c.edges[a.edge].involutive); };
  std::vector<Step> out;
  for (const auto& s : w) {
    if (!out.empty() && cancels(out.back(), s)) out.pop_back();
    else out.push_back(s);
  }
  std::size_t a = 0, b = out.size();
  while (b - a >= 2 && cancels(out[a], out[b - 1])) {
    ++a;
    --b;
  }
  return {out.begin() + a, out.begin() + b};
}

inline void map_cells(CellularMap& m) {
  std::map<std::vector<Step>, int> target_cells;
  for (int k = 0; k < static_cast<int>(m.target.cells.size()); ++k)
    target_cells.emplace(canonical_loop(m.target.cells[k].boundary), k);
  for (const auto& cell : m.source.cells) {
    std::vector<Step> word;
    for (const auto& s : cell.boundary) {
      const auto& im = m.edge_image[s.edge];
      if (im.collapsed) continue;
      Step t = s.forward ? im.step : im.step.inverse();
      if (m.target.edges[t.edge].involutive) t.forward = true;
      word.push_back(t);
    }
    CellImage ci;
    if (word.empty()) {
      ci = {CellImageKind::Vertex, m.vertex_image[cell.witness.vertex]};
    } else if (auto it = target_cells.find(canonical_loop(word)); it != target_cells.end()) {
      ci = {CellImageKind::Cell, it->second};
    } else {
      const auto reduced = cyclic_reduce_steps(m.target, word);
      if (reduced.empty()) {
        ci = {CellImageKind::Edge, word.front().edge};
      } else if (auto it2 = target_cells.find(canonical_loop(reduced)); it2 != target_cells.end()) {
        ci = {CellImageKind::Cell, it2->second};
      }
    }
    m.cell_image.push_back(ci);
  }
}

}  // namespace detail

/// phi_{g,n} from S_{g,n} to S_{g,n-1}.
inline CellularMap phi_map(int genus, int boundary, const BuildOptions& opt = {}) {
  if (boundary < 1) throw DomainError("phi needs n >= 1");
  require_admissible(genus, boundary);
  require_admissible(genus, boundary - 1);
  CellularMap m;
  m.kind = MapKind::Phi;
  m.source = build_s(genus, boundary, opt);
  m.target = build_s(genus, boundary - 1, opt);
  const ComplexIndex tindex(m.target);
  for (const auto& v : m.source.vertices) {
    const auto t = tindex.find({phi_vertex(v.graph), {}});
    if (!t) throw std::logic_error("phi image is not a target vertex");
    m.vertex_image.push_back(*t);
  }
  for (const auto& e : m.source.edges) {
    const auto& g = m.source.vertices[e.src].graph;
    const auto r = to_recoupling(g, std::get<FMove>(e.witness));
    const auto fr = check_recoupling(g, r);
    const int w = g.vertex_of(g.mate(g.leaf_dart(g.leaf_count())));
    EdgeImage im;
    if (w == fr.v1 || w == fr.v2) {
      if (m.vertex_image[e.src] != m.vertex_image[e.dst])
        throw std::logic_error("collapsed edge with distinct endpoint images");
      im.collapsed = true;
      im.vertex = m.vertex_image[e.src];
    } else {
      const auto f = detail::phi_dart_map(g);
      const auto step = tindex.step_for({phi_vertex(g), {}}, r.mapped(f));
      if (!step) throw std::logic_error("phi image of a move is not a target edge");
      if (m.target.tail(*step) != m.vertex_image[e.src] || m.target.head(*step) != m.vertex_image[e.dst])
        throw std::logic_error("phi edge image is not incident to the vertex images");
      im.step = *step;
    }
    m.edge_image.push_back(im);
  }
  detail::map_cells(m);
  return m;
}

/// psi_g from S_{g-1,2} to S_{g,0}.
inline CellularMap psi_map(int genus, const BuildOptions& opt = {}) {
  if (genus < 2) throw DomainError("psi needs g >= 2");
  CellularMap m;
  m.kind = MapKind::Psi;
  m.source = build_s(genus - 1, 2, opt);
  m.target = build_s(genus, 0, opt);
  const ComplexIndex tindex(m.target);
  for (const auto& v : m.source.vertices) {
    const auto t = tindex.find({psi_vertex(v.graph), {}});
    if (!t) throw std::logic_error("psi image is not a target vertex");
    m.vertex_image.push_back(*t);
  }
  for (const auto& e : m.source.edges) {
    const auto& g = m.source.vertices[e.src].graph;
    const auto r = to_recoupling(g, std::get<FMove>(e.witness));
    const auto step = tindex.step_for({psi_vertex(g), {}}, r.mapped(detail::psi_dart_map(g)));
    if (!step) throw std::logic_error("psi image of a move is not a target edge");
    if (m.target.tail(*step) != m.vertex_image[e.src] || m.target.head(*step) != m.vertex_image[e.dst])
      throw std::logic_error("psi edge image is not incident to the vertex images");
    EdgeImage im;
    im.step = *step;
    m.edge_image.push_back(im);
  }
  detail::map_cells(m);
  return m;
}

inline CellularMap identity_map(const TwoComplex& c) {
  CellularMap m;
  m.kind = MapKind::Identity;
  m.source = c;
  m.target = c;
  for (int v = 0; v < static_cast<int>(c.vertices.size()); ++v) m.vertex_image.push_back(v);
  for (int e = 0; e < static_cast<int>(c.edges.size()); ++e) m.edge_image.push_back({false, -1, {e, true}});
  for (int k = 0; k < static_cast<int>(c.cells.size()); ++k) m.cell_image.push_back({CellImageKind::Cell, k});
  return m;
}

struct Surjectivity {
  bool vertices = true, edges = true, cells = true;
  std::vector<int> missed_vertices, missed_edges, missed_cells;
};

inline Surjectivity surjectivity(const CellularMap& m) {
  Surjectivity s;
  std::vector<char> hv(m.target.vertices.size()), he(m.target.edges.size()), hc(m.target.cells.size());
  for (int v : m.vertex_image) hv[v] = 1;
  for (const auto& e : m.edge_image)
    if (!e.collapsed) he[e.step.edge] = 1;
  for (const auto& c : m.cell_image)
    if (c.kind == CellImageKind::Cell) hc[c.index] = 1;
  for (std::size_t i = 0; i < hv.size(); ++i)
    if (!hv[i]) s.missed_vertices.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < he.size(); ++i)
    if (!he[i]) s.missed_edges.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < hc.size(); ++i)
    if (!hc[i]) s.missed_cells.push_back(static_cast<int>(i));
  s.vertices = s.missed_vertices.empty();
  s.edges = s.missed_edges.empty();
  s.cells = s.missed_cells.empty();
  return s;
}

/// Preimage of a target vertex: source vertices over it, the edges and
/// cells collapsed onto it.
struct Fiber {
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> cells;
  bool connected = true;
};

inline Fiber fiber(const CellularMap& m, int target_vertex) {
  if (target_vertex < 0 || target_vertex >= static_cast<int>(m.target.vertices.size()))
    throw DomainError("vertex not in target");
  Fiber f;
  for (int v = 0; v < static_cast<int>(m.vertex_image.size()); ++v)
    if (m.vertex_image[v] == target_vertex) f.vertices.push_back(v);
  for (int e = 0; e < static_cast<int>(m.edge_image.size()); ++e)
    if (m.edge_image[e].collapsed && m.edge_image[e].vertex == target_vertex) f.edges.push_back(e);
  for (int k = 0; k < static_cast<int>(m.cell_image.size()); ++k)
    if (m.cell_image[k].kind == CellImageKind::Vertex && m.cell_image[k].index == target_vertex)
      f.cells.push_back(k);
  if (f.vertices.empty()) {
    f.connected = false;
    return f;
  }
  std::map<int, std::vector<int>> adj;
  for (int e : f.edges) {
    adj[m.source.edges[e].src].push_back(m.source.edges[e].dst);
    adj[m.source.edges[e].dst].push_back(m.source.edges[e].src);
  }
  std::set<int> seen{f.vertices.front()};
  std::deque<int> q{f.vertices.front()};
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int w : adj[v])
      if (seen.insert(w).second) q.push_back(w);
  }
  f.connected = seen.size() == f.vertices.size();
  return f;
}

/// One lifting of a target edge: the insertion (phi) or cut (psi) site on the
/// target representative and the source step it produces.
struct Lifting {
  int site = 0;
  bool swapped = false;  // psi: which side of the cut edge gets label 1
  Step step;
};

inline std::vector<Lifting> liftings(const CellularMap& m, int target_edge) {
  if (target_edge < 0 || target_edge >= static_cast<int>(m.target.edges.size()))
    throw DomainError("edge not in target");
  const ComplexIndex sindex(m.source);
  const auto& te = m.target.edges[target_edge];
  const auto& g = m.target.vertices[te.src].graph;
  const auto r = to_recoupling(g, std::get<FMove>(te.witness));
  const int e = recoupling_edge(g, r);
  std::vector<Lifting> out;
  auto add = [&](int site, bool swapped, const PantGraph& lifted) {
    const auto step = sindex.step_for({lifted, {}}, r);
    if (!step) throw std::logic_error("lifted move is not a source edge");
    out.push_back({site, swapped, *step});
  };
  if (m.kind == MapKind::Phi) {
    for (int f = 0; f < g.edge_count(); ++f)
      if (f != e) add(f, false, insert_leaf(g, f));
  } else if (m.kind == MapKind::Psi) {
    for (int f = 0; f < g.edge_count(); ++f)
      if (f != e)
        for (bool sw : {false, true}) add(f, sw, cut_edge(g, f, sw));
  } else {
    out.push_back({0, false, {target_edge, true}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fibration report

enum class Status { Proven, Unresolved, Failed, NotApplicable };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Proven: return "proven";
    case Status::Unresolved: return "unresolved";
    case Status::Failed: return "failed";
    case Status::NotApplicable: return "n/a";
  }
  return "?";
}

struct Condition {
  std::string name;
  Status status = Status::Unresolved;
  std::string detail;
};

struct FibrationReport {
  std::vector<Condition> conditions;
  int max_area_used = 0;

  bool all_proven() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) {
      return c.status == Status::Proven || c.status == Status::NotApplicable;
    });
  }
  std::string text() const {
    std::ostringstream os;
    for (const auto& c : conditions)
      os << c.name << " " << to_string(c.status) << (c.detail.empty() ? "" : " " + c.detail) << "\n";
    return os.str();
  }
};

struct FibrationOptions {
  int max_area = 64;
  std::int64_t max_nodes = 200000;
  std::int64_t max_cosets = 1000000;
};

namespace detail {

/// BFS paths inside a fiber, along collapsed edges.
class FiberPaths {
 public:
  FiberPaths(const CellularMap& m, const Fiber& f) : m_(&m) {
    for (int e : f.edges) {
      adj_[m.source.edges[e].src].push_back({e, true});
      adj_[m.source.edges[e].dst].push_back({e, false});
    }
    for (auto& [v, list] : adj_) std::sort(list.begin(), list.end());
  }

  std::optional<std::vector<Step>> path(int from, int to) const {
    std::map<int, Step> how;
    std::deque<int> q{from};
    std::set<int> seen{from};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      if (v == to) break;
      const auto it = adj_.find(v);
      if (it == adj_.end()) continue;
      for (const auto& s : it->second) {
        const int w = m_->source.head(s);
        if (seen.insert(w).second) {
          how[w] = s;
          q.push_back(w);
        }
      }
    }
    if (!seen.count(to)) return std::nullopt;
    std::vector<Step> out;
    for (int v = to; v != from;) {
      const Step s = how.at(v);
      out.push_back(s);
      v = m_->source.tail(s);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  /// One loop per non-tree fiber edge.
  std::vector<std::vector<Step>> fundamental_loops(const Fiber& f) const {
    std::vector<std::vector<Step>> out;
    if (f.vertices.empty()) return out;
    const int root = f.vertices.front();
    std::map<int, Step> parent;
    std::set<int> tree;
    std::deque<int> q{root};
    std::set<int> seen{root};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      const auto it = adj_.find(v);
      if (it == adj_.end()) continue;
      for (const auto& s : it->second) {
        const int w = m_->source.head(s);
        if (seen.insert(w).second) {
          parent[w] = s;
          tree.insert(s.edge);
          q.push_back(w);
        }
      }
    }
    auto to_root = [&](int v) {
      std::vector<Step> p;
      while (v != root) {
        const Step s = parent.at(v);
        p.push_back(s);
        v = m_->source.tail(s);
      }
      std::reverse(p.begin(), p.end());
      return p;  // root -> v
    };
    for (int e : f.edges) {
      if (tree.count(e)) continue;
      const auto& ed = m_->source.edges[e];
      auto loop = to_root(ed.src);
      loop.push_back({e, true});
      auto back = to_root(ed.dst);
      for (auto it = back.rbegin(); it != back.rend(); ++it) loop.push_back(it->inverse());
      out.push_back(std::move(loop));
    }
    return out;
  }

 private:
  const CellularMap* m_;
  std::map<int, std::vector<Step>> adj_;
};

}  // namespace detail

/// Checks the two conditions under which a surjective cellular map transfers
/// simple connectivity: connected, simply connected fibers and contractible
/// lifting squares. For psi only surjectivity and the lifting of target
/// cells are checked.
inline FibrationReport check_fibration_conditions(const CellularMap& m, const FibrationOptions& opt = {}) {
  FibrationReport rep;
  const auto sur = surjectivity(m);
  auto add = [&](std::string name, Status s, std::string detail = {}) {
    rep.conditions.push_back({std::move(name), s, std::move(detail)});
  };
  auto missed = [](const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "missed=" : ",") + std::to_string(x);
    return s;
  };
  add("surjective vertices", sur.vertices ? Status::Proven : Status::Failed, missed(sur.missed_vertices));
  add("surjective edges", sur.edges ? Status::Proven : Status::Failed, missed(sur.missed_edges));
  add("surjective cells", sur.cells ? Status::Proven : Status::Failed, missed(sur.missed_cells));

  const auto pi = pi1_presentation(m.source);
  const auto source_verdict = prove_trivial(pi.presentation, opt.max_cosets);
  const bool source_trivial = source_verdict.kind == VerdictKind::Trivial && component_count(m.source) == 1;

  auto fill = [&](const std::vector<Step>& loop, int& area) -> Status {
    const auto w = pi.word_of(loop);
    const auto f = find_filling(pi.presentation, w, opt.max_area, opt.max_nodes);
    if (f.found) {
      area = f.area;
      rep.max_area_used = std::max(rep.max_area_used, f.area);
      return Status::Proven;
    }
    return Status::Unresolved;
  };

  if (m.kind == MapKind::Psi) {
    bool collapses = false;
    for (const auto& e : m.edge_image) collapses |= e.collapsed;
    add("no edge collapses", collapses ? Status::Failed : Status::Proven);
    add("fiber simple connectivity", Status::NotApplicable, "psi is not checked through its fibers");
    // Every target loop bounding a cell lifts to a source cell.
    add("target cells lift to source cells", sur.cells ? Status::Proven : Status::Failed, missed(sur.missed_cells));
    for (int e = 0; e < static_cast<int>(m.target.edges.size()); ++e) {
      const auto lifts = liftings(m, e);
      add("liftings e" + std::to_string(e), lifts.empty() ? Status::Failed : Status::Proven,
          "count=" + std::to_string(lifts.size()));
    }
    return rep;
  }

  int collapsed = 0;
  for (const auto& e : m.edge_image) collapsed += e.collapsed;
  add("edge images", Status::Proven,
      "collapsed=" + std::to_string(collapsed) + " of " + std::to_string(m.edge_image.size()));

  // Fibers.
  std::vector<Fiber> fibers;
  for (int t = 0; t < static_cast<int>(m.target.vertices.size()); ++t) fibers.push_back(fiber(m, t));
  for (int t = 0; t < static_cast<int>(fibers.size()); ++t) {
    const auto& f = fibers[t];
    add("fiber v" + std::to_string(t) + " connected", f.connected ? Status::Proven : Status::Failed,
        "vertices=" + std::to_string(f.vertices.size()) + " edges=" + std::to_string(f.edges.size()));
    const detail::FiberPaths paths(m, f);
    const auto loops = paths.fundamental_loops(f);
    int max_area = 0, filled = 0;
    for (const auto& loop : loops) {
      int area = 0;
      if (fill(loop, area) == Status::Proven) {
        ++filled;
        max_area = std::max(max_area, area);
      }
    }
    Status s = Status::Proven;
    std::string detail = "loops=" + std::to_string(loops.size()) + " filled=" + std::to_string(filled) +
                         " max_area=" + std::to_string(max_area);
    if (filled < static_cast<int>(loops.size())) {
      s = source_trivial ? Status::Proven : Status::Unresolved;
      if (source_trivial) detail += " rest=source pi1 trivial";
    }
    add("fiber v" + std::to_string(t) + " simply connected in source", s, detail);
  }

  // Liftings and lifting squares.
  const auto c = counts(m.source.vertices.front().graph);
  const int expected = m.kind == MapKind::Phi ? 3 * c.genus + 2 * c.boundary - 6 : 1;
  for (int e = 0; e < static_cast<int>(m.target.edges.size()); ++e) {
    const auto lifts = liftings(m, e);
    bool onto = true;
    for (const auto& l : lifts) {
      const auto& im = m.edge_image[l.step.edge];
      const Step img = l.step.forward ? im.step : im.step.inverse();
      onto &= !im.collapsed && img == Step{e, true};
    }
    add("liftings e" + std::to_string(e),
        (static_cast<int>(lifts.size()) == expected && onto) ? Status::Proven : Status::Failed,
        "count=" + std::to_string(lifts.size()) + " expected=" + std::to_string(expected));

    const auto& te = m.target.edges[e];
    const detail::FiberPaths src_paths(m, fibers[te.src]);
    const detail::FiberPaths dst_paths(m, fibers[te.dst]);
    int squares = 0, filled = 0, max_area = 0;
    std::set<Step> distinct;
    for (const auto& l : lifts) distinct.insert(l.step);
    const Step base = lifts.empty() ? Step{} : lifts.front().step;
    for (const Step& s : distinct) {
      if (s == base) continue;
      ++squares;
      // base, path in the head fiber, s^-1, path in the tail fiber.
      const auto p1 = dst_paths.path(m.source.head(base), m.source.head(s));
      const auto p2 = src_paths.path(m.source.tail(s), m.source.tail(base));
      if (!p1 || !p2) continue;
      std::vector<Step> loop{base};
      loop.insert(loop.end(), p1->begin(), p1->end());
      loop.push_back(s.inverse());
      loop.insert(loop.end(), p2->begin(), p2->end());
      int area = 0;
      if (fill(loop, area) == Status::Proven) {
        ++filled;
        max_area = std::max(max_area, area);
      }
    }
    add("lifting squares e" + std::to_string(e), filled == squares ? Status::Proven : Status::Unresolved,
        "squares=" + std::to_string(squares) + " filled=" + std::to_string(filled) +
            " max_area=" + std::to_string(max_area));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Map text format:
//   map kind=<phi|psi|identity> g=<g> n=<n>
//   v <src> -> <dst>
//   e <src> -> <edge>+|<edge>-|collapse:<v>
//   c <src> -> cell:<k>|edge:<k>|vertex:<k>|unmatched

inline std::string serialize(const CellularMap& m) {
  std::ostringstream os;
  os << "map kind=" << to_string(m.kind) << " g=" << m.source.genus << " n=" << m.source.boundary << "\n";
  for (std::size_t v = 0; v < m.vertex_image.size(); ++v) os << "v " << v << " -> " << m.vertex_image[v] << "\n";
  for (std::size_t e = 0; e < m.edge_image.size(); ++e) {
    const auto& im = m.edge_image[e];
    os << "e " << e << " -> ";
    if (im.collapsed) os << "collapse:" << im.vertex;
    else os << step_text(im.step);
    os << "\n";
  }
  for (std::size_t k = 0; k < m.cell_image.size(); ++k) {
    const auto& ci = m.cell_image[k];
    os << "c " << k << " -> ";
    switch (ci.kind) {
      case CellImageKind::Cell: os << "cell:" << ci.index; break;
      case CellImageKind::Edge: os << "edge:" << ci.index; break;
      case CellImageKind::Vertex: os << "vertex:" << ci.index; break;
      case CellImageKind::Unmatched: os << "unmatched"; break;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pantcx
