#pragma once

// The finite 2-complexes S_{g,n} (undecorated) and their decorated lifts.
//
// Vertices are isomorphism classes of graphs (decorated graphs are matched
// by isomorphisms that also preserve the edge ordering). A move instance on
// a representative is identified with its images under the representative's
// automorphisms; an edge of the complex is a pair {instance orbit, reverse
// instance orbit}. Parallel edges with different orbits stay distinct.
//
// Cells come from local templates replayed on representatives:
//   triangle   the three couplings around one edge,
//   bigon      two moves on one edge whose end graph is isomorphic to the start,
//   DC square  moves on two vertex-disjoint edges taken in both orders,
//   pentagon   five alternating moves on two adjacent edges,
//   algebraic  tau_ij tau_hk tau_ij tau_lm with (lm) = (ij)(hk)(ij),
//   mixed      F tau = tau F.
// In the decorated complex a template whose end graph only matches the start
// up to a permutation of the ordering is closed with tau moves; this is how
// bigons and pentagons change shape. One cell is kept per boundary loop up to
// rotation and inversion.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pantcx/canon.hpp"
#include "pantcx/enumerate.hpp"
#include "pantcx/graph.hpp"
#include "pantcx/moves.hpp"
#include "pantcx/parallel.hpp"

namespace pantcx {

enum class EdgeKind { F, Tau };
enum class CellKind { Bigon, Triangle, DCSquare, Pentagon, AlgebraicSquare, MixedSquare };
enum class EdgeRule { Orbit, SinglePerPair };

inline constexpr std::array<CellKind, 6> kAllCellKinds{CellKind::Bigon,    CellKind::Triangle,
                                                       CellKind::DCSquare, CellKind::Pentagon,
                                                       CellKind::AlgebraicSquare, CellKind::MixedSquare};

inline const char* to_string(EdgeKind k) { return k == EdgeKind::F ? "F" : "Tau"; }

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::Bigon: return "Bigon";
    case CellKind::Triangle: return "Triangle";
    case CellKind::DCSquare: return "DCSquare";
    case CellKind::Pentagon: return "Pentagon";
    case CellKind::AlgebraicSquare: return "AlgebraicSquare";
    case CellKind::MixedSquare: return "MixedSquare";
  }
  return "?";
}

inline std::optional<CellKind> cell_kind_from(const std::string& s) {
  for (CellKind k : kAllCellKinds)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

/// A directed traversal of an edge.
struct Step {
  int edge = 0;
  bool forward = true;
  friend auto operator<=>(const Step&, const Step&) = default;
  friend bool operator==(const Step&, const Step&) = default;
  Step inverse() const { return {edge, !forward}; }
};

struct ComplexVertex {
  CanonicalKey key;
  PantGraph graph;
  std::vector<int> position;  // empty for undecorated complexes
  friend bool operator==(const ComplexVertex&, const ComplexVertex&) = default;
};

struct ComplexEdge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::F;
  MoveSpec witness;          // applied to the representative of src
  bool involutive = false;   // a loop whose two directions are one orbit
  friend bool operator==(const ComplexEdge&, const ComplexEdge&) = default;
};

/// Certifies a cell: replaying `moves` from the representative of `vertex`
/// traces the boundary and returns to `vertex`.
struct CellTemplateMatch {
  int vertex = 0;
  std::vector<int> support;  // edge ids of the supporting graph
  std::vector<MoveSpec> moves;
  friend bool operator==(const CellTemplateMatch&, const CellTemplateMatch&) = default;
};

struct Cell {
  CellKind kind = CellKind::Triangle;
  std::vector<Step> boundary;
  CellTemplateMatch witness;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct TwoComplex {
  bool decorated = false;
  int genus = 0;
  int boundary = 0;
  std::vector<ComplexVertex> vertices;
  std::vector<ComplexEdge> edges;
  std::vector<Cell> cells;

  friend bool operator==(const TwoComplex&, const TwoComplex&) = default;

  int endpoint(Step s, bool head) const {
    const auto& e = edges[s.edge];
    return (s.forward == head) ? e.dst : e.src;
  }
  int tail(Step s) const { return endpoint(s, false); }
  int head(Step s) const { return endpoint(s, true); }

  std::map<CellKind, int> census() const {
    std::map<CellKind, int> out;
    for (CellKind k : kAllCellKinds) out[k] = 0;
    for (const auto& c : cells) ++out[c.kind];
    return out;
  }
};

struct BuildOptions {
  int threads = 1;
  EdgeRule edge_rule = EdgeRule::Orbit;
  std::size_t max_vertices = 100000;
};

inline long long euler_characteristic(const TwoComplex& c) {
  return static_cast<long long>(c.vertices.size()) - static_cast<long long>(c.edges.size()) +
         static_cast<long long>(c.cells.size());
}

/// Closed walk check for a boundary word.
inline bool is_closed_walk(const TwoComplex& c, const std::vector<Step>& word) {
  if (word.empty()) return true;
  for (std::size_t i = 0; i < word.size(); ++i) {
    const Step s = word[i];
    if (s.edge < 0 || s.edge >= static_cast<int>(c.edges.size())) return false;
    const Step t = word[(i + 1) % word.size()];
    if (t.edge < 0 || t.edge >= static_cast<int>(c.edges.size())) return false;
    if (c.head(s) != c.tail(t)) return false;
  }
  return true;
}

/// Least rotation of the word or of its inverse; identifies boundary loops.
inline std::vector<Step> canonical_loop(const std::vector<Step>& word) {
  if (word.empty()) return word;
  std::vector<Step> inv;
  for (auto it = word.rbegin(); it != word.rend(); ++it) inv.push_back(it->inverse());
  std::vector<Step> best = word;
  for (const std::vector<Step>* w : std::array<const std::vector<Step>*, 2>{&word, &inv})
    for (std::size_t r = 0; r < w->size(); ++r) {
      std::vector<Step> rot(w->begin() + r, w->end());
      rot.insert(rot.end(), w->begin(), w->begin() + r);
      if (rot < best) best = std::move(rot);
    }
  return best;
}

namespace detail {

/// A move on a concrete (dart-level) graph: recoupling or transposition.
using Instance = std::variant<Recoupling, TauMove>;

inline std::array<int, 5> instance_code(const Instance& inst) {
  if (const auto* r = std::get_if<Recoupling>(&inst))
    return {0, r->first[0], r->first[1], r->second[0], r->second[1]};
  const auto& t = std::get<TauMove>(inst);
  return {1, std::min(t.i, t.j), std::max(t.i, t.j), 0, 0};
}

struct State {
  PantGraph graph;
  std::vector<int> position;
};

inline const std::vector<int>* colors_of(const State& s) { return s.position.empty() ? nullptr : &s.position; }

inline State apply_instance(const State& s, const Instance& inst) {
  if (const auto* r = std::get_if<Recoupling>(&inst)) return {apply_recoupling(s.graph, *r), s.position};
  const auto d = apply_tau(DecoratedPantGraph{s.graph, s.position}, std::get<TauMove>(inst));
  return {d.base, d.position};
}

inline MoveSpec to_move_spec(const State& s, const Instance& inst) {
  if (const auto* r = std::get_if<Recoupling>(&inst)) return to_fmove(s.graph, *r);
  auto t = std::get<TauMove>(inst);
  if (t.i > t.j) std::swap(t.i, t.j);
  return t;
}

inline Instance from_move_spec(const State& s, const MoveSpec& m) {
  if (const auto* f = std::get_if<FMove>(&m)) return to_recoupling(s.graph, *f);
  return std::get<TauMove>(m);
}

/// Transpositions turning `pos_end` (on the end graph) into a labeling that
/// some isomorphism carries onto the start labeling. nullopt if the bases are
/// not isomorphic.
inline std::optional<std::vector<TauMove>> tau_closure(const State& end, const State& start) {
  std::optional<std::vector<TauMove>> best;
  for_each_isomorphism(end.graph, start.graph, [&](const std::vector<Dart>& f) {
    std::vector<int> cur = end.position;
    std::vector<int> target(cur.size());
    for (int e = 0; e < static_cast<int>(cur.size()); ++e) {
      const auto [x, y] = end.graph.edges()[e];
      target[e] = start.position[start.graph.edge_of(f[x])];
    }
    std::vector<TauMove> seq;
    while (cur != target) {
      int e = 0;
      while (cur[e] == target[e]) ++e;
      const int i = cur[e], j = target[e];
      for (auto& p : cur) {
        if (p == i) p = j;
        else if (p == j) p = i;
      }
      seq.push_back({std::min(i, j), std::max(i, j)});
    }
    if (!best || seq.size() < best->size()) best = std::move(seq);
    return !best->empty();
  });
  return best;
}

struct Template {
  CellKind kind;
  std::vector<int> support;
  std::vector<Instance> moves;
  bool close_by_isomorphism = false;  // end graph need only be isomorphic
};

class Builder {
 public:
  Builder(int genus, int boundary, bool decorated, const BuildOptions& opt)
      : genus_(genus), boundary_(boundary), decorated_(decorated), opt_(opt) {}

  TwoComplex build() {
    build_vertices();
    build_edges();
    build_cells();
    return std::move(out_);
  }

 private:
  int genus_, boundary_;
  bool decorated_;
  BuildOptions opt_;
  TwoComplex out_;
  std::map<CanonicalKey, int> index_;
  std::vector<std::vector<std::vector<Dart>>> auts_;
  // (vertex, canonical instance code) -> step
  std::vector<std::map<std::array<int, 5>, Step>> steps_;

  State rep(int v) const { return {out_.vertices[v].graph, out_.vertices[v].position}; }

  void build_vertices() {
    out_.decorated = decorated_;
    out_.genus = genus_;
    out_.boundary = boundary_;
    const auto base = enumerate_keyed(genus_, boundary_, opt_.threads);
    if (!decorated_) {
      for (const auto& kg : base) out_.vertices.push_back({kg.key, kg.graph, {}});
    } else {
      std::vector<std::vector<ComplexVertex>> per(base.size());
      parallel_for(base.size(), opt_.threads, [&](std::size_t i) {
        const auto& g = base[i].graph;
        auto d = decorate(g);
        std::vector<int> internal;
        for (std::size_t e = 0; e < d.position.size(); ++e)
          if (d.position[e] > 0) internal.push_back(static_cast<int>(e));
        std::vector<int> perm(internal.size());
        for (std::size_t p = 0; p < perm.size(); ++p) perm[p] = static_cast<int>(p) + 1;
        std::map<CanonicalKey, std::vector<int>> seen;
        do {
          std::vector<int> pos(d.position.size(), 0);
          for (std::size_t p = 0; p < internal.size(); ++p) pos[internal[p]] = perm[p];
          seen.try_emplace(canonical_key(g, &pos), pos);
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (auto& [k, pos] : seen) per[i].push_back({k, g, pos});
      });
      for (auto& list : per)
        for (auto& v : list) {
          out_.vertices.push_back(std::move(v));
          if (out_.vertices.size() > opt_.max_vertices)
            throw ResourceError("decorated vertex count exceeds cap " + std::to_string(opt_.max_vertices));
        }
      std::sort(out_.vertices.begin(), out_.vertices.end(),
                [](const ComplexVertex& a, const ComplexVertex& b) { return a.key < b.key; });
    }
    if (out_.vertices.size() > opt_.max_vertices)
      throw ResourceError("vertex count exceeds cap " + std::to_string(opt_.max_vertices));
    for (int v = 0; v < static_cast<int>(out_.vertices.size()); ++v) index_[out_.vertices[v].key] = v;
    auts_.resize(out_.vertices.size());
    parallel_for(out_.vertices.size(), opt_.threads, [&](std::size_t v) {
      const auto s = rep(static_cast<int>(v));
      auts_[v] = automorphisms(s.graph, colors_of(s));
    });
    steps_.resize(out_.vertices.size());
  }

  std::array<int, 5> canonical_instance(int v, const Instance& inst) const {
    if (std::holds_alternative<TauMove>(inst)) return instance_code(inst);
    const auto& r = std::get<Recoupling>(inst);
    auto best = instance_code(inst);
    for (const auto& f : auts_[v]) best = std::min(best, instance_code(Instance{r.mapped(f)}));
    return best;
  }

  /// Vertex index of a concrete state and an isomorphism onto its representative.
  std::pair<int, std::vector<Dart>> locate(const State& s) const {
    const auto key = canonical_key(s.graph, colors_of(s));
    const auto it = index_.find(key);
    if (it == index_.end()) throw std::logic_error("state outside the vertex set");
    const auto r = rep(it->second);
    auto iso = find_isomorphism(s.graph, r.graph, colors_of(s), colors_of(r));
    if (!iso) throw std::logic_error("canonical key and isomorphism search disagree");
    return {it->second, std::move(*iso)};
  }

  static Instance transport(const Instance& inst, const std::vector<Dart>& f) {
    if (const auto* r = std::get_if<Recoupling>(&inst)) return r->mapped(f);
    return inst;
  }

  std::vector<Instance> instances_at(int v) const {
    const auto s = rep(v);
    std::vector<Instance> out;
    for (const auto& r : all_recouplings(s.graph)) out.emplace_back(r);
    if (decorated_) {
      const int k = DecoratedPantGraph{s.graph, s.position}.internal_count();
      for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) out.emplace_back(TauMove{i, j});
    }
    return out;
  }

  struct Directed {
    std::array<int, 5> code;
    Instance inst;
    int target;
    std::array<int, 5> reverse_code;
  };

  void build_edges() {
    const int nv = static_cast<int>(out_.vertices.size());
    std::vector<std::vector<Directed>> per(nv);
    parallel_for(nv, opt_.threads, [&](std::size_t vi) {
      const int v = static_cast<int>(vi);
      const auto s = rep(v);
      std::map<std::array<int, 5>, Directed> uniq;
      for (const auto& inst : instances_at(v)) {
        const auto code = canonical_instance(v, inst);
        if (uniq.count(code)) continue;
        const State t = apply_instance(s, inst);
        auto [target, iso] = locate(t);
        Instance back;
        if (const auto* r = std::get_if<Recoupling>(&inst)) back = inverse_recoupling(s.graph, *r);
        else back = inst;
        const auto rev = canonical_instance(target, transport(back, iso));
        uniq.emplace(code, Directed{code, inst, target, rev});
      }
      for (auto& [c, d] : uniq) per[v].push_back(std::move(d));
    });

    if (opt_.edge_rule == EdgeRule::SinglePerPair) {
      std::map<std::tuple<int, int, int>, int> pair_edge;  // (lo, hi, kind) -> edge
      for (int v = 0; v < nv; ++v)
        for (const auto& d : per[v]) {
          const int kind = std::holds_alternative<TauMove>(d.inst) ? 1 : 0;
          if (d.target == v) {
            steps_[v][d.code] = {-1, true};
            continue;
          }
          const int lo = std::min(v, d.target), hi = std::max(v, d.target);
          auto [it, fresh] = pair_edge.try_emplace({lo, hi, kind}, static_cast<int>(out_.edges.size()));
          if (fresh) {
            const auto s = rep(v);
            out_.edges.push_back({v, d.target, kind ? EdgeKind::Tau : EdgeKind::F, to_move_spec(s, d.inst), false});
          }
          steps_[v][d.code] = {it->second, out_.edges[it->second].src == v};
        }
      return;
    }

    for (int v = 0; v < nv; ++v)
      for (const auto& d : per[v]) {
        if (steps_[v].count(d.code)) continue;
        const int id = static_cast<int>(out_.edges.size());
        const auto s = rep(v);
        const bool self = d.target == v && d.reverse_code == d.code;
        out_.edges.push_back({v, d.target,
                              std::holds_alternative<TauMove>(d.inst) ? EdgeKind::Tau : EdgeKind::F,
                              to_move_spec(s, d.inst), self});
        steps_[v][d.code] = {id, true};
        if (!self) steps_[d.target][d.reverse_code] = {id, false};
      }
  }

  /// Step of the complex traversed by `inst` applied to the concrete state.
  Step step_for(const State& s, const Instance& inst) const {
    auto [v, iso] = locate(s);
    const auto code = canonical_instance(v, transport(inst, iso));
    const auto it = steps_[v].find(code);
    if (it == steps_[v].end()) throw std::logic_error("move instance without an edge");
    return it->second;
  }

  // --- templates ---------------------------------------------------------

  std::vector<Template> templates_at(int v) const {
    const auto s = rep(v);
    const auto& g = s.graph;
    std::vector<Template> out;
    const auto eligible = eligible_edges(g);

    for (int e : eligible) {
      const auto fr = frame(g, e);
      const auto p1 = Recoupling::make(fr.a, fr.b, fr.c, fr.d);
      const auto p2 = Recoupling::make(fr.a, fr.d, fr.b, fr.c);
      const auto p3 = Recoupling::make(fr.a, fr.c, fr.b, fr.d);
      out.push_back({CellKind::Triangle, {e}, {p2, p3, p1}, false});
      out.push_back({CellKind::Bigon, {e}, {p2, p3}, true});
      out.push_back({CellKind::Bigon, {e}, {p3, p2}, true});
    }

    for (std::size_t i = 0; i < eligible.size(); ++i)
      for (std::size_t j = i + 1; j < eligible.size(); ++j) {
        const auto f1 = frame(g, eligible[i]);
        const auto f2 = frame(g, eligible[j]);
        const std::set<int> ends{f1.v1, f1.v2, f2.v1, f2.v2};
        if (ends.size() == 4) {
          for (Variant a : {Variant::CrossAD, Variant::CrossAC})
            for (Variant b : {Variant::CrossAD, Variant::CrossAC}) {
              const auto r1 = to_recoupling(g, {eligible[i], a});
              const auto r2 = to_recoupling(g, {eligible[j], b});
              // r1, r2, r1^-1, r2^-1 as instances are produced in add_square.
              Template t{CellKind::DCSquare, {eligible[i], eligible[j]}, {r1, r2}, false};
              out.push_back(std::move(t));
            }
        } else if (ends.size() == 3) {
          for (auto [ea, eb] : {std::pair{eligible[i], eligible[j]}, std::pair{eligible[j], eligible[i]}})
            for (auto& t : pentagons(g, ea, eb)) out.push_back(std::move(t));
        }
      }

    if (decorated_) {
      const int k = DecoratedPantGraph{s.graph, s.position}.internal_count();
      std::vector<TauMove> taus;
      for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) taus.push_back({i, j});
      for (const auto& a : taus)
        for (const auto& b : taus)
          if (!(a == b)) out.push_back({CellKind::AlgebraicSquare, {}, {a, b, a}, false});
      for (const auto& r : all_recouplings(g))
        for (const auto& t : taus) out.push_back({CellKind::MixedSquare, {recoupling_edge(g, r)}, {r, t}, false});
    }
    return out;
  }

  /// Pentagons around edges ea, eb sharing exactly one vertex.
  static std::vector<Template> pentagons(const PantGraph& g, int ea, int eb) {
    const auto fa = frame(g, ea);
    const auto fb = frame(g, eb);
    const int mid = (fa.v1 == fb.v1 || fa.v1 == fb.v2) ? fa.v1 : fa.v2;
    const int outer_a = mid == fa.v1 ? fa.v2 : fa.v1;
    const int outer_b = mid == fb.v1 ? fb.v2 : fb.v1;
    const auto [xa, ya] = g.edges()[ea];
    const auto [xb, yb] = g.edges()[eb];
    auto not_edge = [&](Dart d) { return d != xa && d != ya && d != xb && d != yb; };
    std::vector<Dart> pa, pb;
    Dart single = -1;
    for (Dart d : g.vertex(outer_a))
      if (not_edge(d)) pa.push_back(d);
    for (Dart d : g.vertex(outer_b))
      if (not_edge(d)) pb.push_back(d);
    for (Dart d : g.vertex(mid))
      if (not_edge(d)) single = d;
    std::vector<Template> out;
    // Cyclic order (o0 o1 o2 o3 o4) with {o0,o1} on ea, {o2,o3} on eb, o4 in the middle.
    for (int sa = 0; sa < 2; ++sa)
      for (int sb = 0; sb < 2; ++sb) {
        const std::array<Dart, 5> o{pa[sa], pa[1 - sa], pb[sb], pb[1 - sb], single};
        auto pair = [&](int k) { return std::array<Dart, 2>{o[k % 5], o[(k + 1) % 5]}; };
        // Sides: ea carries C0 -> C4 -> C3 -> C2, eb carries C2 -> C1 -> C0.
        Template t{CellKind::Pentagon, {ea, eb}, {}, true};
        // Each move is encoded by the new pair; the partner pair is filled in
        // during replay from the concrete graph.
        const std::array<std::pair<int, int>, 5> plan{{{0, 4}, {1, 1}, {0, 3}, {1, 0}, {0, 2}}};
        for (auto [side, c] : plan) {
          const auto p = pair(c);
          // Placeholder recoupling: first = new pair, second = (side, -1).
          t.moves.emplace_back(Recoupling{{p[0], p[1]}, {side, -1}});
        }
        out.push_back(std::move(t));
      }
    return out;
  }

  /// Completes a pentagon placeholder against the current graph.
  static Recoupling pentagon_move(const PantGraph& g, int ea, int eb, const Recoupling& placeholder) {
    const int side = placeholder.second[0];
    const int moving = side == 0 ? ea : eb;
    const int other = side == 0 ? eb : ea;
    const auto [mx, my] = g.edges()[moving];
    const auto [ox, oy] = g.edges()[other];
    // The middle vertex holds a dart of each edge.
    const int mid = (g.vertex_of(mx) == g.vertex_of(ox) || g.vertex_of(mx) == g.vertex_of(oy)) ? g.vertex_of(mx)
                                                                                                 : g.vertex_of(my);
    const Dart other_mid = g.vertex_of(ox) == mid ? ox : oy;
    const Dart moving_outer = g.vertex_of(mx) == mid ? my : mx;
    const int outer = g.vertex_of(moving_outer);
    std::set<Dart> pool;
    for (Dart d : g.vertex(outer))
      if (d != moving_outer) pool.insert(d);
    for (Dart d : g.vertex(mid))
      if (d != mx && d != my && d != other_mid) pool.insert(d);
    const Dart p0 = placeholder.first[0], p1 = placeholder.first[1];
    pool.erase(p0);
    pool.erase(p1);
    if (pool.size() != 1) throw std::logic_error("pentagon plan does not fit the graph");
    return Recoupling::make(p0, p1, *pool.begin(), other_mid);
  }

  std::optional<Cell> realize(int v, const Template& t) const {
    const State start = rep(v);
    State cur = start;
    Cell cell;
    cell.kind = t.kind;
    cell.witness.vertex = v;
    cell.witness.support = t.support;

    auto push = [&](const Instance& inst) {
      cell.boundary.push_back(step_for(cur, inst));
      cell.witness.moves.push_back(to_move_spec(cur, inst));
      cur = apply_instance(cur, inst);
    };

    if (t.kind == CellKind::DCSquare || t.kind == CellKind::MixedSquare) {
      // a b a^-1 b^-1 where the second application of each is transported.
      const Instance a = t.moves[0], b = t.moves[1];
      // The inverse of a recoupling restores the coupling it replaced.
      auto undo = [&](const Instance& m) -> Instance {
        if (const auto* r = std::get_if<Recoupling>(&m)) return inverse_recoupling(start.graph, *r);
        return m;
      };
      push(a);
      push(b);
      push(undo(a));
      push(undo(b));
    } else if (t.kind == CellKind::Pentagon) {
      for (const auto& m : t.moves)
        push(pentagon_move(cur.graph, t.support[0], t.support[1], std::get<Recoupling>(m)));
    } else if (t.kind == CellKind::AlgebraicSquare) {
      for (const auto& m : t.moves) push(m);
      // Close with the transposition that restores the ordering.
      std::vector<int> differ;
      for (std::size_t e = 0; e < cur.position.size(); ++e)
        if (cur.position[e] != start.position[e]) differ.push_back(static_cast<int>(e));
      if (differ.size() != 2) return std::nullopt;
      push(TauMove{std::min(cur.position[differ[0]], cur.position[differ[1]]),
                   std::max(cur.position[differ[0]], cur.position[differ[1]])});
    } else {
      for (const auto& m : t.moves) push(m);
    }

    const auto start_key = canonical_key(start.graph, colors_of(start));
    auto end_key = canonical_key(cur.graph, colors_of(cur));
    if (!t.close_by_isomorphism) {
      if (!(cur.graph == start.graph) || cur.position != start.position) {
        if (end_key != start_key) return std::nullopt;
      }
    } else if (end_key != start_key) {
      if (!decorated_) return std::nullopt;
      const auto closure = tau_closure(cur, start);
      if (!closure) return std::nullopt;
      for (const auto& tau : *closure) push(tau);
      end_key = canonical_key(cur.graph, colors_of(cur));
      if (end_key != start_key) throw std::logic_error("tau closure failed");
    }
    if (opt_.edge_rule == EdgeRule::SinglePerPair) {
      std::vector<Step> kept;
      for (const auto& s : cell.boundary)
        if (s.edge >= 0) kept.push_back(s);
      cell.boundary = std::move(kept);
      if (cell.boundary.empty()) return std::nullopt;
    }
    return cell;
  }

  void build_cells() {
    const int nv = static_cast<int>(out_.vertices.size());
    std::vector<std::vector<Cell>> per(nv);
    parallel_for(nv, opt_.threads, [&](std::size_t vi) {
      const int v = static_cast<int>(vi);
      for (const auto& t : templates_at(v))
        if (auto c = realize(v, t)) per[v].push_back(std::move(*c));
    });
    std::set<std::vector<Step>> seen;
    // Kinds in a fixed order so a loop matched by two templates keeps the first.
    for (CellKind kind : kAllCellKinds)
      for (int v = 0; v < nv; ++v)
        for (auto& c : per[v]) {
          if (c.kind != kind) continue;
          if (seen.insert(canonical_loop(c.boundary)).second) out_.cells.push_back(std::move(c));
        }
  }
};

}  // namespace detail

/// S_{g,n}.
inline TwoComplex build_s(int genus, int boundary, const BuildOptions& opt = {}) {
  require_admissible(genus, boundary);
  return detail::Builder(genus, boundary, false, opt).build();
}

/// The decorated lift of S_{g,n}.
inline TwoComplex build_s_decorated(int genus, int boundary, const BuildOptions& opt = {}) {
  require_admissible(genus, boundary);
  return detail::Builder(genus, boundary, true, opt).build();
}

/// Replays a cell's witness moves; true iff they return to the cell's vertex.
inline bool certify_cell(const TwoComplex& c, const Cell& cell) {
  const auto& v = c.vertices.at(cell.witness.vertex);
  detail::State cur{v.graph, v.position};
  try {
    for (const auto& m : cell.witness.moves) cur = detail::apply_instance(cur, detail::from_move_spec(cur, m));
  } catch (const MoveError&) {
    return false;
  }
  return canonical_key(cur.graph, detail::colors_of(cur)) == v.key && is_closed_walk(c, cell.boundary) &&
         !cell.boundary.empty() && c.tail(cell.boundary.front()) == cell.witness.vertex;
}

/// The same complex with every 2-cell removed.
inline TwoComplex one_skeleton(TwoComplex c) {
  c.cells.clear();
  return c;
}

// ---------------------------------------------------------------------------
// Text format
//
//   complex type=<S|Sdec> g=<g> n=<n>
//   vertices <count>
//   vertex <idx> key=<hex>
//   <four pantgraph lines>
//   [order: <edge>:<pos>, ...]            (Sdec only)
//   edges <count>
//   <id> <src> <dst> <F|Tau> <witness move> [inv]
//   cells <count>
//   <Kind>: <e>+,<e>-,... | at=<v> support=<e,...> moves=<move>; <move>; ...

inline std::string step_text(const Step& s) { return std::to_string(s.edge) + (s.forward ? "+" : "-"); }

inline std::string serialize(const TwoComplex& c) {
  std::ostringstream os;
  os << "complex type=" << (c.decorated ? "Sdec" : "S") << " g=" << c.genus << " n=" << c.boundary << "\n";
  os << "vertices " << c.vertices.size() << "\n";
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    const auto& vx = c.vertices[v];
    os << "vertex " << v << " key=" << vx.key.hex() << "\n" << serialize(vx.graph);
    if (c.decorated) {
      os << "order:";
      for (std::size_t e = 0; e < vx.position.size(); ++e) os << (e ? ", " : " ") << e << ":" << vx.position[e];
      os << "\n";
    }
  }
  os << "edges " << c.edges.size() << "\n";
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    os << e << " " << ed.src << " " << ed.dst << " " << to_string(ed.kind) << " " << to_string(ed.witness)
       << (ed.involutive ? " inv" : "") << "\n";
  }
  os << "cells " << c.cells.size() << "\n";
  for (const auto& cell : c.cells) {
    os << to_string(cell.kind) << ":";
    for (std::size_t i = 0; i < cell.boundary.size(); ++i) os << (i ? "," : " ") << step_text(cell.boundary[i]);
    os << " | at=" << cell.witness.vertex << " support=";
    for (std::size_t i = 0; i < cell.witness.support.size(); ++i) os << (i ? "," : "") << cell.witness.support[i];
    os << " moves=";
    for (std::size_t i = 0; i < cell.witness.moves.size(); ++i)
      os << (i ? "; " : "") << to_string(cell.witness.moves[i]);
    os << "\n";
  }
  return os.str();
}

namespace detail {

inline int to_int(const std::string& s, int line, int col) {
  if (s.empty() || s.find_first_not_of("-0123456789") != std::string::npos)
    throw ParseError("expected integer, got '" + s + "'", line, col);
  return std::stoi(s);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline TwoComplex deserialize_complex(const std::string& text) {
  const auto lines = detail::split_lines(text);
  std::size_t i = 0;
  auto line_no = [&] { return static_cast<int>(i) + 1; };
  auto need = [&](const std::string& what) -> const std::string& {
    if (i >= lines.size()) throw ParseError("unexpected end of input, expected " + what, line_no(), 1);
    return lines[i];
  };

  TwoComplex c;
  {
    detail::LineCursor cur(need("header"), line_no());
    cur.expect_word("complex");
    cur.expect_word("type=");
    const auto type = cur.token();
    if (type != "S" && type != "Sdec") cur.fail("type must be S or Sdec");
    c.decorated = type == "Sdec";
    cur.expect_word("g=");
    c.genus = static_cast<int>(cur.integer());
    cur.expect_word("n=");
    c.boundary = static_cast<int>(cur.integer());
    ++i;
  }
  auto section = [&](const std::string& name) {
    detail::LineCursor cur(need(name), line_no());
    cur.expect_word(name);
    const auto count = cur.integer();
    if (count < 0) cur.fail("negative count");
    ++i;
    return static_cast<std::size_t>(count);
  };

  const auto nv = section("vertices");
  for (std::size_t v = 0; v < nv; ++v) {
    detail::LineCursor cur(need("vertex"), line_no());
    cur.expect_word("vertex");
    if (cur.integer() != static_cast<long long>(v)) cur.fail("vertex index out of sequence");
    cur.expect_word("key=");
    ComplexVertex vx;
    const auto hex = cur.token();
    try {
      vx.key = CanonicalKey::from_hex(hex);
    } catch (const StructuralError& e) {
      cur.fail(e.what());
    }
    ++i;
    vx.graph = parse_graph_lines(lines, i);
    i += 4;
    if (c.decorated) {
      detail::LineCursor oc(need("order"), line_no());
      oc.expect_word("order:");
      vx.position.assign(vx.graph.edge_count(), 0);
      bool first = true;
      while (!oc.at_end()) {
        if (!first) oc.expect(',');
        first = false;
        const auto e = oc.integer();
        oc.expect(':');
        const auto p = oc.integer();
        if (e < 0 || e >= vx.graph.edge_count()) oc.fail("order names unknown edge");
        vx.position[e] = static_cast<int>(p);
      }
      ++i;
    }
    c.vertices.push_back(std::move(vx));
  }

  const auto ne = section("edges");
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& l = need("edge");
    std::istringstream is(l);
    std::vector<std::string> tok;
    std::string t;
    while (is >> t) tok.push_back(t);
    if (tok.size() < 5) throw ParseError("edge line too short", line_no(), 1);
    if (detail::to_int(tok[0], line_no(), 1) != static_cast<int>(e))
      throw ParseError("edge index out of sequence", line_no(), 1);
    ComplexEdge ed;
    ed.src = detail::to_int(tok[1], line_no(), 1);
    ed.dst = detail::to_int(tok[2], line_no(), 1);
    if (ed.src < 0 || ed.dst < 0 || ed.src >= static_cast<int>(nv) || ed.dst >= static_cast<int>(nv))
      throw ParseError("edge endpoint out of range", line_no(), 1);
    if (tok[3] == "F") ed.kind = EdgeKind::F;
    else if (tok[3] == "Tau") ed.kind = EdgeKind::Tau;
    else throw ParseError("unknown edge kind '" + tok[3] + "'", line_no(), 1);
    std::size_t end = tok.size();
    if (tok.back() == "inv") {
      ed.involutive = true;
      --end;
    }
    std::string word;
    for (std::size_t k = 4; k < end; ++k) word += (k > 4 ? " " : "") + tok[k];
    std::vector<MoveSpec> mv;
    try {
      mv = parse_moves(word);
    } catch (const ParseError& pe) {
      throw ParseError(std::string("bad edge witness: ") + pe.what(), line_no(), 1);
    }
    if (mv.size() != 1) throw ParseError("edge witness must be one move", line_no(), 1);
    ed.witness = mv[0];
    c.edges.push_back(ed);
    ++i;
  }

  const auto nc = section("cells");
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& l = need("cell");
    const auto colon = l.find(':');
    if (colon == std::string::npos) throw ParseError("cell line needs 'Kind:'", line_no(), 1);
    const auto kind = cell_kind_from(detail::trim(l.substr(0, colon)));
    if (!kind) throw ParseError("unknown cell kind", line_no(), 1);
    Cell cell;
    cell.kind = *kind;
    const auto bar = l.find('|', colon);
    const auto word = detail::trim(l.substr(colon + 1, bar == std::string::npos ? std::string::npos : bar - colon - 1));
    if (!word.empty())
      for (const auto& st : detail::split(word, ',')) {
        const auto s = detail::trim(st);
        if (s.size() < 2 || (s.back() != '+' && s.back() != '-'))
          throw ParseError("boundary step must be <edge>+ or <edge>-", line_no(), static_cast<int>(colon) + 2);
        const int id = detail::to_int(s.substr(0, s.size() - 1), line_no(), static_cast<int>(colon) + 2);
        if (id < 0 || id >= static_cast<int>(ne)) throw ParseError("boundary names unknown edge", line_no(), 1);
        cell.boundary.push_back({id, s.back() == '+'});
      }
    if (bar != std::string::npos) {
      const auto rest = l.substr(bar + 1);
      const auto at = rest.find("at=");
      const auto sup = rest.find("support=");
      const auto mv = rest.find("moves=");
      if (at == std::string::npos || sup == std::string::npos || mv == std::string::npos)
        throw ParseError("cell witness needs at=, support=, moves=", line_no(), static_cast<int>(bar) + 1);
      cell.witness.vertex = detail::to_int(detail::trim(rest.substr(at + 3, sup - at - 3)), line_no(), 1);
      const auto sups = detail::trim(rest.substr(sup + 8, mv - sup - 8));
      if (!sups.empty())
        for (const auto& s : detail::split(sups, ',')) cell.witness.support.push_back(detail::to_int(detail::trim(s), line_no(), 1));
      const auto moves = rest.substr(mv + 6);
      for (const auto& m : detail::split(moves, ';')) {
        if (detail::trim(m).empty()) continue;
        auto parsed = parse_moves(m);
        cell.witness.moves.insert(cell.witness.moves.end(), parsed.begin(), parsed.end());
      }
    }
    c.cells.push_back(std::move(cell));
    ++i;
  }
  while (i < lines.size()) {
    if (!detail::trim(lines[i]).empty()) throw ParseError("trailing text after cells", line_no(), 1);
    ++i;
  }
  return c;
}

/// Graphviz rendering: one node per vertex labeled by key digest, one edge
/// line per complex edge colored by kind.
inline std::string export_dot(const TwoComplex& c) {
  std::ostringstream os;
  os << "graph S {\n";
  for (std::size_t v = 0; v < c.vertices.size(); ++v)
    os << "  v" << v << " [label=\"" << c.vertices[v].key.digest() << "\"];\n";
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    os << "  v" << ed.src << " -- v" << ed.dst << " [color=" << (ed.kind == EdgeKind::F ? "black" : "blue")
       << ", label=\"" << e << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

/// `V=<> E=<> cells=<bigon:t triangle:t ...> chi=<>`
inline std::string census_line(const TwoComplex& c) {
  std::ostringstream os;
  const auto census = c.census();
  os << "V=" << c.vertices.size() << " E=" << c.edges.size() << " cells=<";
  bool first = true;
  for (CellKind k : kAllCellKinds) {
    if (!c.decorated && (k == CellKind::AlgebraicSquare || k == CellKind::MixedSquare)) continue;
    std::string name = to_string(k);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    os << (first ? "" : " ") << name << ":" << census.at(k);
    first = false;
  }
  os << "> chi=" << euler_characteristic(c);
  return os.str();
}

}  // namespace pantcx
