#pragma once

// F moves and tau moves.
//
// An F move on an internal edge e = (x, y) with distinct endpoints v1 (the
// vertex of x, the smaller dart) and v2 recouples the four other darts at
// v1 and v2. The pairing involution is untouched: only the two blocks change,
// so the new edge e' is the same dart pair as e and every edge keeps its id.
// A move instance is therefore fully described by its new coupling.

#include <array>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pantcx/canon.hpp"
#include "pantcx/graph.hpp"

namespace pantcx {

/// (ab)(cd) -> (ad)(bc) is CrossAD, (ab)(cd) -> (ac)(bd) is CrossAC, where
/// a < b are the non-e darts at v1 and c < d those at v2.
enum class Variant { CrossAD, CrossAC };

struct FMove {
  int edge = 0;
  Variant variant = Variant::CrossAD;
  friend bool operator==(const FMove&, const FMove&) = default;
};

/// Transposition of ordering positions (1-based).
struct TauMove {
  int i = 1;
  int j = 2;
  friend bool operator==(const TauMove&, const TauMove&) = default;
};

using MoveSpec = std::variant<FMove, TauMove>;

/// Dart-level description of an F move: the two new pairs of outer darts.
/// Pairs are sorted and `first < second`.
struct Recoupling {
  std::array<Dart, 2> first{};
  std::array<Dart, 2> second{};

  friend auto operator<=>(const Recoupling&, const Recoupling&) = default;
  friend bool operator==(const Recoupling&, const Recoupling&) = default;

  static Recoupling make(Dart p, Dart q, Dart r, Dart s) {
    std::array<Dart, 2> u{std::min(p, q), std::max(p, q)};
    std::array<Dart, 2> w{std::min(r, s), std::max(r, s)};
    if (w < u) std::swap(u, w);
    return {u, w};
  }

  /// Image under a dart map.
  Recoupling mapped(const std::vector<Dart>& f) const {
    return make(f[first[0]], f[first[1]], f[second[0]], f[second[1]]);
  }
};

/// The local picture around an eligible edge.
struct EdgeFrame {
  Dart x = -1, y = -1;  // x < y, x at v1
  int v1 = -1, v2 = -1;
  Dart a = -1, b = -1;  // non-e darts at v1, a < b
  Dart c = -1, d = -1;  // non-e darts at v2, c < d
};

inline bool is_eligible(const PantGraph& g, int edge) {
  const auto edges = g.edges();
  if (edge < 0 || edge >= static_cast<int>(edges.size())) return false;
  const auto [x, y] = edges[edge];
  return g.is_internal(x) && !g.is_loop(x);
}

/// Internal edges with two distinct endpoints, by edge id.
inline std::vector<int> eligible_edges(const PantGraph& g) {
  std::vector<int> out;
  const auto edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (g.is_internal(edges[e].first) && !g.is_loop(edges[e].first)) out.push_back(static_cast<int>(e));
  return out;
}

inline EdgeFrame frame(const PantGraph& g, int edge) {
  const auto edges = g.edges();
  if (edge < 0 || edge >= static_cast<int>(edges.size()))
    throw MoveError("edge " + std::to_string(edge) + " out of range");
  const auto [x, y] = edges[edge];
  if (!g.is_internal(x)) throw MoveError("edge " + std::to_string(edge) + " is a leaf edge");
  if (g.is_loop(x)) throw MoveError("edge " + std::to_string(edge) + " is a loop");
  EdgeFrame fr;
  fr.x = x;
  fr.y = y;
  fr.v1 = g.vertex_of(x);
  fr.v2 = g.vertex_of(y);
  std::vector<Dart> one, two;
  for (Dart d : g.vertex(fr.v1))
    if (d != x) one.push_back(d);
  for (Dart d : g.vertex(fr.v2))
    if (d != y) two.push_back(d);
  fr.a = one[0];
  fr.b = one[1];
  fr.c = two[0];
  fr.d = two[1];
  return fr;
}

inline Recoupling to_recoupling(const PantGraph& g, const FMove& m) {
  const auto fr = frame(g, m.edge);
  return m.variant == Variant::CrossAD ? Recoupling::make(fr.a, fr.d, fr.b, fr.c)
                                       : Recoupling::make(fr.a, fr.c, fr.b, fr.d);
}

/// The edge whose endpoints carry the four darts of `r`.
inline int recoupling_edge(const PantGraph& g, const Recoupling& r) {
  const int v1 = g.vertex_of(r.first[0]);
  for (Dart d : g.vertex(v1)) {
    if (d == r.first[0] || d == r.first[1] || d == r.second[0] || d == r.second[1]) continue;
    return g.edge_of(d);
  }
  throw MoveError("recoupling does not surround an edge");
}

/// Checks that `r` is a non-trivial recoupling of an eligible edge of `g`.
inline EdgeFrame check_recoupling(const PantGraph& g, const Recoupling& r) {
  const auto fr = frame(g, recoupling_edge(g, r));
  std::array<Dart, 4> outer{fr.a, fr.b, fr.c, fr.d};
  std::array<Dart, 4> got{r.first[0], r.first[1], r.second[0], r.second[1]};
  std::sort(outer.begin(), outer.end());
  std::sort(got.begin(), got.end());
  if (outer != got) throw MoveError("recoupling darts do not surround one edge");
  if (r == Recoupling::make(fr.a, fr.b, fr.c, fr.d)) throw MoveError("recoupling is the current coupling");
  return fr;
}

inline FMove to_fmove(const PantGraph& g, const Recoupling& r) {
  const auto fr = check_recoupling(g, r);
  const int edge = g.edge_of(fr.x);
  if (r == Recoupling::make(fr.a, fr.d, fr.b, fr.c)) return {edge, Variant::CrossAD};
  return {edge, Variant::CrossAC};
}

/// Applies a recoupling: x joins the pair containing a, y the other pair.
inline PantGraph apply_recoupling(const PantGraph& g, const Recoupling& r) {
  const auto fr = check_recoupling(g, r);
  const bool a_first = r.first[0] == fr.a || r.first[1] == fr.a;
  const auto& with_x = a_first ? r.first : r.second;
  const auto& with_y = a_first ? r.second : r.first;
  auto blocks = g.vertices();
  blocks[fr.v1] = {fr.x, with_x[0], with_x[1]};
  blocks[fr.v2] = {fr.y, with_y[0], with_y[1]};
  return PantGraph(g.mates(), std::move(blocks), g.leaf_darts());
}

inline PantGraph apply_f(const PantGraph& g, const FMove& m) {
  return apply_recoupling(g, to_recoupling(g, m));
}

/// The recoupling on the result of `r` that undoes it.
inline Recoupling inverse_recoupling(const PantGraph& g, const Recoupling& r) {
  const auto fr = frame(g, recoupling_edge(g, r));
  return Recoupling::make(fr.a, fr.b, fr.c, fr.d);
}

/// Both recouplings of every eligible edge, edge id order, AD before AC.
inline std::vector<Recoupling> all_recouplings(const PantGraph& g) {
  std::vector<Recoupling> out;
  for (int e : eligible_edges(g)) {
    out.push_back(to_recoupling(g, {e, Variant::CrossAD}));
    out.push_back(to_recoupling(g, {e, Variant::CrossAC}));
  }
  return out;
}

inline std::vector<std::pair<FMove, PantGraph>> all_moves(const PantGraph& g) {
  std::vector<std::pair<FMove, PantGraph>> out;
  for (int e : eligible_edges(g))
    for (Variant v : {Variant::CrossAD, Variant::CrossAC}) {
      FMove m{e, v};
      out.emplace_back(m, apply_f(g, m));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Decorated graphs

/// A PantGraph with its internal edges numbered 1..k. `position[edge id]` is
/// 0 for leaf edges.
struct DecoratedPantGraph {
  PantGraph base;
  std::vector<int> position;

  friend bool operator==(const DecoratedPantGraph&, const DecoratedPantGraph&) = default;

  int internal_count() const {
    int k = 0;
    for (int p : position)
      if (p > 0) ++k;
    return k;
  }

  /// Edge id at ordering position `pos`.
  int edge_at(int pos) const {
    for (std::size_t e = 0; e < position.size(); ++e)
      if (position[e] == pos) return static_cast<int>(e);
    throw MoveError("no edge at position " + std::to_string(pos));
  }
};

/// Numbers internal edges 1..k in edge id order.
inline DecoratedPantGraph decorate(const PantGraph& g) {
  DecoratedPantGraph out{g, {}};
  int next = 1;
  for (auto [x, y] : g.edges()) out.position.push_back(g.is_internal(x) ? next++ : 0);
  return out;
}

inline bool valid_ordering(const DecoratedPantGraph& d) {
  const auto edges = d.base.edges();
  if (d.position.size() != edges.size()) return false;
  std::vector<char> used(edges.size() + 1, 0);
  int k = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int p = d.position[e];
    const bool internal = d.base.is_internal(edges[e].first);
    if (internal != (p > 0)) return false;
    if (p > 0) {
      if (p > static_cast<int>(edges.size()) || used[p]) return false;
      used[p] = 1;
      ++k;
    }
  }
  for (int p = 1; p <= k; ++p)
    if (!used[p]) return false;
  return true;
}

inline CanonicalKey canonical_key(const DecoratedPantGraph& d) { return canonical_key(d.base, &d.position); }

/// F_i: the F move on the edge at position i; the new edge keeps position i.
inline DecoratedPantGraph apply_decorated_f(const DecoratedPantGraph& d, int pos, Variant v) {
  const int edge = d.edge_at(pos);
  return {apply_f(d.base, {edge, v}), d.position};
}

inline DecoratedPantGraph apply_decorated_recoupling(const DecoratedPantGraph& d, const Recoupling& r) {
  return {apply_recoupling(d.base, r), d.position};
}

inline DecoratedPantGraph apply_tau(const DecoratedPantGraph& d, const TauMove& t) {
  const int k = d.internal_count();
  if (t.i == t.j) throw MoveError("tau indices must differ");
  if (t.i < 1 || t.j < 1 || t.i > k || t.j > k)
    throw MoveError("tau index out of range 1.." + std::to_string(k));
  DecoratedPantGraph out = d;
  for (auto& p : out.position) {
    if (p == t.i) p = t.j;
    else if (p == t.j) p = t.i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Move text syntax: `F e=<edge-id> v=<AD|AC>` and `tau <i> <j>`.

inline std::string to_string(const MoveSpec& m) {
  std::ostringstream os;
  if (const auto* f = std::get_if<FMove>(&m))
    os << "F e=" << f->edge << " v=" << (f->variant == Variant::CrossAD ? "AD" : "AC");
  else {
    const auto& t = std::get<TauMove>(m);
    os << "tau " << t.i << " " << t.j;
  }
  return os.str();
}

/// Parses a whitespace-separated move word.
inline std::vector<MoveSpec> parse_moves(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> tok;
  std::string t;
  while (is >> t) tok.push_back(t);
  std::vector<MoveSpec> out;
  auto fail = [&](std::size_t i, const std::string& what) -> void {
    throw ParseError(what + " at token " + std::to_string(i + 1), 1, static_cast<int>(i) + 1);
  };
  auto number = [&](std::size_t i, const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail(i, "expected number");
    return std::stoi(s);
  };
  for (std::size_t i = 0; i < tok.size();) {
    if (tok[i] == "F") {
      if (i + 2 >= tok.size()) fail(i, "truncated F move");
      const auto& e = tok[i + 1];
      const auto& v = tok[i + 2];
      if (e.rfind("e=", 0) != 0) fail(i + 1, "expected e=<edge>");
      if (v != "v=AD" && v != "v=AC") fail(i + 2, "expected v=AD or v=AC");
      out.push_back(FMove{number(i + 1, e.substr(2)), v == "v=AD" ? Variant::CrossAD : Variant::CrossAC});
      i += 3;
    } else if (tok[i] == "tau") {
      if (i + 2 >= tok.size()) fail(i, "truncated tau move");
      out.push_back(TauMove{number(i + 1, tok[i + 1]), number(i + 2, tok[i + 2])});
      i += 3;
    } else {
      fail(i, "unknown move '" + tok[i] + "'");
    }
  }
  return out;
}

}  // namespace pantcx
