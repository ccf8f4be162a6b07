#pragma once

// Canonical labeling and isomorphism search for PantGraphs.
//
// Canonical keys come from individualization-refinement on the vertex
// multigraph: vertices are colored by (degree, leaf label) and refined by
// neighbor multisets until discrete, branching on the first non-singleton
// cell. The key is the lexicographically least adjacency code over all
// leaves of the search tree. Optional per-edge colors (the edge ordering of
// a decorated graph) are carried through refinement and the code.
//
// Dart-level isomorphisms are found by a separate backtracking search that
// propagates through mates and vertex blocks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pantcx/graph.hpp"

namespace pantcx {

/// Totally ordered byte string; equal iff the graphs are isomorphic by a
/// label-preserving (and color-preserving) isomorphism.
struct CanonicalKey {
  std::string bytes;

  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
      out.push_back(digits[c >> 4]);
      out.push_back(digits[c & 15]);
    }
    return out;
  }

  /// Short FNV-1a digest for display.
  std::string digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(12, '0');
    for (int i = 11; i >= 0; --i) {
      out[i] = digits[h & 15];
      h >>= 4;
    }
    return out;
  }

  static CanonicalKey from_hex(const std::string& hex) {
    if (hex.size() % 2) throw StructuralError("odd-length key");
    CanonicalKey k;
    auto nib = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      throw StructuralError("bad hex digit in key");
    };
    for (std::size_t i = 0; i < hex.size(); i += 2)
      k.bytes.push_back(static_cast<char>(nib(hex[i]) * 16 + nib(hex[i + 1])));
    return k;
  }
};

namespace detail {

struct ColoredMultigraph {
  int nv = 0;
  std::vector<int> initial;                               // per vertex
  std::vector<std::tuple<int, int, int>> edges;           // (u, v, color)
  std::vector<std::vector<std::pair<int, int>>> adj;      // (neighbor, color), loops twice
};

inline ColoredMultigraph to_multigraph(const PantGraph& g, const std::vector<int>* edge_colors) {
  ColoredMultigraph m;
  m.nv = g.vertex_count();
  m.initial.assign(m.nv, 0);
  for (int v = 0; v < m.nv; ++v) {
    if (g.degree(v) == 1) {
      const int label = g.leaf_label(g.vertex(v)[0]);
      m.initial[v] = label > 0 ? 1 + label : 1;
    }
  }
  m.adj.assign(m.nv, {});
  const auto edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int u = g.vertex_of(edges[e].first);
    const int w = g.vertex_of(edges[e].second);
    const int color = edge_colors ? (*edge_colors)[e] : 0;
    m.edges.emplace_back(u, w, color);
    m.adj[u].emplace_back(w, color);
    m.adj[w].emplace_back(u, color);
  }
  return m;
}

/// Re-ranks colors to 0..k-1 preserving order.
inline int normalize_colors(std::vector<int>& colors) {
  std::vector<int> sorted = colors;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto& c : colors) c = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
  return static_cast<int>(sorted.size());
}

/// Equitable refinement; new colors are ranked by (old color, signature) so
/// the result is isomorphism-invariant.
inline int refine(const ColoredMultigraph& m, std::vector<int>& colors) {
  int classes = normalize_colors(colors);
  while (true) {
    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> sig(m.nv);
    for (int v = 0; v < m.nv; ++v) {
      sig[v].first = colors[v];
      for (auto [w, c] : m.adj[v]) sig[v].second.emplace_back(colors[w], c);
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    auto order = sig;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    std::vector<int> next(m.nv);
    for (int v = 0; v < m.nv; ++v)
      next[v] = static_cast<int>(std::lower_bound(order.begin(), order.end(), sig[v]) - order.begin());
    const int next_classes = static_cast<int>(order.size());
    colors = std::move(next);
    if (next_classes == classes) return classes;
    classes = next_classes;
  }
}

inline std::vector<int> code_for(const ColoredMultigraph& m, const std::vector<int>& position) {
  std::vector<int> code;
  code.reserve(2 + m.nv + 3 * m.edges.size());
  code.push_back(m.nv);
  code.push_back(static_cast<int>(m.edges.size()));
  std::vector<int> by_pos(m.nv);
  for (int v = 0; v < m.nv; ++v) by_pos[position[v]] = m.initial[v];
  code.insert(code.end(), by_pos.begin(), by_pos.end());
  std::vector<std::tuple<int, int, int>> es;
  for (auto [u, w, c] : m.edges) {
    int a = position[u], b = position[w];
    if (a > b) std::swap(a, b);
    es.emplace_back(a, b, c);
  }
  std::sort(es.begin(), es.end());
  for (auto [a, b, c] : es) {
    code.push_back(a);
    code.push_back(b);
    code.push_back(c);
  }
  return code;
}

struct SearchResult {
  std::vector<int> best;
  std::vector<int> best_position;
  long long leaves_with_best = 0;
};

inline void search(const ColoredMultigraph& m, std::vector<int> colors, SearchResult& out) {
  const int classes = refine(m, colors);
  if (classes == m.nv) {
    auto code = code_for(m, colors);
    if (out.leaves_with_best == 0 || code < out.best) {
      out.best = std::move(code);
      out.best_position = colors;
      out.leaves_with_best = 1;
    } else if (code == out.best) {
      ++out.leaves_with_best;
    }
    return;
  }
  // First (smallest color) non-singleton cell.
  std::vector<int> size(classes, 0);
  for (int c : colors) ++size[c];
  int target = 0;
  while (size[target] < 2) ++target;
  for (int v = 0; v < m.nv; ++v) {
    if (colors[v] != target) continue;
    std::vector<int> next = colors;
    for (int w = 0; w < m.nv; ++w)
      if (next[w] > target || (next[w] == target && w != v)) next[w] += 1;
    search(m, std::move(next), out);
  }
}

inline SearchResult canonical_search(const PantGraph& g, const std::vector<int>* edge_colors) {
  const auto m = to_multigraph(g, edge_colors);
  SearchResult out;
  search(m, m.initial, out);
  return out;
}

inline CanonicalKey encode_key(const std::vector<int>& code) {
  CanonicalKey k;
  k.bytes.reserve(code.size() * 2);
  for (int x : code) {
    k.bytes.push_back(static_cast<char>((x >> 8) & 0xff));
    k.bytes.push_back(static_cast<char>(x & 0xff));
  }
  return k;
}

}  // namespace detail

inline CanonicalKey canonical_key(const PantGraph& g, const std::vector<int>* edge_colors = nullptr) {
  return detail::encode_key(detail::canonical_search(g, edge_colors).best);
}

inline bool are_isomorphic(const PantGraph& a, const PantGraph& b) {
  return canonical_key(a) == canonical_key(b);
}

/// Calls `visit(map)` for every dart bijection a -> b that preserves the
/// pairing, the vertex partition, leaf labels, and (if given) edge colors.
/// `visit` returns false to stop early. Returns the number visited.
inline long long for_each_isomorphism(const PantGraph& a, const PantGraph& b,
                                      const std::function<bool(const std::vector<Dart>&)>& visit,
                                      const std::vector<int>* colors_a = nullptr,
                                      const std::vector<int>* colors_b = nullptr) {
  const int nd = a.dart_count();
  if (nd != b.dart_count() || a.vertex_count() != b.vertex_count() || a.leaf_count() != b.leaf_count())
    return 0;
  if (nd == 0) {
    visit({});
    return 1;
  }

  std::vector<int> edge_a(nd), edge_b(nd);
  for (Dart d = 0; d < nd; ++d) {
    edge_a[d] = a.edge_of(d);
    edge_b[d] = b.edge_of(d);
  }
  auto color_a = [&](Dart d) { return colors_a ? (*colors_a)[edge_a[d]] : 0; };
  auto color_b = [&](Dart d) { return colors_b ? (*colors_b)[edge_b[d]] : 0; };

  std::vector<Dart> f(nd, -1), finv(nd, -1);
  std::vector<Dart> trail;
  long long found = 0;
  bool stop = false;

  auto compatible = [&](Dart d, Dart e) {
    if (a.degree(a.vertex_of(d)) != b.degree(b.vertex_of(e))) return false;
    if (a.leaf_label(d) != b.leaf_label(e)) return false;
    if (color_a(d) != color_b(e)) return false;
    return true;
  };

  // Assigns d -> e and closes under mates; returns false on conflict.
  // Every assignment is pushed to `trail` for undo.
  std::function<bool(Dart, Dart)> assign = [&](Dart d, Dart e) -> bool {
    if (f[d] != -1) return f[d] == e;
    if (finv[e] != -1) return false;
    if (!compatible(d, e)) return false;
    f[d] = e;
    finv[e] = d;
    trail.push_back(d);
    if (!assign(a.mate(d), b.mate(e))) return false;
    // Vertex consistency: every mapped dart of d's block must land in e's block.
    const int vb = b.vertex_of(e);
    const int va = a.vertex_of(d);
    for (Dart x : a.vertex(va))
      if (f[x] != -1 && b.vertex_of(f[x]) != vb) return false;
    for (Dart y : b.vertex(vb))
      if (finv[y] != -1 && a.vertex_of(finv[y]) != va) return false;
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      const Dart d = trail.back();
      trail.pop_back();
      finv[f[d]] = -1;
      f[d] = -1;
    }
  };

  std::function<void()> extend = [&]() {
    if (stop) return;
    // Find a partially mapped block with an unmapped dart.
    Dart pick = -1;
    int image_vertex = -1;
    for (int v = 0; v < a.vertex_count() && pick == -1; ++v) {
      Dart mapped = -1, unmapped = -1;
      for (Dart x : a.vertex(v)) {
        if (f[x] != -1) mapped = x;
        else if (unmapped == -1) unmapped = x;
      }
      if (mapped != -1 && unmapped != -1) {
        pick = unmapped;
        image_vertex = b.vertex_of(f[mapped]);
      }
    }
    if (pick == -1) {
      // Connected graphs are fully mapped once one dart is.
      for (Dart d = 0; d < nd; ++d)
        if (f[d] == -1) return;
      ++found;
      if (!visit(f)) stop = true;
      return;
    }
    for (Dart e : b.vertex(image_vertex)) {
      if (finv[e] != -1) continue;
      const std::size_t mark = trail.size();
      if (assign(pick, e)) extend();
      undo(mark);
      if (stop) return;
    }
  };

  Dart start = a.leaf_count() > 0 ? a.leaf_dart(1) : 0;
  std::vector<Dart> candidates;
  if (a.leaf_count() > 0) candidates.push_back(b.leaf_dart(1));
  else
    for (Dart e = 0; e < nd; ++e) candidates.push_back(e);
  for (Dart e : candidates) {
    const std::size_t mark = trail.size();
    if (assign(start, e)) extend();
    undo(mark);
    if (stop) break;
  }
  return found;
}

inline std::optional<std::vector<Dart>> find_isomorphism(const PantGraph& a, const PantGraph& b,
                                                         const std::vector<int>* colors_a = nullptr,
                                                         const std::vector<int>* colors_b = nullptr) {
  std::optional<std::vector<Dart>> out;
  for_each_isomorphism(
      a, b,
      [&](const std::vector<Dart>& f) {
        out = f;
        return false;
      },
      colors_a, colors_b);
  return out;
}

/// All label-preserving dart automorphisms (identity first is not guaranteed).
inline std::vector<std::vector<Dart>> automorphisms(const PantGraph& g, const std::vector<int>* colors = nullptr) {
  std::vector<std::vector<Dart>> out;
  for_each_isomorphism(
      g, g,
      [&](const std::vector<Dart>& f) {
        out.push_back(f);
        return true;
      },
      colors, colors);
  return out;
}

inline long long automorphism_count(const PantGraph& g, const std::vector<int>* colors = nullptr) {
  return for_each_isomorphism(g, g, [](const std::vector<Dart>&) { return true; }, colors, colors);
}

/// Vertex-level automorphism count from the canonical search tree. Equals
/// automorphism_count divided by the edge-flip and parallel-edge factors.
inline long long vertex_automorphism_count(const PantGraph& g, const std::vector<int>* colors = nullptr) {
  return detail::canonical_search(g, colors).leaves_with_best;
}

}  // namespace pantcx
