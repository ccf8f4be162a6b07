#pragma once

// Local graph surgery: inserting and contracting free ends, joining two free
// ends into an edge and cutting an edge into two free ends.

#include <string>
#include <utility>
#include <vector>

#include "pantcx/graph.hpp"

namespace pantcx {

namespace detail {

/// Rebuilds a graph keeping only darts with keep[d], renumbered in order.
/// `extra_pairs` re-pairs surviving darts (old ids) whose mates were removed.
inline PantGraph restrict_darts(const PantGraph& g, const std::vector<char>& keep,
                                const std::vector<std::pair<Dart, Dart>>& extra_pairs,
                                const std::vector<Dart>& leaves_old) {
  std::vector<Dart> renum(g.dart_count(), -1);
  int next = 0;
  for (Dart d = 0; d < g.dart_count(); ++d)
    if (keep[d]) renum[d] = next++;
  std::vector<Dart> mate(next, -1);
  for (Dart d = 0; d < g.dart_count(); ++d)
    if (keep[d] && keep[g.mate(d)]) mate[renum[d]] = renum[g.mate(d)];
  for (auto [p, q] : extra_pairs) {
    mate[renum[p]] = renum[q];
    mate[renum[q]] = renum[p];
  }
  std::vector<std::vector<Dart>> blocks;
  for (const auto& block : g.vertices()) {
    std::vector<Dart> b;
    for (Dart d : block)
      if (keep[d]) b.push_back(renum[d]);
    if (!b.empty()) blocks.push_back(std::move(b));
  }
  std::vector<Dart> leaves;
  for (Dart d : leaves_old) leaves.push_back(renum[d]);
  return PantGraph(std::move(mate), std::move(blocks), std::move(leaves));
}

}  // namespace detail

/// Splits edge `edge` with a new trivalent vertex carrying a new free end
/// labeled n+1.
inline PantGraph insert_leaf(const PantGraph& g, int edge) {
  const auto edges = g.edges();
  if (edge < 0 || edge >= static_cast<int>(edges.size())) throw DomainError("insertion edge out of range");
  const auto [p, q] = edges[edge];
  const Dart base = g.dart_count();
  const Dart s1 = base, s2 = base + 1, t = base + 2, l = base + 3;
  std::vector<Dart> mate = g.mates();
  mate.resize(base + 4);
  mate[p] = s1;
  mate[s1] = p;
  mate[q] = s2;
  mate[s2] = q;
  mate[t] = l;
  mate[l] = t;
  auto blocks = g.vertices();
  blocks.push_back({s1, s2, t});
  blocks.push_back({l});
  auto leaves = g.leaf_darts();
  leaves.push_back(l);
  return PantGraph(std::move(mate), std::move(blocks), std::move(leaves));
}

/// Removes the free end labeled n and smooths its trivalent neighbor.
inline PantGraph contract_last_leaf(const PantGraph& g) {
  const int n = g.leaf_count();
  if (n < 1) throw DomainError("graph has no free end to contract");
  const Dart l = g.leaf_dart(n);
  const Dart m = g.mate(l);
  const int w = g.vertex_of(m);
  if (g.degree(w) != 3) throw DomainError("free end is not attached to a trivalent vertex");
  std::vector<Dart> others;
  for (Dart d : g.vertex(w))
    if (d != m) others.push_back(d);
  const Dart p = others[0], q = others[1];
  if (g.mate(p) == q) throw DomainError("smoothing would leave a free-floating circle");
  std::vector<char> keep(g.dart_count(), 1);
  keep[l] = keep[m] = keep[p] = keep[q] = 0;
  std::vector<Dart> leaves(g.leaf_darts().begin(), g.leaf_darts().end() - 1);
  return detail::restrict_darts(g, keep, {{g.mate(p), g.mate(q)}}, leaves);
}

/// Joins the two free ends of an n = 2 graph into a single edge.
inline PantGraph join_free_ends(const PantGraph& g) {
  if (g.leaf_count() != 2) throw DomainError("joining free ends needs exactly two");
  const Dart l1 = g.leaf_dart(1), l2 = g.leaf_dart(2);
  const Dart m1 = g.mate(l1), m2 = g.mate(l2);
  if (m1 == l2) throw DomainError("free ends are joined to each other");
  std::vector<char> keep(g.dart_count(), 1);
  keep[l1] = keep[l2] = 0;
  return detail::restrict_darts(g, keep, {{m1, m2}}, {});
}

/// Cuts edge `edge` of a closed graph into two free ends; the smaller dart's
/// side gets label 1 unless `swap_labels`.
inline PantGraph cut_edge(const PantGraph& g, int edge, bool swap_labels = false) {
  if (g.leaf_count() != 0) throw DomainError("cutting is defined on closed graphs");
  const auto edges = g.edges();
  if (edge < 0 || edge >= static_cast<int>(edges.size())) throw DomainError("cut edge out of range");
  const auto [p, q] = edges[edge];
  const Dart base = g.dart_count();
  const Dart l1 = base, l2 = base + 1;
  std::vector<Dart> mate = g.mates();
  mate.resize(base + 2);
  mate[p] = l1;
  mate[l1] = p;
  mate[q] = l2;
  mate[l2] = q;
  auto blocks = g.vertices();
  blocks.push_back({l1});
  blocks.push_back({l2});
  std::vector<Dart> leaves = swap_labels ? std::vector<Dart>{l2, l1} : std::vector<Dart>{l1, l2};
  return PantGraph(std::move(mate), std::move(blocks), std::move(leaves));
}

// ---------------------------------------------------------------------------
// Small named graphs.

/// One trivalent vertex with free ends 1, 2, 3.
inline PantGraph tripod() { return make_graph(6, {{0, 3}, {1, 4}, {2, 5}}, {{0, 1, 2}, {3}, {4}, {5}}, {3, 4, 5}); }

/// One trivalent vertex with a loop and free end 1.
inline PantGraph loop_leaf() { return make_graph(4, {{0, 1}, {2, 3}}, {{0, 1, 2}, {3}}, {3}); }

/// Two trivalent vertices joined by three parallel edges.
inline PantGraph theta() { return make_graph(6, {{0, 3}, {1, 4}, {2, 5}}, {{0, 1, 2}, {3, 4, 5}}, {}); }

/// Two loops joined by a bridge.
inline PantGraph dumbbell() { return make_graph(6, {{0, 1}, {2, 3}, {4, 5}}, {{0, 1, 4}, {2, 3, 5}}, {}); }

/// Genus zero, four free ends, coupling (ij)(kl).
inline PantGraph four_leaf(int i, int j, int k, int l) {
  // darts: 0,1 internal; 2..5 at the vertices; 6..9 leaf darts for labels 1..4
  std::vector<Dart> leaf_of_label(4);
  const int slots[4] = {2, 3, 4, 5};
  const int labels[4] = {i, j, k, l};
  std::vector<std::pair<Dart, Dart>> edges{{0, 1}};
  for (int s = 0; s < 4; ++s) {
    edges.emplace_back(slots[s], 5 + labels[s]);
    leaf_of_label[labels[s] - 1] = 5 + labels[s];
  }
  return make_graph(10, edges, {{0, 2, 3}, {1, 4, 5}, {6}, {7}, {8}, {9}}, leaf_of_label);
}

}  // namespace pantcx
