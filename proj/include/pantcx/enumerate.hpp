#pragma once

// Enumeration of V(S_{g,n}): one representative per isomorphism class.
//
// Graphs are grown from the two single-vertex cases. For n >= 1 every graph
// is obtained from a (g, n-1) graph by inserting free end n on some edge;
// closed graphs of genus g are obtained from (g-1, 2) graphs by joining the
// two free ends. Duplicates are removed by canonical key.

#include <algorithm>
#include <map>
#include <vector>

#include "pantcx/canon.hpp"
#include "pantcx/graph.hpp"
#include "pantcx/parallel.hpp"
#include "pantcx/surgery.hpp"

namespace pantcx {

struct KeyedGraph {
  CanonicalKey key;
  PantGraph graph;
};

namespace detail {

inline std::vector<KeyedGraph> dedupe(const std::vector<PantGraph>& candidates, int threads) {
  std::vector<CanonicalKey> keys(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) { keys[i] = canonical_key(candidates[i]); });
  std::map<CanonicalKey, PantGraph> unique;
  for (std::size_t i = 0; i < candidates.size(); ++i) unique.try_emplace(keys[i], candidates[i]);
  std::vector<KeyedGraph> out;
  out.reserve(unique.size());
  for (auto& [k, g] : unique) out.push_back({k, compact(g)});
  return out;
}

}  // namespace detail

/// Representatives sorted by canonical key.
inline std::vector<KeyedGraph> enumerate_keyed(int genus, int boundary, int threads = 1) {
  require_admissible(genus, boundary);
  std::vector<PantGraph> candidates;
  if (genus == 0 && boundary == 3) {
    candidates.push_back(tripod());
  } else if (genus == 1 && boundary == 1) {
    candidates.push_back(loop_leaf());
  } else if (boundary >= 1 && admissible(genus, boundary - 1)) {
    for (const auto& kg : enumerate_keyed(genus, boundary - 1, threads))
      for (int e = 0; e < kg.graph.edge_count(); ++e) candidates.push_back(insert_leaf(kg.graph, e));
  } else if (boundary == 0) {
    for (const auto& kg : enumerate_keyed(genus - 1, 2, threads)) candidates.push_back(join_free_ends(kg.graph));
  } else {
    throw DomainError("no construction route for this surface type");
  }
  return detail::dedupe(candidates, threads);
}

inline std::vector<PantGraph> enumerate_graphs(int genus, int boundary, int threads = 1) {
  std::vector<PantGraph> out;
  for (auto& kg : enumerate_keyed(genus, boundary, threads)) out.push_back(std::move(kg.graph));
  return out;
}

}  // namespace pantcx
