#pragma once

// Fundamental group presentations, coset enumeration and bounded fillings.
//
// Words are vectors of nonzero ints: +k is generator k (1-based), -k its
// inverse.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pantcx/complex.hpp"
#include "pantcx/errors.hpp"
#include "pantcx/homology.hpp"

namespace pantcx {

using Word = std::vector<int>;

inline Word free_reduce(const Word& w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x) out.pop_back();
    else out.push_back(x);
  }
  return out;
}

inline Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t a = 0, b = r.size();
  while (b - a >= 2 && r[a] == -r[b - 1]) {
    ++a;
    --b;
  }
  return Word(r.begin() + a, r.begin() + b);
}

inline Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

/// Least rotation of w or w^-1.
inline Word canonical_relator(const Word& w) {
  if (w.empty()) return w;
  const Word inv = inverse(w);
  Word best = w;
  for (const Word* v : std::array<const Word*, 2>{&w, &inv})
    for (std::size_t r = 0; r < v->size(); ++r) {
      Word rot(v->begin() + r, v->end());
      rot.insert(rot.end(), v->begin(), v->begin() + r);
      if (rot < best) best = std::move(rot);
    }
  return best;
}

struct GroupPresentation {
  int generators = 0;
  std::vector<Word> relators;
  friend bool operator==(const GroupPresentation&, const GroupPresentation&) = default;
};

/// Presentation of pi_1 at a basepoint, with the edge -> generator dictionary.
struct Pi1 {
  GroupPresentation presentation;
  int basepoint = 0;
  std::vector<int> edge_generator;  // 0 for tree edges and edges outside the component
  std::vector<char> tree_edge;
  std::vector<int> parent_edge;     // BFS tree: edge to parent, -1 at root/unreached
  std::vector<int> depth;           // -1 when unreached

  /// Generator word of an edge path.
  Word word_of(const std::vector<Step>& path) const {
    Word w;
    for (const auto& s : path)
      if (int g = edge_generator[s.edge]) w.push_back(s.forward ? g : -g);
    return free_reduce(w);
  }
};

/// Spanning-tree presentation. Involutive loops are folded (relator g)
/// unless `fold_involutive` is false.
inline Pi1 pi1_presentation(const TwoComplex& c, int basepoint = 0, bool fold_involutive = true) {
  const int nv = static_cast<int>(c.vertices.size());
  const int ne = static_cast<int>(c.edges.size());
  if (nv > 0 && (basepoint < 0 || basepoint >= nv)) throw DomainError("basepoint is not a vertex");
  Pi1 out;
  out.basepoint = basepoint;
  out.edge_generator.assign(ne, 0);
  out.tree_edge.assign(ne, 0);
  out.parent_edge.assign(nv, -1);
  out.depth.assign(nv, -1);
  if (nv == 0) return out;

  std::vector<std::vector<int>> incident(nv);
  for (int e = 0; e < ne; ++e) {
    incident[c.edges[e].src].push_back(e);
    if (c.edges[e].dst != c.edges[e].src) incident[c.edges[e].dst].push_back(e);
  }
  std::deque<int> queue{basepoint};
  out.depth[basepoint] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int e : incident[v]) {
      const int w = c.edges[e].src == v ? c.edges[e].dst : c.edges[e].src;
      if (out.depth[w] >= 0) continue;
      out.depth[w] = out.depth[v] + 1;
      out.parent_edge[w] = e;
      out.tree_edge[e] = 1;
      queue.push_back(w);
    }
  }
  int k = 0;
  for (int e = 0; e < ne; ++e)
    if (!out.tree_edge[e] && out.depth[c.edges[e].src] >= 0) out.edge_generator[e] = ++k;
  out.presentation.generators = k;
  std::set<Word> seen;
  if (fold_involutive)
    for (int e = 0; e < ne; ++e)
      if (c.edges[e].involutive && out.edge_generator[e]) {
        out.presentation.relators.push_back({out.edge_generator[e]});
        seen.insert({out.edge_generator[e]});
      }
  for (const auto& cell : c.cells) {
    if (cell.boundary.empty() || out.depth[c.tail(cell.boundary.front())] < 0) continue;
    Word w = cyclic_reduce(out.word_of(cell.boundary));
    if (w.empty()) continue;
    if (seen.insert(canonical_relator(w)).second) out.presentation.relators.push_back(std::move(w));
  }
  return out;
}

/// Tietze elimination of generators that occur exactly once in some relator.
/// Returns the simplified presentation; stops when words would exceed
/// `max_total_length` letters.
inline GroupPresentation simplify(const GroupPresentation& p, std::size_t max_total_length = 2000000) {
  std::vector<Word> rels;
  std::set<Word> seen;
  for (const auto& r : p.relators) {
    Word w = cyclic_reduce(r);
    if (!w.empty() && seen.insert(canonical_relator(w)).second) rels.push_back(std::move(w));
  }
  std::vector<char> alive(p.generators + 1, 1);
  alive[0] = 0;
  while (true) {
    // Shortest relator with a generator occurring once.
    int best_r = -1, best_g = 0;
    for (int r = 0; r < static_cast<int>(rels.size()); ++r) {
      if (best_r >= 0 && rels[r].size() >= rels[best_r].size()) continue;
      std::map<int, int> count;
      for (int x : rels[r]) ++count[std::abs(x)];
      for (auto& [g, n] : count)
        if (n == 1) {
          best_r = r;
          best_g = g;
          break;
        }
    }
    if (best_r < 0) break;
    Word r = rels[best_r];
    const auto pos = std::find_if(r.begin(), r.end(), [&](int x) { return std::abs(x) == best_g; });
    std::rotate(r.begin(), pos, r.end());
    // r = x^e w, so x = w^-1 (e = +1) or x = w (e = -1).
    const Word w(r.begin() + 1, r.end());
    const Word value = r[0] > 0 ? inverse(w) : w;
    const Word value_inv = inverse(value);
    std::vector<Word> next;
    std::size_t total = 0;
    seen.clear();
    for (int k = 0; k < static_cast<int>(rels.size()); ++k) {
      if (k == best_r) continue;
      Word sub;
      for (int x : rels[k]) {
        if (x == best_g) sub.insert(sub.end(), value.begin(), value.end());
        else if (x == -best_g) sub.insert(sub.end(), value_inv.begin(), value_inv.end());
        else sub.push_back(x);
      }
      sub = cyclic_reduce(sub);
      total += sub.size();
      if (!sub.empty() && seen.insert(canonical_relator(sub)).second) next.push_back(std::move(sub));
    }
    if (total > max_total_length) break;
    rels = std::move(next);
    alive[best_g] = 0;
  }
  std::vector<int> renum(p.generators + 1, 0);
  int k = 0;
  for (int g = 1; g <= p.generators; ++g)
    if (alive[g]) renum[g] = ++k;
  GroupPresentation out;
  out.generators = k;
  for (auto& r : rels) {
    for (int& x : r) x = x > 0 ? renum[x] : -renum[-x];
    out.relators.push_back(r);
  }
  std::sort(out.relators.begin(), out.relators.end(),
            [](const Word& a, const Word& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return out;
}

struct CosetResult {
  bool complete = false;
  std::int64_t index = 0;          // number of cosets of the trivial subgroup = |G|
  std::int64_t cosets_defined = 0;
  std::int64_t limit = 0;
};

/// Todd-Coxeter (HLT with lookahead) for the trivial subgroup.
inline CosetResult enumerate_cosets(const GroupPresentation& p, std::int64_t max_cosets = 1000000) {
  CosetResult res;
  const int cols = 2 * p.generators;
  // Keep the table below ~2^28 entries.
  const std::int64_t table_cap = cols ? (std::int64_t{1} << 28) / cols : max_cosets;
  res.limit = max_cosets;
  if (cols == 0) {
    res.complete = true;
    res.index = 1;
    res.cosets_defined = 1;
    return res;
  }
  std::vector<std::vector<int>> rels;
  for (const auto& r : p.relators) {
    std::vector<int> cr;
    for (int x : r) cr.push_back(x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1);
    if (!cr.empty()) rels.push_back(std::move(cr));
  }
  std::vector<std::int32_t> table(static_cast<std::size_t>(cols), -1);
  std::vector<std::int32_t> parent{0};
  std::int64_t live = 1;
  res.cosets_defined = 1;

  auto at = [&](std::int64_t c, int x) -> std::int32_t& { return table[static_cast<std::size_t>(c) * cols + x]; };
  auto rep = [&](std::int32_t c) {
    std::int32_t r = c;
    while (parent[r] != r) r = parent[r];
    while (parent[c] != r) {
      const auto n = parent[c];
      parent[c] = r;
      c = n;
    }
    return r;
  };
  std::vector<std::int32_t> queue;
  auto merge = [&](std::int32_t a, std::int32_t b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    --live;
    queue.push_back(b);
  };
  auto coincidence = [&](std::int32_t a, std::int32_t b) {
    queue.clear();
    merge(a, b);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const auto e = queue[i];
      for (int x = 0; x < cols; ++x) {
        const auto f = at(e, x);
        if (f < 0) continue;
        at(f, x ^ 1) = -1;
        const auto e1 = rep(e), f1 = rep(f);
        if (at(e1, x) >= 0) merge(f1, at(e1, x));
        else if (at(f1, x ^ 1) >= 0) merge(e1, at(f1, x ^ 1));
        else {
          at(e1, x) = f1;
          at(f1, x ^ 1) = e1;
        }
      }
    }
  };
  auto define = [&](std::int32_t c, int x) -> bool {
    const auto n = static_cast<std::int64_t>(parent.size());
    if (live >= res.limit || n >= table_cap) return false;
    parent.push_back(static_cast<std::int32_t>(n));
    table.resize(table.size() + cols, -1);
    at(n, x ^ 1) = c;
    at(c, x) = static_cast<std::int32_t>(n);
    ++live;
    ++res.cosets_defined;
    return true;
  };
  // Returns false when a definition was needed but refused.
  auto scan = [&](std::int32_t c, const std::vector<int>& w, bool may_define) -> bool {
    while (true) {
      if (parent[c] != c) return true;
      std::int32_t f = c, b = c;
      int i = 0, j = static_cast<int>(w.size()) - 1;
      while (i <= j && at(f, w[i]) >= 0) f = at(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j >= i && at(b, w[j] ^ 1) >= 0) b = at(b, w[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return true;
      }
      if (i == j) {
        at(f, w[i]) = b;
        at(b, w[i] ^ 1) = f;
        return true;
      }
      if (!may_define || !define(f, w[i])) return false;
    }
  };
  auto lookahead = [&]() {
    for (std::int32_t c = 0; c < static_cast<std::int32_t>(parent.size()); ++c)
      for (const auto& r : rels) {
        if (parent[c] != c) break;
        scan(c, r, false);
      }
  };

  for (std::int32_t c = 0; c < static_cast<std::int32_t>(parent.size()); ++c) {
    for (const auto& r : rels) {
      if (parent[c] != c) break;
      while (!scan(c, r, true)) {
        const auto before = live;
        lookahead();
        // Dead cosets are not reclaimed, so the allocation cap is final.
        if (live == before || static_cast<std::int64_t>(parent.size()) >= table_cap) return res;
      }
    }
    if (parent[c] != c) continue;
    for (int x = 0; x < cols; ++x)
      if (at(c, x) < 0 && !define(c, x)) {
        lookahead();
        if (parent[c] != c) break;
        if (at(c, x) < 0) return res;
      }
  }
  res.complete = true;
  res.index = live;
  return res;
}

// ---------------------------------------------------------------------------

enum class VerdictKind { Trivial, H1, Nontrivial, Disconnected, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::int64_t cosets = 0;
  std::int64_t order = 0;
  int components = 1;
  std::int64_t limit = 0;
  Homology1 homology;
  int generators = 0;
  int relators = 0;
  int simplified_generators = 0;
  bool tietze = false;  // the Tietze fallback was used

  std::string line() const {
    switch (kind) {
      case VerdictKind::Trivial: return "TRIVIAL cosets=" + std::to_string(cosets);
      case VerdictKind::H1: return "H1 " + homology.to_string();
      case VerdictKind::Nontrivial: return "NONTRIVIAL order=" + std::to_string(order);
      case VerdictKind::Disconnected: return "DISCONNECTED components=" + std::to_string(components);
      case VerdictKind::Unknown: return "UNKNOWN " + std::to_string(limit);
    }
    return "UNKNOWN 0";
  }
  bool refuted() const {
    return kind == VerdictKind::H1 || kind == VerdictKind::Nontrivial || kind == VerdictKind::Disconnected;
  }
};

/// Proves or refutes triviality of a presented group. Coset enumeration runs
/// on the presentation as given; if it hits the cap it is retried once on a
/// Tietze-reduced presentation.
inline Verdict prove_trivial(const GroupPresentation& p, std::int64_t max_cosets = 1000000) {
  Verdict v;
  v.generators = p.generators;
  v.relators = static_cast<int>(p.relators.size());
  v.simplified_generators = p.generators;
  GroupPresentation reduced{p.generators, {}};
  for (const auto& r : p.relators)
    if (auto w = free_reduce(r); !w.empty()) reduced.relators.push_back(std::move(w));
  auto r = enumerate_cosets(reduced, max_cosets);
  if (!r.complete) {
    const auto s = simplify(reduced);
    v.simplified_generators = s.generators;
    v.tietze = true;
    r = enumerate_cosets(s, max_cosets);
  }
  v.limit = r.limit;
  if (!r.complete) {
    v.kind = VerdictKind::Unknown;
    return v;
  }
  v.cosets = r.cosets_defined;
  if (r.index == 1) v.kind = VerdictKind::Trivial;
  else {
    v.kind = VerdictKind::Nontrivial;
    v.order = r.index;
  }
  return v;
}

/// Connectivity, then H1, then coset enumeration.
inline Verdict check_simply_connected(const TwoComplex& c, std::int64_t max_cosets = 1000000,
                                      bool fold_involutive = true) {
  Verdict v;
  v.components = component_count(c);
  if (v.components != 1) {
    v.kind = VerdictKind::Disconnected;
    return v;
  }
  const auto h = h1(c, fold_involutive);
  const auto pi = pi1_presentation(c, 0, fold_involutive);
  auto out = prove_trivial(pi.presentation, max_cosets);
  out.homology = h;
  out.components = 1;
  if (!h.trivial()) out.kind = VerdictKind::H1;
  return out;
}

// ---------------------------------------------------------------------------
// Bounded filling search: w is shown null-homotopic by rewriting it to the
// empty word, each step replacing a piece of a cyclic relator by the inverse
// of its complement. Area is the number of relator applications.

struct Filling {
  bool found = false;
  int area = 0;
  std::int64_t nodes = 0;
};

inline Filling find_filling(const GroupPresentation& p, const Word& w, int max_area = 64,
                            std::int64_t max_nodes = 200000) {
  Filling out;
  // All cyclic rotations of relators and their inverses.
  std::vector<Word> rots;
  for (const auto& r : p.relators)
    for (const Word& v : {r, inverse(r)})
      for (std::size_t k = 0; k < v.size(); ++k) {
        Word rot(v.begin() + k, v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + k);
        rots.push_back(std::move(rot));
      }
  std::sort(rots.begin(), rots.end());
  rots.erase(std::unique(rots.begin(), rots.end()), rots.end());
  std::map<int, std::vector<const Word*>> by_first;
  for (const auto& r : rots) by_first[r[0]].push_back(&r);

  using Node = std::tuple<std::size_t, int, Word>;  // length, area, word
  std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
  std::map<Word, int> best;
  const Word start = cyclic_reduce(w);
  open.emplace(start.size(), 0, start);
  best[start] = 0;
  const std::size_t slack = 4;
  while (!open.empty() && out.nodes < max_nodes) {
    auto [len, area, cur] = open.top();
    open.pop();
    if (best[cur] < area) continue;
    ++out.nodes;
    if (cur.empty()) {
      out.found = true;
      out.area = area;
      return out;
    }
    if (area >= max_area) continue;
    const std::size_t n = cur.size();
    for (std::size_t s = 0; s < n; ++s) {
      const auto it = by_first.find(cur[s]);
      if (it == by_first.end()) continue;
      for (const Word* rp : it->second) {
        const Word& r = *rp;
        // Replace the longest prefix of r read at s by the inverse of the rest.
        std::size_t m = 0;
        while (m < r.size() && m < n && cur[(s + m) % n] == r[m]) ++m;
        Word next;
        for (std::size_t k = s + m; k < s + n; ++k) next.push_back(cur[k % n]);
        for (std::size_t k = r.size(); k > m; --k) next.push_back(-r[k - 1]);
        next = cyclic_reduce(next);
        if (next.size() > start.size() + slack && next.size() >= n) continue;
        auto found = best.find(next);
        if (found != best.end() && found->second <= area + 1) continue;
        best[next] = area + 1;
        open.emplace(next.size(), area + 1, std::move(next));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presentation text format: "gens <k>" then one relator per line as signed
// generator indices separated by spaces.

inline std::string serialize(const GroupPresentation& p) {
  std::ostringstream os;
  os << "gens " << p.generators << "\n";
  for (const auto& r : p.relators) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << r[i];
    os << "\n";
  }
  return os.str();
}

inline GroupPresentation parse_presentation(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError("empty presentation", 1, 1);
  GroupPresentation p;
  detail::LineCursor head(lines[0], 1);
  head.expect_word("gens");
  const auto k = head.integer();
  if (k < 0) head.fail("negative generator count");
  if (!head.at_end()) head.fail("trailing text");
  p.generators = static_cast<int>(k);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    detail::LineCursor cur(lines[i], static_cast<int>(i) + 1);
    if (cur.at_end()) continue;
    Word w;
    while (!cur.at_end()) {
      const auto x = cur.integer();
      if (x == 0 || std::abs(x) > k) cur.fail("generator index out of range");
      w.push_back(static_cast<int>(x));
    }
    p.relators.push_back(std::move(w));
  }
  return p;
}

}  // namespace pantcx
