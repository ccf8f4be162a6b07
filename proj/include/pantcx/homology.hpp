#pragma once

// Components and integral first homology of a 2-complex.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pantcx/complex.hpp"

namespace pantcx {

using BigInt = boost::multiprecision::cpp_int;

/// Union-find over the 1-skeleton. Returns the component id of each vertex,
/// ids numbered by first vertex.
inline std::vector<int> connected_components(const TwoComplex& c) {
  const int nv = static_cast<int>(c.vertices.size());
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : c.edges) {
    const int a = find(e.src), b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> id(nv, -1), out(nv);
  int next = 0;
  for (int v = 0; v < nv; ++v) {
    const int r = find(v);
    if (id[r] < 0) id[r] = next++;
    out[v] = id[r];
  }
  return out;
}

inline int component_count(const TwoComplex& c) {
  const auto comp = connected_components(c);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

/// Sparse integer matrix as rows of (column -> value).
using SparseMatrix = std::vector<std::map<int, BigInt>>;

/// Cellular boundary of 2-cells: one row per cell, columns are edges. With
/// `fold_involutive`, an edge whose two directions are one move orbit is
/// folded onto a half-edge, recorded as an extra row bounding it once.
inline SparseMatrix boundary2(const TwoComplex& c, bool fold_involutive = true) {
  SparseMatrix m(c.cells.size());
  if (fold_involutive)
    for (std::size_t e = 0; e < c.edges.size(); ++e)
      if (c.edges[e].involutive) m.push_back({{static_cast<int>(e), BigInt(1)}});
  for (std::size_t k = 0; k < c.cells.size(); ++k) {
    for (const auto& s : c.cells[k].boundary) m[k][s.edge] += s.forward ? 1 : -1;
    for (auto it = m[k].begin(); it != m[k].end();) it = it->second == 0 ? m[k].erase(it) : std::next(it);
  }
  return m;
}

namespace detail {

/// Smith normal form diagonal of a dense matrix (nonzero entries only).
inline std::vector<BigInt> dense_invariant_factors(std::vector<std::vector<BigInt>> a) {
  std::vector<BigInt> out;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Smallest nonzero entry in the trailing block.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // Divisibility: fold any entry not divisible by the pivot into row t.
        for (std::size_t i = t + 1; i < rows && clean; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
              clean = false;
              break;
            }
      }
    }
    out.push_back(abs(a[t][t]));
    ++t;
  }
  return out;
}

}  // namespace detail

/// Nonzero invariant factors of an integer matrix. Unit pivots are eliminated
/// sparsely; what remains is reduced densely.
inline std::vector<BigInt> invariant_factors(SparseMatrix rows, int columns) {
  std::vector<BigInt> out;
  // column -> rows containing it
  std::vector<std::vector<int>> col_rows(columns);
  for (int r = 0; r < static_cast<int>(rows.size()); ++r)
    for (auto& [c, v] : rows[r]) col_rows[c].push_back(r);
  std::vector<char> row_dead(rows.size(), 0), col_dead(columns, 0);

  bool progress = true;
  while (progress) {
    progress = false;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (row_dead[r]) continue;
      int pc = -1;
      std::size_t best = 0;
      for (auto& [c, v] : rows[r])
        if (abs(v) == 1 && (pc < 0 || col_rows[c].size() < best)) {
          pc = c;
          best = col_rows[c].size();
        }
      if (pc < 0) continue;
      const BigInt pv = rows[r][pc];
      const auto pivot = rows[r];
      for (int o : col_rows[pc]) {
        if (o == r || row_dead[o]) continue;
        auto it = rows[o].find(pc);
        if (it == rows[o].end()) continue;
        const BigInt f = it->second * pv;  // pv = +-1, so this is value / pv
        for (auto& [c, v] : pivot) {
          auto& slot = rows[o][c];
          const bool fresh = slot == 0;
          slot -= f * v;
          if (slot == 0) rows[o].erase(c);
          else if (fresh) col_rows[c].push_back(o);
        }
      }
      row_dead[r] = 1;
      col_dead[pc] = 1;
      out.push_back(1);
      progress = true;
    }
  }

  std::vector<int> live_rows, live_cols;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r)
    if (!row_dead[r] && !rows[r].empty()) live_rows.push_back(r);
  std::map<int, int> col_index;
  for (int r : live_rows)
    for (auto& [c, v] : rows[r]) col_index.emplace(c, 0);
  int k = 0;
  for (auto& [c, idx] : col_index) idx = k++;
  std::vector<std::vector<BigInt>> dense(live_rows.size(), std::vector<BigInt>(k));
  for (std::size_t i = 0; i < live_rows.size(); ++i)
    for (auto& [c, v] : rows[live_rows[i]]) dense[i][col_index[c]] = v;
  for (auto& f : detail::dense_invariant_factors(std::move(dense))) out.push_back(f);
  std::sort(out.begin(), out.end());
  return out;
}

/// Rank over Z/p, used as an independent cross-check of the integer rank.
inline int rank_mod_p(const SparseMatrix& m, int columns, std::int64_t p = 2147483629) {
  std::vector<std::vector<std::int64_t>> a(m.size(), std::vector<std::int64_t>(columns, 0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto& [c, v] : m[i]) {
      BigInt r = v % p;
      if (r < 0) r += p;
      a[i][c] = static_cast<std::int64_t>(r);
    }
  auto inv = [&](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = static_cast<std::int64_t>((__int128)r * x % p);
      x = static_cast<std::int64_t>((__int128)x * x % p);
      e >>= 1;
    }
    return r;
  };
  int rank = 0;
  for (int c = 0; c < columns && rank < static_cast<int>(a.size()); ++c) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(a.size()); ++i)
      if (a[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    const auto iv = inv(a[rank][c]);
    for (int i = rank + 1; i < static_cast<int>(a.size()); ++i) {
      if (!a[i][c]) continue;
      const auto f = static_cast<std::int64_t>((__int128)a[i][c] * iv % p);
      for (int j = c; j < columns; ++j)
        a[i][j] = static_cast<std::int64_t>(((__int128)a[i][j] - (__int128)f * a[rank][j] % p + p) % p);
    }
    ++rank;
  }
  return rank;
}

struct Homology1 {
  int betti = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1
  int rank_boundary1 = 0;
  int rank_boundary2 = 0;
  int rank_boundary2_mod_p = 0;

  bool trivial() const { return betti == 0 && torsion.empty(); }

  /// "0", or e.g. "Z^2 + Z/2 + Z/6"
  std::string to_string() const {
    std::string s;
    if (betti > 0) s = betti == 1 ? "Z" : "Z^" + std::to_string(betti);
    for (const auto& t : torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + t.str();
    return s.empty() ? "0" : s;
  }
};

inline Homology1 h1(const TwoComplex& c, bool fold_involutive = true) {
  Homology1 h;
  h.rank_boundary1 = static_cast<int>(c.vertices.size()) - component_count(c);
  const auto m = boundary2(c, fold_involutive);
  const int ne = static_cast<int>(c.edges.size());
  const auto factors = invariant_factors(m, ne);
  h.rank_boundary2 = static_cast<int>(factors.size());
  for (const auto& f : factors)
    if (f > 1) h.torsion.push_back(f);
  h.betti = ne - h.rank_boundary1 - h.rank_boundary2;
  h.rank_boundary2_mod_p = rank_mod_p(m, ne);
  return h;
}

}  // namespace pantcx
