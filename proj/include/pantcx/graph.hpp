#pragma once

// Dart-based trivalent graphs with labeled free ends.
//
// A PantGraph is the dual graph of a pant decomposition: trivalent vertices
// are pants, univalent vertices are boundary components labeled 1..n. The
// structure is stored as half-edges ("darts"); an edge is an orbit of the
// mate involution and a vertex is a block of the dart partition. No cyclic
// order is kept at vertices: darts in a block are always sorted by id.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pantcx/errors.hpp"

namespace pantcx {

using Dart = int;

/// Invariants a structurally sound graph may still violate.
enum class Invariant {
  Connectivity,
  Degree,
  LeafLabels,
  Counts,
  Admissible,
};

inline const char* to_string(Invariant inv) {
  switch (inv) {
    case Invariant::Connectivity: return "connectivity";
    case Invariant::Degree: return "degree";
    case Invariant::LeafLabels: return "leaf-labels";
    case Invariant::Counts: return "leaf and vertex counts";
    case Invariant::Admissible: return "admissible";
  }
  return "?";
}

struct GraphCounts {
  int genus = 0;
  int boundary = 0;
  int internal_edges = 0;

  friend bool operator==(const GraphCounts&, const GraphCounts&) = default;
};

class PantGraph {
 public:
  PantGraph() = default;

  /// Throws StructuralError if `mate` is not a fixed-point-free involution,
  /// the blocks do not partition the darts, or the leaf darts are not
  /// distinct darts.
  PantGraph(std::vector<Dart> mate, std::vector<std::vector<Dart>> vertices,
            std::vector<Dart> leaf_darts)
      : mate_(std::move(mate)),
        vertices_(std::move(vertices)),
        leaf_darts_(std::move(leaf_darts)) {
    const int darts = static_cast<int>(mate_.size());
    for (int d = 0; d < darts; ++d) {
      const int m = mate_[d];
      if (m < 0 || m >= darts) throw StructuralError("mate out of range at dart " + std::to_string(d));
      if (m == d) throw StructuralError("pairing has a fixed point at dart " + std::to_string(d));
      if (mate_[m] != d) throw StructuralError("pairing is not an involution at dart " + std::to_string(d));
    }
    vertex_of_.assign(darts, -1);
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      auto& block = vertices_[v];
      if (block.empty()) throw StructuralError("empty vertex block " + std::to_string(v));
      std::sort(block.begin(), block.end());
      for (Dart d : block) {
        if (d < 0 || d >= darts) throw StructuralError("vertex block names unknown dart " + std::to_string(d));
        if (vertex_of_[d] != -1) throw StructuralError("dart " + std::to_string(d) + " lies in two vertices");
        vertex_of_[d] = static_cast<int>(v);
      }
    }
    for (int d = 0; d < darts; ++d)
      if (vertex_of_[d] == -1) throw StructuralError("dart " + std::to_string(d) + " lies in no vertex");
    std::vector<char> seen(darts, 0);
    for (Dart d : leaf_darts_) {
      if (d < 0 || d >= darts) throw StructuralError("leaf dart out of range");
      if (seen[d]) throw StructuralError("leaf dart " + std::to_string(d) + " carries two labels");
      seen[d] = 1;
    }
  }

  int dart_count() const { return static_cast<int>(mate_.size()); }
  int edge_count() const { return dart_count() / 2; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int leaf_count() const { return static_cast<int>(leaf_darts_.size()); }

  Dart mate(Dart d) const { return mate_[d]; }
  int vertex_of(Dart d) const { return vertex_of_[d]; }
  const std::vector<Dart>& mates() const { return mate_; }
  const std::vector<std::vector<Dart>>& vertices() const { return vertices_; }
  const std::vector<Dart>& vertex(int v) const { return vertices_[v]; }
  int degree(int v) const { return static_cast<int>(vertices_[v].size()); }

  /// Dart of the univalent vertex labeled `label` (1-based).
  Dart leaf_dart(int label) const { return leaf_darts_[label - 1]; }
  const std::vector<Dart>& leaf_darts() const { return leaf_darts_; }

  /// Label of the leaf dart `d`, or 0 if `d` is not a leaf dart.
  int leaf_label(Dart d) const {
    for (std::size_t i = 0; i < leaf_darts_.size(); ++i)
      if (leaf_darts_[i] == d) return static_cast<int>(i) + 1;
    return 0;
  }

  /// Edges as (smaller dart, larger dart), sorted; the index is the edge id.
  std::vector<std::pair<Dart, Dart>> edges() const {
    std::vector<std::pair<Dart, Dart>> out;
    for (Dart d = 0; d < dart_count(); ++d)
      if (d < mate_[d]) out.emplace_back(d, mate_[d]);
    return out;
  }

  /// Edge id containing dart `d`.
  int edge_of(Dart d) const {
    const Dart lo = std::min(d, mate_[d]);
    int id = 0;
    for (Dart x = 0; x < lo; ++x)
      if (x < mate_[x]) ++id;
    return id;
  }

  bool is_leaf_vertex(int v) const { return degree(v) == 1; }
  bool is_loop(Dart d) const { return vertex_of_[d] == vertex_of_[mate_[d]]; }

  /// Both endpoints have degree 3.
  bool is_internal(Dart d) const {
    return degree(vertex_of_[d]) == 3 && degree(vertex_of_[mate_[d]]) == 3;
  }

  friend bool operator==(const PantGraph& a, const PantGraph& b) {
    return a.mate_ == b.mate_ && a.vertices_ == b.vertices_ && a.leaf_darts_ == b.leaf_darts_;
  }

 private:
  std::vector<Dart> mate_;
  std::vector<std::vector<Dart>> vertices_;
  std::vector<Dart> leaf_darts_;
  std::vector<int> vertex_of_;
};

inline bool is_connected(const PantGraph& g) {
  const int nv = g.vertex_count();
  if (nv == 0) return true;
  std::vector<char> seen(nv, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (Dart d : g.vertex(v)) {
      const int w = g.vertex_of(g.mate(d));
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == nv;
}

/// Empty iff every invariant holds; one entry per violated invariant.
inline std::vector<Invariant> validate(const PantGraph& g) {
  std::vector<Invariant> out;
  if (!is_connected(g)) out.push_back(Invariant::Connectivity);

  int univalent = 0, trivalent = 0;
  bool bad_degree = false;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int deg = g.degree(v);
    if (deg == 1) ++univalent;
    else if (deg == 3) ++trivalent;
    else bad_degree = true;
  }
  if (bad_degree) out.push_back(Invariant::Degree);

  bool labels_ok = univalent == g.leaf_count();
  for (Dart d : g.leaf_darts())
    if (g.degree(g.vertex_of(d)) != 1) labels_ok = false;
  if (!labels_ok) out.push_back(Invariant::LeafLabels);

  // With n labeled leaves and cycle rank g: E = 3g-3+2n, T = 2g-2+n.
  const int n = g.leaf_count();
  const int rank = g.edge_count() - g.vertex_count() + 1;
  const bool counts_ok = g.edge_count() == 3 * rank - 3 + 2 * n &&
                         trivalent == 2 * rank - 2 + n &&
                         g.vertex_count() == trivalent + n;
  if (!counts_ok) out.push_back(Invariant::Counts);

  if (trivalent == 0) out.push_back(Invariant::Admissible);
  return out;
}

inline GraphCounts counts(const PantGraph& g) {
  const int genus = g.edge_count() - g.vertex_count() + 1;
  const int n = g.leaf_count();
  return {genus, n, 3 * genus - 3 + n};
}

/// (g,n) carries pant decompositions: 2g-2+n >= 1.
inline bool admissible(int genus, int boundary) {
  return genus >= 0 && boundary >= 0 && 2 * genus - 2 + boundary >= 1;
}

inline void require_admissible(int genus, int boundary) {
  if (!admissible(genus, boundary))
    throw DomainError("surface (g=" + std::to_string(genus) + ", n=" + std::to_string(boundary) +
                      ") admits no pant decomposition");
}

/// Builds a graph from trivalent vertex blocks and labeled leaf attachments.
/// `edges` lists dart pairs; leaves are appended as univalent vertices whose
/// darts are the ones named in `leaves` (in label order).
inline PantGraph make_graph(int dart_count, const std::vector<std::pair<Dart, Dart>>& edges,
                            const std::vector<std::vector<Dart>>& blocks,
                            const std::vector<Dart>& leaves) {
  std::vector<Dart> mate(dart_count, -1);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= dart_count || b >= dart_count)
      throw StructuralError("edge names unknown dart");
    if (mate[a] != -1 || mate[b] != -1) throw StructuralError("dart paired twice");
    mate[a] = b;
    mate[b] = a;
  }
  for (Dart d = 0; d < dart_count; ++d)
    if (mate[d] == -1) throw StructuralError("dart " + std::to_string(d) + " is unpaired");
  return PantGraph(std::move(mate), blocks, leaves);
}

/// Relabels darts by `perm` (old dart -> new dart). Vertex and leaf order
/// are preserved; blocks are re-sorted.
inline PantGraph relabel_darts(const PantGraph& g, const std::vector<Dart>& perm) {
  std::vector<Dart> mate(g.dart_count());
  for (Dart d = 0; d < g.dart_count(); ++d) mate[perm[d]] = perm[g.mate(d)];
  std::vector<std::vector<Dart>> blocks = g.vertices();
  for (auto& b : blocks)
    for (auto& d : b) d = perm[d];
  std::vector<Dart> leaves = g.leaf_darts();
  for (auto& d : leaves) d = perm[d];
  return PantGraph(std::move(mate), std::move(blocks), std::move(leaves));
}

/// Renumbers darts so edge k is (2k, 2k+1), trivalent blocks come first in
/// their current order, and leaves follow in label order. The result is
/// equal (as a value) for graphs that differ only by dart names and block
/// order when the traversal order agrees; it is a tidy form, not a canonical one.
inline PantGraph compact(const PantGraph& g) {
  std::vector<Dart> perm(g.dart_count(), -1);
  Dart next = 0;
  auto visit = [&](Dart d) {
    if (perm[d] != -1) return;
    perm[d] = next++;
    perm[g.mate(d)] = next++;
  };
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) != 1)
      for (Dart d : g.vertex(v)) visit(d);
  for (Dart d : g.leaf_darts()) visit(d);
  for (Dart d = 0; d < g.dart_count(); ++d) visit(d);

  std::vector<Dart> mate(g.dart_count());
  for (Dart d = 0; d < g.dart_count(); ++d) mate[perm[d]] = perm[g.mate(d)];
  std::vector<std::vector<Dart>> blocks;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) != 1) {
      std::vector<Dart> b;
      for (Dart d : g.vertex(v)) b.push_back(perm[d]);
      blocks.push_back(std::move(b));
    }
  std::vector<Dart> leaves;
  for (Dart d : g.leaf_darts()) {
    leaves.push_back(perm[d]);
    blocks.push_back({perm[d]});
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 1 && g.leaf_label(g.vertex(v)[0]) == 0) blocks.push_back({perm[g.vertex(v)[0]]});
  return PantGraph(std::move(mate), std::move(blocks), std::move(leaves));
}

// ---------------------------------------------------------------------------
// Text format
//
//   pantgraph g=<g> n=<n>
//   edges: d0-d1, d2-d3, ...
//   vertices: [d,d,d] [d] ...
//   leaves: label:dart, ...

inline std::string serialize(const PantGraph& g) {
  std::ostringstream os;
  const auto c = counts(g);
  os << "pantgraph g=" << c.genus << " n=" << c.boundary << "\n";
  os << "edges:";
  bool first = true;
  for (auto [a, b] : g.edges()) {
    os << (first ? " " : ", ") << a << "-" << b;
    first = false;
  }
  os << "\nvertices:";
  for (const auto& block : g.vertices()) {
    os << " [";
    for (std::size_t i = 0; i < block.size(); ++i) os << (i ? "," : "") << block[i];
    os << "]";
  }
  os << "\nleaves:";
  for (int label = 1; label <= g.leaf_count(); ++label)
    os << (label > 1 ? ", " : " ") << label << ":" << g.leaf_dart(label);
  os << "\n";
  return os.str();
}

namespace detail {

class LineCursor {
 public:
  LineCursor(const std::string& text, int line) : s_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void expect_word(const std::string& w) {
    skip_ws();
    if (s_.compare(pos_, w.size(), w) != 0) fail("expected '" + w + "'");
    pos_ += w.size();
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start]))))
      fail("expected integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  std::string token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
    if (start == pos_) fail("expected token");
    return s_.substr(start, pos_ - start);
  }
  std::string rest() {
    skip_ws();
    auto r = s_.substr(pos_);
    pos_ = s_.size();
    return r;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, static_cast<int>(pos_) + 1);
  }
  int line() const { return line_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

/// Parses the four-line record starting at `lines[first]` (1-based line
/// numbers in errors are `first + 1 + offset`).
inline PantGraph parse_graph_lines(const std::vector<std::string>& lines, std::size_t first) {
  if (first + 4 > lines.size())
    throw ParseError("truncated pantgraph record", static_cast<int>(lines.size()) + 1, 1);
  const int base = static_cast<int>(first) + 1;

  detail::LineCursor head(lines[first], base);
  head.expect_word("pantgraph");
  head.expect_word("g=");
  const long long genus = head.integer();
  head.expect_word("n=");
  const long long boundary = head.integer();
  if (!head.at_end()) head.fail("trailing text");

  detail::LineCursor ec(lines[first + 1], base + 1);
  ec.expect_word("edges:");
  std::vector<std::pair<Dart, Dart>> edges;
  int max_dart = -1;
  while (!ec.at_end()) {
    if (!edges.empty()) ec.expect(',');
    const auto a = static_cast<Dart>(ec.integer());
    ec.expect('-');
    const auto b = static_cast<Dart>(ec.integer());
    if (a < 0 || b < 0) ec.fail("negative dart");
    edges.emplace_back(a, b);
    max_dart = std::max({max_dart, a, b});
  }

  detail::LineCursor vc(lines[first + 2], base + 2);
  vc.expect_word("vertices:");
  std::vector<std::vector<Dart>> blocks;
  while (!vc.at_end()) {
    vc.expect('[');
    std::vector<Dart> block;
    while (!vc.peek(']')) {
      if (!block.empty()) vc.expect(',');
      block.push_back(static_cast<Dart>(vc.integer()));
    }
    vc.expect(']');
    blocks.push_back(std::move(block));
  }

  detail::LineCursor lc(lines[first + 3], base + 3);
  lc.expect_word("leaves:");
  std::vector<std::pair<int, Dart>> labeled;
  while (!lc.at_end()) {
    if (!labeled.empty()) lc.expect(',');
    const auto label = static_cast<int>(lc.integer());
    lc.expect(':');
    labeled.emplace_back(label, static_cast<Dart>(lc.integer()));
  }
  std::sort(labeled.begin(), labeled.end());
  std::vector<Dart> leaves;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (labeled[i].first != static_cast<int>(i) + 1)
      lc.fail("leaf labels must be exactly 1..n");
    leaves.push_back(labeled[i].second);
  }

  PantGraph g;
  try {
    g = make_graph(max_dart + 1, edges, blocks, leaves);
  } catch (const StructuralError& e) {
    throw ParseError(e.what(), base, 1);
  }
  const auto c = counts(g);
  if (c.genus != genus || c.boundary != boundary)
    head.fail("header g/n disagree with the graph (g=" + std::to_string(c.genus) + " n=" +
              std::to_string(c.boundary) + ")");
  return g;
}

inline PantGraph parse_graph(const std::string& text) {
  auto lines = detail::split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && lines[first].find_first_not_of(" \t") == std::string::npos) ++first;
  return parse_graph_lines(lines, first);
}

}  // namespace pantcx
