#include <functional>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pantcx/pantcx.hpp"

using namespace pantcx;

namespace {

struct Census {
  int g, n;
  bool decorated;
  std::size_t v, e;
  std::map<CellKind, int> cells;
  long long chi;
};

const std::vector<Census> kCensus = {
    {0, 4, false, 3, 3, {{CellKind::Triangle, 1}}, 1},
    {0, 5, false, 15, 30, {{CellKind::Triangle, 10}, {CellKind::Pentagon, 12}}, 7},
    {0, 6, false, 105, 315, {{CellKind::Triangle, 105}, {CellKind::DCSquare, 90}, {CellKind::Pentagon, 180}}, 165},
    {1, 1, false, 1, 0, {}, 1},
    {1, 2, false, 2, 2, {{CellKind::Bigon, 1}, {CellKind::Triangle, 1}}, 2},
    {1, 3, false, 7, 15, {{CellKind::Bigon, 6}, {CellKind::Triangle, 7}, {CellKind::Pentagon, 9}}, 14},
    {2, 0, false, 2, 2, {{CellKind::Bigon, 1}, {CellKind::Triangle, 1}}, 2},
    {2, 1, false, 3, 5, {{CellKind::Bigon, 3}, {CellKind::Triangle, 3}, {CellKind::Pentagon, 3}}, 7},
    {0, 4, true, 3, 3, {{CellKind::Triangle, 1}}, 1},
    {0, 5, true, 30, 75, {{CellKind::Triangle, 20}, {CellKind::Pentagon, 120}, {CellKind::MixedSquare, 30}}, 125},
    {1, 2, true, 3, 6, {{CellKind::Bigon, 2}, {CellKind::Triangle, 2}, {CellKind::MixedSquare, 3}}, 4},
};

TwoComplex build(int g, int n, bool decorated, const BuildOptions& opt = {}) {
  return decorated ? build_s_decorated(g, n, opt) : build_s(g, n, opt);
}

// Cyclically reduced closed walks of length <= max_len, up to rotation and
// inversion, found by walking the 1-skeleton directly.
std::set<std::vector<Step>> reduced_loops(const TwoComplex& c, std::size_t max_len) {
  std::set<std::vector<Step>> out;
  std::vector<Step> word;
  std::function<void(int, int)> walk = [&](int start, int at) {
    if (!word.empty() && at == start) {
      const auto& f = word.front();
      const auto& l = word.back();
      const bool backtrack = f.edge == l.edge && f.forward != l.forward;
      if (!backtrack) out.insert(canonical_loop(word));
    }
    if (word.size() == max_len) return;
    for (int e = 0; e < static_cast<int>(c.edges.size()); ++e)
      for (bool fw : {true, false}) {
        const Step s{e, fw};
        if (c.tail(s) != at) continue;
        if (!word.empty() && word.back().edge == e && word.back().forward != fw) continue;
        word.push_back(s);
        walk(start, c.head(s));
        word.pop_back();
      }
  };
  for (int v = 0; v < static_cast<int>(c.vertices.size()); ++v) walk(v, v);
  return out;
}

}  // namespace

TEST(Complex, Census) {
  for (const auto& want : kCensus) {
    const auto c = build(want.g, want.n, want.decorated);
    SCOPED_TRACE(census_line(c));
    EXPECT_EQ(c.vertices.size(), want.v);
    EXPECT_EQ(c.edges.size(), want.e);
    for (CellKind k : kAllCellKinds) {
      auto it = want.cells.find(k);
      EXPECT_EQ(c.census().at(k), it == want.cells.end() ? 0 : it->second) << to_string(k);
    }
    EXPECT_EQ(euler_characteristic(c),
              static_cast<long long>(c.vertices.size()) - static_cast<long long>(c.edges.size()) +
                  static_cast<long long>(c.cells.size()));
    EXPECT_EQ(euler_characteristic(c), want.chi);
  }
}

TEST(Complex, VerticesAreTheEnumeratedClasses) {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 3}, {2, 1}}) {
    const auto c = build_s(g, n);
    std::set<std::vector<int>> forms;
    for (const auto& v : c.vertices) forms.insert(oracle::form_of(v.graph));
    EXPECT_EQ(forms, oracle::enumerate_forms(g, n));
    EXPECT_EQ(forms.size(), c.vertices.size());
  }
}

TEST(Complex, DecoratedVerticesAreOrderingOrbits) {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 2}, {2, 0}}) {
    const auto c = build_s_decorated(g, n);
    std::size_t expected = 0;
    for (const auto& gr : enumerate_graphs(g, n)) {
      // Orbits of orderings under the graph's automorphisms, counted by brute force.
      const auto d = decorate(gr);
      std::vector<int> perm(d.internal_count());
      std::iota(perm.begin(), perm.end(), 1);
      std::set<std::vector<int>> orbits;
      const auto auts = automorphisms(gr);
      do {
        std::vector<int> pos = d.position;
        int k = 0;
        for (auto& p : pos)
          if (p > 0) p = perm[k++];
        std::vector<int> best;
        for (const auto& f : auts) {
          std::vector<int> img(pos.size());
          for (int e = 0; e < gr.edge_count(); ++e) img[gr.edge_of(f[gr.edges()[e].first])] = pos[e];
          if (best.empty() || img < best) best = img;
        }
        orbits.insert(best);
      } while (std::next_permutation(perm.begin(), perm.end()));
      expected += orbits.size();
    }
    EXPECT_EQ(c.vertices.size(), expected) << "g=" << g << " n=" << n;
  }
}

TEST(Complex, EdgeWitnessesLandOnTheirHeads) {
  for (const auto& want : kCensus) {
    const auto c = build(want.g, want.n, want.decorated);
    for (const auto& e : c.edges) {
      const auto& src = c.vertices[e.src];
      detail::State s{src.graph, src.position};
      const auto out = detail::apply_instance(s, detail::from_move_spec(s, e.witness));
      EXPECT_EQ(canonical_key(out.graph, detail::colors_of(out)), c.vertices[e.dst].key);
      EXPECT_EQ(e.kind == EdgeKind::Tau, std::holds_alternative<TauMove>(e.witness));
      if (e.involutive) EXPECT_EQ(e.src, e.dst);
    }
  }
}

TEST(Complex, CellsAreCertifiedAndDistinct) {
  for (const auto& want : kCensus) {
    const auto c = build(want.g, want.n, want.decorated);
    std::set<std::vector<Step>> loops;
    for (const auto& cell : c.cells) {
      EXPECT_TRUE(certify_cell(c, cell)) << to_string(cell.kind);
      EXPECT_TRUE(is_closed_walk(c, cell.boundary));
      EXPECT_TRUE(loops.insert(canonical_loop(cell.boundary)).second);
    }
  }
}

TEST(Complex, CellReplayVisitsTheBoundary) {
  // Replaying the witness moves passes through the boundary's vertices in order.
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {0, 6}, {1, 3}, {2, 1}}) {
    const auto c = build_s(g, n);
    for (const auto& cell : c.cells) {
      ASSERT_EQ(cell.witness.moves.size(), cell.boundary.size());
      const auto& v = c.vertices[cell.witness.vertex];
      detail::State cur{v.graph, v.position};
      for (std::size_t i = 0; i < cell.boundary.size(); ++i) {
        cur = detail::apply_instance(cur, detail::from_move_spec(cur, cell.witness.moves[i]));
        EXPECT_EQ(canonical_key(cur.graph), c.vertices[c.head(cell.boundary[i])].key);
      }
    }
  }
}

TEST(Complex, FourLeafLoopsOracle) {
  const auto c = build_s(0, 4);
  // The 1-skeleton is the triangle on the three couplings.
  std::set<std::vector<int>> forms;
  for (const auto& v : c.vertices) forms.insert(oracle::form_of(v.graph));
  EXPECT_EQ(forms, (std::set<std::vector<int>>{oracle::form_of(four_leaf(1, 2, 3, 4)),
                                               oracle::form_of(four_leaf(1, 3, 2, 4)),
                                               oracle::form_of(four_leaf(1, 4, 2, 3))}));
  const auto loops = reduced_loops(c, 5);
  ASSERT_EQ(c.cells.size(), 1u);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(*loops.begin(), canonical_loop(c.cells[0].boundary));
}

TEST(Complex, SerializationRoundTrip) {
  for (const auto& want : kCensus) {
    const auto c = build(want.g, want.n, want.decorated);
    const auto text = serialize(c);
    const auto back = deserialize_complex(text);
    EXPECT_EQ(back, c) << "g=" << want.g << " n=" << want.n;
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Complex, ParseErrors) {
  const auto text = serialize(build_s(0, 4));
  EXPECT_THROW(deserialize_complex("complex type=X g=0 n=4\n"), ParseError);
  EXPECT_THROW(deserialize_complex(text.substr(0, text.size() / 2)), ParseError);
  auto broken = text;
  broken.replace(broken.find("edges 3"), 7, "edges 4");
  EXPECT_THROW(deserialize_complex(broken), ParseError);
}

TEST(Complex, DotHasOneLinePerVertexAndEdge) {
  const auto c = build_s(1, 3);
  const auto dot = export_dot(c);
  std::size_t nodes = 0, edges = 0;
  for (const auto& line : detail::split_lines(dot)) {
    if (line.find(" -- ") != std::string::npos) ++edges;
    else if (line.find("[label=") != std::string::npos) ++nodes;
  }
  EXPECT_EQ(nodes, c.vertices.size());
  EXPECT_EQ(edges, c.edges.size());
}

TEST(Complex, ThreadCountDoesNotChangeOutput) {
  BuildOptions one, many;
  many.threads = 8;
  EXPECT_EQ(serialize(build_s(0, 6, one)), serialize(build_s(0, 6, many)));
  EXPECT_EQ(serialize(build_s_decorated(1, 2, one)), serialize(build_s_decorated(1, 2, many)));
}

TEST(Complex, SinglePerPairRule) {
  BuildOptions opt;
  opt.edge_rule = EdgeRule::SinglePerPair;
  const auto c = build_s(1, 3, opt);
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : c.edges) {
    EXPECT_NE(e.src, e.dst);
    EXPECT_TRUE(pairs.insert({std::min(e.src, e.dst), std::max(e.src, e.dst)}).second);
  }
  for (const auto& cell : c.cells) EXPECT_TRUE(is_closed_walk(c, cell.boundary));
}

TEST(Complex, DecoratedProjectsOntoUndecorated) {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 2}, {2, 0}}) {
    const auto base = build_s(g, n);
    const auto dec = build_s_decorated(g, n);
    std::map<CanonicalKey, int> index;
    for (std::size_t v = 0; v < base.vertices.size(); ++v) index[base.vertices[v].key] = static_cast<int>(v);
    std::set<std::pair<int, int>> base_adj;
    for (const auto& e : base.edges) {
      base_adj.insert({e.src, e.dst});
      base_adj.insert({e.dst, e.src});
    }
    std::set<int> hit;
    for (const auto& v : dec.vertices) hit.insert(index.at(canonical_key(v.graph)));
    EXPECT_EQ(hit.size(), base.vertices.size());
    for (const auto& e : dec.edges) {
      const int a = index.at(canonical_key(dec.vertices[e.src].graph));
      const int b = index.at(canonical_key(dec.vertices[e.dst].graph));
      if (e.kind == EdgeKind::Tau) EXPECT_EQ(a, b);
      else EXPECT_TRUE(base_adj.count({a, b}));
    }
  }
}

TEST(Complex, VertexCapRaisesResourceError) {
  BuildOptions opt;
  opt.max_vertices = 10;
  EXPECT_THROW(build_s(0, 6, opt), ResourceError);
}

TEST(Complex, InadmissibleSurfacesAreRejected) {
  EXPECT_THROW(build_s(0, 2), DomainError);
  EXPECT_THROW(build_s_decorated(1, 0), DomainError);
}
