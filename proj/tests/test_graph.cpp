#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pantcx/pantcx.hpp"

using namespace pantcx;

namespace {

const std::vector<std::pair<int, int>> kSmall = {{0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 1}, {1, 2},
                                                 {1, 3}, {2, 0}, {2, 1}, {3, 0}};

}  // namespace

TEST(Graph, BuiltinsValidate) {
  for (const auto& g : {tripod(), loop_leaf(), theta(), dumbbell(), four_leaf(1, 2, 3, 4)})
    EXPECT_TRUE(validate(g).empty()) << serialize(g);
  EXPECT_EQ(counts(theta()).genus, 2);
  EXPECT_EQ(counts(loop_leaf()).genus, 1);
  EXPECT_EQ(counts(four_leaf(1, 3, 2, 4)).boundary, 4);
}

TEST(Graph, ConstructorRejectsBadPairing) {
  EXPECT_THROW(PantGraph({0, 1}, {{0, 1}}, {}), StructuralError);
  EXPECT_THROW(PantGraph({1, 2, 0}, {{0, 1, 2}}, {}), StructuralError);
  EXPECT_THROW(PantGraph({1, 0}, {{0}}, {}), StructuralError);
  EXPECT_THROW(PantGraph({1, 0}, {{0}, {0, 1}}, {}), StructuralError);
  EXPECT_THROW(make_graph(4, {{0, 1}}, {{0, 1, 2, 3}}, {}), StructuralError);
}

TEST(Graph, ValidateNamesViolations) {
  // A single edge between two leaves: degrees fine, no trivalent vertex.
  const auto bare = make_graph(2, {{0, 1}}, {{0}, {1}}, {0, 1});
  auto v = validate(bare);
  EXPECT_NE(std::find(v.begin(), v.end(), Invariant::Admissible), v.end());

  // A bivalent vertex.
  const auto path = make_graph(4, {{0, 1}, {2, 3}}, {{0}, {1, 2}, {3}}, {0, 3});
  v = validate(path);
  EXPECT_NE(std::find(v.begin(), v.end(), Invariant::Degree), v.end());

  // Two disjoint tripods.
  auto t = tripod();
  std::vector<std::pair<Dart, Dart>> edges;
  for (auto [a, b] : t.edges()) {
    edges.emplace_back(a, b);
    edges.emplace_back(a + 6, b + 6);
  }
  auto blocks = t.vertices();
  for (auto b : t.vertices()) {
    for (auto& d : b) d += 6;
    blocks.push_back(b);
  }
  auto leaves = t.leaf_darts();
  for (Dart d : t.leaf_darts()) leaves.push_back(d + 6);
  v = validate(make_graph(12, edges, blocks, leaves));
  EXPECT_NE(std::find(v.begin(), v.end(), Invariant::Connectivity), v.end());
}

TEST(Graph, SerializeRoundTrip) {
  for (auto [g, n] : kSmall)
    for (const auto& gr : enumerate_graphs(g, n)) {
      const auto back = parse_graph(serialize(gr));
      EXPECT_EQ(back, gr);
    }
}

TEST(Graph, ParseErrorsCarryPosition) {
  try {
    parse_graph("pantgraph g=0 n=3\nedges: 0-3, 1-4, 2x5\nvertices: [0,1,2] [3] [4] [5]\nleaves: 1:3, 2:4, 3:5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
  try {
    parse_graph("pantgraph g=1 n=3\nedges: 0-3, 1-4, 2-5\nvertices: [0,1,2] [3] [4] [5]\nleaves: 1:3, 2:4, 3:5\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  EXPECT_THROW(parse_graph("pantgraph g=0 n=3\nedges: 0-3\n"), ParseError);
  EXPECT_THROW(parse_graph("pantgraph g=0 n=3\nedges: 0-3, 1-4, 2-5\nvertices: [0,1,2] [3] [4] [5]\nleaves: 1:3, 3:5\n"),
               ParseError);
}

TEST(Enumerate, MatchesMultigraphOracle) {
  for (auto [g, n] : kSmall) {
    const auto graphs = enumerate_graphs(g, n);
    const auto expected = oracle::enumerate_forms(g, n);
    std::set<std::vector<int>> got;
    for (const auto& gr : graphs) {
      EXPECT_TRUE(validate(gr).empty());
      EXPECT_EQ(counts(gr).genus, g);
      EXPECT_EQ(counts(gr).boundary, n);
      got.insert(oracle::form_of(gr));
    }
    EXPECT_EQ(got.size(), graphs.size()) << "duplicate class at g=" << g << " n=" << n;
    EXPECT_EQ(got, expected) << "g=" << g << " n=" << n;
  }
}

TEST(Enumerate, KnownCounts) {
  EXPECT_EQ(enumerate_graphs(0, 3).size(), 1u);
  EXPECT_EQ(enumerate_graphs(0, 4).size(), 3u);
  EXPECT_EQ(enumerate_graphs(0, 5).size(), 15u);
  EXPECT_EQ(enumerate_graphs(0, 6).size(), 105u);
  EXPECT_EQ(enumerate_graphs(1, 1).size(), 1u);
  EXPECT_EQ(enumerate_graphs(2, 0).size(), 2u);
}

TEST(Enumerate, RejectsInadmissible) {
  EXPECT_THROW(enumerate_graphs(0, 2), DomainError);
  EXPECT_THROW(enumerate_graphs(1, 0), DomainError);
  EXPECT_THROW(enumerate_graphs(0, 0), DomainError);
}

TEST(Enumerate, ThreadCountDoesNotChangeOutput) {
  const auto a = enumerate_keyed(1, 3, 1);
  const auto b = enumerate_keyed(1, 3, 6);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].key, b[i].key);
    EXPECT_EQ(a[i].graph, b[i].graph);
  }
}

TEST(Canon, AutomorphismCountsMatchBacktracking) {
  for (auto [g, n] : kSmall) {
    if (3 * g - 3 + n > 3 && !(g == 2 && n == 1)) continue;
    for (const auto& gr : enumerate_graphs(g, n))
      EXPECT_EQ(automorphism_count(gr), oracle::count_isomorphisms(gr, gr)) << serialize(gr);
  }
  EXPECT_EQ(automorphism_count(theta()), 12);
  EXPECT_EQ(automorphism_count(dumbbell()), 8);
  EXPECT_EQ(automorphism_count(tripod()), 1);
  EXPECT_EQ(automorphism_count(loop_leaf()), 2);
}

TEST(Canon, KeyAgreesWithOracleOnScrambledPool) {
  std::mt19937 rng(7);
  std::vector<PantGraph> pool;
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 5}, {1, 2}, {1, 3}, {2, 1}, {3, 0}})
    for (const auto& gr : enumerate_graphs(g, n))
      for (int k = 0; k < 3; ++k) pool.push_back(oracle::scramble(gr, rng));
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); j += 1 + static_cast<std::size_t>(rng() % 5)) {
      const bool same_key = canonical_key(pool[i]) == canonical_key(pool[j]);
      const bool iso = oracle::count_isomorphisms(pool[i], pool[j]) > 0;
      ASSERT_EQ(same_key, iso) << serialize(pool[i]) << serialize(pool[j]);
      if (iso) EXPECT_EQ(oracle::form_of(pool[i]), oracle::form_of(pool[j]));
    }
}

TEST(Canon, IsomorphismsAreStructurePreserving) {
  std::mt19937 rng(11);
  for (const auto& gr : enumerate_graphs(1, 3)) {
    const auto other = oracle::scramble(gr, rng);
    long long seen = 0;
    for_each_isomorphism(gr, other, [&](const std::vector<Dart>& f) {
      ++seen;
      for (Dart d = 0; d < gr.dart_count(); ++d) {
        EXPECT_EQ(f[gr.mate(d)], other.mate(f[d]));
        for (Dart e : gr.vertex(gr.vertex_of(d))) EXPECT_EQ(other.vertex_of(f[e]), other.vertex_of(f[d]));
      }
      for (int l = 1; l <= gr.leaf_count(); ++l) EXPECT_EQ(f[gr.leaf_dart(l)], other.leaf_dart(l));
      return true;
    });
    EXPECT_EQ(seen, oracle::count_isomorphisms(gr, other));
  }
}

TEST(Canon, KeyHexRoundTrip) {
  for (const auto& gr : enumerate_graphs(0, 5)) {
    const auto k = canonical_key(gr);
    EXPECT_EQ(CanonicalKey::from_hex(k.hex()), k);
  }
}

TEST(Canon, EdgeColorsRefineTheKey) {
  // Theta with its three edges colored 1,2,3 has only the swap of its two vertices.
  const auto t = theta();
  const std::vector<int> colors{1, 2, 3};
  EXPECT_EQ(automorphism_count(t, &colors), 2);
  const std::vector<int> swapped{2, 1, 3};
  EXPECT_EQ(canonical_key(t, &colors), canonical_key(t, &swapped));
}

TEST(Surgery, ContractUndoesInsert) {
  for (const auto& gr : enumerate_graphs(1, 2))
    for (int e = 0; e < gr.edge_count(); ++e)
      EXPECT_TRUE(are_isomorphic(contract_last_leaf(insert_leaf(gr, e)), gr));
}

TEST(Surgery, CutUndoesJoin) {
  for (const auto& gr : enumerate_graphs(1, 2)) {
    const auto joined = join_free_ends(gr);
    EXPECT_EQ(counts(joined).genus, 2);
    bool found = false;
    for (int e = 0; e < joined.edge_count() && !found; ++e)
      for (bool swap : {false, true}) {
        try {
          if (are_isomorphic(cut_edge(joined, e, swap), gr)) found = true;
        } catch (const std::exception&) {
        }
      }
    EXPECT_TRUE(found);
  }
}
