#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pantcx/pantcx.hpp"

using namespace pantcx;

namespace {

const std::vector<std::pair<int, int>> kSmall = {{0, 4}, {0, 5}, {0, 6}, {1, 2}, {1, 3}, {2, 0}, {2, 1}};

// The pairing of the four darts around `edge`, read off the vertex blocks.
std::set<std::set<Dart>> coupling(const PantGraph& g, int edge) {
  const auto fr = frame(g, edge);
  return {{fr.a, fr.b}, {fr.c, fr.d}};
}

// Equal pairing, leaves and vertex blocks, ignoring block order.
bool same_graph(const PantGraph& a, const PantGraph& b) {
  auto va = a.vertices(), vb = b.vertices();
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  return a.mates() == b.mates() && a.leaf_darts() == b.leaf_darts() && va == vb;
}

}  // namespace

TEST(Moves, EveryMoveIsSoundAndInvertible) {
  for (auto [g, n] : kSmall)
    for (const auto& gr : enumerate_graphs(g, n))
      for (int e : eligible_edges(gr)) {
        std::set<std::set<std::set<Dart>>> seen{coupling(gr, e)};
        for (Variant v : {Variant::CrossAD, Variant::CrossAC}) {
          const auto r = to_recoupling(gr, {e, v});
          const auto out = apply_recoupling(gr, r);
          EXPECT_TRUE(validate(out).empty()) << serialize(gr) << to_string(MoveSpec{FMove{e, v}});
          EXPECT_EQ(counts(out).genus, g);
          EXPECT_EQ(counts(out).boundary, n);
          EXPECT_EQ(out.mates(), gr.mates());
          EXPECT_EQ(out.leaf_darts(), gr.leaf_darts());
          // A recoupling is an unordered pairing, so undoing it restores the
          // graph up to reversing the moved edge.
          const auto back = apply_recoupling(out, inverse_recoupling(gr, r));
          const auto fr = frame(gr, e);
          std::vector<Dart> flip(gr.dart_count());
          std::iota(flip.begin(), flip.end(), 0);
          std::swap(flip[fr.x], flip[fr.y]);
          EXPECT_TRUE(same_graph(back, gr) || same_graph(relabel_darts(back, flip), gr)) << serialize(gr) << serialize(back);
          EXPECT_EQ(to_fmove(gr, r), (FMove{e, v}));
          seen.insert(coupling(out, e));
        }
        EXPECT_EQ(seen.size(), 3u);
      }
}

TEST(Moves, IneligibleEdgesAreRejected) {
  const auto t = tripod();
  for (int e = 0; e < t.edge_count(); ++e) EXPECT_THROW(apply_f(t, {e, Variant::CrossAD}), MoveError);
  const auto l = loop_leaf();
  for (int e = 0; e < l.edge_count(); ++e) EXPECT_FALSE(is_eligible(l, e));
  EXPECT_THROW(apply_f(l, {0, Variant::CrossAC}), MoveError);
  EXPECT_THROW(apply_f(theta(), {7, Variant::CrossAC}), MoveError);
  const auto g = four_leaf(1, 2, 3, 4);
  const auto fr = frame(g, eligible_edges(g)[0]);
  EXPECT_THROW(apply_recoupling(g, Recoupling::make(fr.a, fr.b, fr.c, fr.d)), MoveError);
}

TEST(Moves, FourLeafReachesTheOtherCouplings) {
  const auto g = four_leaf(1, 2, 3, 4);
  std::set<CanonicalKey> keys{canonical_key(g)};
  for (const auto& [m, out] : all_moves(g)) keys.insert(canonical_key(out));
  EXPECT_EQ(keys.size(), 3u);
  EXPECT_TRUE(keys.count(canonical_key(four_leaf(1, 3, 2, 4))));
  EXPECT_TRUE(keys.count(canonical_key(four_leaf(1, 4, 2, 3))));
}

TEST(Moves, IsomorphicInputsGiveIsomorphicOutputs) {
  std::mt19937 rng(3);
  for (const auto& gr : enumerate_graphs(1, 3)) {
    const auto other = oracle::scramble(gr, rng);
    const auto f = find_isomorphism(gr, other);
    ASSERT_TRUE(f);
    for (const auto& r : all_recouplings(gr))
      EXPECT_TRUE(are_isomorphic(apply_recoupling(gr, r), apply_recoupling(other, r.mapped(*f))));
  }
}

TEST(Moves, TextRoundTrip) {
  const std::vector<MoveSpec> word{FMove{3, Variant::CrossAD}, TauMove{1, 2}, FMove{0, Variant::CrossAC}};
  std::string text;
  for (const auto& m : word) text += to_string(m) + " ";
  EXPECT_EQ(parse_moves(text), word);
  EXPECT_THROW(parse_moves("F e=1"), ParseError);
  EXPECT_THROW(parse_moves("F e=x v=AD"), ParseError);
  EXPECT_THROW(parse_moves("F e=1 v=XY"), ParseError);
  EXPECT_THROW(parse_moves("G 1 2"), ParseError);
  try {
    parse_moves("tau 1 2 tau 1");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 4);
  }
}

TEST(Decorated, TauAndFKeepTheOrdering) {
  for (const auto& gr : enumerate_graphs(1, 2)) {
    const auto d = decorate(gr);
    ASSERT_TRUE(valid_ordering(d));
    const int k = d.internal_count();
    ASSERT_EQ(k, 3 * 1 - 3 + 2);
    const auto t = apply_tau(d, {1, 2});
    EXPECT_TRUE(valid_ordering(t));
    EXPECT_NE(t.position, d.position);
    EXPECT_EQ(apply_tau(t, {2, 1}), d);
    EXPECT_THROW(apply_tau(d, {1, 1}), MoveError);
    EXPECT_THROW(apply_tau(d, {1, 3}), MoveError);
    for (int pos = 1; pos <= k; ++pos) {
      if (!is_eligible(gr, d.edge_at(pos))) continue;
      const auto f = apply_decorated_f(d, pos, Variant::CrossAD);
      EXPECT_TRUE(valid_ordering(f));
      EXPECT_EQ(f.edge_at(pos), d.edge_at(pos));
    }
  }
}

TEST(Decorated, OrderingDistinguishesKeys) {
  // Theta has all orderings equivalent; the dumbbell separates its bridge.
  const auto t = decorate(theta());
  EXPECT_EQ(canonical_key(t), canonical_key(apply_tau(t, {1, 3})));
  const auto d = decorate(dumbbell());
  std::set<CanonicalKey> keys;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}}) keys.insert(canonical_key(apply_tau(d, {i, j})));
  keys.insert(canonical_key(d));
  EXPECT_EQ(keys.size(), 3u);
}
