#include <gtest/gtest.h>

#include <set>

#include "posetlab/constructions.hpp"
#include "posetlab/corpus.hpp"
#include "posetlab/flag_enum.hpp"
#include "posetlab/homology.hpp"

using namespace posetlab;

TEST(Constructions, BooleanAlgebra) {
  const auto b = boolean_algebra(4);
  EXPECT_EQ(b.size(), 15u);
  EXPECT_EQ(b.rank(), 3);
  EXPECT_EQ(b.label(kBottom), "{}");
  EXPECT_TRUE(b.less(b.element("{1}"), b.element("{1,3}")));
  EXPECT_FALSE(b.leq(b.element("{2}"), b.element("{1,3}")));
  EXPECT_EQ(boolean_algebra(1).size(), 1u);
}

TEST(Constructions, Polygon) {
  const auto p = polygon(5);
  EXPECT_EQ(p.size(), 11u);
  EXPECT_TRUE(p.less(p.element("v5"), p.element("e5")));
  EXPECT_TRUE(p.less(p.element("v1"), p.element("e5")));
  EXPECT_EQ(p.lower_covers(p.element("e2")).size(), 2u);
  // two vertices, two edges, each edge on both vertices
  const auto two = polygon(2);
  EXPECT_EQ(two.upper_covers(two.element("v1")).size(), 2u);
}

TEST(Constructions, StarProductMultipliesIndices) {
  std::vector<GradedPoset> ps{boolean_algebra(2), polygon(2), polygon(3), polygon(4), boolean_algebra(4), cube(3)};
  for (const auto& p : ps)
    for (const auto& q : ps) {
      if (p.rank() + q.rank() > 5) continue;
      const auto s = star_product(p, q);
      EXPECT_EQ(s.rank(), p.rank() + q.rank());
      EXPECT_EQ(s.size(), p.size() + q.size() - 1);
      EXPECT_EQ(cd_index(s), cd_index(p) * cd_index(q));
    }
  // two segments stacked: both edges lie over both vertices
  EXPECT_TRUE(isomorphic(star_product(boolean_algebra(2), boolean_algebra(2)), polygon(2)));
}

TEST(Constructions, PyramidRaisesRankAndAppliesPyr) {
  for (const auto& e : corpus()) {
    if (e.poset.rank() > 3) continue;
    const auto p = pyr_poset(e.poset);
    EXPECT_EQ(p.rank(), e.poset.rank() + 1) << e.name;
    EXPECT_EQ(p.size(), 2 * e.poset.size() + 1) << e.name;
    EXPECT_EQ(cd_index(p), pyr_op(cd_index(e.poset))) << e.name;
  }
  EXPECT_TRUE(isomorphic(pyr_poset(polygon(3)), boolean_algebra(4)));
  EXPECT_TRUE(isomorphic(pyr_poset(boolean_algebra(2)), polygon(3)));
}

TEST(Constructions, ProductsOfSegments) {
  const auto seg = boolean_algebra(2);
  EXPECT_TRUE(isomorphic(product(seg, seg), polygon(4)));
  EXPECT_TRUE(isomorphic(product(product(seg, seg), seg), cross_polytope(3)));
  EXPECT_EQ(cartesian_product(seg, seg).rank(), 3);
  EXPECT_TRUE(isomorphic(cartesian_product(seg, seg), boolean_algebra(4)));
}

TEST(Constructions, CubeAndCross) {
  EXPECT_EQ(cube(3).size(), 27u);
  EXPECT_EQ(cross_polytope(3).size(), 27u);
  EXPECT_TRUE(isomorphic(cube(2), polygon(4)));
  EXPECT_TRUE(isomorphic(cross_polytope(2), polygon(4)));
  EXPECT_FALSE(isomorphic(cube(3), cross_polytope(3)));
}

TEST(Constructions, OrderComplex) {
  const auto oc = order_complex_with_chains(polygon(3));
  EXPECT_TRUE(isomorphic(oc.poset, polygon(6)));
  EXPECT_EQ(oc.chains.size(), oc.poset.size());
  EXPECT_EQ(oc.chains[kBottom], Chain{kBottom});
  EXPECT_TRUE(isomorphic(order_complex(boolean_algebra(3)), polygon(6)));
}

TEST(Constructions, LambdaNuOfAPolygonVertex) {
  const auto p = polygon(6);
  const auto nu = p.element("v1");
  std::set<std::string> got;
  for (auto e : lambda_nu_elements(p, nu)) got.insert(p.label(e));
  EXPECT_EQ(got, (std::set<std::string>{"0", "v1", "v2", "v6", "e1", "e6"}));
  // * joins v2 and v6, closing the path v2 e1 v1 e6 v6 into a triangle
  EXPECT_TRUE(isomorphic(semisuspension(p, nu), polygon(3)));
  EXPECT_TRUE(isomorphic(semisuspension(polygon(3), polygon(3).element("v1")), polygon(3)));
}

TEST(Constructions, RemoveUpsetBoundary) {
  const auto p = polygon(5);
  const auto pair = remove_upset(p, p.element("v1"));
  std::set<std::string> kept, bd;
  for (std::size_t i = 0; i < pair.poset.size(); ++i) kept.insert(pair.poset.label(i));
  for (auto b : pair.boundary) bd.insert(pair.poset.label(b));
  EXPECT_EQ(kept, (std::set<std::string>{"0", "v2", "v3", "v4", "v5", "e2", "e3", "e4"}));
  EXPECT_EQ(bd, (std::set<std::string>{"0", "v2", "v5"}));
}

TEST(Constructions, RemoveMaximalAndCap) {
  const auto p = cube(3);
  const auto pair = remove_maximal(p, p.maximal_elements().front());
  EXPECT_EQ(pair.poset.size(), 26u);
  EXPECT_EQ(pair.boundary.size(), 1u + 4u + 4u);
  EXPECT_TRUE(isomorphic(cap_boundary(pair), p));
  EXPECT_THROW(remove_maximal(p, p.element("0")), Error);
}

TEST(Constructions, SubdivisionTargetMap) {
  const auto p = polygon(6);
  const auto nu = p.element("v1");
  const auto f = subdivision_target_and_map(p, nu);
  EXPECT_TRUE(f.is_order_preserving());
  EXPECT_TRUE(f.is_surjective());
  EXPECT_EQ(cd_index(f.target), cd_index(interval(p, kBottom, nu)) * pyr_op(cd_index(interval(p, nu, kTop))));
  EXPECT_EQ(cd_index(f.target), parse_cd("c^2 + d"));
  const auto g = collapse_map(p, nu);
  EXPECT_TRUE(g.is_order_preserving());
  EXPECT_TRUE(g.is_surjective());
  EXPECT_TRUE(identity_map(p).is_surjective());
}

TEST(Constructions, IsomorphismDistinguishes) {
  EXPECT_TRUE(isomorphic(polygon(4), polygon(4)));
  EXPECT_FALSE(isomorphic(polygon(4), polygon(5)));
  const auto s34 = star_product(polygon(3), polygon(4)), s43 = star_product(polygon(4), polygon(3));
  EXPECT_NE(cd_index(s34), cd_index(s43));
  EXPECT_FALSE(isomorphic(s34, s43));
}

TEST(Constructions, DualKeepsExtremeNames) {
  const auto c = cube(3);
  EXPECT_EQ(c.label(kBottom), "0");
  EXPECT_EQ(c.element("1"), 1u);
  const auto d = dual(with_top(polygon(5)));
  EXPECT_EQ(d.label(kBottom), "0");
  EXPECT_EQ(d.label(d.maximal_elements().front()), "1");
}
