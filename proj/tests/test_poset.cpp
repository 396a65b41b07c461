#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "posetlab/constructions.hpp"
#include "posetlab/corpus.hpp"
#include "posetlab/poset.hpp"

using namespace posetlab;

namespace {

// Moebius function of P u {1} by the defining recursion; index size() is the top.
std::map<std::pair<std::size_t, std::size_t>, long> moebius(const GradedPoset& p) {
  const std::size_t top = p.size();
  auto le = [&](std::size_t x, std::size_t y) { return y == top || (x != top && p.leq(x, y)); };
  auto rk = [&](std::size_t x) { return x == top ? p.rank() + 1 : p.rank_of(x); };
  std::vector<std::size_t> all;
  for (std::size_t i = 0; i <= top; ++i) all.push_back(i);
  std::sort(all.begin(), all.end(), [&](auto a, auto b) { return rk(a) < rk(b); });
  std::map<std::pair<std::size_t, std::size_t>, long> mu;
  for (auto x : all)
    for (auto y : all) {
      if (!le(x, y)) continue;
      if (x == y) {
        mu[{x, y}] = 1;
        continue;
      }
      long s = 0;
      for (auto z : all)
        if (le(x, z) && le(z, y) && z != y) s += mu.at({x, z});
      mu[{x, y}] = -s;
    }
  return mu;
}

bool eulerian_oracle(const GradedPoset& p) {
  const std::size_t top = p.size();
  auto rk = [&](std::size_t x) { return x == top ? p.rank() + 1 : p.rank_of(x); };
  for (const auto& [xy, m] : moebius(p))
    if (m != ((rk(xy.second) - rk(xy.first)) % 2 == 0 ? 1 : -1)) return false;
  return true;
}

GradedPoset path_poset() { return GradedPoset::from_covers(2, {0, 1, 2}, {{0, 1}, {1, 2}}); }

}  // namespace

TEST(Poset, PointIsRankZero) {
  const auto p = GradedPoset::point();
  EXPECT_EQ(p.rank(), 0);
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p.rank_to_top(kBottom), 1);
}

TEST(Poset, ConstructionErrors) {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::ParseError;
  };
  EXPECT_EQ(code([] { GradedPoset::from_covers(1, {}, {}); }), Errc::NoBottom);
  EXPECT_EQ(code([] { GradedPoset::from_covers(1, {1, 0}, {}); }), Errc::NoBottom);
  EXPECT_EQ(code([] { GradedPoset::from_covers(1, {0, 2}, {{0, 1}}); }), Errc::RankedTooHigh);
  EXPECT_EQ(code([] { GradedPoset::from_covers(2, {0, 1, 2}, {{0, 2}, {0, 1}}); }), Errc::NotGraded);
  EXPECT_EQ(code([] { GradedPoset::from_covers(1, {0, 1}, {}); }), Errc::UnreachableElement);
  EXPECT_EQ(code([] { GradedPoset::from_covers(1, {0, 1}, {{0, 5}}); }), Errc::UnknownElement);
  // pure by default: a rank-1 maximal element in a rank-2 poset is rejected
  EXPECT_EQ(code([] { GradedPoset::from_covers(2, {0, 1, 1, 2}, {{0, 1}, {0, 2}, {1, 3}}); }), Errc::NotGraded);
}

TEST(Poset, OrderAndLabels) {
  const auto p = polygon(4);
  const auto v1 = p.element("v1"), e1 = p.element("e1"), e3 = p.element("e3");
  EXPECT_TRUE(p.less(v1, e1));
  EXPECT_FALSE(p.leq(v1, e3));
  EXPECT_TRUE(p.leq(kBottom, e3));
  EXPECT_EQ(p.element("0"), kBottom);
  EXPECT_EQ(p.element(std::to_string(e1)), e1);
  EXPECT_THROW(p.element("nope"), Error);
  EXPECT_EQ(p.elements_of_rank(1).size(), 4u);
  EXPECT_EQ(p.maximal_elements().size(), 4u);
  EXPECT_EQ(p.cover_count(), 4u + 8u);
}

TEST(Poset, IntervalsAndDual) {
  const auto b = boolean_algebra(4);
  const auto x = b.element("{1}");
  const auto up = interval(b, x, kTop);
  EXPECT_EQ(up.rank(), 2);
  EXPECT_EQ(up.size(), 7u);
  const auto down = interval(b, kBottom, b.element("{1,2,3}"));
  EXPECT_EQ(down.rank(), 2);
  EXPECT_EQ(down.size(), 7u);
  const auto closed = interval(b, kBottom, b.element("{1,2}"), true);
  EXPECT_EQ(closed.size(), 4u);
  // the dual of a boolean algebra is itself
  EXPECT_TRUE(isomorphic(without_top(dual(with_top(b))), b));
  EXPECT_TRUE(isomorphic(without_top(with_top(polygon(5))), polygon(5)));
}

TEST(Poset, EulerianAgreesWithMoebiusOracle) {
  for (const auto& e : corpus()) {
    if (e.poset.size() > 40) continue;
    EXPECT_TRUE(eulerian_oracle(e.poset)) << e.name;
    EXPECT_TRUE(is_eulerian(e.poset)) << e.name;
  }
  for (const auto& p : {path_poset(), with_top(polygon(3)), remove_maximal(polygon(4), 5).poset}) {
    EXPECT_EQ(is_eulerian(p), eulerian_oracle(p));
    EXPECT_FALSE(is_eulerian(p));
  }
}

TEST(Poset, JoinsAndLattices) {
  const auto p = polygon(4);
  EXPECT_EQ(join(p, p.element("v1"), p.element("v2")), p.element("e1"));
  EXPECT_EQ(join(p, p.element("v1"), p.element("v3")), std::nullopt);
  EXPECT_TRUE(is_lattice(p));
  EXPECT_FALSE(is_lattice(polygon(2)));
  EXPECT_THROW(require_lattice(polygon(2)), Error);
}

TEST(Poset, InducedSubposetKeepsOrigin) {
  const auto p = polygon(5);
  const auto s = induced_subposet(p, {0, p.element("v1"), p.element("v2"), p.element("e1")}, 2);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(p.label(s.origin()[3]), "e1");
}
