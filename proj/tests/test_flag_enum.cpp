#include <gtest/gtest.h>

#include "posetlab/constructions.hpp"
#include "posetlab/corpus.hpp"
#include "posetlab/flag_enum.hpp"

using namespace posetlab;

namespace {

// Every chain 0 < s1 < ... < sk as a subset of the non-bottom elements, with
// its weight multiplied out letter by letter.
AbPoly brute_ab_index(const GradedPoset& p) {
  const std::size_t m = p.size() - 1;
  auto power = [](int k) {
    AbPoly out(1);
    for (int i = 0; i < k; ++i) out = out * (ab_a() - ab_b());
    return out;
  };
  AbPoly total;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<ElementId> chain{kBottom};
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) chain.push_back(i + 1);
    std::sort(chain.begin() + 1, chain.end(), [&](auto x, auto y) { return p.rank_of(x) < p.rank_of(y); });
    bool ok = true;
    for (std::size_t i = 1; i < chain.size(); ++i) ok = ok && p.less(chain[i - 1], chain[i]);
    if (!ok) continue;
    AbPoly w(1);
    for (std::size_t i = 1; i < chain.size(); ++i)
      w = w * power(p.rank_of(chain[i]) - p.rank_of(chain[i - 1]) - 1) * ab_b();
    total += w * power(p.rank() + 1 - p.rank_of(chain.back()) - 1);
  }
  return total;
}

}  // namespace

TEST(FlagEnum, DynamicProgramMatchesBruteForce) {
  int tested = 0;
  for (const auto& e : corpus()) {
    if (e.poset.size() > 20) continue;
    EXPECT_EQ(ab_index(e.poset), brute_ab_index(e.poset)) << e.name;
    ++tested;
  }
  const auto path = GradedPoset::from_covers(2, {0, 1, 2}, {{0, 1}, {1, 2}});
  EXPECT_EQ(ab_index(path), brute_ab_index(path));
  EXPECT_EQ(ab_index(with_top(polygon(3))), brute_ab_index(with_top(polygon(3))));
  EXPECT_GE(tested, 10);
}

TEST(FlagEnum, ChainEnumerationSumsToIndex) {
  const auto p = cube(3);
  AbPoly sum;
  std::size_t chains = 0;
  for_each_chain(p, [&](const Chain& x) {
    sum += weight(p, x);
    ++chains;
  });
  EXPECT_EQ(sum, ab_index(p));
  // chains of the cube face poset: 1 + 26 + (24+24+24) + 48
  EXPECT_EQ(chains, 1u + 26u + 72u + 48u);
}

TEST(FlagEnum, WeightRejectsBadChains) {
  const auto p = polygon(3);
  EXPECT_THROW(weight(p, {}), Error);
  EXPECT_THROW(weight(p, {p.element("v1")}), Error);
  EXPECT_THROW(weight(p, {0, p.element("e1"), p.element("v1")}), Error);
  EXPECT_EQ(weight(p, {0}), pow(ab_a() - ab_b(), 2));
}

TEST(FlagEnum, KnownCdIndices) {
  for (int m = 2; m <= 12; ++m) EXPECT_EQ(cd_index(polygon(m)), parse_cd("c^2 + " + std::to_string(m - 2) + "*d"));
  EXPECT_EQ(cd_index(boolean_algebra(2)), cd_c());
  EXPECT_EQ(cd_index(boolean_algebra(4)), parse_cd("c^3 + 2*cd + 2*dc"));
  EXPECT_EQ(cd_index(boolean_algebra(5)), parse_cd("c^4 + 3*ccd + 5*cdc + 3*dcc + 4*dd"));
  EXPECT_EQ(cd_index(cube(3)), parse_cd("c^3 + 4*cd + 6*dc"));
  EXPECT_EQ(cd_index(cross_polytope(3)), parse_cd("c^3 + 6*cd + 4*dc"));
  EXPECT_EQ(cd_index(GradedPoset::point()), CdPoly(1));
}

TEST(FlagEnum, NonEulerianHasNoCdIndex) {
  try {
    cd_index(with_top(polygon(3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotEulerian);
  }
}

TEST(FlagEnum, NearCdIndex) {
  // {0, atom} with boundary {0}: Psi = a, Psi_boundary = 1
  const auto seg = GradedPoset::from_covers(1, {0, 1}, {{0, 1}});
  const auto r = near_cd_index(seg, {kBottom});
  EXPECT_EQ(r.phi, CdPoly{});
  EXPECT_EQ(r.boundary, CdPoly(1));

  const auto ball = with_top(polygon(3));
  std::vector<ElementId> bd;
  for (std::size_t i = 0; i + 1 < ball.size(); ++i) bd.push_back(i);
  const auto t = near_cd_index(ball, bd);
  EXPECT_EQ(t.boundary, parse_cd("c^2 + d"));
  EXPECT_EQ(ab_expand(t.phi) + ab_expand(t.boundary) * ab_a(), ab_index(ball));
  EXPECT_TRUE(t.phi.is_homogeneous(3));
}

TEST(FlagEnum, LambdaNuFormulasOnPolygons) {
  for (int m = 3; m <= 8; ++m) {
    const auto p = polygon(m);
    for (const char* tok : {"v1", "e1"}) {
      const auto nu = p.element(tok);
      EXPECT_EQ(lambda_nu_ab_formula(p, nu), ab_index(lambda_nu_poset(p, nu))) << m << tok;
      EXPECT_EQ(lambda_nu_prime_cd(p, nu), cd_index(semisuspension(p, nu))) << m << tok;
      EXPECT_EQ(ab_expand(lambda_nu_prime_cd(p, nu)), lambda_nu_ab_formula(p, nu) + star_chain_sum(p, nu));
    }
  }
  // the triangle at a vertex: the semisuspension is the triangle again
  EXPECT_EQ(lambda_nu_prime_cd(polygon(3), polygon(3).element("v1")), parse_cd("c^2 + d"));
}

TEST(FlagEnum, LambdaNuNeedsLattice) {
  EXPECT_THROW(lambda_nu_ab_formula(polygon(2), 1), Error);
  EXPECT_THROW(lambda_nu_prime_cd(polygon(4), kBottom), Error);
}

TEST(FlagEnum, PyrAlphaRecurrence) {
  const auto b = boolean_algebra(4);
  for (ElementId t = 0; t < b.size(); ++t) {
    EXPECT_TRUE(pyr_alpha_recurrence_check(b, t, kTop));
    for (ElementId s = 0; s < b.size(); ++s)
      if (b.less(t, s)) EXPECT_TRUE(pyr_alpha_recurrence_check(b, t, s));
  }
  EXPECT_THROW(pyr_alpha_recurrence_check(b, 1, 2), Error);
}

TEST(FlagEnum, WeightedIndexScalesWithMultiplicities) {
  const auto p = polygon(4);
  std::vector<Integer> twos(p.size(), Integer(2));
  EXPECT_EQ(weighted_ab_index(p, twos), ab_index(p) * Integer(2));
  std::vector<Integer> zeros(p.size(), Integer(0));
  EXPECT_TRUE(weighted_ab_index(p, zeros).is_zero());
}
