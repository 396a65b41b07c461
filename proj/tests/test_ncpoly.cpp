#include <gtest/gtest.h>

#include <random>
#include <string>

#include "posetlab/ncpoly.hpp"

using namespace posetlab;

namespace {

// Expansion written out by string substitution on words.
AbPoly expand_oracle(const CdPoly& q) {
  AbPoly out;
  for (const auto& [w, c] : q.terms()) {
    std::vector<std::string> words{""};
    for (char ch : w.str()) {
      std::vector<std::string> next;
      for (const auto& s : words) {
        if (ch == 'c') {
          next.push_back(s + "a");
          next.push_back(s + "b");
        } else {
          next.push_back(s + "ab");
          next.push_back(s + "ba");
        }
      }
      words = std::move(next);
    }
    for (const auto& s : words) out.add_term(AbWord::from_string(s), c);
  }
  return out;
}

CdPoly random_cd(std::mt19937_64& rng, int degree) {
  const auto words = cd_words(degree);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> coeff(-9, 9);
  CdPoly q;
  for (int i = 0; i < 4; ++i) q.add_term(words[pick(rng)], Integer(coeff(rng)));
  return q;
}

}  // namespace

TEST(NcPoly, CanonicalText) {
  EXPECT_EQ(parse_cd("4*d + c^2").to_string(), "c^2 + 4*d");
  EXPECT_EQ(parse_cd("cdc - 2*ccc + 0*d").to_string(), "-2*c^3 + cdc");
  EXPECT_EQ(parse_ab("3*ab - 1*ba + 7").to_string(), "7 + 3*ab - ba");
  EXPECT_EQ(CdPoly{}.to_string(), "0");
  EXPECT_THROW(parse_cd("c + a"), Error);
  EXPECT_THROW(parse_cd("3 3"), Error);
}

TEST(NcPoly, TextRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto q = random_cd(rng, i % 7);
    EXPECT_EQ(parse_cd(q.to_string()), q);
  }
}

TEST(NcPoly, NoncommutativeProduct) {
  EXPECT_NE(cd_c() * cd_d(), cd_d() * cd_c());
  EXPECT_EQ((ab_a() + ab_b()) * (ab_a() + ab_b()), parse_ab("aa + ab + ba + bb"));
}

TEST(NcPoly, CdWordsAreFibonacci) {
  std::size_t f0 = 1, f1 = 1;
  for (int n = 0; n <= 10; ++n) {
    EXPECT_EQ(cd_words(n).size(), f0) << n;
    const auto f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
}

TEST(NcPoly, ExpandAgreesWithOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto q = random_cd(rng, i % 9);
    EXPECT_EQ(ab_expand(q), expand_oracle(q));
  }
}

TEST(NcPoly, ContractExamples) {
  EXPECT_EQ(cd_contract(parse_ab("a + b")), cd_c());
  EXPECT_EQ(cd_contract(parse_ab("aa + ab + ba + bb")), cd_c() * cd_c());
  try {
    cd_contract(ab_a());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotExpressible);
  }
  try {
    cd_contract(parse_ab("a + ab"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotHomogeneous);
  }
}

TEST(NcPoly, ContractInvertsExpand) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_cd(rng, i % 9);
    EXPECT_EQ(cd_contract(expand_oracle(q)), q);
  }
}

TEST(NcPoly, SplitRecoversBothParts) {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 6; ++n) {
    const auto f = random_cd(rng, n), g = random_cd(rng, n - 1);
    const auto [f2, g2] = cd_split(ab_expand(f) + ab_expand(g) * ab_a(), n);
    EXPECT_EQ(f2, f);
    EXPECT_EQ(g2, g);
  }
  EXPECT_THROW(cd_split(parse_ab("bb"), 2), Error);
}

TEST(NcPoly, DerivationIsLeibniz) {
  EXPECT_EQ(derivation_G(cd_c()), cd_d());
  EXPECT_EQ(derivation_G(cd_d()), cd_c() * cd_d());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 40; ++i) {
    const auto u = random_cd(rng, i % 4), v = random_cd(rng, (i + 1) % 5);
    EXPECT_EQ(derivation_G(u * v), derivation_G(u) * v + u * derivation_G(v));
  }
}

TEST(NcPoly, Pyramid) {
  // pyramid over a segment is a triangle; over a triangle, a tetrahedron
  EXPECT_EQ(pyr_op(cd_c()), parse_cd("c^2 + d"));
  EXPECT_EQ(pyr_op(parse_cd("c^2 + d")), parse_cd("c^3 + 2*cd + 2*dc"));
  EXPECT_EQ(pyr_op(CdPoly(1)), cd_c());
}

TEST(NcPoly, AlphaSmallCases) {
  EXPECT_EQ(alpha(0), CdPoly(-1));
  EXPECT_EQ(alpha(1), cd_c());
  EXPECT_EQ(alpha(2), parse_cd("-c^2 + d"));
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(alpha_ab_form(k), ab_expand(alpha(k))) << k;
}

TEST(NcPoly, CoeffwiseComparison) {
  const auto r = coeffwise_compare(parse_cd("c^2 + d"), parse_cd("c^2"));
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->pretty(), "d");
  EXPECT_TRUE(coeffwise_leq(parse_cd("c^2 + d"), parse_cd("c^2 + 4*d")));
  EXPECT_TRUE(coeffwise_leq(CdPoly{}, CdPoly{}));
  EXPECT_TRUE(has_nonnegative_coefficients(parse_cd("c^2 + 0*d")));
  EXPECT_FALSE(has_nonnegative_coefficients(parse_cd("c^2 - d")));
}
