#include <gtest/gtest.h>

#include <random>

#include "khb/chain_complex.hpp"

using namespace khb;

namespace {

ChainComplex two_term(std::int64_t k) {
  ChainComplex c;
  c.set_basis(1, {"a"});
  c.set_basis(0, {"b"});
  c.set_d(1, IntegerMatrix::from_rows({{k}}));
  return c;
}

IntegerMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937& rng) {
  std::uniform_int_distribution<int> dist(-3, 3);
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST(Smith, KnownFactors) {
  EXPECT_EQ(invariant_factors(IntegerMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})),
            (std::vector<std::int64_t>{2, 6, 12}));
  EXPECT_EQ(invariant_factors(IntegerMatrix::from_rows({{0, 0}, {0, 0}})), std::vector<std::int64_t>{});
  EXPECT_EQ(invariant_factors(IntegerMatrix(0, 3)), std::vector<std::int64_t>{});
}

TEST(Smith, DecompositionIsUnimodularAndDiagonal) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_matrix(1 + trial % 5, 1 + (trial / 5) % 5, rng);
    auto s = smith_normal_form(m);
    EXPECT_EQ(s.u * m * s.v, s.d);
    for (std::size_t i = 0; i < s.d.rows(); ++i)
      for (std::size_t j = 0; j < s.d.cols(); ++j)
        if (i != j) {
          EXPECT_EQ(s.d(i, j), 0);
        }
    auto f = s.invariant_factors();
    for (std::size_t i = 1; i < f.size(); ++i) EXPECT_EQ(f[i] % f[i - 1], 0);
    EXPECT_EQ(f, invariant_factors(m));
  }
}

TEST(Homology, TwoTermComplexes) {
  auto h = homology(two_term(2));
  EXPECT_EQ(h[0].torsion, std::vector<std::int64_t>{2});
  EXPECT_TRUE(h[1].is_zero());
  EXPECT_EQ(to_string(h[0]), "Z/2");
  auto z = homology(two_term(0));
  EXPECT_EQ(z[1].rank, 1u);
  EXPECT_EQ(to_string(z[1]), "Z");
  EXPECT_TRUE(homology(two_term(-1))[0].is_zero());
}

TEST(ChainComplex, ShapeChecks) {
  ChainComplex c;
  c.set_basis(0, {"x"});
  EXPECT_THROW(c.set_d(1, IntegerMatrix(1, 1)), std::invalid_argument);
  c.set_basis(1, {"y", "z"});
  EXPECT_NO_THROW(c.set_d(1, IntegerMatrix::from_rows({{1, -1}})));
  EXPECT_TRUE(c.d_squared_zero());
  EXPECT_EQ(c.total_rank(), 3u);
}

TEST(Cone, IdentityIsAcyclic) {
  auto c = two_term(3);
  auto id = identity_map(c);
  EXPECT_TRUE(id.commutes());
  auto k = cone(id);
  EXPECT_TRUE(k.d_squared_zero());
  EXPECT_TRUE(is_quasi_iso(id));
  ChainMap zero{c, c, {}};
  EXPECT_FALSE(is_quasi_iso(zero));
}

TEST(Dual, TransposesAndNegatesDegrees) {
  auto d = dualize(two_term(2));
  EXPECT_EQ(d.basis(-1), std::vector<std::string>{"a"});
  EXPECT_EQ(d.d(0), IntegerMatrix::from_rows({{2}}));
  auto h = homology(d);
  EXPECT_EQ(h[-1].torsion, std::vector<std::int64_t>{2});
}

TEST(Tensor, KunnethOverZ2) {
  auto c = two_term(2);
  auto t = tensor(c, c);
  EXPECT_TRUE(t.d_squared_zero());
  auto h = homology(t);
  EXPECT_EQ(h[0].torsion, std::vector<std::int64_t>{2});
  EXPECT_EQ(h[1].torsion, std::vector<std::int64_t>{2});
  EXPECT_TRUE(h[2].is_zero());
}

TEST(DirectSum, BlockStructure) {
  auto s = direct_sum(two_term(2), shift(two_term(3), 1));
  EXPECT_EQ(s.basis(1), (std::vector<std::string>{"0:a", "1:b"}));
  auto h = homology(s);
  EXPECT_EQ(h[0].torsion, std::vector<std::int64_t>{2});
  EXPECT_EQ(h[1].torsion, std::vector<std::int64_t>{3});
  EXPECT_TRUE(isomorphic_by_labels(s, s, [](const std::string& x) { return x; }));
  EXPECT_FALSE(isomorphic_by_labels(s, direct_sum(two_term(2), shift(two_term(5), 1)),
                                    [](const std::string& x) { return x; }));
}
