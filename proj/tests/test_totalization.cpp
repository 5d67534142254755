#include <gtest/gtest.h>

#include <random>

#include "khb/functor_ops.hpp"
#include "khb/totalization.hpp"
#include "support.hpp"

using namespace khb;
using khb::test::load_functor;

namespace {

bool is_signed_permutation(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    int row = 0, col = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0 && m(i, j) != 1 && m(i, j) != -1) return false;
      row += m(i, j) != 0;
      col += m(j, i) != 0;
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

}  // namespace

TEST(Tot, OfPIsMultiplicationByTwo) {
  auto p = load_functor("P");
  auto t = tot(p);
  EXPECT_EQ(t.basis(1), std::vector<std::string>{"1/x"});
  EXPECT_EQ(t.basis(0), std::vector<std::string>{"0/y"});
  EXPECT_EQ(t.d(1), IntegerMatrix::from_rows({{2}}));
  auto shifted = tot(p.functor, -3);
  EXPECT_EQ(shifted.basis(-2), std::vector<std::string>{"1/x"});
}

TEST(Tot, DifferentialSquaresToZeroOnRandomFunctors) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = khb::test::random_functor(trial % 5, rng);
    EXPECT_TRUE(tot(f).d_squared_zero());
  }
}

TEST(Tot, OrdersSummandsByDescendingVertex) {
  auto pp = product(load_functor("P").functor, load_functor("P").functor);
  auto t = tot(pp);
  EXPECT_EQ(t.basis(1), (std::vector<std::string>{"10/(x,y)", "01/(y,x)"}));
  EXPECT_TRUE(t.d_squared_zero());
}

TEST(FaceShift, RandomTwistsAreChainIsomorphisms) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    int n = trial % 4;
    int big = n + static_cast<int>(rng() % static_cast<unsigned>(6 - n));
    auto f = khb::test::random_functor(n, rng);
    auto iota = khb::test::random_face_inclusion(n, big, rng);
    auto fs = face_shift_iso(f, iota);
    EXPECT_TRUE(twist_satisfies_closure(fs.twist, iota));
    EXPECT_EQ(fs.twist.t.at(0), 0);
    EXPECT_TRUE(fs.map.commutes());
    for (int d : fs.map.source.degrees()) EXPECT_TRUE(is_signed_permutation(fs.map.at(d)));
    EXPECT_TRUE(is_quasi_iso(fs.map));
  }
}

TEST(FaceShift, WrongTwistFailsClosure) {
  FaceInclusion iota(CubeVertex::parse("100"), {2, 3});
  std::mt19937 rng(1);
  auto fs = face_shift_iso(khb::test::random_functor(2, rng), iota);
  SignTwist bad = fs.twist;
  bad.t[1] ^= 1;
  EXPECT_FALSE(twist_satisfies_closure(bad, iota));
}
