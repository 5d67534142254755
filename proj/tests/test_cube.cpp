#include <gtest/gtest.h>

#include <set>

#include "khb/cube.hpp"

using namespace khb;

TEST(CubeVertex, ParseAndPrintRoundTrip) {
  auto v = CubeVertex::parse("1011");
  EXPECT_EQ(v.dim(), 4);
  EXPECT_EQ(v.to_string(), "1011");
  EXPECT_EQ(v.bit(1), 1);
  EXPECT_EQ(v.bit(2), 0);
  EXPECT_EQ(v.grading(), 3);
  EXPECT_EQ(v.index(), 0b1011u);
  EXPECT_THROW(CubeVertex::parse("10a"), std::invalid_argument);
}

TEST(CubeVertex, PartialOrder) {
  EXPECT_TRUE(geq(CubeVertex::parse("110"), CubeVertex::parse("100")));
  EXPECT_FALSE(geq(CubeVertex::parse("110"), CubeVertex::parse("001")));
  EXPECT_TRUE(is_edge(CubeVertex::parse("110"), CubeVertex::parse("010")));
  EXPECT_FALSE(is_edge(CubeVertex::parse("110"), CubeVertex::parse("000")));
  EXPECT_THROW(geq(CubeVertex::parse("11"), CubeVertex::parse("1")), std::invalid_argument);
}

TEST(CubeCounts, VerticesEdgesFaces) {
  for (int n = 0; n <= 5; ++n) {
    EXPECT_EQ(all_vertices(n).size(), std::size_t{1} << n);
    EXPECT_EQ(all_edges(n).size(), static_cast<std::size_t>(n) << (n ? n - 1 : 0));
  }
  EXPECT_EQ(all_faces2(3).size(), 6u);
  EXPECT_EQ(all_faces3(3).size(), 1u);
  EXPECT_EQ(all_faces2(4).size(), 24u);
}

// Every square anticommutes: the four signs around a 2-face sum to 1 mod 2.
TEST(SignAssignment, SquaresAnticommute) {
  for (int n = 2; n <= 6; ++n)
    for (const auto& f : all_faces2(n)) {
      int s = sign_assignment(f.top, f.mid_a) + sign_assignment(f.mid_a, f.bottom) +
              sign_assignment(f.top, f.mid_b) + sign_assignment(f.mid_b, f.bottom);
      EXPECT_EQ(s % 2, 1) << f.top.to_string() << " " << f.coord_lo << f.coord_hi;
    }
}

TEST(SignAssignment, CountsOnesBeforeTheChangedCoordinate) {
  EXPECT_EQ(sign_assignment(CubeVertex::parse("111"), CubeVertex::parse("110")), 0);
  EXPECT_EQ(sign_assignment(CubeVertex::parse("111"), CubeVertex::parse("101")), 1);
  EXPECT_EQ(sign_assignment(CubeVertex::parse("011"), CubeVertex::parse("010")), 1);
  EXPECT_THROW(sign_assignment(CubeVertex::parse("11"), CubeVertex::parse("00")), std::invalid_argument);
}

TEST(MaximalChains, CountIsFactorial) {
  auto top = CubeVertex::parse("1111");
  auto bottom = CubeVertex::parse("0000");
  auto chains = maximal_chains(top, bottom);
  EXPECT_EQ(chains.size(), 24u);
  std::set<std::vector<int>> orders;
  for (const auto& c : chains) {
    c.validate();
    orders.insert(c.coordinate_order());
  }
  EXPECT_EQ(orders.size(), 24u);
}

TEST(MaximalChains, SwapPathReachesTarget) {
  auto top = CubeVertex::parse("111");
  auto c1 = MaximalChain::from_order(top, {1, 2, 3});
  auto c2 = MaximalChain::from_order(top, {3, 2, 1});
  auto path = chain_swap_path(c1, c2);
  ASSERT_FALSE(path.empty());
  EXPECT_EQ(path.back().second, c2);
  EXPECT_EQ(path.size(), 3u);  // the reversal needs three adjacent swaps
  EXPECT_TRUE(chain_swap_path(c1, c1).empty());
}

TEST(FaceInclusion, ApplyAndPreimage) {
  FaceInclusion iota(CubeVertex::parse("0100"), {4, 1});
  EXPECT_EQ(iota.weight(), 1);
  EXPECT_EQ(iota.apply(CubeVertex::parse("10")).to_string(), "0101");
  EXPECT_EQ(iota.apply(CubeVertex::parse("01")).to_string(), "1100");
  EXPECT_EQ(iota.preimage(CubeVertex::parse("1101"))->to_string(), "11");
  EXPECT_FALSE(iota.preimage(CubeVertex::parse("0001")).has_value());
  // Order is preserved and gradings shift by |iota|.
  for (const auto& e : all_edges(2)) EXPECT_TRUE(is_edge(iota.apply(e.upper), iota.apply(e.lower)));
  EXPECT_THROW(FaceInclusion(CubeVertex::parse("0100"), {2, 1}), std::invalid_argument);
}
