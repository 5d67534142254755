#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "khb/khovanov.hpp"
#include "oracle/kh_oracle.hpp"
#include "support.hpp"

using namespace khb;

namespace {

std::vector<KhRow> from_oracle(const std::vector<oracle::Row>& rows) {
  std::vector<KhRow> out;
  for (const auto& r : rows) out.push_back({r.i, r.j, r.rank, r.torsion});
  return out;
}

std::string read(const std::string& name) {
  std::ifstream in(khb::test::corpus_path("pd/" + name + ".pd"));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Oracle, SmallMatrixFactors) {
  EXPECT_EQ(oracle::invariant_factors({{2, 0}, {0, 3}}), (std::vector<std::int64_t>{1, 6}));
  EXPECT_EQ(oracle::invariant_factors({{0}}), std::vector<std::int64_t>{});
}

TEST(Oracle, AgreesOnEveryDiagram) {
  for (const auto& name : khb::test::corpus_diagrams()) {
    auto text = read(name);
    auto cx = oracle::khovanov_complex(oracle::parse(text));
    auto f = build_khovanov_functor(parse_pd(text));
    EXPECT_EQ(cx.n_plus, f.n_plus) << name;
    EXPECT_EQ(cx.n_minus, f.n_minus) << name;
    EXPECT_EQ(from_oracle(oracle::homology(cx)), khovanov_homology(f)) << name;
  }
}

TEST(Oracle, AgreesOnReducedTheory) {
  for (auto [name, p] : std::vector<std::pair<std::string, int>>{
           {"unknot_loop", 1}, {"trefoil_left", 1}, {"trefoil_right", 3}, {"figure_eight", 5}, {"hopf", 1},
           {"hopf", 3}, {"granny_knot", 2}}) {
    auto text = read(name);
    auto cx = oracle::khovanov_complex(oracle::parse(text), p);
    EXPECT_EQ(from_oracle(oracle::homology(cx)), khovanov_homology(reduced_functor(parse_pd(text), p)))
        << name << " at " << p;
  }
}
