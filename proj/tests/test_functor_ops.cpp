#include <gtest/gtest.h>

#include <random>

#include "khb/functor_ops.hpp"
#include "khb/totalization.hpp"
#include "support.hpp"

using namespace khb;
using khb::test::load_functor;

namespace {
CubeVertex V(const char* s) { return CubeVertex::parse(s); }
}  // namespace

TEST(Coproduct, PrefixesElementsAndStaysCoherent) {
  auto p = load_functor("P").functor;
  auto c = coproduct(p, p);
  EXPECT_EQ(c.set(V("1")).elements(), (std::vector<std::string>{"0:x", "1:x"}));
  EXPECT_EQ(c.edge(V("1"), V("0")).size(), 4u);
  EXPECT_TRUE(validate_coherence(c).ok);
  auto h = homology(tot(c));
  EXPECT_EQ(h[0].torsion, (std::vector<std::int64_t>{2, 2}));
}

TEST(Product, SizesAndHomologyMatchTensor) {
  auto p = load_functor("P").functor;
  auto pp = product(p, p);
  ASSERT_EQ(pp.dim(), 2);
  EXPECT_EQ(pp.set(V("10")).elements(), (std::vector<std::string>{"(x,y)"}));
  EXPECT_EQ(pp.edge(V("11"), V("01")).size(), 2u);
  EXPECT_EQ(pp.face_composite(CubeFace2::at(V("11"), 1, 2), true).size(), 4u);
  EXPECT_TRUE(validate_coherence(pp).ok);
  auto t = tot(p);
  EXPECT_EQ(homology(tot(pp)), homology(tensor(t, t)));
}

TEST(Product, DimensionZeroFactorIsACopy) {
  CubeFunctor pt(0);
  pt.set_set(CubeVertex::zeros(0), make_set({"*"}));
  auto p = load_functor("P").functor;
  auto q = product(pt, p);
  EXPECT_EQ(q.dim(), 1);
  EXPECT_EQ(linearize(q.edge(V("1"), V("0"))), linearize(p.edge(V("1"), V("0"))));
}

TEST(FaceInclusions, RestrictUndoesExtend) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + trial % 3;
    int big = n + trial % 3;
    CubeFunctor f = khb::test::random_functor(n, rng);
    FaceInclusion iota = khb::test::random_face_inclusion(n, big, rng);
    CubeFunctor e = extend_along_face_inclusion(f, iota);
    EXPECT_EQ(e.dim(), big);
    EXPECT_TRUE(validate_coherence(e).ok);
    EXPECT_TRUE(same_functor_data(restrict_along_face_inclusion(e, iota), f));
    // Off the image everything is empty.
    for (const auto& w : all_vertices(big))
      if (!iota.preimage(w)) {
        EXPECT_TRUE(e.set(w).empty());
      }
  }
}

TEST(FaceInclusions, RestrictRejectsSupportOffTheImage) {
  auto pp = product(load_functor("P").functor, load_functor("P").functor);
  FaceInclusion iota(V("00"), {1});
  EXPECT_THROW(restrict_along_face_inclusion(pp, iota), std::invalid_argument);
  EXPECT_NO_THROW(pull_back(pp, iota));
}

TEST(SubFunctor, SubcomplexAndQuotient) {
  auto p = load_functor("P").functor;
  auto bottom = make_subset(p, {{V("0"), "y"}});
  EXPECT_TRUE(spans_subcomplex(p, bottom));
  EXPECT_FALSE(spans_subcomplex(p, complement(bottom)));
  auto sub = sub_functor(p, bottom);
  EXPECT_EQ(sub.total_elements(), 1u);
  EXPECT_EQ(sub.edge(V("1"), V("0")).size(), 0u);
  auto q = quotient_restriction(p, complement(bottom));
  EXPECT_EQ(q.set(V("1")).size(), 1u);
  EXPECT_TRUE(q.set(V("0")).empty());
  EXPECT_THROW(sub_functor(p, complement(bottom)), std::invalid_argument);
  EXPECT_EQ(full_subset(p)[1].size(), 1u);
}

TEST(SameFunctorData, DetectsMatchingDifferences) {
  auto f = load_functor("rp2_wedge_G").functor;
  EXPECT_TRUE(same_functor_data(f, f));
  for (const auto& face : all_faces2(f.dim())) {
    auto a = f.face_composite_correspondence(face, true);
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a.fiber_size(a[k].s, a[k].t) >= 2) {
        EXPECT_FALSE(same_functor_data(f, khb::test::flip_fiber(f, face, k)));
        return;
      }
  }
  GTEST_SKIP() << "no fiber of size two";
}

TEST(UniqueMatching, OnlyForSingletonFibers) {
  auto pp = product(load_functor("P").functor, load_functor("P").functor);
  auto face = CubeFace2::at(V("11"), 1, 2);
  EXPECT_FALSE(unique_matching(pp, face).has_value());
  auto me = load_functor("multiple_extend").functor;
  EXPECT_FALSE(unique_matching(me, face).has_value());
  CubeFunctor s(2);
  for (const auto& v : all_vertices(2)) s.set_set(v, make_set({"p"}));
  for (const auto& e : all_edges(2)) s.set_edge(e.upper, e.lower, {{"e" + std::to_string(e.coordinate()), 0, 0}});
  auto m = unique_matching(s, face);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(*m, (std::vector<std::size_t>{0}));
}
