#include <gtest/gtest.h>

#include <random>

#include "khb/nat_trans.hpp"
#include "khb/totalization.hpp"
#include "support.hpp"

using namespace khb;
using khb::test::load_functor;

namespace {

CubeVertex V(const char* s) { return CubeVertex::parse(s); }

bool cone_identity(const NaturalTransformation& eta) {
  return isomorphic_by_labels(tot(eta.ambient), cone(tot_nat_trans(eta)), [](const std::string& s) { return s; });
}

}  // namespace

TEST(NatTrans, SliceInclusionSelectsTheFirstCoordinate) {
  auto s1 = slice_inclusion(2, 1);
  EXPECT_EQ(s1.apply(V("01")).to_string(), "101");
  auto s0 = slice_inclusion(2, 0);
  EXPECT_EQ(s0.apply(V("11")).to_string(), "011");
}

TEST(NatTrans, IdentityIsAQuasiIsoAndConeMatches) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    CubeFunctor f = khb::test::random_functor(1 + trial % 3, rng);
    auto eta = identity_transformation(f);
    EXPECT_EQ(eta.dim(), f.dim());
    EXPECT_TRUE(validate_coherence(eta.ambient).ok);
    EXPECT_TRUE(same_functor_data(eta.source(), f));
    EXPECT_TRUE(same_functor_data(eta.target(), f));
    auto m = tot_nat_trans(eta);
    EXPECT_TRUE(m.commutes());
    EXPECT_TRUE(is_quasi_iso(m));
    EXPECT_TRUE(cone_identity(eta));
  }
}

TEST(NatTrans, SubAndQuotientOfP) {
  auto p = load_functor("P").functor;
  auto s = make_subset(p, {{V("0"), "y"}});
  auto inc = sub_inclusion(p, s);
  auto q = quotient_functor(p, complement(s));
  for (const auto* eta : {&inc, &q.projection}) {
    EXPECT_TRUE(validate_coherence(eta->ambient).ok);
    EXPECT_TRUE(tot_nat_trans(*eta).commutes());
    EXPECT_TRUE(cone_identity(*eta));
  }
  // Z -> Tot(P) is not a quasi-isomorphism: H_0 differs.
  EXPECT_FALSE(is_quasi_iso(tot_nat_trans(inc)));
  EXPECT_EQ(q.quotient.total_elements(), 1u);
  EXPECT_EQ(inc.component(V("0")).size(), 1u);
  EXPECT_EQ(inc.component(V("1")).size(), 0u);
}

TEST(NatTrans, MismatchedComponentsAreRejected) {
  auto p = load_functor("P").functor;
  // A component at 1 without one at 0 cannot make the mixed face have equal composites.
  std::vector<std::vector<SpanElement>> comps(2);
  comps[1] = {{"c", 0, 0}};
  EXPECT_THROW(build_nat_trans(p, p, comps), std::invalid_argument);
  EXPECT_THROW(build_nat_trans(p, CubeFunctor(2), comps), std::invalid_argument);
}

TEST(NatTrans, GluingAlongTheTop) {
  auto p = load_functor("P").functor;
  auto s = make_subset(p, {{V("0"), "y"}});
  auto sub = sub_functor(p, s);
  auto eta = sub_inclusion(p, s);
  auto glued = glue_along_top(eta, eta);
  EXPECT_EQ(glued.h.dim(), 2);
  EXPECT_TRUE(validate_coherence(glued.h).ok);
  EXPECT_EQ(glued.h.total_elements(), sub.total_elements() + 2 * p.total_elements());
  EXPECT_TRUE(cone_identity(glued.theta));
  EXPECT_TRUE(cone_identity(glued.theta_prime));
}
