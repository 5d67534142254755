#include <gtest/gtest.h>

#include "khb/isomorphism.hpp"
#include "khb/khovanov.hpp"
#include "khb/totalization.hpp"
#include "support.hpp"

using namespace khb;
using khb::test::load_golden;
using khb::test::load_pd;

namespace {

std::vector<KhRow> kh(const std::string& name) { return khovanov_homology(build_khovanov_functor(load_pd(name))); }

std::size_t torsion_summands(const std::vector<KhRow>& rows, std::int64_t order) {
  std::size_t n = 0;
  for (const auto& r : rows)
    for (auto t : r.torsion) n += t == order;
  return n;
}

}  // namespace

TEST(PD, ParsesBothSyntaxes) {
  auto a = parse_pd("PD[X[1,5,2,4], X(3,1,4,6), X[5,3,6,2]]");
  EXPECT_EQ(a.crossing_count(), 3);
  EXPECT_EQ(a.crossings[1], (std::array<int, 4>{3, 1, 4, 6}));
  auto b = pd_from_json(pd_to_json(a));
  EXPECT_EQ(a, b);
  EXPECT_EQ(parse_pd(to_string(a)), a);
  auto loop = parse_pd("PD[Loop[1]]");
  EXPECT_EQ(loop.free_loops, 1);
  EXPECT_EQ(loop.free_loop_label(0), 1);
  EXPECT_EQ(parse_pd(R"({"crossings":[[1,1,2,2]],"free_loops":1})").free_loops, 1);
}

TEST(PD, RejectsMalformedCodes) {
  EXPECT_THROW(parse_pd("PD[X[1,2,3]]"), std::invalid_argument);
  EXPECT_THROW(parse_pd("PD[X[1,2,3,4]]"), std::invalid_argument);  // labels once each
  EXPECT_THROW(parse_pd("X[1,1,2,2]"), std::invalid_argument);
  EXPECT_THROW(parse_pd("PD[X[1,a,2,2]]"), std::invalid_argument);
}

TEST(PD, CrossingSignsAreMirrored) {
  auto l = crossing_signs(load_pd("trefoil_left"));
  auto r = crossing_signs(load_pd("trefoil_right"));
  EXPECT_EQ(l.n_plus + l.n_minus, 3);
  EXPECT_EQ(l.n_plus, r.n_minus);
  EXPECT_EQ(l.n_minus, r.n_plus);
  auto f8 = crossing_signs(load_pd("figure_eight"));
  EXPECT_EQ(f8.n_plus, 2);
  EXPECT_EQ(f8.n_minus, 2);
  auto kp = crossing_signs(load_pd("unknot_kink_positive"));
  auto kn = crossing_signs(load_pd("unknot_kink_negative"));
  EXPECT_EQ(kp.n_plus, 1);
  EXPECT_EQ(kn.n_minus, 1);
}

TEST(Resolution, CircleCounts) {
  auto pd = load_pd("trefoil_left");
  EXPECT_EQ(resolve(pd, CubeVertex::parse("000")).circles.size() + resolve(pd, CubeVertex::parse("111")).circles.size(),
            5u);  // 2 + 3 in one order or the other
  auto loop = resolve(load_pd("kink_union_loop"), CubeVertex::parse("0"));
  EXPECT_TRUE(loop.circles.back().free_loop);
}

TEST(Functor, CorpusDiagramsAreCoherentAndGraded) {
  for (const auto& name : khb::test::corpus_diagrams()) {
    auto f = build_khovanov_functor(load_pd(name), {.skip_validation = true});
    EXPECT_TRUE(validate_coherence(f.stable.functor).ok) << name;
    EXPECT_TRUE(preserves_quantum_grading(f)) << name;
    EXPECT_TRUE(tot(f.stable).d_squared_zero()) << name;
  }
}

TEST(Functor, ParallelBuildIsIdentical) {
  auto pd = load_pd("figure_eight_sum_kink");
  auto serial = build_khovanov_functor(pd);
  auto parallel = build_khovanov_functor(pd, {.jobs = 4});
  EXPECT_TRUE(same_functor_data(serial.stable.functor, parallel.stable.functor));
  EXPECT_EQ(khovanov_homology(serial, 1), khovanov_homology(parallel, 4));
}

TEST(Ladybug, DetectedExactlyOnFibersOfSizeTwo) {
  for (const char* name : {"unlink_r2", "r2_sum_trefoil", "r2_sum_r2", "trefoil_left", "figure_eight"}) {
    auto pd = load_pd(name);
    auto f = build_khovanov_functor(pd).stable.functor;
    std::size_t detected = 0, double_fibers = 0;
    for (const auto& face : all_faces2(pd.crossing_count())) {
      auto gx = generators(pd, face.top);
      auto gz = generators(pd, face.bottom);
      auto a = f.face_composite_correspondence(face, true);
      auto b = f.face_composite_correspondence(face, false);
      for (std::size_t i = 0; i < gx.size(); ++i)
        for (std::size_t k = 0; k < gz.size(); ++k) {
          bool lady = detect_ladybug(pd, face, gx[i], gz[k]).has_value();
          std::size_t na = 0, nb = 0;
          for (const auto& e : a.elements()) na += e.s == i && e.t == k;
          for (const auto& e : b.elements()) nb += e.s == i && e.t == k;
          EXPECT_EQ(na, nb);
          // The configuration test ignores the other circles, so only
          // nonempty fibers are compared.
          if (na > 0) {
            EXPECT_EQ(lady, na == 2) << name << " " << describe_face(face);
            detected += lady;
          }
          double_fibers += na == 2;
        }
    }
    EXPECT_EQ(detected, double_fibers) << name;
    const std::string n = name;
    if (n.find("r2") != std::string::npos) {
      EXPECT_GT(detected, 0u) << name;
    }
  }
}

TEST(Homology, UnknotDiagramsAgree) {
  std::vector<KhRow> unknot{{0, -1, 1, {}}, {0, 1, 1, {}}};
  for (const char* name : {"unknot_loop", "unknot_kink_positive", "unknot_kink_negative", "unknot_two_kinks"})
    EXPECT_EQ(kh(name), unknot) << name;
}

TEST(Homology, MatchesGoldens) {
  for (const auto& name : khb::test::corpus_diagrams()) EXPECT_EQ(kh(name), load_golden(name)) << name;
}

TEST(Homology, TrefoilHasOneTwoTorsionSummand) {
  EXPECT_EQ(torsion_summands(kh("trefoil_left"), 2), 1u);
  EXPECT_EQ(torsion_summands(kh("trefoil_right"), 2), 1u);
}

TEST(Homology, TableJsonRoundTrip) {
  auto rows = kh("figure_eight");
  EXPECT_EQ(kh_table_from_json(kh_table_to_json(rows)), rows);
  EXPECT_FALSE(format_kh_table(rows).empty());
}

TEST(Reduced, UnknotAndTrefoil) {
  auto u = khovanov_homology(reduced_functor(load_pd("unknot_loop"), 1));
  EXPECT_EQ(u, (std::vector<KhRow>{{0, 0, 1, {}}}));
  auto t = khovanov_homology(reduced_functor(load_pd("trefoil_left"), 1));
  std::size_t rank = 0;
  for (const auto& r : t) {
    rank += r.rank;
    EXPECT_TRUE(r.torsion.empty());
  }
  EXPECT_EQ(rank, 3u);
  EXPECT_EQ(t, load_golden("trefoil_left_reduced"));
}

TEST(Reduced, BasepointChoiceDoesNotMatterForKnots) {
  auto pd = load_pd("figure_eight");
  auto base = khovanov_homology(reduced_functor(pd, 1));
  for (int p : pd.arc_labels()) EXPECT_EQ(khovanov_homology(reduced_functor(pd, p)), base) << p;
  EXPECT_THROW(reduced_functor(pd, 99), std::invalid_argument);
}

TEST(Operations, DisjointUnionIsProduct) {
  auto k = load_pd("unknot_kink_positive");
  auto u = disjoint_union_pd(k, k);
  EXPECT_EQ(u, load_pd("kink_union_kink"));
  auto parts = split_by_quantum(build_khovanov_functor(u));
  auto kp = split_by_quantum(build_khovanov_functor(k));
  EXPECT_TRUE(khb::test::quantum_parts_isomorphic(parts, kp, kp));
}

TEST(Operations, ReducedUnionWithALoop) {
  auto k = load_pd("unknot_kink_positive");
  auto loop = load_pd("unknot_loop");
  auto u = disjoint_union_pd(k, loop);
  auto lhs = split_by_quantum(reduced_functor(u, 1));
  auto a = split_by_quantum(reduced_functor(k, 1));
  auto b = split_by_quantum(build_khovanov_functor(loop));
  EXPECT_TRUE(khb::test::quantum_parts_isomorphic(lhs, a, b));
}

TEST(Operations, ReducedConnectedSum) {
  auto k = load_pd("unknot_kink_positive");
  auto sum = connect_sum_pd(k, 1, k, 1);
  auto lhs = split_by_quantum(reduced_functor(sum.pd, sum.basepoint));
  auto a = split_by_quantum(reduced_functor(k, 1));
  EXPECT_TRUE(khb::test::quantum_parts_isomorphic(lhs, a, a));
  EXPECT_THROW(connect_sum_pd(k, 7, k, 1), std::invalid_argument);
}
