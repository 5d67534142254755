#include <gtest/gtest.h>

#include "khb/burnside.hpp"

using namespace khb;

namespace {
SetPtr S(std::vector<std::string> v) { return make_set(std::move(v)); }
}  // namespace

TEST(FiniteSet, LookupAndEquality) {
  FiniteSet a({"x", "y"});
  EXPECT_EQ(a.index_of("y"), 1u);
  EXPECT_FALSE(a.find("z"));
  EXPECT_TRUE(a.same_elements(FiniteSet({"y", "x"})));
  EXPECT_THROW(FiniteSet({"x", "x"}), std::invalid_argument);
}

TEST(Correspondence, ComposeIsFiberProduct) {
  auto a = S({"a"}), b = S({"b1", "b2"}), c = S({"c"});
  Correspondence x(a, b, {{"x1", 0, 0}, {"x2", 0, 1}, {"x3", 0, 1}});
  Correspondence y(b, c, {{"y1", 0, 0}, {"y2", 1, 0}});
  Correspondence yx = compose(y, x);
  ASSERT_EQ(yx.size(), 3u);
  EXPECT_EQ(yx[0].id, "y1∘x1");
  EXPECT_EQ(yx[1].id, "y2∘x2");
  EXPECT_EQ(yx[2].id, "y2∘x3");
  EXPECT_EQ(linearize(yx), linearize(y) * linearize(x));
}

TEST(Correspondence, LinearizationCountsFibers) {
  auto a = S({"a1", "a2"}), b = S({"b"});
  Correspondence x(a, b, {{"e1", 0, 0}, {"e2", 0, 0}, {"e3", 1, 0}});
  auto m = linearize(x);
  EXPECT_EQ(m.rows(), 1u);
  EXPECT_EQ(m(0, 0), 2);
  EXPECT_EQ(m(0, 1), 1);
  EXPECT_EQ(x.fiber_size(0, 0), 2u);
  EXPECT_EQ(linearize(opposite(x)), m.transpose());
}

TEST(Correspondence, IdentityIsUnit) {
  auto a = S({"a1", "a2"}), b = S({"b"});
  Correspondence x(a, b, {{"e1", 0, 0}, {"e2", 1, 0}});
  EXPECT_EQ(linearize(compose(x, identity_correspondence(a))), linearize(x));
  EXPECT_EQ(linearize(compose(identity_correspondence(b), x)), linearize(x));
  EXPECT_EQ(linearize(set_map_correspondence(a, b, {0, 0})), linearize(x));
}

TEST(TwoMorphism, MustPreserveEndpoints) {
  auto a = S({"a"}), b = S({"b1", "b2"});
  Correspondence x(a, b, {{"x1", 0, 0}, {"x2", 0, 1}});
  Correspondence y(a, b, {{"y1", 0, 1}, {"y2", 0, 0}});
  EXPECT_TRUE(is_two_morphism(std::vector<std::size_t>{1, 0}, x, y));
  EXPECT_FALSE(is_two_morphism(std::vector<std::size_t>{0, 1}, x, y));
  EXPECT_TRUE(is_two_morphism(std::map<std::string, std::string>{{"x1", "y2"}, {"x2", "y1"}}, x, y));
  BijectionOver good{x, y, {1, 0}};
  EXPECT_NO_THROW(good.validate());
  EXPECT_EQ(good.image("x1"), "y2");
  EXPECT_EQ(good.inverse().map, (std::vector<std::size_t>{1, 0}));
  BijectionOver bad{x, y, {0, 1}};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Correspondence, RejectsOutOfRangeEndpoints) {
  EXPECT_THROW(Correspondence(S({"a"}), S({"b"}), {{"e", 0, 1}}), std::invalid_argument);
}
