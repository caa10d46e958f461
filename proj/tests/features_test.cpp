#include <gtest/gtest.h>

#include <cmath>

#include "road_builders.hpp"
#include "roadsel/features.hpp"

namespace roadsel {
namespace {

using testing::render_profile;

TEST(Summarize, HandComputed) {
  const Summary s = summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(s.max, 4.0);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(summarize({7.0, 1.0, 4.0}).median, 4.0);
  const Summary empty = summarize({});
  EXPECT_EQ(empty.median, 0.0);
  EXPECT_EQ(empty.std, 0.0);
  EXPECT_EQ(empty.max, 0.0);
}

TEST(Features, NamesFollowValueOrder) {
  const auto& names = feature_names();
  EXPECT_EQ(names.front(), "direct_distance");
  EXPECT_EQ(names[5], "total_angle");
  EXPECT_EQ(names.back(), "mean_pivot_off");
  FeatureVector fv;
  fv.direct_distance = 1;
  fv.num_r_turns = 4;
  fv.min_pivot_off = 15;
  const auto v = fv.values();
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[3], 4.0);
  EXPECT_EQ(v[14], 15.0);
}

TEST(Features, StraightRoadHasNoTurnFeatures) {
  const FeatureVector fv = extract_features(testing::straight_test(150.0));
  EXPECT_NEAR(fv.road_distance, 150.0, 1e-9);
  EXPECT_NEAR(fv.direct_distance, 150.0, 1e-9);
  EXPECT_EQ(fv.num_straights, 1);
  EXPECT_EQ(fv.num_l_turns, 0);
  EXPECT_EQ(fv.num_r_turns, 0);
  const auto v = fv.values();
  for (std::size_t i = 5; i < kFeatureCount; ++i) EXPECT_EQ(v[i], 0.0) << feature_names()[i];
}

TEST(Features, QuarterArc) {
  const RoadTest arc = testing::make_test(testing::arc_points(20.0, 90.0, 0.5));
  const FeatureVector fv = extract_features(arc);
  EXPECT_EQ(fv.num_l_turns, 1);
  EXPECT_EQ(fv.num_r_turns, 0);
  for (double a : {fv.total_angle, fv.median_angle, fv.max_angle, fv.min_angle, fv.mean_angle}) {
    EXPECT_NEAR(a, 90.0, 0.9);
  }
  for (double r : {fv.median_pivot_off, fv.max_pivot_off, fv.min_pivot_off, fv.mean_pivot_off}) {
    EXPECT_NEAR(r, 20.0, 0.2);
  }
  EXPECT_EQ(fv.std_angle, 0.0);
  EXPECT_EQ(fv.std_pivot_off, 0.0);
  EXPECT_NEAR(fv.road_distance, 10.0 * std::numbers::pi, 0.05);
  EXPECT_NEAR(fv.direct_distance, 20.0 * std::sqrt(2.0), 1e-9);
}

TEST(Features, TwoTurnsStatistics) {
  // Left turns of 60 and 120 degrees separated by a straight; expected
  // angle statistics: median 90, mean 90, std 30, total 180.
  const double r1 = 25.0;
  const double r2 = 30.0;
  const double deg = std::numbers::pi / 180.0;
  const RoadTest t = testing::make_test(render_profile(
      {{0.0, 30.0}, {1.0 / r1, 60.0 * deg * r1}, {0.0, 40.0}, {1.0 / r2, 120.0 * deg * r2}, {0.0, 30.0}}, 100.0,
      100.0, 0.0, 1.0));
  const FeatureVector fv = extract_features(t);
  EXPECT_EQ(fv.num_l_turns, 2);
  EXPECT_EQ(fv.num_r_turns, 0);
  EXPECT_EQ(fv.num_straights, 3);
  EXPECT_NEAR(fv.total_angle, 180.0, 1.8);
  EXPECT_NEAR(fv.median_angle, 90.0, 0.9);
  EXPECT_NEAR(fv.mean_angle, 90.0, 0.9);
  EXPECT_NEAR(fv.std_angle, 30.0, 0.6);
  EXPECT_NEAR(fv.min_angle, 60.0, 0.9);
  EXPECT_NEAR(fv.max_angle, 120.0, 1.2);
  // Spline transitions at the straights lengthen short turns slightly, so
  // radii are looser than angles.
  EXPECT_NEAR(fv.median_pivot_off, 27.5, 0.08 * 27.5);
  EXPECT_NEAR(fv.std_pivot_off, 2.5, 1.0);
  EXPECT_NEAR(fv.min_pivot_off, 25.0, 0.08 * 25.0);
  EXPECT_NEAR(fv.max_pivot_off, 30.0, 0.08 * 30.0);
  EXPECT_LT(fv.min_pivot_off, fv.max_pivot_off);
}

TEST(Features, RightTurnsCountSeparately) {
  const RoadTest t =
      testing::make_test(render_profile({{0.0, 20.0}, {-0.04, 40.0}, {0.0, 20.0}}, 100.0, 100.0, 0.0, 5.0));
  const FeatureVector fv = extract_features(t);
  EXPECT_EQ(fv.num_r_turns, 1);
  EXPECT_EQ(fv.num_l_turns, 0);
  EXPECT_GT(fv.total_angle, 0.0);
}

TEST(Features, CopiesLabelAndSimTime) {
  RoadTest t = testing::straight_test(80.0, "x");
  t.label = Label::unsafe;
  t.sim_time = 12.5;
  const FeatureVector fv = extract_features(t);
  EXPECT_EQ(fv.test_id, "x");
  EXPECT_EQ(fv.label, Label::unsafe);
  EXPECT_EQ(fv.sim_time, 12.5);
}

TEST(Features, SuiteRecordsFailures) {
  const std::vector<RoadTest> tests = {testing::straight_test(80.0, "a"),
                                       testing::make_test({Point3(0, 0, 0)}, "bad"),
                                       testing::straight_test(90.0, "c")};
  const auto out = extract_suite(tests);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].features);
  EXPECT_FALSE(out[1].features);
  EXPECT_EQ(out[1].test_id, "bad");
  EXPECT_FALSE(out[1].error.empty());
  EXPECT_TRUE(out[2].features);
}

}  // namespace
}  // namespace roadsel
