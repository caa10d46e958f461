#include <gtest/gtest.h>

#include <set>

#include "roadsel/error.hpp"
#include "roadsel/features.hpp"
#include "roadsel/generator.hpp"

namespace roadsel {
namespace {

TEST(Generator, ExactCountAllValidAndUnlabeled) {
  GeneratorConfig cfg;
  cfg.count = 25;
  cfg.seed = 3;
  const auto tests = generate_tests(cfg);
  ASSERT_EQ(tests.size(), 25u);
  std::set<std::string> ids;
  for (const RoadTest& t : tests) {
    EXPECT_TRUE(validate(t, cfg.map_size).valid()) << t.test_id;
    EXPECT_EQ(t.label, Label::unlabeled);
    EXPECT_FALSE(t.sim_time);
    EXPECT_EQ(t.lane_width, cfg.lane_width);
    ids.insert(t.test_id);
  }
  EXPECT_EQ(ids.size(), 25u);
  EXPECT_EQ(tests.front().test_id, "test_0000");
  EXPECT_EQ(tests.back().test_id, "test_0024");
}

TEST(Generator, SameSeedSameRoads) {
  GeneratorConfig cfg;
  cfg.count = 10;
  cfg.seed = 99;
  const auto a = generate_tests(cfg);
  const auto b = generate_tests(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].control_points, b[i].control_points);
  cfg.seed = 100;
  EXPECT_NE(generate_tests(cfg)[0].control_points, a[0].control_points);
}

TEST(Generator, PrefixStableAcrossCounts) {
  // Per-test derived seeds: test i does not depend on how many follow it.
  GeneratorConfig cfg;
  cfg.count = 3;
  const auto few = generate_tests(cfg);
  cfg.count = 8;
  const auto many = generate_tests(cfg);
  for (std::size_t i = 0; i < few.size(); ++i) EXPECT_EQ(few[i].control_points, many[i].control_points);
}

TEST(Generator, ZeroKappaGivesStraightRoads) {
  GeneratorConfig cfg;
  cfg.count = 10;
  cfg.kappa_bound = 0.0;
  for (const RoadTest& t : generate_tests(cfg)) {
    const FeatureVector fv = extract_features(t);
    EXPECT_EQ(fv.num_l_turns + fv.num_r_turns, 0) << t.test_id;
    EXPECT_EQ(fv.num_straights, 1);
    EXPECT_NEAR(fv.direct_distance, fv.road_distance, 1e-6 * fv.road_distance);
  }
}

TEST(Generator, ControlPointSpacing) {
  GeneratorConfig cfg;
  cfg.count = 5;
  for (const RoadTest& t : generate_tests(cfg)) {
    const auto& p = t.control_points;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) EXPECT_NEAR((p[i] - p[i - 1]).norm(), 10.0, 0.5);
    EXPECT_GE((p.back() - p[p.size() - 2]).norm(), 1.0);
  }
}

TEST(Generator, Ids) {
  EXPECT_EQ(generated_test_id(7, 5), "test_0007");
  EXPECT_EQ(generated_test_id(12345, 20000), "test_12345");
  EXPECT_EQ(generated_test_id(5, 100000), "test_000005");
}

TEST(Generator, RejectsBadConfig) {
  GeneratorConfig cfg;
  cfg.count = 0;
  EXPECT_THROW(generate_tests(cfg), Error);
  cfg = {};
  cfg.min_segments = 5;
  cfg.max_segments = 4;
  EXPECT_THROW(check_config(cfg), Error);
  cfg = {};
  cfg.kappa_bound = 0.2;  // 0.2 * 20 m > pi
  EXPECT_THROW(check_config(cfg), Error);
}

TEST(Generator, ExhaustsBudget) {
  GeneratorConfig cfg;
  cfg.count = 1;
  cfg.map_size = 15.0;  // no 80 m road fits
  try {
    generate_tests(cfg);
    FAIL() << "expected generation_exhausted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::generation_exhausted);
  }
}

}  // namespace
}  // namespace roadsel
