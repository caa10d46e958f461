#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "roadsel/error.hpp"
#include "roadsel/selection.hpp"
#include "synthetic.hpp"

namespace roadsel {
namespace {

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(TopK, OrdersByScore) {
  const std::vector<Scored> c = {{"a", 0.9}, {"b", 0.1}, {"c", 0.8}};
  EXPECT_EQ(select_top_k(c, 2), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(select_top_k(c, 10), (std::vector<std::size_t>{0, 2, 1}));
}

TEST(TopK, TiesGoToSmallerTestId) {
  const std::vector<Scored> c = {{"t3", 0.5}, {"t1", 0.5}, {"t2", 0.7}, {"t0", 0.5}};
  EXPECT_EQ(select_top_k(c, 3), (std::vector<std::size_t>{2, 3, 1}));
}

TEST(TopK, InvariantUnderPermutation) {
  std::vector<Scored> c;
  Rng rng(3);
  for (int i = 0; i < 40; ++i) c.push_back({"t" + std::to_string(i), std::floor(rng.uniform() * 8) / 8});
  auto ids = [](const std::vector<Scored>& v, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back(v[i].test_id);
    return out;
  };
  const auto want = ids(c, select_top_k(c, 10));
  std::vector<Scored> shuffled = c;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 13, shuffled.end());
  EXPECT_EQ(ids(shuffled, select_top_k(shuffled, 10)), want);
}

TEST(TopK, RejectsZero) {
  const std::vector<Scored> c = {{"a", 0.9}};
  EXPECT_THROW(select_top_k(c, 0), Error);
}

TEST(RandomBaseline, DistinctAndSeeded) {
  const auto a = random_baseline(50, 10, 4);
  EXPECT_EQ(a, random_baseline(50, 10, 4));
  EXPECT_NE(a, random_baseline(50, 10, 5));
  const auto s = sorted(a);
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  EXPECT_LT(s.back(), 50u);
  EXPECT_EQ(random_baseline(3, 10, 1).size(), 3u);
}

TEST(RandomBaseline, UniformInclusion) {
  // Each of 40 items should appear in a 10-subset with probability 0.25.
  std::vector<int> hits(40, 0);
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    for (std::size_t i : random_baseline(40, 10, derive_seed(99, static_cast<std::uint64_t>(d)))) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(h / static_cast<double>(draws), 0.25, 0.02);
}

TEST(CostEffectiveness, PerMille) {
  EXPECT_DOUBLE_EQ(cost_effectiveness(4, 1000.0), 0.004);
  EXPECT_EQ(format_per_mille(cost_effectiveness(4, 1000.0)), "4.0‰");
  EXPECT_EQ(format_per_mille(0.0), "0.0‰");
  EXPECT_EQ(format_per_mille(0.00125), "1.3‰");
  EXPECT_EQ(format_per_mille(0.01234), "12.3‰");
  EXPECT_THROW(cost_effectiveness(1, 0.0), Error);
}

TEST(Summarize, CountsSelectedOnly) {
  const std::vector<PoolEntry> pool = {
      {"a", 0.9, true, 100.0}, {"b", 0.1, false, 50.0}, {"c", 0.8, true, 150.0}};
  const std::vector<std::size_t> chosen = {0, 1};
  const SelectionResult r = summarize_selection(pool, chosen);
  EXPECT_EQ(r.unsafe_found, 1u);
  EXPECT_DOUBLE_EQ(r.total_sim_time, 150.0);
  EXPECT_DOUBLE_EQ(r.cost_effectiveness, 1.0 / 150.0);
  ASSERT_EQ(r.selected.size(), 2u);
  EXPECT_EQ(r.selected[1].test_id, "b");
}

TEST(Summarize, AllUnsafeEqualTimesMakesSelectionIrrelevant) {
  std::vector<PoolEntry> pool;
  std::vector<Scored> candidates;
  for (int i = 0; i < 30; ++i) {
    pool.push_back({"t" + std::to_string(i), i / 30.0, true, 40.0});
    candidates.push_back({pool.back().test_id, pool.back().score});
  }
  const double guided = summarize_selection(pool, select_top_k(candidates, 10)).cost_effectiveness;
  const double random = summarize_selection(pool, random_baseline(30, 10, 2)).cost_effectiveness;
  EXPECT_DOUBLE_EQ(guided, 1.0 / 40.0);
  EXPECT_DOUBLE_EQ(random, guided);
}

/// Feature vectors whose label is determined by max_angle, with sim_time
/// unrelated to the label.
std::vector<FeatureVector> learnable_rows(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector& fv = rows[i];
    char id[32];
    std::snprintf(id, sizeof id, "test_%04zu", i);
    fv.test_id = id;
    fv.direct_distance = rng.uniform(50, 300);
    fv.road_distance = fv.direct_distance + rng.uniform(0, 200);
    fv.num_l_turns = static_cast<int>(rng.integer(0, 4));
    fv.num_r_turns = static_cast<int>(rng.integer(0, 4));
    fv.max_angle = rng.uniform(0, 180);
    fv.mean_angle = fv.max_angle * rng.uniform(0.3, 1.0);
    fv.min_pivot_off = rng.uniform(8, 80);
    fv.sim_time = rng.uniform(10, 40);
    fv.label = fv.max_angle > 120 ? Label::unsafe : Label::safe;
  }
  return rows;
}

TEST(Predict, ScoresInOrderAndRejectsWrongArity) {
  const auto rows = learnable_rows(100, 1);
  const ml::TrainedModel m = ml::train(ml::Family::decision_tree, make_dataset(rows, true), {}, 0);
  const auto preds = predict_tests(m, rows);
  ASSERT_EQ(preds.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(preds[i].test_id, rows[i].test_id);
    EXPECT_EQ(preds[i].predicted, rows[i].label);
  }
  const ml::TrainedModel small =
      ml::train(ml::Family::naive_bayes, testing::threshold_dataset(30, 3, 0, 0.5, 1), {}, 0);
  EXPECT_THROW(predict_tests(small, rows), Error);
}

TEST(MakeDataset, UnlabeledRows) {
  auto rows = learnable_rows(5, 2);
  rows[3].label = Label::unlabeled;
  EXPECT_THROW(make_dataset(rows, true), Error);
  EXPECT_EQ(make_dataset(rows, false).y[3], 0);
}

TEST(CostEffectivenessStudy, GuidedBeatsRandomOnLearnableData) {
  const auto rows = learnable_rows(300, 5);
  ml::Hyperparams hp;
  hp.forest_trees = 20;
  hp.boosting_rounds = 30;
  const std::vector<ml::Family> families(ml::kAllFamilies.begin(), ml::kAllFamilies.end());
  const CostEffectivenessReport r = evaluate_cost_effectiveness(rows, families, 10, 5, 3, hp);
  EXPECT_EQ(r.pool_size, 60u);
  ASSERT_EQ(r.rows.size(), 6u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.guided.size(), 5u);
    EXPECT_GT(row.guided_mean, row.baseline_mean) << ml::to_string(row.family);
  }
}

TEST(CostEffectivenessStudy, RequiresSimTime) {
  auto rows = learnable_rows(50, 6);
  rows[7].sim_time.reset();
  const std::vector<ml::Family> families = {ml::Family::naive_bayes};
  try {
    evaluate_cost_effectiveness(rows, families, 10, 1, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_data);
  }
}

}  // namespace
}  // namespace roadsel
