#include "roadsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "roadsel/error.hpp"
#include "roadsel/ml/evaluation.hpp"
#include "roadsel/rng.hpp"

namespace roadsel {

std::vector<Prediction> predict_tests(const ml::TrainedModel& model, std::span<const FeatureVector> features) {
  if (model.features() != kFeatureCount) {
    throw Error(ErrorKind::invalid_data, "model expects " + std::to_string(model.features()) +
                                             " features, road features have " +
                                             std::to_string(kFeatureCount));
  }
  std::vector<Prediction> out;
  out.reserve(features.size());
  Eigen::VectorXd row(static_cast<Eigen::Index>(kFeatureCount));
  for (const FeatureVector& fv : features) {
    const auto values = fv.values();
    for (std::size_t j = 0; j < kFeatureCount; ++j) row[static_cast<Eigen::Index>(j)] = values[j];
    const double s = ml::score(model, row);
    out.push_back({fv.test_id, s, s >= 0.5 ? Label::unsafe : Label::safe});
  }
  return out;
}

std::vector<std::size_t> select_top_k(std::span<const Scored> candidates, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::invalid_config, "k must be >= 1");
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (candidates[a].score != candidates[b].score) {
                        return candidates[a].score > candidates[b].score;
                      }
                      if (candidates[a].test_id != candidates[b].test_id) {
                        return candidates[a].test_id < candidates[b].test_id;
                      }
                      return a < b;
                    });
  order.resize(take);
  return order;
}

std::vector<std::size_t> random_baseline(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::invalid_config, "k must be >= 1");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  const std::size_t take = std::min(k, n);
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) std::swap(pool[i], pool[i + rng.index(n - i)]);
  pool.resize(take);
  return pool;
}

double cost_effectiveness(std::size_t unsafe_found, double total_sim_time) {
  if (!(total_sim_time > 0.0) || !std::isfinite(total_sim_time)) {
    throw Error(ErrorKind::invalid_data, "total simulation time must be positive");
  }
  return static_cast<double>(unsafe_found) / total_sim_time;
}

SelectionResult summarize_selection(std::span<const PoolEntry> pool, std::span<const std::size_t> chosen) {
  SelectionResult r;
  for (std::size_t i : chosen) {
    const PoolEntry& e = pool[i];
    r.selected.push_back({e.test_id, e.score});
    r.unsafe_found += e.unsafe ? 1 : 0;
    r.total_sim_time += e.sim_time;
  }
  r.cost_effectiveness = cost_effectiveness(r.unsafe_found, r.total_sim_time);
  return r;
}

std::string format_per_mille(double ce) {
  // The small nudge keeps decimal halves such as 0.00125 from rounding down
  // through binary representation error.
  const double tenths = std::floor(ce * 10000.0 + 0.5 + 1e-9);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f‰", tenths / 10.0);
  return buf;
}

ml::Dataset make_dataset(std::span<const FeatureVector> rows, bool require_labels) {
  ml::Dataset data;
  data.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kFeatureCount));
  data.y.resize(static_cast<Eigen::Index>(rows.size()));
  data.feature_names.assign(feature_names().begin(), feature_names().end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto values = rows[i].values();
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      data.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[j];
    }
    if (require_labels && rows[i].label == Label::unlabeled) {
      throw Error(ErrorKind::invalid_data, "test '" + rows[i].test_id + "' is unlabeled");
    }
    data.y[static_cast<Eigen::Index>(i)] = rows[i].label == Label::unsafe ? 1 : 0;
  }
  return data;
}

CostEffectivenessReport evaluate_cost_effectiveness(std::span<const FeatureVector> rows,
                                                    std::span<const ml::Family> families, std::size_t k,
                                                    std::size_t repetitions, std::uint64_t seed,
                                                    const ml::Hyperparams& hp) {
  if (k < 1) throw Error(ErrorKind::invalid_config, "k must be >= 1");
  if (repetitions < 1) throw Error(ErrorKind::invalid_config, "repetitions must be >= 1");
  for (const FeatureVector& fv : rows) {
    if (!fv.sim_time) throw Error(ErrorKind::invalid_data, "test '" + fv.test_id + "' has no sim_time");
  }
  const ml::Dataset data = make_dataset(rows, true);
  ml::check_dataset(data, true);

  CostEffectivenessReport report;
  report.k = k;
  report.repetitions = repetitions;
  for (ml::Family f : families) report.rows.push_back({f, {}, {}, 0.0, 0.0});

  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    const std::uint64_t split_seed = derive_seed(seed, rep);
    const ml::SplitIndices split = ml::stratified_split(data.y, 0.8, split_seed);
    if (rep == 0) report.pool_size = split.test.size();
    const ml::Dataset train_set = data.subset(split.train);
    const ml::Dataset pool_set = data.subset(split.test);

    for (std::size_t f = 0; f < families.size(); ++f) {
      const ml::TrainedModel model = ml::train(families[f], train_set, hp, derive_seed(split_seed, f));
      const Eigen::VectorXd scores = ml::score_all(model, pool_set.x);
      std::vector<PoolEntry> pool;
      std::vector<Scored> candidates;
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        const FeatureVector& fv = rows[split.test[i]];
        pool.push_back({fv.test_id, scores[static_cast<Eigen::Index>(i)], fv.label == Label::unsafe,
                        *fv.sim_time});
        candidates.push_back({fv.test_id, pool.back().score});
      }
      const auto guided = summarize_selection(pool, select_top_k(candidates, k));
      const auto baseline =
          summarize_selection(pool, random_baseline(pool.size(), k, derive_seed(split_seed, 100 + f)));
      report.rows[f].guided.push_back(guided.cost_effectiveness);
      report.rows[f].baseline.push_back(baseline.cost_effectiveness);
    }
  }
  for (CostEffectivenessRow& row : report.rows) {
    const double n = static_cast<double>(repetitions);
    row.guided_mean = std::accumulate(row.guided.begin(), row.guided.end(), 0.0) / n;
    row.baseline_mean = std::accumulate(row.baseline.begin(), row.baseline.end(), 0.0) / n;
  }
  return report;
}

}  // namespace roadsel
