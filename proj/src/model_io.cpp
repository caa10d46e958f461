#include "roadsel/model_io.hpp"

#include <json.hpp>

#include "roadsel/error.hpp"
#include "roadsel/store.hpp"

namespace roadsel {

using nlohmann::json;

namespace {

struct Reader {
  std::string source;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::invalid_data, source + ": " + msg);
  }

  const json& at(const json& j, const char* key) const {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
    return j.at(key);
  }

  double number(const json& j) const {
    if (!j.is_number()) fail("expected a number");
    return j.get<double>();
  }

  int integer(const json& j) const {
    if (!j.is_number_integer()) fail("expected an integer");
    return j.get<int>();
  }

  Eigen::VectorXd vector(const json& j) const {
    if (!j.is_array()) fail("expected an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i]);
    return v;
  }

  Eigen::MatrixXd matrix(const json& j, Eigen::Index cols) const {
    if (!j.is_array()) fail("expected an array of rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
      const Eigen::VectorXd row = vector(j[r]);
      if (row.size() != cols) fail("matrix row has wrong length");
      m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
  }

  ml::Tree tree(const json& j, Eigen::Index features) const {
    if (!j.is_array()) fail("tree must be an array of nodes");
    ml::Tree t;
    for (const json& n : j) {
      ml::TreeNode node;
      node.feature = integer(at(n, "feature"));
      node.threshold = number(at(n, "threshold"));
      node.left = integer(at(n, "left"));
      node.right = integer(at(n, "right"));
      node.value = number(at(n, "value"));
      node.impurity = number(at(n, "impurity"));
      node.weight = number(at(n, "weight"));
      t.nodes.push_back(node);
    }
    // Children must point forward so traversal always terminates.
    const int count = static_cast<int>(t.nodes.size());
    for (int i = 0; i < count; ++i) {
      const ml::TreeNode& n = t.nodes[static_cast<std::size_t>(i)];
      if (n.feature < 0) continue;
      if (n.feature >= features || n.left <= i || n.right <= i || n.left >= count || n.right >= count) {
        fail("inconsistent tree node " + std::to_string(i));
      }
    }
    if (t.nodes.empty()) fail("empty tree");
    return t;
  }

  std::vector<ml::Tree> trees(const json& j, Eigen::Index features) const {
    if (!j.is_array()) fail("expected an array of trees");
    std::vector<ml::Tree> out;
    for (const json& t : j) out.push_back(tree(t, features));
    return out;
  }
};

json to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return a;
}

json to_json(const ml::Tree& t) {
  json a = json::array();
  for (const ml::TreeNode& n : t.nodes) {
    a.push_back({{"feature", n.feature},
                 {"threshold", n.threshold},
                 {"left", n.left},
                 {"right", n.right},
                 {"value", n.value},
                 {"impurity", n.impurity},
                 {"weight", n.weight}});
  }
  return a;
}

json to_json(const std::vector<ml::Tree>& trees) {
  json a = json::array();
  for (const ml::Tree& t : trees) a.push_back(to_json(t));
  return a;
}

}  // namespace

std::string serialize_model(const ml::TrainedModel& model) {
  json j;
  j["format"] = "roadsel-model/1";
  j["family"] = ml::to_string(model.family);
  j["feature_names"] = model.feature_names;
  j["scaler"] = {{"mean", to_json(model.scaler.mean)}, {"scale", to_json(model.scaler.scale)}};
  json p;
  if (const auto* nb = std::get_if<ml::NaiveBayesParams>(&model.params)) {
    p = {{"log_prior", to_json(Eigen::VectorXd(nb->log_prior))},
         {"mean", to_json(nb->mean)},
         {"variance", to_json(nb->variance)}};
  } else if (const auto* lin = std::get_if<ml::LinearParams>(&model.params)) {
    p = {{"weights", to_json(lin->weights)}, {"bias", lin->bias}};
  } else if (const auto* forest = std::get_if<ml::ForestParams>(&model.params)) {
    p = {{"trees", to_json(forest->trees)}};
  } else if (const auto* boost = std::get_if<ml::BoostingParams>(&model.params)) {
    p = {{"initial", boost->initial}, {"shrinkage", boost->shrinkage}, {"trees", to_json(boost->trees)}};
  }
  j["params"] = std::move(p);
  return j.dump(1) + "\n";
}

ml::TrainedModel parse_model(std::string_view text, const std::string& source) {
  const Reader rd{source};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    rd.fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "roadsel-model/1") rd.fail("not a model artifact");

  ml::TrainedModel m;
  const json& fam = rd.at(j, "family");
  const auto family = fam.is_string() ? ml::family_from_string(fam.get<std::string>()) : std::nullopt;
  if (!family) rd.fail("unknown model family");
  m.family = *family;
  const json& names = rd.at(j, "feature_names");
  if (!names.is_array()) rd.fail("feature_names must be an array");
  for (const json& n : names) {
    if (!n.is_string()) rd.fail("feature names must be strings");
    m.feature_names.push_back(n.get<std::string>());
  }
  const json& sc = rd.at(j, "scaler");
  m.scaler.mean = rd.vector(rd.at(sc, "mean"));
  m.scaler.scale = rd.vector(rd.at(sc, "scale"));
  const Eigen::Index d = m.scaler.mean.size();
  if (m.scaler.scale.size() != d || static_cast<Eigen::Index>(m.feature_names.size()) != d) {
    rd.fail("scaler and feature names disagree on arity");
  }
  if ((m.scaler.scale.array() <= 0.0).any()) rd.fail("scaler scale must be positive");

  const json& p = rd.at(j, "params");
  switch (m.family) {
    case ml::Family::naive_bayes: {
      ml::NaiveBayesParams nb;
      const Eigen::VectorXd prior = rd.vector(rd.at(p, "log_prior"));
      if (prior.size() != 2) rd.fail("log_prior must have two entries");
      nb.log_prior = prior;
      nb.mean = rd.matrix(rd.at(p, "mean"), d);
      nb.variance = rd.matrix(rd.at(p, "variance"), d);
      if (nb.mean.rows() != 2 || nb.variance.rows() != 2) rd.fail("naive Bayes needs two class rows");
      if ((nb.variance.array() <= 0.0).any()) rd.fail("variances must be positive");
      m.params = std::move(nb);
      break;
    }
    case ml::Family::logistic_regression:
    case ml::Family::svm: {
      ml::LinearParams lin;
      lin.weights = rd.vector(rd.at(p, "weights"));
      lin.bias = rd.number(rd.at(p, "bias"));
      if (lin.weights.size() != d) rd.fail("weights have wrong arity");
      m.params = std::move(lin);
      break;
    }
    case ml::Family::random_forest:
    case ml::Family::decision_tree: {
      ml::ForestParams forest;
      forest.trees = rd.trees(rd.at(p, "trees"), d);
      if (forest.trees.empty()) rd.fail("forest has no trees");
      m.params = std::move(forest);
      break;
    }
    case ml::Family::gradient_boosting: {
      ml::BoostingParams boost;
      boost.initial = rd.number(rd.at(p, "initial"));
      boost.shrinkage = rd.number(rd.at(p, "shrinkage"));
      boost.trees = rd.trees(rd.at(p, "trees"), d);
      m.params = std::move(boost);
      break;
    }
  }
  return m;
}

ml::TrainedModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text(path), path.string());
}

void save_model(const std::filesystem::path& path, const ml::TrainedModel& model) {
  write_text_atomic(path, serialize_model(model));
}

}  // namespace roadsel
