#include "pdc/forest.hpp"

#include <algorithm>
#include <cmath>

#include "pdc/rng.hpp"

namespace pdc {

namespace {

void index_targets(ForestModel& m) {
  m.target_order.resize(m.train_targets.size());
  for (std::size_t i = 0; i < m.target_order.size(); ++i) m.target_order[i] = i;
  std::stable_sort(m.target_order.begin(), m.target_order.end(),
                   [&](std::size_t a, std::size_t b) { return m.train_targets[a] < m.train_targets[b]; });
}

}  // namespace

ForestModel fit_forest(const DataView& data, const ForestParams& p, ForestKind kind) {
  if (p.n_estimators < 1) throw InvalidArgument("fit_forest: n_estimators must be positive");
  std::size_t n = data.n_rows();
  if (n == 0) throw InvalidArgument("fit_forest: empty training set");

  ForestModel m;
  m.kind = kind;
  m.params = p;
  m.n_features = data.n_cols;
  m.train_targets.assign(data.targets.begin(), data.targets.end());
  index_targets(m);

  m.trees.reserve(std::size_t(p.n_estimators));
  std::vector<int> idx(n);
  for (int b = 0; b < p.n_estimators; ++b) {
    if (p.bootstrap) {
      // Separate stream from the per-tree feature sampler.
      Rng rng = make_rng(mix64(p.base_seed + std::uint64_t(b)) + 1);
      for (std::size_t i = 0; i < n; ++i) idx[i] = int(draw_index(rng, n));
    } else {
      for (std::size_t i = 0; i < n; ++i) idx[i] = int(i);
    }
    TreeParams tp = p.tree;
    tp.seed = p.base_seed + std::uint64_t(b);
    m.trees.push_back(fit_tree(data, idx, tp));
  }
  return m;
}

std::vector<double> forest_weights(const ForestModel& m, std::span<const double> x) {
  if (m.trees.empty()) throw InvalidArgument("forest_weights: model has no trees");
  std::vector<double> w(m.train_targets.size(), 0.0);
  double per_tree = 1.0 / double(m.trees.size());
  for (const auto& tree : m.trees) {
    const TreeNode& leaf = tree.nodes[std::size_t(tree.leaf_index(x))];
    double share = per_tree / double(leaf.members.size());
    for (int i : leaf.members) w[std::size_t(i)] += share;
  }
  return w;
}

double forest_point(const ForestModel& m, std::span<const double> x) {
  if (m.trees.empty()) throw InvalidArgument("forest_point: model has no trees");
  double sum = 0.0;
  for (const auto& tree : m.trees) sum += tree.predict(x);
  double mean = sum / double(m.trees.size());
  return mean < 0.0 ? 0.0 : mean;
}

std::vector<double> forest_quantiles(const ForestModel& m, std::span<const double> x,
                                     std::span<const double> qs) {
  if (m.kind != ForestKind::Qrf)
    throw InvalidArgument("quantile prediction needs a quantile forest");
  for (double q : qs)
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("quantile level must lie in (0,1)");

  std::vector<double> w = forest_weights(m, x);
  std::vector<double> out(qs.size());
  for (std::size_t k = 0; k < qs.size(); ++k) {
    // Walk training targets in ascending order until the cumulative weight
    // covers q. The tiny slack keeps exact-half cases stable.
    double cum = 0.0;
    double value = m.train_targets[m.target_order.back()];
    for (std::size_t i : m.target_order) {
      cum += w[i];
      if (cum + 1e-12 >= qs[k]) {
        value = m.train_targets[i];
        break;
      }
    }
    out[k] = value;
  }
  return out;
}

double forest_quantile(const ForestModel& m, std::span<const double> x, double q) {
  return forest_quantiles(m, x, std::span<const double>(&q, 1))[0];
}

nlohmann::json forest_to_json(const ForestModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : t.nodes) {
      nlohmann::json n;
      if (nd.is_leaf()) {
        n["value"] = nd.value;
        n["members"] = nd.members;
      } else {
        n["feature"] = nd.feature;
        n["threshold"] = nd.threshold;
        n["left"] = nd.left;
        n["right"] = nd.right;
      }
      nodes.push_back(std::move(n));
    }
    trees.push_back(std::move(nodes));
  }
  return nlohmann::json{{"kind", m.kind == ForestKind::Qrf ? "qrf" : "rf"},
                        {"n_features", m.n_features},
                        {"train_targets", m.train_targets},
                        {"trees", std::move(trees)},
                        {"params",
                         {{"n_estimators", m.params.n_estimators},
                          {"bootstrap", m.params.bootstrap},
                          {"base_seed", m.params.base_seed},
                          {"max_depth", m.params.tree.max_depth},
                          {"min_samples_split", m.params.tree.min_samples_split},
                          {"min_samples_leaf", m.params.tree.min_samples_leaf},
                          {"feature_subset",
                           m.params.tree.feature_subset == FeatureSubset::Sqrt ? "sqrt" : "all"}}}};
}

ForestModel forest_from_json(const nlohmann::json& j) {
  ForestModel m;
  std::string kind = j.at("kind").get<std::string>();
  if (kind != "rf" && kind != "qrf") throw InvalidArgument("unknown forest kind '" + kind + "'");
  m.kind = kind == "qrf" ? ForestKind::Qrf : ForestKind::Rf;
  m.n_features = j.at("n_features").get<std::size_t>();
  m.train_targets = j.at("train_targets").get<std::vector<double>>();
  const auto& p = j.at("params");
  m.params.n_estimators = p.at("n_estimators").get<int>();
  m.params.bootstrap = p.at("bootstrap").get<bool>();
  m.params.base_seed = p.at("base_seed").get<std::uint64_t>();
  m.params.tree.max_depth = p.at("max_depth").get<int>();
  m.params.tree.min_samples_split = p.at("min_samples_split").get<int>();
  m.params.tree.min_samples_leaf = p.at("min_samples_leaf").get<int>();
  m.params.tree.feature_subset = p.at("feature_subset").get<std::string>() == "sqrt"
                                     ? FeatureSubset::Sqrt
                                     : FeatureSubset::All;
  for (const auto& tj : j.at("trees")) {
    RegressionTree t;
    t.n_features = m.n_features;
    for (const auto& nj : tj) {
      TreeNode nd;
      if (nj.contains("feature")) {
        nd.feature = nj.at("feature").get<int>();
        nd.threshold = nj.at("threshold").get<double>();
        nd.left = nj.at("left").get<int>();
        nd.right = nj.at("right").get<int>();
      } else {
        nd.value = nj.at("value").get<double>();
        nd.members = nj.at("members").get<std::vector<int>>();
      }
      t.nodes.push_back(std::move(nd));
    }
    m.trees.push_back(std::move(t));
  }
  index_targets(m);
  return m;
}

}  // namespace pdc
