#include "pdc/boosting.hpp"

#include <algorithm>
#include <cmath>

#include "pdc/rng.hpp"

namespace pdc {

BoostModel fit_boost(const DataView& data, const BoostParams& p) {
  std::size_t n = data.n_rows();
  if (n == 0) throw InvalidArgument("fit_boost: empty training set");
  if (p.n_rounds < 0) throw InvalidArgument("fit_boost: negative round count");
  if (!(p.learning_rate > 0.0)) throw InvalidArgument("fit_boost: learning rate must be positive");
  if (!(p.subsample > 0.0 && p.subsample <= 1.0))
    throw InvalidArgument("fit_boost: subsample must lie in (0,1]");
  if (p.leaf_l2 < 0.0) throw InvalidArgument("fit_boost: negative leaf_l2");

  BoostModel m;
  m.params = p;
  m.n_features = data.n_cols;

  std::vector<double> current(n, 0.0);  // running model, starts at zero
  std::vector<double> residual(n, 0.0);
  std::size_t rows_per_round = std::size_t(std::ceil(p.subsample * double(n)));

  for (int t = 0; t < p.n_rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = data.y(i) - current[i];

    Rng rng = make_rng(p.base_seed + std::uint64_t(t));
    std::vector<int> rows = sample_without_replacement(rng, n, rows_per_round);
    std::sort(rows.begin(), rows.end());

    DataView round_view{data.values, data.n_cols, residual};
    TreeParams tp;
    tp.max_depth = p.max_depth;
    tp.min_samples_split = 2;
    tp.min_samples_leaf = 1;
    tp.feature_subset = FeatureSubset::All;
    tp.seed = p.base_seed + std::uint64_t(t);
    RegressionTree tree = fit_tree(round_view, rows, tp);

    // Shrink leaves toward zero: value = sum(residuals) / (count + l2).
    for (auto& nd : tree.nodes)
      if (nd.is_leaf()) {
        double sum = 0.0;
        for (int r : nd.members) sum += residual[std::size_t(r)];
        nd.value = sum / (double(nd.members.size()) + p.leaf_l2);
      }

    // Step length from the full training set, not just the subsample.
    double num = 0.0, den = 0.0;
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = tree.predict(data.row(i));
      num += residual[i] * h[i];
      den += h[i] * h[i];
    }
    double gamma = den == 0.0 ? 1.0 : num / den;

    for (std::size_t i = 0; i < n; ++i) current[i] += p.learning_rate * gamma * h[i];
    m.stages.push_back(BoostStage{std::move(tree), gamma});
  }
  return m;
}

double boost_predict(const BoostModel& m, std::span<const double> x) {
  double sum = 0.0;
  for (const auto& s : m.stages) sum += m.params.learning_rate * s.gamma * s.tree.predict(x);
  return sum < 0.0 ? 0.0 : sum;
}

nlohmann::json boost_to_json(const BoostModel& m) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : m.stages) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : s.tree.nodes) {
      nlohmann::json n;
      if (nd.is_leaf()) {
        n["value"] = nd.value;
      } else {
        n["feature"] = nd.feature;
        n["threshold"] = nd.threshold;
        n["left"] = nd.left;
        n["right"] = nd.right;
      }
      nodes.push_back(std::move(n));
    }
    stages.push_back(nlohmann::json{{"gamma", s.gamma}, {"nodes", std::move(nodes)}});
  }
  return nlohmann::json{{"n_features", m.n_features},
                        {"stages", std::move(stages)},
                        {"params",
                         {{"n_rounds", m.params.n_rounds},
                          {"learning_rate", m.params.learning_rate},
                          {"max_depth", m.params.max_depth},
                          {"subsample", m.params.subsample},
                          {"leaf_l2", m.params.leaf_l2},
                          {"base_seed", m.params.base_seed}}}};
}

BoostModel boost_from_json(const nlohmann::json& j) {
  BoostModel m;
  m.n_features = j.at("n_features").get<std::size_t>();
  const auto& p = j.at("params");
  m.params.n_rounds = p.at("n_rounds").get<int>();
  m.params.learning_rate = p.at("learning_rate").get<double>();
  m.params.max_depth = p.at("max_depth").get<int>();
  m.params.subsample = p.at("subsample").get<double>();
  m.params.leaf_l2 = p.at("leaf_l2").get<double>();
  m.params.base_seed = p.at("base_seed").get<std::uint64_t>();
  for (const auto& sj : j.at("stages")) {
    BoostStage s;
    s.gamma = sj.at("gamma").get<double>();
    s.tree.n_features = m.n_features;
    for (const auto& nj : sj.at("nodes")) {
      TreeNode nd;
      if (nj.contains("feature")) {
        nd.feature = nj.at("feature").get<int>();
        nd.threshold = nj.at("threshold").get<double>();
        nd.left = nj.at("left").get<int>();
        nd.right = nj.at("right").get<int>();
      } else {
        nd.value = nj.at("value").get<double>();
      }
      s.tree.nodes.push_back(std::move(nd));
    }
    m.stages.push_back(std::move(s));
  }
  return m;
}

}  // namespace pdc
