#include "pdc/tuning.hpp"

#include <algorithm>

namespace pdc {

ModelFamily model_family_from_name(const std::string& name) {
  if (name == "myopic") return ModelFamily::Myopic;
  if (name == "seasonal_average") return ModelFamily::SeasonalAverage;
  if (name == "seasonal_quantile") return ModelFamily::SeasonalQuantile;
  if (name == "rf") return ModelFamily::Rf;
  if (name == "qrf") return ModelFamily::Qrf;
  if (name == "boost") return ModelFamily::Boost;
  throw InvalidArgument("unknown model family '" + name + "'");
}

const char* model_family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::Myopic: return "myopic";
    case ModelFamily::SeasonalAverage: return "seasonal_average";
    case ModelFamily::SeasonalQuantile: return "seasonal_quantile";
    case ModelFamily::Rf: return "rf";
    case ModelFamily::Qrf: return "qrf";
    case ModelFamily::Boost: return "boost";
  }
  return "unknown";
}

bool family_is_tunable(ModelFamily f) {
  return f == ModelFamily::Rf || f == ModelFamily::Qrf || f == ModelFamily::Boost;
}

bool family_has_quantiles(ModelFamily f) {
  return f == ModelFamily::Qrf || f == ModelFamily::SeasonalQuantile;
}

Grid Grid::forest_default() {
  Grid g;
  g.axes["n_estimators"] = {50, 75, 100, 125, 150, 175, 200};
  g.axes["max_features"] = {"auto", "sqrt"};
  g.axes["max_depth"] = {3, 4, 5, 6, 7};
  g.axes["min_samples_split"] = {4, 6, 8, 10};
  g.axes["min_samples_leaf"] = {2, 3, 4, 5, 10};
  return g;
}

Grid Grid::boost_default() {
  Grid g;
  g.axes["n_estimators"] = {50, 75, 100, 125, 150, 175, 200};
  g.axes["learning_rate"] = {0.1, 0.15, 0.2, 0.25, 0.3};
  g.axes["max_depth"] = {3, 4, 5, 6, 7};
  g.axes["subsample"] = {0.5, 0.75, 1.0};
  return g;
}

namespace {

FeatureSubset subset_from_name(const std::string& s) {
  if (s == "auto" || s == "all") return FeatureSubset::All;
  if (s == "sqrt") return FeatureSubset::Sqrt;
  throw InvalidArgument("unknown max_features '" + s + "'");
}

const std::vector<std::string>& axis_order(ModelFamily family) {
  static const std::vector<std::string> forest = {"n_estimators", "max_features", "max_depth",
                                                  "min_samples_split", "min_samples_leaf"};
  static const std::vector<std::string> boost = {"n_estimators", "learning_rate", "max_depth",
                                                 "subsample"};
  return family == ModelFamily::Boost ? boost : forest;
}

}  // namespace

ForestParams forest_params_from_json(const nlohmann::json& p, std::uint64_t seed) {
  ForestParams fp;
  fp.base_seed = seed;
  for (const auto& [key, value] : p.items()) {
    if (key == "n_estimators")
      fp.n_estimators = value.get<int>();
    else if (key == "max_features")
      fp.tree.feature_subset = subset_from_name(value.get<std::string>());
    else if (key == "max_depth")
      fp.tree.max_depth = value.get<int>();
    else if (key == "min_samples_split")
      fp.tree.min_samples_split = value.get<int>();
    else if (key == "min_samples_leaf")
      fp.tree.min_samples_leaf = value.get<int>();
    else if (key == "bootstrap")
      fp.bootstrap = value.get<bool>();
    else
      throw InvalidArgument("unknown forest parameter '" + key + "'");
  }
  return fp;
}

BoostParams boost_params_from_json(const nlohmann::json& p, std::uint64_t seed) {
  BoostParams bp;
  bp.base_seed = seed;
  for (const auto& [key, value] : p.items()) {
    if (key == "n_estimators")
      bp.n_rounds = value.get<int>();
    else if (key == "learning_rate")
      bp.learning_rate = value.get<double>();
    else if (key == "max_depth")
      bp.max_depth = value.get<int>();
    else if (key == "subsample")
      bp.subsample = value.get<double>();
    else if (key == "leaf_l2")
      bp.leaf_l2 = value.get<double>();
    else
      throw InvalidArgument("unknown boosting parameter '" + key + "'");
  }
  return bp;
}

std::vector<std::pair<std::size_t, std::size_t>> cv_folds(std::size_t n_rows, int k_folds) {
  if (k_folds < 2) throw InvalidArgument("cross validation needs at least 2 folds");
  if (n_rows < std::size_t(k_folds))
    throw InvalidArgument("cross validation needs at least one row per fold");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (int f = 0; f < k_folds; ++f) {
    std::size_t lo = n_rows * std::size_t(f) / std::size_t(k_folds);
    std::size_t hi = n_rows * std::size_t(f + 1) / std::size_t(k_folds);
    out.emplace_back(lo, hi);
  }
  return out;
}

TuneResult grid_search_cv(const DataView& data, ModelFamily family, const Grid& grid, int k_folds,
                          std::uint64_t seed) {
  if (!family_is_tunable(family))
    throw InvalidArgument(std::string("model family '") + model_family_name(family) +
                          "' has nothing to tune");
  const auto& order = axis_order(family);
  for (const auto& [key, values] : grid.axes.items()) {
    if (std::find(order.begin(), order.end(), key) == order.end())
      throw InvalidArgument("unknown grid axis '" + key + "'");
    if (!values.is_array() || values.empty())
      throw InvalidArgument("grid axis '" + key + "' needs a nonempty array");
  }

  // Enumerate combinations, canonical axis order, rightmost axis fastest.
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;
  for (const auto& name : order)
    if (grid.axes.contains(name))
      axes.emplace_back(name, grid.axes.at(name).get<std::vector<nlohmann::json>>());
  if (axes.empty()) throw InvalidArgument("empty grid");

  std::vector<nlohmann::json> combos;
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t a = 0; a < axes.size(); ++a) params[axes[a].first] = axes[a].second[pos[a]];
    combos.push_back(std::move(params));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++pos[a] < axes[a].second.size()) break;
      pos[a] = 0;
      if (a == 0) {
        a = SIZE_MAX;
        break;
      }
    }
    if (a == SIZE_MAX) break;
  }

  auto folds = cv_folds(data.n_rows(), k_folds);
  std::size_t n = data.n_rows();

  TuneResult result;
  double best = 0.0;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    double mse_sum = 0.0;
    for (const auto& [lo, hi] : folds) {
      // Train on everything outside the fold, keeping time order.
      std::vector<double> train_x, train_y;
      train_x.reserve((n - (hi - lo)) * data.n_cols);
      for (std::size_t r = 0; r < n; ++r) {
        if (r >= lo && r < hi) continue;
        auto row = data.row(r);
        train_x.insert(train_x.end(), row.begin(), row.end());
        train_y.push_back(data.y(r));
      }
      DataView train{train_x, data.n_cols, train_y};

      double fold_se = 0.0;
      if (family == ModelFamily::Boost) {
        BoostModel model = fit_boost(train, boost_params_from_json(combos[ci], seed));
        for (std::size_t r = lo; r < hi; ++r) {
          double e = boost_predict(model, data.row(r)) - data.y(r);
          fold_se += e * e;
        }
      } else {
        ForestKind kind = family == ModelFamily::Qrf ? ForestKind::Qrf : ForestKind::Rf;
        ForestModel model = fit_forest(train, forest_params_from_json(combos[ci], seed), kind);
        for (std::size_t r = lo; r < hi; ++r) {
          double pred = kind == ForestKind::Qrf ? forest_quantile(model, data.row(r), 0.5)
                                                : forest_point(model, data.row(r));
          double e = pred - data.y(r);
          fold_se += e * e;
        }
      }
      mse_sum += fold_se / double(hi - lo);
    }
    double mean_mse = mse_sum / double(folds.size());
    result.candidates.push_back(Candidate{combos[ci], mean_mse});
    if (ci == 0 || mean_mse < best) {
      best = mean_mse;
      result.best_index = ci;
    }
  }
  return result;
}

}  // namespace pdc
