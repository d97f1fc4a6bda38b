#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "pdc/trees.hpp"

namespace pdc {

// RF averages leaf means; QRF keeps the whole training distribution and
// answers quantile queries through per-sample weights.
enum class ForestKind { Rf, Qrf };

struct ForestParams {
  int n_estimators = 100;
  bool bootstrap = true;
  TreeParams tree;  // tree.seed is overwritten per tree from base_seed
  std::uint64_t base_seed = 0;
};

struct ForestModel {
  ForestKind kind = ForestKind::Rf;
  ForestParams params;
  std::size_t n_features = 0;
  std::vector<double> train_targets;
  std::vector<std::size_t> target_order;  // train target indices, ascending by value
  std::vector<RegressionTree> trees;
};

ForestModel fit_forest(const DataView& data, const ForestParams& p, ForestKind kind);

// Weight of every training sample for the leaves x reaches; sums to 1.
std::vector<double> forest_weights(const ForestModel& m, std::span<const double> x);

// Mean prediction, clamped at zero (demand counts cannot go negative).
double forest_point(const ForestModel& m, std::span<const double> x);

// Smallest training target whose cumulative weight reaches q. QRF only.
double forest_quantile(const ForestModel& m, std::span<const double> x, double q);
std::vector<double> forest_quantiles(const ForestModel& m, std::span<const double> x,
                                     std::span<const double> qs);

nlohmann::json forest_to_json(const ForestModel& m);
ForestModel forest_from_json(const nlohmann::json& j);

}  // namespace pdc
