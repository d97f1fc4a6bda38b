#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "pdc/trees.hpp"

namespace pdc {

struct BoostParams {
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  double subsample = 1.0;  // fraction of rows per round, drawn without replacement
  double leaf_l2 = 1.0;    // L2 penalty on leaf values
  std::uint64_t base_seed = 0;
};

struct BoostStage {
  RegressionTree tree;
  double gamma = 1.0;  // line-search step length
};

struct BoostModel {
  BoostParams params;
  std::size_t n_features = 0;
  std::vector<BoostStage> stages;
};

// Squared-error gradient boosting from a zero initial model. Each round
// fits a shallow tree to the residuals on a seeded row subsample, shrinks
// leaf values by the L2 penalty, then line-searches the step length on the
// full training set.
BoostModel fit_boost(const DataView& data, const BoostParams& p);

// Staged sum, clamped at zero.
double boost_predict(const BoostModel& m, std::span<const double> x);

nlohmann::json boost_to_json(const BoostModel& m);
BoostModel boost_from_json(const nlohmann::json& j);

}  // namespace pdc
