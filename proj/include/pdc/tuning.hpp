#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdc/boosting.hpp"
#include "pdc/forest.hpp"

namespace pdc {

enum class ModelFamily { Myopic, SeasonalAverage, SeasonalQuantile, Rf, Qrf, Boost };

ModelFamily model_family_from_name(const std::string& name);
const char* model_family_name(ModelFamily f);
bool family_is_tunable(ModelFamily f);
bool family_has_quantiles(ModelFamily f);

// Candidate values per hyperparameter, e.g. {"n_estimators":[50,100]}.
// Axes not listed stay at their defaults.
struct Grid {
  nlohmann::json axes = nlohmann::json::object();

  static Grid forest_default();  // rf and qrf
  static Grid boost_default();
};

// One enumerated parameter combination with its cross-validation score.
struct Candidate {
  nlohmann::json params;
  double mean_mse = 0.0;
};

struct TuneResult {
  std::size_t best_index = 0;
  std::vector<Candidate> candidates;  // in enumeration order
};

ForestParams forest_params_from_json(const nlohmann::json& p, std::uint64_t seed);
BoostParams boost_params_from_json(const nlohmann::json& p, std::uint64_t seed);

// Grid search scored by k-fold cross validation. Folds are contiguous
// chronological blocks, so rows must arrive in time order. The best
// candidate has the lowest mean validation MSE; ties keep the earlier
// candidate in enumeration order (axes ordered as in the default grids,
// rightmost axis fastest).
TuneResult grid_search_cv(const DataView& data, ModelFamily family, const Grid& grid, int k_folds,
                          std::uint64_t seed);

// Fold boundaries as half-open [begin, end) row ranges.
std::vector<std::pair<std::size_t, std::size_t>> cv_folds(std::size_t n_rows, int k_folds);

}  // namespace pdc
