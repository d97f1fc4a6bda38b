#pragma once

#include <span>
#include <vector>

#include "pdc/clustering.hpp"
#include "pdc/errors.hpp"

namespace pdc {

struct PointMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double rmsle = 0.0;
  double resid_std = 0.0;  // population standard deviation of residuals
};

// Both series nonnegative and the same nonzero length; rmsle uses
// log(v + 1) so zeros are fine.
PointMetrics point_metrics(std::span<const double> actual, std::span<const double> predicted);

// Ascending quantile levels in (0,1) with their predicted values. Values
// are sorted on construction; crossing quantiles from an upstream model
// would otherwise break the CDF.
struct QuantileForecast {
  std::vector<double> levels;
  std::vector<double> values;

  static QuantileForecast make(std::vector<double> levels, std::vector<double> values);
};

// The piecewise-linear CDF implied by a quantile forecast: 0 below the
// first value, linear between distinct knots, 1 from the last value on.
// Equal knots collapse into jumps.
struct PiecewiseCdf {
  std::vector<double> knots;
  std::vector<double> levels;

  double eval(double t) const;
};

PiecewiseCdf empirical_cdf(const QuantileForecast& f);

// Continuous ranked probability score against the CDF above, integrated in
// closed form. A forecast with all values equal scores |value - actual|.
double crps(const QuantileForecast& f, double actual);

// Mean crps over a batch.
double mcrps(const std::vector<QuantileForecast>& forecasts, std::span<const double> actuals);

// Default levels for distribution scoring: 0.1, 0.2, ..., 0.9.
std::vector<double> default_crps_levels();

// Zone-level comparison after clustering: each zone's value becomes the
// median of its cluster, actual clusters against predicted clusters.
struct ClusterMedianEval {
  std::vector<double> actual_median;     // per zone, from the actual clustering
  std::vector<double> predicted_median;  // per zone, from the predicted clustering
  PointMetrics metrics;
};

ClusterMedianEval within_cluster_median_eval(std::span<const double> actual_demand,
                                             const ClusterSet& actual_clusters,
                                             std::span<const double> predicted_demand,
                                             const ClusterSet& predicted_clusters);

double median(std::vector<double> values);

}  // namespace pdc
