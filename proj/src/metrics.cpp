#include "pdc/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace pdc {

PointMetrics point_metrics(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size() || actual.empty())
    throw InvalidArgument("point_metrics: series must be the same nonzero length");
  for (std::size_t i = 0; i < actual.size(); ++i)
    if (actual[i] < 0.0 || predicted[i] < 0.0)
      throw InvalidArgument("point_metrics: negative values");

  double n = double(actual.size());
  double abs_sum = 0.0, sq_sum = 0.0, logsq_sum = 0.0, resid_sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    double r = actual[i] - predicted[i];
    abs_sum += std::fabs(r);
    sq_sum += r * r;
    double lr = std::log(predicted[i] + 1.0) - std::log(actual[i] + 1.0);
    logsq_sum += lr * lr;
    resid_sum += r;
  }
  double resid_mean = resid_sum / n;
  double var_sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    double d = (actual[i] - predicted[i]) - resid_mean;
    var_sum += d * d;
  }
  PointMetrics m;
  m.mae = abs_sum / n;
  m.rmse = std::sqrt(sq_sum / n);
  m.rmsle = std::sqrt(logsq_sum / n);
  m.resid_std = std::sqrt(var_sum / n);
  return m;
}

QuantileForecast QuantileForecast::make(std::vector<double> levels, std::vector<double> values) {
  if (levels.empty() || levels.size() != values.size())
    throw InvalidArgument("quantile forecast: levels/values must match and be nonempty");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] < 1.0))
      throw InvalidArgument("quantile forecast: levels must lie in (0,1)");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw InvalidArgument("quantile forecast: levels must increase");
  }
  std::sort(values.begin(), values.end());
  QuantileForecast f;
  f.levels = std::move(levels);
  f.values = std::move(values);
  return f;
}

double PiecewiseCdf::eval(double t) const {
  if (knots.empty()) throw InvalidArgument("empty cdf");
  if (t < knots.front()) return 0.0;
  if (t >= knots.back()) return 1.0;
  // Last knot <= t; equal knots collapse to the highest level at that point.
  std::size_t j = std::size_t(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) - 1;
  if (knots[j + 1] == knots[j]) return levels[j];
  double frac = (t - knots[j]) / (knots[j + 1] - knots[j]);
  return levels[j] + (levels[j + 1] - levels[j]) * frac;
}

PiecewiseCdf empirical_cdf(const QuantileForecast& f) {
  PiecewiseCdf cdf;
  cdf.knots = f.values;
  cdf.levels = f.levels;
  return cdf;
}

double crps(const QuantileForecast& f, double actual) {
  const auto& v = f.values;
  const auto& q = f.levels;
  double total = 0.0;

  // Tails: F is 0 before the first knot and 1 from the last, so the
  // integrand is 1 on the side where the observation lies outside.
  if (actual < v.front()) total += v.front() - actual;
  if (actual > v.back()) total += actual - v.back();

  // Linear pieces between distinct knots. With F(t) affine and s constant
  // on a piece, (F - s)^2 integrates to a cubic difference.
  auto piece = [](double p, double r, double a, double b, double la, double lb, double s) {
    double slope = (lb - la) / (b - a);
    double up = la + slope * (p - a) - s;
    double ur = la + slope * (r - a) - s;
    return (ur * ur * ur - up * up * up) / (3.0 * slope);
  };
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    double a = v[i], b = v[i + 1];
    if (a == b) continue;  // jump
    double la = q[i], lb = q[i + 1];
    if (actual <= a) {
      total += piece(a, b, a, b, la, lb, 1.0);
    } else if (actual >= b) {
      total += piece(a, b, a, b, la, lb, 0.0);
    } else {
      total += piece(a, actual, a, b, la, lb, 0.0);
      total += piece(actual, b, a, b, la, lb, 1.0);
    }
  }
  return total;
}

double mcrps(const std::vector<QuantileForecast>& forecasts, std::span<const double> actuals) {
  if (forecasts.size() != actuals.size() || forecasts.empty())
    throw InvalidArgument("mcrps: forecast/actual count mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) sum += crps(forecasts[i], actuals[i]);
  return sum / double(forecasts.size());
}

std::vector<double> default_crps_levels() {
  std::vector<double> q(9);
  for (int i = 0; i < 9; ++i) q[std::size_t(i)] = double(i + 1) / 10.0;
  return q;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of nothing");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

ClusterMedianEval within_cluster_median_eval(std::span<const double> actual_demand,
                                             const ClusterSet& actual_clusters,
                                             std::span<const double> predicted_demand,
                                             const ClusterSet& predicted_clusters) {
  std::size_t n = actual_demand.size();
  if (predicted_demand.size() != n || n == 0)
    throw InvalidArgument("cluster eval: demand vectors must be the same nonzero length");
  if (actual_clusters.labels.size() != n || predicted_clusters.labels.size() != n)
    throw InvalidArgument("cluster eval: clusterings must cover every zone exactly once");

  auto medians = [n](std::span<const double> demand, const ClusterSet& cs) {
    std::vector<double> out(n);
    for (const auto& group : cs.groups()) {
      if (group.empty()) continue;
      std::vector<double> vals;
      vals.reserve(group.size());
      for (int z : group) vals.push_back(demand[std::size_t(z)]);
      double m = median(vals);
      for (int z : group) out[std::size_t(z)] = m;
    }
    return out;
  };

  ClusterMedianEval ev;
  ev.actual_median = medians(actual_demand, actual_clusters);
  ev.predicted_median = medians(predicted_demand, predicted_clusters);
  ev.metrics = point_metrics(ev.actual_median, ev.predicted_median);
  return ev;
}

}  // namespace pdc
