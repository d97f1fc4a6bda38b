#pragma once

#include <map>
#include <vector>

#include "json.hpp"
#include "pdc/domain.hpp"

namespace pdc {

// Last observed count; zero when there is no history yet.
double myopic_predict(const std::vector<double>& history);

// Historical counts bucketed by (hour of day, day of week). Empty buckets
// fall back to the pooled history.
class SeasonalIndex {
 public:
  SeasonalIndex() = default;
  SeasonalIndex(const DemandSeries& series, const BusinessHours& hours);

  double average(int hour, int dow) const;
  // Lower empirical quantile of the bucket, q in (0,1).
  double quantile(int hour, int dow, double q) const;

  nlohmann::json to_json() const;
  static SeasonalIndex from_json(const nlohmann::json& j);

 private:
  const std::vector<double>& bucket_or_all(int hour, int dow) const;
  std::map<std::pair<int, int>, std::vector<double>> buckets_;  // sorted values
  std::vector<double> all_;                                     // sorted values
};

}  // namespace pdc
