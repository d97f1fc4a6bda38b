#include "pdc/benchmarks.hpp"

#include <algorithm>

namespace pdc {

double myopic_predict(const std::vector<double>& history) {
  return history.empty() ? 0.0 : history.back();
}

SeasonalIndex::SeasonalIndex(const DemandSeries& series, const BusinessHours& hours) {
  if (series.intervals.size() != series.counts.size())
    throw InvalidArgument("seasonal index: interval/count size mismatch");
  if (series.counts.empty()) throw InvalidArgument("seasonal index: empty history");
  for (std::size_t i = 0; i < series.counts.size(); ++i) {
    const IntervalIndex& iv = series.intervals[i];
    buckets_[{hours.hour_of_slot(iv.slot), iv.day.weekday()}].push_back(series.counts[i]);
    all_.push_back(series.counts[i]);
  }
  for (auto& [key, values] : buckets_) std::sort(values.begin(), values.end());
  std::sort(all_.begin(), all_.end());
}

const std::vector<double>& SeasonalIndex::bucket_or_all(int hour, int dow) const {
  if (all_.empty()) throw InvalidArgument("seasonal index: empty history");
  auto it = buckets_.find({hour, dow});
  return it == buckets_.end() ? all_ : it->second;
}

double SeasonalIndex::average(int hour, int dow) const {
  const auto& values = bucket_or_all(hour, dow);
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / double(values.size());
}

double SeasonalIndex::quantile(int hour, int dow, double q) const {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("quantile level must lie in (0,1)");
  const auto& values = bucket_or_all(hour, dow);
  double n = double(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (double(i + 1) / n + 1e-12 >= q) return values[i];
  return values.back();
}

nlohmann::json SeasonalIndex::to_json() const {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& [key, values] : buckets_)
    buckets.push_back(nlohmann::json{{"hour", key.first}, {"dow", key.second}, {"values", values}});
  return nlohmann::json{{"buckets", std::move(buckets)}, {"all", all_}};
}

SeasonalIndex SeasonalIndex::from_json(const nlohmann::json& j) {
  SeasonalIndex s;
  s.all_ = j.at("all").get<std::vector<double>>();
  for (const auto& b : j.at("buckets"))
    s.buckets_[{b.at("hour").get<int>(), b.at("dow").get<int>()}] =
        b.at("values").get<std::vector<double>>();
  return s;
}

}  // namespace pdc
