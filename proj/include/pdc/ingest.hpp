#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pdc/domain.hpp"

namespace pdc {

struct WeatherRecord {
  Date day;
  int hour = 0;
  double temp_c = 0.0;
  double precip_mm = 0.0;
  double wind_mps = 0.0;
};

// orders.csv: order_id,timestamp,pickup_zone,dest_zone
std::vector<Order> load_orders(const std::string& path, const ZoneRegistry& registry);

// weather.csv: date,hour,temp_c,precip_mm,wind_mps (one row per hour, city wide)
std::vector<WeatherRecord> load_weather(const std::string& path);

// holidays.csv: one ISO date per line, no header
std::set<Date> load_holidays(const std::string& path);

struct AggregateResult {
  // One series per pickup zone, keyed by zone id, each covering every grid
  // interval (zeros where nothing happened).
  std::map<int, DemandSeries> series;
  long dropped = 0;  // orders outside the grid or the business window
};

AggregateResult aggregate_orders(const std::vector<Order>& orders, const ZoneRegistry& registry,
                                 const IntervalGrid& grid);

// Row-major feature matrix with one row per forecast target interval.
struct FeatureTable {
  std::vector<std::string> schema;
  std::vector<double> values;  // rows x schema.size()
  std::vector<double> targets;
  std::vector<IntervalIndex> row_interval;  // target interval per row

  std::size_t cols() const { return schema.size(); }
  std::size_t rows() const { return schema.empty() ? 0 : values.size() / schema.size(); }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values.data() + r * cols(), cols());
  }
};

// Features describe the target interval: calendar signals, optionally the
// hour's weather, optionally the four preceding counts along the series.
// With lags on, the first four intervals have no row. A weather table that
// misses any needed (date, hour) is an error listing the gaps.
FeatureTable assemble_features(const DemandSeries& series, const BusinessHours& hours,
                               const std::vector<WeatherRecord>* weather,
                               const std::set<Date>& holidays, bool include_lags);

// Synthetic order generation: per-zone Poisson draws per interval shaped by
// hour-of-day and day-of-week patterns plus optional level-shift events.
struct LevelShiftEvent {
  std::vector<int> zones;  // empty = every pickup zone
  IntervalIndex from;
  IntervalIndex to;  // inclusive
  double multiplier = 1.0;
};

struct SynthProfile {
  std::vector<double> hourly_base;       // 24 entries, expected orders per 15 min
  std::vector<double> dow_multiplier;    // 7 entries, Monday first
  std::map<int, double> zone_scale;      // default 1.0
  std::vector<LevelShiftEvent> events;
};

std::vector<Order> generate_synthetic(const ZoneRegistry& registry, const IntervalGrid& grid,
                                      const SynthProfile& profile, std::uint64_t seed);

void write_orders(const std::string& path, const std::vector<Order>& orders);

}  // namespace pdc
