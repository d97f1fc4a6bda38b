#include "pdc/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pdc/csv.hpp"
#include "pdc/rng.hpp"

namespace pdc {

std::vector<Order> load_orders(const std::string& path, const ZoneRegistry& registry) {
  CsvTable t = read_csv(path);
  int c_id = t.require_column("order_id", path);
  int c_ts = t.require_column("timestamp", path);
  int c_pu = t.require_column("pickup_zone", path);
  int c_de = t.require_column("dest_zone", path);
  std::vector<Order> orders;
  orders.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    std::string context = path + " row " + std::to_string(r + 2);
    Order o;
    o.id = row[std::size_t(c_id)];
    try {
      o.at = Timestamp::parse(row[std::size_t(c_ts)]);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(context + ": " + e.what());
    }
    o.pickup_zone = int(parse_int(row[std::size_t(c_pu)], context));
    o.dest_zone = int(parse_int(row[std::size_t(c_de)], context));
    if (o.pickup_zone < 0 || std::size_t(o.pickup_zone) >= registry.size())
      throw InvalidArgument(context + ": unknown pickup zone " + std::to_string(o.pickup_zone));
    if (o.dest_zone < 0 || std::size_t(o.dest_zone) >= registry.size())
      throw InvalidArgument(context + ": unknown dest zone " + std::to_string(o.dest_zone));
    if (!registry.zone(o.pickup_zone).is_pickup)
      throw InvalidArgument(context + ": zone " + std::to_string(o.pickup_zone) +
                            " is not a pickup zone");
    orders.push_back(std::move(o));
  }
  return orders;
}

std::vector<WeatherRecord> load_weather(const std::string& path) {
  CsvTable t = read_csv(path);
  int c_date = t.require_column("date", path);
  int c_hour = t.require_column("hour", path);
  int c_temp = t.require_column("temp_c", path);
  int c_prec = t.require_column("precip_mm", path);
  int c_wind = t.require_column("wind_mps", path);
  std::vector<WeatherRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    std::string context = path + " row " + std::to_string(r + 2);
    WeatherRecord w;
    w.day = Date::parse(row[std::size_t(c_date)]);
    w.hour = int(parse_int(row[std::size_t(c_hour)], context));
    if (w.hour < 0 || w.hour > 23) throw InvalidArgument(context + ": hour out of range");
    w.temp_c = parse_num(row[std::size_t(c_temp)], context);
    w.precip_mm = parse_num(row[std::size_t(c_prec)], context);
    w.wind_mps = parse_num(row[std::size_t(c_wind)], context);
    out.push_back(w);
  }
  return out;
}

std::set<Date> load_holidays(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::set<Date> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.insert(Date::parse(line));
  }
  return out;
}

AggregateResult aggregate_orders(const std::vector<Order>& orders, const ZoneRegistry& registry,
                                 const IntervalGrid& grid) {
  AggregateResult res;
  auto pickups = registry.pickup_zones();
  for (int z : pickups) {
    DemandSeries s;
    s.zone = z;
    s.intervals = interval_sequence(grid.hours, grid.first_day, grid.first_day + (grid.n_days - 1));
    s.counts.assign(s.intervals.size(), 0.0);
    res.series.emplace(z, std::move(s));
  }
  for (const auto& o : orders) {
    int pos = grid.position(o.at.day, o.at.minute);
    if (pos < 0) {
      ++res.dropped;
      continue;
    }
    res.series.at(o.pickup_zone).counts[std::size_t(pos)] += 1.0;
  }
  return res;
}

FeatureTable assemble_features(const DemandSeries& series, const BusinessHours& hours,
                               const std::vector<WeatherRecord>* weather,
                               const std::set<Date>& holidays, bool include_lags) {
  FeatureTable t;
  t.schema = {"hour", "dow", "holiday"};
  if (weather) {
    t.schema.push_back("temp_c");
    t.schema.push_back("precip_mm");
    t.schema.push_back("wind_mps");
  }
  if (include_lags)
    for (int l = 1; l <= 4; ++l) t.schema.push_back("lag" + std::to_string(l));

  std::map<std::pair<int, int>, const WeatherRecord*> by_hour;
  if (weather)
    for (const auto& w : *weather) by_hour[{w.day.serial, w.hour}] = &w;

  std::size_t first_row = include_lags ? 4 : 0;
  std::string gaps;
  for (std::size_t p = first_row; p < series.intervals.size(); ++p) {
    const IntervalIndex& iv = series.intervals[p];
    int hour = hours.hour_of_slot(iv.slot);
    t.values.push_back(double(hour));
    t.values.push_back(double(iv.day.weekday()));
    t.values.push_back(holidays.count(iv.day) ? 1.0 : 0.0);
    if (weather) {
      auto it = by_hour.find({iv.day.serial, hour});
      if (it == by_hour.end()) {
        if (!gaps.empty()) gaps += ", ";
        gaps += iv.day.iso() + " hour " + std::to_string(hour);
        t.values.push_back(0.0);
        t.values.push_back(0.0);
        t.values.push_back(0.0);
      } else {
        t.values.push_back(it->second->temp_c);
        t.values.push_back(it->second->precip_mm);
        t.values.push_back(it->second->wind_mps);
      }
    }
    if (include_lags)
      for (std::size_t l = 1; l <= 4; ++l) t.values.push_back(series.counts[p - l]);
    t.targets.push_back(series.counts[p]);
    t.row_interval.push_back(iv);
  }
  if (!gaps.empty()) throw InvalidArgument("weather has no record for: " + gaps);
  return t;
}

std::vector<Order> generate_synthetic(const ZoneRegistry& registry, const IntervalGrid& grid,
                                      const SynthProfile& profile, std::uint64_t seed) {
  if (profile.hourly_base.size() != 24)
    throw InvalidArgument("synthetic profile needs 24 hourly base rates");
  if (profile.dow_multiplier.size() != 7)
    throw InvalidArgument("synthetic profile needs 7 day-of-week multipliers");
  for (double v : profile.hourly_base)
    if (v < 0) throw InvalidArgument("synthetic profile: negative base rate");
  for (double v : profile.dow_multiplier)
    if (v < 0) throw InvalidArgument("synthetic profile: negative day-of-week multiplier");
  for (const auto& [z, s] : profile.zone_scale) {
    registry.zone(z);
    if (s < 0) throw InvalidArgument("synthetic profile: negative zone scale");
  }

  auto pickups = registry.pickup_zones();
  std::size_t n_zones = registry.size();
  Rng rng = make_rng(seed);
  std::vector<Order> orders;
  long counter = 0;
  for (int pos = 0; pos < grid.size(); ++pos) {
    IntervalIndex iv = grid.at(pos);
    int hour = grid.hours.hour_of_slot(iv.slot);
    double day_mult = profile.dow_multiplier[std::size_t(iv.day.weekday())];
    for (int z : pickups) {
      double rate = profile.hourly_base[std::size_t(hour)] * day_mult;
      auto it = profile.zone_scale.find(z);
      if (it != profile.zone_scale.end()) rate *= it->second;
      for (const auto& ev : profile.events) {
        if (IntervalIndex{iv.day, iv.slot} < ev.from || ev.to < IntervalIndex{iv.day, iv.slot})
          continue;
        if (ev.zones.empty() ||
            std::find(ev.zones.begin(), ev.zones.end(), z) != ev.zones.end())
          rate *= ev.multiplier;
      }
      long k = draw_poisson(rng, rate);
      Timestamp start = grid.start_of(iv);
      for (long i = 0; i < k; ++i) {
        Order o;
        char buf[24];
        std::snprintf(buf, sizeof buf, "o%08ld", counter++);
        o.id = buf;
        o.at = Timestamp{start.day, start.minute + int(draw_index(rng, 15))};
        o.pickup_zone = z;
        o.dest_zone = int(draw_index(rng, n_zones));
        orders.push_back(std::move(o));
      }
    }
  }
  return orders;
}

void write_orders(const std::string& path, const std::vector<Order>& orders) {
  CsvWriter w(path);
  w.row({"order_id", "timestamp", "pickup_zone", "dest_zone"});
  for (const auto& o : orders)
    w.row({o.id, o.at.iso(), std::to_string(o.pickup_zone), std::to_string(o.dest_zone)});
  w.close();
}

}  // namespace pdc
