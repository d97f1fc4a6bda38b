#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pdc/ingest.hpp"

using namespace pdc;

namespace {

ZoneRegistry two_zone_registry() {
  std::vector<ZoneInfo> zones = {{0, 52.37, 4.89, true}, {1, 52.38, 4.90, false}};
  Adjacency adj(2);
  adj.set(0, 1, true);
  adj.set(1, 0, true);
  return ZoneRegistry(std::move(zones), std::move(adj));
}

struct TempFile {
  std::string path;
  TempFile(std::string name, const std::string& body) : path(std::move(name)) {
    std::ofstream(path) << body;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("orders load and validate") {
  ZoneRegistry reg = two_zone_registry();
  TempFile f("orders_tmp.csv",
             "order_id,timestamp,pickup_zone,dest_zone\n"
             "a1,2024-03-04T11:00,0,1\n"
             "a2,2024-03-04T11:07,0,0\n");
  auto orders = load_orders(f.path, reg);
  REQUIRE(orders.size() == 2);
  CHECK(orders[0].id == "a1");
  CHECK(orders[0].at.minute == 660);
  CHECK(orders[1].dest_zone == 0);

  TempFile bad_zone("orders_bad1_tmp.csv",
                    "order_id,timestamp,pickup_zone,dest_zone\na,2024-03-04T11:00,5,0\n");
  CHECK_THROWS_WITH_AS(load_orders(bad_zone.path, reg), doctest::Contains("row 2"),
                       InvalidArgument);

  TempFile not_pickup("orders_bad2_tmp.csv",
                      "order_id,timestamp,pickup_zone,dest_zone\na,2024-03-04T11:00,1,0\n");
  CHECK_THROWS_WITH_AS(load_orders(not_pickup.path, reg), doctest::Contains("pickup"),
                       InvalidArgument);

  CHECK_THROWS_AS(load_orders("missing_orders.csv", reg), IoError);
}

TEST_CASE("aggregation covers the grid and counts drops") {
  ZoneRegistry reg = two_zone_registry();
  IntervalGrid grid(BusinessHours{630, 1290}, Date::parse("2024-03-04"), Date::parse("2024-03-04"));
  std::vector<Order> orders = {
      {"a", Timestamp::parse("2024-03-04T10:30"), 0, 1},
      {"b", Timestamp::parse("2024-03-04T10:44"), 0, 1},
      {"c", Timestamp::parse("2024-03-04T10:45"), 0, 0},
      {"d", Timestamp::parse("2024-03-04T09:00"), 0, 1},   // before opening
      {"e", Timestamp::parse("2024-03-05T11:00"), 0, 1},   // day after the grid
  };
  AggregateResult res = aggregate_orders(orders, reg, grid);
  REQUIRE(res.series.size() == 1);  // only pickup zones get a series
  const DemandSeries& s = res.series.at(0);
  REQUIRE(int(s.counts.size()) == grid.size());
  CHECK(s.counts[0] == 2.0);
  CHECK(s.counts[1] == 1.0);
  for (std::size_t i = 2; i < s.counts.size(); ++i) CHECK(s.counts[i] == 0.0);
  CHECK(res.dropped == 2);
}

TEST_CASE("feature rows describe the target interval") {
  BusinessHours hours{630, 1290};
  DemandSeries s;
  s.zone = 0;
  s.intervals = interval_sequence(hours, Date::parse("2024-03-04"), Date::parse("2024-03-05"));
  s.counts.assign(s.intervals.size(), 0.0);
  for (std::size_t i = 0; i < s.counts.size(); ++i) s.counts[i] = double(i % 7);

  std::set<Date> holidays = {Date::parse("2024-03-05")};

  SUBCASE("without lags") {
    FeatureTable t = assemble_features(s, hours, nullptr, holidays, false);
    CHECK(t.schema == std::vector<std::string>{"hour", "dow", "holiday"});
    REQUIRE(t.rows() == s.intervals.size());
    auto r0 = t.row(0);
    CHECK(r0[0] == 10.0);  // slot 0 starts 10:30
    CHECK(r0[1] == 0.0);   // Monday
    CHECK(r0[2] == 0.0);
    auto r_tue = t.row(44);
    CHECK(r_tue[1] == 1.0);
    CHECK(r_tue[2] == 1.0);  // holiday flag
    CHECK(t.targets[5] == 5.0);
  }

  SUBCASE("lags skip the first four intervals") {
    FeatureTable t = assemble_features(s, hours, nullptr, holidays, true);
    REQUIRE(t.schema.size() == 7);
    CHECK(t.schema[3] == "lag1");
    REQUIRE(t.rows() == s.intervals.size() - 4);
    CHECK(t.row_interval[0] == s.intervals[4]);
    auto r0 = t.row(0);  // target count 4, lags walk backwards
    CHECK(t.targets[0] == 4.0);
    CHECK(r0[3] == 3.0);
    CHECK(r0[4] == 2.0);
    CHECK(r0[5] == 1.0);
    CHECK(r0[6] == 0.0);
    // Lags cross the day boundary along the series.
    auto r_first_tue = t.row(40);
    CHECK(t.row_interval[40] == IntervalIndex{Date::parse("2024-03-05"), 0});
    CHECK(r_first_tue[3] == s.counts[43]);
    CHECK(r_first_tue[6] == s.counts[40]);
  }
}

TEST_CASE("weather joins by hour and reports gaps") {
  BusinessHours hours{630, 690};  // 10:30 - 11:30, four slots
  DemandSeries s;
  s.zone = 0;
  s.intervals = interval_sequence(hours, Date::parse("2024-03-04"), Date::parse("2024-03-04"));
  s.counts.assign(4, 1.0);

  std::vector<WeatherRecord> weather = {
      {Date::parse("2024-03-04"), 10, 5.5, 0.2, 3.0},
      {Date::parse("2024-03-04"), 11, 6.5, 0.0, 4.0},
  };
  FeatureTable t = assemble_features(s, hours, &weather, {}, false);
  REQUIRE(t.schema.size() == 6);
  CHECK(t.row(0)[3] == 5.5);   // 10:30 uses hour 10
  CHECK(t.row(1)[3] == 5.5);   // 10:45 too
  CHECK(t.row(2)[3] == 6.5);   // 11:00 switches
  CHECK(t.row(3)[5] == 4.0);

  std::vector<WeatherRecord> holey = {{Date::parse("2024-03-04"), 10, 5.5, 0.2, 3.0}};
  CHECK_THROWS_WITH_AS(assemble_features(s, hours, &holey, {}, false),
                       doctest::Contains("2024-03-04 hour 11"), InvalidArgument);
}

TEST_CASE("weather and holiday files parse") {
  TempFile w("weather_tmp.csv",
             "date,hour,temp_c,precip_mm,wind_mps\n"
             "2024-03-04,10,5.5,0.2,3.0\n");
  auto recs = load_weather(w.path);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].hour == 10);
  CHECK(recs[0].precip_mm == 0.2);

  TempFile h("holidays_tmp.csv", "2024-03-05\n2024-12-25\n");
  auto days = load_holidays(h.path);
  CHECK(days.size() == 2);
  CHECK(days.count(Date::parse("2024-12-25")) == 1);
}

TEST_CASE("synthetic orders are deterministic and follow the profile") {
  ZoneRegistry reg = two_zone_registry();
  IntervalGrid grid(BusinessHours{630, 1290}, Date::parse("2024-03-04"), Date::parse("2024-03-17"));
  SynthProfile profile;
  profile.hourly_base.assign(24, 2.0);
  profile.dow_multiplier.assign(7, 1.0);

  auto a = generate_synthetic(reg, grid, profile, 99);
  auto b = generate_synthetic(reg, grid, profile, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].at == b[i].at);
    CHECK(a[i].dest_zone == b[i].dest_zone);
  }
  auto c = generate_synthetic(reg, grid, profile, 100);
  CHECK(a.size() != c.size());  // different seed, different draw sequence

  // Mean per interval should sit near the rate (14 days x 44 slots).
  double per_interval = double(a.size()) / double(grid.size());
  CHECK(per_interval == doctest::Approx(2.0).epsilon(0.10));

  for (const auto& o : a) {
    CHECK(o.pickup_zone == 0);
    CHECK(grid.hours.contains_minute(o.at.minute));
  }
}

TEST_CASE("synthetic events shift the level where they apply") {
  std::vector<ZoneInfo> zones = {{0, 0, 0, true}, {1, 0, 0, true}};
  ZoneRegistry reg(zones, Adjacency(2));
  IntervalGrid grid(BusinessHours{630, 1290}, Date::parse("2024-03-04"), Date::parse("2024-03-10"));
  SynthProfile profile;
  profile.hourly_base.assign(24, 3.0);
  profile.dow_multiplier.assign(7, 1.0);
  LevelShiftEvent ev;
  ev.zones = {1};
  ev.from = IntervalIndex{Date::parse("2024-03-06"), 0};
  ev.to = IntervalIndex{Date::parse("2024-03-07"), 43};
  ev.multiplier = 4.0;
  profile.events.push_back(ev);

  auto orders = generate_synthetic(reg, grid, profile, 7);
  std::map<std::pair<int, int>, long> counts;  // (zone, day serial) -> orders
  for (const auto& o : orders) ++counts[{o.pickup_zone, o.at.day.serial}];
  Date quiet = Date::parse("2024-03-05"), busy = Date::parse("2024-03-06");
  double z1_quiet = double(counts[{1, quiet.serial}]);
  double z1_busy = double(counts[{1, busy.serial}]);
  double z0_quiet = double(counts[{0, quiet.serial}]);
  double z0_busy = double(counts[{0, busy.serial}]);
  CHECK(z1_busy > 2.5 * z1_quiet);         // shifted zone jumps
  CHECK(z0_busy < 1.5 * z0_quiet);         // untouched zone does not share it
}

TEST_CASE("synthetic profile validation") {
  ZoneRegistry reg = two_zone_registry();
  IntervalGrid grid(BusinessHours{630, 1290}, Date::parse("2024-03-04"), Date::parse("2024-03-04"));
  SynthProfile p;
  p.hourly_base.assign(23, 1.0);
  p.dow_multiplier.assign(7, 1.0);
  CHECK_THROWS_AS(generate_synthetic(reg, grid, p, 1), InvalidArgument);
  p.hourly_base.assign(24, 1.0);
  p.zone_scale[9] = 1.0;
  CHECK_THROWS_AS(generate_synthetic(reg, grid, p, 1), InvalidArgument);
}

TEST_CASE("orders round-trip through csv") {
  ZoneRegistry reg = two_zone_registry();
  std::vector<Order> orders = {
      {"x1", Timestamp::parse("2024-03-04T12:00"), 0, 1},
      {"x2", Timestamp::parse("2024-03-04T12:03"), 0, 0},
  };
  std::string path = "orders_rt_tmp.csv";
  write_orders(path, orders);
  auto back = load_orders(path, reg);
  REQUIRE(back.size() == 2);
  CHECK(back[1].id == "x2");
  CHECK(back[1].at.iso() == "2024-03-04T12:03");
  std::remove(path.c_str());
}
