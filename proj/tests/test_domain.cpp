#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "pdc/domain.hpp"

using namespace pdc;

TEST_CASE("date parse, format, weekday") {
  Date d = Date::parse("2024-03-04");
  CHECK(d.iso() == "2024-03-04");
  CHECK(d.weekday() == 0);  // a Monday
  CHECK((d + 6).weekday() == 6);
  CHECK((d + 7) - d == 7);
  CHECK(Date::parse("2024-02-29").iso() == "2024-02-29");
  CHECK_THROWS_AS(Date::parse("2023-02-29"), InvalidArgument);
  CHECK_THROWS_AS(Date::parse("2024-13-01"), InvalidArgument);
  CHECK_THROWS_AS(Date::parse("20240301"), InvalidArgument);
  CHECK_THROWS_AS(Date::parse("2024-03-04T10:00"), InvalidArgument);
}

TEST_CASE("timestamp parse and render") {
  Timestamp t = Timestamp::parse("2024-03-04T10:30");
  CHECK(t.day.iso() == "2024-03-04");
  CHECK(t.minute == 630);
  CHECK(t.iso() == "2024-03-04T10:30");
  CHECK(t.abs_minute() == (long long)t.day.serial * 1440 + 630);
  CHECK_THROWS_AS(Timestamp::parse("2024-03-04 10:30"), InvalidArgument);
  CHECK_THROWS_AS(Timestamp::parse("2024-03-04T25:00"), InvalidArgument);
}

TEST_CASE("business hours slots") {
  BusinessHours eu{630, 1290};  // 10:30 - 21:30
  eu.validate();
  CHECK(eu.slots_per_day() == 44);
  CHECK(eu.hour_of_slot(0) == 10);
  CHECK(eu.hour_of_slot(1) == 10);
  CHECK(eu.hour_of_slot(2) == 11);
  CHECK(eu.hour_of_slot(43) == 21);
  CHECK(eu.contains_minute(630));
  CHECK(!eu.contains_minute(1290));
  CHECK(eu.slot_of_minute(630) == 0);
  CHECK(eu.slot_of_minute(659) == 1);

  BusinessHours allday{0, 1440};
  CHECK(allday.slots_per_day() == 96);

  BusinessHours bad{600, 610};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  BusinessHours inverted{700, 600};
  CHECK_THROWS_AS(inverted.validate(), InvalidArgument);
}

TEST_CASE("interval sequence is chronological and dense") {
  BusinessHours hours{630, 1290};
  Date first = Date::parse("2024-03-04");
  auto seq = interval_sequence(hours, first, first + 2);
  REQUIRE(seq.size() == 3 * 44);
  CHECK(seq.front() == IntervalIndex{first, 0});
  CHECK(seq.back() == IntervalIndex{first + 2, 43});
  for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i - 1] < seq[i]);
  CHECK_THROWS_AS(interval_sequence(hours, first, first + (-1)), InvalidArgument);
}

TEST_CASE("interval grid lookups") {
  IntervalGrid grid(BusinessHours{630, 1290}, Date::parse("2024-03-04"), Date::parse("2024-03-05"));
  CHECK(grid.size() == 88);
  CHECK(grid.position(Date::parse("2024-03-04"), 630) == 0);
  CHECK(grid.position(Date::parse("2024-03-04"), 644) == 0);
  CHECK(grid.position(Date::parse("2024-03-04"), 645) == 1);
  CHECK(grid.position(Date::parse("2024-03-05"), 630) == 44);
  CHECK(grid.position(Date::parse("2024-03-04"), 629) == -1);
  CHECK(grid.position(Date::parse("2024-03-04"), 1290) == -1);
  CHECK(grid.position(Date::parse("2024-03-06"), 700) == -1);
  for (int p = 0; p < grid.size(); ++p) CHECK(grid.position_of(grid.at(p)) == p);
  CHECK(grid.start_of(grid.at(45)).iso() == "2024-03-05T10:45");
}

namespace {

ZoneRegistry make_registry(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                           const std::vector<int>& pickups) {
  std::vector<ZoneInfo> zones;
  for (std::size_t i = 0; i < n; ++i)
    zones.push_back(ZoneInfo{int(i), 50.0 + 0.01 * double(i), 4.0, false});
  for (int p : pickups) zones[std::size_t(p)].is_pickup = true;
  Adjacency adj(n);
  for (auto [a, b] : edges) {
    adj.set(std::size_t(a), std::size_t(b), true);
    adj.set(std::size_t(b), std::size_t(a), true);
  }
  return ZoneRegistry(std::move(zones), std::move(adj));
}

}  // namespace

TEST_CASE("network validation catches structural problems") {
  CHECK(validate_network(make_registry(3, {{0, 1}, {1, 2}}, {0})).empty());

  // One-sided adjacency.
  std::vector<ZoneInfo> zones = {{0, 50, 4, true}, {1, 50, 4, false}};
  Adjacency adj(2);
  adj.set(0, 1, true);
  auto problems = validate_network(ZoneRegistry(zones, adj));
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("one-sided") != std::string::npos);

  // Self loop and no pickups.
  Adjacency self(1);
  self.set(0, 0, true);
  problems = validate_network(ZoneRegistry({{0, 50, 4, false}}, self));
  CHECK(problems.size() == 2);
}

TEST_CASE("zones load from json") {
  std::string path = "test_zones_tmp.json";
  {
    std::ofstream out(path);
    out << R"([
      {"id": 0, "lat": 52.37, "lng": 4.89, "is_pickup": true, "adjacent": [1]},
      {"id": 1, "lat": 52.38, "lng": 4.90, "is_pickup": false, "adjacent": [0]}
    ])";
  }
  ZoneRegistry r = load_zones(path);
  CHECK(r.size() == 2);
  CHECK(r.zone(0).is_pickup);
  CHECK(r.adjacent(0, 1));
  CHECK(r.pickup_zones() == std::vector<int>{0});
  std::remove(path.c_str());
}

TEST_CASE("zones json rejects bad ids and asymmetry") {
  std::string path = "test_zones_bad_tmp.json";
  {
    std::ofstream out(path);
    out << R"([{"id": 1, "lat": 0, "lng": 0, "is_pickup": true, "adjacent": []}])";
  }
  CHECK_THROWS_AS(load_zones(path), InvalidArgument);
  {
    std::ofstream out(path);
    out << R"([
      {"id": 0, "lat": 0, "lng": 0, "is_pickup": true, "adjacent": [1]},
      {"id": 1, "lat": 0, "lng": 0, "is_pickup": false, "adjacent": []}
    ])";
  }
  CHECK_THROWS_AS(load_zones(path), InvalidArgument);
  CHECK_THROWS_AS(load_zones("no_such_file.json"), IoError);
  std::remove(path.c_str());
}

TEST_CASE("pickup subgraph keeps pickup order") {
  ZoneRegistry r = make_registry(4, {{0, 1}, {1, 2}, {2, 3}}, {1, 3});
  auto pickups = r.pickup_zones();
  REQUIRE(pickups == std::vector<int>{1, 3});
  Adjacency sub = r.pickup_subgraph(pickups);
  CHECK(sub.n == 2);
  CHECK(!sub.at(0, 1));  // zones 1 and 3 only touch through zone 2
  ZoneRegistry r2 = make_registry(3, {{0, 1}, {1, 2}}, {0, 1});
  Adjacency sub2 = r2.pickup_subgraph(r2.pickup_zones());
  CHECK(sub2.at(0, 1));
}
