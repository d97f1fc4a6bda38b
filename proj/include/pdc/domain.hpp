#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdc/dates.hpp"
#include "pdc/errors.hpp"

namespace pdc {

// Symmetric zone adjacency, dense; N stays small (tens of zones).
struct Adjacency {
  std::size_t n = 0;
  std::vector<std::uint8_t> cells;  // row-major n*n

  explicit Adjacency(std::size_t size = 0) : n(size), cells(size * size, 0) {}

  bool at(std::size_t i, std::size_t j) const { return cells[i * n + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { cells[i * n + j] = v ? 1 : 0; }

  std::vector<int> neighbors(std::size_t i) const {
    std::vector<int> out;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && at(i, j)) out.push_back(int(j));
    return out;
  }
};

struct ZoneInfo {
  int id = 0;
  double lat = 0.0;
  double lng = 0.0;
  bool is_pickup = false;
};

// The service area: zones plus their adjacency. Zone ids are positions in
// the registry (0..N-1); loaders enforce that.
class ZoneRegistry {
 public:
  ZoneRegistry() = default;
  ZoneRegistry(std::vector<ZoneInfo> zones, Adjacency adj)
      : zones_(std::move(zones)), adj_(std::move(adj)) {
    if (adj_.n != zones_.size()) throw InvalidArgument("adjacency size does not match zone count");
  }

  std::size_t size() const { return zones_.size(); }
  const ZoneInfo& zone(int id) const {
    if (id < 0 || std::size_t(id) >= zones_.size())
      throw InvalidArgument("zone id " + std::to_string(id) + " out of range");
    return zones_[std::size_t(id)];
  }
  const std::vector<ZoneInfo>& zones() const { return zones_; }
  const Adjacency& adjacency() const { return adj_; }
  bool adjacent(int i, int j) const { return adj_.at(std::size_t(i), std::size_t(j)); }

  std::vector<int> pickup_zones() const {
    std::vector<int> out;
    for (const auto& z : zones_)
      if (z.is_pickup) out.push_back(z.id);
    return out;
  }

  // Adjacency restricted to the pickup zones, in pickup-zone order.
  Adjacency pickup_subgraph(const std::vector<int>& pickups) const {
    Adjacency sub(pickups.size());
    for (std::size_t a = 0; a < pickups.size(); ++a)
      for (std::size_t b = 0; b < pickups.size(); ++b)
        sub.set(a, b, adj_.at(std::size_t(pickups[a]), std::size_t(pickups[b])));
    return sub;
  }

 private:
  std::vector<ZoneInfo> zones_;
  Adjacency adj_;
};

// Human-readable structural problems; empty means the network is usable.
std::vector<std::string> validate_network(const ZoneRegistry& registry);

// zones.json: array of {id, lat, lng, is_pickup, adjacent:[ids]}.
// Throws if ids are not 0..N-1 or validate_network reports problems.
ZoneRegistry load_zones(const std::string& path);

// Daily service window in minutes of day, half-open [open, close).
struct BusinessHours {
  int open_minute = 630;
  int close_minute = 1290;

  int span() const { return close_minute - open_minute; }
  int slots_per_day() const { return span() / 15; }
  // Hour of day at the start of a slot.
  int hour_of_slot(int slot) const { return (open_minute + slot * 15) / 60; }
  bool contains_minute(int minute) const { return minute >= open_minute && minute < close_minute; }
  int slot_of_minute(int minute) const { return (minute - open_minute) / 15; }

  void validate() const {
    if (close_minute <= open_minute) throw InvalidArgument("business hours: close must be after open");
    if (span() % 15 != 0)
      throw InvalidArgument("business hours: window must divide into 15-minute slots");
  }
};

// One 15-minute slot on one day.
struct IntervalIndex {
  Date day;
  int slot = 0;

  friend auto operator<=>(const IntervalIndex&, const IntervalIndex&) = default;
};

// All slots for the inclusive day range, chronological.
std::vector<IntervalIndex> interval_sequence(const BusinessHours& hours, Date first, Date last);

// Interval lookup over a contiguous day range.
struct IntervalGrid {
  BusinessHours hours;
  Date first_day;
  int n_days = 0;

  IntervalGrid() = default;
  IntervalGrid(BusinessHours h, Date first, Date last) : hours(h), first_day(first) {
    hours.validate();
    if (last < first) throw InvalidArgument("interval grid: day range is inverted");
    n_days = (last - first) + 1;
  }

  int slots_per_day() const { return hours.slots_per_day(); }
  int size() const { return n_days * slots_per_day(); }

  IntervalIndex at(int pos) const {
    return IntervalIndex{first_day + pos / slots_per_day(), pos % slots_per_day()};
  }

  // -1 when the timestamp falls outside the grid.
  int position(Date day, int minute) const {
    int d = day - first_day;
    if (d < 0 || d >= n_days || !hours.contains_minute(minute)) return -1;
    return d * slots_per_day() + hours.slot_of_minute(minute);
  }

  int position_of(const IntervalIndex& iv) const {
    int d = iv.day - first_day;
    if (d < 0 || d >= n_days || iv.slot < 0 || iv.slot >= slots_per_day()) return -1;
    return d * slots_per_day() + iv.slot;
  }

  // Timestamp of the start of a slot.
  Timestamp start_of(const IntervalIndex& iv) const {
    return Timestamp{iv.day, hours.open_minute + iv.slot * 15};
  }
};

// Per-zone counts over a chronological interval sequence.
struct DemandSeries {
  int zone = 0;
  std::vector<IntervalIndex> intervals;
  std::vector<double> counts;
};

struct Order {
  std::string id;
  Timestamp at;
  int pickup_zone = 0;
  int dest_zone = 0;
};

}  // namespace pdc
