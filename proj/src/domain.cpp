#include "pdc/domain.hpp"

#include <fstream>

#include "json.hpp"

namespace pdc {

std::vector<std::string> validate_network(const ZoneRegistry& registry) {
  std::vector<std::string> problems;
  const auto& adj = registry.adjacency();
  std::size_t n = registry.size();
  if (n == 0) {
    problems.push_back("no zones");
    return problems;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (adj.at(i, i)) problems.push_back("zone " + std::to_string(i) + " is adjacent to itself");
    for (std::size_t j = i + 1; j < n; ++j)
      if (adj.at(i, j) != adj.at(j, i))
        problems.push_back("adjacency between zones " + std::to_string(i) + " and " +
                           std::to_string(j) + " is one-sided");
  }
  bool any_pickup = false;
  for (const auto& z : registry.zones()) any_pickup = any_pickup || z.is_pickup;
  if (!any_pickup) problems.push_back("no pickup zones");
  return problems;
}

ZoneRegistry load_zones(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  if (!doc.is_array()) throw InvalidArgument(path + ": expected a JSON array of zones");

  std::size_t n = doc.size();
  std::vector<ZoneInfo> zones(n);
  std::vector<std::vector<int>> lists(n);
  std::vector<bool> seen(n, false);
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("id"))
      throw InvalidArgument(path + ": each zone needs an 'id'");
    int id = entry.at("id").get<int>();
    if (id < 0 || std::size_t(id) >= n || seen[std::size_t(id)])
      throw InvalidArgument(path + ": zone ids must be 0.." + std::to_string(n - 1) +
                            " without repeats");
    seen[std::size_t(id)] = true;
    ZoneInfo z;
    z.id = id;
    z.lat = entry.at("lat").get<double>();
    z.lng = entry.at("lng").get<double>();
    z.is_pickup = entry.at("is_pickup").get<bool>();
    zones[std::size_t(id)] = z;
    for (const auto& a : entry.at("adjacent")) {
      int other = a.get<int>();
      if (other < 0 || std::size_t(other) >= n)
        throw InvalidArgument(path + ": zone " + std::to_string(id) +
                              " lists unknown neighbor " + std::to_string(other));
      lists[std::size_t(id)].push_back(other);
    }
  }

  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int j : lists[i]) adj.set(i, std::size_t(j), true);

  ZoneRegistry registry(std::move(zones), std::move(adj));
  auto problems = validate_network(registry);
  if (!problems.empty()) {
    std::string msg = path + ": invalid zone network";
    for (const auto& p : problems) msg += "; " + p;
    throw InvalidArgument(msg);
  }
  return registry;
}

std::vector<IntervalIndex> interval_sequence(const BusinessHours& hours, Date first, Date last) {
  hours.validate();
  if (last < first) throw InvalidArgument("interval sequence: day range is inverted");
  std::vector<IntervalIndex> out;
  int per_day = hours.slots_per_day();
  out.reserve(std::size_t((last - first + 1) * per_day));
  for (Date d = first; d <= last; d = d + 1)
    for (int s = 0; s < per_day; ++s) out.push_back(IntervalIndex{d, s});
  return out;
}

}  // namespace pdc
