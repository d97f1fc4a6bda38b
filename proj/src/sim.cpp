#include "pdc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "pdc/rng.hpp"

namespace pdc {

HopMatrix HopMatrix::build(const Adjacency& adj) {
  HopMatrix h;
  h.n = adj.n;
  h.hops.assign(adj.n * adj.n, -1);
  for (std::size_t src = 0; src < adj.n; ++src) {
    auto* row = h.hops.data() + src * adj.n;
    row[src] = 0;
    std::queue<std::size_t> q;
    q.push(src);
    while (!q.empty()) {
      std::size_t z = q.front();
      q.pop();
      for (std::size_t j = 0; j < adj.n; ++j)
        if (adj.at(z, j) && row[j] < 0) {
          row[j] = row[z] + 1;
          q.push(j);
        }
    }
  }
  return h;
}

int travel_time(int i, int j, const HopMatrix& hops, double minutes_per_hop) {
  if (i < 0 || j < 0 || std::size_t(i) >= hops.n || std::size_t(j) >= hops.n)
    throw InvalidArgument("travel_time: zone out of range");
  if (!(minutes_per_hop > 0.0)) throw InvalidArgument("travel_time: minutes_per_hop must be positive");
  if (i == j) return 0;
  int h = hops.at(i, j);
  if (h < 0)
    throw InvalidArgument("no path between zones " + std::to_string(i) + " and " +
                          std::to_string(j));
  return int(std::ceil(double(h) * minutes_per_hop));
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "none") return PolicyKind::None;
  if (name == "nearest_pickup") return PolicyKind::NearestPickup;
  if (name == "forward_looking") return PolicyKind::ForwardLooking;
  throw InvalidArgument("unknown relocation policy '" + name + "'");
}

const char* policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::None: return "none";
    case PolicyKind::NearestPickup: return "nearest_pickup";
    case PolicyKind::ForwardLooking: return "forward_looking";
  }
  return "unknown";
}

void SimConfig::validate() const {
  if (fleet_size < 1) throw InvalidArgument("simulation: fleet_size must be positive");
  if (service_minutes < 0) throw InvalidArgument("simulation: negative service_minutes");
  if (idle_threshold < 1) throw InvalidArgument("simulation: idle_threshold must be positive");
  if (!(minutes_per_hop > 0.0))
    throw InvalidArgument("simulation: minutes_per_hop must be positive");
  hours.validate();
}

namespace {

struct Courier {
  int zone = 0;
  bool busy = false;
  long long busy_until = 0;
  long long idle_since = 0;
};

}  // namespace

SimResult run_simulation(std::vector<Order> orders, const ZoneRegistry& registry,
                         const SimConfig& config, const RelocationPolicy& policy) {
  config.validate();
  if (policy.kind == PolicyKind::ForwardLooking && !policy.oracle)
    throw InvalidArgument("forward_looking policy needs a demand oracle");
  std::size_t n_zones = registry.size();
  if (n_zones == 0) throw InvalidArgument("simulation: empty zone registry");
  for (const auto& o : orders) {
    if (o.pickup_zone < 0 || std::size_t(o.pickup_zone) >= n_zones || o.dest_zone < 0 ||
        std::size_t(o.dest_zone) >= n_zones)
      throw InvalidArgument("simulation: order " + o.id + " references an unknown zone");
  }

  HopMatrix hops = HopMatrix::build(registry.adjacency());
  auto minutes = [&](int a, int b) { return travel_time(a, b, hops, config.minutes_per_hop); };
  auto reachable = [&](int a, int b) { return a == b || hops.at(a, b) >= 0; };

  SimResult res;
  std::stable_sort(orders.begin(), orders.end(),
                   [](const Order& a, const Order& b) { return a.at.abs_minute() < b.at.abs_minute(); });

  std::vector<Order> live;
  live.reserve(orders.size());
  for (auto& o : orders) {
    if (config.hours.contains_minute(o.at.minute))
      live.push_back(std::move(o));
    else
      ++res.kpis.skipped;
  }
  if (live.empty()) return res;

  Date first_day = live.front().at.day;
  Date last_day = live.back().at.day;

  // Couriers start idle, scattered uniformly over all zones.
  Rng rng = make_rng(config.seed);
  long long start = Timestamp{first_day, config.hours.open_minute}.abs_minute();
  std::vector<Courier> fleet(std::size_t(config.fleet_size));
  for (auto& c : fleet) {
    c.zone = int(draw_index(rng, n_zones));
    c.busy_until = start;
    c.idle_since = start;
  }

  auto pickups = registry.pickup_zones();
  std::size_t cursor = 0;
  double delivered_minutes = 0.0;

  for (Date day = first_day; day <= last_day; day = day + 1) {
    for (int m = config.hours.open_minute; m < config.hours.close_minute; ++m) {
      long long now = Timestamp{day, m}.abs_minute();

      for (auto& c : fleet)
        if (c.busy && c.busy_until <= now) {
          c.busy = false;
          c.idle_since = c.busy_until;
        }

      while (cursor < live.size() && live[cursor].at.abs_minute() == now) {
        const Order& o = live[cursor];
        ++cursor;
        ++res.kpis.arrived;
        int pick = -1, pick_t = 0;
        for (std::size_t ci = 0; ci < fleet.size(); ++ci) {
          const Courier& c = fleet[ci];
          if (c.busy || !reachable(c.zone, o.pickup_zone)) continue;
          int t = minutes(c.zone, o.pickup_zone);
          if (pick < 0 || t < pick_t) {
            pick = int(ci);
            pick_t = t;
          }
        }
        OrderOutcome out;
        out.order_id = o.id;
        if (pick < 0 || !reachable(o.pickup_zone, o.dest_zone)) {
          out.rejected = true;
          ++res.kpis.rejected;
        } else {
          Courier& c = fleet[std::size_t(pick)];
          int duration =
              pick_t + minutes(o.pickup_zone, o.dest_zone) + 2 * config.service_minutes;
          c.busy = true;
          c.busy_until = now + duration;
          c.zone = o.dest_zone;
          out.courier = pick;
          out.delivery_minutes = duration;
          ++res.kpis.delivered;
          delivered_minutes += double(duration);
        }
        res.orders.push_back(std::move(out));
      }

      if (policy.kind == PolicyKind::None) continue;
      for (std::size_t ci = 0; ci < fleet.size(); ++ci) {
        Courier& c = fleet[ci];
        if (c.busy || now - c.idle_since < config.idle_threshold) continue;
        int target = c.zone;
        if (policy.kind == PolicyKind::NearestPickup) {
          int best_t = 0;
          bool found = false;
          for (int z : pickups) {
            if (!reachable(c.zone, z)) continue;
            int t = minutes(c.zone, z);
            if (!found || t < best_t) {
              found = true;
              best_t = t;
              target = z;
            }
          }
        } else {
          // Shortage = forecast demand minus idle couriers already there;
          // stay wins ties, then the lowest zone id.
          auto idle_in = [&](int z) {
            int k = 0;
            for (const auto& other : fleet)
              if (!other.busy && other.zone == z) ++k;
            return k;
          };
          double best_s = policy.oracle(c.zone, day, m) - double(idle_in(c.zone));
          for (int z : registry.adjacency().neighbors(std::size_t(c.zone))) {
            double s = policy.oracle(z, day, m) - double(idle_in(z));
            if (s > best_s) {
              best_s = s;
              target = z;
            }
          }
        }
        if (target == c.zone) {
          c.idle_since = now;  // deliberate stay, timer restarts
        } else {
          c.busy = true;
          c.busy_until = now + minutes(c.zone, target);
          c.zone = target;
          ++res.kpis.relocations;
        }
      }
    }
  }

  if (res.kpis.arrived != res.kpis.delivered + res.kpis.rejected)
    throw InvariantError("simulation lost orders");
  if (res.kpis.delivered > 0)
    res.kpis.mean_delivery_minutes = delivered_minutes / double(res.kpis.delivered);
  if (res.kpis.arrived > 0)
    res.kpis.rejection_rate = double(res.kpis.rejected) / double(res.kpis.arrived);
  return res;
}

std::vector<PolicyStats> compare_policies(const std::vector<Order>& orders,
                                          const ZoneRegistry& registry, const SimConfig& config,
                                          const std::vector<RelocationPolicy>& policies,
                                          int repetitions, std::uint64_t seed) {
  if (repetitions < 1) throw InvalidArgument("compare_policies: repetitions must be positive");
  std::vector<RelocationPolicy> all;
  bool has_none = false;
  for (const auto& p : policies) has_none = has_none || p.kind == PolicyKind::None;
  if (!has_none) all.push_back(RelocationPolicy{PolicyKind::None, nullptr});
  all.insert(all.end(), policies.begin(), policies.end());

  std::vector<PolicyStats> stats(all.size());
  for (std::size_t p = 0; p < all.size(); ++p) {
    stats[p].kind = all[p].kind;
    stats[p].label = policy_name(all[p].kind);
  }

  // Paired repetitions: the same seed (and so the same starting fleet) is
  // used for every policy within a repetition.
  for (int r = 0; r < repetitions; ++r) {
    SimConfig cfg = config;
    cfg.seed = seed + std::uint64_t(r);
    for (std::size_t p = 0; p < all.size(); ++p) {
      SimResult res = run_simulation(orders, registry, cfg, all[p]);
      stats[p].mean_delivery_minutes += res.kpis.mean_delivery_minutes;
      stats[p].rejection_rate += res.kpis.rejection_rate;
      stats[p].mean_relocations += double(res.kpis.relocations);
    }
  }
  for (auto& s : stats) {
    s.mean_delivery_minutes /= double(repetitions);
    s.rejection_rate /= double(repetitions);
    s.mean_relocations /= double(repetitions);
  }

  double base = 0.0;
  for (const auto& s : stats)
    if (s.kind == PolicyKind::None) base = s.mean_delivery_minutes;
  for (auto& s : stats)
    s.reduction_vs_none_pct =
        base == 0.0 ? 0.0 : 100.0 * (base - s.mean_delivery_minutes) / base;
  return stats;
}

}  // namespace pdc
