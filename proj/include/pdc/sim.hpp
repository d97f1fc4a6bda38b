#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdc/domain.hpp"

namespace pdc {

// Hop counts between all zone pairs (BFS over the adjacency).
struct HopMatrix {
  std::size_t n = 0;
  std::vector<int> hops;  // -1 when unreachable

  static HopMatrix build(const Adjacency& adj);
  int at(int i, int j) const { return hops[std::size_t(i) * n + std::size_t(j)]; }
};

// Minutes to go from zone i to zone j, rounded up. Unreachable pairs are a
// network defect and throw.
int travel_time(int i, int j, const HopMatrix& hops, double minutes_per_hop);

enum class PolicyKind { None, NearestPickup, ForwardLooking };

PolicyKind policy_from_name(const std::string& name);
const char* policy_name(PolicyKind p);

// Demand estimate for the 15-minute interval after `minute` of `day`;
// forward-looking relocation ranks zones with it.
using DemandOracle = std::function<double(int zone, Date day, int minute)>;

struct RelocationPolicy {
  PolicyKind kind = PolicyKind::None;
  DemandOracle oracle;  // required for ForwardLooking
};

struct SimConfig {
  int fleet_size = 30;
  int service_minutes = 3;   // applied twice: pickup and handover
  int idle_threshold = 5;    // idle minutes before relocation kicks in
  double minutes_per_hop = 4.0;
  BusinessHours hours;
  std::uint64_t seed = 0;

  void validate() const;
};

struct OrderOutcome {
  std::string order_id;
  bool rejected = false;
  int courier = -1;
  int delivery_minutes = 0;  // assignment to handover
};

struct SimKpis {
  long arrived = 0;
  long delivered = 0;
  long rejected = 0;
  long skipped = 0;  // outside business hours, never simulated
  long relocations = 0;
  double mean_delivery_minutes = 0.0;
  double rejection_rate = 0.0;
};

struct SimResult {
  std::vector<OrderOutcome> orders;
  SimKpis kpis;
};

// Minute-stepped fleet simulation across the order span's business days.
// Each minute releases finished couriers, assigns arriving orders to the
// nearest idle courier (rejecting when none is free), then lets idle
// couriers relocate under the policy.
SimResult run_simulation(std::vector<Order> orders, const ZoneRegistry& registry,
                         const SimConfig& config, const RelocationPolicy& policy);

struct PolicyStats {
  PolicyKind kind = PolicyKind::None;
  std::string label;
  double mean_delivery_minutes = 0.0;  // averaged over repetitions
  double rejection_rate = 0.0;
  double mean_relocations = 0.0;
  double reduction_vs_none_pct = 0.0;
};

// Same repetitions for every policy: repetition r seeds courier placement
// with seed + r, so policies face identical starting fleets.
std::vector<PolicyStats> compare_policies(const std::vector<Order>& orders,
                                          const ZoneRegistry& registry, const SimConfig& config,
                                          const std::vector<RelocationPolicy>& policies,
                                          int repetitions, std::uint64_t seed);

}  // namespace pdc
