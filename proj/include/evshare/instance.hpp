#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evshare/grid.hpp"

namespace evshare {

struct Point {
  double x = 0.0;  // km
  double y = 0.0;  // km
  bool operator==(const Point&) const = default;
};

// l1 distance in km.
double distance(const Point& a, const Point& b);

struct Node {
  int id = 0;
  Point pos;
  bool operator==(const Node&) const = default;
};

// Trip demand: nodes plus one origin-destination matrix per time period.
struct TripNetwork {
  std::vector<Node> nodes;
  std::vector<double> period_lengths;     // L_t, hours
  std::vector<Grid<std::int64_t>> od;     // od[t](origin, destination) >= 0

  std::size_t node_count() const { return nodes.size(); }
  std::size_t period_count() const { return period_lengths.size(); }

  // Throws ValidationError naming the violated invariant.
  void validate() const;

  bool operator==(const TripNetwork&) const = default;
};

// Per-node construction economics for a pair of parking spaces.
struct NodeEconomics {
  std::vector<double> pair_cost;   // c^N, > 0
  std::vector<int> pair_capacity;  // m^N, >= 1

  void validate(std::size_t node_count) const;
  bool operator==(const NodeEconomics&) const = default;
};

struct ServiceParameters {
  double walk_radius = 0.5;              // w, km
  double market_share = 0.005;           // k, fraction of OD flow served
  double handling_time_hours = 1.0 / 6;  // p, average of park and leave times
  double charge_rate_hours_per_km = 4.0 / 250;  // u
  double budget = 0.0;                   // b

  void validate() const;
  bool operator==(const ServiceParameters&) const = default;
};

struct Instance {
  TripNetwork net;
  NodeEconomics econ;
  ServiceParameters params;

  void validate() const;
  bool operator==(const Instance&) const = default;
};

// Per-period inward/outward trip totals per node.
struct FlowTotals {
  Grid<std::int64_t> outward;  // f^{t-}(t, n): row sums of OD^t
  Grid<std::int64_t> inward;   // f^{t+}(t, n): column sums of OD^t
  bool operator==(const FlowTotals&) const = default;
};

FlowTotals compute_flows(const TripNetwork& net);

// d_n = max_{n'} d(n, n'); big-M constants for station geometry.
std::vector<double> max_station_distance(const TripNetwork& net);

struct SyntheticConfig {
  int node_count = 20;
  std::uint64_t seed = 1;
  double x_min = 0.0, y_min = 0.0, x_max = 10.0, y_max = 10.0;
  std::vector<double> period_lengths = {3, 6, 4, 5, 6};
  std::vector<std::int64_t> trips_per_period = {400, 1200, 800, 900, 600};
  double gravity_lambda = 2.0;  // km, OD intensity ~ exp(-d / lambda)
  // Optional clustered geometry: nodes are scattered around cluster centres
  // instead of uniformly over the bounds. 0 = uniform.
  int clusters = 0;
  double cluster_radius = 0.24;  // km, per-coordinate jitter around a centre
  ServiceParameters service;     // budget field is overwritten by the 0.3 rule
};

// Deterministic synthetic city following the distance-to-centre cost and
// capacity rules; OD is drawn from an exponential-decay gravity kernel.
Instance generate_synthetic(const SyntheticConfig& cfg);

// JSON instance file round-trip. load validates; both throw ParseError /
// ValidationError with field context.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
Instance parse_instance_json(const std::string& text);
std::string instance_to_json(const Instance& inst);

}  // namespace evshare
