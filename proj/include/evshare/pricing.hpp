#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "evshare/capacity.hpp"
#include "evshare/instance.hpp"
#include "evshare/master.hpp"

namespace evshare {

// Candidate station coming out of the pricing MILP: a neighborhood, the
// per-period capacity duals it would earn, and its reduced benefit
// h = sum_t v_t U_t - q * cost.
struct PricingResult {
  std::vector<std::uint8_t> neighborhood;
  std::vector<double> period_price;       // U_{t,s'}
  std::vector<Grid<double>> selection;    // D^t, one unit of mass per period
  std::vector<double> alpha;
  double cost = 0.0;                      // provisional c_{s'}
  double reduced_benefit = 0.0;           // h
};

// Throughput-driven capacity interval for a fixed neighborhood.
struct FlowBounds {
  std::vector<std::int64_t> max_assignable;  // fbar^t = 2 min(B'f^-, B'f^+)
  int required_pairs = 0;                    // m^c = max_t ceil(fbar^t / v_t)
  int min_pairs = 0;                         // min m^N over the neighborhood
  int max_pairs = 0;                         // max m^N over the neighborhood
  int capped_pairs = 0;                      // m^cbar = min(m^c, m^max)
};

FlowBounds compute_flow_bounds(const std::vector<std::uint8_t>& neighborhood,
                               const FlowTotals& flows, const CapacityProfile& profile,
                               const NodeEconomics& econ);

// Greedy node subsets that are pairwise further than 2w apart; each yields
// the cut sum_{y in V} B_y <= 1 for the pricing MILP.
std::vector<std::vector<int>> valid_inequalities(const TripNetwork& net, double walk_radius);

// Largest node count coverable by one station center (the SB program).
int max_neighborhood_size(const TripNetwork& net, double walk_radius);

// Smallest achievable max-l1-distance from a convex-combination center to the
// covered nodes; a neighborhood is geometrically feasible iff this is <= w.
double min_cover_radius(const TripNetwork& net, const std::vector<std::uint8_t>& neighborhood);

// The (NS) pricing MILP at a fixed neighborhood size. `forbidden` carries the
// B column of every pooled station plus any rejected candidates; `cuts` the
// valid-inequality node sets. Returns the maximizer (whatever its sign) or
// nullopt when the MILP is infeasible at this size.
std::optional<PricingResult> price_station(const DualSolution& dual, const Instance& inst,
                                           const CapacityProfile& profile,
                                           const std::vector<std::vector<std::uint8_t>>& forbidden,
                                           const std::vector<std::vector<int>>& cuts,
                                           int target_size);

// Location refinement: solves the (OA^i) LP family on the priced neighborhood
// and registers the best station. Returns nullopt for zero-flow neighborhoods
// (they cannot improve the master).
std::optional<Station> refine_location(const PricingResult& pricing, double budget_price,
                                       const Instance& inst, const CapacityProfile& profile,
                                       const FlowTotals& flows, int threads = 1);

// Minimum-cost placement for a fixed neighborhood with the capacity floor
// m^cbar <= alpha' m^N + 0.5. Throws SolveError on an infeasible neighborhood.
Station min_cost_location(const std::vector<std::uint8_t>& neighborhood, const Instance& inst,
                          const FlowTotals& flows, const CapacityProfile& profile);

// Greatest-balanced-flow initial station (GF), finalized via
// min_cost_location. `objective_out` receives the balanced flow it attains.
Station greatest_flow_station(const Instance& inst, const CapacityProfile& profile,
                              double* objective_out = nullptr);

}  // namespace evshare
