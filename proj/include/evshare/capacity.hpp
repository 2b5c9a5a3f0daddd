#pragma once

#include <cstdint>
#include <vector>

#include "evshare/instance.hpp"

namespace evshare {

// Per-period derived quantities governing the throughput of a parking pair.
struct CapacityProfile {
  std::vector<double> avg_trip_length;    // l_t, km
  std::vector<double> charge_time;        // a_t = u * l_t, hours
  std::vector<std::int64_t> pair_capacity;  // v_t, even, trips per period

  std::size_t period_count() const { return pair_capacity.size(); }
};

// Trip-count-weighted mean l1 trip distance; 0 for a period with no trips.
double average_trip_length(const TripNetwork& net, std::size_t t);

// v_t = 2 * floor(L_t / (k * (p + a_t / 2))); always even.
// Throws SolveError when k * (p + a_t / 2) == 0.
std::int64_t pair_capacity(double period_hours, double market_share, double handling_hours,
                           double charge_hours);

CapacityProfile compute_profile(const TripNetwork& net, const ServiceParameters& params);

}  // namespace evshare
