#include "evshare/capacity.hpp"

#include <cmath>

#include "evshare/errors.hpp"

namespace evshare {

double average_trip_length(const TripNetwork& net, std::size_t t) {
  const std::size_t N = net.node_count();
  double weighted = 0.0;
  std::int64_t trips = 0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const std::int64_t c = net.od[t](i, j);
      if (c == 0) continue;
      weighted += static_cast<double>(c) * distance(net.nodes[i].pos, net.nodes[j].pos);
      trips += c;
    }
  return trips == 0 ? 0.0 : weighted / static_cast<double>(trips);
}

std::int64_t pair_capacity(double period_hours, double market_share, double handling_hours,
                           double charge_hours) {
  // Evaluation order is pinned: a full turnaround costs p + a/2 hours, the
  // market share scales it, then one floor before doubling.
  const double denom = market_share * (handling_hours + charge_hours / 2.0);
  if (denom == 0.0)
    throw SolveError("pair capacity divides by zero: k * (p + a/2) == 0");
  return 2 * static_cast<std::int64_t>(std::floor(period_hours / denom));
}

CapacityProfile compute_profile(const TripNetwork& net, const ServiceParameters& params) {
  CapacityProfile prof;
  const std::size_t T = net.period_count();
  prof.avg_trip_length.resize(T);
  prof.charge_time.resize(T);
  prof.pair_capacity.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    prof.avg_trip_length[t] = average_trip_length(net, t);
    prof.charge_time[t] = params.charge_rate_hours_per_km * prof.avg_trip_length[t];
    prof.pair_capacity[t] = pair_capacity(net.period_lengths[t], params.market_share,
                                          params.handling_time_hours, prof.charge_time[t]);
  }
  return prof;
}

}  // namespace evshare
