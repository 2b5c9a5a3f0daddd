#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "evshare/capacity.hpp"
#include "evshare/instance.hpp"
#include "evshare/master.hpp"

namespace evshare::test {

// Two far-apart nodes, one period, 10 trips each way, and three prescribed
// stations: s1 reaches node 0 only, s2 and s3 reach node 1 only. Parameters
// pin v_1 = 10 and m_s = 1 with an ample budget.
struct AppendixFixture {
  Instance inst;
  CapacityProfile profile;
  std::vector<Station> stations;
};

inline AppendixFixture appendix_fixture() {
  AppendixFixture f;
  f.inst.net.nodes = {{0, {0.0, 0.0}}, {1, {3.0, 0.0}}};
  f.inst.net.period_lengths = {1.0};
  Grid<std::int64_t> od(2, 2);
  od(0, 1) = 10;
  od(1, 0) = 10;
  f.inst.net.od = {od};
  f.inst.econ.pair_cost = {1.0, 1.0};
  f.inst.econ.pair_capacity = {1, 1};
  f.inst.params.walk_radius = 0.5;
  f.inst.params.market_share = 1.0;
  f.inst.params.handling_time_hours = 0.2;  // v = 2 * floor(1 / 0.2) = 10
  f.inst.params.charge_rate_hours_per_km = 0.0;
  f.inst.params.budget = 1000.0;  // non-binding
  f.inst.validate();
  f.profile = compute_profile(f.inst.net, f.inst.params);

  const auto station_at = [&](int node) {
    Station s;
    s.neighborhood = {0, 0};
    s.alpha = {0.0, 0.0};
    s.neighborhood[node] = 1;
    s.alpha[node] = 1.0;
    s.pos = f.inst.net.nodes[node].pos;
    s.pair_cost = 1.0;
    s.pair_capacity = 1;
    return s;
  };
  f.stations = {station_at(0), station_at(1), station_at(1)};
  return f;
}

// Deterministic random instances for property suites. Geometry lives in a
// small box so neighborhoods of size > 1 exist; OD entries are small ints.
struct RandomInstanceConfig {
  int min_nodes = 2, max_nodes = 6;
  int min_periods = 1, max_periods = 3;
  double box = 2.0;
  std::int64_t max_od = 9;
  bool uniform_economics = false;  // equal costs, equal large capacities
};

inline Instance random_instance(std::uint64_t seed, const RandomInstanceConfig& cfg = {}) {
  std::mt19937_64 gen(seed);
  const auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  };
  const auto uniform_int = [&](int lo, int hi) {
    return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  Instance inst;
  const int N = uniform_int(cfg.min_nodes, cfg.max_nodes);
  const int T = uniform_int(cfg.min_periods, cfg.max_periods);
  for (int n = 0; n < N; ++n)
    inst.net.nodes.push_back({n, {uniform(0.0, cfg.box), uniform(0.0, cfg.box)}});
  for (int t = 0; t < T; ++t) {
    inst.net.period_lengths.push_back(uniform(1.0, 6.0));
    Grid<std::int64_t> od(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j && uniform(0.0, 1.0) < 0.7)
          od(i, j) = uniform_int(0, static_cast<int>(cfg.max_od));
    inst.net.od.push_back(std::move(od));
  }
  for (int n = 0; n < N; ++n) {
    if (cfg.uniform_economics) {
      inst.econ.pair_cost.push_back(2.0);
      inst.econ.pair_capacity.push_back(50);
    } else {
      inst.econ.pair_cost.push_back(uniform(1.0, 3.0));
      inst.econ.pair_capacity.push_back(uniform_int(1, 3));
    }
  }
  inst.params.walk_radius = 0.5;
  inst.params.market_share = 1.0;  // keeps v_t small so capacity can bind
  inst.params.handling_time_hours = uniform(0.05, 0.6);
  inst.params.charge_rate_hours_per_km = 0.01;
  inst.params.budget = cfg.uniform_economics ? 1e6 : uniform(2.0, 12.0);
  inst.validate();
  return inst;
}

}  // namespace evshare::test
