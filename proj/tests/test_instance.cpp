#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "evshare/errors.hpp"
#include "evshare/instance.hpp"
#include "fixtures.hpp"

using namespace evshare;

TEST_CASE("l1 distance basics") {
  CHECK(distance({0, 0}, {0, 0}) == 0.0);
  CHECK(distance({0, 0}, {1, 2}) == 3.0);
  CHECK(distance({-1, 0}, {1, -1}) == 3.0);
}

TEST_CASE("l1 distance symmetry and triangle inequality") {
  std::mt19937_64 gen(7);
  const auto u = [&] { return ((gen() >> 11) * 0x1.0p-53) * 20.0 - 10.0; };
  for (int k = 0; k < 200; ++k) {
    Point a{u(), u()}, b{u(), u()}, c{u(), u()};
    CHECK(distance(a, b) == doctest::Approx(distance(b, a)));
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12);
    CHECK(distance(a, b) >= 0.0);
  }
}

TEST_CASE("flow totals") {
  TripNetwork net;
  net.nodes = {{0, {0, 0}}, {1, {1, 0}}};
  net.period_lengths = {1.0};
  Grid<std::int64_t> od(2, 2);
  od(0, 1) = 10;
  od(1, 0) = 10;
  net.od = {od};
  const FlowTotals f = compute_flows(net);
  CHECK(f.outward(0, 0) == 10);
  CHECK(f.outward(0, 1) == 10);
  CHECK(f.inward(0, 0) == 10);
  CHECK(f.inward(0, 1) == 10);

  net.od[0] = Grid<std::int64_t>(2, 2);
  const FlowTotals zero = compute_flows(net);
  CHECK(zero.outward(0, 0) == 0);
  CHECK(zero.inward(0, 1) == 0);

  net.od[0](0, 1) = 3;
  const FlowTotals tri = compute_flows(net);
  CHECK(tri.outward(0, 0) == 3);
  CHECK(tri.outward(0, 1) == 0);
  CHECK(tri.inward(0, 0) == 0);
  CHECK(tri.inward(0, 1) == 3);
}

TEST_CASE("per-period inward and outward totals agree on random instances") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = test::random_instance(seed);
    const FlowTotals f = compute_flows(inst.net);
    for (std::size_t t = 0; t < inst.net.period_count(); ++t) {
      std::int64_t in = 0, out = 0;
      for (std::size_t n = 0; n < inst.net.node_count(); ++n) {
        in += f.inward(t, n);
        out += f.outward(t, n);
      }
      CHECK(in == out);
    }
  }
}

TEST_CASE("max station distance") {
  TripNetwork net;
  net.nodes = {{0, {0, 0}}};
  net.period_lengths = {1.0};
  net.od = {Grid<std::int64_t>(1, 1)};
  CHECK(max_station_distance(net) == std::vector<double>{0.0});

  net.nodes = {{0, {0, 0}}, {1, {1, 2}}};
  net.od = {Grid<std::int64_t>(2, 2)};
  CHECK(max_station_distance(net) == std::vector<double>{3.0, 3.0});

  net.nodes = {{0, {0, 0}}, {1, {1, 0}}, {2, {3, 0}}};
  net.od = {Grid<std::int64_t>(3, 3)};
  CHECK(max_station_distance(net) == std::vector<double>{3.0, 2.0, 3.0});
}

TEST_CASE("synthetic generation follows the distance rules") {
  SyntheticConfig cfg;
  cfg.node_count = 24;
  cfg.seed = 11;
  const Instance inst = generate_synthetic(cfg);

  Point centre{0, 0};
  for (const auto& n : inst.net.nodes) {
    centre.x += n.pos.x;
    centre.y += n.pos.y;
  }
  centre.x /= 24;
  centre.y /= 24;
  std::size_t closest = 0, furthest = 0;
  for (std::size_t n = 0; n < 24; ++n) {
    const double d = distance(inst.net.nodes[n].pos, centre);
    if (d < distance(inst.net.nodes[closest].pos, centre)) closest = n;
    if (d > distance(inst.net.nodes[furthest].pos, centre)) furthest = n;
  }
  CHECK(inst.econ.pair_cost[closest] == doctest::Approx(3.0));
  CHECK(inst.econ.pair_cost[furthest] == doctest::Approx(1.0));
  double budget = 0.0;
  for (std::size_t n = 0; n < 24; ++n) {
    CHECK(inst.econ.pair_cost[n] >= 1.0 - 1e-12);
    CHECK(inst.econ.pair_cost[n] <= 3.0 + 1e-12);
    CHECK(inst.econ.pair_capacity[n] >= 1);
    CHECK(inst.econ.pair_capacity[n] <= 3);
    budget += inst.econ.pair_cost[n] * inst.econ.pair_capacity[n];
  }
  CHECK(inst.params.budget == 0.3 * budget);

  // Requested totals are hit exactly.
  const FlowTotals f = compute_flows(inst.net);
  for (std::size_t t = 0; t < cfg.period_lengths.size(); ++t) {
    std::int64_t total = 0;
    for (std::size_t n = 0; n < 24; ++n) total += f.outward(t, n);
    CHECK(total == cfg.trips_per_period[t]);
    for (std::size_t n = 0; n < 24; ++n) CHECK(inst.net.od[t](n, n) == 0);
  }
}

TEST_CASE("synthetic generation is reproducible and validates its inputs") {
  SyntheticConfig cfg;
  cfg.node_count = 10;
  cfg.seed = 3;
  CHECK(instance_to_json(generate_synthetic(cfg)) == instance_to_json(generate_synthetic(cfg)));

  cfg.node_count = 0;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
  cfg.node_count = 4;
  cfg.x_max = cfg.x_min;
  CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
}

TEST_CASE("clustered placement keeps nodes near their centres") {
  SyntheticConfig cfg;
  cfg.node_count = 20;
  cfg.seed = 5;
  cfg.clusters = 5;
  cfg.cluster_radius = 0.24;
  const Instance inst = generate_synthetic(cfg);
  // Round-robin assignment: nodes n and n+5 share a cluster.
  for (int n = 0; n + 5 < 20; ++n)
    CHECK(distance(inst.net.nodes[n].pos, inst.net.nodes[n + 5].pos) <= 4 * 0.24 + 1e-12);
}

TEST_CASE("instance files round-trip exactly") {
  const Instance inst = test::appendix_fixture().inst;
  const std::string path = "test_roundtrip_instance.json";
  save_instance(inst, path);
  const Instance back = load_instance(path);
  CHECK(back == inst);
  std::remove(path.c_str());
}

TEST_CASE("instance parsing reports schema and invariant problems") {
  const std::string good = instance_to_json(test::appendix_fixture().inst);

  SUBCASE("negative od entry") {
    std::string bad = good;
    const auto at = bad.find("10");
    bad.replace(at, 2, "-3");
    CHECK_THROWS_AS(parse_instance_json(bad), ValidationError);
  }
  SUBCASE("missing period length") {
    std::string bad = good;
    const auto at = bad.find("length_hours");
    bad.replace(at, 12, "length_weeks");
    CHECK_THROWS_AS(parse_instance_json(bad), ParseError);
  }
  SUBCASE("not json") { CHECK_THROWS_AS(parse_instance_json("{nope"), ParseError); }
  SUBCASE("duplicate node ids") {
    Instance dup = test::appendix_fixture().inst;
    dup.net.nodes[1].id = dup.net.nodes[0].id;
    CHECK_THROWS_AS(dup.validate(), ValidationError);
  }
}
