#include <cmath>
#include <random>

#include "doctest.h"
#include "evshare/enumeration.hpp"
#include "evshare/errors.hpp"
#include "evshare/master.hpp"
#include "fixtures.hpp"

using namespace evshare;

namespace {

// The 14x10 system printed for the two-node, three-station example.
const int kAppendixMatrix[14][10] = {
    {1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 0, 0, 0, 1, 1, 0, 0},
    {0, 1, 1, 0, 0, 0, 0, 0, 1, 1},
    {0, 0, 0, 1, 0, 0, 1, 0, 1, 0},
    {0, 0, 0, 0, 1, 1, 0, 1, 0, 1},
    {1, 0, 0, -1, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, -1, 0, 0, 0, 0, 0},
    {0, 0, 1, 0, 0, -1, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 1}};
const std::int64_t kAppendixRhs[14] = {5, 5, 5, 10, 10, 10, 10, 0, 0, 0, 0, 10, 10, 0};

// Exact integer determinant (Bareiss), fine up to 8x8 of +-1 entries.
std::int64_t int_determinant(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  std::int64_t prev = 1;
  std::int64_t sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<Station> sample_stations(const Instance& inst, const CapacityProfile& profile,
                                     std::size_t max_count, std::uint64_t seed) {
  StationCatalog catalog = enumerate_stations(inst, profile);
  std::mt19937_64 gen(seed);
  std::vector<Station> out = std::move(catalog.stations);
  for (std::size_t i = out.size(); i > 1; --i)
    std::swap(out[i - 1], out[gen() % i]);
  if (out.size() > max_count) out.resize(max_count);
  return out;
}

double max_fractional_part(const MasterSolution& sol) {
  double worst = 0.0;
  const auto scan = [&](double v) {
    worst = std::max(worst, std::abs(v - std::round(v)));
  };
  for (double z : sol.z) scan(z);
  for (const auto& g : sol.flow_in)
    for (double v : g.data()) scan(v);
  for (const auto& g : sol.flow_out)
    for (double v : g.data()) scan(v);
  for (const auto& g : sol.unmet)
    for (double v : g.data()) scan(v);
  return worst;
}

}  // namespace

TEST_CASE("trip-integrity fixture solves to 10 with the unique split") {
  auto fix = test::appendix_fixture();
  MasterProblem master(fix.inst, fix.profile, fix.stations);
  auto [sol, dual] = master.solve_relaxation();
  CHECK(sol.objective == doctest::Approx(10.0));
  CHECK(dual.objective == doctest::Approx(10.0));

  MasterSolution integral = master.solve_integer();
  CHECK(integral.objective == doctest::Approx(10.0));
  CHECK(integral.unmet[0](0, 0) == doctest::Approx(0.0));
  CHECK(integral.unmet[0](0, 1) == doctest::Approx(5.0));
  CHECK(integral.unmet[0](1, 0) == doctest::Approx(5.0));
  CHECK(integral.unmet[0](1, 1) == doctest::Approx(0.0));
}

TEST_CASE("dropping trip integrity halves the fixture objective") {
  auto fix = test::appendix_fixture();
  MasterProblem master(fix.inst, fix.profile, fix.stations,
                       {.relax = false, .enforce_trip_integrity = false});
  MasterSolution sol = master.solve_integer();
  CHECK(sol.objective == doctest::Approx(5.0));
}

TEST_CASE("no stations means every trip is unmet") {
  auto fix = test::appendix_fixture();
  MasterProblem master(fix.inst, fix.profile, {});
  auto [sol, dual] = master.solve_relaxation();
  CHECK(sol.objective == doctest::Approx(20.0));
}

TEST_CASE("one shared station balances a symmetric two-node instance") {
  auto fix = test::appendix_fixture();
  fix.inst.net.nodes[1].pos = {0.4, 0.0};  // now within one walk radius of a center
  Station shared;
  shared.neighborhood = {1, 1};
  shared.alpha = {0.5, 0.5};
  shared.pos = {0.2, 0.0};
  shared.pair_cost = 1.0;
  shared.pair_capacity = 4;  // 40 flow assignments at v = 10 per pair
  fix.profile = compute_profile(fix.inst.net, fix.inst.params);  // trip length changed
  MasterProblem master(fix.inst, fix.profile, {shared});
  MasterSolution sol = master.solve_integer();
  CHECK(sol.objective == doctest::Approx(0.0));
  CHECK(sol.z[0] == doctest::Approx(4.0));
}

TEST_CASE("zero budget forces the all-unmet solution") {
  auto fix = test::appendix_fixture();
  fix.inst.params.budget = 0.0;
  MasterProblem master(fix.inst, fix.profile, fix.stations);
  MasterSolution sol = master.solve_integer();
  CHECK(sol.objective == doctest::Approx(20.0));
  for (double z : sol.z) CHECK(z == 0.0);
}

TEST_CASE("zero demand gives zero objective and zero conservation duals") {
  auto fix = test::appendix_fixture();
  fix.inst.net.od[0] = Grid<std::int64_t>(2, 2);
  fix.profile = compute_profile(fix.inst.net, fix.inst.params);
  MasterProblem master(fix.inst, fix.profile, fix.stations);
  auto [sol, dual] = master.solve_relaxation();
  CHECK(sol.objective == doctest::Approx(0.0));
  for (std::size_t n = 0; n < 2; ++n) {
    CHECK(dual.arrival_price(0, n) == doctest::Approx(0.0));
    CHECK(dual.departure_price(0, n) == doctest::Approx(0.0));
  }
}

TEST_CASE("station invariants are enforced at build time") {
  auto fix = test::appendix_fixture();
  Station bad = fix.stations[0];
  bad.alpha = {0.5, 0.5};  // weight outside the neighborhood
  CHECK_THROWS_AS(MasterProblem(fix.inst, fix.profile, {bad}), ValidationError);

  bad = fix.stations[0];
  bad.neighborhood = {1, 1};  // node 1 is 3 km away, beyond the walk radius
  CHECK_THROWS_AS(MasterProblem(fix.inst, fix.profile, {bad}), ValidationError);
}

TEST_CASE("coefficient system matches the printed example entry for entry") {
  auto fix = test::appendix_fixture();
  const TuSystem sys = build_tu_system(fix.inst, fix.profile, fix.stations, {1, 1, 1}, 0);
  REQUIRE(sys.matrix.rows() == 14);
  REQUIRE(sys.matrix.cols() == 10);
  for (std::size_t r = 0; r < 14; ++r) {
    for (std::size_t c = 0; c < 10; ++c) CHECK(sys.matrix(r, c) == kAppendixMatrix[r][c]);
    CHECK(sys.rhs[r] == kAppendixRhs[r]);
  }
  CHECK(sys.row_tags[0] == "1'");
  CHECK(sys.senses[3] == lp::RowSense::EQ);
  CHECK(sys.senses[10] == lp::RowSense::LE);
}

TEST_CASE("random square submatrices have determinant in {-1,0,1}") {
  auto fix = test::appendix_fixture();
  const TuSystem sys = build_tu_system(fix.inst, fix.profile, fix.stations, {1, 1, 1}, 0);
  std::mt19937_64 gen(123);
  for (int sample = 0; sample < 1500; ++sample) {
    const std::size_t k = 1 + gen() % 8;
    std::vector<std::size_t> rows, cols;
    while (rows.size() < k) {
      const std::size_t r = gen() % sys.matrix.rows();
      if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
    }
    while (cols.size() < k) {
      const std::size_t c = gen() % sys.matrix.cols();
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }
    std::vector<std::vector<std::int64_t>> sub(k, std::vector<std::int64_t>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = sys.matrix(rows[i], cols[j]);
    const std::int64_t det = int_determinant(sub);
    CHECK(det >= -1);
    CHECK(det <= 1);
  }
}

TEST_CASE("relaxations with pinned integral z stay integral") {
  int tested = 0;
  for (std::uint64_t seed = 100; tested < 50; ++seed) {
    Instance inst = test::random_instance(seed);
    inst.params.budget = 1e9;  // budget must not conflict with the pinned z
    const CapacityProfile profile = compute_profile(inst.net, inst.params);
    auto stations = sample_stations(inst, profile, 8, seed);
    if (stations.empty()) continue;
    ++tested;

    std::mt19937_64 gen(seed * 31 + 1);
    std::vector<int> z(stations.size());
    for (std::size_t s = 0; s < z.size(); ++s)
      z[s] = static_cast<int>(gen() % (stations[s].pair_capacity + 1));

    MasterProblem master(inst, profile, stations, {.relax = true});
    master.fix_z(z);
    auto [sol, dual] = master.solve_relaxation();
    CHECK(max_fractional_part(sol) < 1e-6);
  }
}

TEST_CASE("strong duality against the explicit dual model") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const Instance inst = test::random_instance(seed);
    const CapacityProfile profile = compute_profile(inst.net, inst.params);
    auto stations = sample_stations(inst, profile, 6, seed);
    MasterProblem master(inst, profile, stations, {.relax = true});
    auto [sol, dual] = master.solve_relaxation();

    const lp::LinearModel dual_model = build_dual_model(inst, profile, stations);
    const lp::SolveOutcome dual_out = lp::solve_lp(dual_model);
    REQUIRE(dual_out.status == lp::SolveStatus::Optimal);
    CHECK(dual_out.objective == doctest::Approx(sol.objective).epsilon(1e-6));
    CHECK(dual.objective == doctest::Approx(sol.objective).epsilon(1e-6));
  }
}

TEST_CASE("extracted duals satisfy the sign conventions and feasibility") {
  for (std::uint64_t seed = 400; seed < 410; ++seed) {
    const Instance inst = test::random_instance(seed);
    const CapacityProfile profile = compute_profile(inst.net, inst.params);
    auto stations = sample_stations(inst, profile, 5, seed);
    MasterProblem master(inst, profile, stations, {.relax = true});
    auto [sol, dual] = master.solve_relaxation();

    const std::size_t N = inst.net.node_count();
    const std::size_t T = inst.net.period_count();
    CHECK(dual.budget_price >= 0.0);
    for (std::size_t s = 0; s < stations.size(); ++s) CHECK(dual.size_price[s] >= 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t s = 0; s < stations.size(); ++s)
        CHECK(dual.capacity_price(t, s) >= 0.0);
      // dual constraint (1): 1 + G_n + P_n' + W_{n,n'} >= 0
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t n2 = 0; n2 < N; ++n2)
          CHECK(1.0 + dual.departure_price(t, n) + dual.arrival_price(t, n2) +
                    dual.trip_price[t](n, n2) >=
                -1e-6);
      // dual constraints (2)-(3) over covered nodes
      for (std::size_t s = 0; s < stations.size(); ++s)
        for (int n : stations[s].covered()) {
          CHECK(dual.capacity_price(t, s) + dual.arrival_price(t, n) +
                    dual.balance_price(t, s) >=
                -1e-6);
          CHECK(dual.capacity_price(t, s) + dual.departure_price(t, n) -
                    dual.balance_price(t, s) >=
                -1e-6);
        }
    }
    // dual constraint (4)
    for (std::size_t s = 0; s < stations.size(); ++s) {
      double lhs = dual.size_price[s] + dual.budget_price * stations[s].pair_cost;
      for (std::size_t t = 0; t < T; ++t)
        lhs -= static_cast<double>(profile.pair_capacity[t]) * dual.capacity_price(t, s);
      CHECK(lhs >= -1e-6);
    }
  }
}

TEST_CASE("solutions respect trip integrity and balance exactly") {
  for (std::uint64_t seed = 500; seed < 510; ++seed) {
    const Instance inst = test::random_instance(seed);
    const CapacityProfile profile = compute_profile(inst.net, inst.params);
    auto stations = sample_stations(inst, profile, 6, seed);
    MasterProblem master(inst, profile, stations);
    MasterSolution sol = master.solve_integer();

    const FlowTotals flows = compute_flows(inst.net);
    const std::size_t N = inst.net.node_count();
    for (std::size_t t = 0; t < inst.net.period_count(); ++t) {
      for (std::size_t n = 0; n < N; ++n) {
        double in_total = 0.0, out_total = 0.0;
        for (std::size_t s = 0; s < stations.size(); ++s) {
          in_total += sol.flow_in[t](s, n);
          out_total += sol.flow_out[t](s, n);
        }
        for (std::size_t n2 = 0; n2 < N; ++n2) {
          in_total += sol.unmet[t](n2, n);
          out_total += sol.unmet[t](n, n2);
        }
        CHECK(in_total == doctest::Approx(flows.inward(t, n)).epsilon(1e-7));
        CHECK(out_total == doctest::Approx(flows.outward(t, n)).epsilon(1e-7));
      }
      for (std::size_t s = 0; s < stations.size(); ++s) {
        double net = 0.0;
        for (std::size_t n = 0; n < N; ++n)
          net += sol.flow_in[t](s, n) - sol.flow_out[t](s, n);
        CHECK(std::abs(net) < 1e-7);
      }
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t n2 = 0; n2 < N; ++n2)
          CHECK(sol.unmet[t](n, n2) <= inst.net.od[t](n, n2) + 1e-7);
    }
  }
}

TEST_CASE("PG formula clamps at zero") {
  DualSolution dual;
  dual.arrival_price = Grid<double>(1, 2);
  dual.departure_price = Grid<double>(1, 2);
  dual.arrival_price(0, 0) = -4.0;
  dual.departure_price(0, 1) = -2.0;
  auto pg = compute_pg(dual, 2);
  CHECK(pg[0](0, 1) == doctest::Approx(3.0));
  CHECK(pg[0](1, 0) == doctest::Approx(0.0));
  dual.arrival_price(0, 0) = 1.0;
  dual.departure_price(0, 1) = 1.0;
  pg = compute_pg(dual, 2);
  CHECK(pg[0](0, 1) == doctest::Approx(0.0));
  CHECK(pg[0](0, 0) == 0.0);
}

TEST_CASE("warm-started growth matches a cold rebuild") {
  auto fix = test::appendix_fixture();
  fix.inst.net.nodes[1].pos = {0.4, 0.0};
  fix.profile = compute_profile(fix.inst.net, fix.inst.params);

  MasterProblem grown(fix.inst, fix.profile, {make_node_station(fix.inst, 0)});
  auto first = grown.solve_relaxation();
  CHECK(first.first.objective == doctest::Approx(20.0));  // node 1 is uncovered
  Station shared;
  shared.neighborhood = {1, 1};
  shared.alpha = {0.5, 0.5};
  shared.pos = {0.2, 0.0};
  shared.pair_cost = 1.0;
  shared.pair_capacity = 1;
  grown.add_station(shared);
  auto second = grown.solve_relaxation();

  MasterProblem cold(fix.inst, fix.profile, {make_node_station(fix.inst, 0), shared});
  auto direct = cold.solve_relaxation();
  CHECK(second.first.objective == doctest::Approx(direct.first.objective).epsilon(1e-9));
}
