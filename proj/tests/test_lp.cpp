#include <cmath>
#include <random>

#include "doctest.h"
#include "evshare/errors.hpp"
#include "evshare/lp.hpp"

using namespace evshare::lp;

TEST_CASE("one-variable LP with a dual") {
  LinearModel m;
  const int x = m.add_variable(-kInf, kInf, false, "x");
  m.set_cost(x, 1.0);
  m.add_constraint({{x, 1.0}}, RowSense::GE, 3.0, "floor");
  const SolveOutcome out = solve_lp(m);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.objective == doctest::Approx(3.0));
  CHECK(out.primal[x] == doctest::Approx(3.0));
  CHECK(out.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible pair of rows") {
  LinearModel m;
  const int x = m.add_variable(-kInf, kInf, false, "x");
  m.add_constraint({{x, 1.0}}, RowSense::LE, 0.0, "lo");
  m.add_constraint({{x, 1.0}}, RowSense::GE, 1.0, "hi");
  CHECK(solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded direction is reported") {
  LinearModel m;
  const int x = m.add_variable(0.0, kInf, false, "x");
  m.set_cost(x, 1.0);
  m.set_objective_sense(ObjSense::Maximize);
  m.add_constraint({{x, -1.0}}, RowSense::LE, 0.0, "noop");
  CHECK(solve_lp(m).status == SolveStatus::Unbounded);
}

TEST_CASE("integer rounding down via branch and bound") {
  LinearModel m;
  const int x = m.add_variable(0.0, kInf, true, "x");
  m.set_cost(x, 1.0);
  m.set_objective_sense(ObjSense::Maximize);
  m.add_constraint({{x, 1.0}}, RowSense::LE, 2.5, "cap");
  const SolveOutcome out = solve_milp(m);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.objective == doctest::Approx(2.0));
  CHECK(out.primal[x] == 2.0);
}

TEST_CASE("empty model solves to zero") {
  LinearModel m;
  const SolveOutcome out = solve_milp(m);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.objective == 0.0);
}

TEST_CASE("solve_lp refuses integer models unless relaxed") {
  LinearModel m;
  const int x = m.add_variable(0.0, 1.0, true, "x");
  m.set_cost(x, -1.0);
  CHECK_THROWS_AS(solve_lp(m), evshare::SolveError);
  CHECK(solve_lp(m, {}, true).status == SolveStatus::Optimal);
}

TEST_CASE("bounded variables and equality rows") {
  LinearModel m;
  const int x = m.add_variable(0.0, 4.0, false, "x");
  const int y = m.add_variable(-1.0, 5.0, false, "y");
  m.set_cost(x, -1.0);
  m.set_cost(y, -2.0);
  m.add_constraint({{x, 1.0}, {y, 1.0}}, RowSense::EQ, 6.0, "sum");
  const SolveOutcome out = solve_lp(m);
  REQUIRE(out.status == SolveStatus::Optimal);
  CHECK(out.primal[x] == doctest::Approx(1.0));
  CHECK(out.primal[y] == doctest::Approx(5.0));
  CHECK(out.objective == doctest::Approx(-11.0));
}

TEST_CASE("re-solving an unchanged model is stable") {
  LinearModel m;
  const int x = m.add_variable(0.0, 10.0, false, "x");
  const int y = m.add_variable(0.0, 10.0, false, "y");
  m.set_cost(x, 1.0);
  m.set_cost(y, 1.3);
  m.add_constraint({{x, 1.0}, {y, 2.0}}, RowSense::GE, 7.0, "need");
  const SolveOutcome a = solve_lp(m);
  const SolveOutcome b = solve_lp(m);
  CHECK(a.status == b.status);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

namespace {

// Random feasible LPs: rhs is derived from a known interior point, so
// optimality plus duality identities can be asserted without an oracle.
LinearModel random_feasible_lp(std::uint64_t seed, std::vector<double>* x0_out = nullptr) {
  std::mt19937_64 gen(seed);
  const auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  };
  const int n = 2 + static_cast<int>(gen() % 6);
  const int rows = 1 + static_cast<int>(gen() % 8);
  LinearModel m;
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    const double lo = u(-5, 0), hi = u(0.5, 6);
    m.add_variable(lo, lo + hi, false, "x" + std::to_string(j));
    m.set_cost(j, u(-2, 2));
    x0[j] = u(lo, lo + hi);
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<std::pair<int, double>> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (u(0, 1) < 0.4) continue;
      const double c = u(-3, 3);
      terms.emplace_back(j, c);
      act += c * x0[j];
    }
    const int kind = static_cast<int>(gen() % 3);
    if (kind == 0)
      m.add_constraint(std::move(terms), RowSense::LE, act + u(0, 2), "r" + std::to_string(r));
    else if (kind == 1)
      m.add_constraint(std::move(terms), RowSense::GE, act - u(0, 2), "r" + std::to_string(r));
    else
      m.add_constraint(std::move(terms), RowSense::EQ, act, "r" + std::to_string(r));
  }
  if (x0_out) *x0_out = x0;
  return m;
}

}  // namespace

TEST_CASE("strong duality and complementary slackness on random LPs") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const LinearModel m = random_feasible_lp(seed);
    const SolveOutcome out = solve_lp(m);
    REQUIRE(out.status == SolveStatus::Optimal);

    // objective = y'b + sum_j rc_j x_j, and y_i vanishes on slack rows.
    double dual_side = 0.0;
    for (int r = 0; r < m.num_constraints(); ++r) {
      dual_side += out.duals[r] * m.row_rhs(r);
      double act = 0.0;
      for (const auto& [v, c] : m.row_terms(r)) act += c * out.primal[v];
      CHECK(std::abs(out.duals[r] * (m.row_rhs(r) - act)) < 1e-6);
      if (m.row_sense(r) == RowSense::LE) CHECK(act <= m.row_rhs(r) + 1e-7);
      if (m.row_sense(r) == RowSense::GE) CHECK(act >= m.row_rhs(r) - 1e-7);
      if (m.row_sense(r) == RowSense::EQ)
        CHECK(act == doctest::Approx(m.row_rhs(r)).epsilon(1e-7));
    }
    for (int j = 0; j < m.num_variables(); ++j) dual_side += out.reduced_costs[j] * out.primal[j];
    CHECK(out.objective == doctest::Approx(dual_side).epsilon(1e-6));
  }
}

TEST_CASE("branch and bound agrees with knapsack enumeration") {
  std::mt19937_64 gen(77);
  const auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  };
  for (int round = 0; round < 25; ++round) {
    const int n = 3 + static_cast<int>(gen() % 8);
    std::vector<double> value(n), weight(n);
    for (int j = 0; j < n; ++j) {
      value[j] = u(1, 10);
      weight[j] = u(1, 8);
    }
    const double cap = u(5, 20);

    LinearModel m;
    m.set_objective_sense(ObjSense::Maximize);
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) {
      m.add_variable(0.0, 1.0, true, "b" + std::to_string(j));
      m.set_cost(j, value[j]);
      row.emplace_back(j, weight[j]);
    }
    m.add_constraint(std::move(row), RowSense::LE, cap, "cap");
    const SolveOutcome out = solve_milp(m);
    REQUIRE(out.status == SolveStatus::Optimal);

    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double v = 0, wsum = 0;
      for (int j = 0; j < n; ++j)
        if (mask >> j & 1) {
          v += value[j];
          wsum += weight[j];
        }
      if (wsum <= cap) best = std::max(best, v);
    }
    CHECK(out.objective == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("milp with an exhausted time limit reports no incumbent") {
  LinearModel m;
  const int x = m.add_variable(0.0, 10.0, true, "x");
  m.set_cost(x, -1.0);
  m.add_constraint({{x, 2.0}}, RowSense::LE, 7.0, "cap");
  const SolveOutcome out = solve_milp(m, 0.0);
  CHECK(out.status == SolveStatus::TimeLimit);
  CHECK(out.primal.empty());
  CHECK_FALSE(out.proven_optimal);
}

TEST_CASE("lp text export mentions structure") {
  LinearModel m;
  const int x = m.add_variable(0.0, 2.0, true, "width");
  m.set_cost(x, 1.5);
  m.add_constraint({{x, 1.0}}, RowSense::LE, 2.0, "lid");
  const std::string text = to_lp_text(m);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("width") != std::string::npos);
  CHECK(text.find("lid") != std::string::npos);
  CHECK(text.find("Generals") != std::string::npos);
}

TEST_CASE("duplicate row labels are rejected") {
  LinearModel m;
  m.add_variable(0.0, 1.0, false, "x");
  m.add_constraint({{0, 1.0}}, RowSense::LE, 1.0, "same");
  CHECK_THROWS_AS(m.add_constraint({{0, 1.0}}, RowSense::GE, 0.0, "same"),
                  evshare::ValidationError);
}
