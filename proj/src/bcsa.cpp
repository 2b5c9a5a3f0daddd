#include "evshare/bcsa.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "evshare/pricing.hpp"

namespace evshare {

namespace {
constexpr double kImprovementEps = 1e-6;  // h must clear this to accept a column
}

BcsaTrace run_bcsa(const Instance& inst, const CapacityProfile& profile,
                   const BcsaLimits& limits) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  const std::size_t N = inst.net.node_count();
  const std::size_t T = inst.net.period_count();
  const FlowTotals flows = compute_flows(inst.net);
  const long iter_cap = limits.max_iterations > 0
                            ? limits.max_iterations
                            : 10L * static_cast<long>(N) * static_cast<long>(T);

  BcsaTrace trace;
  trace.pool.push_back(greatest_flow_station(inst, profile));

  int size_level = max_neighborhood_size(inst.net, inst.params.walk_radius);
  trace.initial_size_level = size_level;
  const std::vector<std::vector<int>> cuts =
      valid_inequalities(inst.net, inst.params.walk_radius);

  MasterProblem master(inst, profile, trace.pool, {.relax = false});
  auto [sol, dual] = master.solve_relaxation();
  double relax_obj = sol.objective;

  std::vector<std::vector<std::uint8_t>> rejected;
  long rounds = 0;
  while (size_level > 0) {
    if (rounds >= iter_cap || elapsed() > limits.wall_seconds) {
      trace.complete = false;
      break;
    }
    ++rounds;

    std::vector<std::vector<std::uint8_t>> forbidden;
    forbidden.reserve(trace.pool.size() + rejected.size());
    for (const Station& s : trace.pool) forbidden.push_back(s.neighborhood);
    for (const auto& b : rejected) forbidden.push_back(b);

    auto priced = price_station(dual, inst, profile, forbidden, cuts, size_level);
    const double h = priced ? priced->reduced_benefit
                            : -std::numeric_limits<double>::infinity();

    if (!priced || h <= kImprovementEps) {
      trace.iterations.push_back(
          {size_level, h, false, trace.pool.size(), relax_obj, elapsed()});
      --size_level;  // stale duals are reused at the next size, as in the paper
      continue;
    }

    auto refined = refine_location(*priced, dual.budget_price, inst, profile, flows,
                                   limits.threads);
    if (!refined) {
      // Zero-flow neighborhood: cut it off and re-price at the same size.
      rejected.push_back(priced->neighborhood);
      trace.iterations.push_back(
          {size_level, h, false, trace.pool.size(), relax_obj, elapsed()});
      continue;
    }

    trace.pool.push_back(*refined);
    master.add_station(*refined);
    std::tie(sol, dual) = master.solve_relaxation();
    relax_obj = sol.objective;
    trace.iterations.push_back({size_level, h, true, trace.pool.size(), relax_obj, elapsed()});
  }

  trace.final_relax_objective = relax_obj;
  double milp_budget = limits.final_milp_seconds;
  if (std::isfinite(limits.wall_seconds))
    milp_budget = std::min(milp_budget, std::max(1.0, limits.wall_seconds - elapsed()));
  trace.final_solution = master.solve_integer(milp_budget);
  if (!trace.final_solution.proven_optimal) trace.complete = false;
  return trace;
}

std::string trace_to_jsonl(const BcsaTrace& trace) {
  std::ostringstream out;
  out.precision(12);
  int k = 0;
  for (const auto& it : trace.iterations) {
    out << "{\"iteration\":" << k++ << ",\"size_level\":" << it.size_level
        << ",\"reduced_benefit\":";
    if (std::isfinite(it.reduced_benefit))
      out << it.reduced_benefit;
    else
      out << "null";
    out << ",\"accepted\":" << (it.accepted ? "true" : "false")
        << ",\"pool_size\":" << it.pool_size << ",\"relax_objective\":" << it.relax_objective
        << ",\"elapsed_seconds\":" << it.elapsed_seconds << "}\n";
  }
  return out.str();
}

}  // namespace evshare
