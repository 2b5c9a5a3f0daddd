#include <algorithm>
#include <cmath>
#include <vector>

#include "evshare/errors.hpp"
#include "simplex_impl.hpp"

namespace evshare::lp {

namespace {

using detail::Clock;

struct Node {
  std::vector<double> lower, upper;
  Basis basis;
  bool has_basis = false;
};

}  // namespace

SolveOutcome solve_milp(const LinearModel& model, double time_limit_seconds) {
  const auto t0 = Clock::now();
  if (!model.has_integers()) {
    SolveOptions opts;
    opts.time_limit_seconds = time_limit_seconds;
    return solve_lp(model, opts);
  }
  const auto deadline = std::isfinite(time_limit_seconds)
                            ? t0 + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(time_limit_seconds))
                            : Clock::time_point::max();

  detail::StandardForm sf(model);
  detail::Simplex solver(sf);
  std::vector<int> int_vars;
  for (int j = 0; j < sf.n; ++j)
    if (model.is_integer(j)) int_vars.push_back(j);

  constexpr double kIntTol = 1e-6;
  constexpr long kNodeCap = 2'000'000;

  std::vector<Node> stack;
  stack.push_back({sf.initial_lower, sf.initial_upper, {}, false});

  bool found = false;
  bool hit_limit = false;
  double best_obj = kInf;  // internal min sense
  std::vector<double> best_x;
  long nodes = 0;

  while (!stack.empty()) {
    if (Clock::now() >= deadline) {
      hit_limit = true;
      break;
    }
    if (++nodes > kNodeCap) throw SolveError("branch and bound: node cap exceeded");

    Node node = std::move(stack.back());
    stack.pop_back();

    Basis out_basis;
    detail::SimplexResult rel = solver.solve(node.lower, node.upper,
                                             node.has_basis ? &node.basis : nullptr, &out_basis,
                                             deadline);
    if (rel.status == SolveStatus::TimeLimit) {
      hit_limit = true;
      break;
    }
    if (rel.status == SolveStatus::Infeasible) continue;
    if (rel.status == SolveStatus::Unbounded) {
      if (found) continue;
      SolveOutcome out;
      out.status = SolveStatus::Unbounded;
      out.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      return out;
    }
    if (found && rel.objective >= best_obj - 1e-9) continue;

    // Most fractional integer variable.
    int branch_var = -1;
    double branch_frac = kIntTol;
    for (int j : int_vars) {
      const double v = rel.x[j];
      const double dist = std::abs(v - std::round(v));
      if (dist > branch_frac) {
        branch_frac = dist;
        branch_var = j;
      }
    }
    if (branch_var < 0) {
      if (!found || rel.objective < best_obj) {
        found = true;
        best_obj = rel.objective;
        best_x = rel.x;
      }
      continue;
    }

    const double v = rel.x[branch_var];
    Node down{node.lower, node.upper, out_basis, true};
    down.upper[branch_var] = std::floor(v);
    Node up{std::move(node.lower), std::move(node.upper), std::move(out_basis), true};
    up.lower[branch_var] = std::ceil(v);

    // Depth-first: explore the side nearer the LP value first.
    if (v - std::floor(v) <= 0.5) {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    } else {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    }
  }

  SolveOutcome out;
  out.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!found) {
    out.status = hit_limit ? SolveStatus::TimeLimit : SolveStatus::Infeasible;
    return out;
  }
  out.status = hit_limit ? SolveStatus::TimeLimit : SolveStatus::Optimal;
  out.proven_optimal = !hit_limit;
  out.objective = sf.maximize ? -best_obj : best_obj;
  out.primal.assign(best_x.begin(), best_x.begin() + sf.n);
  for (int j : int_vars) out.primal[j] = std::round(out.primal[j]);
  return out;
}

}  // namespace evshare::lp
