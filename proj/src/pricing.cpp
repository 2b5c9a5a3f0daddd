#include "evshare/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "evshare/errors.hpp"

namespace evshare {

namespace {

constexpr double kTol = 1e-9;

// Shared geometry block: center coordinates as a convex combination of the
// covered nodes plus l1-distance auxiliaries. When `binary_vars` is empty the
// neighborhood is fixed to `fixed_cover`; otherwise every node gets the big-M
// membership row  dx + dy <= w + (1 - B_n)(d_n - w).
struct CenterBlock {
  int sx = -1, sy = -1;
  std::vector<int> alpha;  // one per node in scope
  std::vector<int> scope;  // node indices, aligned with alpha
};

CenterBlock add_center_block(lp::LinearModel& m, const TripNetwork& net,
                             const std::vector<int>& scope, double walk_radius,
                             const std::vector<int>& binary_vars,
                             const std::vector<double>& big_m_dist) {
  CenterBlock blk;
  blk.scope = scope;
  blk.sx = m.add_variable(-lp::kInf, lp::kInf, false, "sx");
  blk.sy = m.add_variable(-lp::kInf, lp::kInf, false, "sy");

  std::vector<std::pair<int, double>> cx{{blk.sx, 1.0}}, cy{{blk.sy, 1.0}}, ones;
  for (int n : scope) {
    const int a = m.add_variable(0.0, 1.0, false, "alpha_" + std::to_string(n));
    blk.alpha.push_back(a);
    cx.emplace_back(a, -net.nodes[n].pos.x);
    cy.emplace_back(a, -net.nodes[n].pos.y);
    ones.emplace_back(a, 1.0);
  }
  m.add_constraint(std::move(cx), lp::RowSense::EQ, 0.0, "center_x");
  m.add_constraint(std::move(cy), lp::RowSense::EQ, 0.0, "center_y");
  m.add_constraint(std::move(ones), lp::RowSense::EQ, 1.0, "alpha_sum");

  for (std::size_t k = 0; k < scope.size(); ++k) {
    const int n = scope[k];
    const double xn = net.nodes[n].pos.x, yn = net.nodes[n].pos.y;
    const int dx = m.add_variable(0.0, lp::kInf, false, "dx_" + std::to_string(n));
    const int dy = m.add_variable(0.0, lp::kInf, false, "dy_" + std::to_string(n));
    m.add_constraint({{dx, 1.0}, {blk.sx, -1.0}}, lp::RowSense::GE, -xn,
                     "dxp_" + std::to_string(n));
    m.add_constraint({{dx, 1.0}, {blk.sx, 1.0}}, lp::RowSense::GE, xn,
                     "dxm_" + std::to_string(n));
    m.add_constraint({{dy, 1.0}, {blk.sy, -1.0}}, lp::RowSense::GE, -yn,
                     "dyp_" + std::to_string(n));
    m.add_constraint({{dy, 1.0}, {blk.sy, 1.0}}, lp::RowSense::GE, yn,
                     "dym_" + std::to_string(n));
    if (binary_vars.empty()) {
      m.add_constraint({{dx, 1.0}, {dy, 1.0}}, lp::RowSense::LE, walk_radius,
                       "reach_" + std::to_string(n));
    } else {
      m.add_constraint({{dx, 1.0}, {dy, 1.0}, {binary_vars[k], big_m_dist[n] - walk_radius}},
                       lp::RowSense::LE, big_m_dist[n], "reach_" + std::to_string(n));
    }
    // alpha only on selected nodes
    if (!binary_vars.empty())
      m.add_constraint({{blk.alpha[k], 1.0}, {binary_vars[k], -1.0}}, lp::RowSense::LE, 0.0,
                       "support_" + std::to_string(n));
  }
  return blk;
}

std::vector<int> all_nodes(std::size_t n) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  return v;
}

Station station_from_alpha(const Instance& inst, const std::vector<std::uint8_t>& neighborhood,
                           const std::vector<int>& scope, const std::vector<double>& raw_alpha) {
  const std::size_t N = inst.net.node_count();
  Station s;
  s.neighborhood = neighborhood;
  s.alpha.assign(N, 0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < scope.size(); ++k) {
    const double a = std::max(raw_alpha[k], 0.0);
    s.alpha[scope[k]] = a;
    sum += a;
  }
  for (auto& a : s.alpha) a /= sum;  // exact convexity after clamping
  s.pos = {0.0, 0.0};
  s.pair_cost = 0.0;
  double cap = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    s.pos.x += s.alpha[n] * inst.net.nodes[n].pos.x;
    s.pos.y += s.alpha[n] * inst.net.nodes[n].pos.y;
    s.pair_cost += s.alpha[n] * inst.econ.pair_cost[n];
    cap += s.alpha[n] * inst.econ.pair_capacity[n];
  }
  s.pair_capacity = round_half_up(cap);
  return s;
}

// Deterministic tie-break shared by the placement LPs: among alphas of equal
// cost, push mass onto the lowest-indexed nodes.
std::vector<double> lex_min_alpha(const Instance& inst, const std::vector<int>& scope,
                                  double cost_cap, double capacity_floor) {
  lp::LinearModel m;
  CenterBlock blk = add_center_block(m, inst.net, scope, inst.params.walk_radius, {}, {});
  std::vector<std::pair<int, double>> cost_terms, cap_terms;
  for (std::size_t k = 0; k < scope.size(); ++k) {
    cost_terms.emplace_back(blk.alpha[k], inst.econ.pair_cost[scope[k]]);
    cap_terms.emplace_back(blk.alpha[k], static_cast<double>(inst.econ.pair_capacity[scope[k]]));
    m.set_cost(blk.alpha[k], static_cast<double>(k + 1));
  }
  m.add_constraint(std::move(cost_terms), lp::RowSense::LE, cost_cap, "cost_cap");
  if (capacity_floor > 0.0)
    m.add_constraint(std::move(cap_terms), lp::RowSense::GE, capacity_floor, "cap_floor");
  m.set_objective_sense(lp::ObjSense::Minimize);
  lp::SolveOutcome out = lp::solve_lp(m);
  if (out.status != lp::SolveStatus::Optimal)
    throw SolveError("tie-break placement LP unexpectedly " +
                     std::string(out.status == lp::SolveStatus::Infeasible ? "infeasible"
                                                                           : "unbounded"));
  std::vector<double> alpha(scope.size());
  for (std::size_t k = 0; k < scope.size(); ++k) alpha[k] = out.primal[blk.alpha[k]];
  return alpha;
}

}  // namespace

FlowBounds compute_flow_bounds(const std::vector<std::uint8_t>& neighborhood,
                               const FlowTotals& flows, const CapacityProfile& profile,
                               const NodeEconomics& econ) {
  const std::size_t T = profile.period_count();
  FlowBounds fb;
  fb.max_assignable.resize(T);
  fb.min_pairs = 0;
  fb.max_pairs = 0;
  bool first = true;
  for (std::size_t n = 0; n < neighborhood.size(); ++n) {
    if (!neighborhood[n]) continue;
    if (first) {
      fb.min_pairs = fb.max_pairs = econ.pair_capacity[n];
      first = false;
    } else {
      fb.min_pairs = std::min(fb.min_pairs, econ.pair_capacity[n]);
      fb.max_pairs = std::max(fb.max_pairs, econ.pair_capacity[n]);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    std::int64_t in = 0, out = 0;
    for (std::size_t n = 0; n < neighborhood.size(); ++n) {
      if (!neighborhood[n]) continue;
      in += flows.inward(t, n);
      out += flows.outward(t, n);
    }
    fb.max_assignable[t] = 2 * std::min(in, out);
    const std::int64_t v = profile.pair_capacity[t];
    int need;
    if (fb.max_assignable[t] == 0)
      need = 0;
    else if (v == 0)
      need = fb.max_pairs;  // period has no throughput; cap at the neighborhood max
    else
      need = static_cast<int>((fb.max_assignable[t] + v - 1) / v);
    fb.required_pairs = std::max(fb.required_pairs, need);
  }
  fb.capped_pairs = std::min(fb.required_pairs, fb.max_pairs);
  return fb;
}

std::vector<std::vector<int>> valid_inequalities(const TripNetwork& net, double walk_radius) {
  const std::size_t N = net.node_count();
  std::set<std::vector<int>> dedup;
  for (std::size_t seed = 0; seed < N; ++seed) {
    std::vector<int> v{static_cast<int>(seed)};
    for (std::size_t cand = 0; cand < N; ++cand) {
      bool far = true;
      for (int y : v)
        if (distance(net.nodes[y].pos, net.nodes[cand].pos) <= 2 * walk_radius) {
          far = false;
          break;
        }
      if (far) v.push_back(static_cast<int>(cand));
    }
    if (v.size() > 1) {
      std::sort(v.begin(), v.end());
      dedup.insert(std::move(v));
    }
  }
  return {dedup.begin(), dedup.end()};
}

int max_neighborhood_size(const TripNetwork& net, double walk_radius) {
  const std::size_t N = net.node_count();
  const std::vector<double> big_m = max_station_distance(net);
  lp::LinearModel m;
  std::vector<int> b(N);
  for (std::size_t n = 0; n < N; ++n) {
    b[n] = m.add_variable(0.0, 1.0, true, "B_" + std::to_string(n));
    m.set_cost(b[n], 1.0);
  }
  m.set_objective_sense(lp::ObjSense::Maximize);
  add_center_block(m, net, all_nodes(N), walk_radius, b, big_m);
  lp::SolveOutcome out = lp::solve_milp(m);
  if (out.status != lp::SolveStatus::Optimal)
    throw SolveError("neighborhood-size MILP failed");
  return std::max(1, static_cast<int>(std::llround(out.objective)));
}

double min_cover_radius(const TripNetwork& net, const std::vector<std::uint8_t>& neighborhood) {
  std::vector<int> scope;
  for (std::size_t n = 0; n < neighborhood.size(); ++n)
    if (neighborhood[n]) scope.push_back(static_cast<int>(n));
  if (scope.empty()) throw ValidationError("empty neighborhood has no cover radius");

  // Same block as the fixed-B LPs but with the reach bound replaced by a
  // shared radius variable that we minimize.
  lp::LinearModel m;
  const int sx = m.add_variable(-lp::kInf, lp::kInf, false, "sx");
  const int sy = m.add_variable(-lp::kInf, lp::kInf, false, "sy");
  const int tau = m.add_variable(0.0, lp::kInf, false, "tau");
  m.set_cost(tau, 1.0);
  std::vector<std::pair<int, double>> cx{{sx, 1.0}}, cy{{sy, 1.0}}, ones;
  for (int n : scope) {
    const int a = m.add_variable(0.0, 1.0, false, "alpha_" + std::to_string(n));
    cx.emplace_back(a, -net.nodes[n].pos.x);
    cy.emplace_back(a, -net.nodes[n].pos.y);
    ones.emplace_back(a, 1.0);
  }
  m.add_constraint(std::move(cx), lp::RowSense::EQ, 0.0, "center_x");
  m.add_constraint(std::move(cy), lp::RowSense::EQ, 0.0, "center_y");
  m.add_constraint(std::move(ones), lp::RowSense::EQ, 1.0, "alpha_sum");
  for (int n : scope) {
    const double xn = net.nodes[n].pos.x, yn = net.nodes[n].pos.y;
    const int dx = m.add_variable(0.0, lp::kInf, false, "dx_" + std::to_string(n));
    const int dy = m.add_variable(0.0, lp::kInf, false, "dy_" + std::to_string(n));
    m.add_constraint({{dx, 1.0}, {sx, -1.0}}, lp::RowSense::GE, -xn, "dxp_" + std::to_string(n));
    m.add_constraint({{dx, 1.0}, {sx, 1.0}}, lp::RowSense::GE, xn, "dxm_" + std::to_string(n));
    m.add_constraint({{dy, 1.0}, {sy, -1.0}}, lp::RowSense::GE, -yn, "dyp_" + std::to_string(n));
    m.add_constraint({{dy, 1.0}, {sy, 1.0}}, lp::RowSense::GE, yn, "dym_" + std::to_string(n));
    m.add_constraint({{dx, 1.0}, {dy, 1.0}, {tau, -1.0}}, lp::RowSense::LE, 0.0,
                     "reach_" + std::to_string(n));
  }
  lp::SolveOutcome out = lp::solve_lp(m);
  if (out.status != lp::SolveStatus::Optimal) throw SolveError("cover-radius LP failed");
  return out.objective;
}

std::optional<PricingResult> price_station(const DualSolution& dual, const Instance& inst,
                                           const CapacityProfile& profile,
                                           const std::vector<std::vector<std::uint8_t>>& forbidden,
                                           const std::vector<std::vector<int>>& cuts,
                                           int target_size) {
  const std::size_t N = inst.net.node_count();
  const std::size_t T = inst.net.period_count();
  if (target_size < 1) throw ValidationError("pricing needs a positive neighborhood size");
  const std::vector<Grid<double>> pg = compute_pg(dual, N);
  const std::vector<double> big_m = max_station_distance(inst.net);

  lp::LinearModel m;
  m.set_objective_sense(lp::ObjSense::Maximize);
  std::vector<int> b(N);
  for (std::size_t n = 0; n < N; ++n)
    b[n] = m.add_variable(0.0, 1.0, true, "B_" + std::to_string(n));

  CenterBlock blk = add_center_block(m, inst.net, all_nodes(N), inst.params.walk_radius, b, big_m);
  for (std::size_t n = 0; n < N; ++n)
    m.set_cost(blk.alpha[n], -dual.budget_price * inst.econ.pair_cost[n]);

  // Selection tensors: keep D variables only where PG is positive, plus the
  // diagonal so the unit of mass always has somewhere feasible to sit.
  struct KeptPair {
    std::size_t n, n2;
    int var;
  };
  std::vector<int> u(T);
  std::vector<std::vector<KeptPair>> kept(T);
  for (std::size_t t = 0; t < T; ++t) {
    u[t] = m.add_variable(0.0, lp::kInf, false, "U_" + std::to_string(t));
    m.set_cost(u[t], static_cast<double>(profile.pair_capacity[t]));
    std::vector<std::pair<int, double>> def{{u[t], 1.0}}, mass;
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t n2 = 0; n2 < N; ++n2) {
        if (pg[t](n, n2) <= kTol && n != n2) continue;
        const int d = m.add_variable(0.0, 1.0, false,
                                     "D_" + std::to_string(t) + "_" + std::to_string(n) + "_" +
                                         std::to_string(n2));
        kept[t].push_back({n, n2, d});
        if (pg[t](n, n2) > kTol) def.emplace_back(d, -pg[t](n, n2));
        mass.emplace_back(d, 1.0);
        m.add_constraint({{d, 1.0}, {b[n], -1.0}}, lp::RowSense::LE, 0.0,
                         "sel_row_" + std::to_string(t) + "_" + std::to_string(n) + "_" +
                             std::to_string(n2));
        if (n != n2)
          m.add_constraint({{d, 1.0}, {b[n2], -1.0}}, lp::RowSense::LE, 0.0,
                           "sel_col_" + std::to_string(t) + "_" + std::to_string(n) + "_" +
                               std::to_string(n2));
      }
    m.add_constraint(std::move(def), lp::RowSense::EQ, 0.0, "price_def_" + std::to_string(t));
    m.add_constraint(std::move(mass), lp::RowSense::EQ, 1.0, "mass_" + std::to_string(t));
  }

  // Uniqueness against every forbidden column.
  for (std::size_t f = 0; f < forbidden.size(); ++f) {
    std::vector<std::pair<int, double>> terms;
    int zeros = 0;
    for (std::size_t n = 0; n < N; ++n) {
      if (forbidden[f][n]) {
        terms.emplace_back(b[n], 1.0);
      } else {
        terms.emplace_back(b[n], -1.0);
        ++zeros;
      }
    }
    m.add_constraint(std::move(terms), lp::RowSense::LE,
                     static_cast<double>(N) - 1.0 - zeros, "unique_" + std::to_string(f));
  }

  for (std::size_t c = 0; c < cuts.size(); ++c) {
    std::vector<std::pair<int, double>> terms;
    for (int n : cuts[c]) terms.emplace_back(b[n], 1.0);
    m.add_constraint(std::move(terms), lp::RowSense::LE, 1.0, "apart_" + std::to_string(c));
  }

  {
    std::vector<std::pair<int, double>> size_terms;
    for (std::size_t n = 0; n < N; ++n) size_terms.emplace_back(b[n], 1.0);
    m.add_constraint(std::move(size_terms), lp::RowSense::EQ, static_cast<double>(target_size),
                     "size");
  }

  lp::SolveOutcome out = lp::solve_milp(m);
  if (out.status == lp::SolveStatus::Infeasible) return std::nullopt;
  if (out.status != lp::SolveStatus::Optimal) throw SolveError("pricing MILP failed");

  PricingResult res;
  res.neighborhood.resize(N);
  res.alpha.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    res.neighborhood[n] = out.primal[b[n]] > 0.5 ? 1 : 0;
    res.alpha[n] = std::max(out.primal[blk.alpha[n]], 0.0);
  }
  res.period_price.resize(T);
  res.selection.assign(T, Grid<double>(N, N));
  for (std::size_t t = 0; t < T; ++t) {
    res.period_price[t] = out.primal[u[t]];
    for (const auto& kp : kept[t]) res.selection[t](kp.n, kp.n2) = out.primal[kp.var];
  }
  res.cost = 0.0;
  for (std::size_t n = 0; n < N; ++n) res.cost += res.alpha[n] * inst.econ.pair_cost[n];
  res.reduced_benefit = out.objective;
  return res;
}

std::optional<Station> refine_location(const PricingResult& pricing, double budget_price,
                                       const Instance& inst, const CapacityProfile& profile,
                                       const FlowTotals& flows, int threads) {
  const FlowBounds fb =
      compute_flow_bounds(pricing.neighborhood, flows, profile, inst.econ);
  bool any_flow = false;
  for (auto f : fb.max_assignable) any_flow = any_flow || f > 0;
  if (!any_flow) return std::nullopt;  // zero-flow neighborhood cannot improve

  std::vector<int> scope;
  for (std::size_t n = 0; n < pricing.neighborhood.size(); ++n)
    if (pricing.neighborhood[n]) scope.push_back(static_cast<int>(n));

  double gross = 0.0;  // K = sum_t v_t U_t
  for (std::size_t t = 0; t < profile.period_count(); ++t)
    gross += static_cast<double>(profile.pair_capacity[t]) * pricing.period_price[t];

  const int m_lo = fb.min_pairs;
  const int m_hi = std::max(fb.min_pairs, fb.capped_pairs);

  // Each OA^i reduces to min-cost placement under its capacity floor; the
  // objective then scales the margin by m^i.
  struct Candidate {
    bool feasible = false;
    int pairs = 0;
    double cost = 0.0;
    std::vector<double> alpha;
  };
  const auto solve_level = [&](int mi) {
    Candidate c;
    c.pairs = mi;
    lp::LinearModel model;
    CenterBlock blk = add_center_block(model, inst.net, scope, inst.params.walk_radius, {}, {});
    std::vector<std::pair<int, double>> cap_terms;
    for (std::size_t k = 0; k < scope.size(); ++k) {
      model.set_cost(blk.alpha[k], inst.econ.pair_cost[scope[k]]);
      cap_terms.emplace_back(blk.alpha[k],
                             static_cast<double>(inst.econ.pair_capacity[scope[k]]));
    }
    model.add_constraint(std::move(cap_terms), lp::RowSense::GE, mi - 0.5, "cap_floor");
    model.set_objective_sense(lp::ObjSense::Minimize);
    lp::SolveOutcome out = lp::solve_lp(model);
    if (out.status != lp::SolveStatus::Optimal) return c;  // infeasible capacity floor
    c.feasible = true;
    c.cost = out.objective;
    c.alpha.resize(scope.size());
    for (std::size_t k = 0; k < scope.size(); ++k) c.alpha[k] = out.primal[blk.alpha[k]];
    return c;
  };

  std::vector<Candidate> cands;
  if (threads > 1 && m_hi > m_lo) {
    std::vector<std::future<Candidate>> futs;
    for (int mi = m_lo; mi <= m_hi; ++mi)
      futs.push_back(std::async(std::launch::async, solve_level, mi));
    for (auto& f : futs) cands.push_back(f.get());
  } else {
    for (int mi = m_lo; mi <= m_hi; ++mi) cands.push_back(solve_level(mi));
  }

  const Candidate* best = nullptr;
  double best_obj = 0.0;
  for (const auto& c : cands) {
    if (!c.feasible) continue;
    const double obj = c.pairs * (gross - budget_price * c.cost);
    if (!best) {
      best = &c;
      best_obj = obj;
      continue;
    }
    const double tol = 1e-9 * (1.0 + std::abs(best_obj));
    if (obj > best_obj + tol ||
        (obj > best_obj - tol &&
         (c.pairs > best->pairs || (c.pairs == best->pairs && c.cost < best->cost)))) {
      best = &c;
      best_obj = obj;
    }
  }
  if (!best) throw SolveError("every OA^i level infeasible; m^min must be attainable");

  const std::vector<double> alpha =
      lex_min_alpha(inst, scope, best->cost + 1e-9, best->pairs - 0.5);
  return station_from_alpha(inst, pricing.neighborhood, scope, alpha);
}

Station min_cost_location(const std::vector<std::uint8_t>& neighborhood, const Instance& inst,
                          const FlowTotals& flows, const CapacityProfile& profile) {
  const FlowBounds fb = compute_flow_bounds(neighborhood, flows, profile, inst.econ);
  std::vector<int> scope;
  for (std::size_t n = 0; n < neighborhood.size(); ++n)
    if (neighborhood[n]) scope.push_back(static_cast<int>(n));
  if (scope.empty()) throw ValidationError("cannot place a station on an empty neighborhood");

  const auto min_cost_at_floor = [&](double floor) {
    lp::LinearModel m;
    CenterBlock blk = add_center_block(m, inst.net, scope, inst.params.walk_radius, {}, {});
    std::vector<std::pair<int, double>> cap_terms;
    for (std::size_t k = 0; k < scope.size(); ++k) {
      m.set_cost(blk.alpha[k], inst.econ.pair_cost[scope[k]]);
      cap_terms.emplace_back(blk.alpha[k],
                             static_cast<double>(inst.econ.pair_capacity[scope[k]]));
    }
    if (floor > 0.0)
      m.add_constraint(std::move(cap_terms), lp::RowSense::GE, floor, "cap_floor");
    m.set_objective_sense(lp::ObjSense::Minimize);
    return lp::solve_lp(m);
  };

  double floor = fb.capped_pairs - 0.5;
  lp::SolveOutcome out = min_cost_at_floor(floor);
  if (out.status == lp::SolveStatus::Infeasible && floor > 0.0) {
    // The walk-radius geometry can cap the reachable capacity below m^cbar;
    // fall back to the largest capacity the center admits, then price it.
    lp::LinearModel m;
    CenterBlock blk = add_center_block(m, inst.net, scope, inst.params.walk_radius, {}, {});
    for (std::size_t k = 0; k < scope.size(); ++k)
      m.set_cost(blk.alpha[k], static_cast<double>(inst.econ.pair_capacity[scope[k]]));
    m.set_objective_sense(lp::ObjSense::Maximize);
    const lp::SolveOutcome best_cap = lp::solve_lp(m);
    if (best_cap.status != lp::SolveStatus::Optimal)
      throw SolveError("min-cost placement infeasible: neighborhood admits no center");
    floor = best_cap.objective - 1e-9;
    out = min_cost_at_floor(floor);
  }
  if (out.status != lp::SolveStatus::Optimal)
    throw SolveError("min-cost placement infeasible: neighborhood admits no center");

  const std::vector<double> alpha = lex_min_alpha(inst, scope, out.objective + 1e-9, floor);
  return station_from_alpha(inst, neighborhood, scope, alpha);
}

Station greatest_flow_station(const Instance& inst, const CapacityProfile& profile,
                              double* objective_out) {
  const std::size_t N = inst.net.node_count();
  const std::size_t T = inst.net.period_count();
  const FlowTotals flows = compute_flows(inst.net);
  const std::vector<double> big_m = max_station_distance(inst.net);
  int cap_max = 1;
  for (int c : inst.econ.pair_capacity) cap_max = std::max(cap_max, c);

  lp::LinearModel m;
  m.set_objective_sense(lp::ObjSense::Maximize);
  std::vector<int> b(N);
  for (std::size_t n = 0; n < N; ++n)
    b[n] = m.add_variable(0.0, 1.0, true, "B_" + std::to_string(n));
  CenterBlock blk = add_center_block(m, inst.net, all_nodes(N), inst.params.walk_radius, b, big_m);
  const int pairs =
      m.add_variable(1.0, static_cast<double>(cap_max), true, "pairs");
  {
    std::vector<std::pair<int, double>> terms{{pairs, 1.0}};
    for (std::size_t n = 0; n < N; ++n)
      terms.emplace_back(blk.alpha[n], -static_cast<double>(inst.econ.pair_capacity[n]));
    m.add_constraint(std::move(terms), lp::RowSense::LE, 0.5, "pairs_cap");
  }
  for (std::size_t t = 0; t < T; ++t) {
    const int y = m.add_variable(0.0, lp::kInf, false, "served_" + std::to_string(t));
    m.set_cost(y, 1.0);
    std::vector<std::pair<int, double>> lo{{y, 1.0}}, hi{{y, 1.0}};
    for (std::size_t n = 0; n < N; ++n) {
      lo.emplace_back(b[n], -2.0 * static_cast<double>(flows.outward(t, n)));
      hi.emplace_back(b[n], -2.0 * static_cast<double>(flows.inward(t, n)));
    }
    m.add_constraint(std::move(lo), lp::RowSense::LE, 0.0, "gf_out_" + std::to_string(t));
    m.add_constraint(std::move(hi), lp::RowSense::LE, 0.0, "gf_in_" + std::to_string(t));
    m.add_constraint({{y, 1.0}, {pairs, -static_cast<double>(profile.pair_capacity[t])}},
                     lp::RowSense::LE, 0.0, "gf_cap_" + std::to_string(t));
  }

  lp::SolveOutcome out = lp::solve_milp(m);
  if (out.status != lp::SolveStatus::Optimal)
    throw SolveError("greatest-flow MILP failed");
  if (objective_out) *objective_out = out.objective;
  std::vector<std::uint8_t> neighborhood(N, 0);
  for (std::size_t n = 0; n < N; ++n) neighborhood[n] = out.primal[b[n]] > 0.5 ? 1 : 0;
  return min_cost_location(neighborhood, inst, flows, profile);
}

}  // namespace evshare
