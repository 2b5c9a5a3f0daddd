#include "evshare/master.hpp"

#include <algorithm>
#include <cmath>

#include "evshare/errors.hpp"

namespace evshare {

std::vector<int> Station::covered() const {
  std::vector<int> out;
  for (std::size_t n = 0; n < neighborhood.size(); ++n)
    if (neighborhood[n]) out.push_back(static_cast<int>(n));
  return out;
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

void Station::validate(const Instance& inst, double tol) const {
  const std::size_t N = inst.net.node_count();
  if (neighborhood.size() != N || alpha.size() != N)
    throw ValidationError("station vectors must have one entry per node");
  double sum = 0.0;
  double cx = 0.0, cy = 0.0, cost = 0.0;
  bool any = false;
  for (std::size_t n = 0; n < N; ++n) {
    if (alpha[n] < -tol) throw ValidationError("station weight negative");
    if (alpha[n] > tol && !neighborhood[n])
      throw ValidationError("station weight outside its neighborhood");
    sum += alpha[n];
    cx += alpha[n] * inst.net.nodes[n].pos.x;
    cy += alpha[n] * inst.net.nodes[n].pos.y;
    cost += alpha[n] * inst.econ.pair_cost[n];
    any = any || neighborhood[n];
  }
  if (!any) throw ValidationError("station neighborhood is empty");
  if (std::abs(sum - 1.0) > tol) throw ValidationError("station weights must sum to 1");
  if (std::abs(cx - pos.x) > tol || std::abs(cy - pos.y) > tol)
    throw ValidationError("station coordinates disagree with its weights");
  if (std::abs(cost - pair_cost) > tol)
    throw ValidationError("station cost disagrees with its weights");
  if (pair_capacity < 1) throw ValidationError("station capacity must be >= 1");
  for (std::size_t n = 0; n < N; ++n)
    if (neighborhood[n] &&
        distance(pos, inst.net.nodes[n].pos) > inst.params.walk_radius + tol)
      throw ValidationError("station is further than the walk radius from node " +
                            std::to_string(n));
}

Station make_node_station(const Instance& inst, int node) {
  const std::size_t N = inst.net.node_count();
  Station s;
  s.neighborhood.assign(N, 0);
  s.alpha.assign(N, 0.0);
  s.neighborhood[node] = 1;
  s.alpha[node] = 1.0;
  s.pos = inst.net.nodes[node].pos;
  s.pair_cost = inst.econ.pair_cost[node];
  s.pair_capacity = inst.econ.pair_capacity[node];
  return s;
}

// ---------------------------------------------------------------------------
// MasterProblem
// ---------------------------------------------------------------------------

MasterProblem::MasterProblem(const Instance& inst, const CapacityProfile& profile,
                             std::vector<Station> stations, MasterOptions options)
    : inst_(inst), profile_(profile), options_(options), flows_(compute_flows(inst.net)) {
  const std::size_t N = inst_.net.node_count();
  const std::size_t T = inst_.net.period_count();
  if (profile_.period_count() != T)
    throw ValidationError("capacity profile does not match the network's periods");
  for (std::size_t t = 0; t < T; ++t)
    if (profile_.pair_capacity[t] % 2 != 0)
      throw ValidationError("pair capacity v_t must be even");

  model_.set_objective_sense(lp::ObjSense::Minimize);

  // Unmet-trip variables and their rows first; station blocks attach to them.
  e_var_.resize(T * N * N);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t n2 = 0; n2 < N; ++n2) {
        const int v = model_.add_variable(0.0, lp::kInf, false,
                                          "E_" + std::to_string(t) + "_" + std::to_string(n) +
                                              "_" + std::to_string(n2));
        model_.set_cost(v, 1.0);
        e_var_[(t * N + n) * N + n2] = v;
      }

  arr_row_.resize(T * N);
  dep_row_.resize(T * N);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t n = 0; n < N; ++n) {
      std::vector<std::pair<int, double>> arr, dep;
      for (std::size_t n2 = 0; n2 < N; ++n2) {
        arr.emplace_back(e_var_[(t * N + n2) * N + n], 1.0);  // column sum of E^t
        dep.emplace_back(e_var_[(t * N + n) * N + n2], 1.0);  // row sum of E^t
      }
      arr_row_[t * N + n] = model_.add_constraint(
          std::move(arr), lp::RowSense::EQ, static_cast<double>(flows_.inward(t, n)),
          "arr_" + std::to_string(t) + "_" + std::to_string(n));
      dep_row_[t * N + n] = model_.add_constraint(
          std::move(dep), lp::RowSense::EQ, static_cast<double>(flows_.outward(t, n)),
          "dep_" + std::to_string(t) + "_" + std::to_string(n));
    }

  if (options_.enforce_trip_integrity) {
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t n2 = 0; n2 < N; ++n2)
          model_.add_constraint({{e_var_[(t * N + n) * N + n2], 1.0}}, lp::RowSense::LE,
                                static_cast<double>(inst_.net.od[t](n, n2)),
                                "trip_" + std::to_string(t) + "_" + std::to_string(n) + "_" +
                                    std::to_string(n2));
  }

  budget_row_ = model_.add_constraint({}, lp::RowSense::LE, inst_.params.budget, "budget");

  for (auto& s : stations) {
    s.validate(inst_);
    stations_.push_back(std::move(s));
  }
  for (std::size_t s = 0; s < stations_.size(); ++s) append_station_block(s);
}

void MasterProblem::append_station_block(std::size_t s) {
  const std::size_t N = inst_.net.node_count();
  const std::size_t T = inst_.net.period_count();
  const Station& st = stations_[s];
  covered_.push_back(st.covered());
  const auto& cov = covered_.back();

  const int zv = model_.add_variable(0.0, lp::kInf, !options_.relax, "z_" + std::to_string(s));
  z_var_.push_back(zv);
  model_.add_term(budget_row_, zv, st.pair_cost);
  zcap_row_.push_back(model_.add_constraint({{zv, 1.0}}, lp::RowSense::LE,
                                            static_cast<double>(st.pair_capacity),
                                            "zcap_" + std::to_string(s)));

  std::vector<int> fin(T * cov.size()), fout(T * cov.size());
  std::vector<int> caps(T), bals(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> cap_terms, bal_terms;
    for (std::size_t k = 0; k < cov.size(); ++k) {
      const int n = cov[k];
      const int fi = model_.add_variable(0.0, lp::kInf, false,
                                         "Fin_" + std::to_string(t) + "_" + std::to_string(s) +
                                             "_" + std::to_string(n));
      const int fo = model_.add_variable(0.0, lp::kInf, false,
                                         "Fout_" + std::to_string(t) + "_" + std::to_string(s) +
                                             "_" + std::to_string(n));
      fin[t * cov.size() + k] = fi;
      fout[t * cov.size() + k] = fo;
      model_.add_term(arr_row_[t * N + n], fi, 1.0);
      model_.add_term(dep_row_[t * N + n], fo, 1.0);
      cap_terms.emplace_back(fi, 1.0);
      cap_terms.emplace_back(fo, 1.0);
      bal_terms.emplace_back(fi, 1.0);
      bal_terms.emplace_back(fo, -1.0);
    }
    cap_terms.emplace_back(zv, -static_cast<double>(profile_.pair_capacity[t]));
    caps[t] = model_.add_constraint(std::move(cap_terms), lp::RowSense::LE, 0.0,
                                    "cap_" + std::to_string(t) + "_" + std::to_string(s));
    bals[t] = model_.add_constraint(std::move(bal_terms), lp::RowSense::EQ, 0.0,
                                    "bal_" + std::to_string(t) + "_" + std::to_string(s));
  }
  fin_var_.push_back(std::move(fin));
  fout_var_.push_back(std::move(fout));
  cap_row_.push_back(std::move(caps));
  bal_row_.push_back(std::move(bals));

  if (has_warm_) {
    // New columns start at their lower bound; new rows get basic logicals, so
    // the previous optimal basis remains a valid warm start.
    warm_.variables.resize(model_.num_variables(), lp::VarStatus::AtLower);
    warm_.logicals.resize(model_.num_constraints(), lp::VarStatus::Basic);
  }
}

void MasterProblem::add_station(const Station& s) {
  Station copy = s;
  copy.validate(inst_);
  stations_.push_back(std::move(copy));
  append_station_block(stations_.size() - 1);
}

void MasterProblem::fix_z(const std::vector<int>& z) {
  if (z.size() != stations_.size())
    throw ValidationError("fix_z needs one value per station");
  for (std::size_t s = 0; s < z.size(); ++s)
    model_.set_bounds(z_var_[s], static_cast<double>(z[s]), static_cast<double>(z[s]));
  has_warm_ = false;  // bound moves invalidate the stored basis values
}

MasterSolution MasterProblem::extract_solution(const lp::SolveOutcome& out) const {
  const std::size_t N = inst_.net.node_count();
  const std::size_t T = inst_.net.period_count();
  const std::size_t S = stations_.size();
  MasterSolution sol;
  sol.status = out.status;
  sol.proven_optimal = out.proven_optimal;
  sol.objective = out.objective;
  sol.z.resize(S, 0.0);
  sol.flow_in.assign(T, Grid<double>(S, N));
  sol.flow_out.assign(T, Grid<double>(S, N));
  sol.unmet.assign(T, Grid<double>(N, N));
  if (out.primal.empty()) return sol;
  for (std::size_t s = 0; s < S; ++s) sol.z[s] = out.primal[z_var_[s]];
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t k = 0; k < covered_[s].size(); ++k) {
        sol.flow_in[t](s, covered_[s][k]) = out.primal[fin_var_[s][t * covered_[s].size() + k]];
        sol.flow_out[t](s, covered_[s][k]) = out.primal[fout_var_[s][t * covered_[s].size() + k]];
      }
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t n2 = 0; n2 < N; ++n2)
        sol.unmet[t](n, n2) = out.primal[e_var_[(t * N + n) * N + n2]];
  }
  return sol;
}

std::pair<MasterSolution, DualSolution> MasterProblem::solve_relaxation() {
  lp::SolveOptions opts;
  if (has_warm_) opts.warm_start = &warm_;
  opts.basis_out = &warm_;
  lp::SolveOutcome out = lp::solve_lp(model_, opts, /*relax_integrality=*/true);
  has_warm_ = out.status == lp::SolveStatus::Optimal;
  if (out.status != lp::SolveStatus::Optimal)
    throw SolveError("master relaxation did not solve to optimality; (OP) is always feasible");

  const std::size_t N = inst_.net.node_count();
  const std::size_t T = inst_.net.period_count();
  const std::size_t S = stations_.size();

  DualSolution dual;
  dual.objective = out.objective;
  dual.capacity_price = Grid<double>(T, S);
  dual.balance_price = Grid<double>(T, S);
  dual.arrival_price = Grid<double>(T, N);
  dual.departure_price = Grid<double>(T, N);
  dual.trip_price.assign(T, Grid<double>(N, N));
  dual.size_price.resize(S, 0.0);
  // Raw duals of this minimization are <= 0 on binding <= rows; negation
  // restores the sign conventions used throughout (U, W, q, h >= 0).
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      dual.capacity_price(t, s) = std::max(0.0, -out.duals[cap_row_[s][t]]);
      dual.balance_price(t, s) = -out.duals[bal_row_[s][t]];
    }
    for (std::size_t n = 0; n < N; ++n) {
      dual.arrival_price(t, n) = -out.duals[arr_row_[t * N + n]];
      dual.departure_price(t, n) = -out.duals[dep_row_[t * N + n]];
    }
    if (options_.enforce_trip_integrity)
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t n2 = 0; n2 < N; ++n2) {
          const auto row = model_.find_row("trip_" + std::to_string(t) + "_" +
                                           std::to_string(n) + "_" + std::to_string(n2));
          dual.trip_price[t](n, n2) = std::max(0.0, -out.duals[*row]);
        }
  }
  dual.budget_price = std::max(0.0, -out.duals[budget_row_]);
  for (std::size_t s = 0; s < S; ++s)
    dual.size_price[s] = std::max(0.0, -out.duals[zcap_row_[s]]);

  return {extract_solution(out), dual};
}

MasterSolution MasterProblem::solve_integer(double time_limit_seconds) {
  if (options_.relax)
    throw SolveError("solve_integer requires a master built with relax = false");
  lp::SolveOutcome out = lp::solve_milp(model_, time_limit_seconds);
  if (out.status != lp::SolveStatus::Optimal && out.status != lp::SolveStatus::TimeLimit)
    throw SolveError("integer master solve failed; (OP) is always feasible");
  return extract_solution(out);
}

// ---------------------------------------------------------------------------
// Explicit dual (D)
// ---------------------------------------------------------------------------

lp::LinearModel build_dual_model(const Instance& inst, const CapacityProfile& profile,
                                 const std::vector<Station>& stations) {
  const std::size_t N = inst.net.node_count();
  const std::size_t T = inst.net.period_count();
  const std::size_t S = stations.size();
  const FlowTotals flows = compute_flows(inst.net);

  lp::LinearModel m;
  m.set_objective_sense(lp::ObjSense::Maximize);

  std::vector<int> U(T * S), P(T * N), G(T * N), R(T * S), W(T * N * N), h(S);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      U[t * S + s] = m.add_variable(0.0, lp::kInf, false,
                                    "U_" + std::to_string(t) + "_" + std::to_string(s));
      R[t * S + s] = m.add_variable(-lp::kInf, lp::kInf, false,
                                    "R_" + std::to_string(t) + "_" + std::to_string(s));
    }
    for (std::size_t n = 0; n < N; ++n) {
      P[t * N + n] = m.add_variable(-lp::kInf, lp::kInf, false,
                                    "P_" + std::to_string(t) + "_" + std::to_string(n));
      G[t * N + n] = m.add_variable(-lp::kInf, lp::kInf, false,
                                    "G_" + std::to_string(t) + "_" + std::to_string(n));
      m.set_cost(P[t * N + n], -static_cast<double>(flows.inward(t, n)));
      m.set_cost(G[t * N + n], -static_cast<double>(flows.outward(t, n)));
    }
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t n2 = 0; n2 < N; ++n2) {
        const int w = m.add_variable(0.0, lp::kInf, false,
                                     "W_" + std::to_string(t) + "_" + std::to_string(n) + "_" +
                                         std::to_string(n2));
        W[(t * N + n) * N + n2] = w;
        m.set_cost(w, -static_cast<double>(inst.net.od[t](n, n2)));
      }
  }
  const int q = m.add_variable(0.0, lp::kInf, false, "q");
  m.set_cost(q, -inst.params.budget);
  for (std::size_t s = 0; s < S; ++s) {
    h[s] = m.add_variable(0.0, lp::kInf, false, "h_" + std::to_string(s));
    m.set_cost(h[s], -static_cast<double>(stations[s].pair_capacity));
  }

  // (1): 1 + G_{t,n} + P_{t,n'} + W^t_{n,n'} >= 0 over all pairs.
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t n2 = 0; n2 < N; ++n2)
        m.add_constraint({{G[t * N + n], 1.0}, {P[t * N + n2], 1.0},
                          {W[(t * N + n) * N + n2], 1.0}},
                         lp::RowSense::GE, -1.0,
                         "d1_" + std::to_string(t) + "_" + std::to_string(n) + "_" +
                             std::to_string(n2));

  // (2), (3): per station and covered node.
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t s = 0; s < S; ++s)
      for (int n : stations[s].covered()) {
        m.add_constraint({{U[t * S + s], 1.0}, {P[t * N + n], 1.0}, {R[t * S + s], 1.0}},
                         lp::RowSense::GE, 0.0,
                         "d2_" + std::to_string(t) + "_" + std::to_string(s) + "_" +
                             std::to_string(n));
        m.add_constraint({{U[t * S + s], 1.0}, {G[t * N + n], 1.0}, {R[t * S + s], -1.0}},
                         lp::RowSense::GE, 0.0,
                         "d3_" + std::to_string(t) + "_" + std::to_string(s) + "_" +
                             std::to_string(n));
      }

  // (4): h_s + q c_s - sum_t v_t U_{t,s} >= 0.
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<std::pair<int, double>> terms{{h[s], 1.0}, {q, stations[s].pair_cost}};
    for (std::size_t t = 0; t < T; ++t)
      terms.emplace_back(U[t * S + s], -static_cast<double>(profile.pair_capacity[t]));
    m.add_constraint(std::move(terms), lp::RowSense::GE, 0.0, "d4_" + std::to_string(s));
  }
  return m;
}

std::vector<Grid<double>> compute_pg(const DualSolution& dual, std::size_t node_count) {
  const std::size_t T = dual.arrival_price.rows();
  std::vector<Grid<double>> pg(T, Grid<double>(node_count, node_count));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t n = 0; n < node_count; ++n)
      for (std::size_t n2 = 0; n2 < node_count; ++n2)
        pg[t](n, n2) = std::max(
            -(dual.arrival_price(t, n) + dual.departure_price(t, n2)) / 2.0, 0.0);
  return pg;
}

// ---------------------------------------------------------------------------
// [(1'),(2)-(5)] coefficient system
// ---------------------------------------------------------------------------

TuSystem build_tu_system(const Instance& inst, const CapacityProfile& profile,
                         const std::vector<Station>& stations, const std::vector<int>& z,
                         std::size_t period) {
  const std::size_t N = inst.net.node_count();
  const std::size_t S = stations.size();
  if (z.size() != S) throw ValidationError("z must have one entry per station");
  const FlowTotals flows = compute_flows(inst.net);

  // Column order: F+ stacked by node then station, F- likewise, then E
  // stacked by destination column.
  std::vector<std::pair<std::size_t, std::size_t>> f_cols;  // (s, n)
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t s = 0; s < S; ++s)
      if (stations[s].neighborhood[n]) f_cols.emplace_back(s, n);
  const std::size_t F = f_cols.size();
  const std::size_t cols = 2 * F + N * N;
  const std::size_t rows = 2 * S + 2 * N + N * N;

  TuSystem sys;
  sys.matrix = Grid<int>(rows, cols);
  sys.senses.resize(rows);
  sys.rhs.resize(rows);
  sys.row_tags.resize(rows);
  sys.col_names.resize(cols);

  const auto e_col = [&](std::size_t n, std::size_t n2) { return 2 * F + n2 * N + n; };
  for (std::size_t f = 0; f < F; ++f) {
    sys.col_names[f] =
        "F+_" + std::to_string(f_cols[f].first) + "_" + std::to_string(f_cols[f].second);
    sys.col_names[F + f] =
        "F-_" + std::to_string(f_cols[f].first) + "_" + std::to_string(f_cols[f].second);
  }
  for (std::size_t n2 = 0; n2 < N; ++n2)
    for (std::size_t n = 0; n < N; ++n)
      sys.col_names[e_col(n, n2)] = "E_" + std::to_string(n) + "_" + std::to_string(n2);

  std::size_t r = 0;
  // (1'): sum of F+ at station s <= (v_t / 2) z_s
  for (std::size_t s = 0; s < S; ++s, ++r) {
    for (std::size_t f = 0; f < F; ++f)
      if (f_cols[f].first == s) sys.matrix(r, f) = 1;
    sys.senses[r] = lp::RowSense::LE;
    sys.rhs[r] = profile.pair_capacity[period] / 2 * z[s];
    sys.row_tags[r] = "1'";
  }
  // (2): arrivals of node n plus the n-th column sum of E.
  for (std::size_t n = 0; n < N; ++n, ++r) {
    for (std::size_t f = 0; f < F; ++f)
      if (f_cols[f].second == n) sys.matrix(r, f) = 1;
    for (std::size_t n2 = 0; n2 < N; ++n2) sys.matrix(r, e_col(n2, n)) = 1;
    sys.senses[r] = lp::RowSense::EQ;
    sys.rhs[r] = flows.inward(period, n);
    sys.row_tags[r] = "2";
  }
  // (3): departures of node n plus the n-th row sum of E.
  for (std::size_t n = 0; n < N; ++n, ++r) {
    for (std::size_t f = 0; f < F; ++f)
      if (f_cols[f].second == n) sys.matrix(r, F + f) = 1;
    for (std::size_t n2 = 0; n2 < N; ++n2) sys.matrix(r, e_col(n, n2)) = 1;
    sys.senses[r] = lp::RowSense::EQ;
    sys.rhs[r] = flows.outward(period, n);
    sys.row_tags[r] = "3";
  }
  // (4): balance per station.
  for (std::size_t s = 0; s < S; ++s, ++r) {
    for (std::size_t f = 0; f < F; ++f)
      if (f_cols[f].first == s) {
        sys.matrix(r, f) = 1;
        sys.matrix(r, F + f) = -1;
      }
    sys.senses[r] = lp::RowSense::EQ;
    sys.rhs[r] = 0;
    sys.row_tags[r] = "4";
  }
  // (5): identity over E in stacked-column order.
  for (std::size_t n2 = 0; n2 < N; ++n2)
    for (std::size_t n = 0; n < N; ++n, ++r) {
      sys.matrix(r, e_col(n, n2)) = 1;
      sys.senses[r] = lp::RowSense::LE;
      sys.rhs[r] = inst.net.od[period](n, n2);
      sys.row_tags[r] = "5";
    }
  return sys;
}

}  // namespace evshare
