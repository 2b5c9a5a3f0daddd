#include "simplex_impl.hpp"

#include <algorithm>
#include <cmath>

#include "evshare/errors.hpp"

namespace evshare::lp::detail {

namespace {
constexpr double kFeasTol = 1e-7;
constexpr double kDualTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr double kRatioSlack = 1e-9;
constexpr int kRefactorEvery = 96;
constexpr int kDegenerateLimit = 600;
}  // namespace

StandardForm::StandardForm(const LinearModel& model) {
  n = model.num_variables();
  m = model.num_constraints();
  maximize = model.objective_sense() == ObjSense::Maximize;

  // Transpose the row storage into CSC.
  std::vector<int> counts(n, 0);
  for (int r = 0; r < m; ++r)
    for (const auto& [v, c] : model.row_terms(r)) {
      (void)c;
      ++counts[v];
    }
  col_ptr.assign(n + 1, 0);
  for (int j = 0; j < n; ++j) col_ptr[j + 1] = col_ptr[j] + counts[j];
  col_row.resize(col_ptr[n]);
  col_val.resize(col_ptr[n]);
  std::vector<int> next(col_ptr.begin(), col_ptr.end() - 1);
  for (int r = 0; r < m; ++r)
    for (const auto& [v, c] : model.row_terms(r)) {
      col_row[next[v]] = r;
      col_val[next[v]] = c;
      ++next[v];
    }

  cost.assign(n + m, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = maximize ? -model.cost(j) : model.cost(j);

  rhs.resize(m);
  initial_lower.resize(n + m);
  initial_upper.resize(n + m);
  for (int j = 0; j < n; ++j) {
    initial_lower[j] = model.lower(j);
    initial_upper[j] = model.upper(j);
  }
  for (int r = 0; r < m; ++r) {
    rhs[r] = model.row_rhs(r);
    switch (model.row_sense(r)) {
      case RowSense::LE:
        initial_lower[n + r] = 0.0;
        initial_upper[n + r] = kInf;
        break;
      case RowSense::EQ:
        initial_lower[n + r] = 0.0;
        initial_upper[n + r] = 0.0;
        break;
      case RowSense::GE:
        initial_lower[n + r] = -kInf;
        initial_upper[n + r] = 0.0;
        break;
    }
  }
}

double Simplex::col_dot(int j, const Eigen::VectorXd& y) const {
  if (j >= sf_.n) return y[j - sf_.n];
  double acc = 0.0;
  for (int k = sf_.col_ptr[j]; k < sf_.col_ptr[j + 1]; ++k)
    acc += sf_.col_val[k] * y[sf_.col_row[k]];
  return acc;
}

void Simplex::col_axpy(int j, double scale, Eigen::VectorXd& v) const {
  if (j >= sf_.n) {
    v[j - sf_.n] += scale;
    return;
  }
  for (int k = sf_.col_ptr[j]; k < sf_.col_ptr[j + 1]; ++k)
    v[sf_.col_row[k]] += scale * sf_.col_val[k];
}

double Simplex::bound_violation(int col) const {
  const double x = x_[col];
  if (x < (*lb_)[col] - kFeasTol) return (*lb_)[col] - x;
  if (x > (*ub_)[col] + kFeasTol) return x - (*ub_)[col];
  return 0.0;
}

void Simplex::reset_to_logical_basis() {
  const int N = ncols();
  basis_.resize(sf_.m);
  vstat_.assign(N, VarStatus::AtLower);
  for (int j = 0; j < sf_.n; ++j) {
    if (std::isfinite((*lb_)[j]))
      vstat_[j] = VarStatus::AtLower;
    else if (std::isfinite((*ub_)[j]))
      vstat_[j] = VarStatus::AtUpper;
    else
      vstat_[j] = VarStatus::FreeZero;
  }
  for (int r = 0; r < sf_.m; ++r) {
    basis_[r] = sf_.n + r;
    vstat_[sf_.n + r] = VarStatus::Basic;
  }
}

void Simplex::init_basis(const Basis* warm) {
  const int N = ncols();
  if (warm && static_cast<int>(warm->variables.size()) == sf_.n &&
      static_cast<int>(warm->logicals.size()) == sf_.m) {
    vstat_.resize(N);
    int basics = 0;
    for (int j = 0; j < sf_.n; ++j) {
      vstat_[j] = warm->variables[j];
      if (vstat_[j] == VarStatus::Basic) ++basics;
    }
    for (int r = 0; r < sf_.m; ++r) {
      vstat_[sf_.n + r] = warm->logicals[r];
      if (vstat_[sf_.n + r] == VarStatus::Basic) ++basics;
    }
    if (basics == sf_.m) {
      basis_.clear();
      basis_.reserve(sf_.m);
      for (int j = 0; j < N; ++j)
        if (vstat_[j] == VarStatus::Basic) basis_.push_back(j);
      // Sanity: nonbasic statuses must refer to finite bounds.
      for (int j = 0; j < N; ++j) {
        if (vstat_[j] == VarStatus::AtLower && !std::isfinite((*lb_)[j]))
          vstat_[j] = std::isfinite((*ub_)[j]) ? VarStatus::AtUpper : VarStatus::FreeZero;
        else if (vstat_[j] == VarStatus::AtUpper && !std::isfinite((*ub_)[j]))
          vstat_[j] = std::isfinite((*lb_)[j]) ? VarStatus::AtLower : VarStatus::FreeZero;
      }
      return;
    }
  }
  reset_to_logical_basis();
}

bool Simplex::factorize() {
  etas_.clear();
  if (sf_.m == 0) {
    factor_ok_ = true;
    return true;
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(sf_.m) * 4);
  for (int p = 0; p < sf_.m; ++p) {
    const int j = basis_[p];
    if (j >= sf_.n) {
      trips.emplace_back(j - sf_.n, p, 1.0);
    } else {
      for (int k = sf_.col_ptr[j]; k < sf_.col_ptr[j + 1]; ++k)
        trips.emplace_back(sf_.col_row[k], p, sf_.col_val[k]);
    }
  }
  Eigen::SparseMatrix<double> B(sf_.m, sf_.m);
  B.setFromTriplets(trips.begin(), trips.end());
  lu_.compute(B);
  factor_ok_ = lu_.info() == Eigen::Success;
  return factor_ok_;
}

void Simplex::ftran(Eigen::VectorXd& v) {
  if (sf_.m == 0) return;
  v = lu_.solve(v);
  for (const Eta& e : etas_) {
    const double piv = v[e.pivot_pos] / e.w[e.pivot_pos];
    v -= e.w * piv;
    v[e.pivot_pos] = piv;
  }
}

void Simplex::btran(Eigen::VectorXd& v) {
  if (sf_.m == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const double s = it->w.dot(v);
    v[it->pivot_pos] = (v[it->pivot_pos] - (s - it->w[it->pivot_pos] * v[it->pivot_pos])) /
                       it->w[it->pivot_pos];
  }
  v = lu_.transpose().solve(v);
}

void Simplex::compute_basic_values() {
  const int N = ncols();
  // Pin nonbasic columns to their recorded bound first.
  for (int j = 0; j < N; ++j) {
    switch (vstat_[j]) {
      case VarStatus::AtLower: x_[j] = (*lb_)[j]; break;
      case VarStatus::AtUpper: x_[j] = (*ub_)[j]; break;
      case VarStatus::FreeZero: x_[j] = 0.0; break;
      case VarStatus::Basic: break;
    }
  }
  if (sf_.m == 0) return;
  Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(sf_.rhs.data(), sf_.m);
  for (int j = 0; j < N; ++j) {
    if (vstat_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
    col_axpy(j, -x_[j], r);
  }
  ftran(r);
  for (int p = 0; p < sf_.m; ++p) x_[basis_[p]] = r[p];
}

void Simplex::refresh(bool refactor) {
  if (refactor && !factorize()) {
    reset_to_logical_basis();
    factorize();
  }
  compute_basic_values();
}

SimplexResult Simplex::solve(const std::vector<double>& lower, const std::vector<double>& upper,
                             const Basis* warm, Basis* basis_out, Clock::time_point deadline) {
  lb_ = &lower;
  ub_ = &upper;
  const int N = ncols();
  x_.assign(N, 0.0);

  init_basis(warm);
  if (!factorize()) {
    reset_to_logical_basis();
    if (!factorize()) throw SolveError("simplex: identity basis failed to factorize");
  }
  compute_basic_values();

  SimplexResult res;
  const long iter_limit = 50000L + 200L * static_cast<long>(N);
  long degenerate_streak = 0;
  bool bland = false;

  Eigen::VectorXd y(sf_.m), w(sf_.m);

  while (true) {
    if (res.iterations >= iter_limit)
      throw SolveError("simplex: iteration limit reached (" + std::to_string(res.iterations) +
                       " iterations)");
    if ((res.iterations & 0xff) == 0 && Clock::now() >= deadline) {
      res.status = SolveStatus::TimeLimit;
      return res;
    }
    if (static_cast<int>(etas_.size()) >= kRefactorEvery) refresh(true);

    // Phase selection from current basic feasibility.
    double infeasibility = 0.0;
    for (int p = 0; p < sf_.m; ++p) infeasibility += bound_violation(basis_[p]);
    const bool phase1 = infeasibility > kFeasTol;

    // Pricing vector.
    if (sf_.m > 0) {
      for (int p = 0; p < sf_.m; ++p) {
        const int j = basis_[p];
        if (phase1) {
          if (x_[j] < (*lb_)[j] - kFeasTol)
            y[p] = -1.0;
          else if (x_[j] > (*ub_)[j] + kFeasTol)
            y[p] = 1.0;
          else
            y[p] = 0.0;
        } else {
          y[p] = sf_.cost[j];
        }
      }
      btran(y);
    }

    // Entering column.
    int enter = -1, dir = 0;
    double best_score = bland ? 0.0 : kDualTol;
    for (int j = 0; j < N; ++j) {
      const VarStatus st = vstat_[j];
      if (st == VarStatus::Basic) continue;
      if ((*lb_)[j] == (*ub_)[j]) continue;  // fixed columns never enter
      const double base_cost = phase1 ? 0.0 : sf_.cost[j];
      const double rc = base_cost - col_dot(j, y);
      int d = 0;
      if ((st == VarStatus::AtLower || st == VarStatus::FreeZero) && rc < -kDualTol)
        d = 1;
      else if ((st == VarStatus::AtUpper || st == VarStatus::FreeZero) && rc > kDualTol)
        d = -1;
      if (d == 0) continue;
      if (bland) {
        enter = j;
        dir = d;
        break;
      }
      if (std::abs(rc) > best_score) {
        best_score = std::abs(rc);
        enter = j;
        dir = d;
      }
    }

    if (enter < 0) {
      if (!etas_.empty()) {
        refresh(true);
        continue;  // conclude only from a freshly factorized basis
      }
      if (phase1) {
        res.status = SolveStatus::Infeasible;
        return res;
      }
      break;  // optimal
    }

    // Direction through the basis.
    w.setZero(sf_.m);
    col_axpy(enter, 1.0, w);
    ftran(w);

    // Two-pass Harris ratio test. The entering column moves by dir * theta;
    // basic p moves at rate -dir * w[p]. Infeasible basics block only at the
    // bound they currently violate. Pass 1 finds the tolerance-relaxed step;
    // pass 2 picks the largest pivot among candidates inside that step.
    // Target bound of basic p for this move; NaN when unblocked.
    const auto block_bound = [&](int p, double rate) -> double {
      const int j = basis_[p];
      const double lo = (*lb_)[j], hi = (*ub_)[j];
      if (x_[j] < lo - kFeasTol) return rate > 0.0 ? lo : std::numeric_limits<double>::quiet_NaN();
      if (x_[j] > hi + kFeasTol) return rate < 0.0 ? hi : std::numeric_limits<double>::quiet_NaN();
      if (rate > 0.0) return hi;
      return lo;
    };

    const double own_range = (*ub_)[enter] - (*lb_)[enter];
    double theta_relaxed = std::isfinite(own_range) ? own_range : kInf;
    for (int p = 0; p < sf_.m; ++p) {
      const double rate = -dir * w[p];
      if (std::abs(rate) <= kPivotTol) continue;
      const double bound = block_bound(p, rate);
      if (std::isnan(bound) || !std::isfinite(bound)) continue;
      const double slack = bound + (rate > 0.0 ? kFeasTol : -kFeasTol) - x_[basis_[p]];
      theta_relaxed = std::min(theta_relaxed, std::max(slack / rate, 0.0));
    }

    int leave_pos = -1;
    double leave_bound = 0.0;
    double theta = std::isfinite(own_range) ? own_range : kInf;
    double best_weight = 0.0;
    for (int p = 0; p < sf_.m; ++p) {
      const double rate = -dir * w[p];
      if (std::abs(rate) <= kPivotTol) continue;
      const double bound = block_bound(p, rate);
      if (std::isnan(bound) || !std::isfinite(bound)) continue;
      const double ratio = std::max((bound - x_[basis_[p]]) / rate, 0.0);
      bool take;
      if (bland) {
        // Strict minimum ratio, least column index on ties.
        take = leave_pos < 0 || ratio < theta ||
               (ratio == theta && basis_[p] < basis_[leave_pos]);
      } else {
        // Any candidate inside the relaxed window; largest pivot wins.
        if (ratio > theta_relaxed + kRatioSlack) continue;
        take = leave_pos < 0 || std::abs(w[p]) > best_weight;
      }
      if (take) {
        leave_pos = p;
        leave_bound = bound;
        best_weight = std::abs(w[p]);
        theta = ratio;
      }
    }
    if (leave_pos >= 0 && std::isfinite(own_range) && own_range < theta) {
      leave_pos = -1;  // the entering column's own flip comes first
      theta = own_range;
    }

    if (leave_pos < 0 && !std::isfinite(own_range)) {
      if (!etas_.empty()) {
        refresh(true);
        continue;
      }
      if (phase1)
        throw SolveError("simplex: unbounded phase-1 direction (numerical failure)");
      res.status = SolveStatus::Unbounded;
      return res;
    }

    // Apply the step.
    if (theta > 0.0) {
      for (int p = 0; p < sf_.m; ++p) {
        if (w[p] == 0.0) continue;
        x_[basis_[p]] -= dir * theta * w[p];
      }
      x_[enter] += dir * theta;
      degenerate_streak = 0;
      if (bland) bland = false;
    } else {
      if (++degenerate_streak > kDegenerateLimit) bland = true;
    }

    if (leave_pos < 0) {
      // Bound-to-bound flip of the entering column.
      vstat_[enter] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
      x_[enter] = dir > 0 ? (*ub_)[enter] : (*lb_)[enter];
    } else {
      const int leave = basis_[leave_pos];
      if (std::abs(w[leave_pos]) < kPivotTol) {
        // Unusable pivot: rebuild and retry rather than corrupting the basis.
        refresh(true);
        ++res.iterations;
        continue;
      }
      x_[leave] = leave_bound;
      vstat_[leave] = leave_bound == (*ub_)[leave] && std::isfinite((*ub_)[leave])
                          ? VarStatus::AtUpper
                          : VarStatus::AtLower;
      if (!std::isfinite((*lb_)[leave]) && !std::isfinite((*ub_)[leave]))
        vstat_[leave] = VarStatus::FreeZero;  // cannot happen for blocking columns
      vstat_[enter] = VarStatus::Basic;
      basis_[leave_pos] = enter;
      etas_.push_back({leave_pos, w});
    }
    ++res.iterations;
  }

  // Optimal: report from a clean factorization.
  res.status = SolveStatus::Optimal;
  res.x.assign(x_.begin(), x_.end());
  res.duals.assign(sf_.m, 0.0);
  res.reduced.assign(N, 0.0);
  if (sf_.m > 0) {
    for (int p = 0; p < sf_.m; ++p) y[p] = sf_.cost[basis_[p]];
    btran(y);
    for (int r = 0; r < sf_.m; ++r) res.duals[r] = y[r];
  }
  for (int j = 0; j < N; ++j)
    res.reduced[j] = vstat_[j] == VarStatus::Basic ? 0.0 : sf_.cost[j] - col_dot(j, y);
  double obj = 0.0;
  for (int j = 0; j < sf_.n; ++j) obj += sf_.cost[j] * x_[j];
  res.objective = obj;

  if (basis_out) {
    basis_out->variables.assign(vstat_.begin(), vstat_.begin() + sf_.n);
    basis_out->logicals.assign(vstat_.begin() + sf_.n, vstat_.end());
  }
  return res;
}

}  // namespace evshare::lp::detail

// ---------------------------------------------------------------------------
// Facade
// ---------------------------------------------------------------------------

namespace evshare::lp {

SolveOutcome solve_lp(const LinearModel& model, const SolveOptions& opts,
                      bool relax_integrality) {
  if (model.has_integers() && !relax_integrality)
    throw SolveError("solve_lp called on a model with integer variables");
  const auto t0 = detail::Clock::now();
  detail::StandardForm sf(model);
  detail::Simplex solver(sf);
  const auto deadline = std::isfinite(opts.time_limit_seconds)
                            ? t0 + std::chrono::duration_cast<detail::Clock::duration>(
                                       std::chrono::duration<double>(opts.time_limit_seconds))
                            : detail::Clock::time_point::max();
  detail::SimplexResult r =
      solver.solve(sf.initial_lower, sf.initial_upper, opts.warm_start, opts.basis_out, deadline);

  SolveOutcome out;
  out.status = r.status;
  out.solve_seconds = std::chrono::duration<double>(detail::Clock::now() - t0).count();
  if (r.status == SolveStatus::Optimal) {
    out.proven_optimal = true;
    const double sgn = sf.maximize ? -1.0 : 1.0;
    out.objective = sgn * r.objective;
    out.primal.assign(r.x.begin(), r.x.begin() + sf.n);
    out.duals.resize(sf.m);
    out.reduced_costs.resize(sf.n);
    for (int i = 0; i < sf.m; ++i) out.duals[i] = sgn * r.duals[i];
    for (int j = 0; j < sf.n; ++j) out.reduced_costs[j] = sgn * r.reduced[j];
  }
  return out;
}

}  // namespace evshare::lp
