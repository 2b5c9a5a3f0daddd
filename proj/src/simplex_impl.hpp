#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <chrono>
#include <vector>

#include "evshare/lp.hpp"

namespace evshare::lp::detail {

using Clock = std::chrono::steady_clock;

// LinearModel rewritten as  A x + I s = b  with one logical column per row;
// the objective is always minimized internally.
struct StandardForm {
  int n = 0;  // structural columns
  int m = 0;  // rows
  bool maximize = false;

  // CSC of the structural block. Column j of the full system is a unit
  // column e_{j-n} for j >= n.
  std::vector<int> col_ptr;
  std::vector<int> col_row;
  std::vector<double> col_val;

  std::vector<double> cost;  // size n + m, min sense; logicals cost 0
  std::vector<double> rhs;   // size m

  explicit StandardForm(const LinearModel& model);

  // Bounds for the full column set; the caller owns them so branch and
  // bound can tighten structural bounds per node.
  std::vector<double> initial_lower;  // size n + m
  std::vector<double> initial_upper;
};

struct SimplexResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;        // internal min sense
  std::vector<double> x;         // size n + m
  std::vector<double> duals;     // y = B^-T c_B, size m
  std::vector<double> reduced;   // size n + m
  long iterations = 0;
};

class Simplex {
 public:
  explicit Simplex(const StandardForm& sf) : sf_(sf) {}

  SimplexResult solve(const std::vector<double>& lower, const std::vector<double>& upper,
                      const Basis* warm, Basis* basis_out, Clock::time_point deadline);

 private:
  struct Eta {
    int pivot_pos;
    Eigen::VectorXd w;
  };

  const StandardForm& sf_;
  const std::vector<double>* lb_ = nullptr;
  const std::vector<double>* ub_ = nullptr;

  std::vector<int> basis_;           // column in each basis position
  std::vector<VarStatus> vstat_;     // per column
  std::vector<double> x_;            // per column
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  bool factor_ok_ = false;

  int ncols() const { return sf_.n + sf_.m; }
  double col_dot(int j, const Eigen::VectorXd& y) const;
  void col_axpy(int j, double scale, Eigen::VectorXd& v) const;

  void init_basis(const Basis* warm);
  void reset_to_logical_basis();
  bool factorize();
  void refresh(bool refactor);
  void ftran(Eigen::VectorXd& v);
  void btran(Eigen::VectorXd& v);
  void compute_basic_values();
  double bound_violation(int col) const;
};

}  // namespace evshare::lp::detail
