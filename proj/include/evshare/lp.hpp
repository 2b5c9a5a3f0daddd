#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace evshare::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, EQ, GE };
enum class ObjSense { Minimize, Maximize };
enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit };

// Row-oriented LP/MILP container. Constraint labels are unique and are how
// callers map dual values back to named constraint families.
class LinearModel {
 public:
  int add_variable(double lower, double upper, bool integer = false, std::string name = {});
  int add_constraint(std::vector<std::pair<int, double>> terms, RowSense sense, double rhs,
                     std::string label);

  void set_cost(int var, double coef);
  void set_objective_sense(ObjSense sense) { obj_sense_ = sense; }
  void set_bounds(int var, double lower, double upper);
  void set_rhs(int row, double rhs);
  void add_term(int row, int var, double coef);  // extend an existing row

  int num_variables() const { return static_cast<int>(lower_.size()); }
  int num_constraints() const { return static_cast<int>(rhs_.size()); }
  bool has_integers() const { return integer_count_ > 0; }

  double lower(int v) const { return lower_[v]; }
  double upper(int v) const { return upper_[v]; }
  bool is_integer(int v) const { return integer_[v] != 0; }
  double cost(int v) const { return cost_[v]; }
  ObjSense objective_sense() const { return obj_sense_; }
  const std::string& variable_name(int v) const { return names_[v]; }

  RowSense row_sense(int r) const { return senses_[r]; }
  double row_rhs(int r) const { return rhs_[r]; }
  const std::vector<std::pair<int, double>>& row_terms(int r) const { return rows_[r]; }
  const std::string& row_label(int r) const { return labels_[r]; }
  std::optional<int> find_row(const std::string& label) const;

 private:
  std::vector<double> lower_, upper_, cost_;
  std::vector<std::uint8_t> integer_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> label_index_;
  ObjSense obj_sense_ = ObjSense::Minimize;
  int integer_count_ = 0;
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

// Simplex basis snapshot, reusable to warm start a related model as long as
// the counts still line up.
struct Basis {
  std::vector<VarStatus> variables;  // per structural variable
  std::vector<VarStatus> logicals;   // per constraint row
  bool empty() const { return variables.empty() && logicals.empty(); }
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  bool proven_optimal = false;
  double objective = 0.0;
  std::vector<double> primal;         // per variable; empty when no incumbent
  std::vector<double> duals;          // per constraint; LP solves only
  std::vector<double> reduced_costs;  // per variable; LP solves only
  double solve_seconds = 0.0;
};

struct SolveOptions {
  double time_limit_seconds = kInf;
  const Basis* warm_start = nullptr;
  Basis* basis_out = nullptr;
};

// Pure LP solve with duals. Integer flags must be absent; pass
// relax_integrality to solve the continuous relaxation of a MILP model.
// Throws SolveError on numerical failure.
SolveOutcome solve_lp(const LinearModel& model, const SolveOptions& opts = {},
                      bool relax_integrality = false);

// Branch and bound on the LP relaxation. A time limit returns the best
// incumbent with status TimeLimit and proven_optimal = false.
SolveOutcome solve_milp(const LinearModel& model, double time_limit_seconds = kInf);

// Human-readable LP-format export for debugging.
std::string to_lp_text(const LinearModel& model);

}  // namespace evshare::lp
