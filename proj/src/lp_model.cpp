#include "evshare/lp.hpp"

#include <cmath>
#include <sstream>

#include "evshare/errors.hpp"

namespace evshare::lp {

int LinearModel::add_variable(double lower, double upper, bool integer, std::string name) {
  if (lower > upper)
    throw ValidationError("variable '" + name + "' has lower bound above upper bound");
  const int id = num_variables();
  lower_.push_back(lower);
  upper_.push_back(upper);
  cost_.push_back(0.0);
  integer_.push_back(integer ? 1 : 0);
  if (integer) ++integer_count_;
  names_.push_back(name.empty() ? "x" + std::to_string(id) : std::move(name));
  return id;
}

int LinearModel::add_constraint(std::vector<std::pair<int, double>> terms, RowSense sense,
                                double rhs, std::string label) {
  const int id = num_constraints();
  if (label.empty()) label = "c" + std::to_string(id);
  if (!label_index_.emplace(label, id).second)
    throw ValidationError("duplicate constraint label '" + label + "'");
  for (const auto& [v, coef] : terms) {
    (void)coef;
    if (v < 0 || v >= num_variables())
      throw ValidationError("constraint '" + label + "' references undeclared variable");
  }
  rows_.push_back(std::move(terms));
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  labels_.push_back(std::move(label));
  return id;
}

void LinearModel::set_cost(int var, double coef) { cost_[var] = coef; }

void LinearModel::set_bounds(int var, double lower, double upper) {
  if (lower > upper) throw ValidationError("bounds cross for variable " + names_[var]);
  lower_[var] = lower;
  upper_[var] = upper;
}

void LinearModel::set_rhs(int row, double rhs) { rhs_[row] = rhs; }

void LinearModel::add_term(int row, int var, double coef) {
  if (var < 0 || var >= num_variables())
    throw ValidationError("add_term references undeclared variable");
  rows_[row].emplace_back(var, coef);
}

std::optional<int> LinearModel::find_row(const std::string& label) const {
  auto it = label_index_.find(label);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

std::string to_lp_text(const LinearModel& m) {
  std::ostringstream out;
  out.precision(12);
  out << (m.objective_sense() == ObjSense::Minimize ? "Minimize\n obj:" : "Maximize\n obj:");
  for (int v = 0; v < m.num_variables(); ++v) {
    const double c = m.cost(v);
    if (c == 0.0) continue;
    out << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << m.variable_name(v);
  }
  out << "\nSubject To\n";
  for (int r = 0; r < m.num_constraints(); ++r) {
    out << " " << m.row_label(r) << ":";
    for (const auto& [v, c] : m.row_terms(r))
      out << (c >= 0 ? " + " : " - ") << std::abs(c) << " " << m.variable_name(v);
    switch (m.row_sense(r)) {
      case RowSense::LE: out << " <= "; break;
      case RowSense::EQ: out << " = "; break;
      case RowSense::GE: out << " >= "; break;
    }
    out << m.row_rhs(r) << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < m.num_variables(); ++v) {
    out << " ";
    if (m.lower(v) == -kInf)
      out << "-inf";
    else
      out << m.lower(v);
    out << " <= " << m.variable_name(v) << " <= ";
    if (m.upper(v) == kInf)
      out << "+inf";
    else
      out << m.upper(v);
    out << "\n";
  }
  bool any_int = false;
  for (int v = 0; v < m.num_variables(); ++v) {
    if (!m.is_integer(v)) continue;
    if (!any_int) out << "Generals\n";
    any_int = true;
    out << " " << m.variable_name(v) << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace evshare::lp
