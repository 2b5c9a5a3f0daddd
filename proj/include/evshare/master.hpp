#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evshare/capacity.hpp"
#include "evshare/grid.hpp"
#include "evshare/instance.hpp"
#include "evshare/lp.hpp"

namespace evshare {

// A candidate charging site. The neighbourhood indicator says which nodes may
// route flow through the station; coords/cost/capacity derive from the convex
// weights over those nodes.
struct Station {
  std::vector<std::uint8_t> neighborhood;  // B, one flag per node
  std::vector<double> alpha;               // convex weights, supported on B
  Point pos;                               // alpha^T (x, y)
  double pair_cost = 0.0;                  // alpha^T c^N
  int pair_capacity = 1;                   // round-half-up(alpha^T m^N) unless overridden

  std::vector<int> covered() const;
  // Checks the station invariants at the given tolerance; throws
  // ValidationError naming the failed one.
  void validate(const Instance& inst, double tol = 1e-6) const;
};

// One station per node with unit weights; the S = N baseline.
Station make_node_station(const Instance& inst, int node);

int round_half_up(double v);

struct MasterSolution {
  lp::SolveStatus status = lp::SolveStatus::Optimal;
  bool proven_optimal = false;
  double objective = 0.0;                // total unmet trips
  std::vector<double> z;                 // pairs per station
  std::vector<Grid<double>> flow_in;     // F^{t+}, per t: |S| x |N|
  std::vector<Grid<double>> flow_out;    // F^{t-}
  std::vector<Grid<double>> unmet;       // E^t, per t: |N| x |N|
};

struct DualSolution {
  Grid<double> capacity_price;  // U >= 0, T x S
  Grid<double> arrival_price;   // P, T x N
  Grid<double> departure_price; // G, T x N
  Grid<double> balance_price;   // R, T x S
  std::vector<Grid<double>> trip_price;  // W^t >= 0, per t: N x N
  double budget_price = 0.0;    // q >= 0
  std::vector<double> size_price;  // h >= 0, per station
  double objective = 0.0;
};

struct MasterOptions {
  bool relax = false;                  // z continuous when true
  bool enforce_trip_integrity = true;  // test-only: false drops E <= OD
};

// Program (OP) over a station pool. Stations can be appended, which extends
// the model in place so warm starts survive column generation.
class MasterProblem {
 public:
  MasterProblem(const Instance& inst, const CapacityProfile& profile,
                std::vector<Station> stations, MasterOptions options = {});

  void add_station(const Station& s);

  // LP relaxation with duals mapped back to the (U, P, G, R, W, q, h)
  // conventions (all of U, W, q, h non-negative).
  std::pair<MasterSolution, DualSolution> solve_relaxation();

  // Final solve with integral z. Requires options.relax == false.
  MasterSolution solve_integer(double time_limit_seconds = lp::kInf);

  // Pins z for integrality experiments (bounds [z_s, z_s]).
  void fix_z(const std::vector<int>& z);

  const lp::LinearModel& model() const { return model_; }
  const std::vector<Station>& stations() const { return stations_; }
  std::size_t station_count() const { return stations_.size(); }

 private:
  void append_station_block(std::size_t s);
  MasterSolution extract_solution(const lp::SolveOutcome& out) const;

  const Instance& inst_;
  const CapacityProfile& profile_;
  std::vector<Station> stations_;
  MasterOptions options_;
  FlowTotals flows_;
  lp::LinearModel model_;

  // variable / row bookkeeping
  std::vector<int> e_var_;                     // t*N*N + n*N + n'
  std::vector<std::vector<int>> covered_;      // per station
  std::vector<int> z_var_;                     // per station
  std::vector<std::vector<int>> fin_var_;      // per station: t*|cov|+k
  std::vector<std::vector<int>> fout_var_;
  std::vector<std::vector<int>> cap_row_;      // per station: per t
  std::vector<std::vector<int>> bal_row_;
  std::vector<int> zcap_row_;                  // per station
  std::vector<int> arr_row_;                   // t*N + n
  std::vector<int> dep_row_;
  int budget_row_ = -1;

  lp::Basis warm_;
  bool has_warm_ = false;
};

// Explicit dual (D) of the continuous relaxation; verification only.
lp::LinearModel build_dual_model(const Instance& inst, const CapacityProfile& profile,
                                 const std::vector<Station>& stations);

// PG^t_{n,n'} = max(-(P_{t,n} + G_{t,n'}) / 2, 0).
std::vector<Grid<double>> compute_pg(const DualSolution& dual, std::size_t node_count);

// The [(1'),(2)-(5)] coefficient system of one period with z pinned, in the
// stacked-column variable order used for the unimodularity checks.
struct TuSystem {
  Grid<int> matrix;                    // rows x cols, entries in {-1, 0, 1}
  std::vector<lp::RowSense> senses;
  std::vector<std::int64_t> rhs;
  std::vector<std::string> row_tags;   // "1'", "2", "3", "4", "5"
  std::vector<std::string> col_names;
};

TuSystem build_tu_system(const Instance& inst, const CapacityProfile& profile,
                         const std::vector<Station>& stations, const std::vector<int>& z,
                         std::size_t period);

}  // namespace evshare
