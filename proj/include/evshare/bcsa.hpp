#pragma once

#include <vector>

#include "evshare/capacity.hpp"
#include "evshare/instance.hpp"
#include "evshare/master.hpp"

namespace evshare {

struct BcsaLimits {
  long max_iterations = 0;     // 0 = default 10 * |N| * M_T pricing rounds
  double wall_seconds = lp::kInf;
  double final_milp_seconds = lp::kInf;
  int threads = 1;
};

struct BcsaIteration {
  int size_level;          // current SB bar
  double reduced_benefit;  // h of the priced candidate; -inf when infeasible
  bool accepted;
  std::size_t pool_size;
  double relax_objective;  // after the accept, else the stale value
  double elapsed_seconds;
};

struct BcsaTrace {
  int initial_size_level = 0;
  std::vector<BcsaIteration> iterations;
  std::vector<Station> pool;
  double final_relax_objective = 0.0;
  MasterSolution final_solution;
  bool complete = true;  // false when an iteration/wall/MILP cap cut the run short
};

// Column generation over candidate stations: start from the greatest-flow
// station, price at decreasing neighborhood sizes, then solve the integer
// master over the generated pool.
BcsaTrace run_bcsa(const Instance& inst, const CapacityProfile& profile,
                   const BcsaLimits& limits = {});

// One trace record per line, as JSON objects.
std::string trace_to_jsonl(const BcsaTrace& trace);

}  // namespace evshare
