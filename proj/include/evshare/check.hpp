#pragma once

#include <string>
#include <vector>

#include "evshare/instance.hpp"
#include "evshare/master.hpp"

namespace evshare {

// On-disk solution: the station pool with built pair counts plus the full
// flow assignment, enough to re-verify every constraint independently.
struct SolutionFile {
  std::string method;  // bcsa | ee | nodes
  std::string status;  // optimal | time-limit
  double objective = 0.0;
  std::vector<Station> stations;
  std::vector<double> z;
  std::vector<Grid<double>> flow_in;   // per period: |S| x |N|
  std::vector<Grid<double>> flow_out;
  std::vector<Grid<double>> unmet;     // per period: |N| x |N|
};

SolutionFile make_solution_file(const Instance& inst, const std::vector<Station>& stations,
                                const MasterSolution& sol, const std::string& method);

std::string solution_to_json(const SolutionFile& sol);
SolutionFile parse_solution_json(const std::string& text);
SolutionFile load_solution(const std::string& path);
void save_solution(const SolutionFile& sol, const std::string& path);

struct CheckItem {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // largest violation found
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass = true;
};

// Re-evaluates capacity, trip-conservation, balance, trip-integrity, budget,
// station size, and integrality of z against the instance at the tolerance.
CheckReport check_solution(const Instance& inst, const SolutionFile& sol, double tol = 1e-6);

}  // namespace evshare
