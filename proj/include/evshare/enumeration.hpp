#pragma once

#include <cstddef>
#include <vector>

#include "evshare/capacity.hpp"
#include "evshare/instance.hpp"
#include "evshare/master.hpp"

namespace evshare {

struct StationCatalog {
  std::vector<Station> stations;     // deduplicated by neighborhood
  std::size_t subsets_examined = 0;  // including duplicates across seeds
  std::size_t accepted = 0;
};

// All stations buildable from node subsets that are pairwise within 2w and
// admit a feasible l1 center; placement via min-cost location. Throws
// SizeError when more than `cap` stations would be accepted.
StationCatalog enumerate_stations(const Instance& inst, const CapacityProfile& profile,
                                  std::size_t cap = 200000);

// Solve the master over the full catalog under a time limit.
MasterSolution run_ee(const Instance& inst, const CapacityProfile& profile,
                      double time_limit_seconds = lp::kInf,
                      StationCatalog* catalog_out = nullptr);

}  // namespace evshare
