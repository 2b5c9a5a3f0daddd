#include "evshare/enumeration.hpp"

#include <functional>
#include <set>

#include "evshare/errors.hpp"
#include "evshare/pricing.hpp"

namespace evshare {

namespace {

// Depth-first extension over the sorted candidate list; every emitted subset
// is already pairwise within 2w by construction.
void extend(const std::vector<int>& candidates, const Grid<std::uint8_t>& close,
            std::vector<int>& picked, std::size_t start,
            const std::function<void(const std::vector<int>&)>& emit) {
  emit(picked);
  for (std::size_t i = start; i < candidates.size(); ++i) {
    bool ok = true;
    for (int p : picked)
      if (!close(p, candidates[i])) {
        ok = false;
        break;
      }
    if (!ok) continue;
    picked.push_back(candidates[i]);
    extend(candidates, close, picked, i + 1, emit);
    picked.pop_back();
  }
}

}  // namespace

StationCatalog enumerate_stations(const Instance& inst, const CapacityProfile& profile,
                                  std::size_t cap) {
  const std::size_t N = inst.net.node_count();
  const double w = inst.params.walk_radius;
  const FlowTotals flows = compute_flows(inst.net);

  Grid<std::uint8_t> close(N, N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      close(a, b) = distance(inst.net.nodes[a].pos, inst.net.nodes[b].pos) <= 2 * w ? 1 : 0;

  StationCatalog catalog;
  std::set<std::vector<std::uint8_t>> seen;
  for (std::size_t seed = 0; seed < N; ++seed) {
    std::vector<int> candidates;
    for (std::size_t n = 0; n < N; ++n)
      if (n != seed && close(seed, n)) candidates.push_back(static_cast<int>(n));

    std::vector<int> picked;
    extend(candidates, close, picked, 0, [&](const std::vector<int>& subset) {
      ++catalog.subsets_examined;
      std::vector<std::uint8_t> neighborhood(N, 0);
      neighborhood[seed] = 1;
      for (int n : subset) neighborhood[n] = 1;
      if (!seen.insert(neighborhood).second) return;
      // Pairwise 2w does not guarantee a common l1 center; filter those out.
      if (min_cover_radius(inst.net, neighborhood) > w + 1e-9) return;
      if (++catalog.accepted > cap)
        throw SizeError("station catalog exceeds the cap of " + std::to_string(cap));
      catalog.stations.push_back(min_cost_location(neighborhood, inst, flows, profile));
    });
  }
  return catalog;
}

MasterSolution run_ee(const Instance& inst, const CapacityProfile& profile,
                      double time_limit_seconds, StationCatalog* catalog_out) {
  StationCatalog catalog = enumerate_stations(inst, profile);
  MasterProblem master(inst, profile, catalog.stations, {.relax = false});
  MasterSolution sol = master.solve_integer(time_limit_seconds);
  if (catalog_out) *catalog_out = std::move(catalog);
  return sol;
}

}  // namespace evshare
