#pragma once

#include <string>

#include "evshare/check.hpp"
#include "evshare/instance.hpp"

namespace evshare {

// Station-map figure: nodes as light markers, built stations (z >= 1) as dark
// markers at the centroid of their neighborhoods, and the node centroid P as
// a distinct ring. Pass nullptr to draw the instance alone.
std::string render_map(const Instance& inst, const SolutionFile* sol);

}  // namespace evshare
