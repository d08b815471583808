#pragma once

#include <span>
#include <vector>

#include "perc/board.hpp"
#include "perc/lattice.hpp"

namespace perc {

// Is some boundary vertex reachable from v0 using only edges whose owner is
// accepted (non-Breaker edges, or Maker edges only)?
bool reaches_boundary(const WindowGraph& graph, std::span<const Owner> owner, int v0, bool maker_only);

// v0 -> boundary path through non-Breaker edges using the fewest unclaimed
// edges (Maker edges are free). Edge indices in order from v0; empty when v0
// is cut off.
std::vector<int> cheapest_escape(const WindowGraph& graph, std::span<const Owner> owner, int v0);

struct MinCut {
  bool finite = true;  // false when Maker already owns a v0 -> boundary path
  int value = 0;
  std::vector<int> edges;  // unclaimed edges of the cut nearest to v0, ascending
};

// Minimum set of unclaimed edges separating v0 from the boundary, with
// Breaker edges already removed and Maker edges uncuttable.
MinCut min_cut_to_boundary(const WindowGraph& graph, std::span<const Owner> owner, int v0);

}  // namespace perc
