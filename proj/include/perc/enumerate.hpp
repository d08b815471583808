#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "perc/hypergame.hpp"
#include "perc/lattice.hpp"

namespace perc {

struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kCycleLengthCap = 24;
int default_saw_cap(const LatticeKind& kind);

// Self-avoiding walks of exactly `length` edges from `origin`, stored flat
// (walk i occupies edges[i*length, (i+1)*length) in walk order, as window
// edge indices).
struct SawSet {
  Vertex origin;
  int length = 0;
  std::int64_t count = 0;
  std::vector<int> edges;

  std::span<const int> walk(std::int64_t i) const {
    return {edges.data() + i * length, static_cast<std::size_t>(length)};
  }
};

// Depth-first in the lattice's neighbour order. cap < 0 uses default_saw_cap.
SawSet enumerate_saws(const WindowGraph& graph, const Vertex& v0, int length, int cap = -1);
// One winning set per walk. Needs length >= 1.
WinningSetSystem build_path_system(const SawSet& saws, int universe);
nlohmann::json to_json(const SawSet& saws, const WindowGraph& graph);

// Two-wide ladder v0 + {0..N} x {0,1} on Z^2. The first edge {v0, v0+(0,1)}
// is the end rung; triple i is the U made of the bottom rail, the next rung
// and the top rail between columns i and i+1.
struct Ladder {
  Vertex origin;
  int height = 0;
  std::vector<Edge> edges;
  Edge first;
  std::vector<std::array<Edge, 3>> triples;

  std::vector<Vertex> vertices() const;
  // Triple index containing the edge, -1 for the first edge or non-ladder edges.
  int triple_of(const Edge& e) const;
};

Ladder build_ladder(const Vertex& v0, int height);

// Simple dual cycles of length <= max_len whose interior contains every
// target vertex, as primal edge lists in traversal order.
struct CycleSet {
  std::vector<Vertex> enclosed;
  std::optional<Vertex> ladder_origin;
  int ladder_height = 0;
  int max_len = 0;
  std::vector<std::vector<Edge>> cycles;
};

// Cycles restricted to faces of the window.
CycleSet enumerate_enclosing_cycles(const Ladder& ladder, int max_len, const WindowGraph& graph);
CycleSet enumerate_enclosing_cycles(std::span<const Vertex> targets, int max_len, const WindowGraph& graph);
// Same enumeration in the whole plane.
CycleSet enumerate_enclosing_cycles(std::span<const Vertex> targets, int max_len);

// Drops cycles with an edge outside the window when `drop_outside` is set,
// otherwise throws.
WinningSetSystem build_cycle_system(const CycleSet& cycles, const WindowGraph& graph, bool drop_outside = false);
nlohmann::json to_json(const CycleSet& cycles, const WindowGraph& graph);

// True iff deleting the edges disconnects v0 from the window boundary.
bool min_separating_check(const WindowGraph& graph, std::span<const Edge> cycle, const Vertex& v0);

// Even-odd test of a lattice vertex against a closed dual cycle.
bool encloses(std::span<const Edge> cycle, const Vertex& v);

}  // namespace perc
