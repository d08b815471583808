#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perc/board.hpp"
#include "perc/enumerate.hpp"
#include "perc/hypergame.hpp"
#include "perc/lattice.hpp"

namespace perc {

struct UnsupportedRules : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- bootstrap percolation ------------------------------------------------

// Least fixed point of I -> I + {v : |N(v) & I| >= r} inside the window, or
// inside `region` (vertex flags) when given; infected flags outside it are ignored.
std::vector<char> bootstrap_closure(const WindowGraph& graph, std::span<const char> infected, int r,
                                    std::span<const char> region = {});
std::vector<Vertex> bootstrap_closure(const LatticeKind& kind, const Window& w, std::span<const Vertex> infected, int r);

// ---- clumps and confinement -----------------------------------------------

struct Clump {
  Vertex center;
  std::vector<int> edges;  // window edge indices, ascending
};

struct ClumpFamily {
  std::vector<Vertex> used;
  std::vector<Clump> clumps;
};

struct ClumpRun {
  ClumpFamily family;
  bool path_remains = true;      // residue still joins v0 to the box boundary
  bool stopped_on_degree = false;  // loop ended because every internal vertex had degree >= d+1
  int iterations = 0;
};

// Peeling on the open (non-Breaker) edges of B_m(v0); B_m(v0) must lie in the window.
ClumpRun build_clumps(const WindowGraph& graph, std::span<const Owner> owner, const Vertex& v0, int m);

struct ConfinementResult {
  Vertex origin;
  std::optional<int> radius;  // empty: not confined for any m <= r_max
  int r_max = 0;
  std::optional<ClumpFamily> family;
};

ConfinementResult confinement_radius(const WindowGraph& graph, std::span<const Owner> owner, const Vertex& v0,
                                     int r_max);

nlohmann::json to_json(const ClumpFamily& family, const WindowGraph& graph);

// ---- strategies -------------------------------------------------------------

enum class Side { maker, breaker };

struct GameView {
  const WindowGraph* graph = nullptr;
  std::span<const Owner> owner;  // board before this turn's claims
  GameRules rules;
  int v0 = 0;  // vertex index
};

struct TurnInput {
  GameView view;
  std::span<const int> opponent_moves;  // opponent's claims since our last turn
  int quota = 0;
  int turn = 0;  // 1-based
};

struct StrategyParams {
  std::uint64_t seed = 0;
  int path_length = 0;   // potential-breaker walk length; 0 picks the smallest certified one
  int path_cap = 10;
  int confine_max = 128;  // clump search radius
  int ladder_min = 1;     // composite maker ladder heights tried
  int ladder_max = 9;
  int cycle_slack = 10;   // composite maker cycle cap: min(24, 2N + 6 + slack)
  int scan_radius = -1;   // composite maker origin scan; -1 = half the window
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  // Round zero (Maker only): choose v0. Default is the window centre.
  virtual int choose_origin(const WindowGraph& graph, std::span<const Owner> owner, const GameRules& rules);
  virtual void start(const GameView& view);
  virtual std::vector<int> play(const TurnInput& in) = 0;
  virtual nlohmann::json report() const { return nlohmann::json::object(); }
};

const std::vector<std::string>& strategy_names();
bool strategy_allowed(std::string_view name, Side side);
std::unique_ptr<Strategy> make_strategy(std::string_view name, Side side, const StrategyParams& params);

// Ladder-to-board helpers shared by the composite Maker and its audits.
struct LadderPlacement {
  Vertex v0;
  int height = 0;
  int max_len = 0;
  BeckCertificate certificate;
  int cycles = 0;
};

int composite_cycle_length(int height, int slack);

// Origin scan for the composite Maker: spiral from `center` (default: the
// window centre), first vertex whose ladder has no Breaker edge and whose cycle
// family passes the certificate in the reversed game. Empty when nothing
// within the scan passes.
std::optional<LadderPlacement> find_ladder_placement(const WindowGraph& graph, std::span<const Owner> owner,
                                                     const GameRules& rules, const StrategyParams& params,
                                                     std::optional<Vertex> center = std::nullopt);

// Cycles around the ladder at v0, translated from a cached enumeration
// around the origin; cycles leaving the window are dropped.
std::vector<std::vector<int>> ladder_cycles(const WindowGraph& graph, const Vertex& v0, int height, int max_len);

}  // namespace perc
