#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "perc/lattice.hpp"

namespace perc {

enum class Owner : std::uint8_t { U = 0, M = 1, B = 2 };

char owner_char(Owner o);
Owner owner_from_char(char c);

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BoardParams {
  double alpha = 0;
  double beta = 0;
  std::uint64_t seed = 0;
};

struct GameConfiguration {
  std::shared_ptr<const WindowGraph> graph;
  std::vector<Owner> owner;  // indexed by window edge index (id order)
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return owner.size(); }
  std::size_t count(Owner o) const;
};

void check_board_params(double alpha, double beta);

GameConfiguration sample_config(std::shared_ptr<const WindowGraph> graph, const BoardParams& params);
GameConfiguration sample_config(const LatticeKind& kind, const Window& w, const BoardParams& params);
// Closed edges (probability 1-p) are pre-claimed by Breaker.
GameConfiguration sample_bond(std::shared_ptr<const WindowGraph> graph, double p, std::uint64_t seed);
GameConfiguration sample_bond(const LatticeKind& kind, const Window& w, double p, std::uint64_t seed);

std::vector<Owner> reverse(std::span<const Owner> sigma);
GameConfiguration reverse(const GameConfiguration& sigma);

// Per-vertex inclusion flags, indexed like WindowGraph vertices.
std::vector<char> sample_site_flags(const WindowGraph& graph, double q, std::uint64_t seed);
std::vector<Vertex> sample_sites(const LatticeKind& kind, const Window& w, double q, std::uint64_t seed);

// Run-length string over {U,M,B}, e.g. "12U1B3U".
std::string encode_runs(std::span<const Owner> sigma);
std::vector<Owner> decode_runs(std::string_view text);

nlohmann::json to_json(const GameConfiguration& sigma);
GameConfiguration config_from_json(const nlohmann::json& doc);

}  // namespace perc
