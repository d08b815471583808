#include "perc/board.hpp"

#include <algorithm>
#include <cctype>

#include "perc/rng.hpp"

namespace perc {

char owner_char(Owner o) {
  switch (o) {
    case Owner::U: return 'U';
    case Owner::M: return 'M';
    case Owner::B: return 'B';
  }
  return '?';
}

Owner owner_from_char(char c) {
  switch (c) {
    case 'U': return Owner::U;
    case 'M': return Owner::M;
    case 'B': return Owner::B;
    default: throw ParameterError(std::string("bad owner tag '") + c + "'");
  }
}

std::size_t GameConfiguration::count(Owner o) const {
  return static_cast<std::size_t>(std::count(owner.begin(), owner.end(), o));
}

void check_board_params(double alpha, double beta) {
  if (!(alpha >= 0 && alpha <= 1) || !(beta >= 0 && beta <= 1))
    throw ParameterError("alpha and beta must lie in [0,1]");
  if (alpha + beta > 1 + 1e-12) throw ParameterError("alpha + beta must be at most 1");
}

GameConfiguration sample_config(std::shared_ptr<const WindowGraph> graph, const BoardParams& params) {
  check_board_params(params.alpha, params.beta);
  GameConfiguration sigma;
  sigma.seed = params.seed;
  sigma.owner.resize(graph->edge_count(), Owner::U);
  const std::uint64_t key = derive_seed(params.seed, Domain::board);
  const double cut = params.alpha + params.beta;
  for (int e = 0; e < graph->edge_count(); ++e) {
    double u = to_unit(prf(key, graph->edge(e).id));
    if (u < params.alpha)
      sigma.owner[e] = Owner::M;
    else if (u < cut)
      sigma.owner[e] = Owner::B;
  }
  sigma.graph = std::move(graph);
  return sigma;
}

GameConfiguration sample_config(const LatticeKind& kind, const Window& w, const BoardParams& params) {
  return sample_config(std::make_shared<const WindowGraph>(kind, w), params);
}

GameConfiguration sample_bond(std::shared_ptr<const WindowGraph> graph, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw ParameterError("p must lie in [0,1]");
  return sample_config(std::move(graph), BoardParams{0.0, 1.0 - p, seed});
}

GameConfiguration sample_bond(const LatticeKind& kind, const Window& w, double p, std::uint64_t seed) {
  return sample_bond(std::make_shared<const WindowGraph>(kind, w), p, seed);
}

std::vector<Owner> reverse(std::span<const Owner> sigma) {
  std::vector<Owner> out(sigma.begin(), sigma.end());
  for (Owner& o : out) {
    if (o == Owner::M)
      o = Owner::B;
    else if (o == Owner::B)
      o = Owner::M;
  }
  return out;
}

GameConfiguration reverse(const GameConfiguration& sigma) {
  GameConfiguration out = sigma;
  out.owner = reverse(std::span<const Owner>(sigma.owner));
  return out;
}

std::vector<char> sample_site_flags(const WindowGraph& graph, double q, std::uint64_t seed) {
  if (!(q >= 0 && q <= 1)) throw ParameterError("q must lie in [0,1]");
  const std::uint64_t key = derive_seed(seed, Domain::sites);
  std::vector<char> flags(graph.vertex_count(), 0);
  for (int v = 0; v < graph.vertex_count(); ++v)
    flags[v] = to_unit(prf(key, edge_id(graph.kind(), graph.vertex(v), 0))) < q;
  return flags;
}

std::vector<Vertex> sample_sites(const LatticeKind& kind, const Window& w, double q, std::uint64_t seed) {
  WindowGraph g(kind, w);
  auto flags = sample_site_flags(g, q, seed);
  std::vector<Vertex> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (flags[v]) out.push_back(g.vertex(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::string encode_runs(std::span<const Owner> sigma) {
  std::string out;
  std::size_t i = 0;
  while (i < sigma.size()) {
    std::size_t j = i;
    while (j < sigma.size() && sigma[j] == sigma[i]) ++j;
    out += std::to_string(j - i);
    out += owner_char(sigma[i]);
    i = j;
  }
  return out;
}

std::vector<Owner> decode_runs(std::string_view text) {
  std::vector<Owner> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i || j == text.size()) throw ParameterError("malformed run-length string");
    std::size_t n = std::stoull(std::string(text.substr(i, j - i)));
    out.insert(out.end(), n, owner_from_char(text[j]));
    i = j + 1;
  }
  return out;
}

nlohmann::json to_json(const GameConfiguration& sigma) {
  const WindowGraph& g = *sigma.graph;
  nlohmann::json doc;
  doc["kind"] = to_string(g.kind());
  std::vector<int> center(g.window().center.c.begin(), g.window().center.c.begin() + g.window().center.dim);
  doc["center"] = center;
  doc["radius"] = g.radius();
  if (sigma.seed) doc["seed"] = *sigma.seed;
  doc["ownership"] = encode_runs(sigma.owner);
  return doc;
}

GameConfiguration config_from_json(const nlohmann::json& doc) {
  LatticeKind kind = parse_lattice(doc.at("kind").get<std::string>());
  auto coords = doc.at("center").get<std::vector<int>>();
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim)) throw ParameterError("bad center");
  Vertex center = Vertex::origin(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) center[static_cast<int>(i)] = coords[i];
  GameConfiguration sigma;
  sigma.graph = std::make_shared<const WindowGraph>(kind, Window{center, doc.at("radius").get<int>()});
  if (doc.contains("seed")) sigma.seed = doc["seed"].get<std::uint64_t>();
  sigma.owner = decode_runs(doc.at("ownership").get<std::string>());
  if (sigma.owner.size() != static_cast<std::size_t>(sigma.graph->edge_count()))
    throw ParameterError("ownership length does not match the window");
  return sigma;
}

}  // namespace perc
