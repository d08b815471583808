#pragma once

// Random instances and property checks shared by unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "perc/engine.hpp"
#include "perc/hypergame.hpp"
#include "perc/rng.hpp"
#include "perc/strategies.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace perc;

struct Instance {
  WinningSetSystem system;
  std::vector<Owner> sigma;
};

// Random hypergraph on `n` elements with `sets` nonempty sets of size
// 1..max_size, and a random partial configuration (claims with probability
// claim_prob, split evenly between the players).
inline Instance random_instance(SplitMix64& rng, int n, int sets, int max_size, double claim_prob) {
  Instance inst{WinningSetSystem(n), std::vector<Owner>(n, Owner::U)};
  for (int s = 0; s < sets; ++s) {
    int size = 1 + static_cast<int>(rng.below(std::min(max_size, n)));
    std::vector<int> members;
    while (static_cast<int>(members.size()) < size) {
      int v = static_cast<int>(rng.below(n));
      if (std::find(members.begin(), members.end(), v) == members.end()) members.push_back(v);
    }
    inst.system.add_set(members);
  }
  inst.system.finalize();
  for (auto& o : inst.sigma) {
    double u = rng.uniform();
    if (u < claim_prob / 2)
      o = Owner::M;
    else if (u < claim_prob)
      o = Owner::B;
  }
  return inst;
}

inline bool close(double a, double b, double scale, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

inline std::vector<Owner> with(std::vector<Owner> s, int v, Owner o) {
  s[v] = o;
  return s;
}

// Checks the five potential observations on every unclaimed element (and
// pair). Returns a description of the first failure.
inline std::optional<std::string> check_observations(const WinningSetSystem& sys, const std::vector<Owner>& sigma,
                                                     double lambda) {
  const double w = total_danger(sigma, sys, lambda);
  const double tol = 1e-12;
  std::vector<int> free;
  for (int v = 0; v < static_cast<int>(sigma.size()); ++v)
    if (sigma[v] == Owner::U) free.push_back(v);
  std::ostringstream msg;
  for (int v : free) {
    const double db = potential_breaker(sigma, sys, lambda, v);
    const double dm = potential_maker(sigma, sys, lambda, v);
    const double wb = total_danger(with(sigma, v, Owner::B), sys, lambda);
    const double wm = total_danger(with(sigma, v, Owner::M), sys, lambda);
    if (!close(db, w - wb, w)) {
      msg << "obs 6.1 at " << v << ": " << db << " vs " << w - wb;
      return msg.str();
    }
    if (!close(dm, (1 / lambda - 1) * db, dm) || !close(dm, wm - w, wm)) {
      msg << "obs 6.2 at " << v << ": " << dm << " vs " << wm - w;
      return msg.str();
    }
    if (wm > w / lambda * (1 + tol)) {
      msg << "obs 6.5 at " << v << ": " << wm << " > " << w / lambda;
      return msg.str();
    }
  }
  for (int v1 : free)
    for (int v2 : free) {
      if (v1 >= v2) continue;
      auto b1 = with(sigma, v1, Owner::B);
      if (potential_breaker(b1, sys, lambda, v2) > potential_breaker(sigma, sys, lambda, v2) * (1 + tol)) {
        msg << "obs 6.3 at (" << v1 << "," << v2 << ")";
        return msg.str();
      }
      auto m1 = with(sigma, v1, Owner::M), m2 = with(sigma, v2, Owner::M);
      bool one = potential_maker(m1, sys, lambda, v2) <= potential_maker(sigma, sys, lambda, v1) / lambda * (1 + tol);
      bool two = potential_maker(m2, sys, lambda, v1) <= potential_maker(sigma, sys, lambda, v2) / lambda * (1 + tol);
      if (!one && !two) {
        msg << "obs 6.4 at (" << v1 << "," << v2 << ")";
        return msg.str();
      }
    }
  return std::nullopt;
}

// ClumpFamily invariants plus the residue postcondition: with the used
// vertices deleted, no open path joins v0 to the boundary of B_m(v0).
inline std::optional<std::string> clump_violation(const WindowGraph& g, std::span<const Owner> owner,
                                                  const Vertex& v0, int m, const ClumpFamily& fam) {
  const int d = g.kind().dim;
  const Window box{v0, m};
  auto on_boundary = [&](const Vertex& v) {
    for (int i = 0; i < d; ++i)
      if (std::abs(v[i] - v0[i]) == m) return true;
    return false;
  };
  std::set<Vertex> used;
  for (const Vertex& u : fam.used) {
    if (!in_box(box, u) || on_boundary(u) || u == v0) return "used vertex " + to_string(u) + " is not internal";
    if (!used.insert(u).second) return "vertex " + to_string(u) + " used twice";
  }
  std::set<int> seen_edges;
  for (const Clump& c : fam.clumps) {
    const int k = static_cast<int>(c.edges.size());
    if (k < 2 || k > d) return "clump at " + to_string(c.center) + " has " + std::to_string(k) + " edges";
    if (!used.count(c.center)) return "clump centre " + to_string(c.center) + " not used";
    for (int e : c.edges) {
      const Edge& ed = g.edge(e);
      if (!(ed.u == c.center || ed.v == c.center)) return "clump edge off its centre";
      if (owner[e] == Owner::B) return "clump edge is closed";
      if (!seen_edges.insert(e).second) return "clumps share an edge";
    }
  }
  std::set<Vertex> reached{v0};
  std::vector<Vertex> stack{v0};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (on_boundary(v)) return "open path from v0 to the box boundary survives";
    for (const Vertex& n : neighbors(g.kind(), v)) {
      if (!in_box(box, n) || used.count(n) || reached.count(n)) continue;
      int e = g.edge_index(v, n);
      if (e < 0 || owner[e] == Owner::B) continue;
      reached.insert(n);
      stack.push_back(n);
    }
  }
  return std::nullopt;
}

struct ProtectiveSearch {
  long leaves = 0;
  long positions = 0;
  long violations = 0;
  std::string first_violation;
};

// Every sequence of Breaker claims on ladder edges, answered by the real
// composite Maker (rules (m,1), height fixed to n, all edges unclaimed).
// Counts positions where Breaker's ladder edges disconnect the ladder.
inline ProtectiveSearch protective_search(int n, int m = 2) {
  MatchSpec spec;
  spec.window = Window{Vertex{0, 0}, n + 6};
  spec.rules = GameRules{m, 1, 0};
  spec.p = 1.0;
  spec.maker = "composite-maker";
  spec.breaker = "random";
  spec.params.ladder_min = spec.params.ladder_max = n;
  spec.params.cycle_slack = 0;
  spec.params.scan_radius = 0;
  spec.stop_when_decided = false;
  const Ladder ladder = build_ladder(Vertex{0, 0}, n);
  ProtectiveSearch out;
  std::vector<int> prefix;
  std::function<void()> go = [&] {
    Match match(spec, false, true);
    match.advance();
    for (int e : prefix) {
      if (match.over()) break;
      std::vector<int> turn{e};
      match.apply_turn(turn);
      match.advance();
    }
    ++out.positions;
    const WindowGraph& g = match.graph();
    std::set<oracle::CEdge> cut;
    std::vector<int> open;
    for (const Edge& le : ladder.edges) {
      int e = g.edge_index(le);
      if (match.owner()[e] == Owner::B) cut.insert(oracle::cedge({le.u.x(), le.u.y()}, {le.v.x(), le.v.y()}));
      if (match.owner()[e] == Owner::U) open.push_back(e);
    }
    if (oracle::ladder_disconnected(oracle::ladder_model(n), cut)) {
      if (out.violations++ == 0) {
        std::ostringstream msg;
        for (int e : prefix) msg << g.edge(e).id << " ";
        out.first_violation = msg.str();
      }
      return;
    }
    if (open.empty() || match.over() || match.to_move() != Owner::B) {
      ++out.leaves;
      return;
    }
    for (int e : open) {
      prefix.push_back(e);
      go();
      prefix.pop_back();
    }
  };
  go();
  return out;
}

}  // namespace fixtures
