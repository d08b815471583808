#include <algorithm>
#include <numeric>
#include <set>

#include "perc/strategies.hpp"

namespace perc {

std::vector<char> bootstrap_closure(const WindowGraph& graph, std::span<const char> infected, int r,
                                    std::span<const char> region) {
  if (r < 0) throw ParameterError("bootstrap threshold must be non-negative");
  const int n = graph.vertex_count();
  if (static_cast<int>(infected.size()) != n) throw ParameterError("infection flags do not match the window");
  if (!region.empty() && static_cast<int>(region.size()) != n)
    throw ParameterError("region flags do not match the window");
  auto inside = [&](int v) { return region.empty() || region[v]; };
  std::vector<char> in(n, 0);
  for (int v = 0; v < n; ++v) in[v] = inside(v) && (r == 0 || infected[v]);
  if (r == 0) return in;
  std::vector<int> count(n, 0), queue;
  for (int v = 0; v < n; ++v)
    if (in[v]) queue.push_back(v);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int e : graph.incident(v)) {
      int u = graph.other_end(e, v);
      if (!in[u] && inside(u) && ++count[u] >= r) {
        in[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return in;
}

std::vector<Vertex> bootstrap_closure(const LatticeKind& kind, const Window& w, std::span<const Vertex> infected, int r) {
  WindowGraph g(kind, w);
  std::vector<char> flags(g.vertex_count(), 0);
  for (const Vertex& v : infected) {
    int i = g.vertex_index(v);
    if (i < 0) throw InvalidVertex("infected vertex " + to_string(v) + " outside the window");
    flags[i] = 1;
  }
  auto closed = bootstrap_closure(g, flags, r);
  std::vector<Vertex> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (closed[v]) out.push_back(g.vertex(v));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ClumpRun build_clumps(const WindowGraph& graph, std::span<const Owner> owner, const Vertex& v0, int m) {
  const LatticeKind& kind = graph.kind();
  if (kind.family != Family::zd) throw ParameterError("clumps are defined on Zd lattices");
  if (m < 2) throw ParameterError("confinement radius must be at least 2");
  const int d = kind.dim;
  const Window& w = graph.window();
  for (int i = 0; i < d; ++i)
    if (std::abs(v0[i] - w.center[i]) + m > w.radius) throw ParameterError("box B_m(v0) leaves the window");

  const int side = 2 * m + 1;
  int count = 1;
  for (int i = 0; i < d; ++i) count *= side;
  // Local box numbering: x fastest. Lexicographic rank: x most significant.
  std::vector<int> global(count), lex(count);
  std::vector<char> boundary(count, 0);
  std::vector<int> lex_to_local(count);
  for (int loc = 0; loc < count; ++loc) {
    Vertex v = v0;
    int rest = loc, key = 0;
    bool bd = false;
    std::array<int, kMaxDim> off{};
    for (int i = 0; i < d; ++i) {
      off[i] = rest % side - m;
      rest /= side;
      v[i] += off[i];
      if (std::abs(off[i]) == m) bd = true;
    }
    for (int i = 0; i < d; ++i) key = key * side + (off[i] + m);
    global[loc] = graph.vertex_index(v);
    lex[loc] = key;
    lex_to_local[key] = loc;
    boundary[loc] = bd;
  }
  auto local_of = [&](int gv) {
    const Vertex& v = graph.vertex(gv);
    int loc = 0, mul = 1;
    for (int i = 0; i < d; ++i) {
      int off = v[i] - v0[i];
      if (off < -m || off > m) return -1;
      loc += (off + m) * mul;
      mul *= side;
    }
    return loc;
  };
  const int center = local_of(graph.vertex_index(v0));
  auto internal = [&](int loc) { return !boundary[loc] && loc != center; };

  std::vector<char> deleted(count, 0);
  std::vector<int> deg(count, 0);
  auto open_neighbours = [&](int loc, auto&& fn) {
    int gv = global[loc];
    for (int e : graph.incident(gv)) {
      if (owner[e] == Owner::B) continue;
      int nl = local_of(graph.other_end(e, gv));
      if (nl >= 0 && !deleted[nl]) fn(e, nl);
    }
  };
  std::set<std::pair<int, int>> queue;  // (degree, lexicographic rank)
  for (int loc = 0; loc < count; ++loc) {
    if (!internal(loc)) continue;
    open_neighbours(loc, [&](int, int) { ++deg[loc]; });
    queue.insert({deg[loc], lex[loc]});
  }

  struct Deletion {
    int loc;
    int degree;
    std::vector<int> edges;
  };
  std::vector<Deletion> order;
  ClumpRun run;
  while (!queue.empty()) {
    auto [dg, key] = *queue.begin();
    if (dg >= d + 1) {
      run.stopped_on_degree = true;
      break;
    }
    queue.erase(queue.begin());
    int u = lex_to_local[key];
    Deletion del{u, dg, {}};
    if (dg >= 2) open_neighbours(u, [&](int e, int) { del.edges.push_back(e); });
    deleted[u] = 1;
    open_neighbours(u, [&](int, int nl) {
      if (!internal(nl)) return;
      queue.erase({deg[nl], lex[nl]});
      --deg[nl];
      queue.insert({deg[nl], lex[nl]});
    });
    order.push_back(std::move(del));
  }

  // Replay deletions backwards with union-find to find the first prefix after
  // which v0 no longer reaches the box boundary.
  const int sink = count;
  UnionFind uf(count + 1);
  auto join = [&](int loc) {
    if (boundary[loc]) uf.unite(loc, sink);
    open_neighbours(loc, [&](int, int nl) { uf.unite(loc, nl); });
  };
  for (int loc = 0; loc < count; ++loc)
    if (!deleted[loc]) join(loc);
  std::size_t cutoff = order.size();
  if (uf.find(center) == uf.find(sink)) {
    run.path_remains = true;
  } else {
    run.path_remains = false;
    cutoff = 0;
    for (std::size_t i = order.size(); i-- > 0;) {
      deleted[order[i].loc] = 0;
      join(order[i].loc);
      if (uf.find(center) == uf.find(sink)) {
        cutoff = i + 1;
        break;
      }
    }
    run.stopped_on_degree = false;
  }
  run.iterations = static_cast<int>(cutoff);
  for (std::size_t i = 0; i < cutoff; ++i) {
    const Vertex& u = graph.vertex(global[order[i].loc]);
    run.family.used.push_back(u);
    if (order[i].degree >= 2 && order[i].degree <= d) {
      Clump c{u, order[i].edges};
      std::sort(c.edges.begin(), c.edges.end());
      run.family.clumps.push_back(std::move(c));
    }
  }
  return run;
}

ConfinementResult confinement_radius(const WindowGraph& graph, std::span<const Owner> owner, const Vertex& v0,
                                     int r_max) {
  if (r_max < 2) throw ParameterError("R_max must be at least 2");
  ConfinementResult res;
  res.origin = v0;
  res.r_max = r_max;
  int room = graph.radius();
  for (int i = 0; i < v0.dim; ++i) room = std::min(room, graph.radius() - std::abs(v0[i] - graph.window().center[i]));
  for (int m = 2; m <= std::min(r_max, room); ++m) {
    ClumpRun run = build_clumps(graph, owner, v0, m);
    if (!run.path_remains) {
      res.radius = m;
      res.family = std::move(run.family);
      break;
    }
  }
  return res;
}

nlohmann::json to_json(const ClumpFamily& family, const WindowGraph& graph) {
  auto coords = [](const Vertex& v) { return std::vector<int>(v.c.begin(), v.c.begin() + v.dim); };
  nlohmann::json used = nlohmann::json::array(), clumps = nlohmann::json::array();
  for (const Vertex& v : family.used) used.push_back(coords(v));
  for (const Clump& c : family.clumps) {
    nlohmann::json ids = nlohmann::json::array();
    for (int e : c.edges) ids.push_back(graph.edge(e).id);
    clumps.push_back({{"center", coords(c.center)}, {"edges", ids}});
  }
  return {{"used", used}, {"clumps", clumps}};
}

}  // namespace perc
