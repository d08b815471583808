#include "perc/graph_search.hpp"

#include <algorithm>
#include <climits>
#include <deque>

namespace perc {

bool reaches_boundary(const WindowGraph& graph, std::span<const Owner> owner, int v0, bool maker_only) {
  std::vector<char> seen(graph.vertex_count(), 0);
  std::vector<int> stack{v0};
  seen[v0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (graph.is_boundary(v)) return true;
    for (int e : graph.incident(v)) {
      Owner o = owner[e];
      if (o == Owner::B || (maker_only && o != Owner::M)) continue;
      int u = graph.other_end(e, v);
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return false;
}

std::vector<int> cheapest_escape(const WindowGraph& graph, std::span<const Owner> owner, int v0) {
  const int n = graph.vertex_count();
  std::vector<int> dist(n, INT_MAX), via(n, -1);
  std::deque<int> dq{v0};
  dist[v0] = 0;
  int target = -1;
  while (!dq.empty()) {
    int v = dq.front();
    dq.pop_front();
    if (graph.is_boundary(v)) {
      target = v;
      break;
    }
    for (int e : graph.incident(v)) {
      if (owner[e] == Owner::B) continue;
      int w = owner[e] == Owner::M ? 0 : 1;
      int u = graph.other_end(e, v);
      if (dist[v] + w < dist[u]) {
        dist[u] = dist[v] + w;
        via[u] = e;
        if (w == 0)
          dq.push_front(u);
        else
          dq.push_back(u);
      }
    }
  }
  std::vector<int> path;
  if (target < 0) return path;
  for (int v = target; v != v0;) {
    int e = via[v];
    path.push_back(e);
    v = graph.other_end(e, v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

MinCut min_cut_to_boundary(const WindowGraph& graph, std::span<const Owner> owner, int v0) {
  MinCut cut;
  if (reaches_boundary(graph, owner, v0, true)) {
    cut.finite = false;
    return cut;
  }
  const int n = graph.vertex_count();
  const int kInf = 1 << 28;
  auto capacity = [&](int e) { return owner[e] == Owner::M ? kInf : (owner[e] == Owner::U ? 1 : 0); };
  std::vector<int> flow(graph.edge_count(), 0);  // signed, tail -> head positive
  auto residual = [&](int e, int from) {
    int c = capacity(e);
    return from == graph.tail(e) ? c - flow[e] : c + flow[e];
  };
  std::vector<int> via(n);
  std::vector<char> seen(n);
  std::deque<int> queue;
  // Edmonds-Karp with every boundary vertex joined to the sink.
  for (;;) {
    std::fill(seen.begin(), seen.end(), 0);
    queue.assign(1, v0);
    seen[v0] = 1;
    int hit = -1;
    while (!queue.empty() && hit < 0) {
      int v = queue.front();
      queue.pop_front();
      for (int e : graph.incident(v)) {
        int u = graph.other_end(e, v);
        if (seen[u] || residual(e, v) <= 0) continue;
        seen[u] = 1;
        via[u] = e;
        if (graph.is_boundary(u)) {
          hit = u;
          break;
        }
        queue.push_back(u);
      }
    }
    if (hit < 0) break;
    int push = kInf;
    for (int v = hit; v != v0;) {
      int e = via[v];
      int from = graph.other_end(e, v);
      push = std::min(push, residual(e, from));
      v = from;
    }
    for (int v = hit; v != v0;) {
      int e = via[v];
      int from = graph.other_end(e, v);
      flow[e] += from == graph.tail(e) ? push : -push;
      v = from;
    }
    cut.value += push;
  }
  // seen[] is now the residual-reachable side of v0.
  for (int e = 0; e < graph.edge_count(); ++e)
    if (owner[e] == Owner::U && seen[graph.tail(e)] != seen[graph.head(e)]) cut.edges.push_back(e);
  return cut;
}

}  // namespace perc
