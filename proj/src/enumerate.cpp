#include "perc/enumerate.hpp"

#include <algorithm>
#include <climits>
#include <deque>

namespace perc {

int default_saw_cap(const LatticeKind& kind) {
  switch (kind.family) {
    case Family::zd: return kind.dim == 2 ? 14 : (kind.dim == 3 ? 10 : 8);
    case Family::hex: return 24;
    case Family::tri: return 9;
  }
  return 8;
}

SawSet enumerate_saws(const WindowGraph& graph, const Vertex& v0, int length, int cap) {
  if (length < 0) throw ParameterError("walk length must be non-negative");
  if (cap < 0) cap = default_saw_cap(graph.kind());
  if (length > cap)
    throw CapError("walk length " + std::to_string(length) + " exceeds the enumeration cap " + std::to_string(cap));
  const Window& w = graph.window();
  for (int i = 0; i < v0.dim; ++i)
    if (std::abs(v0[i] - w.center[i]) + length > w.radius)
      throw ParameterError("window does not contain every walk of length " + std::to_string(length));

  SawSet out;
  out.origin = v0;
  out.length = length;
  const int start = graph.vertex_index(v0);
  std::vector<char> seen(graph.vertex_count(), 0);
  std::vector<int> path;
  path.reserve(length);
  seen[start] = 1;
  auto dfs = [&](auto&& self, int v) -> void {
    if (static_cast<int>(path.size()) == length) {
      out.edges.insert(out.edges.end(), path.begin(), path.end());
      ++out.count;
      return;
    }
    for (int e : graph.incident(v)) {
      int u = graph.other_end(e, v);
      if (seen[u]) continue;
      seen[u] = 1;
      path.push_back(e);
      self(self, u);
      path.pop_back();
      seen[u] = 0;
    }
  };
  dfs(dfs, start);
  return out;
}

WinningSetSystem build_path_system(const SawSet& saws, int universe) {
  if (saws.length < 1) throw ParameterError("path systems need walks of length at least 1");
  WinningSetSystem sys(universe);
  for (std::int64_t i = 0; i < saws.count; ++i) sys.add_set(saws.walk(i));
  sys.finalize();
  return sys;
}

nlohmann::json to_json(const SawSet& saws, const WindowGraph& graph) {
  nlohmann::json sets = nlohmann::json::array();
  for (std::int64_t i = 0; i < saws.count; ++i) {
    nlohmann::json one = nlohmann::json::array();
    for (int e : saws.walk(i)) one.push_back(graph.edge(e).id);
    sets.push_back(std::move(one));
  }
  std::vector<int> origin(saws.origin.c.begin(), saws.origin.c.begin() + saws.origin.dim);
  return {{"origin", origin}, {"N", saws.length}, {"max_len", nullptr}, {"sets", std::move(sets)}};
}

std::vector<Vertex> Ladder::vertices() const {
  std::vector<Vertex> out;
  for (int i = 0; i <= height; ++i)
    for (int j = 0; j <= 1; ++j) out.push_back(origin + Vertex{i, j});
  return out;
}

int Ladder::triple_of(const Edge& e) const {
  for (std::size_t i = 0; i < triples.size(); ++i)
    for (const Edge& t : triples[i])
      if (t == e) return static_cast<int>(i);
  return -1;
}

Ladder build_ladder(const Vertex& v0, int height) {
  if (height < 1) throw ParameterError("ladder height must be at least 1");
  if (v0.dim != 2) throw InvalidVertex("ladders live on z2");
  const LatticeKind z2 = LatticeKind::z2();
  Ladder l;
  l.origin = v0;
  l.height = height;
  l.first = make_edge(z2, v0, 1);
  l.edges.push_back(l.first);
  for (int i = 0; i < height; ++i) {
    Vertex v = v0 + Vertex{i, 0};
    std::array<Edge, 3> t = {make_edge(z2, v, 0), make_edge(z2, v + Vertex{1, 0}, 1),
                             make_edge(z2, v + Vertex{0, 1}, 0)};
    l.triples.push_back(t);
    l.edges.insert(l.edges.end(), t.begin(), t.end());
  }
  return l;
}

bool encloses(std::span<const Edge> cycle, const Vertex& v) {
  // A ray from v towards +x crosses the dual cycle once per horizontal primal
  // edge {(a,y),(a+1,y)} with a >= x.
  int crossings = 0;
  for (const Edge& e : cycle)
    if (e.dir == 0 && e.u.y() == v.y() && e.u.x() >= v.x()) ++crossings;
  return crossings % 2 == 1;
}

namespace {

struct FaceBox {
  int a_lo = INT_MIN / 4, a_hi = INT_MAX / 4, b_lo = INT_MIN / 4, b_hi = INT_MAX / 4;
  bool contains(int a, int b) const { return a >= a_lo && a <= a_hi && b >= b_lo && b <= b_hi; }
};

// Primal edge crossed by the dual step from face (a,b) in direction d (E,N,W,S).
Edge crossed(int a, int b, int d) {
  const LatticeKind z2 = LatticeKind::z2();
  switch (d) {
    case 0: return make_edge(z2, Vertex{a + 1, b}, 1);
    case 1: return make_edge(z2, Vertex{a, b + 1}, 0);
    case 2: return make_edge(z2, Vertex{a, b}, 1);
    default: return make_edge(z2, Vertex{a, b}, 0);
  }
}

constexpr int kDa[4] = {1, 0, -1, 0};
constexpr int kDb[4] = {0, 1, 0, -1};

class CycleSearch {
 public:
  CycleSearch(std::span<const Vertex> targets, int max_len, FaceBox box)
      : targets_(targets.begin(), targets.end()), max_len_(max_len), box_(box) {
    xmin_ = ymin_ = INT_MAX;
    xmax_ = ymax_ = INT_MIN;
    for (const Vertex& t : targets_) {
      xmin_ = std::min(xmin_, t.x());
      xmax_ = std::max(xmax_, t.x());
      ymin_ = std::min(ymin_, t.y());
      ymax_ = std::max(ymax_, t.y());
    }
    // Ray origin: rightmost target, lowest among those.
    ray_ = targets_.front();
    for (const Vertex& t : targets_)
      if (t.x() > ray_.x() || (t.x() == ray_.x() && t.y() < ray_.y())) ray_ = t;
    std::sort(targets_.begin(), targets_.end());
  }

  std::vector<std::vector<Edge>> run() {
    for (int k = 0;; ++k) {
      int a0 = ray_.x() + k, b0 = ray_.y() - 1;
      if (!box_.contains(a0, b0) || !box_.contains(a0, b0 + 1)) break;
      start_a_ = a0;
      start_b_ = b0;
      ray_k_ = k;
      Extremes ex{std::min(a0, a0), std::max(b0 + 1, b0), std::min(b0, b0 + 1)};
      if (1 + lower_bound(a0, b0 + 1, ex) > max_len_) break;
      const int span = max_len_ + 2;
      grid_off_a_ = a0 - span;
      grid_off_b_ = b0 - span;
      grid_side_ = 2 * span + 1;
      visited_.assign(static_cast<std::size_t>(grid_side_) * grid_side_, 0);
      visit(a0, b0) = 1;
      visit(a0, b0 + 1) = 1;
      path_.assign(1, crossed(a0, b0, 1));
      dfs(a0, b0 + 1, ex);
    }
    return std::move(found_);
  }

 private:
  struct Extremes {
    int min_a, max_b, min_b;
  };

  char& visit(int a, int b) {
    return visited_[static_cast<std::size_t>(b - grid_off_b_) * grid_side_ + (a - grid_off_a_)];
  }

  int lower_bound(int a, int b, const Extremes& ex) const {
    int h;
    if (ex.min_a > xmin_ - 1) {
      int left = xmin_ - 1;
      h = (a - left) + (start_a_ - left);
    } else {
      h = std::abs(a - start_a_);
    }
    int lo = std::min(b, start_b_), hi = std::max(b, start_b_);
    if (ex.min_b > ymin_ - 1) lo = std::min(lo, ymin_ - 1);
    if (ex.max_b < ymax_) hi = std::max(hi, ymax_);
    int v = (hi - lo) + std::min(std::abs(b - lo) + std::abs(start_b_ - hi), std::abs(b - hi) + std::abs(start_b_ - lo));
    return h + v;
  }

  bool forbidden(const Edge& e) const {
    // Ray edges left of the root would make this cycle a duplicate of an
    // earlier root.
    if (e.dir == 0 && e.u.y() == ray_.y() && e.u.x() >= ray_.x() && e.u.x() < ray_.x() + ray_k_) return true;
    return std::binary_search(targets_.begin(), targets_.end(), e.u) &&
           std::binary_search(targets_.begin(), targets_.end(), e.v);
  }

  void dfs(int a, int b, const Extremes& ex) {
    const int len = static_cast<int>(path_.size());
    for (int d = 0; d < 4; ++d) {
      int na = a + kDa[d], nb = b + kDb[d];
      if (na == start_a_ && nb == start_b_) {
        if (len + 1 < 4) continue;
        Edge e = crossed(a, b, d);
        if (forbidden(e)) continue;
        path_.push_back(e);
        if (all_enclosed()) found_.push_back(path_);
        path_.pop_back();
        continue;
      }
      if (len + 1 >= max_len_) continue;
      if (!box_.contains(na, nb) || visit(na, nb)) continue;
      Extremes nx{std::min(ex.min_a, na), std::max(ex.max_b, nb), std::min(ex.min_b, nb)};
      if (len + 1 + lower_bound(na, nb, nx) > max_len_) continue;
      Edge e = crossed(a, b, d);
      if (forbidden(e)) continue;
      visit(na, nb) = 1;
      path_.push_back(e);
      dfs(na, nb, nx);
      path_.pop_back();
      visit(na, nb) = 0;
    }
  }

  bool all_enclosed() const {
    for (const Vertex& t : targets_)
      if (!encloses(path_, t)) return false;
    return true;
  }

  std::vector<Vertex> targets_;
  int max_len_;
  FaceBox box_;
  int xmin_, xmax_, ymin_, ymax_;
  Vertex ray_;
  int ray_k_ = 0;
  int start_a_ = 0, start_b_ = 0;
  int grid_off_a_ = 0, grid_off_b_ = 0, grid_side_ = 0;
  std::vector<char> visited_;
  std::vector<Edge> path_;
  std::vector<std::vector<Edge>> found_;
};

CycleSet run_search(std::span<const Vertex> targets, int max_len, FaceBox box) {
  if (targets.empty()) throw ParameterError("nothing to enclose");
  if (max_len > kCycleLengthCap)
    throw CapError("cycle length " + std::to_string(max_len) + " exceeds the cap " + std::to_string(kCycleLengthCap));
  for (const Vertex& t : targets)
    if (t.dim != 2) throw InvalidVertex("enclosing cycles live on z2");
  CycleSet out;
  out.enclosed.assign(targets.begin(), targets.end());
  out.max_len = max_len;
  if (max_len >= 4) out.cycles = CycleSearch(targets, max_len, box).run();
  return out;
}

FaceBox window_faces(const WindowGraph& graph) {
  if (!graph.kind().is_z2()) throw UnsupportedDuality("dual cycles need a z2 window");
  const Vertex& c = graph.window().center;
  int r = graph.radius();
  return {c.x() - r, c.x() + r - 1, c.y() - r, c.y() + r - 1};
}

}  // namespace

CycleSet enumerate_enclosing_cycles(std::span<const Vertex> targets, int max_len, const WindowGraph& graph) {
  return run_search(targets, max_len, window_faces(graph));
}

CycleSet enumerate_enclosing_cycles(std::span<const Vertex> targets, int max_len) {
  return run_search(targets, max_len, FaceBox{});
}

CycleSet enumerate_enclosing_cycles(const Ladder& ladder, int max_len, const WindowGraph& graph) {
  auto verts = ladder.vertices();
  CycleSet out = enumerate_enclosing_cycles(verts, max_len, graph);
  out.ladder_origin = ladder.origin;
  out.ladder_height = ladder.height;
  return out;
}

WinningSetSystem build_cycle_system(const CycleSet& cycles, const WindowGraph& graph, bool drop_outside) {
  WinningSetSystem sys(graph.edge_count());
  std::vector<int> members;
  for (const auto& cycle : cycles.cycles) {
    members.clear();
    bool inside = true;
    for (const Edge& e : cycle) {
      int idx = graph.edge_index(e);
      if (idx < 0) {
        inside = false;
        break;
      }
      members.push_back(idx);
    }
    if (!inside) {
      if (drop_outside) continue;
      throw ParameterError("cycle leaves the window");
    }
    sys.add_set(members);
  }
  sys.finalize();
  return sys;
}

nlohmann::json to_json(const CycleSet& cycles, const WindowGraph& graph) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& cycle : cycles.cycles) {
    nlohmann::json one = nlohmann::json::array();
    for (const Edge& e : cycle) one.push_back(e.id);
    sets.push_back(std::move(one));
  }
  Vertex o = cycles.ladder_origin.value_or(cycles.enclosed.front());
  (void)graph;
  return {{"origin", {o.x(), o.y()}}, {"N", cycles.ladder_height}, {"max_len", cycles.max_len}, {"sets", std::move(sets)}};
}

bool min_separating_check(const WindowGraph& graph, std::span<const Edge> cycle, const Vertex& v0) {
  std::vector<char> cut(graph.edge_count(), 0);
  for (const Edge& e : cycle) {
    int idx = graph.edge_index(e);
    if (idx >= 0) cut[idx] = 1;
  }
  int start = graph.vertex_index(v0);
  if (start < 0) throw InvalidVertex("origin outside the window");
  std::vector<char> seen(graph.vertex_count(), 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (graph.is_boundary(v)) return false;
    for (int e : graph.incident(v)) {
      if (cut[e]) continue;
      int u = graph.other_end(e, v);
      if (!seen[u]) {
        seen[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return true;
}

}  // namespace perc
