#include "perc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace perc {

namespace {

std::uint64_t zigzag(int z) {
  return z >= 0 ? 2 * static_cast<std::uint64_t>(z) : 2 * static_cast<std::uint64_t>(-(z + 1)) + 1;
}

int unzigzag(std::uint64_t u) {
  return (u & 1) ? -static_cast<int>(u >> 1) - 1 : static_cast<int>(u >> 1);
}

int bits_per_coord(int dim) { return 60 / dim; }

void check_vertex(const LatticeKind& kind, const Vertex& v) {
  int want = kind.family == Family::zd ? kind.dim : 2;
  if (v.dim != want)
    throw InvalidVertex("vertex " + to_string(v) + " has arity " + std::to_string(v.dim) +
                        ", lattice " + to_string(kind) + " needs " + std::to_string(want));
}

Vertex unit(int dim, int axis, int sign) {
  Vertex o = Vertex::origin(dim);
  o[axis] = sign;
  return o;
}

bool hex_has_north(const Vertex& v) { return ((v.x() + v.y()) & 1) == 0; }

}  // namespace

LatticeKind LatticeKind::zd(int d) {
  if (d < 2 || d > kMaxDim)
    throw std::invalid_argument("Zd needs 2 <= d <= " + std::to_string(kMaxDim));
  return {Family::zd, d};
}

int LatticeKind::degree() const {
  switch (family) {
    case Family::zd: return 2 * dim;
    case Family::hex: return 3;
    case Family::tri: return 6;
  }
  return 0;
}

int LatticeKind::directions() const {
  switch (family) {
    case Family::zd: return dim;
    case Family::hex: return 2;
    case Family::tri: return 3;
  }
  return 0;
}

LatticeKind parse_lattice(std::string_view text) {
  if (text == "z2") return LatticeKind::z2();
  if (text == "hex") return LatticeKind::hex();
  if (text == "tri") return LatticeKind::tri();
  if (text.rfind("zd:", 0) == 0) {
    std::string rest(text.substr(3));
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && used > 0) return LatticeKind::zd(d);
  }
  throw std::invalid_argument("unknown lattice '" + std::string(text) + "'");
}

std::string to_string(const LatticeKind& kind) {
  switch (kind.family) {
    case Family::zd: return kind.dim == 2 ? "z2" : "zd:" + std::to_string(kind.dim);
    case Family::hex: return "hex";
    case Family::tri: return "tri";
  }
  return "?";
}

Vertex::Vertex(std::initializer_list<int> coords) {
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw InvalidVertex("vertex arity out of range");
  dim = static_cast<int>(coords.size());
  std::copy(coords.begin(), coords.end(), c.begin());
}

Vertex Vertex::origin(int dim) {
  Vertex v;
  v.dim = dim;
  return v;
}

std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
  if (auto o = a.dim <=> b.dim; o != 0) return o;
  for (int i = 0; i < a.dim; ++i)
    if (auto o = a.c[i] <=> b.c[i]; o != 0) return o;
  return std::strong_ordering::equal;
}

bool operator==(const Vertex& a, const Vertex& b) { return (a <=> b) == 0; }

Vertex operator+(const Vertex& a, const Vertex& b) {
  Vertex r = a;
  for (int i = 0; i < a.dim; ++i) r.c[i] += b.c[i];
  return r;
}

Vertex operator-(const Vertex& a, const Vertex& b) {
  Vertex r = a;
  for (int i = 0; i < a.dim; ++i) r.c[i] -= b.c[i];
  return r;
}

std::string to_string(const Vertex& v) {
  std::string s = "(";
  for (int i = 0; i < v.dim; ++i) {
    if (i) s += ",";
    s += std::to_string(v.c[i]);
  }
  return s + ")";
}

std::vector<Vertex> neighbors(const LatticeKind& kind, const Vertex& v) {
  check_vertex(kind, v);
  std::vector<Vertex> out;
  out.reserve(kind.degree());
  switch (kind.family) {
    case Family::zd:
      // E, N, W, S, then +e_k, -e_k for the higher axes.
      out.push_back(v + unit(kind.dim, 0, 1));
      out.push_back(v + unit(kind.dim, 1, 1));
      out.push_back(v + unit(kind.dim, 0, -1));
      out.push_back(v + unit(kind.dim, 1, -1));
      for (int k = 2; k < kind.dim; ++k) {
        out.push_back(v + unit(kind.dim, k, 1));
        out.push_back(v + unit(kind.dim, k, -1));
      }
      break;
    case Family::hex:
      out.push_back(v + Vertex{1, 0});
      if (hex_has_north(v)) out.push_back(v + Vertex{0, 1});
      out.push_back(v + Vertex{-1, 0});
      if (!hex_has_north(v)) out.push_back(v + Vertex{0, -1});
      break;
    case Family::tri:
      out.push_back(v + Vertex{1, 0});
      out.push_back(v + Vertex{0, 1});
      out.push_back(v + Vertex{-1, 0});
      out.push_back(v + Vertex{0, -1});
      out.push_back(v + Vertex{1, 1});
      out.push_back(v + Vertex{-1, -1});
      break;
  }
  return out;
}

std::optional<Vertex> direction_offset(const LatticeKind& kind, const Vertex& v, int dir) {
  switch (kind.family) {
    case Family::zd:
      return unit(kind.dim, dir, 1);
    case Family::hex:
      if (dir == 0) return Vertex{1, 0};
      if (hex_has_north(v)) return Vertex{0, 1};
      return std::nullopt;
    case Family::tri:
      if (dir == 0) return Vertex{1, 0};
      if (dir == 1) return Vertex{0, 1};
      return Vertex{1, 1};
  }
  return std::nullopt;
}

EdgeId edge_id(const LatticeKind& kind, const Vertex& base, int dir) {
  int dim = base.dim;
  int bits = bits_per_coord(dim);
  std::uint64_t morton = 0;
  for (int i = 0; i < dim; ++i) {
    std::uint64_t z = zigzag(base[i]);
    if (z >> bits) throw InvalidVertex("vertex " + to_string(base) + " outside the id range");
    for (int b = 0; b < bits; ++b)
      morton |= ((z >> b) & 1ULL) << (b * dim + i);
  }
  return morton * static_cast<EdgeId>(kind.directions()) + static_cast<EdgeId>(dir);
}

Edge make_edge(const LatticeKind& kind, const Vertex& base, int dir) {
  check_vertex(kind, base);
  auto off = direction_offset(kind, base, dir);
  if (!off) throw InvalidVertex("no edge in direction " + std::to_string(dir) + " at " + to_string(base));
  Edge e;
  e.u = base;
  e.v = base + *off;
  e.dir = dir;
  e.id = edge_id(kind, base, dir);
  return e;
}

Edge edge_between(const LatticeKind& kind, const Vertex& a, const Vertex& b) {
  check_vertex(kind, a);
  check_vertex(kind, b);
  for (int dir = 0; dir < kind.directions(); ++dir) {
    if (auto off = direction_offset(kind, a, dir); off && a + *off == b) return make_edge(kind, a, dir);
    if (auto off = direction_offset(kind, b, dir); off && b + *off == a) return make_edge(kind, b, dir);
  }
  throw InvalidVertex(to_string(a) + " and " + to_string(b) + " are not adjacent");
}

Edge edge_from_id(const LatticeKind& kind, EdgeId id) {
  int dirs = kind.directions();
  int dir = static_cast<int>(id % static_cast<EdgeId>(dirs));
  std::uint64_t morton = id / static_cast<EdgeId>(dirs);
  int dim = kind.family == Family::zd ? kind.dim : 2;
  int bits = bits_per_coord(dim);
  Vertex base = Vertex::origin(dim);
  for (int i = 0; i < dim; ++i) {
    std::uint64_t z = 0;
    for (int b = 0; b < bits; ++b) z |= ((morton >> (b * dim + i)) & 1ULL) << b;
    base[i] = unzigzag(z);
  }
  return make_edge(kind, base, dir);
}

bool in_box(const Window& w, const Vertex& v) {
  if (v.dim != w.center.dim) return false;
  for (int i = 0; i < v.dim; ++i)
    if (std::abs(v[i] - w.center[i]) > w.radius) return false;
  return true;
}

std::vector<Edge> edges_in_window(const LatticeKind& kind, const Window& w) {
  if (w.radius < 0) return {};
  WindowGraph g(kind, w);
  std::vector<Edge> out;
  out.reserve(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) out.push_back(g.edge(e));
  return out;
}

std::vector<Vertex> boundary_vertices(const LatticeKind& kind, const Window& w) {
  WindowGraph g(kind, w);
  std::vector<Vertex> out;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.is_boundary(v)) out.push_back(g.vertex(v));
  std::sort(out.begin(), out.end());
  return out;
}

Edge dual_edge(const LatticeKind& kind, const Edge& e) {
  if (!kind.is_z2()) throw UnsupportedDuality("duality is only defined for z2, not " + to_string(kind));
  const LatticeKind z2 = LatticeKind::z2();
  Edge d;
  if (!e.dual) {
    int x = e.u.x(), y = e.u.y();
    // Horizontal {(x,y),(x+1,y)} separates faces (x,y-1)* and (x,y)*;
    // vertical {(x,y),(x,y+1)} separates faces (x-1,y)* and (x,y)*.
    d = e.dir == 0 ? make_edge(z2, Vertex{x, y - 1}, 1) : make_edge(z2, Vertex{x - 1, y}, 0);
    d.dual = true;
  } else {
    int a = e.u.x(), b = e.u.y();
    d = e.dir == 1 ? make_edge(z2, Vertex{a, b + 1}, 0) : make_edge(z2, Vertex{a + 1, b}, 1);
  }
  return d;
}

LatticeConstants constants(const LatticeKind& kind) {
  const double pi = std::numbers::pi;
  switch (kind.family) {
    case Family::zd:
      if (kind.dim == 2) return {2.6792, 0.5};
      if (kind.dim == 3) return {4.7387, std::nullopt};
      // Trivial bound 2d-1 for higher dimensions.
      return {2.0 * kind.dim - 1.0, std::nullopt};
    case Family::hex:
      return {std::sqrt(2.0 + std::sqrt(2.0)), 1.0 - 2.0 * std::sin(pi / 18.0)};
    case Family::tri:
      return {4.278, 2.0 * std::sin(pi / 18.0)};
  }
  return {};
}

WindowGraph::WindowGraph(LatticeKind kind, Window w) : kind_(kind), window_(w) {
  check_vertex(kind, w.center);
  if (w.radius < 0) throw std::invalid_argument("window radius must be >= 0");
  const int dim = w.center.dim;
  side_ = 2 * w.radius + 1;
  dirs_ = kind.directions();
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) count *= static_cast<std::size_t>(side_);
  vertices_.resize(count);
  boundary_.assign(count, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Vertex v = w.center;
    std::size_t rest = idx;
    for (int i = 0; i < dim; ++i) {
      v[i] = w.center[i] - w.radius + static_cast<int>(rest % side_);
      rest /= side_;
    }
    vertices_[idx] = v;
  }

  std::vector<std::pair<EdgeId, std::pair<int, int>>> found;  // id -> (base, dir)
  for (std::size_t idx = 0; idx < count; ++idx) {
    const Vertex& v = vertices_[idx];
    for (const Vertex& n : neighbors(kind, v))
      if (!in_box(w, n)) boundary_[idx] = 1;
    for (int dir = 0; dir < dirs_; ++dir) {
      auto off = direction_offset(kind, v, dir);
      if (off && in_box(w, v + *off)) found.push_back({edge_id(kind, v, dir), {static_cast<int>(idx), dir}});
    }
  }
  std::sort(found.begin(), found.end());
  edges_.reserve(found.size());
  ends_.reserve(2 * found.size());
  edge_at_.assign(count * dirs_, -1);
  for (std::size_t e = 0; e < found.size(); ++e) {
    auto [base, dir] = found[e].second;
    Edge edge = make_edge(kind, vertices_[base], dir);
    edge_at_[base * dirs_ + dir] = static_cast<int>(e);
    ends_.push_back(base);
    ends_.push_back(vertex_index(edge.v));
    edges_.push_back(edge);
  }

  inc_off_.assign(count + 1, 0);
  std::vector<std::vector<int>> inc(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    for (const Vertex& n : neighbors(kind, vertices_[idx])) {
      int ni = vertex_index(n);
      if (ni < 0) continue;
      inc[idx].push_back(edge_index(vertices_[idx], n));
    }
  }
  for (std::size_t idx = 0; idx < count; ++idx) {
    inc_off_[idx + 1] = inc_off_[idx] + static_cast<int>(inc[idx].size());
    inc_.insert(inc_.end(), inc[idx].begin(), inc[idx].end());
  }
}

int WindowGraph::vertex_index(const Vertex& v) const {
  if (v.dim != window_.center.dim) return -1;
  int idx = 0, mul = 1;
  for (int i = 0; i < v.dim; ++i) {
    int off = v[i] - window_.center[i] + window_.radius;
    if (off < 0 || off >= side_) return -1;
    idx += off * mul;
    mul *= side_;
  }
  return idx;
}

int WindowGraph::edge_index(EdgeId id) const {
  int dir = static_cast<int>(id % static_cast<EdgeId>(dirs_));
  std::uint64_t morton = id / static_cast<EdgeId>(dirs_);
  int dim = window_.center.dim;
  int bits = bits_per_coord(dim);
  Vertex base = Vertex::origin(dim);
  for (int i = 0; i < dim; ++i) {
    std::uint64_t z = 0;
    for (int b = 0; b < bits; ++b) z |= ((morton >> (b * dim + i)) & 1ULL) << b;
    base[i] = unzigzag(z);
  }
  int v = vertex_index(base);
  if (v < 0) return -1;
  return edge_at_[v * dirs_ + dir];
}

int WindowGraph::edge_index(const Vertex& a, const Vertex& b) const {
  int ia = vertex_index(a), ib = vertex_index(b);
  if (ia < 0 || ib < 0) return -1;
  for (int dir = 0; dir < dirs_; ++dir) {
    if (auto off = direction_offset(kind_, a, dir); off && a + *off == b) return edge_at_[ia * dirs_ + dir];
    if (auto off = direction_offset(kind_, b, dir); off && b + *off == a) return edge_at_[ib * dirs_ + dir];
  }
  return -1;
}

}  // namespace perc
