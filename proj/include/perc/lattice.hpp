#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace perc {

inline constexpr int kMaxDim = 6;

using EdgeId = std::uint64_t;

struct InvalidVertex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedDuality : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Family { zd, hex, tri };

struct LatticeKind {
  Family family = Family::zd;
  int dim = 2;

  static LatticeKind z2() { return {Family::zd, 2}; }
  static LatticeKind zd(int d);
  static LatticeKind hex() { return {Family::hex, 2}; }
  static LatticeKind tri() { return {Family::tri, 2}; }

  bool is_z2() const { return family == Family::zd && dim == 2; }
  int degree() const;
  // Number of "positive" edge directions; every edge is base + one of these.
  int directions() const;

  friend bool operator==(const LatticeKind&, const LatticeKind&) = default;
};

// "z2", "zd:3", "hex", "tri".
LatticeKind parse_lattice(std::string_view text);
std::string to_string(const LatticeKind& kind);

struct Vertex {
  std::array<int, kMaxDim> c{};
  int dim = 2;

  Vertex() = default;
  Vertex(std::initializer_list<int> coords);
  static Vertex origin(int dim);

  int& operator[](int i) { return c[i]; }
  int operator[](int i) const { return c[i]; }
  int x() const { return c[0]; }
  int y() const { return c[1]; }

  // Lexicographic on coordinates (dim first, then x, y, ...).
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b);
  friend bool operator==(const Vertex& a, const Vertex& b);
};

Vertex operator+(const Vertex& a, const Vertex& b);
Vertex operator-(const Vertex& a, const Vertex& b);
std::string to_string(const Vertex& v);

struct Edge {
  Vertex u;  // base vertex
  Vertex v;  // base + direction
  int dir = 0;
  EdgeId id = 0;
  bool dual = false;  // edge of the dual lattice; u, v are face coordinates

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.id == b.id && a.dual == b.dual;
  }
};

struct Window {
  Vertex center;
  int radius = 1;
};

struct LatticeConstants {
  double kappa_upper = 0;
  std::optional<double> pc_bond;
};

std::vector<Vertex> neighbors(const LatticeKind& kind, const Vertex& v);

// Offset of positive direction `dir` at base vertex `v`, or nullopt when the
// lattice has no edge in that direction there (hex verticals).
std::optional<Vertex> direction_offset(const LatticeKind& kind, const Vertex& v, int dir);

EdgeId edge_id(const LatticeKind& kind, const Vertex& base, int dir);
Edge make_edge(const LatticeKind& kind, const Vertex& base, int dir);
// Edge joining two adjacent vertices in canonical order; throws if not adjacent.
Edge edge_between(const LatticeKind& kind, const Vertex& a, const Vertex& b);
// Inverse of edge_id.
Edge edge_from_id(const LatticeKind& kind, EdgeId id);

std::vector<Edge> edges_in_window(const LatticeKind& kind, const Window& w);
std::vector<Vertex> boundary_vertices(const LatticeKind& kind, const Window& w);
bool in_box(const Window& w, const Vertex& v);

// Z^2 duality. Face (a,b)* is the unit square with lower-left corner (a,b).
Edge dual_edge(const LatticeKind& kind, const Edge& e);

LatticeConstants constants(const LatticeKind& kind);

// Indexed realisation of a window: dense vertex and edge numbering (edges in
// id order), incidence lists and boundary flags.
class WindowGraph {
 public:
  WindowGraph(LatticeKind kind, Window w);

  const LatticeKind& kind() const { return kind_; }
  const Window& window() const { return window_; }
  int radius() const { return window_.radius; }
  int side() const { return side_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Vertex& vertex(int i) const { return vertices_[i]; }
  int vertex_index(const Vertex& v) const;  // -1 outside the window
  int center_index() const { return vertex_index(window_.center); }
  bool is_boundary(int v) const { return boundary_[v] != 0; }

  const Edge& edge(int e) const { return edges_[e]; }
  int edge_index(EdgeId id) const;  // -1 when not in the window
  int edge_index(const Edge& e) const { return e.dual ? -1 : edge_index(e.id); }
  int edge_index(const Vertex& a, const Vertex& b) const;
  int edge_at(int base_vertex, int dir) const { return edge_at_[base_vertex * dirs_ + dir]; }
  int tail(int e) const { return ends_[2 * e]; }
  int head(int e) const { return ends_[2 * e + 1]; }
  int other_end(int e, int v) const { return tail(e) == v ? head(e) : tail(e); }

  // Incident edges of vertex v, in the lattice's neighbour order.
  std::span<const int> incident(int v) const {
    return {inc_.data() + inc_off_[v], inc_.data() + inc_off_[v + 1]};
  }

 private:
  LatticeKind kind_;
  Window window_;
  int side_ = 0;
  int dirs_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<char> boundary_;
  std::vector<Edge> edges_;
  std::vector<int> ends_;
  std::vector<int> edge_at_;
  std::vector<int> inc_off_;
  std::vector<int> inc_;
};

}  // namespace perc
