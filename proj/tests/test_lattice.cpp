#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "perc/lattice.hpp"

using namespace perc;

namespace {

const LatticeKind kAll[] = {LatticeKind::z2(), LatticeKind::zd(3), LatticeKind::hex(), LatticeKind::tri()};

bool contains(const std::vector<Vertex>& vs, const Vertex& v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

// Brute-force edge count: unordered adjacent pairs inside the box.
int brute_edge_count(const LatticeKind& kind, const Window& w) {
  std::set<std::pair<Vertex, Vertex>> pairs;
  WindowGraph g(kind, w);
  for (int i = 0; i < g.vertex_count(); ++i)
    for (const Vertex& n : neighbors(kind, g.vertex(i)))
      if (in_box(w, n)) pairs.insert(std::minmax(g.vertex(i), n));
  return static_cast<int>(pairs.size());
}

}  // namespace

TEST_CASE("neighbors") {
  auto n = neighbors(LatticeKind::z2(), Vertex{0, 0});
  CHECK(n.size() == 4);
  for (Vertex v : {Vertex{1, 0}, Vertex{-1, 0}, Vertex{0, 1}, Vertex{0, -1}}) CHECK(contains(n, v));

  auto t = neighbors(LatticeKind::tri(), Vertex{0, 0});
  CHECK(t.size() == 6);
  CHECK(contains(t, Vertex{1, 1}));
  CHECK(contains(t, Vertex{-1, -1}));

  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) CHECK(neighbors(LatticeKind::hex(), Vertex{x, y}).size() == 3);

  CHECK_THROWS_AS(neighbors(LatticeKind::zd(3), Vertex{0, 0}), InvalidVertex);
}

TEST_CASE("parse and print lattice kinds") {
  CHECK(parse_lattice("z2") == LatticeKind::z2());
  CHECK(parse_lattice("zd:2") == LatticeKind::z2());
  CHECK(parse_lattice("zd:4") == LatticeKind::zd(4));
  CHECK(parse_lattice("hex") == LatticeKind::hex());
  CHECK(parse_lattice("tri") == LatticeKind::tri());
  CHECK_THROWS(parse_lattice("zd:1"));
  CHECK_THROWS(parse_lattice("square"));
  for (const auto& k : kAll) CHECK(parse_lattice(to_string(k)) == k);
}

TEST_CASE("edges in window") {
  Window w1{Vertex{0, 0}, 1};
  CHECK(edges_in_window(LatticeKind::z2(), w1).size() == 12);
  CHECK(brute_edge_count(LatticeKind::z2(), w1) == 12);

  Window w3{Vertex{0, 0, 0}, 1};
  CHECK(edges_in_window(LatticeKind::zd(3), w3).size() == 54);
  CHECK(brute_edge_count(LatticeKind::zd(3), w3) == 54);

  CHECK(edges_in_window(LatticeKind::z2(), Window{Vertex{0, 0}, 0}).empty());

  for (const auto& k : kAll) {
    Window w{Vertex::origin(k.dim), 3};
    auto es = edges_in_window(k, w);
    CHECK(static_cast<int>(es.size()) == brute_edge_count(k, w));
    for (std::size_t i = 1; i < es.size(); ++i) CHECK(es[i - 1].id < es[i].id);
    for (const auto& e : es) {
      CHECK(contains(neighbors(k, e.u), e.v));
      CHECK(edge_from_id(k, e.id) == e);
    }
  }
}

TEST_CASE("boundary vertices") {
  auto b1 = boundary_vertices(LatticeKind::z2(), Window{Vertex{0, 0}, 1});
  CHECK(b1.size() == 8);
  CHECK_FALSE(contains(b1, Vertex{0, 0}));

  Window w2{Vertex{0, 0}, 2};
  auto b2 = boundary_vertices(LatticeKind::z2(), w2);
  int brute = 0;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y) {
      bool out = false;
      for (const Vertex& n : neighbors(LatticeKind::z2(), Vertex{x, y})) out |= !in_box(w2, n);
      brute += out;
    }
  CHECK(brute == 16);
  CHECK(b2.size() == 16);

  CHECK(boundary_vertices(LatticeKind::zd(3), Window{Vertex{0, 0, 0}, 1}).size() == 26);
}

TEST_CASE("Z2 duality") {
  const auto z2 = LatticeKind::z2();
  Edge h = edge_between(z2, Vertex{0, 0}, Vertex{1, 0});
  Edge d = dual_edge(z2, h);
  CHECK(d.dual);
  CHECK(std::set<Vertex>{d.u, d.v} == std::set<Vertex>{Vertex{0, 0}, Vertex{0, -1}});

  for (const Edge& e : edges_in_window(z2, Window{Vertex{0, 0}, 3})) {
    Edge de = dual_edge(z2, e);
    CHECK_FALSE(de == e);
    CHECK(dual_edge(z2, de) == e);
  }
  CHECK_THROWS_AS(dual_edge(LatticeKind::zd(3), make_edge(LatticeKind::zd(3), Vertex{0, 0, 0}, 0)),
                  UnsupportedDuality);
}

TEST_CASE("published constants") {
  auto z2 = constants(LatticeKind::z2());
  CHECK(z2.kappa_upper == doctest::Approx(2.6792));
  CHECK(*z2.pc_bond == doctest::Approx(0.5));
  auto hex = constants(LatticeKind::hex());
  CHECK(hex.kappa_upper == doctest::Approx(1.8477590650).epsilon(1e-10));
  CHECK(*hex.pc_bond == doctest::Approx(1 - 2 * std::sin(M_PI / 18)));
  auto tri = constants(LatticeKind::tri());
  CHECK(tri.kappa_upper == doctest::Approx(4.278));
  CHECK(*tri.pc_bond == doctest::Approx(2 * std::sin(M_PI / 18)));
  CHECK(constants(LatticeKind::zd(3)).kappa_upper == doctest::Approx(4.7387));

  for (const auto& k : kAll) {
    auto c = constants(k);
    CHECK(c.kappa_upper > 1);
    CHECK(c.kappa_upper < k.degree());
    if (c.pc_bond) {
      CHECK(*c.pc_bond > 0);
      CHECK(*c.pc_bond < 1);
    }
  }
}

TEST_CASE("adjacency symmetry, degree law and id stability") {
  for (const auto& k : kAll) {
    CAPTURE(to_string(k));
    Window w4{Vertex::origin(k.dim), k.dim == 3 ? 2 : 4};
    Window w8{Vertex::origin(k.dim), k.dim == 3 ? 4 : 8};
    WindowGraph g4(k, w4), g8(k, w8);
    for (int i = 0; i < g4.vertex_count(); ++i) {
      const Vertex& v = g4.vertex(i);
      for (const Vertex& n : neighbors(k, v)) CHECK(contains(neighbors(k, n), v));
      if (!g4.is_boundary(i)) CHECK(static_cast<int>(g4.incident(i).size()) == k.degree());
    }
    CHECK(k.degree() == (k.family == Family::zd ? 2 * k.dim : k.family == Family::hex ? 3 : 6));
    for (int e = 0; e < g4.edge_count(); ++e) {
      const Edge& ed = g4.edge(e);
      int e8 = g8.edge_index(ed.u, ed.v);
      REQUIRE(e8 >= 0);
      CHECK(g8.edge(e8).id == ed.id);
    }
  }
}

TEST_CASE("window graph indexing") {
  WindowGraph g(LatticeKind::z2(), Window{Vertex{5, -3}, 3});
  CHECK(g.vertex_count() == 49);
  CHECK(g.vertex(g.center_index()) == Vertex{5, -3});
  CHECK(g.vertex_index(Vertex{9, 0}) == -1);
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(g.edge_index(g.edge(e).id) == e);
    CHECK(g.vertex(g.tail(e)) == g.edge(e).u);
    CHECK(g.vertex(g.head(e)) == g.edge(e).v);
  }
}
