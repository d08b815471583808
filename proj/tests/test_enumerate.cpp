#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "perc/enumerate.hpp"

using namespace perc;

namespace {

const LatticeKind kZ2 = LatticeKind::z2();

oracle::CEdge as_cedge(const Edge& e) { return oracle::cedge({e.u.x(), e.u.y()}, {e.v.x(), e.v.y()}); }

std::vector<oracle::CEdge> as_cedges(std::span<const Edge> es) {
  std::vector<oracle::CEdge> out;
  for (const Edge& e : es) out.push_back(as_cedge(e));
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t count(const LatticeKind& kind, int n) {
  WindowGraph g(kind, Window{Vertex::origin(kind.dim), std::max(n, 1)});
  return enumerate_saws(g, Vertex::origin(kind.dim), n, n).count;
}

}  // namespace

TEST_CASE("walk counts on Z2 agree with the brute-force enumerator") {
  // Frozen from oracle::count_saws_z2.
  const std::int64_t expected[] = {1, 4, 12, 36, 100, 284, 780, 2172, 5916};
  for (int n = 0; n <= 8; ++n) {
    CHECK(oracle::count_saws_z2(n) == expected[n]);
    CHECK(count(kZ2, n) == expected[n]);
  }
  CHECK(count(kZ2, 3) <= count(kZ2, 1) * count(kZ2, 2));
}

TEST_CASE("walk edge sets agree with the brute-force enumerator") {
  for (int n = 1; n <= 6; ++n) {
    WindowGraph g(kZ2, Window{Vertex{0, 0}, n});
    SawSet saws = enumerate_saws(g, Vertex{0, 0}, n);
    std::multiset<std::vector<oracle::CEdge>> mine;
    for (std::int64_t i = 0; i < saws.count; ++i) {
      std::vector<Edge> es;
      for (int e : saws.walk(i)) es.push_back(g.edge(e));
      mine.insert(as_cedges(es));
    }
    auto brute = oracle::saw_edge_sets_z2(n);
    CHECK(mine == std::multiset<std::vector<oracle::CEdge>>(brute.begin(), brute.end()));
  }
}

TEST_CASE("walk structure") {
  for (const auto& kind : {kZ2, LatticeKind::zd(3), LatticeKind::hex(), LatticeKind::tri()}) {
    CAPTURE(to_string(kind));
    CHECK(count(kind, 1) == kind.degree());
    const Vertex o = Vertex::origin(kind.dim);
    WindowGraph g(kind, Window{o, 4});
    SawSet saws = enumerate_saws(g, o, 4);
    for (std::int64_t i = 0; i < saws.count; ++i) {
      std::set<int> verts{g.vertex_index(o)};
      int at = g.vertex_index(o);
      for (int e : saws.walk(i)) {
        REQUIRE((g.tail(e) == at || g.head(e) == at));
        at = g.other_end(e, at);
        verts.insert(at);
      }
      CHECK(verts.size() == 5);
    }
  }
}

TEST_CASE("walk counts are submultiplicative") {
  struct Case {
    LatticeKind kind;
    int max_total;
  };
  for (const Case& c : {Case{kZ2, 12}, Case{LatticeKind::hex(), 12}, Case{LatticeKind::tri(), 8},
                        Case{LatticeKind::zd(3), 8}}) {
    std::vector<std::int64_t> cn{1};
    for (int n = 1; n <= c.max_total; ++n) cn.push_back(count(c.kind, n));
    for (int n = 1; n <= 6; ++n)
      for (int m = 1; m <= 6 && n + m <= c.max_total; ++m) CHECK(cn[n + m] <= cn[n] * cn[m]);
  }
  CHECK(std::pow(static_cast<double>(count(kZ2, 10)), 0.1) <= constants(kZ2).kappa_upper + 0.35);
}

TEST_CASE("walk enumeration errors") {
  WindowGraph g(kZ2, Window{Vertex{0, 0}, 20});
  CHECK_THROWS_AS(enumerate_saws(g, Vertex{0, 0}, 15), CapError);
  WindowGraph small(kZ2, Window{Vertex{0, 0}, 2});
  CHECK_THROWS_AS(enumerate_saws(small, Vertex{0, 0}, 3), ParameterError);
}

TEST_CASE("path systems") {
  WindowGraph g(kZ2, Window{Vertex{0, 0}, 4});
  auto s1 = build_path_system(enumerate_saws(g, Vertex{0, 0}, 1), g.edge_count());
  CHECK(s1.set_count() == 4);
  CHECK(s1.max_set_size() == 1);
  auto s2 = build_path_system(enumerate_saws(g, Vertex{0, 0}, 2), g.edge_count());
  CHECK(s2.set_count() == 12);
  for (int i = 0; i < 12; ++i) CHECK(s2.set(i).size() == 2);
  std::vector<Owner> allu(g.edge_count(), Owner::U);
  for (int n = 1; n <= 4; ++n) {
    auto s = build_path_system(enumerate_saws(g, Vertex{0, 0}, n), g.edge_count());
    CHECK(total_danger(allu, s, 0.4) == doctest::Approx(oracle::count_saws_z2(n) * std::pow(0.4, n)).epsilon(1e-13));
  }
  auto j = to_json(enumerate_saws(g, Vertex{0, 0}, 2), g);
  CHECK(j["N"] == 2);
  CHECK(j["sets"].size() == 12);
}

TEST_CASE("ladder") {
  for (int n = 1; n <= 4; ++n) {
    Ladder l = build_ladder(Vertex{2, -1}, n);
    auto model = oracle::ladder_model(n);
    CHECK(static_cast<int>(l.edges.size()) == 3 * n + 1);
    CHECK(static_cast<int>(l.triples.size()) == n);
    CHECK(l.vertices().size() == static_cast<std::size_t>(2 * (n + 1)));
    auto shift = [](const Edge& e) {
      return oracle::cedge({e.u.x() - 2, e.u.y() + 1}, {e.v.x() - 2, e.v.y() + 1});
    };
    CHECK(shift(l.first) == model.first);
    CHECK(l.first == edge_between(kZ2, Vertex{2, -1}, Vertex{2, 0}));
    std::set<oracle::CEdge> seen{shift(l.first)};
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < 3; ++k) {
        CHECK(shift(l.triples[i][k]) == model.triples[i][k]);
        CHECK(seen.insert(shift(l.triples[i][k])).second);
        CHECK(l.triple_of(l.triples[i][k]) == i);
      }
    CHECK(l.triple_of(l.first) == -1);
    CHECK(seen.size() == l.edges.size());
  }
  CHECK_THROWS(build_ladder(Vertex{0, 0}, 0));
}

TEST_CASE("every ladder cut avoiding the first edge holds two edges of one triple") {
  for (int n = 1; n <= 3; ++n) {
    auto l = oracle::ladder_model(n);
    std::vector<oracle::CEdge> rest(l.edges.begin() + 1, l.edges.end());
    const int k = static_cast<int>(rest.size());
    int cuts = 0;
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::set<oracle::CEdge> cut;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) cut.insert(rest[i]);
      if (!oracle::ladder_disconnected(l, cut)) continue;
      ++cuts;
      bool two = false;
      for (const auto& t : l.triples) two |= cut.count(t[0]) + cut.count(t[1]) + cut.count(t[2]) >= 2;
      CHECK(two);
    }
    CHECK(cuts > 0);
  }
}

TEST_CASE("enclosing cycles") {
  WindowGraph g(kZ2, Window{Vertex{0, 0}, 6});
  std::vector<Vertex> one{Vertex{0, 0}};
  auto c4 = enumerate_enclosing_cycles(one, 4, g);
  REQUIRE(c4.cycles.size() == 1);
  CHECK(as_cedges(c4.cycles[0]) ==
        as_cedges(std::vector<Edge>{edge_between(kZ2, {0, 0}, {1, 0}), edge_between(kZ2, {0, 0}, {0, 1}),
                                    edge_between(kZ2, {-1, 0}, {0, 0}), edge_between(kZ2, {0, -1}, {0, 0})}));
  CHECK(enumerate_enclosing_cycles(one, 3, g).cycles.empty());
  CHECK_THROWS_AS(enumerate_enclosing_cycles(one, 26, g), CapError);

  for (int n = 1; n <= 3; ++n) {
    Ladder l = build_ladder(Vertex{0, 0}, n);
    auto cs = enumerate_enclosing_cycles(l, 2 * n + 8, g);
    CHECK_FALSE(cs.cycles.empty());
    std::set<EdgeId> ladder_ids;
    for (const Edge& e : l.edges) ladder_ids.insert(e.id);
    for (const auto& cyc : cs.cycles) {
      CHECK(static_cast<int>(cyc.size()) >= n);
      CHECK(static_cast<int>(cyc.size()) <= 2 * n + 8);
      for (const Edge& e : cyc) CHECK_FALSE(ladder_ids.count(e.id));
      for (const Vertex& v : l.vertices()) CHECK(encloses(cyc, v));
      CHECK(min_separating_check(g, cyc, Vertex{0, 0}));
      auto ce = as_cedges(cyc);
      CHECK(std::adjacent_find(ce.begin(), ce.end()) == ce.end());
    }
    auto sys = build_cycle_system(cs, g);
    CHECK(sys.set_count() == static_cast<int>(cs.cycles.size()));
    auto j = to_json(cs, g);
    CHECK(j["max_len"] == 2 * n + 8);
  }
}

TEST_CASE("separating check") {
  WindowGraph g(kZ2, Window{Vertex{0, 0}, 5});
  std::vector<Edge> around_origin{edge_between(kZ2, {0, 0}, {1, 0}), edge_between(kZ2, {0, 0}, {0, 1}),
                                  edge_between(kZ2, {-1, 0}, {0, 0}), edge_between(kZ2, {0, -1}, {0, 0})};
  CHECK(min_separating_check(g, around_origin, Vertex{0, 0}));
  CHECK(encloses(around_origin, Vertex{0, 0}));
  std::vector<Edge> elsewhere{edge_between(kZ2, {2, 2}, {3, 2}), edge_between(kZ2, {2, 2}, {2, 3}),
                              edge_between(kZ2, {1, 2}, {2, 2}), edge_between(kZ2, {2, 1}, {2, 2})};
  CHECK_FALSE(min_separating_check(g, elsewhere, Vertex{0, 0}));
  CHECK_FALSE(encloses(elsewhere, Vertex{0, 0}));
}

TEST_CASE("enclosing cycles equal minimal separators on small windows") {
  struct Case {
    int R;
    std::vector<Vertex> targets;
    int max_len;
  };
  const std::vector<Vertex> ladder1{Vertex{0, 0}, Vertex{1, 0}, Vertex{0, 1}, Vertex{1, 1}};
  for (const Case& c : {Case{2, {Vertex{0, 0}}, 24}, Case{2, {Vertex{0, 0}, Vertex{1, 0}}, 24},
                        Case{3, {Vertex{0, 0}}, 14}, Case{3, ladder1, 16}}) {
    CAPTURE(c.R);
    CAPTURE(c.max_len);
    WindowGraph g(kZ2, Window{Vertex{0, 0}, c.R});
    std::vector<oracle::P> ts;
    for (const Vertex& v : c.targets) ts.push_back({v.x(), v.y()});
    auto brute = oracle::separators(c.R, ts, c.max_len);
    auto cs = enumerate_enclosing_cycles(c.targets, c.max_len, g);
    std::set<std::vector<oracle::CEdge>> mine;
    for (const auto& cyc : cs.cycles) CHECK(mine.insert(as_cedges(cyc)).second);
    CHECK(mine == std::set<std::vector<oracle::CEdge>>(brute.begin(), brute.end()));
    CHECK_FALSE(mine.empty());
  }
}
