#include "perc/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "perc/graph_search.hpp"
#include "perc/rng.hpp"

namespace perc {

int Strategy::choose_origin(const WindowGraph& graph, std::span<const Owner>, const GameRules&) {
  return graph.center_index();
}

void Strategy::start(const GameView&) {}

namespace {

Owner own_mark(Side s) { return s == Side::maker ? Owner::M : Owner::B; }
Owner opponent_mark(Side s) { return s == Side::maker ? Owner::B : Owner::M; }

// Keeps a private copy of the board, updated from opponent moves and own claims.
class Tracked : public Strategy {
 public:
  explicit Tracked(Side side) : side_(side) {}

  void start(const GameView& view) override {
    graph_ = view.graph;
    board_.assign(view.owner.begin(), view.owner.end());
    rules_ = view.rules;
    v0_ = view.v0;
    cursor_ = 0;
    on_start();
  }

  std::vector<int> play(const TurnInput& in) override {
    for (int e : in.opponent_moves) {
      board_[e] = opponent_mark(side_);
      on_opponent(e);
    }
    std::vector<int> out;
    choose(in, out);
    // Quota not filled by the rule set: lowest unclaimed edges.
    while (static_cast<int>(out.size()) < in.quota) {
      int e = lowest_unclaimed();
      if (e < 0) break;
      take(e, out);
    }
    return out;
  }

 protected:
  virtual void on_start() {}
  virtual void on_opponent(int) {}
  virtual void on_own(int) {}
  virtual void choose(const TurnInput& in, std::vector<int>& out) = 0;

  bool unclaimed(int e) const { return board_[e] == Owner::U; }
  void take(int e, std::vector<int>& out) {
    board_[e] = own_mark(side_);
    out.push_back(e);
    on_own(e);
  }
  int lowest_unclaimed() {
    const int n = static_cast<int>(board_.size());
    while (cursor_ < n && board_[cursor_] != Owner::U) ++cursor_;
    return cursor_ < n ? cursor_ : -1;
  }
  static bool full(const TurnInput& in, const std::vector<int>& out) {
    return static_cast<int>(out.size()) >= in.quota;
  }

  Side side_;
  const WindowGraph* graph_ = nullptr;
  std::vector<Owner> board_;
  GameRules rules_;
  int v0_ = 0;
  int cursor_ = 0;
};

// ---- baselines -------------------------------------------------------------

// Claims in a fixed pseudo-random priority order over edge ids. The first
// unclaimed edge of a uniform random order is uniform over the unclaimed ones,
// and the order depends on the seed and edge ids only.
class RandomStrategy : public Tracked {
 public:
  RandomStrategy(Side side, std::uint64_t seed) : Tracked(side), seed_(seed) {}
  std::string name() const override { return "random"; }

 protected:
  void on_start() override {
    order_.resize(board_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<std::uint64_t> key(board_.size());
    for (std::size_t e = 0; e < board_.size(); ++e) key[e] = prf(seed_, graph_->edge(static_cast<int>(e)).id);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) { return key[a] != key[b] ? key[a] < key[b] : a < b; });
    pos_ = 0;
  }
  void choose(const TurnInput& in, std::vector<int>& out) override {
    while (!full(in, out) && pos_ < order_.size()) {
      int e = order_[pos_];
      if (unclaimed(e))
        take(e, out);
      else
        ++pos_;
    }
  }

 private:
  std::uint64_t seed_;
  std::vector<int> order_;
  std::size_t pos_ = 0;
};

// Maker extends her cheapest escape route; Breaker blocks it.
class GreedyStrategy : public Tracked {
 public:
  using Tracked::Tracked;
  std::string name() const override { return "greedy"; }

 protected:
  void choose(const TurnInput& in, std::vector<int>& out) override {
    while (!full(in, out)) {
      int pick = -1;
      for (int e : cheapest_escape(*graph_, board_, v0_))
        if (unclaimed(e)) {
          pick = e;
          break;
        }
      if (pick < 0) return;
      take(pick, out);
    }
  }
};

class ShortestCutStrategy : public Tracked {
 public:
  using Tracked::Tracked;
  std::string name() const override { return "shortest-cut"; }

 protected:
  void choose(const TurnInput& in, std::vector<int>& out) override {
    while (!full(in, out)) {
      MinCut cut = min_cut_to_boundary(*graph_, board_, v0_);
      if (!cut.finite || cut.edges.empty()) return;
      take(cut.edges.front(), out);
    }
  }
};

// ---- pairings --------------------------------------------------------------

class PairingZ2 : public Tracked {
 public:
  using Tracked::Tracked;
  std::string name() const override { return "pairing-z2"; }

 protected:
  void on_start() override {
    if (!graph_->kind().is_z2()) throw UnsupportedRules("pairing-z2 needs the Z2 lattice");
  }
  void on_opponent(int e) override { pending_.push_back(e); }
  void choose(const TurnInput& in, std::vector<int>& out) override {
    for (int e : pending_) {
      if (full(in, out)) break;
      const Edge& ed = graph_->edge(e);
      int partner = graph_->edge_at(graph_->vertex_index(ed.u), 1 - ed.dir);
      if (partner >= 0 && unclaimed(partner)) take(partner, out);
    }
    pending_.clear();
  }

 private:
  std::vector<int> pending_;
};

// T_x = the edges based at x: east, north and the north-east diagonal. These
// partition the edges, and a Maker edge in every T_x yields a path that is
// monotone in x+y.
class PairingTri : public Tracked {
 public:
  using Tracked::Tracked;
  std::string name() const override { return "pairing-tri"; }

 protected:
  void on_start() override {
    if (graph_->kind().family != Family::tri) throw UnsupportedRules("pairing-tri needs the triangular lattice");
    bool ok = (rules_.m == 1 && rules_.b == 1) || (rules_.m == 2 && rules_.b == 2);
    if (!ok || rules_.c != 0) throw UnsupportedRules("pairing-tri supports the (1,1) and (2,2) games");
  }
  void on_opponent(int e) override { pending_.push_back(e); }
  void choose(const TurnInput& in, std::vector<int>& out) override {
    for (int e : pending_) {
      if (full(in, out)) break;
      int base = graph_->vertex_index(graph_->edge(e).u);
      int best = -1;
      for (int dir = 0; dir < 3; ++dir) {
        int f = graph_->edge_at(base, dir);
        if (f >= 0 && unclaimed(f) && (best < 0 || f < best)) best = f;
      }
      if (best >= 0) take(best, out);
    }
    pending_.clear();
  }

 private:
  std::vector<int> pending_;
};

// ---- clump Breaker ---------------------------------------------------------

class ClumpBreaker : public Tracked {
 public:
  ClumpBreaker(const StrategyParams& p) : Tracked(Side::breaker), params_(p) {}
  std::string name() const override { return "clump"; }

  nlohmann::json report() const override {
    nlohmann::json j{{"confined", radius_ > 0}, {"r_max", params_.confine_max}};
    if (radius_ > 0) {
      j["m"] = radius_;
      j["clumps"] = clumps_.size();
      j["used"] = used_count_;
    }
    return j;
  }

 protected:
  void on_start() override {
    if (graph_->kind().family != Family::zd) throw UnsupportedRules("clump strategy needs a Zd lattice");
    clump_of_.assign(board_.size(), -1);
    clumps_.clear();
    done_.clear();
    box_.clear();
    box_pos_ = 0;
    radius_ = 0;
    const Vertex& v = graph_->vertex(v0_);
    ConfinementResult res = confinement_radius(*graph_, board_, v, std::max(2, params_.confine_max));
    if (!res.radius) return;
    radius_ = *res.radius;
    used_count_ = static_cast<int>(res.family->used.size());
    for (const Clump& c : res.family->clumps) {
      for (int e : c.edges) clump_of_[e] = static_cast<int>(clumps_.size());
      clumps_.push_back(c.edges);
    }
    done_.assign(clumps_.size(), 0);
    Window box{v, radius_};
    for (int e = 0; e < graph_->edge_count(); ++e)
      if (in_box(box, graph_->vertex(graph_->tail(e))) && in_box(box, graph_->vertex(graph_->head(e))))
        box_.push_back(e);
  }
  void on_opponent(int e) override { pending_.push_back(e); }
  void choose(const TurnInput& in, std::vector<int>& out) override {
    // Rule 1: complete the clump Maker touched.
    for (int e : pending_) {
      int k = clump_of_[e];
      if (k < 0 || done_[k]) continue;
      done_[k] = 1;
      for (int f : clumps_[k])
        if (!full(in, out) && unclaimed(f)) take(f, out);
    }
    pending_.clear();
    // Rule 2: lowest unclaimed edge inside B_m(v0).
    while (!full(in, out) && box_pos_ < box_.size()) {
      int e = box_[box_pos_];
      if (unclaimed(e))
        take(e, out);
      else
        ++box_pos_;
    }
  }

 private:
  StrategyParams params_;
  int radius_ = 0;
  int used_count_ = 0;
  std::vector<int> clump_of_;
  std::vector<std::vector<int>> clumps_;
  std::vector<char> done_;
  std::vector<int> box_;
  std::size_t box_pos_ = 0;
  std::vector<int> pending_;
};

// ---- potential Breaker -----------------------------------------------------

// Claims that hit no live set fall back to the current minimum cut.
void fallback_cut(const WindowGraph& g, std::vector<Owner>& board, int v0, int& pick) {
  MinCut cut = min_cut_to_boundary(g, board, v0);
  pick = cut.finite && !cut.edges.empty() ? cut.edges.front() : -1;
}

class PotentialBreaker : public Tracked {
 public:
  PotentialBreaker(const StrategyParams& p) : Tracked(Side::breaker), params_(p) {}
  std::string name() const override { return "potential-breaker"; }

  nlohmann::json report() const override {
    return {{"N", length_},
            {"walks", system_.set_count()},
            {"lambda", cert_.lambda},
            {"total_danger", cert_.total},
            {"bound", cert_.bound},
            {"pass", cert_.pass}};
  }
  const DangerLedger* ledger() const { return ledger_.get(); }

 protected:
  void on_start() override {
    const Vertex& v = graph_->vertex(v0_);
    int room = graph_->radius();
    for (int i = 0; i < v.dim; ++i) room = std::min(room, graph_->radius() - std::abs(v[i] - graph_->window().center[i]));
    const int cap = std::min({params_.path_cap, room, default_saw_cap(graph_->kind())});
    if (cap < 1) throw ParameterError("no room for walks around v0");
    auto build = [&](int n) {
      SawSet saws = enumerate_saws(*graph_, v, n);
      system_ = build_path_system(saws, graph_->edge_count());
      cert_ = beck_certificate(board_, system_, rules_);
      length_ = n;
    };
    if (params_.path_length > 0) {
      build(std::min(params_.path_length, cap));
    } else {
      for (int n = 1; n <= cap; ++n) {
        build(n);
        if (cert_.pass) break;
      }
    }
    ledger_ = std::make_unique<DangerLedger>(system_, board_, beck_lambda(rules_));
  }
  void on_opponent(int e) override { ledger_->claim(Owner::M, e); }
  void on_own(int e) override { ledger_->claim(Owner::B, e); }
  void choose(const TurnInput& in, std::vector<int>& out) override {
    while (!full(in, out)) {
      int pick = greedy_breaker_choice(*ledger_);
      if (pick < 0) return;
      if (ledger_->potential_breaker(pick) <= 0) fallback_cut(*graph_, board_, v0_, pick);
      if (pick < 0) return;
      take(pick, out);
    }
  }

 private:
  StrategyParams params_;
  int length_ = 0;
  WinningSetSystem system_;
  BeckCertificate cert_;
  std::unique_ptr<DangerLedger> ledger_;
};

// ---- composite Maker -------------------------------------------------------

struct CycleTemplate {
  std::vector<std::array<int, 3>> flat;  // (dx, dy, dir) per edge, relative to the ladder origin
  std::vector<int> offsets{0};
};

std::mutex cache_mutex;
std::map<std::pair<int, int>, std::shared_ptr<const CycleTemplate>> cycle_cache;

std::shared_ptr<const CycleTemplate> cycle_template(int height, int max_len) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto key = std::make_pair(height, max_len);
  auto it = cycle_cache.find(key);
  if (it != cycle_cache.end()) return it->second;
  Ladder ladder = build_ladder(Vertex::origin(2), height);
  auto verts = ladder.vertices();
  CycleSet cs = enumerate_enclosing_cycles(verts, max_len);
  auto t = std::make_shared<CycleTemplate>();
  for (const auto& cyc : cs.cycles) {
    for (const Edge& e : cyc) t->flat.push_back({e.u.x(), e.u.y(), e.dir});
    t->offsets.push_back(static_cast<int>(t->flat.size()));
  }
  cycle_cache.emplace(key, t);
  return t;
}

}  // namespace

int composite_cycle_length(int height, int slack) { return std::min(kCycleLengthCap, 2 * height + 6 + slack); }

std::vector<std::vector<int>> ladder_cycles(const WindowGraph& graph, const Vertex& v0, int height, int max_len) {
  if (!graph.kind().is_z2()) throw UnsupportedRules("ladders live on Z2");
  auto t = cycle_template(height, max_len);
  std::vector<std::vector<int>> out;
  const std::size_t n = t->offsets.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> cyc;
    bool inside = true;
    for (int k = t->offsets[i]; k < t->offsets[i + 1] && inside; ++k) {
      const auto& [dx, dy, dir] = t->flat[k];
      int base = graph.vertex_index(Vertex{v0.x() + dx, v0.y() + dy});
      int e = base < 0 ? -1 : graph.edge_at(base, dir);
      if (e < 0) inside = false;
      cyc.push_back(e);
    }
    if (inside) out.push_back(std::move(cyc));
  }
  return out;
}

namespace {

bool ladder_fits(const WindowGraph& graph, std::span<const Owner> owner, const Ladder& ladder) {
  for (const Vertex& v : ladder.vertices()) {
    int i = graph.vertex_index(v);
    if (i < 0 || graph.is_boundary(i)) return false;
  }
  for (const Edge& e : ladder.edges)
    if (owner[graph.edge_index(e)] == Owner::B) return false;
  return true;
}

GameRules reversed_rules(const GameRules& rules) { return GameRules{rules.b, rules.m, 0}; }

struct Evaluated {
  BeckCertificate cert;
  int cycles = 0;
};

Evaluated evaluate_ladder(const WindowGraph& graph, std::span<const Owner> reversed, const GameRules& rules,
                          const Vertex& v0, int height, int max_len) {
  auto cycles = ladder_cycles(graph, v0, height, max_len);
  WinningSetSystem sys = WinningSetSystem::from_sets(graph.edge_count(), cycles);
  return {beck_certificate(reversed, sys, reversed_rules(rules)), sys.set_count()};
}

void check_composite_rules(const WindowGraph& graph, const GameRules& rules) {
  if (!graph.kind().is_z2()) throw UnsupportedRules("composite maker needs the Z2 lattice");
  if (rules.m < 2 || rules.b != 1) throw UnsupportedRules("composite maker needs m >= 2 and b = 1");
}

std::vector<Vertex> spiral(const Vertex& c, int radius) {
  std::vector<Vertex> out{c};
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::pair<double, Vertex>> ring;
    for (int dx = -r; dx <= r; ++dx)
      for (int dy = -r; dy <= r; ++dy)
        if (std::max(std::abs(dx), std::abs(dy)) == r) {
          double a = std::atan2(static_cast<double>(dy), static_cast<double>(dx));
          if (a < 0) a += 2 * M_PI;
          ring.push_back({a, Vertex{c.x() + dx, c.y() + dy}});
        }
    std::sort(ring.begin(), ring.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [a, v] : ring) out.push_back(v);
  }
  return out;
}

}  // namespace

std::optional<LadderPlacement> find_ladder_placement(const WindowGraph& graph, std::span<const Owner> owner,
                                                     const GameRules& rules, const StrategyParams& params,
                                                     std::optional<Vertex> center) {
  check_composite_rules(graph, rules);
  std::vector<Owner> rev = reverse(owner);
  const int scan = params.scan_radius >= 0 ? params.scan_radius : graph.radius() / 2;
  for (const Vertex& v0 : spiral(center.value_or(graph.window().center), scan)) {
    for (int n = std::max(1, params.ladder_min); n <= params.ladder_max; ++n) {
      Ladder ladder = build_ladder(v0, n);
      if (!ladder_fits(graph, owner, ladder)) break;  // longer ladders contain this one
      int len = composite_cycle_length(n, params.cycle_slack);
      Evaluated ev = evaluate_ladder(graph, rev, rules, v0, n, len);
      if (ev.cert.pass) return LadderPlacement{v0, n, len, ev.cert, ev.cycles};
    }
  }
  return std::nullopt;
}

namespace {

class CompositeMaker : public Tracked {
 public:
  CompositeMaker(const StrategyParams& p) : Tracked(Side::maker), params_(p) {}
  std::string name() const override { return "composite-maker"; }

  int choose_origin(const WindowGraph& graph, std::span<const Owner> owner, const GameRules& rules) override {
    check_composite_rules(graph, rules);
    placement_ = find_ladder_placement(graph, owner, rules, params_);
    return placement_ ? graph.vertex_index(placement_->v0) : graph.center_index();
  }

  nlohmann::json report() const override {
    nlohmann::json j{{"certified", placement_.has_value()}};
    j["N"] = height_;
    j["max_len"] = max_len_;
    j["cycles"] = system_.set_count();
    j["lambda"] = cert_.lambda;
    j["total_danger"] = cert_.total;
    j["bound"] = cert_.bound;
    j["pass"] = cert_.pass;
    return j;
  }

 protected:
  void on_start() override {
    check_composite_rules(*graph_, rules_);
    const Vertex& v = graph_->vertex(v0_);
    if (placement_ && placement_->v0 == v) {
      height_ = placement_->height;
      max_len_ = placement_->max_len;
    } else {
      height_ = std::max(1, params_.ladder_min);
      max_len_ = composite_cycle_length(height_, params_.cycle_slack);
    }
    Ladder ladder = build_ladder(v, height_);
    first_ = graph_->edge_index(ladder.first);
    triple_of_.assign(board_.size(), -1);
    triples_.clear();
    for (const auto& tr : ladder.triples) {
      std::array<int, 3> idx{};
      for (int k = 0; k < 3; ++k) {
        idx[k] = graph_->edge_index(tr[k]);
        if (idx[k] >= 0) triple_of_[idx[k]] = static_cast<int>(triples_.size());
      }
      triples_.push_back(idx);
    }
    system_ = WinningSetSystem::from_sets(graph_->edge_count(), ladder_cycles(*graph_, v, height_, max_len_));
    std::vector<Owner> rev = reverse(board_);
    cert_ = beck_certificate(rev, system_, reversed_rules(rules_));
    ledger_ = std::make_unique<DangerLedger>(system_, rev, cert_.lambda);
  }
  // Reversed game: real Breaker claims are Maker claims in the ledger.
  void on_opponent(int e) override {
    ledger_->claim(Owner::M, e);
    pending_.push_back(e);
  }
  void on_own(int e) override { ledger_->claim(Owner::B, e); }

  void choose(const TurnInput& in, std::vector<int>& out) override {
    if (in.turn == 1 && first_ >= 0 && unclaimed(first_)) take(first_, out);
    for (int e : pending_) {
      int k = triple_of_[e];
      if (k < 0) continue;
      for (int f : triples_[k])
        if (f >= 0 && !full(in, out) && unclaimed(f)) take(f, out);
    }
    pending_.clear();
    while (!full(in, out)) {
      int pick = greedy_breaker_choice(*ledger_);
      if (pick < 0) return;
      if (ledger_->potential_breaker(pick) <= 0) pick = escape_edge();
      if (pick < 0) return;
      take(pick, out);
    }
  }

 private:
  // No live cycle left: extend the cheapest route to the boundary.
  int escape_edge() const {
    for (int e : cheapest_escape(*graph_, board_, v0_))
      if (unclaimed(e)) return e;
    return -1;
  }

  StrategyParams params_;
  std::optional<LadderPlacement> placement_;
  int height_ = 1;
  int max_len_ = 0;
  int first_ = -1;
  std::vector<int> triple_of_;
  std::vector<std::array<int, 3>> triples_;
  WinningSetSystem system_;
  BeckCertificate cert_;
  std::unique_ptr<DangerLedger> ledger_;
  std::vector<int> pending_;
};

}  // namespace

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{"clump",      "potential-breaker", "composite-maker", "pairing-z2",
                                              "pairing-tri", "random",            "greedy",          "shortest-cut"};
  return names;
}

bool strategy_allowed(std::string_view name, Side side) {
  if (name == "clump" || name == "potential-breaker" || name == "shortest-cut") return side == Side::breaker;
  if (name == "composite-maker" || name == "pairing-z2" || name == "pairing-tri") return side == Side::maker;
  return name == "random" || name == "greedy";
}

std::unique_ptr<Strategy> make_strategy(std::string_view name, Side side, const StrategyParams& params) {
  if (std::find(strategy_names().begin(), strategy_names().end(), name) == strategy_names().end())
    throw ParameterError("unknown strategy '" + std::string(name) + "'");
  if (!strategy_allowed(name, side))
    throw ParameterError("strategy '" + std::string(name) + "' cannot play " +
                         (side == Side::maker ? "Maker" : "Breaker"));
  if (name == "random") return std::make_unique<RandomStrategy>(side, params.seed);
  if (name == "greedy") return std::make_unique<GreedyStrategy>(side);
  if (name == "shortest-cut") return std::make_unique<ShortestCutStrategy>(side);
  if (name == "pairing-z2") return std::make_unique<PairingZ2>(side);
  if (name == "pairing-tri") return std::make_unique<PairingTri>(side);
  if (name == "clump") return std::make_unique<ClumpBreaker>(params);
  if (name == "potential-breaker") return std::make_unique<PotentialBreaker>(params);
  return std::make_unique<CompositeMaker>(params);
}

}  // namespace perc
