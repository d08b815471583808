#include "perc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "perc/graph_search.hpp"
#include "perc/rng.hpp"

namespace perc {

namespace {

nlohmann::json coords(const Vertex& v) { return std::vector<int>(v.c.begin(), v.c.begin() + v.dim); }

Vertex vertex_from(const nlohmann::json& j) {
  auto c = j.get<std::vector<int>>();
  if (c.empty() || c.size() > static_cast<std::size_t>(kMaxDim)) throw ParameterError("bad vertex coordinates");
  Vertex v = Vertex::origin(static_cast<int>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v[static_cast<int>(i)] = c[i];
  return v;
}

const char* side_name(Owner o) { return o == Owner::M ? "Maker" : "Breaker"; }

}  // namespace

nlohmann::json to_json(const MatchSpec& s) {
  nlohmann::json j;
  j["lattice"] = to_string(s.kind);
  j["center"] = coords(s.window.center);
  j["radius"] = s.window.radius;
  j["m"] = s.rules.m;
  j["b"] = s.rules.b;
  j["c"] = s.rules.c;
  j["p"] = s.p ? nlohmann::json(*s.p) : nlohmann::json(nullptr);
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  j["maker"] = s.maker;
  j["breaker"] = s.breaker;
  j["seed"] = s.seed;
  j["max_rounds"] = s.max_rounds;
  j["fit_window"] = s.fit_window;
  j["stop_when_decided"] = s.stop_when_decided;
  j["params"] = {{"path_length", s.params.path_length}, {"path_cap", s.params.path_cap},
                 {"confine_max", s.params.confine_max}, {"ladder_min", s.params.ladder_min},
                 {"ladder_max", s.params.ladder_max},
                 {"cycle_slack", s.params.cycle_slack}, {"scan_radius", s.params.scan_radius}};
  return j;
}

MatchSpec spec_from_json(const nlohmann::json& j) {
  MatchSpec s;
  s.kind = parse_lattice(j.value("lattice", std::string("z2")));
  s.window.center = j.contains("center") ? vertex_from(j["center"]) : Vertex::origin(s.kind.dim);
  s.window.radius = j.value("radius", 8);
  s.rules.m = j.value("m", 1);
  s.rules.b = j.value("b", 1);
  s.rules.c = j.value("c", 0);
  if (j.contains("p") && !j["p"].is_null()) s.p = j["p"].get<double>();
  s.alpha = j.value("alpha", 0.0);
  s.beta = j.value("beta", 0.0);
  s.maker = j.value("maker", std::string("random"));
  s.breaker = j.value("breaker", std::string("random"));
  s.seed = j.value("seed", std::uint64_t{0});
  s.max_rounds = j.value("max_rounds", 0);
  s.fit_window = j.value("fit_window", false);
  s.stop_when_decided = j.value("stop_when_decided", true);
  if (j.contains("params")) {
    const auto& p = j["params"];
    s.params.path_length = p.value("path_length", s.params.path_length);
    s.params.path_cap = p.value("path_cap", s.params.path_cap);
    s.params.confine_max = p.value("confine_max", s.params.confine_max);
    s.params.ladder_min = p.value("ladder_min", s.params.ladder_min);
    s.params.ladder_max = p.value("ladder_max", s.params.ladder_max);
    s.params.cycle_slack = p.value("cycle_slack", s.params.cycle_slack);
    s.params.scan_radius = p.value("scan_radius", s.params.scan_radius);
  }
  return s;
}

void validate(const MatchSpec& s) {
  s.rules.validate();
  if (s.window.radius < 1) throw ParameterError("radius must be at least 1");
  if (s.window.center.dim != s.kind.dim) throw ParameterError("window centre has the wrong dimension");
  if (s.p) {
    if (!(*s.p >= 0 && *s.p <= 1)) throw ParameterError("p must lie in [0,1]");
  } else {
    check_board_params(s.alpha, s.beta);
  }
  for (const auto& [name, side] : {std::pair{s.maker, Side::maker}, std::pair{s.breaker, Side::breaker}}) {
    const auto& names = strategy_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw ParameterError("unknown strategy '" + name + "'");
    if (!strategy_allowed(name, side)) throw ParameterError("strategy '" + name + "' cannot play this side");
  }
  if (s.params.path_cap < 1 || s.params.ladder_min < 1 || s.params.ladder_max < s.params.ladder_min ||
      s.params.confine_max < 2)
    throw ParameterError("strategy caps out of range");
}

GameConfiguration sample_board(const MatchSpec& spec, const Window& w) {
  auto graph = std::make_shared<const WindowGraph>(spec.kind, w);
  if (spec.p) return sample_bond(graph, *spec.p, spec.seed);
  return sample_config(graph, BoardParams{spec.alpha, spec.beta, spec.seed});
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::ongoing: return "Ongoing";
    case Outcome::breaker_win: return "BreakerWin";
    case Outcome::maker_survived: return "MakerSurvived";
    case Outcome::exhausted: return "Exhausted";
  }
  return "?";
}

Outcome outcome_from_string(const std::string& s) {
  for (Outcome o : {Outcome::ongoing, Outcome::breaker_win, Outcome::maker_survived, Outcome::exhausted})
    if (to_string(o) == s) return o;
  throw ParameterError("unknown outcome '" + s + "'");
}

Adjudication adjudicate(const WindowGraph& graph, std::span<const Owner> owner, int v0) {
  return reaches_boundary(graph, owner, v0, false) ? Adjudication::connected : Adjudication::separated;
}

// ---- Match -----------------------------------------------------------------

Match::Match(const MatchSpec& spec) : spec_(spec) { init(false, false, nullptr, nullptr); }

Match::Match(const MatchSpec& spec, bool maker_external, bool breaker_external) : spec_(spec) {
  init(maker_external, breaker_external, nullptr, nullptr);
}

Match::Match(const MatchSpec& spec, const Window& window, const Vertex& v0, bool maker_external,
             bool breaker_external)
    : spec_(spec) {
  init(maker_external, breaker_external, &window, &v0);
}

void Match::init(bool maker_external, bool breaker_external, const Window* fixed, const Vertex* fixed_v0) {
  validate(spec_);
  maker_external_ = maker_external;
  breaker_external_ = breaker_external;
  Window window = spec_.window;
  if (fixed) {
    window = *fixed;
    if (window.radius != spec_.window.radius) confinement_ = window.radius;
  } else if (spec_.fit_window && spec_.breaker == "clump") {
    Window big{spec_.window.center, spec_.params.confine_max};
    GameConfiguration wide = sample_board(spec_, big);
    auto res = confinement_radius(*wide.graph, wide.owner, big.center, spec_.params.confine_max);
    if (res.radius) {
      window.radius = *res.radius;
      confinement_ = *res.radius;
    }
  }
  GameConfiguration board = sample_board(spec_, window);
  graph_ = board.graph;
  initial_ = board.owner;
  owner_ = board.owner;
  unclaimed_ = static_cast<int>(std::count(owner_.begin(), owner_.end(), Owner::U));

  StrategyParams mp = spec_.params, bp = spec_.params;
  mp.seed = derive_seed(spec_.seed, Domain::maker);
  bp.seed = derive_seed(spec_.seed, Domain::breaker);
  if (!maker_external_) maker_ = make_strategy(spec_.maker, Side::maker, mp);
  if (!breaker_external_) breaker_ = make_strategy(spec_.breaker, Side::breaker, bp);

  if (fixed_v0) {
    v0_ = graph_->vertex_index(*fixed_v0);
    if (v0_ < 0) throw InvalidVertex("v0 " + to_string(*fixed_v0) + " outside the window");
  } else if (maker_) {
    v0_ = maker_->choose_origin(*graph_, owner_, spec_.rules);
  } else {
    v0_ = graph_->center_index();
  }
  GameView view{graph_.get(), initial_, spec_.rules, v0_};
  if (maker_) maker_->start(view);
  if (breaker_) breaker_->start(view);

  if (adjudicate(*graph_, owner_, v0_) == Adjudication::separated) {
    outcome_ = Outcome::breaker_win;
  } else if (spec_.stop_when_decided && reaches_boundary(*graph_, owner_, v0_, true)) {
    outcome_ = Outcome::maker_survived;
    decided_ = true;
  } else if (unclaimed_ == 0) {
    outcome_ = Outcome::maker_survived;
  }
}

bool Match::external(Owner side) const { return side == Owner::M ? maker_external_ : breaker_external_; }

int Match::quota() const {
  if (over()) return 0;
  int q = to_move_ == Owner::M ? spec_.rules.m + (maker_turns_ == 0 ? spec_.rules.c : 0) : spec_.rules.b;
  return std::min(q, unclaimed_);
}

void Match::check_turn(std::span<const int> edges) const {
  const std::string who = side_name(to_move_);
  if (over()) throw IllegalMove(who + ": the game is over");
  if (static_cast<int>(edges.size()) != quota())
    throw IllegalMove(who + " must claim " + std::to_string(quota()) + " edge(s), got " +
                      std::to_string(edges.size()));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    int e = edges[i];
    if (e < 0 || e >= graph_->edge_count()) throw IllegalMove(who + ": edge outside the window");
    if (owner_[e] != Owner::U)
      throw IllegalMove(who + ": edge " + std::to_string(graph_->edge(e).id) + " is already claimed");
    for (std::size_t k = 0; k < i; ++k)
      if (edges[k] == e) throw IllegalMove(who + ": edge " + std::to_string(graph_->edge(e).id) + " listed twice");
  }
}

void Match::apply_turn(std::span<const int> edges) {
  check_turn(edges);
  const Owner who = to_move_;
  for (int e : edges) {
    owner_[e] = who;
    moves_.push_back({who, e});
  }
  unclaimed_ -= static_cast<int>(edges.size());
  (who == Owner::M ? last_maker_ : last_breaker_).assign(edges.begin(), edges.end());
  settle_after(who);
}

void Match::settle_after(Owner who) {
  if (who == Owner::M) {
    ++maker_turns_;
    rounds_ = maker_turns_;
    if (spec_.stop_when_decided && reaches_boundary(*graph_, owner_, v0_, true)) {
      outcome_ = Outcome::maker_survived;
      decided_ = true;
    } else if (unclaimed_ == 0) {
      outcome_ = Outcome::maker_survived;
    } else {
      to_move_ = Owner::B;
    }
    return;
  }
  ++breaker_turns_;
  if (adjudicate(*graph_, owner_, v0_) == Adjudication::separated)
    outcome_ = Outcome::breaker_win;
  else if (unclaimed_ == 0)
    outcome_ = Outcome::maker_survived;
  else if (spec_.max_rounds > 0 && rounds_ >= spec_.max_rounds)
    outcome_ = Outcome::exhausted;
  else
    to_move_ = Owner::M;
}

void Match::step() {
  if (over()) return;
  Strategy* s = to_move_ == Owner::M ? maker_.get() : breaker_.get();
  if (!s) throw IllegalMove(std::string(side_name(to_move_)) + " is driven externally");
  TurnInput in;
  in.view = GameView{graph_.get(), owner_, spec_.rules, v0_};
  in.opponent_moves = to_move_ == Owner::M ? std::span<const int>(last_breaker_) : std::span<const int>(last_maker_);
  in.quota = quota();
  in.turn = (to_move_ == Owner::M ? maker_turns_ : breaker_turns_) + 1;
  std::vector<int> edges = s->play(in);
  try {
    apply_turn(edges);
  } catch (const IllegalMove& e) {
    throw IllegalMove("strategy '" + s->name() + "' made an illegal move: " + e.what());
  }
}

void Match::advance() {
  while (!over() && !external(to_move_)) step();
}

MatchTranscript Match::transcript() const {
  MatchTranscript t;
  t.spec = spec_;
  t.window = graph_->window();
  t.v0 = graph_->vertex(v0_);
  t.moves = moves_;
  t.outcome = outcome_;
  t.rounds = rounds_;
  t.decided_early = decided_;
  t.final_owner = owner_;
  t.maker_report = maker_ ? maker_->report() : nlohmann::json::object();
  t.breaker_report = breaker_ ? breaker_->report() : nlohmann::json::object();
  t.confinement = confinement_;
  return t;
}

MatchTranscript play_match(const MatchSpec& spec) {
  Match m(spec);
  m.advance();
  return m.transcript();
}

ReplayResult replay(const MatchTranscript& t) {
  Match m(t.spec, t.window, t.v0, true, true);
  std::size_t i = 0;
  while (i < t.moves.size()) {
    std::size_t j = i;
    std::vector<int> turn;
    while (j < t.moves.size() && t.moves[j].player == t.moves[i].player) turn.push_back(t.moves[j++].edge);
    if (t.moves[i].player != m.to_move()) throw IllegalMove("transcript moves out of turn order");
    m.apply_turn(turn);
    i = j;
  }
  ReplayResult r;
  r.final_owner = m.owner();
  r.outcome = m.outcome();
  r.rounds = m.rounds();
  r.matches = r.final_owner == t.final_owner && r.outcome == t.outcome && r.rounds == t.rounds;
  return r;
}

// ---- serialisation ---------------------------------------------------------

nlohmann::json to_json(const MatchTranscript& t, const WindowGraph& graph) {
  nlohmann::json moves = nlohmann::json::array();
  for (const Move& mv : t.moves) moves.push_back({std::string(1, owner_char(mv.player)), graph.edge(mv.edge).id});
  nlohmann::json j;
  j["spec"] = to_json(t.spec);
  j["window"] = {{"center", coords(t.window.center)}, {"radius", t.window.radius}};
  j["v0"] = coords(t.v0);
  j["moves"] = moves;
  j["outcome"] = to_string(t.outcome);
  j["rounds"] = t.rounds;
  j["decided_early"] = t.decided_early;
  j["final"] = encode_runs(t.final_owner);
  j["maker_report"] = t.maker_report;
  j["breaker_report"] = t.breaker_report;
  j["confinement"] = t.confinement ? nlohmann::json(*t.confinement) : nlohmann::json(nullptr);
  return j;
}

MatchTranscript transcript_from_json(const nlohmann::json& j) {
  MatchTranscript t;
  t.spec = spec_from_json(j.at("spec"));
  t.window = Window{vertex_from(j.at("window").at("center")), j.at("window").at("radius").get<int>()};
  WindowGraph graph(t.spec.kind, t.window);
  t.v0 = vertex_from(j.at("v0"));
  for (const auto& mv : j.at("moves")) {
    std::string who = mv.at(0).get<std::string>();
    int e = graph.edge_index(mv.at(1).get<EdgeId>());
    if (who.size() != 1 || e < 0) throw ParameterError("bad move in transcript");
    t.moves.push_back({owner_from_char(who[0]), e});
  }
  t.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  t.rounds = j.at("rounds").get<int>();
  t.decided_early = j.value("decided_early", false);
  t.final_owner = decode_runs(j.at("final").get<std::string>());
  t.maker_report = j.value("maker_report", nlohmann::json::object());
  t.breaker_report = j.value("breaker_report", nlohmann::json::object());
  if (j.contains("confinement") && !j["confinement"].is_null()) t.confinement = j["confinement"].get<int>();
  return t;
}

TrialSummary summarize(int trial, const MatchTranscript& t) {
  TrialSummary s;
  s.trial = trial;
  s.seed = t.spec.seed;
  s.outcome = t.outcome;
  s.rounds = t.rounds;
  s.v0 = t.v0;
  std::vector<std::string> parts;
  if (t.confinement) parts.push_back("m=" + std::to_string(*t.confinement));
  if (t.decided_early) parts.push_back("decided=1");
  auto flatten = [&](const char* prefix, const nlohmann::json& rep) {
    if (!rep.is_object()) return;
    for (auto it = rep.begin(); it != rep.end(); ++it)
      if (it->is_primitive()) parts.push_back(std::string(prefix) + it.key() + "=" + it->dump());
  };
  flatten("maker.", t.maker_report);
  flatten("breaker.", t.breaker_report);
  for (std::size_t i = 0; i < parts.size(); ++i) s.extra += (i ? ";" : "") + parts[i];
  return s;
}

std::vector<TrialSummary> run_trials(const MatchSpec& spec, int trials, std::uint64_t seed_base, int threads,
                                     std::vector<MatchTranscript>* transcripts) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  validate(spec);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, trials);
  std::vector<TrialSummary> out(trials);
  std::vector<MatchTranscript> ts(transcripts ? trials : 0);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      try {
        MatchSpec s = spec;
        s.seed = seed_base + static_cast<std::uint64_t>(i);
        MatchTranscript t = play_match(s);
        out[i] = summarize(i, t);
        if (transcripts) ts[i] = std::move(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (transcripts) *transcripts = std::move(ts);
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const TrialSummary> rows) {
  out << "# perc-arena v1\n";
  out << "trial,seed,outcome,rounds,v0x,v0y,extra\n";
  for (const auto& r : rows) {
    std::string extra = r.extra;
    std::replace(extra.begin(), extra.end(), ',', ' ');
    std::string quoted;
    for (char ch : extra) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    out << r.trial << ',' << r.seed << ',' << to_string(r.outcome) << ',' << r.rounds << ',' << r.v0.x() << ','
        << r.v0.y() << ",\"" << quoted << "\"\n";
  }
}

void write_transcripts_jsonl(std::ostream& out, std::span<const MatchTranscript> ts) {
  for (const auto& t : ts) {
    WindowGraph g(t.spec.kind, t.window);
    out << to_json(t, g).dump() << '\n';
  }
}

}  // namespace perc
