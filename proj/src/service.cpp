#include "perc/service.hpp"

#include <httplib.h>

#include <cstdio>
#include <random>

#include "perc/enumerate.hpp"
#include "perc/hypergame.hpp"
#include "perc/rng.hpp"

namespace perc {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv(std::uint64_t& h, const std::string& s) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= kFnvPrime;
  }
}

nlohmann::json coords(const Vertex& v) { return std::vector<int>(v.c.begin(), v.c.begin() + v.dim); }

Reply error(int status, const std::string& message) { return {status, {{"code", status}, {"message", message}}}; }

std::string side_string(Owner o) { return o == Owner::M ? "maker" : "breaker"; }

std::int64_t ticks(SessionManager::Clock::time_point t) { return t.time_since_epoch().count(); }

}  // namespace

std::uint64_t state_hash(const Match& match) {
  std::uint64_t h = kFnvOffset;
  fnv(h, encode_runs(match.owner()));
  fnv(h, "|" + to_string(match.graph().vertex(match.v0())));
  fnv(h, std::string("|") + (match.over() ? '-' : owner_char(match.to_move())));
  fnv(h, "|" + to_string(match.outcome()));
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json danger_hints(const Match& match, int length) {
  const WindowGraph& g = match.graph();
  const Vertex& v0 = g.vertex(match.v0());
  int room = g.radius();
  for (int i = 0; i < v0.dim; ++i) room = std::min(room, g.radius() - std::abs(v0[i] - g.window().center[i]));
  const int n = std::min({length, room, 10, default_saw_cap(g.kind())});
  nlohmann::json hints = nlohmann::json::object();
  if (n < 1) return hints;
  SawSet saws = enumerate_saws(g, v0, n);
  WinningSetSystem sys = build_path_system(saws, g.edge_count());
  DangerLedger ledger(sys, match.owner(), beck_lambda(match.spec().rules));
  for (int e = 0; e < g.edge_count(); ++e) {
    if (match.owner()[e] != Owner::U) continue;
    double p = ledger.raw_potential(e);
    if (p > 0) hints[std::to_string(g.edge(e).id)] = p;
  }
  return hints;
}

SessionManager::SessionManager(ServiceConfig config) : config_(config) {
  std::random_device rd;
  salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string SessionManager::new_id() {
  std::uint64_t n;
  {
    std::unique_lock lock(map_mutex_);
    n = ++counter_;
  }
  return hash_hex(mix64(salt_ ^ mix64(n)));
}

std::size_t SessionManager::size() const {
  std::shared_lock lock(map_mutex_);
  return sessions_.size();
}

void SessionManager::evict_idle(Clock::time_point now) {
  const auto limit = std::chrono::duration_cast<Clock::duration>(config_.idle_timeout).count();
  std::unique_lock lock(map_mutex_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (ticks(now) - it->second->last_used.load() > limit)
      it = sessions_.erase(it);
    else
      ++it;
  }
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) {
  std::shared_lock lock(map_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->last_used = ticks(Clock::now());
  return it->second;
}

nlohmann::json SessionManager::snapshot(const Session& s) const {
  const Match& m = *s.match;
  const WindowGraph& g = m.graph();
  nlohmann::json edges = nlohmann::json::array(), log = nlohmann::json::array(), ai = nlohmann::json::array();
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    edges.push_back({ed.id, coords(ed.u), coords(ed.v)});
  }
  for (const Move& mv : m.moves()) log.push_back({std::string(1, owner_char(mv.player)), g.edge(mv.edge).id});
  for (int e : s.ai_moves) ai.push_back(g.edge(e).id);
  nlohmann::json j;
  j["id"] = s.id;
  j["spec"] = to_json(m.spec());
  j["window"] = {{"center", coords(g.window().center)}, {"radius", g.radius()}};
  j["human_side"] = side_string(s.human);
  j["ai_strategy"] = s.ai;
  j["rules"] = {{"m", m.spec().rules.m}, {"b", m.spec().rules.b}, {"c", m.spec().rules.c}};
  j["v0"] = coords(g.vertex(m.v0()));
  j["to_move"] = m.over() ? nlohmann::json(nullptr) : nlohmann::json(side_string(m.to_move()));
  j["quota"] = m.quota();
  j["turn"] = m.maker_turn();
  j["rounds"] = m.rounds();
  j["outcome"] = to_string(m.outcome());
  j["ownership"] = encode_runs(m.owner());
  j["edges"] = edges;
  j["log"] = log;
  j["ai_moves"] = ai;
  j["state_hash"] = hash_hex(state_hash(m));
  if (s.hints) j["hints"] = danger_hints(m, s.hint_length);
  return j;
}

Reply SessionManager::create(const nlohmann::json& req) {
  evict_idle(Clock::now());
  auto session = std::make_shared<Session>();
  try {
    if (!req.is_object()) return error(422, "request must be a JSON object");
    std::string human = req.value("human_side", std::string("breaker"));
    if (human != "maker" && human != "breaker") return error(422, "human_side must be 'maker' or 'breaker'");
    session->human = human == "maker" ? Owner::M : Owner::B;
    MatchSpec spec = spec_from_json(req);
    std::string ai = req.value("strategy", std::string("random"));
    if (session->human == Owner::M) {
      spec.breaker = ai;
      spec.maker = "random";
    } else {
      spec.maker = ai;
      spec.breaker = "random";
    }
    spec.fit_window = false;
    spec.stop_when_decided = req.value("stop_when_decided", false);
    if (spec.window.radius > config_.max_radius)
      return error(422, "radius above the service limit " + std::to_string(config_.max_radius));
    session->ai = ai;
    session->hints = req.value("hints", false);
    session->hint_length = req.value("hint_length", config_.default_hint_length);
    if (session->hint_length < 1 || session->hint_length > 10) return error(422, "hint_length must be in 1..10");
    session->match =
        std::make_unique<Match>(spec, session->human == Owner::M, session->human == Owner::B);
    std::size_t before = session->match->moves().size();
    session->match->advance();
    for (std::size_t i = before; i < session->match->moves().size(); ++i)
      session->ai_moves.push_back(session->match->moves()[i].edge);
  } catch (const nlohmann::json::exception& e) {
    return error(422, std::string("malformed parameters: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error(422, e.what());
  } catch (const std::logic_error& e) {
    return error(422, e.what());
  }
  session->id = new_id();
  session->last_used = ticks(Clock::now());
  session->view = snapshot(*session);
  Reply r{200, session->view};
  std::unique_lock lock(map_mutex_);
  sessions_[session->id] = session;
  return r;
}

Reply SessionManager::get(const std::string& id) {
  evict_idle(Clock::now());
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  std::lock_guard<std::mutex> lock(s->view_mutex);
  return {200, s->view};
}

Reply SessionManager::move(const std::string& id, const nlohmann::json& req) {
  evict_idle(Clock::now());
  auto s = find(id);
  if (!s) return error(404, "unknown session");
  std::unique_lock<std::mutex> busy(s->mutate, std::try_to_lock);
  if (!busy.owns_lock()) return error(409, "session is busy");
  Match& m = *s->match;
  std::vector<int> edges;
  try {
    if (!req.is_object() || !req.contains("edges") || !req["edges"].is_array())
      return error(422, "body must carry an 'edges' array");
    if (req.contains("log_length") && req["log_length"].get<std::size_t>() != m.moves().size())
      return error(409, "stale state: log length differs");
    for (const auto& v : req["edges"]) {
      int e = m.graph().edge_index(v.get<EdgeId>());
      if (e < 0) return error(422, "edge " + v.dump() + " is not in the window");
      edges.push_back(e);
    }
  } catch (const nlohmann::json::exception& e) {
    return error(422, std::string("malformed move: ") + e.what());
  }
  if (m.over()) return error(409, "the game is over");
  if (m.to_move() != s->human) return error(409, "not your turn");
  try {
    m.apply_turn(edges);
  } catch (const IllegalMove& e) {
    return error(409, e.what());
  }
  s->ai_moves.clear();
  std::size_t before = m.moves().size();
  try {
    m.advance();
  } catch (const std::exception& e) {
    return error(500, std::string("strategy failure: ") + e.what());
  }
  for (std::size_t i = before; i < m.moves().size(); ++i) s->ai_moves.push_back(m.moves()[i].edge);
  nlohmann::json view = snapshot(*s);
  {
    std::lock_guard<std::mutex> lock(s->view_mutex);
    s->view = view;
  }
  return {200, view};
}

Reply SessionManager::remove(const std::string& id) {
  evict_idle(Clock::now());
  std::unique_lock lock(map_mutex_);
  if (sessions_.erase(id) == 0) return error(404, "unknown session");
  return {200, {{"deleted", id}}};
}

void register_routes(httplib::Server& server, SessionManager& sessions) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req, nlohmann::json& out) {
    if (req.body.empty()) {
      out = nlohmann::json::object();
      return true;
    }
    out = nlohmann::json::parse(req.body, nullptr, false);
    return !out.is_discarded();
  };
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Post("/api/session", [&, send, parse](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    if (!parse(req, body)) return send(res, error(400, "body is not valid JSON"));
    send(res, sessions.create(body));
  });
  server.Get(R"(/api/session/([A-Za-z0-9]+))", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, sessions.get(req.matches[1]));
  });
  server.Post(R"(/api/session/([A-Za-z0-9]+)/move)",
              [&, send, parse](const httplib::Request& req, httplib::Response& res) {
                nlohmann::json body;
                if (!parse(req, body)) return send(res, error(400, "body is not valid JSON"));
                send(res, sessions.move(req.matches[1], body));
              });
  server.Delete(R"(/api/session/([A-Za-z0-9]+))", [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, sessions.remove(req.matches[1]));
  });
}

bool serve(const std::string& bind, int port, SessionManager& sessions) {
  httplib::Server server;
  register_routes(server, sessions);
  return server.listen(bind, port);
}

}  // namespace perc
