#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <thread>

#include "perc/service.hpp"

using namespace perc;
using nlohmann::json;

namespace {

json request(int m, int b, const std::string& human = "breaker", const std::string& strategy = "random") {
  return {{"lattice", "z2"}, {"radius", 6}, {"m", m}, {"b", b}, {"p", 0.8},
          {"seed", 7},       {"human_side", human}, {"strategy", strategy}};
}

// Lowest-id unclaimed edges, as many as the quota asks for.
json lowest_free(const json& state) {
  auto owner = decode_runs(state["ownership"].get<std::string>());
  json edges = json::array();
  const int quota = state["quota"];
  for (std::size_t e = 0; e < owner.size() && static_cast<int>(edges.size()) < quota; ++e)
    if (owner[e] == Owner::U) edges.push_back(state["edges"][e][0]);
  return edges;
}

// Rebuilds the match from the served spec and log, then hashes it.
std::string replayed_hash(const json& state) {
  MatchSpec spec = spec_from_json(state["spec"]);
  std::vector<int> c = state["window"]["center"].get<std::vector<int>>();
  Vertex center{c[0], c[1]};
  std::vector<int> v = state["v0"].get<std::vector<int>>();
  Match m(spec, Window{center, state["window"]["radius"].get<int>()}, Vertex{v[0], v[1]}, true, true);
  const auto& log = state["log"];
  std::size_t i = 0;
  while (i < log.size()) {
    std::vector<int> turn;
    const std::string who = log[i][0];
    while (i < log.size() && log[i][0] == who) turn.push_back(m.graph().edge_index(log[i++][1].get<EdgeId>()));
    m.apply_turn(turn);
  }
  return hash_hex(state_hash(m));
}

}  // namespace

TEST_CASE("creating sessions") {
  SessionManager sm;
  Reply r = sm.create(request(2, 1));
  REQUIRE(r.status == 200);
  CHECK(r.body["ai_moves"].size() == 2);
  CHECK(r.body["log"].size() == 2);
  CHECK(r.body["to_move"] == "breaker");
  CHECK(r.body["quota"] == 1);
  CHECK(r.body["outcome"] == "Ongoing");
  CHECK(r.body["v0"] == std::vector<int>{0, 0});
  CHECK(sm.get(r.body["id"]).body == r.body);
  CHECK(sm.size() == 1);

  json boosted = request(2, 1);
  boosted["c"] = 1;
  CHECK(sm.create(boosted).body["ai_moves"].size() == 3);

  Reply maker = sm.create(request(1, 2, "maker", "clump"));
  REQUIRE(maker.status == 200);
  CHECK(maker.body["to_move"] == "maker");
  CHECK(maker.body["ai_moves"].empty());
  CHECK(maker.body["quota"] == 1);

  auto bad = [&](json req) { return sm.create(req).status; };
  CHECK(bad(request(0, 1)) == 422);
  json ab = request(1, 1);
  ab.erase("p");
  ab["alpha"] = 0.6;
  ab["beta"] = 0.6;
  CHECK(bad(ab) == 422);
  CHECK(bad(request(1, 1, "breaker", "nobody")) == 422);
  CHECK(bad(request(1, 1, "breaker", "clump")) == 422);
  CHECK(bad(request(1, 1, "referee")) == 422);
  CHECK(bad(request(1, 2, "breaker", "composite-maker")) == 422);
  json big = request(1, 1);
  big["radius"] = 1000;
  CHECK(bad(big) == 422);
  json typed = request(1, 1);
  typed["m"] = "two";
  CHECK(bad(typed) == 422);
  CHECK(bad(json::array()) == 422);
  CHECK(sm.size() == 3);
}

TEST_CASE("moves") {
  SessionManager sm;
  json created = sm.create(request(2, 1)).body;
  const std::string id = created["id"];
  const std::string hash = created["state_hash"];

  // Claimed edge: 409, nothing changes.
  json taken = {{"edges", json::array({created["ai_moves"][0]})}};
  CHECK(sm.move(id, taken).status == 409);
  CHECK(sm.get(id).body["state_hash"] == hash);
  // Wrong count.
  CHECK(sm.move(id, {{"edges", json::array()}}).status == 409);
  CHECK(sm.move(id, {{"edges", "x"}}).status == 422);
  CHECK(sm.move(id, {{"edges", json::array({123456789})}}).status == 422);
  CHECK(sm.get(id).body["state_hash"] == hash);
  CHECK(sm.move("nope", {{"edges", json::array()}}).status == 404);
  CHECK(sm.get("nope").status == 404);

  // Stale log length.
  json stale = {{"edges", lowest_free(created)}, {"log_length", 0}};
  CHECK(sm.move(id, stale).status == 409);

  json state = created;
  std::size_t k = created["log"].size();
  for (int turn = 0; turn < 3 && state["outcome"] == "Ongoing"; ++turn) {
    json mv = {{"edges", lowest_free(state)}, {"log_length", state["log"].size()}};
    Reply r = sm.move(id, mv);
    REQUIRE(r.status == 200);
    k += 1 + r.body["ai_moves"].size();
    CHECK(r.body["log"].size() == k);
    CHECK(sm.get(id).body == r.body);
    state = r.body;
  }
  CHECK(replayed_hash(state) == state["state_hash"]);

  CHECK(sm.remove(id).status == 200);
  CHECK(sm.remove(id).status == 404);
  CHECK(sm.get(id).status == 404);
}

TEST_CASE("human Breaker finishes a cut") {
  SessionManager sm;
  json req = {{"lattice", "z2"}, {"center", {20, 20}}, {"radius", 5}, {"m", 1}, {"b", 4}, {"p", 1.0},
              {"human_side", "breaker"}, {"strategy", "pairing-z2"}};
  json s = sm.create(req).body;
  REQUIRE(s["outcome"] == "Ongoing");
  json star = json::array();
  for (const auto& e : s["edges"]) {
    auto u = e[1].get<std::vector<int>>(), v = e[2].get<std::vector<int>>();
    if (u == std::vector<int>{20, 20} || v == std::vector<int>{20, 20}) star.push_back(e[0]);
  }
  REQUIRE(star.size() == 4);
  for (const auto& e : s["ai_moves"]) CHECK(std::find(star.begin(), star.end(), e) == star.end());
  Reply r = sm.move(s["id"], {{"edges", star}});
  REQUIRE(r.status == 200);
  CHECK(r.body["outcome"] == "BreakerWin");
  CHECK(r.body["to_move"].is_null());
  CHECK(r.body["ai_moves"].empty());
  CHECK(sm.move(s["id"], {{"edges", json::array()}}).status == 409);
}

TEST_CASE("served state equals a replay of the log") {
  SessionManager sm;
  const char* strategies[] = {"random", "greedy", "composite-maker", "pairing-z2"};
  for (int i = 0; i < 100; ++i) {
    const bool human_maker = i % 3 == 0;
    json req = human_maker ? request(1 + i % 2, 1, "maker", i % 2 ? "shortest-cut" : "potential-breaker")
                           : request(2, 1, "breaker", strategies[i % 4]);
    req["seed"] = i;
    req["radius"] = 5 + i % 4;
    if (req["strategy"] == "pairing-z2") req["m"] = 1;
    Reply r = sm.create(req);
    REQUIRE(r.status == 200);
    json state = r.body;
    CHECK(replayed_hash(state) == state["state_hash"]);
    for (int turn = 0; turn < i % 7 && state["outcome"] == "Ongoing"; ++turn) {
      Reply next = sm.move(state["id"], {{"edges", lowest_free(state)}});
      REQUIRE(next.status == 200);
      state = next.body;
      CHECK(replayed_hash(state) == state["state_hash"]);
    }
  }
}

TEST_CASE("concurrent moves on one session: exactly one applies") {
  for (int round = 0; round < 20; ++round) {
    SessionManager sm;
    json s = sm.create(request(2, 1)).body;
    json mv = {{"edges", lowest_free(s)}};
    std::atomic<int> ok{0}, conflict{0};
    std::vector<std::thread> ts;
    for (int k = 0; k < 4; ++k)
      ts.emplace_back([&] {
        Reply r = sm.move(s["id"], mv);
        (r.status == 200 ? ok : conflict)++;
        if (r.status != 200) CHECK(r.status == 409);
      });
    for (auto& t : ts) t.join();
    CHECK(ok == 1);
    CHECK(conflict == 3);
  }
}

TEST_CASE("many sessions in parallel, and idle eviction") {
  ServiceConfig cfg;
  cfg.idle_timeout = std::chrono::seconds(60);
  SessionManager sm(cfg);
  std::vector<std::thread> ts;
  std::atomic<int> failures{0};
  for (int k = 0; k < 6; ++k)
    ts.emplace_back([&, k] {
      for (int i = 0; i < 5; ++i) {
        json req = request(2, 1);
        req["seed"] = 100 * k + i;
        Reply r = sm.create(req);
        if (r.status != 200) {
          ++failures;
          continue;
        }
        json st = r.body;
        for (int t = 0; t < 4 && st["outcome"] == "Ongoing"; ++t) {
          Reply n = sm.move(st["id"], {{"edges", lowest_free(st)}});
          if (n.status != 200) ++failures;
          st = n.body;
          if (replayed_hash(st) != st["state_hash"]) ++failures;
        }
      }
    });
  for (auto& t : ts) t.join();
  CHECK(failures == 0);
  CHECK(sm.size() == 30);
  sm.evict_idle(SessionManager::Clock::now());
  CHECK(sm.size() == 30);
  sm.evict_idle(SessionManager::Clock::now() + std::chrono::minutes(2));
  CHECK(sm.size() == 0);
}

TEST_CASE("danger hints") {
  SessionManager sm;
  json req = request(1, 1);
  req["hints"] = true;
  req["hint_length"] = 3;
  json s = sm.create(req).body;
  REQUIRE(s.contains("hints"));
  CHECK_FALSE(s["hints"].empty());
  auto owner = decode_runs(s["ownership"].get<std::string>());
  for (auto it = s["hints"].begin(); it != s["hints"].end(); ++it) {
    CHECK(it.value().get<double>() > 0);
    const EdgeId id = std::stoll(it.key());
    bool unclaimed = false;
    for (std::size_t e = 0; e < owner.size(); ++e)
      if (s["edges"][e][0] == id) unclaimed = owner[e] == Owner::U;
    CHECK(unclaimed);
  }
  req["hint_length"] = 11;
  CHECK(sm.create(req).status == 422);
  CHECK_FALSE(sm.create(request(1, 1)).body.contains("hints"));
}

TEST_CASE("HTTP interface") {
  SessionManager sm;
  httplib::Server server;
  register_routes(server, sm);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto created = cli.Post("/api/session", request(2, 1).dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 200);
  json s = json::parse(created->body);
  const std::string id = s["id"];

  auto got = cli.Get("/api/session/" + id);
  REQUIRE(got);
  CHECK(got->status == 200);
  CHECK(json::parse(got->body) == s);

  json mv = {{"edges", lowest_free(s)}};
  auto moved = cli.Post("/api/session/" + id + "/move", mv.dump(), "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  CHECK(json::parse(moved->body)["log"].size() == s["log"].size() + 1 + json::parse(moved->body)["ai_moves"].size());

  auto again = cli.Post("/api/session/" + id + "/move", mv.dump(), "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);
  json err = json::parse(again->body);
  CHECK(err["code"] == 409);
  CHECK(err["message"].is_string());

  auto junk = cli.Post("/api/session", "{not json", "application/json");
  REQUIRE(junk);
  CHECK(junk->status == 400);
  auto invalid = cli.Post("/api/session", request(0, 1).dump(), "application/json");
  REQUIRE(invalid);
  CHECK(invalid->status == 422);
  auto missing = cli.Get("/api/session/ffff");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["code"] == 404);

  auto del = cli.Delete("/api/session/" + id);
  REQUIRE(del);
  CHECK(del->status == 200);
  auto gone = cli.Get("/api/session/" + id);
  REQUIRE(gone);
  CHECK(gone->status == 404);

  auto pre = cli.Options("/api/session");
  REQUIRE(pre);
  CHECK(pre->status == 204);
  CHECK(pre->get_header_value("Access-Control-Allow-Origin") == "*");

  server.stop();
  th.join();
}
