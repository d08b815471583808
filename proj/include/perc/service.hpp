#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "perc/engine.hpp"

namespace httplib {
class Server;
}

namespace perc {

struct ServiceConfig {
  std::chrono::seconds idle_timeout{30 * 60};
  int default_hint_length = 6;
  int max_radius = 64;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

// FNV-1a over ownership runs, v0, side to move and outcome.
std::uint64_t state_hash(const Match& match);
std::string hash_hex(std::uint64_t h);

// In-memory sessions. Mutations of one session are exclusive: a request that
// finds the session busy gets 409 instead of waiting.
class SessionManager {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionManager(ServiceConfig config = {});

  Reply create(const nlohmann::json& request);
  Reply get(const std::string& id);
  Reply move(const std::string& id, const nlohmann::json& request);
  Reply remove(const std::string& id);

  // Drops sessions idle for longer than the timeout. Called on every request.
  void evict_idle(Clock::time_point now);
  std::size_t size() const;

 private:
  struct Session {
    std::string id;
    Owner human = Owner::B;
    std::string ai;
    bool hints = false;
    int hint_length = 6;
    std::unique_ptr<Match> match;
    std::vector<int> ai_moves;  // AI claims of its latest turn(s), edge indices
    std::mutex mutate;
    mutable std::mutex view_mutex;
    nlohmann::json view;  // last published snapshot
    std::atomic<std::int64_t> last_used{0};
  };

  std::shared_ptr<Session> find(const std::string& id);
  nlohmann::json snapshot(const Session& s) const;
  std::string new_id();

  ServiceConfig config_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_ = 0;
};

// Per-edge Breaker potentials from walks of length N from v0 (N <= 10),
// keyed by edge id; edges with zero potential are omitted.
nlohmann::json danger_hints(const Match& match, int length);

void register_routes(httplib::Server& server, SessionManager& sessions);
// Blocks until the server stops. Returns false if binding failed.
bool serve(const std::string& bind, int port, SessionManager& sessions);

}  // namespace perc
