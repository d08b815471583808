#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "perc/board.hpp"
#include "perc/hypergame.hpp"
#include "perc/lattice.hpp"
#include "perc/strategies.hpp"

namespace perc {

struct MatchSpec {
  LatticeKind kind = LatticeKind::z2();
  Window window{Vertex::origin(2), 8};
  GameRules rules;
  std::optional<double> p;  // bond board; otherwise (alpha, beta)
  double alpha = 0;
  double beta = 0;
  std::string maker = "random";
  std::string breaker = "random";
  StrategyParams params;  // shared strategy knobs; seeds are derived per side
  std::uint64_t seed = 0;
  int max_rounds = 0;  // 0 = until the board is exhausted
  // Clump Breaker only: sample B_{confine_max}, find m, then play on B_m.
  bool fit_window = false;
  // Stop once Maker owns a v0 -> boundary path (the truncated outcome is then fixed).
  bool stop_when_decided = true;
};

nlohmann::json to_json(const MatchSpec& spec);
MatchSpec spec_from_json(const nlohmann::json& doc);
void validate(const MatchSpec& spec);

// Board of a spec on an arbitrary window (draws do not depend on the window).
GameConfiguration sample_board(const MatchSpec& spec, const Window& w);

enum class Outcome { ongoing, breaker_win, maker_survived, exhausted };
std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

enum class Adjudication { separated, connected };
// SEPARATED iff v0 has no non-Breaker path to the window boundary.
Adjudication adjudicate(const WindowGraph& graph, std::span<const Owner> owner, int v0);

struct Move {
  Owner player = Owner::U;
  int edge = 0;  // window edge index
};

struct MatchTranscript {
  MatchSpec spec;
  Window window;  // the window actually played (differs from spec.window in fit mode)
  Vertex v0;
  std::vector<Move> moves;
  Outcome outcome = Outcome::ongoing;
  int rounds = 0;
  bool decided_early = false;
  std::vector<Owner> final_owner;
  nlohmann::json maker_report;
  nlohmann::json breaker_report;
  std::optional<int> confinement;  // fit-window radius
};

nlohmann::json to_json(const MatchTranscript& t, const WindowGraph& graph);
MatchTranscript transcript_from_json(const nlohmann::json& doc);

// One game in progress. Either side may be driven externally (null strategy).
class Match {
 public:
  explicit Match(const MatchSpec& spec);
  Match(const MatchSpec& spec, bool maker_external, bool breaker_external);
  // Rebuild from a transcript-style description without running strategies.
  Match(const MatchSpec& spec, const Window& window, const Vertex& v0, bool maker_external, bool breaker_external);

  const MatchSpec& spec() const { return spec_; }
  const WindowGraph& graph() const { return *graph_; }
  std::shared_ptr<const WindowGraph> graph_ptr() const { return graph_; }
  const std::vector<Owner>& owner() const { return owner_; }
  const std::vector<Owner>& initial_owner() const { return initial_; }
  int v0() const { return v0_; }
  const std::vector<Move>& moves() const { return moves_; }
  Outcome outcome() const { return outcome_; }
  bool over() const { return outcome_ != Outcome::ongoing; }
  bool decided_early() const { return decided_; }
  int rounds() const { return rounds_; }
  Owner to_move() const { return to_move_; }
  int maker_turn() const { return maker_turns_ + (to_move_ == Owner::M ? 1 : 0); }
  int quota() const;
  int unclaimed() const { return unclaimed_; }
  std::optional<int> confinement() const { return confinement_; }
  bool external(Owner side) const;

  // Applies one complete turn for the side to move. Throws IllegalMove (board unchanged) on bad input.
  void apply_turn(std::span<const int> edges);
  // Lets the built-in strategy of the side to move play its turn.
  void step();
  // Steps until the game ends or an external side must move.
  void advance();

  MatchTranscript transcript() const;

 private:
  void init(bool maker_external, bool breaker_external, const Window* fixed, const Vertex* v0);
  void check_turn(std::span<const int> edges) const;
  void settle_after(Owner who);

  MatchSpec spec_;
  std::shared_ptr<const WindowGraph> graph_;
  std::vector<Owner> initial_;
  std::vector<Owner> owner_;
  std::unique_ptr<Strategy> maker_;
  std::unique_ptr<Strategy> breaker_;
  bool maker_external_ = false;
  bool breaker_external_ = false;
  int v0_ = 0;
  std::vector<Move> moves_;
  std::vector<int> last_maker_;
  std::vector<int> last_breaker_;
  bool maker_started_ = false;
  bool breaker_started_ = false;
  Owner to_move_ = Owner::M;
  int maker_turns_ = 0;
  int breaker_turns_ = 0;
  int rounds_ = 0;
  int unclaimed_ = 0;
  Outcome outcome_ = Outcome::ongoing;
  bool decided_ = false;
  std::optional<int> confinement_;
};

MatchTranscript play_match(const MatchSpec& spec);

struct ReplayResult {
  std::vector<Owner> final_owner;
  Outcome outcome = Outcome::ongoing;
  int rounds = 0;
  bool matches = false;  // final board and outcome equal the transcript's
};

// Replays the recorded moves through the rules (strategies are not consulted).
ReplayResult replay(const MatchTranscript& t);

struct TrialSummary {
  int trial = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::ongoing;
  int rounds = 0;
  Vertex v0;
  std::string extra;  // key=value pairs separated by ';'
};

TrialSummary summarize(int trial, const MatchTranscript& t);

// Trial i plays spec with seed seed_base + i. threads <= 0 uses the hardware count.
std::vector<TrialSummary> run_trials(const MatchSpec& spec, int trials, std::uint64_t seed_base, int threads = 1,
                                     std::vector<MatchTranscript>* transcripts = nullptr);

void write_summary_csv(std::ostream& out, std::span<const TrialSummary> rows);
void write_transcripts_jsonl(std::ostream& out, std::span<const MatchTranscript> ts);

}  // namespace perc
