#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "perc/board.hpp"
#include "perc/rng.hpp"

namespace perc {

struct IllegalMove : std::logic_error {
  using std::logic_error::logic_error;
};
struct NotComputable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Exhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GameRules {
  int m = 1;  // Maker claims per turn
  int b = 1;  // Breaker claims per turn
  int c = 0;  // extra claims on Maker's first turn

  int g() const { return m + b; }
  void validate() const;
  friend bool operator==(const GameRules&, const GameRules&) = default;
};

// Hypergraph of winning sets over elements 0..universe-1, with the
// element -> sets transpose built by finalize().
class WinningSetSystem {
 public:
  WinningSetSystem() = default;
  explicit WinningSetSystem(int universe) : universe_(universe) {}
  static WinningSetSystem from_sets(int universe, const std::vector<std::vector<int>>& sets);

  // Members are sorted and deduplicated; returns the set index.
  int add_set(std::span<const int> members);
  void finalize();

  int universe() const { return universe_; }
  int set_count() const { return static_cast<int>(off_.size()) - 1; }
  int max_set_size() const { return max_size_; }
  bool finalized() const { return finalized_; }

  std::span<const int> set(int i) const { return {mem_.data() + off_[i], mem_.data() + off_[i + 1]}; }
  std::span<const int> sets_containing(int v) const {
    return {inv_.data() + inv_off_[v], inv_.data() + inv_off_[v + 1]};
  }

 private:
  int universe_ = 0;
  int max_size_ = 0;
  bool finalized_ = false;
  std::vector<int> off_{0};
  std::vector<int> mem_;
  std::vector<int> inv_off_;
  std::vector<int> inv_;
};

// Elements are written as edge ids when a window graph is supplied.
nlohmann::json to_json(const WinningSetSystem& system, const WindowGraph* graph = nullptr);
WinningSetSystem system_from_json(const nlohmann::json& doc, int universe, const WindowGraph* graph = nullptr);

struct Residual {
  int count = 0;
  bool dead = false;

  static Residual live(int n) { return {n, false}; }
  static Residual killed() { return {0, true}; }
  friend bool operator==(const Residual&, const Residual&) = default;
};

Residual residual(std::span<const Owner> sigma, std::span<const int> set);
// Direct evaluations, used as from-scratch references for the ledger.
double total_danger(std::span<const Owner> sigma, const WinningSetSystem& system, double lambda);
double potential_breaker(std::span<const Owner> sigma, const WinningSetSystem& system, double lambda, int v);
double potential_maker(std::span<const Owner> sigma, const WinningSetSystem& system, double lambda, int v);
// Counts of live sets by residual.
std::vector<std::int64_t> residual_histogram(std::span<const Owner> sigma, const WinningSetSystem& system);
// Sum of hist[r] * lambda^r with compensated summation.
double evaluate_histogram(std::span<const std::int64_t> hist, double lambda);

// Residuals, total danger and Breaker potentials kept under single claims.
// Danger is stored as integer counts per residual value (for the total and
// for every unclaimed element), so incremental updates are exact and agree
// bit-for-bit with a ledger rebuilt from scratch.
// The system must outlive the ledger.
class DangerLedger {
 public:
  DangerLedger(const WinningSetSystem& system, std::span<const Owner> sigma, double lambda);

  double lambda() const { return lambda_; }
  const WinningSetSystem& system() const { return *system_; }
  const std::vector<Owner>& sigma() const { return sigma_; }
  Owner owner(int v) const { return sigma_[v]; }

  Residual residual(int set) const {
    return res_[set] < 0 ? Residual::killed() : Residual::live(res_[set]);
  }
  double total() const;
  double potential_breaker(int v) const;
  double potential_maker(int v) const;
  // Potential without the unclaimed precondition (0 for claimed elements).
  double raw_potential(int v) const { return pot_[v]; }

  void claim(Owner who, int v);

  bool maker_completed() const { return total_hist_[0] > 0; }
  int live_sets() const { return live_; }
  int unclaimed() const { return unclaimed_; }
  const std::vector<std::int64_t>& histogram() const { return total_hist_; }

 private:
  void refresh(int v);

  const WinningSetSystem* system_;
  double lambda_;
  int width_;  // max residual + 1
  std::vector<Owner> sigma_;
  std::vector<int> res_;  // -1 = dead
  std::vector<std::int64_t> total_hist_;
  std::vector<std::int32_t> hist_;  // element-major, width_ per element
  std::vector<double> pot_;
  std::vector<double> pow_;
  int live_ = 0;
  int unclaimed_ = 0;
};

void apply_claim(std::vector<Owner>& sigma, DangerLedger& ledger, Owner who, int v);

// Unclaimed element of maximum Breaker potential; ties within 1e-12 relative
// go to the smallest index.
int greedy_breaker_choice(const DangerLedger& ledger);

struct BeckCertificate {
  bool pass = false;
  double lambda = 0;
  double bound = 0;
  double total = 0;
};

double beck_lambda(const GameRules& rules);
BeckCertificate beck_certificate(std::span<const Owner> sigma0, const WinningSetSystem& system, const GameRules& rules);

struct HyperTurn {
  std::span<const Owner> sigma;
  std::span<const int> opponent_moves;  // claims made by the opponent since our last turn
  int quota = 0;
  int turn = 0;  // 1-based count of this player's turns
};

class HyperPlayer {
 public:
  virtual ~HyperPlayer() = default;
  virtual void start(std::span<const Owner> /*sigma0*/) {}
  virtual std::vector<int> play(const HyperTurn& turn) = 0;
};

// Greedy potential Breaker over a fixed system.
class GreedyHyperBreaker : public HyperPlayer {
 public:
  GreedyHyperBreaker(const WinningSetSystem& system, double lambda) : system_(&system), lambda_(lambda) {}
  void start(std::span<const Owner> sigma0) override;
  std::vector<int> play(const HyperTurn& turn) override;
  const DangerLedger& ledger() const { return *ledger_; }

 private:
  const WinningSetSystem* system_;
  double lambda_;
  std::unique_ptr<DangerLedger> ledger_;
};

// Uniform over unclaimed elements, optionally restricted to a support set.
class RandomHyperPlayer : public HyperPlayer {
 public:
  explicit RandomHyperPlayer(std::uint64_t seed, std::vector<int> support = {})
      : rng_(seed), support_(std::move(support)) {}
  std::vector<int> play(const HyperTurn& turn) override;

 private:
  SplitMix64 rng_;
  std::vector<int> support_;
};

// Maker that claims the unclaimed element of largest Maker potential.
class GreedyHyperMaker : public HyperPlayer {
 public:
  GreedyHyperMaker(const WinningSetSystem& system, double lambda) : system_(&system), lambda_(lambda) {}
  void start(std::span<const Owner> sigma0) override;
  std::vector<int> play(const HyperTurn& turn) override;

 private:
  const WinningSetSystem* system_;
  double lambda_;
  std::unique_ptr<DangerLedger> ledger_;
};

enum class HyperWinner { maker, breaker, undecided };

struct HyperOutcome {
  HyperWinner winner = HyperWinner::undecided;
  int rounds = 0;
  std::vector<std::pair<Owner, int>> moves;
  // Total danger at lambda = (b+1)^(-1/m): initial value, then after each Maker turn.
  std::vector<double> maker_turn_danger;
  std::vector<Owner> final_sigma;
};

HyperOutcome hyper_match(const WinningSetSystem& system, const GameRules& rules, std::span<const Owner> sigma0,
                         HyperPlayer& maker, HyperPlayer& breaker, int max_rounds = 1 << 30);

}  // namespace perc
