#include "perc/hypergame.hpp"

#include <algorithm>
#include <cmath>

namespace perc {

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0, carry = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

template <class Count>
double eval_counts(const Count* counts, int width, const std::vector<double>& pow) {
  CompensatedSum acc;
  for (int r = width - 1; r >= 0; --r)
    if (counts[r]) acc.add(static_cast<double>(counts[r]) * pow[r]);
  return acc.value();
}

std::vector<double> pow_table(double lambda, int width) {
  std::vector<double> p(std::max(width, 1));
  for (int r = 0; r < static_cast<int>(p.size()); ++r) p[r] = std::pow(lambda, r);
  return p;
}

void check_lambda(double lambda) {
  if (!(lambda > 0 && lambda < 1)) throw ParameterError("lambda must lie in (0,1)");
}

void check_unclaimed(std::span<const Owner> sigma, int v) {
  if (v < 0 || v >= static_cast<int>(sigma.size())) throw IllegalMove("element out of range");
  if (sigma[v] != Owner::U) throw IllegalMove("element " + std::to_string(v) + " is already claimed");
}

}  // namespace

void GameRules::validate() const {
  if (m < 1) throw ParameterError("m must be at least 1");
  if (b < 1) throw ParameterError("b must be at least 1");
  if (c < 0) throw ParameterError("boost must be non-negative");
}

WinningSetSystem WinningSetSystem::from_sets(int universe, const std::vector<std::vector<int>>& sets) {
  WinningSetSystem s(universe);
  for (const auto& set : sets) s.add_set(set);
  s.finalize();
  return s;
}

int WinningSetSystem::add_set(std::span<const int> members) {
  if (members.empty()) throw ParameterError("winning sets must be nonempty");
  std::size_t start = mem_.size();
  mem_.insert(mem_.end(), members.begin(), members.end());
  std::sort(mem_.begin() + start, mem_.end());
  mem_.erase(std::unique(mem_.begin() + start, mem_.end()), mem_.end());
  if (mem_[start] < 0 || mem_.back() >= universe_) {
    mem_.resize(start);
    throw ParameterError("winning set member outside the universe");
  }
  max_size_ = std::max(max_size_, static_cast<int>(mem_.size() - start));
  off_.push_back(static_cast<int>(mem_.size()));
  finalized_ = false;
  return set_count() - 1;
}

void WinningSetSystem::finalize() {
  inv_off_.assign(universe_ + 1, 0);
  for (int x : mem_) ++inv_off_[x + 1];
  for (int v = 0; v < universe_; ++v) inv_off_[v + 1] += inv_off_[v];
  inv_.assign(mem_.size(), 0);
  std::vector<int> fill(inv_off_.begin(), inv_off_.end() - 1);
  for (int s = 0; s < set_count(); ++s)
    for (int x : set(s)) inv_[fill[x]++] = s;
  finalized_ = true;
}

nlohmann::json to_json(const WinningSetSystem& system, const WindowGraph* graph) {
  nlohmann::json sets = nlohmann::json::array();
  for (int s = 0; s < system.set_count(); ++s) {
    nlohmann::json one = nlohmann::json::array();
    for (int x : system.set(s)) {
      if (graph)
        one.push_back(graph->edge(x).id);
      else
        one.push_back(x);
    }
    sets.push_back(std::move(one));
  }
  return {{"sets", std::move(sets)}};
}

WinningSetSystem system_from_json(const nlohmann::json& doc, int universe, const WindowGraph* graph) {
  WinningSetSystem s(universe);
  for (const auto& one : doc.at("sets")) {
    std::vector<int> members;
    for (const auto& x : one) {
      if (graph) {
        int e = graph->edge_index(x.get<EdgeId>());
        if (e < 0) throw ParameterError("edge id outside the window");
        members.push_back(e);
      } else {
        members.push_back(x.get<int>());
      }
    }
    s.add_set(members);
  }
  s.finalize();
  return s;
}

Residual residual(std::span<const Owner> sigma, std::span<const int> set) {
  int n = 0;
  for (int x : set) {
    if (sigma[x] == Owner::B) return Residual::killed();
    if (sigma[x] == Owner::U) ++n;
  }
  return Residual::live(n);
}

double total_danger(std::span<const Owner> sigma, const WinningSetSystem& system, double lambda) {
  check_lambda(lambda);
  CompensatedSum acc;
  for (int s = 0; s < system.set_count(); ++s) {
    Residual r = residual(sigma, system.set(s));
    if (!r.dead) acc.add(std::pow(lambda, r.count));
  }
  return acc.value();
}

double potential_breaker(std::span<const Owner> sigma, const WinningSetSystem& system, double lambda, int v) {
  check_lambda(lambda);
  check_unclaimed(sigma, v);
  CompensatedSum acc;
  for (int s : system.sets_containing(v)) {
    Residual r = residual(sigma, system.set(s));
    if (!r.dead) acc.add(std::pow(lambda, r.count));
  }
  return acc.value();
}

double potential_maker(std::span<const Owner> sigma, const WinningSetSystem& system, double lambda, int v) {
  return (1.0 / lambda - 1.0) * potential_breaker(sigma, system, lambda, v);
}

std::vector<std::int64_t> residual_histogram(std::span<const Owner> sigma, const WinningSetSystem& system) {
  std::vector<std::int64_t> hist(system.max_set_size() + 1, 0);
  for (int s = 0; s < system.set_count(); ++s) {
    Residual r = residual(sigma, system.set(s));
    if (!r.dead) ++hist[r.count];
  }
  return hist;
}

double evaluate_histogram(std::span<const std::int64_t> hist, double lambda) {
  auto pow = pow_table(lambda, static_cast<int>(hist.size()));
  return eval_counts(hist.data(), static_cast<int>(hist.size()), pow);
}

DangerLedger::DangerLedger(const WinningSetSystem& system, std::span<const Owner> sigma, double lambda)
    : system_(&system), lambda_(lambda), width_(system.max_set_size() + 1), sigma_(sigma.begin(), sigma.end()) {
  check_lambda(lambda);
  if (!system.finalized()) throw std::logic_error("winning set system is not finalized");
  if (static_cast<int>(sigma_.size()) != system.universe())
    throw ParameterError("configuration size does not match the set system universe");
  pow_ = pow_table(lambda, width_);
  const int n = system.universe();
  res_.assign(system.set_count(), 0);
  total_hist_.assign(width_, 0);
  hist_.assign(static_cast<std::size_t>(n) * width_, 0);
  pot_.assign(n, 0.0);
  for (int s = 0; s < system.set_count(); ++s) {
    Residual r = perc::residual(sigma_, system.set(s));
    if (r.dead) {
      res_[s] = -1;
      continue;
    }
    res_[s] = r.count;
    ++live_;
    ++total_hist_[r.count];
    for (int x : system.set(s))
      if (sigma_[x] == Owner::U) ++hist_[static_cast<std::size_t>(x) * width_ + r.count];
  }
  for (int v = 0; v < n; ++v) {
    if (sigma_[v] == Owner::U) ++unclaimed_;
    refresh(v);
  }
}

void DangerLedger::refresh(int v) {
  pot_[v] = sigma_[v] == Owner::U ? eval_counts(&hist_[static_cast<std::size_t>(v) * width_], width_, pow_) : 0.0;
}

double DangerLedger::total() const { return eval_counts(total_hist_.data(), width_, pow_); }

double DangerLedger::potential_breaker(int v) const {
  check_unclaimed(sigma_, v);
  return pot_[v];
}

double DangerLedger::potential_maker(int v) const { return (1.0 / lambda_ - 1.0) * potential_breaker(v); }

void DangerLedger::claim(Owner who, int v) {
  if (who == Owner::U) throw IllegalMove("claims must be made by Maker or Breaker");
  check_unclaimed(sigma_, v);
  std::vector<int> touched;
  for (int s : system_->sets_containing(v)) {
    int r = res_[s];
    if (r < 0) continue;
    if (who == Owner::B) {
      res_[s] = -1;
      --live_;
      --total_hist_[r];
      for (int x : system_->set(s)) {
        if (sigma_[x] != Owner::U || x == v) continue;
        --hist_[static_cast<std::size_t>(x) * width_ + r];
        touched.push_back(x);
      }
    } else {
      res_[s] = r - 1;
      --total_hist_[r];
      ++total_hist_[r - 1];
      for (int x : system_->set(s)) {
        if (sigma_[x] != Owner::U || x == v) continue;
        auto* row = &hist_[static_cast<std::size_t>(x) * width_];
        --row[r];
        ++row[r - 1];
        touched.push_back(x);
      }
    }
  }
  sigma_[v] = who;
  --unclaimed_;
  std::fill_n(&hist_[static_cast<std::size_t>(v) * width_], width_, 0);
  pot_[v] = 0.0;
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (int x : touched) refresh(x);
}

void apply_claim(std::vector<Owner>& sigma, DangerLedger& ledger, Owner who, int v) {
  check_unclaimed(sigma, v);
  ledger.claim(who, v);
  sigma[v] = who;
}

int greedy_breaker_choice(const DangerLedger& ledger) {
  const auto& sigma = ledger.sigma();
  double best = -1;
  for (std::size_t v = 0; v < sigma.size(); ++v)
    if (sigma[v] == Owner::U) best = std::max(best, ledger.raw_potential(static_cast<int>(v)));
  if (best < 0) throw Exhausted("no unclaimed elements");
  const double floor = best - 1e-12 * best;
  for (std::size_t v = 0; v < sigma.size(); ++v)
    if (sigma[v] == Owner::U && ledger.raw_potential(static_cast<int>(v)) >= floor) return static_cast<int>(v);
  throw Exhausted("no unclaimed elements");
}

double beck_lambda(const GameRules& rules) {
  rules.validate();
  return std::pow(static_cast<double>(rules.b + 1), -1.0 / rules.m);
}

BeckCertificate beck_certificate(std::span<const Owner> sigma0, const WinningSetSystem& system, const GameRules& rules) {
  BeckCertificate cert;
  cert.lambda = beck_lambda(rules);
  cert.bound = std::pow(static_cast<double>(rules.b + 1), -static_cast<double>(rules.m + rules.c) / rules.m);
  cert.total = total_danger(sigma0, system, cert.lambda);
  if (!std::isfinite(cert.total)) throw NotComputable("danger sum is not finite");
  cert.pass = cert.total < cert.bound;
  return cert;
}

void GreedyHyperBreaker::start(std::span<const Owner> sigma0) {
  ledger_ = std::make_unique<DangerLedger>(*system_, sigma0, lambda_);
}

std::vector<int> GreedyHyperBreaker::play(const HyperTurn& turn) {
  for (int v : turn.opponent_moves) ledger_->claim(Owner::M, v);
  std::vector<int> out;
  for (int k = 0; k < turn.quota && ledger_->unclaimed() > 0; ++k) {
    int v = greedy_breaker_choice(*ledger_);
    ledger_->claim(Owner::B, v);
    out.push_back(v);
  }
  return out;
}

std::vector<int> RandomHyperPlayer::play(const HyperTurn& turn) {
  std::vector<int> pool;
  auto collect = [&](auto&& range) {
    for (int v : range)
      if (turn.sigma[v] == Owner::U) pool.push_back(v);
  };
  if (!support_.empty()) collect(support_);
  std::vector<int> out;
  auto draw = [&](int want) {
    while (want-- > 0 && !pool.empty()) {
      std::size_t i = rng_.below(pool.size());
      out.push_back(pool[i]);
      pool[i] = pool.back();
      pool.pop_back();
    }
  };
  draw(turn.quota);
  if (static_cast<int>(out.size()) < turn.quota) {
    pool.clear();
    for (int v = 0; v < static_cast<int>(turn.sigma.size()); ++v)
      if (turn.sigma[v] == Owner::U && std::find(out.begin(), out.end(), v) == out.end()) pool.push_back(v);
    draw(turn.quota - static_cast<int>(out.size()));
  }
  return out;
}

void GreedyHyperMaker::start(std::span<const Owner> sigma0) {
  ledger_ = std::make_unique<DangerLedger>(*system_, sigma0, lambda_);
}

std::vector<int> GreedyHyperMaker::play(const HyperTurn& turn) {
  for (int v : turn.opponent_moves) ledger_->claim(Owner::B, v);
  std::vector<int> out;
  for (int k = 0; k < turn.quota && ledger_->unclaimed() > 0; ++k) {
    int v = greedy_breaker_choice(*ledger_);
    ledger_->claim(Owner::M, v);
    out.push_back(v);
  }
  return out;
}

HyperOutcome hyper_match(const WinningSetSystem& system, const GameRules& rules, std::span<const Owner> sigma0,
                         HyperPlayer& maker, HyperPlayer& breaker, int max_rounds) {
  rules.validate();
  HyperOutcome out;
  DangerLedger ledger(system, sigma0, beck_lambda(rules));
  std::vector<Owner> sigma(sigma0.begin(), sigma0.end());
  out.maker_turn_danger.push_back(ledger.total());
  auto finish = [&](HyperWinner w, int round) {
    out.winner = w;
    out.rounds = round;
    out.final_sigma = sigma;
    return out;
  };
  if (ledger.maker_completed()) return finish(HyperWinner::maker, 0);
  if (ledger.live_sets() == 0) return finish(HyperWinner::breaker, 0);

  maker.start(sigma0);
  breaker.start(sigma0);
  std::vector<int> last_maker, last_breaker;
  auto run_turn = [&](HyperPlayer& p, Owner who, int quota, std::span<const int> opp, int round) {
    quota = std::min(quota, ledger.unclaimed());
    std::vector<int> moves = p.play({sigma, opp, quota, round});
    const char* name = who == Owner::M ? "maker" : "breaker";
    if (static_cast<int>(moves.size()) != quota)
      throw IllegalMove(std::string(name) + " made " + std::to_string(moves.size()) + " claims, quota " +
                        std::to_string(quota));
    for (int v : moves) {
      try {
        apply_claim(sigma, ledger, who, v);
      } catch (const IllegalMove& e) {
        throw IllegalMove(std::string(name) + ": " + e.what());
      }
      out.moves.emplace_back(who, v);
    }
    return moves;
  };

  for (int round = 1; round <= max_rounds; ++round) {
    if (ledger.unclaimed() == 0) return finish(HyperWinner::breaker, round - 1);
    last_maker = run_turn(maker, Owner::M, round == 1 ? rules.m + rules.c : rules.m, last_breaker, round);
    out.maker_turn_danger.push_back(ledger.total());
    if (ledger.maker_completed()) return finish(HyperWinner::maker, round);
    if (ledger.unclaimed() == 0) return finish(HyperWinner::breaker, round);
    last_breaker = run_turn(breaker, Owner::B, rules.b, last_maker, round);
    if (ledger.live_sets() == 0) return finish(HyperWinner::breaker, round);
  }
  return finish(HyperWinner::undecided, max_rounds);
}

}  // namespace perc
