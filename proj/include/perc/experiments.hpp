#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "perc/engine.hpp"

namespace perc {

// (b+1)^(1/m) / kappa, unclamped.
double breaker_threshold_raw(int m, int b, double kappa);
// Same, clamped to [0,1] for reporting.
double breaker_threshold(int m, int b, double kappa);
// (m+1)/m * (1 - 1/kappa); needs m >= 2.
double maker_threshold(int m, double kappa);

enum class Region { breaker_certified, maker_certified, unresolved };
std::string to_string(Region r);

// Throws std::logic_error if both certificates fire.
Region phase_region(double alpha, double beta, int m, int b, double kappa);

struct RegionCell {
  double alpha = 0;
  double beta = 0;
  Region label = Region::unresolved;
};

struct RegionReport {
  int m = 1, b = 1;
  double kappa = 0;
  int steps = 0;  // grid is {i/steps} x {j/steps} restricted to alpha + beta <= 1
  std::vector<RegionCell> cells;
};

RegionReport phase_grid(int m, int b, double kappa, int steps);
// Raising alpha never leaves maker-certified; raising beta never leaves breaker-certified.
bool labels_monotone(const RegionReport& r);
void write_phase_csv(std::ostream& out, const RegionReport& r);

// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(int k, int n, double z = 1.959963984540054);

enum class SweepAxis { p, alpha, beta };
SweepAxis parse_axis(const std::string& s);
std::string to_string(SweepAxis a);

struct SweepSpec {
  SweepAxis axis = SweepAxis::p;
  std::vector<double> grid;
  int trials = 1;
  MatchSpec match;
  std::uint64_t seed_base = 0;
  int threads = 1;
};

struct SweepRow {
  int grid_index = 0;
  double value = 0;
  int trials = 0;
  int breaker_wins = 0;
  int maker_survivals = 0;
  double mean_rounds = 0;
  double wilson_lo = 0;  // Breaker win rate
  double wilson_hi = 0;
};

void validate(const SweepSpec& spec);
std::vector<SweepRow> sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, std::span<const SweepRow> rows);

enum class CertifyMode { breaker_paths, maker_cycles };
CertifyMode parse_certify_mode(const std::string& s);

struct CertifyResult {
  bool found = false;
  CertifyMode mode = CertifyMode::breaker_paths;
  int N = 0;
  int max_len = 0;  // maker-cycles only
  double lambda = 0;
  double total_danger = 0;
  double bound = 0;
  bool pass = false;
  Vertex v0;
  int sets = 0;
};

// breaker-paths: smallest N <= cap whose walk system passes at v0.
// maker-cycles: spiral ladder search (v0 is the scan centre).
CertifyResult certify(const GameConfiguration& config, const Vertex& v0, CertifyMode mode, const GameRules& rules,
                      const StrategyParams& params);
nlohmann::json to_json(const CertifyResult& r);

}  // namespace perc
