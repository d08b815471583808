#include "perc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "perc/enumerate.hpp"

namespace perc {

double breaker_threshold_raw(int m, int b, double kappa) {
  if (m < 1 || b < 1) throw ParameterError("m and b must be at least 1");
  if (!(kappa > 1)) throw ParameterError("kappa must exceed 1");
  return std::pow(static_cast<double>(b + 1), 1.0 / m) / kappa;
}

double breaker_threshold(int m, int b, double kappa) {
  return std::clamp(breaker_threshold_raw(m, b, kappa), 0.0, 1.0);
}

double maker_threshold(int m, double kappa) {
  if (m < 2) throw ParameterError("maker threshold needs m >= 2");
  if (!(kappa > 1)) throw ParameterError("kappa must exceed 1");
  return (m + 1.0) / m * (1.0 - 1.0 / kappa);
}

std::string to_string(Region r) {
  switch (r) {
    case Region::breaker_certified: return "breaker-certified";
    case Region::maker_certified: return "maker-certified";
    case Region::unresolved: return "unresolved";
  }
  return "?";
}

Region phase_region(double alpha, double beta, int m, int b, double kappa) {
  check_board_params(alpha, beta);
  if (m < 1 || b < 1) throw ParameterError("m and b must be at least 1");
  if (!(kappa > 1)) throw ParameterError("kappa must exceed 1");
  const double open = 1.0 - alpha - beta;
  bool breaker = open < std::pow(static_cast<double>(b + 1), 1.0 / m) * (1.0 / kappa - alpha);
  bool maker = b == 1 && m >= 2 && open < (m + 1.0) * (1.0 / kappa - beta);
  if (breaker && maker) throw std::logic_error("both certificates hold at the same point");
  if (breaker) return Region::breaker_certified;
  if (maker) return Region::maker_certified;
  return Region::unresolved;
}

RegionReport phase_grid(int m, int b, double kappa, int steps) {
  if (steps < 1) throw ParameterError("grid needs at least one step");
  RegionReport r{m, b, kappa, steps, {}};
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j) {
      double a = static_cast<double>(i) / steps, bt = static_cast<double>(j) / steps;
      r.cells.push_back({a, bt, phase_region(a, bt, m, b, kappa)});
    }
  return r;
}

bool labels_monotone(const RegionReport& r) {
  const int n = r.steps;
  auto at = [&](int i, int j) {
    // cells are stored row by row in alpha, each row of length n - i + 1
    int offset = 0;
    for (int k = 0; k < i; ++k) offset += n - k + 1;
    return r.cells[offset + j].label;
  };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) {
      Region here = at(i, j);
      if (i + 1 + j <= n) {
        Region up = at(i + 1, j);
        if (here == Region::maker_certified && up != Region::maker_certified) return false;
        if (here != Region::breaker_certified && up == Region::breaker_certified) return false;
      }
      if (i + j + 1 <= n) {
        Region up = at(i, j + 1);
        if (here == Region::breaker_certified && up != Region::breaker_certified) return false;
        if (here != Region::maker_certified && up == Region::maker_certified) return false;
      }
    }
  return true;
}

void write_phase_csv(std::ostream& out, const RegionReport& r) {
  out << "# perc-arena v1\n";
  out << "# m=" << r.m << " b=" << r.b << " kappa=" << r.kappa << "\n";
  out << "alpha,beta,label\n";
  for (const auto& c : r.cells) out << c.alpha << ',' << c.beta << ',' << to_string(c.label) << '\n';
}

std::pair<double, double> wilson_interval(int k, int n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(k) / n, z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "p") return SweepAxis::p;
  if (s == "alpha") return SweepAxis::alpha;
  if (s == "beta") return SweepAxis::beta;
  throw ParameterError("unknown sweep axis '" + s + "'");
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::p: return "p";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::beta: return "beta";
  }
  return "?";
}

namespace {

MatchSpec at_point(const SweepSpec& spec, double value) {
  MatchSpec m = spec.match;
  switch (spec.axis) {
    case SweepAxis::p: m.p = value; break;
    case SweepAxis::alpha: m.p.reset(); m.alpha = value; break;
    case SweepAxis::beta: m.p.reset(); m.beta = value; break;
  }
  return m;
}

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.trials < 1) throw ParameterError("trials must be at least 1");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    double v = spec.grid[i];
    if (!(v >= 0 && v <= 1)) throw ParameterError("grid points must lie in [0,1]");
    if (i > 0 && !(v > spec.grid[i - 1])) throw ParameterError("grid points must be strictly increasing");
    validate(at_point(spec, v));
  }
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    MatchSpec m = at_point(spec, spec.grid[i]);
    auto sums = run_trials(m, spec.trials, spec.seed_base, spec.threads);
    SweepRow row;
    row.grid_index = static_cast<int>(i);
    row.value = spec.grid[i];
    row.trials = spec.trials;
    double rounds = 0;
    for (const auto& s : sums) {
      row.breaker_wins += s.outcome == Outcome::breaker_win;
      row.maker_survivals += s.outcome == Outcome::maker_survived;
      rounds += s.rounds;
    }
    row.mean_rounds = rounds / spec.trials;
    std::tie(row.wilson_lo, row.wilson_hi) = wilson_interval(row.breaker_wins, spec.trials);
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, std::span<const SweepRow> rows) {
  out << "# perc-arena v1\n";
  out << "# proxy: finite window R=" << spec.match.window.radius << ", Maker " << spec.match.maker << " vs Breaker "
      << spec.match.breaker << "; non-optimal opponents, MakerSurvived means the window was not cut\n";
  out << "# axis=" << to_string(spec.axis) << " m=" << spec.match.rules.m << " b=" << spec.match.rules.b
      << " c=" << spec.match.rules.c << "\n";
  out << "grid_index,value,trials,breaker_wins,maker_survivals,mean_rounds,wilson_lo,wilson_hi\n";
  for (const auto& r : rows)
    out << r.grid_index << ',' << r.value << ',' << r.trials << ',' << r.breaker_wins << ',' << r.maker_survivals
        << ',' << r.mean_rounds << ',' << r.wilson_lo << ',' << r.wilson_hi << '\n';
}

CertifyMode parse_certify_mode(const std::string& s) {
  if (s == "breaker-paths") return CertifyMode::breaker_paths;
  if (s == "maker-cycles") return CertifyMode::maker_cycles;
  throw ParameterError("unknown certify mode '" + s + "'");
}

CertifyResult certify(const GameConfiguration& config, const Vertex& v0, CertifyMode mode, const GameRules& rules,
                      const StrategyParams& params) {
  rules.validate();
  const WindowGraph& g = *config.graph;
  if (g.vertex_index(v0) < 0) throw InvalidVertex("v0 outside the window");
  CertifyResult r;
  r.mode = mode;
  r.v0 = v0;
  if (mode == CertifyMode::breaker_paths) {
    int room = g.radius();
    for (int i = 0; i < v0.dim; ++i) room = std::min(room, g.radius() - std::abs(v0[i] - g.window().center[i]));
    const int cap = std::min(params.path_cap, room);
    for (int n = 1; n <= cap; ++n) {
      SawSet saws = enumerate_saws(g, v0, n, std::max(n, default_saw_cap(g.kind())));
      WinningSetSystem sys = build_path_system(saws, g.edge_count());
      BeckCertificate c = beck_certificate(config.owner, sys, rules);
      r.N = n;
      r.lambda = c.lambda;
      r.total_danger = c.total;
      r.bound = c.bound;
      r.pass = c.pass;
      r.sets = sys.set_count();
      if (c.pass) {
        r.found = true;
        break;
      }
    }
    return r;
  }
  auto placement = find_ladder_placement(g, config.owner, rules, params, v0);
  if (!placement) return r;
  r.found = true;
  r.v0 = placement->v0;
  r.N = placement->height;
  r.max_len = placement->max_len;
  r.lambda = placement->certificate.lambda;
  r.total_danger = placement->certificate.total;
  r.bound = placement->certificate.bound;
  r.pass = placement->certificate.pass;
  r.sets = placement->cycles;
  return r;
}

nlohmann::json to_json(const CertifyResult& r) {
  nlohmann::json j;
  j["mode"] = r.mode == CertifyMode::breaker_paths ? "breaker-paths" : "maker-cycles";
  j["found"] = r.found;
  j["N"] = r.N;
  if (r.mode == CertifyMode::maker_cycles) j["max_len"] = r.max_len;
  j["lambda"] = r.lambda;
  j["total_danger"] = r.total_danger;
  j["bound"] = r.bound;
  j["pass"] = r.pass;
  j["v0"] = std::vector<int>(r.v0.c.begin(), r.v0.c.begin() + r.v0.dim);
  j["sets"] = r.sets;
  return j;
}

}  // namespace perc
