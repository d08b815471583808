#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "perc/engine.hpp"
#include "perc/experiments.hpp"
#include "perc/service.hpp"

using namespace perc;

namespace {

struct Common {
  std::string lattice = "z2";
  int m = 1, b = 1, boost = 0, radius = 8;
  std::optional<double> p;
  double alpha = 0, beta = 0;
  int trials = 1;
  std::uint64_t seed = 1;
  std::string maker = "random", breaker = "random";
  std::string out, format = "csv";
  int threads = 1;
  int max_rounds = 0;
  bool fit_window = false;
  StrategyParams params;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--lattice", c.lattice, "z2, zd:<d>, hex or tri");
  app->add_option("--m", c.m, "Maker claims per turn");
  app->add_option("--b", c.b, "Breaker claims per turn");
  app->add_option("--boost", c.boost, "extra claims on Maker's first turn");
  app->add_option("--radius", c.radius, "window radius");
  app->add_option("--p", c.p, "bond probability (closed edges go to Breaker)");
  app->add_option("--alpha", c.alpha, "Maker pre-claim probability");
  app->add_option("--beta", c.beta, "Breaker pre-claim probability");
  app->add_option("--trials", c.trials, "number of trials");
  app->add_option("--seed", c.seed, "base seed");
  app->add_option("--maker", c.maker, "Maker strategy");
  app->add_option("--breaker", c.breaker, "Breaker strategy");
  app->add_option("--out", c.out, "output path (default stdout)");
  app->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  app->add_option("--max-rounds", c.max_rounds, "stop after this many rounds (0 = never)");
  app->add_flag("--fit-window", c.fit_window, "clump Breaker: play on the confinement box");
  app->add_option("--path-length", c.params.path_length, "potential Breaker walk length (0 = auto)");
  app->add_option("--path-cap", c.params.path_cap, "largest walk length tried");
  app->add_option("--confine-max", c.params.confine_max, "largest confinement radius tried");
  app->add_option("--ladder-min", c.params.ladder_min, "smallest ladder tried by the composite Maker");
  app->add_option("--ladder-max", c.params.ladder_max, "largest ladder tried by the composite Maker");
  app->add_option("--cycle-slack", c.params.cycle_slack, "composite Maker cycle length slack");
  app->add_option("--scan-radius", c.params.scan_radius, "composite Maker origin scan radius (-1 = R/2)");
}

MatchSpec to_spec(const Common& c) {
  MatchSpec s;
  s.kind = parse_lattice(c.lattice);
  s.window = Window{Vertex::origin(s.kind.dim), c.radius};
  s.rules = GameRules{c.m, c.b, c.boost};
  s.p = c.p;
  s.alpha = c.alpha;
  s.beta = c.beta;
  s.maker = c.maker;
  s.breaker = c.breaker;
  s.seed = c.seed;
  s.max_rounds = c.max_rounds;
  s.fit_window = c.fit_window;
  s.params = c.params;
  validate(s);
  return s;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParameterError("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maker-Breaker percolation games: simulation, sweeps, certificates and a play service"};
  app.require_subcommand(1);

  Common sim_opts;
  auto* sim = app.add_subcommand("sim", "play trials and write summaries or transcripts");
  add_common(sim, sim_opts);

  Common sweep_opts;
  std::string axis = "p", grid;
  auto* sw = app.add_subcommand("sweep", "win rates along a parameter grid");
  add_common(sw, sweep_opts);
  sw->add_option("--axis", axis, "p, alpha or beta")->check(CLI::IsMember({"p", "alpha", "beta"}));
  sw->add_option("--grid", grid, "comma-separated grid points")->required();

  Common phase_opts;
  double kappa = 0;
  int steps = 100;
  auto* ph = app.add_subcommand("phase", "certified phase-diagram labels on an (alpha, beta) grid");
  add_common(ph, phase_opts);
  ph->add_option("--kappa", kappa, "connective constant bound (default: the lattice's)");
  ph->add_option("--steps", steps, "grid steps per axis");

  Common cert_opts;
  std::string mode = "breaker-paths";
  auto* cert = app.add_subcommand("certify", "search for a potential certificate on a sampled board");
  add_common(cert, cert_opts);
  cert->add_option("--mode", mode, "breaker-paths or maker-cycles")
      ->check(CLI::IsMember({"breaker-paths", "maker-cycles"}));

  Common clump_opts;
  auto* cl = app.add_subcommand("clumps", "confinement radius and clump family at the window centre");
  add_common(cl, clump_opts);

  std::string bind = "127.0.0.1";
  int port = 0;
  int idle_minutes = 30;
  auto* srv = app.add_subcommand("serve", "run the HTTP session service");
  srv->add_option("--bind", bind, "address to bind");
  srv->add_option("--port", port, "port (default: $PORT or 8080)");
  srv->add_option("--idle-minutes", idle_minutes, "session idle timeout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      MatchSpec spec = to_spec(sim_opts);
      Output out(sim_opts.out);
      std::vector<MatchTranscript> ts;
      bool jsonl = sim_opts.format == "jsonl";
      auto rows = run_trials(spec, sim_opts.trials, sim_opts.seed, sim_opts.threads, jsonl ? &ts : nullptr);
      if (jsonl)
        write_transcripts_jsonl(out.stream(), ts);
      else
        write_summary_csv(out.stream(), rows);
      return 0;
    }
    if (sw->parsed()) {
      SweepSpec s;
      s.axis = parse_axis(axis);
      s.grid = parse_grid(grid);
      s.trials = sweep_opts.trials;
      s.seed_base = sweep_opts.seed;
      s.threads = sweep_opts.threads;
      Common base = sweep_opts;
      if (s.axis == SweepAxis::p && !base.p) base.p = 0.5;
      if (s.axis != SweepAxis::p) base.p.reset();
      if (!s.grid.empty()) {
        if (s.axis == SweepAxis::p) base.p = s.grid.front();
        if (s.axis == SweepAxis::alpha) base.alpha = s.grid.front();
        if (s.axis == SweepAxis::beta) base.beta = s.grid.front();
      }
      s.match = to_spec(base);
      auto rows = sweep(s);
      Output out(sweep_opts.out);
      write_sweep_csv(out.stream(), s, rows);
      return 0;
    }
    if (ph->parsed()) {
      double k = kappa > 0 ? kappa : constants(parse_lattice(phase_opts.lattice)).kappa_upper;
      RegionReport r = phase_grid(phase_opts.m, phase_opts.b, k, steps);
      Output out(phase_opts.out);
      write_phase_csv(out.stream(), r);
      return labels_monotone(r) ? 0 : 1;
    }
    if (cert->parsed()) {
      MatchSpec spec = to_spec(cert_opts);
      GameConfiguration board = sample_board(spec, spec.window);
      CertifyResult r = certify(board, spec.window.center, parse_certify_mode(mode), spec.rules, spec.params);
      Output out(cert_opts.out);
      out.stream() << to_json(r).dump(2) << '\n';
      return r.found ? 0 : 3;
    }
    if (cl->parsed()) {
      MatchSpec spec = to_spec(clump_opts);
      GameConfiguration board = sample_board(spec, spec.window);
      ConfinementResult r =
          confinement_radius(*board.graph, board.owner, spec.window.center, std::min(spec.params.confine_max, spec.window.radius));
      nlohmann::json j{{"origin", std::vector<int>(r.origin.c.begin(), r.origin.c.begin() + r.origin.dim)},
                       {"r_max", r.r_max}};
      j["radius"] = r.radius ? nlohmann::json(*r.radius) : nlohmann::json("NOT_FOUND");
      if (r.family) j["family"] = to_json(*r.family, *board.graph);
      Output out(clump_opts.out);
      out.stream() << j.dump(2) << '\n';
      return r.radius ? 0 : 3;
    }
    if (srv->parsed()) {
      if (port == 0) {
        const char* env = std::getenv("PORT");
        port = env ? std::atoi(env) : 8080;
      }
      ServiceConfig cfg;
      cfg.idle_timeout = std::chrono::minutes(idle_minutes);
      SessionManager sessions(cfg);
      std::cerr << "listening on " << bind << ':' << port << '\n';
      if (!serve(bind, port, sessions)) {
        std::cerr << "cannot bind " << bind << ':' << port << '\n';
        return 2;
      }
      return 0;
    }
  } catch (const CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return 3;
  } catch (const NotComputable& e) {
    std::cerr << "not computable: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
