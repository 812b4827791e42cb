// Command line front end for leagues, single matches, benchmarks and replays.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "planetwars/arena.hpp"
#include "planetwars/bench.hpp"

using namespace planetwars;

namespace {

GameParameters load_params(const std::string& path) {
  GameParameters p = default_parameters();
  if (path.empty()) return p;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file '" + path + "'");
  p = json::parse(in).get<GameParameters>();
  return p;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planet Wars experiment harness"};
  app.require_subcommand(1);

  std::string params_path;
  app.add_option("--params", params_path, "JSON file of game parameters (defaults otherwise)");

  // league
  auto* league = app.add_subcommand("league", "round-robin league on fixed maps");
  std::string agents = "rhea:20:200,mcts:40:100,random";
  int maps = 10;
  std::uint64_t first_seed = 0;
  int repeats = 2;
  int tick_limit = 2000;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool no_swap = false;
  std::string out_path;
  std::string replay_dir;
  league->add_option("--agents", agents, "comma separated agent identifiers");
  league->add_option("--maps", maps, "number of map seeds");
  league->add_option("--first-seed", first_seed, "first map seed; maps use consecutive seeds");
  league->add_option("--repeats", repeats, "games per pairing per map");
  league->add_option("--tick-limit", tick_limit, "tick limit per game");
  league->add_option("--jobs", jobs, "games played concurrently");
  league->add_flag("--no-swap", no_swap, "keep seats fixed across repeats");
  league->add_option("--out", out_path, "results JSON (rewritten after every game)");
  league->add_option("--replays", replay_dir, "directory for per-game replay files");

  // match
  auto* match = app.add_subcommand("match", "play a single game");
  std::string p1 = "heuristic";
  std::string p2 = "random";
  std::uint64_t seed = 0;
  std::uint64_t agent_seed = 0;
  std::string match_out;
  match->add_option("--p1", p1, "player 1 agent");
  match->add_option("--p2", p2, "player 2 agent");
  match->add_option("--seed", seed, "map seed");
  match->add_option("--agent-seed", agent_seed, "seed for the agents' random streams");
  match->add_option("--tick-limit", tick_limit, "tick limit");
  match->add_option("--out", match_out, "write the replay here");

  // bench
  auto* bench = app.add_subcommand("bench", "engine micro-benchmarks");
  std::string op = "nextstate";
  int threads = 1;
  double seconds = 5.0;
  bench->add_option("--op", op, "nextstate | copy | gravity")->check(CLI::IsMember({"nextstate", "copy", "gravity"}));
  bench->add_option("--threads", threads, "worker threads");
  bench->add_option("--seconds", seconds, "minimum timed duration");

  // replay
  auto* replay = app.add_subcommand("replay", "re-simulate and verify a replay file");
  std::string replay_in;
  replay->add_option("--in", replay_in, "replay file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const GameParameters params = load_params(params_path);

    if (*league) {
      LeagueConfig cfg;
      cfg.agents = split(agents, ',');
      for (int i = 0; i < maps; ++i) cfg.map_seeds.push_back(first_seed + static_cast<std::uint64_t>(i));
      cfg.repeats_per_map = repeats;
      cfg.swap_sides = !no_swap;
      cfg.tick_limit = tick_limit;
      cfg.jobs = jobs;
      if (!out_path.empty()) cfg.progress_path = out_path;
      if (!replay_dir.empty()) cfg.replay_dir = replay_dir;
      const LeagueResult r = run_league(cfg, params);
      std::cout << format_league_table(r);
      std::cout << "wall time: " << std::fixed << std::setprecision(1) << r.wall_seconds << " s\n";
      return 0;
    }

    if (*match) {
      const MatchResult m = run_match(p1, p2, params, seed, tick_limit, agent_seed);
      std::cout << "outcome: " << to_string(m.outcome) << " after " << m.ticks << " ticks\n"
                << "final hash: " << hash_hex(m.replay.final_hash) << '\n';
      if (!match_out.empty()) replay_save(match_out, m.replay);
      return 0;
    }

    if (*bench) {
      BenchResult r;
      if (op == "nextstate") {
        r = bench_next_state(params, seconds, threads);
      } else if (op == "copy") {
        r = bench_copy(params, seconds, threads);
      } else {
        r = bench_gravity(params, seconds);
      }
      std::cout << op << ": " << std::fixed << std::setprecision(r.kops < 10 ? 4 : 1) << r.kops << " kop/s (" << r.operations
                << " ops in " << std::setprecision(2) << r.seconds << " s, " << r.threads << " thread"
                << (r.threads == 1 ? "" : "s") << ")\n";
      return 0;
    }

    if (*replay) {
      const Replay r = replay_load(replay_in);
      const ReplayCheck check = replay_verify(r);
      std::cout << "agents: " << r.agent1 << " vs " << r.agent2 << ", seed " << r.seed << ", " << r.actions.size()
                << " ticks\n";
      if (!check.ok) {
        std::cout << "MISMATCH: " << check.message << '\n';
        return 2;
      }
      std::cout << "verified: outcome " << (r.outcome ? to_string(*r.outcome) : "none") << ", final hash "
                << hash_hex(state_hash(check.final_state)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
