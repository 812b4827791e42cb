#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planetwars/agents.hpp"
#include "planetwars/serialize.hpp"

namespace planetwars {

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kReplayVersion = 1;

// Enough to rebuild a game: seed, parameters, actuators and the joint
// action of every tick. State hashes after each tick are optional.
struct Replay {
  std::uint64_t seed = 0;
  GameParameters params;
  ActuatorPair actuators{};
  std::string agent1;
  std::string agent2;
  std::vector<std::pair<Action, Action>> actions;
  std::vector<std::uint64_t> hashes;
  std::optional<Outcome> outcome;
  std::uint64_t final_hash = 0;
};

void to_json(json& j, const Replay& r);
void from_json(const json& j, Replay& r);

void replay_save(const std::filesystem::path& path, const Replay& r);
// Throws ReplayError on unreadable files, malformed JSON (with line and
// column), or a version other than kReplayVersion.
Replay replay_load(const std::filesystem::path& path);
Replay replay_parse(const std::string& text);

struct ReplayCheck {
  bool ok = true;
  int first_mismatch_tick = -1;  // tick whose recorded hash disagreed
  std::string message;
  GameState final_state;
};

// Re-simulates from the seed and compares every recorded hash, the final
// hash and the outcome.
ReplayCheck replay_verify(const Replay& r);

struct MatchResult {
  Outcome outcome = Outcome::Draw;
  int ticks = 0;
  Replay replay;
};

// Plays one game to a terminal state. tick_limit replaces params.max_ticks.
MatchResult run_match(Agent& p1, Agent& p2, const GameParameters& params, std::uint64_t map_seed,
                      int tick_limit, ActuatorPair actuators = {});
// Builds both agents first; unknown identifiers throw std::invalid_argument
// before any tick is played.
MatchResult run_match(const std::string& agent1, const std::string& agent2, const GameParameters& params,
                      std::uint64_t map_seed, int tick_limit, std::uint64_t agent_seed = 0);

struct LeagueConfig {
  std::vector<std::string> agents;
  std::vector<std::uint64_t> map_seeds;
  int repeats_per_map = 2;
  bool swap_sides = true;
  int tick_limit = 2000;
  int jobs = 1;
  // When set, results so far are rewritten here after every game.
  std::optional<std::filesystem::path> progress_path;
  // When set, each game's replay is written into this directory.
  std::optional<std::filesystem::path> replay_dir;
};

struct GameSummary {
  int index = 0;
  std::string p1;
  std::string p2;
  std::uint64_t map_seed = 0;
  int repeat = 0;
  Outcome outcome = Outcome::Draw;
  int ticks = 0;
  std::uint64_t final_hash = 0;
  std::string replay_file;
};

struct LeagueResult {
  std::vector<std::string> agents;
  std::vector<std::vector<int>> wins;  // wins[row][col]: row agent beat col agent
  std::vector<int> totals;
  int draws = 0;
  std::vector<GameSummary> games;
  int expected_games = 0;
  double wall_seconds = 0.0;

  int win_count(const std::string& row, const std::string& col) const;
  int total_for(const std::string& agent) const;
};

void to_json(json& j, const GameSummary& g);
void to_json(json& j, const LeagueResult& r);

// Every unordered agent pair plays every map repeats_per_map times; with
// swap_sides the seats alternate between repeats.
LeagueResult run_league(const LeagueConfig& cfg, const GameParameters& params);

// Text table: row agent wins against column agent, then total wins.
std::string format_league_table(const LeagueResult& r);

}  // namespace planetwars
