#include "planetwars/arena.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace planetwars {

// --- replay ----------------------------------------------------------------

void to_json(json& j, const Replay& r) {
  json actions = json::array();
  for (std::size_t t = 0; t < r.actions.size(); ++t) {
    actions.push_back({{"tick", t}, {"a1", r.actions[t].first}, {"a2", r.actions[t].second}});
  }
  json hashes = json::array();
  for (auto h : r.hashes) hashes.push_back(hash_hex(h));
  j = json{{"version", kReplayVersion},
           {"seed", r.seed},
           {"parameters", r.params},
           {"actuators", r.actuators},
           {"agents", {r.agent1, r.agent2}},
           {"actions", std::move(actions)},
           {"hashes", std::move(hashes)},
           {"outcome", r.outcome ? json(std::string(to_string(*r.outcome))) : json(nullptr)},
           {"ticks", r.actions.size()},
           {"finalHash", hash_hex(r.final_hash)}};
}

void from_json(const json& j, Replay& r) {
  const int version = j.at("version").get<int>();
  if (version != kReplayVersion) {
    throw ReplayError("replay version " + std::to_string(version) + " is not supported (expected " +
                      std::to_string(kReplayVersion) + ")");
  }
  r.seed = j.at("seed").get<std::uint64_t>();
  r.params = j.at("parameters").get<GameParameters>();
  r.actuators = j.value("actuators", ActuatorPair{});
  const auto& agents = j.at("agents");
  r.agent1 = agents.at(0).get<std::string>();
  r.agent2 = agents.at(1).get<std::string>();
  r.actions.clear();
  const auto& actions = j.at("actions");
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const auto& rec = actions[t];
    if (rec.at("tick").get<std::size_t>() != t) throw ReplayError("replay actions out of order at index " + std::to_string(t));
    r.actions.emplace_back(rec.at("a1").get<Action>(), rec.at("a2").get<Action>());
  }
  r.hashes.clear();
  if (auto it = j.find("hashes"); it != j.end()) {
    for (const auto& h : *it) r.hashes.push_back(parse_hash_hex(h.get<std::string>()));
  }
  const auto& outcome = j.at("outcome");
  r.outcome = outcome.is_null() ? std::nullopt : std::optional(outcome_from_string(outcome.get<std::string>()));
  r.final_hash = parse_hash_hex(j.at("finalHash").get<std::string>());
}

void replay_save(const std::filesystem::path& path, const Replay& r) {
  std::ofstream out(path);
  if (!out) throw ReplayError("cannot write replay '" + path.string() + "'");
  out << json(r).dump(1) << '\n';
  if (!out) throw ReplayError("failed writing replay '" + path.string() + "'");
}

Replay replay_parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line/column for the message.
    const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
    const auto last_nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const auto column = last_nl == std::string::npos ? at + 1 : at - last_nl;
    throw ReplayError("replay parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
  try {
    return j.get<Replay>();
  } catch (const ReplayError&) {
    throw;
  } catch (const std::exception& e) {
    throw ReplayError(std::string("malformed replay: ") + e.what());
  }
}

Replay replay_load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ReplayError("cannot open replay '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return replay_parse(buf.str());
}

ReplayCheck replay_verify(const Replay& r) {
  ReplayCheck check;
  GameState s = new_game(r.params, r.seed, r.actuators);
  for (std::size_t t = 0; t < r.actions.size(); ++t) {
    if (is_terminal(s)) {
      check.ok = false;
      check.first_mismatch_tick = static_cast<int>(t);
      check.message = "game ended before the recorded actions ran out";
      break;
    }
    advance(s, r.actions[t].first, r.actions[t].second);
    if (t < r.hashes.size() && state_hash(s) != r.hashes[t]) {
      check.ok = false;
      check.first_mismatch_tick = static_cast<int>(t);
      check.message = "state hash mismatch after tick " + std::to_string(t);
      break;
    }
  }
  if (check.ok && state_hash(s) != r.final_hash) {
    check.ok = false;
    check.message = "final state hash mismatch";
  }
  if (check.ok && is_terminal(s) != r.outcome) {
    check.ok = false;
    check.message = "outcome mismatch";
  }
  check.final_state = std::move(s);
  return check;
}

// --- matches ---------------------------------------------------------------

MatchResult run_match(Agent& p1, Agent& p2, const GameParameters& params, std::uint64_t map_seed,
                      int tick_limit, ActuatorPair actuators) {
  GameParameters limited = params;
  limited.max_ticks = tick_limit;
  GameState s = new_game(limited, map_seed, actuators);

  MatchResult result;
  Replay& replay = result.replay;
  replay.seed = map_seed;
  replay.params = limited;
  replay.actuators = actuators;
  replay.agent1 = p1.id();
  replay.agent2 = p2.id();
  replay.actions.reserve(static_cast<std::size_t>(tick_limit));
  replay.hashes.reserve(static_cast<std::size_t>(tick_limit));

  std::optional<Outcome> outcome;
  while (!(outcome = is_terminal(s))) {
    const Action a1 = p1.act(s, Owner::Player1);
    const Action a2 = p2.act(s, Owner::Player2);
    advance(s, a1, a2);
    replay.actions.emplace_back(a1, a2);
    replay.hashes.push_back(state_hash(s));
  }
  replay.outcome = outcome;
  replay.final_hash = state_hash(s);
  result.outcome = *outcome;
  result.ticks = s.tick;
  return result;
}

MatchResult run_match(const std::string& agent1, const std::string& agent2, const GameParameters& params,
                      std::uint64_t map_seed, int tick_limit, std::uint64_t agent_seed) {
  auto a1 = make_agent(agent1, mix_seed(agent_seed, 1));
  auto a2 = make_agent(agent2, mix_seed(agent_seed, 2));
  return run_match(*a1, *a2, params, map_seed, tick_limit);
}

// --- league ----------------------------------------------------------------

int LeagueResult::win_count(const std::string& row, const std::string& col) const {
  const auto r = std::find(agents.begin(), agents.end(), row);
  const auto c = std::find(agents.begin(), agents.end(), col);
  if (r == agents.end() || c == agents.end()) throw std::invalid_argument("agent not in league");
  return wins[static_cast<std::size_t>(r - agents.begin())][static_cast<std::size_t>(c - agents.begin())];
}

int LeagueResult::total_for(const std::string& agent) const {
  const auto r = std::find(agents.begin(), agents.end(), agent);
  if (r == agents.end()) throw std::invalid_argument("agent not in league");
  return totals[static_cast<std::size_t>(r - agents.begin())];
}

void to_json(json& j, const GameSummary& g) {
  j = json{{"index", g.index},       {"p1", g.p1},
           {"p2", g.p2},             {"mapSeed", g.map_seed},
           {"repeat", g.repeat},     {"outcome", std::string(to_string(g.outcome))},
           {"ticks", g.ticks},       {"finalHash", hash_hex(g.final_hash)},
           {"replay", g.replay_file.empty() ? json(nullptr) : json(g.replay_file)}};
}

void to_json(json& j, const LeagueResult& r) {
  j = json{{"agents", r.agents},     {"wins", r.wins},
           {"totals", r.totals},     {"draws", r.draws},
           {"games", r.games},       {"expectedGames", r.expected_games},
           {"complete", static_cast<int>(r.games.size()) == r.expected_games},
           {"wallSeconds", r.wall_seconds}};
}

namespace {

struct Fixture {
  int index;
  std::size_t row;  // agent index in P1 seat
  std::size_t col;  // agent index in P2 seat
  std::uint64_t map_seed;
  int repeat;
};

}  // namespace

LeagueResult run_league(const LeagueConfig& cfg, const GameParameters& params) {
  if (cfg.agents.size() < 2) throw std::invalid_argument("league needs at least two agents");
  for (const auto& id : cfg.agents) {
    if (!is_known_agent(id)) throw std::invalid_argument("unknown agent '" + id + "'");
  }
  if (auto errors = validate_parameters(params); !errors.empty()) {
    throw std::invalid_argument("invalid parameters: " + errors.front());
  }

  std::vector<Fixture> fixtures;
  const std::size_t n = cfg.agents.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (auto seed : cfg.map_seeds) {
        for (int rep = 0; rep < cfg.repeats_per_map; ++rep) {
          const bool swapped = cfg.swap_sides && (rep % 2 == 1);
          fixtures.push_back({static_cast<int>(fixtures.size()), swapped ? b : a, swapped ? a : b, seed, rep});
        }
      }
    }
  }

  LeagueResult result;
  result.agents = cfg.agents;
  result.wins.assign(n, std::vector<int>(n, 0));
  result.totals.assign(n, 0);
  result.expected_games = static_cast<int>(fixtures.size());
  if (cfg.replay_dir) std::filesystem::create_directories(*cfg.replay_dir);

  const auto start = std::chrono::steady_clock::now();
  std::mutex collector;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= fixtures.size()) return;
      const Fixture& f = fixtures[k];
      GameSummary summary;
      try {
        const std::uint64_t agent_seed = mix_seed(f.map_seed, static_cast<std::uint64_t>(f.index));
        MatchResult m = run_match(cfg.agents[f.row], cfg.agents[f.col], params, f.map_seed, cfg.tick_limit, agent_seed);
        summary = {f.index, cfg.agents[f.row], cfg.agents[f.col], f.map_seed, f.repeat,
                   m.outcome,  m.ticks,          m.replay.final_hash, ""};
        if (cfg.replay_dir) {
          const auto file = *cfg.replay_dir / ("game_" + std::to_string(f.index) + ".json");
          replay_save(file, m.replay);
          summary.replay_file = file.string();
        }
      } catch (...) {
        std::lock_guard lock(collector);
        if (!failure) failure = std::current_exception();
        next = fixtures.size();
        return;
      }

      std::lock_guard lock(collector);
      if (summary.outcome == Outcome::P1Win) {
        ++result.wins[f.row][f.col];
        ++result.totals[f.row];
      } else if (summary.outcome == Outcome::P2Win) {
        ++result.wins[f.col][f.row];
        ++result.totals[f.col];
      } else {
        ++result.draws;
      }
      result.games.push_back(std::move(summary));
      result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (cfg.progress_path) {
        std::ofstream out(*cfg.progress_path);
        out << json(result).dump(1) << '\n';
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(result.games.begin(), result.games.end(),
            [](const GameSummary& a, const GameSummary& b) { return a.index < b.index; });
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string format_league_table(const LeagueResult& r) {
  std::size_t width = 4;
  for (const auto& a : r.agents) width = std::max(width, a.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width) + 2) << "";
  for (const auto& a : r.agents) out << std::right << std::setw(static_cast<int>(width) + 2) << a;
  out << std::right << std::setw(8) << "Wins" << '\n';
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << r.agents[i];
    for (std::size_t j = 0; j < r.agents.size(); ++j) {
      out << std::right << std::setw(static_cast<int>(width) + 2);
      if (i == j) {
        out << "-";
      } else {
        out << r.wins[i][j];
      }
    }
    out << std::right << std::setw(8) << r.totals[i] << '\n';
  }
  out << "draws: " << r.draws << "  games: " << r.games.size() << '/' << r.expected_games << '\n';
  return out.str();
}

}  // namespace planetwars
