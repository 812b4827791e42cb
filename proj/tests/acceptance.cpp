// Acceptance checks. Prints one PASS/FAIL line per criterion followed by a
// summary; the exit status is nonzero only if a check could not run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "planetwars/agents.hpp"
#include "planetwars/arena.hpp"
#include "planetwars/bench.hpp"
#include "planetwars/map_gen.hpp"
#include "support.hpp"

using namespace planetwars;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vec2 direct_force(const std::vector<Planet>& planets, Vec2 at, double g) {
  Vec2 sum;
  for (const auto& pl : planets) {
    const double dx = pl.position.x - at.x;
    const double dy = pl.position.y - at.y;
    double d = std::sqrt(dx * dx + dy * dy);
    if (d < pl.radius) d = pl.radius;
    const double mag = g * pl.radius * pl.radius / (d * d);
    sum += Vec2{mag * dx / d, mag * dy / d};
  }
  return sum;
}

Verdict throughput() {
  const auto p = default_parameters();
  const unsigned hw = std::thread::hardware_concurrency();
  const auto next1 = bench_next_state(p, 5.0, 1);
  const auto copy1 = bench_copy(p, 5.0, 1);
  const auto next4 = bench_next_state(p, 5.0, 4);
  const bool floor = next1.kops >= 100.0;
  const bool copy_faster = copy1.kops > next1.kops;
  const double scale = next4.kops / next1.kops;
  const bool scaling = scale >= 1.5;
  return {floor && copy_faster && scaling,
          fmt("nextState %.0f kop/s (>= 100: %s), copy %.0f kop/s (> nextState: %s), "
              "4 threads %.0f kop/s = %.2fx (>= 1.5x: %s, %u hardware threads)",
              next1.kops, floor ? "yes" : "no", copy1.kops, copy_faster ? "yes" : "no", next4.kops, scale,
              scaling ? "yes" : "no", hw)};
}

Verdict league() {
  LeagueConfig cfg;
  const std::string rhea = "rhea:20:200", mcts = "mcts:40:100", rnd = "random";
  cfg.agents = {rhea, mcts, rnd};
  for (std::uint64_t s = 0; s < 10; ++s) cfg.map_seeds.push_back(s);
  cfg.repeats_per_map = 2;
  cfg.swap_sides = true;
  cfg.tick_limit = 2000;
  cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const LeagueResult r = run_league(cfg, default_parameters());
  std::fputs(format_league_table(r).c_str(), stdout);
  const int tr = r.total_for(rhea), tm = r.total_for(mcts), tn = r.total_for(rnd);
  const int rv = r.win_count(rhea, rnd), mv = r.win_count(mcts, rnd);
  const bool ok = static_cast<int>(r.games.size()) == 60 && tr > tm && tm > tn && rv >= 18 && mv >= 13 &&
                  r.wall_seconds < 600.0;
  return {ok, fmt("%zu games, totals rhea %d > mcts %d > random %d; rhea vs random %d/20 (>= 18), "
                  "mcts vs random %d/20 (>= 13), %.0f s (< 600)",
                  r.games.size(), tr, tm, tn, rv, mv, r.wall_seconds)};
}

Verdict linearity() {
  std::vector<double> n, us;
  std::string detail;
  for (int planets : {10, 20, 40, 80}) {
    GameParameters p = default_parameters();
    p.num_planets = planets;
    p.map_width = 1600;
    p.map_height = 1200;
    const auto b = bench_next_state(p, 2.0, 1, 200'000);
    n.push_back(planets);
    us.push_back(1000.0 / b.kops);
    detail += fmt("N=%d %.3f us, ", planets, us.back());
  }
  const LinearFit fit = fit_line(n, us);
  return {fit.r2 >= 0.95, detail + fmt("R^2 %.4f (>= 0.95)", fit.r2)};
}

Verdict gravity_oracle() {
  const auto p = default_parameters();
  double worst = 0.0;
  bool midpoint = true, antisym = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto planets = generate_map(p, seed);
    const auto field = compute_gravity_field(planets, p);
    Rng rng(seed);
    for (int k = 0; k < 20; ++k) {
      const int col = rng.next_int(field.cols()), row = rng.next_int(field.rows());
      const Vec2 c = field.cell_center(col, row);
      const Vec2 want = direct_force(planets, c, p.gravitational_constant);
      worst = std::max(worst, (field.cell(col, row) - want).norm() / want.norm());
      // Point reflection of the cell through the map centre.
      const Vec2 m = field.cell(field.cols() - 1 - col, field.rows() - 1 - row);
      antisym = antisym && m.x == -field.cell(col, row).x && m.y == -field.cell(col, row).y;
    }
    for (std::size_t i = 0; i + 1 < planets.size(); i += 2) {
      const Planet& a = planets[i];
      const Planet& b = planets[i + 1];
      const Vec2 mid = (a.position + b.position) * 0.5;
      const Vec2 f = planet_force(a, mid, p.gravitational_constant) + planet_force(b, mid, p.gravitational_constant);
      midpoint = midpoint && f.x == 0.0 && f.y == 0.0;
    }
  }

  // Zero-gravity flights stay on a line.
  GameParameters flat = p;
  flat.gravitational_constant = 0.0;
  double worst_line = 0.0;
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    GameState s = new_game(flat, rng.next_u64());
    advance(s, Action::select(0), Action::noop());
    advance(s, Action::select(2 + rng.next_int(flat.num_planets - 2)), Action::noop());
    std::vector<Vec2> path;
    while (s.planets[0].transporter.in_transit()) {
      path.push_back(s.planets[0].transporter.position);
      advance(s, Action::noop(), Action::noop());
    }
    const Vec2 dir = path.back() - path.front();
    for (const auto& q : path) worst_line = std::max(worst_line, std::abs(dir.cross(q - path.front())) / dir.norm());
  }
  return {worst <= 1e-9 && worst_line <= 1e-9 && midpoint && antisym,
          fmt("100 cells max rel err %.2e (<= 1e-9), zero-G max line deviation %.2e px (<= 1e-9), "
              "pair midpoints exactly zero: %s, field antisymmetric: %s",
              worst, worst_line, midpoint ? "yes" : "no", antisym ? "yes" : "no")};
}

Verdict conservation() {
  Rng rng(4242);
  int ticks = 0, decode_steps = 0, decode_bad = 0;
  double worst = 0.0, growth_err = 0.0;
  while (ticks < 1000) {
    GameState s = planetwars::testing::random_state(rng, 200);
    for (int t = 0; t < 50 && ticks < 1000 && !is_terminal(s); ++t, ++ticks) {
      const Action a1 = sample_legal_action(s, Owner::Player1, rng);
      const Action a2 = sample_legal_action(s, Owner::Player2, rng);

      GameState decoded = s;
      const double before_decode = planetwars::testing::planets_plus_payloads(decoded);
      apply_actions(decoded, a1, a2);
      ++decode_steps;
      decode_bad += planetwars::testing::planets_plus_payloads(decoded) != before_decode;

      double growth = 0.0;
      for (const auto& pl : s.planets) growth += pl.owner == Owner::Neutral ? 0.0 : pl.growth_rate;
      const double before = total_ships(s);
      TickReport r;
      advance(s, a1, a2, &r);
      growth_err = std::max(growth_err, std::abs(r.growth - growth));
      const double expected = r.growth - r.tax - r.off_map_loss - r.combat_loss;
      worst = std::max(worst, std::abs((total_ships(s) - before) - expected));
    }
  }
  return {worst <= 1e-9 && growth_err <= 1e-9 && decode_bad == 0,
          fmt("%d ticks: max |delta - (growth - tax - offmap - combat)| %.2e (<= 1e-9), growth error %.2e; "
              "%d decode steps, %d changed planet+payload totals",
              ticks, worst, growth_err, decode_steps, decode_bad)};
}

Verdict determinism() {
  const auto p = default_parameters();
  int replays_ok = 0, replays = 0;
  const std::vector<std::pair<std::string, std::string>> pairs{
      {"random", "random"}, {"heuristic", "random"}, {"rhea:2:20", "mcts:4:20"}, {"random", "heuristic"}};
  std::uint64_t once_max = 0, once_min = ~0ull;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto before = gravity_field_computations();
    const auto m = run_match(pairs[i].first, pairs[i].second, p, 50 + i, 1000, i);
    const auto computed = gravity_field_computations() - before;
    once_max = std::max(once_max, computed);
    once_min = std::min(once_min, computed);
    Replay bare = replay_parse(json(m.replay).dump());
    bare.hashes.clear();
    const auto check = replay_verify(bare);
    ++replays;
    replays_ok += check.ok && state_hash(check.final_state) == m.replay.final_hash;
  }

  Rng rng(8080);
  int exact = 0;
  const int trips = 100;
  for (int i = 0; i < trips; ++i) {
    const GameState s = planetwars::testing::random_state(rng, 300);
    GameState back = json::parse(json(s).dump()).get<GameState>();
    restore_gravity(back);
    const auto a = s.gravity->grid();
    const auto b = back.gravity->grid();
    exact += same_state(back, s) && state_hash(back) == state_hash(s) && std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  const bool ok = replays_ok == replays && exact == trips && once_min == 1 && once_max == 1;
  return {ok, fmt("%d/%d seed+action replays reproduce the final hash, %d/%d JSON round trips field-exact, "
                  "gravity fields per game %llu..%llu (== 1)",
                  replays_ok, replays, exact, trips, static_cast<unsigned long long>(once_min),
                  static_cast<unsigned long long>(once_max))};
}

Verdict illegal_equivalence() {
  Rng rng(1357);
  int pairs = 0, equal = 0;
  while (pairs < 1000) {
    const GameState s = planetwars::testing::random_state(rng, 300);
    if (is_terminal(s)) continue;
    const Player who = rng.chance(0.5) ? Owner::Player1 : Owner::Player2;
    const auto bad = planetwars::testing::illegal_actions(s, who);
    if (bad.empty()) continue;
    const Action other = sample_legal_action(s, opponent(who), rng);
    for (int k = 0; k < 10 && pairs < 1000; ++k) {
      const Action a = bad[static_cast<std::size_t>(rng.next_int(static_cast<int>(bad.size())))];
      const bool p1 = who == Owner::Player1;
      const GameState got = p1 ? next_state(s, a, other) : next_state(s, other, a);
      const GameState ref = p1 ? next_state(s, Action::noop(), other) : next_state(s, other, Action::noop());
      equal += same_state(got, ref) && state_hash(got) == state_hash(ref);
      ++pairs;
    }
  }
  return {equal == pairs, fmt("%d/%d illegal actions gave the NoOp successor bit for bit", equal, pairs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> checks{
      {"throughput", throughput},
      {"league", league},
      {"linearity", linearity},
      {"gravity-oracle", gravity_oracle},
      {"conservation", conservation},
      {"determinism-serialization", determinism},
      {"illegal-action-equivalence", illegal_equivalence},
  };
  int passed = 0, errors = 0;
  for (const auto& [name, run] : checks) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const Verdict v = run();
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("%s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
      passed += v.pass;
    } catch (const std::exception& e) {
      std::printf("FAIL %s: error: %s\n", name.c_str(), e.what());
      ++errors;
    }
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu criteria pass\n", passed, checks.size());
  return errors == 0 ? 0 : 1;
}
