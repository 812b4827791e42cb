#include "planetwars/agents.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace planetwars {

namespace {

void step(GameState& s, Player player, const Action& mine, const Action& theirs) {
  if (player == Owner::Player1) {
    advance(s, mine, theirs);
  } else {
    advance(s, theirs, mine);
  }
}

bool transporter_free(const GameState& s, int id) {
  return !s.planets[static_cast<std::size_t>(id)].transporter.in_transit() && s.press_latch[0] != id &&
         s.press_latch[1] != id;
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

double rollout_value(const GameState& s, Player player) {
  double value = score(s, player);
  if (const auto outcome = is_terminal(s)) {
    if (*outcome == Outcome::P1Win) value += player == Owner::Player1 ? kTerminalBonus : -kTerminalBonus;
    if (*outcome == Outcome::P2Win) value += player == Owner::Player2 ? kTerminalBonus : -kTerminalBonus;
  }
  return value;
}

// --- heuristic -------------------------------------------------------------

int HeuristicAgent::pick_source(const GameState& s, Player player) {
  int best = kNone;
  for (const auto& planet : s.planets) {
    if (planet.owner != player || !transporter_free(s, planet.id)) continue;
    if (best == kNone || planet.ships > s.planets[static_cast<std::size_t>(best)].ships) best = planet.id;
  }
  return best;
}

int HeuristicAgent::pick_target(const GameState& s, Player player, int source) {
  const GameParameters& p = s.parameters();
  const Vec2 from = s.planets[static_cast<std::size_t>(source)].position;
  const double speed = p.ship_launch_speed > 0.0 ? p.ship_launch_speed : 1.0;
  int best = kNone;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& planet : s.planets) {
    if (planet.id == source || planet.owner == player) continue;
    const double travel = distance(from, planet.position) / speed;
    const double cost = planet.ships + planet.growth_rate * travel;
    if (cost < best_cost) {
      best_cost = cost;
      best = planet.id;
    }
  }
  return best;
}

Action HeuristicAgent::act(const GameState& s, Player player) {
  const Actuator& act = s.actuator(player);
  const int idx = player_index(player);

  if (act.kind == ActuatorKind::Slingshot) {
    const int latch = s.press_latch[static_cast<std::size_t>(idx)];
    if (latch == kNone) {
      const int source = pick_source(s, player);
      return source == kNone ? Action::noop() : Action::press(source);
    }
    const int target = pick_target(s, player, latch);
    if (target == kNone) return Action::release();
    const Planet& from = s.planets[static_cast<std::size_t>(latch)];
    const Vec2 d = s.planets[static_cast<std::size_t>(target)].position - from.position;
    // The turret moves by one rotation step before the next decode.
    const double gap = wrap_angle(std::atan2(d.y, d.x) - from.turret_angle);
    const double rate = s.parameters().turret_rotation_rate;
    return gap <= rate || gap >= 2.0 * std::numbers::pi - 1e-12 ? Action::release() : Action::noop();
  }

  if (act.one_shot_pairs) {
    const int source = pick_source(s, player);
    if (source == kNone) return Action::noop();
    const int target = pick_target(s, player, source);
    return target == kNone ? Action::noop() : Action::launch(source, target);
  }

  const int pending = s.pending_source[static_cast<std::size_t>(idx)];
  if (pending != kNone && s.planets[static_cast<std::size_t>(pending)].owner == player &&
      transporter_free(s, pending)) {
    const int target = pick_target(s, player, pending);
    return target == kNone ? Action::noop() : Action::select(target);
  }
  const int source = pick_source(s, player);
  return source == kNone ? Action::noop() : Action::select(source);
}

// --- RHEA ------------------------------------------------------------------

RheaAgent::RheaAgent(AgentBudget budget, std::uint64_t seed) : budget_(budget), rng_(seed) {
  if (budget_.horizon < 1 || budget_.iterations < 1) {
    throw std::invalid_argument("rhea: iterations and horizon must be >= 1");
  }
}

std::string RheaAgent::id() const {
  return "rhea:" + std::to_string(budget_.iterations) + ":" + std::to_string(budget_.horizon);
}

double RheaAgent::evaluate(const GameState& s, Player player, const std::vector<int>& genes) {
  GameState sim = copy_state(s);
  const Actuator act = s.actuator(player);
  const int n = s.num_planets();
  const Player opp = opponent(player);
  Rng opponent_rng(opponent_seed_);
  for (int gene : genes) {
    if (is_terminal(sim)) break;
    const Action theirs = sample_legal_action(sim, opp, opponent_rng);
    step(sim, player, action_from_index(act, n, gene), theirs);
    ++ticks_;
  }
  return rollout_value(sim, player);
}

Action RheaAgent::act(const GameState& s, Player player) {
  const Actuator act = s.actuator(player);
  const int n = s.num_planets();
  const int space = action_space(act, n);
  const auto horizon = static_cast<std::size_t>(budget_.horizon);

  if (space != space_ || genes_.size() != horizon) {
    space_ = space;
    genes_.assign(horizon, 0);
    for (auto& g : genes_) g = rng_.next_int(space);
  } else {
    genes_.erase(genes_.begin());
    genes_.push_back(rng_.next_int(space));
  }

  opponent_seed_ = rng_.next_u64();
  double best = evaluate(s, player, genes_);
  const double rate = 1.0 / static_cast<double>(horizon);
  std::vector<int> mutant;
  for (int it = 0; it < budget_.iterations; ++it) {
    mutant = genes_;
    bool changed = false;
    for (auto& g : mutant) {
      if (rng_.chance(rate)) {
        g = rng_.next_int(space);
        changed = true;
      }
    }
    if (!changed) mutant[rng_.next_below(horizon)] = rng_.next_int(space);
    const double fitness = evaluate(s, player, mutant);
    if (fitness >= best) {
      best = fitness;
      genes_.swap(mutant);
    }
  }
  return action_from_index(act, n, genes_.front());
}

// --- MCTS ------------------------------------------------------------------

int select_ucb1(const std::vector<ChildStats>& children, int parent_visits, double exploration,
                double lo, double hi, Rng& rng) {
  int ties = 0;
  int chosen = -1;
  // Unvisited first.
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (children[i].visits == 0 && rng.next_int(++ties) == 0) chosen = static_cast<int>(i);
  }
  if (chosen >= 0) return chosen;

  const double span = hi - lo;
  const double log_n = std::log(static_cast<double>(std::max(parent_visits, 1)));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < children.size(); ++i) {
    const double mean = children[i].total / children[i].visits;
    const double exploit = span > 0.0 ? (mean - lo) / span : 0.5;
    const double ucb = exploit + exploration * std::sqrt(log_n / children[i].visits);
    if (ucb > best) {
      best = ucb;
      chosen = static_cast<int>(i);
      ties = 1;
    } else if (ucb == best && rng.next_int(++ties) == 0) {
      chosen = static_cast<int>(i);
    }
  }
  return chosen;
}

MctsAgent::MctsAgent(AgentBudget budget, std::uint64_t seed, double exploration)
    : budget_(budget), rng_(seed), exploration_(exploration) {
  if (budget_.horizon < 1 || budget_.iterations < 1) {
    throw std::invalid_argument("mcts: iterations and horizon must be >= 1");
  }
}

std::string MctsAgent::id() const {
  return "mcts:" + std::to_string(budget_.iterations) + ":" + std::to_string(budget_.horizon);
}

Action MctsAgent::act(const GameState& s, Player player) {
  const Player opp = opponent(player);
  nodes_.clear();
  nodes_.emplace_back();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<int> path;
  std::vector<ChildStats> stats;

  for (int it = 0; it < budget_.iterations; ++it) {
    GameState sim = copy_state(s);
    int node = 0;
    int depth = 0;
    path.assign(1, 0);

    // Selection and expansion of one node.
    while (depth < budget_.horizon && !is_terminal(sim)) {
      if (!nodes_[static_cast<std::size_t>(node)].initialised) {
        nodes_[static_cast<std::size_t>(node)].untried = legal_actions(sim, player);
        nodes_[static_cast<std::size_t>(node)].initialised = true;
      }
      auto& untried = nodes_[static_cast<std::size_t>(node)].untried;
      int next;
      bool expanded = false;
      if (!untried.empty()) {
        const auto pick = rng_.next_below(untried.size());
        Node child;
        child.action = untried[pick];
        child.parent = node;
        untried.erase(untried.begin() + static_cast<std::ptrdiff_t>(pick));
        next = static_cast<int>(nodes_.size());
        nodes_[static_cast<std::size_t>(node)].children.push_back(next);
        nodes_.push_back(std::move(child));
        expanded = true;
      } else {
        const auto& kids = nodes_[static_cast<std::size_t>(node)].children;
        stats.clear();
        for (int c : kids) {
          stats.push_back({nodes_[static_cast<std::size_t>(c)].visits, nodes_[static_cast<std::size_t>(c)].total});
        }
        next = kids[static_cast<std::size_t>(
            select_ucb1(stats, nodes_[static_cast<std::size_t>(node)].visits, exploration_, lo, hi, rng_))];
      }
      step(sim, player, nodes_[static_cast<std::size_t>(next)].action, sample_legal_action(sim, opp, rng_));
      ++ticks_;
      ++depth;
      node = next;
      path.push_back(node);
      if (expanded) break;
    }

    // Random rollout to the horizon.
    while (depth < budget_.horizon && !is_terminal(sim)) {
      const Action mine = sample_legal_action(sim, player, rng_);
      step(sim, player, mine, sample_legal_action(sim, opp, rng_));
      ++ticks_;
      ++depth;
    }

    const double value = rollout_value(sim, player);
    lo = std::min(lo, value);
    hi = std::max(hi, value);
    for (int n : path) {
      nodes_[static_cast<std::size_t>(n)].visits += 1;
      nodes_[static_cast<std::size_t>(n)].total += value;
    }
  }

  root_visits_.clear();
  const Node& root = nodes_.front();
  int best = -1;
  for (int c : root.children) {
    const Node& child = nodes_[static_cast<std::size_t>(c)];
    root_visits_.emplace_back(child.action, child.visits);
    if (best < 0) {
      best = c;
      continue;
    }
    const Node& incumbent = nodes_[static_cast<std::size_t>(best)];
    if (child.visits > incumbent.visits ||
        (child.visits == incumbent.visits && child.total / child.visits > incumbent.total / incumbent.visits)) {
      best = c;
    }
  }
  return best < 0 ? Action::noop() : nodes_[static_cast<std::size_t>(best)].action;
}

// --- factory ---------------------------------------------------------------

namespace {

bool parse_budget(const std::string& rest, AgentBudget& out) {
  const auto colon = rest.find(':');
  if (colon == std::string::npos) return false;
  auto parse_int = [](std::string_view text, int& v) {
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    return ec == std::errc{} && ptr == end && v >= 1;
  };
  const std::string_view view(rest);
  return parse_int(view.substr(0, colon), out.iterations) && parse_int(view.substr(colon + 1), out.horizon);
}

}  // namespace

std::unique_ptr<Agent> make_agent(const std::string& id, std::uint64_t seed) {
  if (id == "random") return std::make_unique<RandomAgent>(seed);
  if (id == "heuristic") return std::make_unique<HeuristicAgent>();
  AgentBudget budget;
  if (id.rfind("rhea:", 0) == 0 && parse_budget(id.substr(5), budget)) {
    return std::make_unique<RheaAgent>(budget, seed);
  }
  if (id.rfind("mcts:", 0) == 0 && parse_budget(id.substr(5), budget)) {
    return std::make_unique<MctsAgent>(budget, seed);
  }
  throw std::invalid_argument("unknown agent '" + id + "'");
}

bool is_known_agent(const std::string& id) {
  try {
    make_agent(id, 0);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::vector<std::string> advertised_agents() { return {"random", "heuristic", "rhea:20:200", "mcts:40:100"}; }

}  // namespace planetwars
