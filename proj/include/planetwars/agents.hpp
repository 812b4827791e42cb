#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "planetwars/engine.hpp"
#include "planetwars/rng.hpp"

namespace planetwars {

// Forward-model ticks a planner spends per move: iterations * horizon.
struct AgentBudget {
  int iterations = 20;
  int horizon = 200;
};

inline constexpr double kTerminalBonus = 1000.0;

class Agent {
 public:
  virtual ~Agent() = default;

  // Never mutates `s`; planners work on private copies.
  virtual Action act(const GameState& s, Player player) = 0;
  virtual std::string id() const = 0;
  // Cumulative forward-model ticks simulated by this agent.
  virtual std::uint64_t forward_ticks() const { return 0; }
};

// Planning objective at the end of a rollout: score, plus a bonus or
// penalty if the rollout reached a decided game.
double rollout_value(const GameState& s, Player player);

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  Action act(const GameState& s, Player player) override { return sample_legal_action(s, player, rng_); }
  std::string id() const override { return "random"; }

 private:
  Rng rng_;
};

// Greedy scripted player: launches from its strongest free planet at the
// planet that looks cheapest to take.
class HeuristicAgent final : public Agent {
 public:
  Action act(const GameState& s, Player player) override;
  std::string id() const override { return "heuristic"; }

  // Planet minimising garrison + growthRate * distance / launchSpeed over
  // planets not owned by `player`; kNone if there is none.
  static int pick_target(const GameState& s, Player player, int source);
  // Owned planet with the most ships whose transporter is free; kNone if none.
  static int pick_source(const GameState& s, Player player);
};

// (1+1) rolling horizon evolution over action-index sequences with a shift
// buffer carried between moves.
class RheaAgent final : public Agent {
 public:
  RheaAgent(AgentBudget budget, std::uint64_t seed);
  Action act(const GameState& s, Player player) override;
  std::string id() const override;
  std::uint64_t forward_ticks() const override { return ticks_; }

  const std::vector<int>& incumbent() const { return genes_; }
  // Fitness of `genes` from `s`: one rollout against a random opponent.
  double evaluate(const GameState& s, Player player, const std::vector<int>& genes);

 private:
  AgentBudget budget_;
  Rng rng_;
  std::vector<int> genes_;
  std::uint64_t opponent_seed_ = 0;
  int space_ = 0;
  std::uint64_t ticks_ = 0;
};

// Open-loop UCT: the tree stores action sequences and every iteration
// re-simulates from the root state.
class MctsAgent final : public Agent {
 public:
  MctsAgent(AgentBudget budget, std::uint64_t seed, double exploration = 1.4142135623730951);
  Action act(const GameState& s, Player player) override;
  std::string id() const override;
  std::uint64_t forward_ticks() const override { return ticks_; }

  // Visit counts of the root's children after the last act(), in expansion order.
  const std::vector<std::pair<Action, int>>& last_root_visits() const { return root_visits_; }

 private:
  struct Node {
    Action action;
    int parent = -1;
    std::vector<int> children;
    std::vector<Action> untried;
    bool initialised = false;
    int visits = 0;
    double total = 0.0;
  };

  AgentBudget budget_;
  Rng rng_;
  double exploration_;
  std::vector<Node> nodes_;
  std::vector<std::pair<Action, int>> root_visits_;
  std::uint64_t ticks_ = 0;
};

struct ChildStats {
  int visits = 0;
  double total = 0.0;
};

// UCB1 over children with rewards normalised into [0, 1] by [lo, hi].
// Unvisited children are taken first; ties are broken uniformly at random.
int select_ucb1(const std::vector<ChildStats>& children, int parent_visits, double exploration,
                double lo, double hi, Rng& rng);

// "random", "heuristic", "rhea:ITER:HORIZON", "mcts:ITER:HORIZON". Throws
// std::invalid_argument for anything else.
std::unique_ptr<Agent> make_agent(const std::string& id, std::uint64_t seed);
bool is_known_agent(const std::string& id);
// Identifiers advertised to clients.
std::vector<std::string> advertised_agents();

}  // namespace planetwars
