#pragma once

#include <vector>

#include "planetwars/rng.hpp"
#include "planetwars/state.hpp"

namespace planetwars {

// Number of distinct action tokens.
//   SourceTarget: SelectPlanet(0..N-1), NoOp              -> N + 1
//   SourceTarget (one-shot pairs): Launch(i, j) as i*N+j, NoOp -> N*N + 1
//   Slingshot: Press(0..N-1), Release, NoOp               -> N + 2
int action_space(const Actuator& act, int num_planets);
inline int action_space(const Actuator& act, const GameParameters& p) {
  return action_space(act, p.num_planets);
}

Action action_from_index(const Actuator& act, int num_planets, int index);
int index_of_action(const Actuator& act, int num_planets, const Action& a);

struct DecodeResult {
  int launched = kNone;  // planet whose transporter left this tick
  double loaded = 0.0;   // ships moved onto a docked transporter
};

// Two-tick pairing: SelectPlanet(source) then SelectPlanet(target).
// A stale pending source (lost planet or busy transporter) is dropped
// before the action is read. Illegal selections are ignored.
DecodeResult decode_source_target(GameState& s, Player player, const Action& a);

// Press latches an owned planet with a docked transporter and loads every
// tick while latched; Release (or Press on another legal planet) launches
// along the turret. Illegal presses are ignored.
DecodeResult decode_slingshot(GameState& s, Player player, const Action& a);

// Decodes a1 then a2 with each player's actuator.
std::array<DecodeResult, 2> apply_actions(GameState& s, const Action& a1, const Action& a2);

// Actions that are not guaranteed to behave like NoOp this tick. NoOp is
// always first.
std::vector<Action> legal_actions(const GameState& s, Player player);
std::vector<Action> legal_actions(const GameState& s, Player player, const Actuator& act);

// Uniform draw from legal_actions(s, player) without building the list.
Action sample_legal_action(const GameState& s, Player player, Rng& rng);

// Sends the transporter of `planet` off with `payload` ships along the unit
// vector `direction`, starting from the planet surface.
void launch_transporter(Planet& planet, const Vec2& direction, double payload, double speed);

}  // namespace planetwars
