#pragma once

#include <array>
#include <memory>
#include <vector>

#include "planetwars/gravity.hpp"
#include "planetwars/params.hpp"
#include "planetwars/types.hpp"

namespace planetwars {

enum class ActionKind : std::uint8_t { NoOp, SelectPlanet, Press, Release, Launch };

// One player's input for one tick. Its meaning depends on the player's
// actuator; tokens belonging to another actuator act as NoOp.
struct Action {
  ActionKind kind = ActionKind::NoOp;
  int planet = -1;
  int target = -1;  // Launch only

  static constexpr Action noop() { return {}; }
  static constexpr Action select(int id) { return {ActionKind::SelectPlanet, id, -1}; }
  static constexpr Action press(int id) { return {ActionKind::Press, id, -1}; }
  static constexpr Action release() { return {ActionKind::Release, -1, -1}; }
  static constexpr Action launch(int source, int dest) { return {ActionKind::Launch, source, dest}; }

  bool operator==(const Action&) const = default;
};

enum class ActuatorKind : std::uint8_t { SourceTarget, Slingshot };

struct Actuator {
  ActuatorKind kind = ActuatorKind::SourceTarget;
  // SourceTarget only: encode each (source, target) pair as a single
  // Launch token instead of two consecutive SelectPlanet ticks.
  bool one_shot_pairs = false;

  static constexpr Actuator source_target() { return {}; }
  static constexpr Actuator slingshot() { return {ActuatorKind::Slingshot, false}; }
  static constexpr Actuator source_target_pairs() { return {ActuatorKind::SourceTarget, true}; }

  bool operator==(const Actuator&) const = default;
};

using ActuatorPair = std::array<Actuator, 2>;

inline constexpr int kNone = -1;

struct GameState {
  int tick = 0;
  std::vector<Planet> planets;
  std::shared_ptr<const GameParameters> params;
  // Absent after deserialization until restore_gravity() runs.
  std::shared_ptr<const GravityField> gravity;
  ActuatorPair actuators{};
  std::array<int, 2> pending_source{kNone, kNone};
  std::array<int, 2> press_latch{kNone, kNone};

  const GameParameters& parameters() const { return *params; }
  int num_planets() const { return static_cast<int>(planets.size()); }
  const Actuator& actuator(Player p) const { return actuators[player_index(p)]; }
};

// Deep copy of planets and transporters; parameters and gravity are shared.
inline GameState copy_state(const GameState& s) { return s; }

// Field-for-field equality, comparing parameters by value and ignoring
// whether gravity is attached.
bool same_state(const GameState& a, const GameState& b);

}  // namespace planetwars
