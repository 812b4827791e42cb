#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "planetwars/actuators.hpp"
#include "planetwars/state.hpp"

namespace planetwars {

enum class Outcome : std::uint8_t { P1Win, P2Win, Draw };

std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

inline constexpr double kPlanetWeight = 10.0;

// Builds map and gravity field for a fresh game.
GameState new_game(const GameParameters& p, std::uint64_t seed,
                   ActuatorPair actuators = {Actuator::source_target(), Actuator::source_target()});
GameState new_game(std::shared_ptr<const GameParameters> p, std::uint64_t seed,
                   ActuatorPair actuators = {Actuator::source_target(), Actuator::source_target()});

// Recomputes the gravity field of a deserialized state.
void restore_gravity(GameState& s);

// Per-tick bookkeeping of every way the ship total changed.
struct TickReport {
  double growth = 0.0;
  double tax = 0.0;          // ships actually removed by transport tax
  double off_map_loss = 0.0;
  double combat_loss = 0.0;  // ships destroyed in arrivals
  int launches = 0;
  int arrivals = 0;
  int lost_transporters = 0;
  int payload_flips = 0;
};

// In-place transition; planners use this on private copies.
void advance(GameState& s, const Action& a1, const Action& a2, TickReport* report = nullptr);

inline GameState next_state(const GameState& s, const Action& a1, const Action& a2) {
  GameState next = s;
  advance(next, a1, a2);
  return next;
}

// Adds a payload to a planet: reinforcement when owners match, otherwise
// combat, with the payload owner taking the planet if it ends up ahead.
void apply_arrival(Planet& planet, Player payload_owner, double payload);

// Planet after `t` lands on it. The transporter itself is re-docked by the
// caller at its home planet.
Planet resolve_arrival(Planet planet, const Transporter& t);

std::optional<Outcome> is_terminal(const GameState& s);

// Ships on owned planets plus in-transit and loading payloads owned by p.
double player_ships(const GameState& s, Player p);
int owned_planets(const GameState& s, Player p);
// Every ship on the map, neutral ones included.
double total_ships(const GameState& s);

// Ship differential plus weight * owned-planet differential; antisymmetric.
double score(const GameState& s, Player p, double planet_weight = kPlanetWeight);

}  // namespace planetwars
