#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "planetwars/actuators.hpp"
#include "planetwars/engine.hpp"
#include "planetwars/rng.hpp"
#include "planetwars/serialize.hpp"

namespace planetwars::testing {

// A small state built by hand: planets at the given positions, gravity
// computed from them, both players on `act`.
inline GameState make_state(GameParameters p, std::vector<Planet> planets,
                            ActuatorPair act = {Actuator::source_target(), Actuator::source_target()}) {
  p.num_planets = static_cast<int>(planets.size());
  GameState s;
  s.params = std::make_shared<const GameParameters>(p);
  for (std::size_t i = 0; i < planets.size(); ++i) {
    planets[i].id = static_cast<int>(i);
    planets[i].transporter.home_planet = static_cast<int>(i);
    planets[i].transporter.position = planets[i].position;
    if (planets[i].owner != Owner::Neutral) planets[i].transporter.payload_owner = planets[i].owner;
  }
  s.planets = std::move(planets);
  s.actuators = act;
  restore_gravity(s);
  return s;
}

inline Planet planet(double x, double y, double r, Owner owner, double ships, double growth = 0.0) {
  Planet p;
  p.position = {x, y};
  p.radius = r;
  p.owner = owner;
  p.ships = ships;
  p.growth_rate = growth;
  return p;
}

inline ActuatorPair random_actuators(Rng& rng) {
  auto pick = [&]() {
    switch (rng.next_int(3)) {
      case 0: return Actuator::source_target();
      case 1: return Actuator::slingshot();
      default: return Actuator::source_target_pairs();
    }
  };
  return {pick(), pick()};
}

// A reachable mid-game state: a fresh map advanced by random legal play.
inline GameState random_state(Rng& rng, int max_ticks_played = 400, bool mixed_actuators = true) {
  GameParameters p = default_parameters();
  p.num_planets = 6 + rng.next_int(15);
  p.transport_tax = rng.chance(0.5) ? 0.0 : rng.uniform(0.0, 0.3);
  p.gravitational_constant = rng.uniform(0.0, 0.05);
  p.gravity_grid_cell = 1 + rng.next_int(4);
  p.max_ticks = 100000;
  const ActuatorPair act = mixed_actuators ? random_actuators(rng) : ActuatorPair{};
  GameState s = new_game(p, rng.next_u64(), act);
  const int ticks = rng.next_int(max_ticks_played + 1);
  for (int t = 0; t < ticks && !is_terminal(s); ++t) {
    const Action a1 = sample_legal_action(s, Owner::Player1, rng);
    const Action a2 = sample_legal_action(s, Owner::Player2, rng);
    advance(s, a1, a2);
  }
  return s;
}

// Ship count including in-transit and loading payloads.
inline double planets_plus_payloads(const GameState& s) {
  double total = 0.0;
  for (const auto& pl : s.planets) total += pl.ships + pl.transporter.payload;
  return total;
}

// Every token that legal_actions() leaves out: the other actuators' tokens,
// out-of-range ids and the unlisted members of the player's own space.
inline std::vector<Action> illegal_actions(const GameState& s, Player player) {
  const int n = s.num_planets();
  std::vector<Action> all{Action::release(), Action::select(-1), Action::select(n), Action::press(-3),
                          Action::press(n + 5), Action::launch(0, n), Action::launch(-1, 0)};
  for (const Actuator act : {Actuator::source_target(), Actuator::slingshot(), Actuator::source_target_pairs()}) {
    for (int i = 0; i < action_space(act, n); ++i) all.push_back(action_from_index(act, n, i));
  }
  const auto legal = legal_actions(s, player);
  std::vector<Action> out;
  for (const auto& a : all) {
    if (std::find(legal.begin(), legal.end(), a) == legal.end() &&
        std::find(out.begin(), out.end(), a) == out.end()) {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace planetwars::testing
