#pragma once

#include <cstdint>
#include <string_view>

#include "planetwars/vec2.hpp"

namespace planetwars {

enum class Owner : std::uint8_t { Neutral = 0, Player1 = 1, Player2 = 2 };

// Player1 or Player2; Neutral is never a player.
using Player = Owner;

constexpr int player_index(Player p) { return static_cast<int>(p) - 1; }
constexpr Player player_from_index(int i) { return i == 0 ? Owner::Player1 : Owner::Player2; }
constexpr Player opponent(Player p) {
  return p == Owner::Player1 ? Owner::Player2 : Owner::Player1;
}

std::string_view to_string(Owner o);
Owner owner_from_string(std::string_view s);

enum class TransporterStatus : std::uint8_t { Docked, InTransit };

struct Transporter {
  int home_planet = 0;
  TransporterStatus status = TransporterStatus::Docked;
  Vec2 position;
  Vec2 velocity;
  double payload = 0.0;
  Player payload_owner = Owner::Player1;

  bool in_transit() const { return status == TransporterStatus::InTransit; }
  bool operator==(const Transporter&) const = default;
};

struct Planet {
  int id = 0;
  Vec2 position;
  double radius = 0.0;
  double growth_rate = 0.0;
  Owner owner = Owner::Neutral;
  double ships = 0.0;
  double turret_angle = 0.0;
  Transporter transporter;

  bool operator==(const Planet&) const = default;
};

}  // namespace planetwars
