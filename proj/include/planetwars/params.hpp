#pragma once

#include <string>
#include <vector>

namespace planetwars {

// Every value that defines a game variant. A game holds one of these by
// shared reference; variants are made by copying and editing.
struct GameParameters {
  int num_planets = 20;
  int map_width = 640;                   // pixels
  int map_height = 480;                  // pixels
  double gravitational_constant = 0.01;  // force = G * radius^2 / d^2
  double growth_rate_min = 0.05;         // ships/tick
  double growth_rate_max = 0.20;         // ships/tick
  double radial_separation = 3.0;        // multiples of the larger radius
  double min_radius = 10.0;              // pixels
  double max_radius = 30.0;              // pixels
  double ship_launch_speed = 2.0;        // pixels/tick
  double transport_tax = 0.01;           // ships/tick while in transit
  double transfer_ratio = 0.5;           // fraction loaded by a source-target launch
  double turret_rotation_rate = 0.05;    // radians/tick
  double slingshot_load_rate = 1.0;      // ships/tick while pressed
  double neutral_garrison_max = 30.0;    // ships
  int max_ticks = 2000;
  int gravity_grid_cell = 1;             // pixels per gravity cell

  bool operator==(const GameParameters&) const = default;
};

inline constexpr double kHomeGarrison = 100.0;

GameParameters default_parameters();

// Empty when valid; otherwise one message per violated invariant, each
// starting with the offending field name.
std::vector<std::string> validate_parameters(const GameParameters& p);

}  // namespace planetwars
