#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "planetwars/params.hpp"
#include "planetwars/types.hpp"

namespace planetwars {

class MapInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kPlacementAttempts = 1000;

// Point-symmetric random map. Planets 2k and 2k+1 are mirror images about
// the map centre; pair 0 holds the two home planets. With an odd planet
// count the last planet sits at the centre. Centres are integer pixels.
// Throws std::invalid_argument for invalid parameters and MapInfeasible
// when a planet cannot be placed within kPlacementAttempts tries.
std::vector<Planet> generate_map(const GameParameters& p, std::uint64_t seed);

// Index of the planet mirrored through the map centre.
constexpr int mirror_index(int id, int num_planets) {
  if ((num_planets % 2) == 1 && id == num_planets - 1) return id;
  return id ^ 1;
}

// Growth rate as an affine map of radius onto the growth range.
double growth_for_radius(const GameParameters& p, double radius);

}  // namespace planetwars
