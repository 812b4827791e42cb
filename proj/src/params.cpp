#include "planetwars/params.hpp"

#include <cmath>

namespace planetwars {

GameParameters default_parameters() { return GameParameters{}; }

std::vector<std::string> validate_parameters(const GameParameters& p) {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const char* message) {
    if (!ok) errors.emplace_back(message);
  };
  auto finite = [](double v) { return std::isfinite(v); };

  require(p.num_planets >= 2, "numPlanets: must be >= 2");
  require(finite(p.min_radius) && p.min_radius > 0.0, "minRadius: must be > 0");
  require(finite(p.max_radius) && p.max_radius >= p.min_radius, "maxRadius: must be >= minRadius");
  require(p.map_width > 4.0 * p.max_radius, "mapWidth: must be > 4 * maxRadius");
  require(p.map_height > 4.0 * p.max_radius, "mapHeight: must be > 4 * maxRadius");
  require(finite(p.gravitational_constant) && p.gravitational_constant >= 0.0,
          "gravitationalConstant: must be >= 0");
  require(finite(p.growth_rate_min) && p.growth_rate_min >= 0.0, "growthRateMin: must be >= 0");
  require(finite(p.growth_rate_max) && p.growth_rate_max >= p.growth_rate_min,
          "growthRateMax: must be >= growthRateMin");
  require(finite(p.radial_separation) && p.radial_separation >= 0.0,
          "radialSeparation: must be >= 0");
  require(finite(p.ship_launch_speed) && p.ship_launch_speed >= 0.0,
          "shipLaunchSpeed: must be >= 0");
  require(finite(p.transport_tax) && p.transport_tax >= 0.0, "transportTax: must be >= 0");
  require(finite(p.transfer_ratio) && p.transfer_ratio > 0.0 && p.transfer_ratio <= 1.0,
          "transferRatio: must be in (0, 1]");
  require(finite(p.turret_rotation_rate) && p.turret_rotation_rate >= 0.0,
          "turretRotationRate: must be >= 0");
  require(finite(p.slingshot_load_rate) && p.slingshot_load_rate >= 0.0,
          "slingshotLoadRate: must be >= 0");
  require(finite(p.neutral_garrison_max) && p.neutral_garrison_max >= 0.0,
          "neutralGarrisonMax: must be >= 0");
  require(p.max_ticks >= 0, "maxTicks: must be >= 0");
  require(p.gravity_grid_cell >= 1, "gravityGridCell: must be >= 1");
  return errors;
}

}  // namespace planetwars
