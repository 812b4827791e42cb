#include "planetwars/map_gen.hpp"

#include <cmath>
#include <string>

#include "planetwars/rng.hpp"

namespace planetwars {

namespace {

struct Candidate {
  Vec2 position;
  double radius;
};

bool separated(const std::vector<Candidate>& placed, const Vec2& pos, double radius,
               double separation) {
  for (const auto& c : placed) {
    const double need = separation * std::max(radius, c.radius);
    if ((c.position - pos).norm2() < need * need) return false;
  }
  return true;
}

}  // namespace

double growth_for_radius(const GameParameters& p, double radius) {
  const double span = p.max_radius - p.min_radius;
  const double t = span > 0.0 ? (radius - p.min_radius) / span : 0.5;
  return p.growth_rate_min + t * (p.growth_rate_max - p.growth_rate_min);
}

std::vector<Planet> generate_map(const GameParameters& p, std::uint64_t seed) {
  if (auto errors = validate_parameters(p); !errors.empty()) {
    std::string joined;
    for (const auto& e : errors) joined += (joined.empty() ? "" : "; ") + e;
    throw std::invalid_argument("invalid parameters: " + joined);
  }

  Rng rng(seed);
  const int n = p.num_planets;
  const bool has_centre = (n % 2) == 1;
  const double w = p.map_width;
  const double h = p.map_height;

  std::vector<Candidate> placed;
  placed.reserve(static_cast<std::size_t>(n));

  // The centre planet goes down first so that pairs are placed around it,
  // but it is stored last.
  Candidate centre{};
  if (has_centre) {
    centre = {{w / 2.0, h / 2.0}, rng.uniform(p.min_radius, p.max_radius)};
    placed.push_back(centre);
  }

  std::vector<Candidate> pairs;
  for (int pair = 0; pair < n / 2; ++pair) {
    const double radius = rng.uniform(p.min_radius, p.max_radius);
    const auto lo = static_cast<long long>(std::ceil(radius));
    const auto hi_x = static_cast<long long>(std::floor(w - radius));
    const auto hi_y = static_cast<long long>(std::floor(h - radius));
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      const Vec2 pos{static_cast<double>(rng.range(lo, hi_x)),
                     static_cast<double>(rng.range(lo, hi_y))};
      const Vec2 mirror{w - pos.x, h - pos.y};
      const double self_gap = p.radial_separation * radius;
      if ((pos - mirror).norm2() < self_gap * self_gap) continue;
      if (!separated(placed, pos, radius, p.radial_separation)) continue;
      if (!separated(placed, mirror, radius, p.radial_separation)) continue;
      placed.push_back({pos, radius});
      placed.push_back({mirror, radius});
      pairs.push_back({pos, radius});
      pairs.push_back({mirror, radius});
      ok = true;
    }
    if (!ok) {
      throw MapInfeasible("map infeasible: could not place planet " + std::to_string(2 * pair) +
                          " after " + std::to_string(kPlacementAttempts) + " attempts");
    }
  }

  std::vector<Planet> planets;
  planets.reserve(static_cast<std::size_t>(n));
  auto add = [&](const Candidate& c) {
    Planet planet;
    planet.id = static_cast<int>(planets.size());
    planet.position = c.position;
    planet.radius = c.radius;
    planet.growth_rate = growth_for_radius(p, c.radius);
    planet.transporter.home_planet = planet.id;
    planet.transporter.position = c.position;
    planets.push_back(planet);
  };
  for (const auto& c : pairs) add(c);
  if (has_centre) add(centre);

  planets[0].owner = Owner::Player1;
  planets[1].owner = Owner::Player2;
  planets[0].ships = planets[1].ships = kHomeGarrison;
  planets[0].transporter.payload_owner = Owner::Player1;
  planets[1].transporter.payload_owner = Owner::Player2;
  for (int i = 2; i + 1 < n; i += 2) {
    const double garrison = rng.uniform(0.0, p.neutral_garrison_max);
    planets[static_cast<std::size_t>(i)].ships = garrison;
    planets[static_cast<std::size_t>(i) + 1].ships = garrison;
  }
  if (has_centre) planets.back().ships = rng.uniform(0.0, p.neutral_garrison_max);
  return planets;
}

}  // namespace planetwars
