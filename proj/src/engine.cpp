#include "planetwars/engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "planetwars/map_gen.hpp"

namespace planetwars {

std::string_view to_string(Owner o) {
  switch (o) {
    case Owner::Neutral: return "Neutral";
    case Owner::Player1: return "Player1";
    case Owner::Player2: return "Player2";
  }
  return "Neutral";
}

Owner owner_from_string(std::string_view s) {
  if (s == "Neutral") return Owner::Neutral;
  if (s == "Player1" || s == "P1") return Owner::Player1;
  if (s == "Player2" || s == "P2") return Owner::Player2;
  throw std::invalid_argument("unknown owner '" + std::string(s) + "'");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::P1Win: return "P1Win";
    case Outcome::P2Win: return "P2Win";
    case Outcome::Draw: return "Draw";
  }
  return "Draw";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "P1Win") return Outcome::P1Win;
  if (s == "P2Win") return Outcome::P2Win;
  if (s == "Draw") return Outcome::Draw;
  throw std::invalid_argument("unknown outcome '" + std::string(s) + "'");
}

bool same_state(const GameState& a, const GameState& b) {
  return a.tick == b.tick && a.planets == b.planets && a.params && b.params &&
         *a.params == *b.params && a.actuators == b.actuators &&
         a.pending_source == b.pending_source && a.press_latch == b.press_latch;
}

GameState new_game(const GameParameters& p, std::uint64_t seed, ActuatorPair actuators) {
  return new_game(std::make_shared<const GameParameters>(p), seed, actuators);
}

GameState new_game(std::shared_ptr<const GameParameters> p, std::uint64_t seed,
                   ActuatorPair actuators) {
  GameState s;
  s.params = std::move(p);
  s.planets = generate_map(*s.params, seed);
  s.actuators = actuators;
  const Vec2 centre{s.params->map_width / 2.0, s.params->map_height / 2.0};
  for (auto& planet : s.planets) {
    const Vec2 d = centre - planet.position;
    planet.turret_angle = std::atan2(d.y, d.x);
    if (planet.turret_angle < 0.0) planet.turret_angle += 2.0 * std::numbers::pi;
  }
  restore_gravity(s);
  return s;
}

void restore_gravity(GameState& s) {
  s.gravity = std::make_shared<const GravityField>(compute_gravity_field(s.planets, *s.params));
}

void apply_arrival(Planet& planet, Player payload_owner, double payload) {
  if (payload_owner == planet.owner) {
    planet.ships += payload;
    return;
  }
  const double result = planet.ships - payload;
  if (result < 0.0) {
    planet.owner = payload_owner;
    planet.ships = -result;
  } else {
    planet.ships = result;
  }
}

Planet resolve_arrival(Planet planet, const Transporter& t) {
  apply_arrival(planet, t.payload_owner, t.payload);
  return planet;
}

namespace {

void dock(Planet& home) {
  Transporter& t = home.transporter;
  t.status = TransporterStatus::Docked;
  t.position = home.position;
  t.velocity = {};
  t.payload = 0.0;
}

int find_arrival(const GameState& s, const GravityField& field, const Vec2& pos) {
  const std::int32_t hint = field.planet_hint(pos);
  if (hint == GravityField::kEmpty) return kNone;
  if (hint >= 0) {
    const Planet& planet = s.planets[static_cast<std::size_t>(hint)];
    return (pos - planet.position).norm2() <= planet.radius * planet.radius ? hint : kNone;
  }
  for (const auto& planet : s.planets) {
    if ((pos - planet.position).norm2() <= planet.radius * planet.radius) return planet.id;
  }
  return kNone;
}

struct Arrival {
  int transporter;  // home planet of the arriving transporter
  int planet;
};

}  // namespace

void advance(GameState& s, const Action& a1, const Action& a2, TickReport* report) {
  if (!s.gravity) throw std::logic_error("advance: gravity field missing; call restore_gravity");
  const GameParameters& p = *s.params;
  const GravityField& field = *s.gravity;
  TickReport local;
  TickReport& r = report ? *report : local;
  r = TickReport{};

  // (1) actuators
  const auto decoded = apply_actions(s, a1, a2);
  r.launches = (decoded[0].launched != kNone) + (decoded[1].launched != kNone);

  // (2) growth, (3) turret rotation
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (auto& planet : s.planets) {
    if (planet.owner != Owner::Neutral) {
      planet.ships += planet.growth_rate;
      r.growth += planet.growth_rate;
    }
    planet.turret_angle += p.turret_rotation_rate;
    if (planet.turret_angle >= kTwoPi) planet.turret_angle -= kTwoPi;
  }

  // (4) transit integration, semi-implicit Euler
  const double margin = 2.0 * p.max_radius;
  const double tax = p.transport_tax;
  std::vector<Arrival> arrivals;
  for (auto& planet : s.planets) {
    Transporter& t = planet.transporter;
    if (!t.in_transit()) continue;
    t.velocity += field.at(t.position);
    t.position += t.velocity;
    if (tax > 0.0) {
      const double before = t.payload;
      const double left = before - tax;
      if (left < 0.0) {
        t.payload_owner = opponent(t.payload_owner);
        t.payload = -left;
        ++r.payload_flips;
      } else {
        t.payload = left;
      }
      r.tax += before - t.payload;
    }
    if (t.position.x < -margin || t.position.y < -margin || t.position.x > p.map_width + margin ||
        t.position.y > p.map_height + margin) {
      r.off_map_loss += t.payload;
      ++r.lost_transporters;
      dock(planet);
      continue;
    }
    if (const int hit = find_arrival(s, field, t.position); hit != kNone) {
      arrivals.push_back({planet.id, hit});
    }
  }

  // (5) arrivals. Simultaneous arrivals at one planet are netted per owner
  // first, so the outcome does not depend on transporter order.
  r.arrivals = static_cast<int>(arrivals.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    if (arrivals[i].planet == kNone) continue;
    const int target_id = arrivals[i].planet;
    std::array<double, 2> incoming{0.0, 0.0};
    for (std::size_t j = i; j < arrivals.size(); ++j) {
      if (arrivals[j].planet != target_id) continue;
      Planet& home = s.planets[static_cast<std::size_t>(arrivals[j].transporter)];
      incoming[static_cast<std::size_t>(player_index(home.transporter.payload_owner))] +=
          home.transporter.payload;
      dock(home);
      arrivals[j].planet = kNone;
    }
    Planet& target = s.planets[static_cast<std::size_t>(target_id)];
    const double before = target.ships + incoming[0] + incoming[1];
    if (incoming[0] > incoming[1]) {
      apply_arrival(target, Owner::Player1, incoming[0] - incoming[1]);
    } else if (incoming[1] > incoming[0]) {
      apply_arrival(target, Owner::Player2, incoming[1] - incoming[0]);
    }
    r.combat_loss += before - target.ships;
  }

  // (6)
  ++s.tick;
}

namespace {

bool latched(const GameState& s, int id) { return s.press_latch[0] == id || s.press_latch[1] == id; }

double ships_at(const GameState& s, const Planet& planet, Player p) {
  double v = planet.owner == p ? planet.ships : 0.0;
  const Transporter& t = planet.transporter;
  if (t.payload_owner == p && (t.in_transit() || latched(s, planet.id))) v += t.payload;
  return v;
}

}  // namespace

// Mirror pairs are summed first so that mirrored positions give bit-equal
// totals for the two players.
double player_ships(const GameState& s, Player p) {
  const std::size_t n = s.planets.size();
  double total = 0.0;
  std::size_t i = 0;
  for (; i + 1 < n; i += 2) total += ships_at(s, s.planets[i], p) + ships_at(s, s.planets[i + 1], p);
  if (i < n) total += ships_at(s, s.planets[i], p);
  return total;
}

int owned_planets(const GameState& s, Player p) {
  int count = 0;
  for (const auto& planet : s.planets) count += planet.owner == p;
  return count;
}

double total_ships(const GameState& s) {
  double total = 0.0;
  for (const auto& planet : s.planets) {
    total += planet.ships;
    if (planet.transporter.in_transit() || latched(s, planet.id)) total += planet.transporter.payload;
  }
  return total;
}

std::optional<Outcome> is_terminal(const GameState& s) {
  auto alive = [&](Player p) {
    for (const auto& planet : s.planets) {
      if (planet.owner == p) return true;
      const Transporter& t = planet.transporter;
      if (t.payload_owner == p && t.payload > 0.0 && (t.in_transit() || latched(s, planet.id))) {
        return true;
      }
    }
    return false;
  };
  const bool p1 = alive(Owner::Player1);
  const bool p2 = alive(Owner::Player2);
  if (!p1 && !p2) return Outcome::Draw;
  if (!p2) return Outcome::P1Win;
  if (!p1) return Outcome::P2Win;
  if (s.tick >= s.params->max_ticks) {
    const double t1 = player_ships(s, Owner::Player1);
    const double t2 = player_ships(s, Owner::Player2);
    if (t1 > t2) return Outcome::P1Win;
    if (t2 > t1) return Outcome::P2Win;
    return Outcome::Draw;
  }
  return std::nullopt;
}

double score(const GameState& s, Player p, double planet_weight) {
  const Player o = opponent(p);
  const double ships = player_ships(s, p) - player_ships(s, o);
  const double planets = static_cast<double>(owned_planets(s, p) - owned_planets(s, o));
  return ships + planet_weight * planets;
}

}  // namespace planetwars
