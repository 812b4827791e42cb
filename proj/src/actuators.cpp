#include "planetwars/actuators.hpp"

#include <cmath>

namespace planetwars {

namespace {

bool valid_planet(const GameState& s, int id) { return id >= 0 && id < s.num_planets(); }

Planet& planet_at(GameState& s, int id) { return s.planets[static_cast<std::size_t>(id)]; }
const Planet& planet_at(const GameState& s, int id) {
  return s.planets[static_cast<std::size_t>(id)];
}

// Docked and not held by a slingshot press of either player.
bool transporter_free(const GameState& s, int id) {
  return !planet_at(s, id).transporter.in_transit() && s.press_latch[0] != id &&
         s.press_latch[1] != id;
}

bool can_launch_from(const GameState& s, Player player, int id) {
  return valid_planet(s, id) && planet_at(s, id).owner == player && transporter_free(s, id);
}

// Moves `fraction` of the planet's ships onto its transporter so that the
// planet + payload sum is unchanged bit for bit.
double unload_fraction(Planet& planet, double fraction) {
  const double before = planet.ships;
  const double remaining = before - fraction * before;
  planet.ships = remaining;
  return before - remaining;
}

void launch_towards(GameState& s, Player player, int source, int target) {
  Planet& from = planet_at(s, source);
  const Vec2 delta = planet_at(s, target).position - from.position;
  const double len = delta.norm();
  if (len == 0.0) return;
  const double payload = unload_fraction(from, s.parameters().transfer_ratio);
  from.transporter.payload_owner = player;
  launch_transporter(from, delta * (1.0 / len), payload, s.parameters().ship_launch_speed);
}

void launch_latched(GameState& s, int id) {
  Planet& planet = planet_at(s, id);
  const Vec2 dir{std::cos(planet.turret_angle), std::sin(planet.turret_angle)};
  launch_transporter(planet, dir, planet.transporter.payload, s.parameters().ship_launch_speed);
}

double load_latched(GameState& s, Player player, int id) {
  Planet& planet = planet_at(s, id);
  if (planet.owner != player) return 0.0;
  const double before = planet.ships;
  const double amount = std::min(s.parameters().slingshot_load_rate, before);
  const double remaining = before - amount;
  const double moved = before - remaining;
  planet.ships = remaining;
  planet.transporter.payload += moved;
  return moved;
}

}  // namespace

void launch_transporter(Planet& planet, const Vec2& direction, double payload, double speed) {
  Transporter& t = planet.transporter;
  t.status = TransporterStatus::InTransit;
  t.position = planet.position + direction * planet.radius;
  t.velocity = direction * speed;
  t.payload = payload;
}

int action_space(const Actuator& act, int num_planets) {
  if (act.kind == ActuatorKind::Slingshot) return num_planets + 2;
  if (act.one_shot_pairs) return num_planets * num_planets + 1;
  return num_planets + 1;
}

Action action_from_index(const Actuator& act, int n, int index) {
  if (act.kind == ActuatorKind::Slingshot) {
    if (index >= 0 && index < n) return Action::press(index);
    if (index == n) return Action::release();
    return Action::noop();
  }
  if (act.one_shot_pairs) {
    if (index >= 0 && index < n * n) return Action::launch(index / n, index % n);
    return Action::noop();
  }
  if (index >= 0 && index < n) return Action::select(index);
  return Action::noop();
}

int index_of_action(const Actuator& act, int n, const Action& a) {
  const int noop = action_space(act, n) - 1;
  if (act.kind == ActuatorKind::Slingshot) {
    if (a.kind == ActionKind::Press && a.planet >= 0 && a.planet < n) return a.planet;
    if (a.kind == ActionKind::Release) return n;
    return noop;
  }
  if (act.one_shot_pairs) {
    if (a.kind == ActionKind::Launch && a.planet >= 0 && a.planet < n && a.target >= 0 &&
        a.target < n) {
      return a.planet * n + a.target;
    }
    return noop;
  }
  if (a.kind == ActionKind::SelectPlanet && a.planet >= 0 && a.planet < n) return a.planet;
  return noop;
}

DecodeResult decode_source_target(GameState& s, Player player, const Action& a) {
  DecodeResult result;
  const int idx = player_index(player);

  if (s.actuators[static_cast<std::size_t>(idx)].one_shot_pairs) {
    if (a.kind == ActionKind::Launch && can_launch_from(s, player, a.planet) &&
        valid_planet(s, a.target) && a.target != a.planet) {
      launch_towards(s, player, a.planet, a.target);
      result.launched = a.planet;
    }
    return result;
  }

  int& pending = s.pending_source[static_cast<std::size_t>(idx)];
  if (pending != kNone && !can_launch_from(s, player, pending)) pending = kNone;

  if (a.kind != ActionKind::SelectPlanet || !valid_planet(s, a.planet)) {
    pending = kNone;
    return result;
  }
  if (pending == kNone) {
    if (can_launch_from(s, player, a.planet)) pending = a.planet;
    return result;
  }
  if (a.planet != pending) {
    launch_towards(s, player, pending, a.planet);
    result.launched = pending;
  }
  pending = kNone;
  return result;
}

DecodeResult decode_slingshot(GameState& s, Player player, const Action& a) {
  DecodeResult result;
  int& latch = s.press_latch[static_cast<std::size_t>(player_index(player))];

  if (a.kind == ActionKind::Press && a.planet != latch && can_launch_from(s, player, a.planet)) {
    if (latch != kNone) {
      launch_latched(s, latch);
      result.launched = latch;
    }
    latch = a.planet;
    Transporter& t = planet_at(s, latch).transporter;
    t.payload = 0.0;
    t.payload_owner = player;
    result.loaded = load_latched(s, player, latch);
    return result;
  }
  if (latch == kNone) return result;
  if (a.kind == ActionKind::Release) {
    launch_latched(s, latch);
    result.launched = latch;
    latch = kNone;
    return result;
  }
  result.loaded = load_latched(s, player, latch);
  return result;
}

std::array<DecodeResult, 2> apply_actions(GameState& s, const Action& a1, const Action& a2) {
  std::array<DecodeResult, 2> out;
  const std::array<const Action*, 2> actions{&a1, &a2};
  for (int i = 0; i < 2; ++i) {
    const Player p = player_from_index(i);
    out[static_cast<std::size_t>(i)] =
        s.actuators[static_cast<std::size_t>(i)].kind == ActuatorKind::Slingshot
            ? decode_slingshot(s, p, *actions[static_cast<std::size_t>(i)])
            : decode_source_target(s, p, *actions[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<Action> legal_actions(const GameState& s, Player player) {
  return legal_actions(s, player, s.actuator(player));
}

std::vector<Action> legal_actions(const GameState& s, Player player, const Actuator& act) {
  std::vector<Action> out{Action::noop()};
  const int n = s.num_planets();
  const int idx = player_index(player);

  if (act.kind == ActuatorKind::Slingshot) {
    const int latch = s.press_latch[static_cast<std::size_t>(idx)];
    for (int i = 0; i < n; ++i) {
      if (i != latch && can_launch_from(s, player, i)) out.push_back(Action::press(i));
    }
    if (latch != kNone) out.push_back(Action::release());
    return out;
  }

  if (act.one_shot_pairs) {
    for (int i = 0; i < n; ++i) {
      if (!can_launch_from(s, player, i)) continue;
      for (int j = 0; j < n; ++j) {
        if (j != i) out.push_back(Action::launch(i, j));
      }
    }
    return out;
  }

  const int pending = s.pending_source[static_cast<std::size_t>(idx)];
  if (pending != kNone && can_launch_from(s, player, pending)) {
    for (int j = 0; j < n; ++j) {
      if (j != pending) out.push_back(Action::select(j));
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (can_launch_from(s, player, i)) out.push_back(Action::select(i));
  }
  return out;
}

Action sample_legal_action(const GameState& s, Player player, Rng& rng) {
  const Actuator& act = s.actuator(player);
  const int n = s.num_planets();
  const int idx = player_index(player);

  // Counts the legal tokens, then walks to the k-th one in the same order
  // legal_actions() would list them.
  if (act.kind == ActuatorKind::Slingshot) {
    const int latch = s.press_latch[static_cast<std::size_t>(idx)];
    int presses = 0;
    for (int i = 0; i < n; ++i) presses += i != latch && can_launch_from(s, player, i);
    const int total = 1 + presses + (latch != kNone);
    int k = rng.next_int(total);
    if (k == 0) return Action::noop();
    --k;
    for (int i = 0; i < n; ++i) {
      if (i != latch && can_launch_from(s, player, i) && k-- == 0) return Action::press(i);
    }
    return Action::release();
  }

  if (act.one_shot_pairs) {
    int sources = 0;
    for (int i = 0; i < n; ++i) sources += can_launch_from(s, player, i);
    int k = rng.next_int(1 + sources * (n - 1));
    if (k == 0) return Action::noop();
    --k;
    const int nth_source = k / (n - 1);
    int target = k % (n - 1);
    int seen = 0;
    for (int i = 0; i < n; ++i) {
      if (!can_launch_from(s, player, i)) continue;
      if (seen++ != nth_source) continue;
      if (target >= i) ++target;
      return Action::launch(i, target);
    }
    return Action::noop();
  }

  const int pending = s.pending_source[static_cast<std::size_t>(idx)];
  if (pending != kNone && can_launch_from(s, player, pending)) {
    int k = rng.next_int(n);
    if (k == 0) return Action::noop();
    --k;
    return Action::select(k >= pending ? k + 1 : k);
  }
  int sources = 0;
  for (int i = 0; i < n; ++i) sources += can_launch_from(s, player, i);
  int k = rng.next_int(1 + sources);
  if (k == 0) return Action::noop();
  --k;
  for (int i = 0; i < n; ++i) {
    if (can_launch_from(s, player, i) && k-- == 0) return Action::select(i);
  }
  return Action::noop();
}

}  // namespace planetwars
