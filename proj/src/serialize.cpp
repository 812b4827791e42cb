#include "planetwars/serialize.hpp"

#include <bit>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace planetwars {

namespace {

json optional_id(int id) { return id == kNone ? json(nullptr) : json(id); }
int id_from(const json& j) { return j.is_null() ? kNone : j.get<int>(); }

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

const std::set<std::string>& parameter_keys() {
  static const std::set<std::string> keys{
      "numPlanets",       "mapWidth",           "mapHeight",          "gravitationalConstant",
      "growthRateMin",    "growthRateMax",      "radialSeparation",   "minRadius",
      "maxRadius",        "shipLaunchSpeed",    "transportTax",       "transferRatio",
      "turretRotationRate", "slingshotLoadRate", "neutralGarrisonMax", "maxTicks",
      "gravityGridCell"};
  return keys;
}

}  // namespace

void to_json(json& j, const GameParameters& p) {
  j = json{{"numPlanets", p.num_planets},
           {"mapWidth", p.map_width},
           {"mapHeight", p.map_height},
           {"gravitationalConstant", p.gravitational_constant},
           {"growthRateMin", p.growth_rate_min},
           {"growthRateMax", p.growth_rate_max},
           {"radialSeparation", p.radial_separation},
           {"minRadius", p.min_radius},
           {"maxRadius", p.max_radius},
           {"shipLaunchSpeed", p.ship_launch_speed},
           {"transportTax", p.transport_tax},
           {"transferRatio", p.transfer_ratio},
           {"turretRotationRate", p.turret_rotation_rate},
           {"slingshotLoadRate", p.slingshot_load_rate},
           {"neutralGarrisonMax", p.neutral_garrison_max},
           {"maxTicks", p.max_ticks},
           {"gravityGridCell", p.gravity_grid_cell}};
}

void from_json(const json& j, GameParameters& p) {
  if (!j.is_object()) throw std::invalid_argument("parameters must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!parameter_keys().contains(key)) throw std::invalid_argument("unknown parameter '" + key + "'");
  }
  read_if(j, "numPlanets", p.num_planets);
  read_if(j, "mapWidth", p.map_width);
  read_if(j, "mapHeight", p.map_height);
  read_if(j, "gravitationalConstant", p.gravitational_constant);
  read_if(j, "growthRateMin", p.growth_rate_min);
  read_if(j, "growthRateMax", p.growth_rate_max);
  read_if(j, "radialSeparation", p.radial_separation);
  read_if(j, "minRadius", p.min_radius);
  read_if(j, "maxRadius", p.max_radius);
  read_if(j, "shipLaunchSpeed", p.ship_launch_speed);
  read_if(j, "transportTax", p.transport_tax);
  read_if(j, "transferRatio", p.transfer_ratio);
  read_if(j, "turretRotationRate", p.turret_rotation_rate);
  read_if(j, "slingshotLoadRate", p.slingshot_load_rate);
  read_if(j, "neutralGarrisonMax", p.neutral_garrison_max);
  read_if(j, "maxTicks", p.max_ticks);
  read_if(j, "gravityGridCell", p.gravity_grid_cell);
}

void to_json(json& j, const Transporter& t) {
  j = json{{"homePlanet", t.home_planet},
           {"status", t.in_transit() ? "InTransit" : "Docked"},
           {"x", t.position.x},
           {"y", t.position.y},
           {"vx", t.velocity.x},
           {"vy", t.velocity.y},
           {"payload", t.payload},
           {"payloadOwner", to_string(t.payload_owner)}};
}

void from_json(const json& j, Transporter& t) {
  t.home_planet = j.at("homePlanet").get<int>();
  const auto status = j.at("status").get<std::string>();
  if (status == "InTransit") {
    t.status = TransporterStatus::InTransit;
  } else if (status == "Docked") {
    t.status = TransporterStatus::Docked;
  } else {
    throw std::invalid_argument("unknown transporter status '" + status + "'");
  }
  t.position = {j.at("x").get<double>(), j.at("y").get<double>()};
  t.velocity = {j.at("vx").get<double>(), j.at("vy").get<double>()};
  t.payload = j.at("payload").get<double>();
  t.payload_owner = owner_from_string(j.at("payloadOwner").get<std::string>());
  if (t.payload_owner == Owner::Neutral) throw std::invalid_argument("payloadOwner cannot be Neutral");
}

void to_json(json& j, const Planet& p) {
  j = json{{"id", p.id},
           {"x", p.position.x},
           {"y", p.position.y},
           {"radius", p.radius},
           {"growthRate", p.growth_rate},
           {"owner", to_string(p.owner)},
           {"ships", p.ships},
           {"turretAngle", p.turret_angle},
           {"transporter", p.transporter}};
}

void from_json(const json& j, Planet& p) {
  p.id = j.at("id").get<int>();
  p.position = {j.at("x").get<double>(), j.at("y").get<double>()};
  p.radius = j.at("radius").get<double>();
  p.growth_rate = j.at("growthRate").get<double>();
  p.owner = owner_from_string(j.at("owner").get<std::string>());
  p.ships = j.at("ships").get<double>();
  p.turret_angle = j.at("turretAngle").get<double>();
  p.transporter = j.at("transporter").get<Transporter>();
}

void to_json(json& j, const Action& a) {
  switch (a.kind) {
    case ActionKind::NoOp: j = json{{"kind", "noop"}}; return;
    case ActionKind::SelectPlanet: j = json{{"kind", "select"}, {"planet", a.planet}}; return;
    case ActionKind::Press: j = json{{"kind", "press"}, {"planet", a.planet}}; return;
    case ActionKind::Release: j = json{{"kind", "release"}}; return;
    case ActionKind::Launch:
      j = json{{"kind", "launch"}, {"planet", a.planet}, {"target", a.target}};
      return;
  }
}

void from_json(const json& j, Action& a) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "noop") {
    a = Action::noop();
  } else if (kind == "select") {
    a = Action::select(j.at("planet").get<int>());
  } else if (kind == "press") {
    a = Action::press(j.at("planet").get<int>());
  } else if (kind == "release") {
    a = Action::release();
  } else if (kind == "launch") {
    a = Action::launch(j.at("planet").get<int>(), j.at("target").get<int>());
  } else {
    throw std::invalid_argument("unknown action kind '" + kind + "'");
  }
}

void to_json(json& j, const Actuator& a) {
  j = json{{"kind", a.kind == ActuatorKind::Slingshot ? "Slingshot" : "SourceTarget"},
           {"oneShotPairs", a.one_shot_pairs}};
}

void from_json(const json& j, Actuator& a) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Slingshot") {
    a.kind = ActuatorKind::Slingshot;
  } else if (kind == "SourceTarget") {
    a.kind = ActuatorKind::SourceTarget;
  } else {
    throw std::invalid_argument("unknown actuator '" + kind + "'");
  }
  a.one_shot_pairs = j.value("oneShotPairs", false);
}

void to_json(json& j, const GameState& s) {
  j = json{{"tick", s.tick},
           {"parameters", *s.params},
           {"actuators", s.actuators},
           {"pendingSource", {optional_id(s.pending_source[0]), optional_id(s.pending_source[1])}},
           {"pressLatch", {optional_id(s.press_latch[0]), optional_id(s.press_latch[1])}},
           {"planets", s.planets},
           {"gravity", nullptr}};
}

void from_json(const json& j, GameState& s) {
  s.tick = j.at("tick").get<int>();
  s.params = std::make_shared<const GameParameters>(j.at("parameters").get<GameParameters>());
  s.actuators = j.at("actuators").get<ActuatorPair>();
  const auto& pending = j.at("pendingSource");
  const auto& latch = j.at("pressLatch");
  s.pending_source = {id_from(pending.at(0)), id_from(pending.at(1))};
  s.press_latch = {id_from(latch.at(0)), id_from(latch.at(1))};
  s.planets = j.at("planets").get<std::vector<Planet>>();
  s.gravity.reset();
  for (std::size_t i = 0; i < s.planets.size(); ++i) {
    if (s.planets[i].id != static_cast<int>(i)) throw std::invalid_argument("planet ids must be 0..N-1 in order");
  }
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) { bytes(&v, sizeof v); }
  void i64(long long v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t state_hash(const GameState& s) {
  Fnv1a h;
  h.i64(s.tick);
  const GameParameters& p = *s.params;
  for (long long v : {p.num_planets, p.map_width, p.map_height, p.max_ticks, p.gravity_grid_cell}) h.i64(v);
  for (double v : {p.gravitational_constant, p.growth_rate_min, p.growth_rate_max, p.radial_separation,
                   p.min_radius, p.max_radius, p.ship_launch_speed, p.transport_tax, p.transfer_ratio,
                   p.turret_rotation_rate, p.slingshot_load_rate, p.neutral_garrison_max}) {
    h.f64(v);
  }
  for (const auto& a : s.actuators) {
    h.i64(static_cast<int>(a.kind));
    h.i64(a.one_shot_pairs);
  }
  for (int v : s.pending_source) h.i64(v);
  for (int v : s.press_latch) h.i64(v);
  for (const auto& planet : s.planets) {
    h.i64(planet.id);
    h.f64(planet.position.x);
    h.f64(planet.position.y);
    h.f64(planet.radius);
    h.f64(planet.growth_rate);
    h.i64(static_cast<int>(planet.owner));
    h.f64(planet.ships);
    h.f64(planet.turret_angle);
    const Transporter& t = planet.transporter;
    h.i64(t.home_planet);
    h.i64(static_cast<int>(t.status));
    h.f64(t.position.x);
    h.f64(t.position.y);
    h.f64(t.velocity.x);
    h.f64(t.velocity.y);
    h.f64(t.payload);
    h.i64(static_cast<int>(t.payload_owner));
  }
  return h.value();
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t parse_hash_hex(const std::string& s) {
  if (s.size() != 16) throw std::invalid_argument("state hash must be 16 hex digits");
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::invalid_argument("invalid state hash '" + s + "'");
  return v;
}

}  // namespace planetwars
