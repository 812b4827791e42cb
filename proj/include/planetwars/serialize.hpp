#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "planetwars/engine.hpp"

namespace planetwars {

using json = nlohmann::json;

void to_json(json& j, const GameParameters& p);
// Missing keys keep their default value; unknown keys are rejected.
void from_json(const json& j, GameParameters& p);

void to_json(json& j, const Transporter& t);
void from_json(const json& j, Transporter& t);
void to_json(json& j, const Planet& p);
void from_json(const json& j, Planet& p);
void to_json(json& j, const Action& a);
void from_json(const json& j, Action& a);
void to_json(json& j, const Actuator& a);
void from_json(const json& j, Actuator& a);

// Gravity is written as null. from_json leaves it unset.
void to_json(json& j, const GameState& s);
void from_json(const json& j, GameState& s);

// FNV-1a over the exact bit patterns of every state field except gravity.
std::uint64_t state_hash(const GameState& s);
std::string hash_hex(std::uint64_t h);
std::uint64_t parse_hash_hex(const std::string& s);

}  // namespace planetwars
