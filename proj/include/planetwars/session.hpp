#pragma once

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "planetwars/agents.hpp"
#include "planetwars/arena.hpp"
#include "planetwars/engine.hpp"
#include "planetwars/serialize.hpp"

namespace planetwars {

// Carries an HTTP-style status code so the transport can map it directly.
class SessionError : public std::runtime_error {
 public:
  SessionError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

enum class SessionStatus : std::uint8_t { Lobby, Running, Paused, Finished };

std::string_view to_string(SessionStatus s);

struct SessionConfig {
  GameParameters params = default_parameters();
  std::uint64_t seed = 0;
  std::optional<Player> human = Owner::Player1;  // nullopt: both seats are agents
  std::array<std::string, 2> agents{"", "heuristic"};
  Actuator human_actuator = Actuator::slingshot();
  Actuator ai_actuator = Actuator::source_target();
  double tick_rate = 30.0;
  double ai_move_cap = 0.0;  // seconds; 0 means one tick period
  double disconnect_grace = 10.0;
  std::uint64_t agent_seed = 0;
};

// Request body of POST /sessions. Throws SessionError(400) with the reason.
SessionConfig session_config_from_json(const json& j);

// Log sink for session events such as agent timeouts. Defaults to stderr;
// an empty function silences it.
void set_session_log(std::function<void(const std::string&)> sink);

class Session {
 public:
  using Message = std::shared_ptr<const std::string>;
  using Sink = std::function<void(const Message&)>;

  // Validates the configuration; the game is built immediately.
  Session(std::string id, std::string seat_token, SessionConfig cfg);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const std::string& seat_token() const { return seat_token_; }
  const SessionConfig& config() const { return cfg_; }

  SessionStatus status() const;
  int tick() const;
  GameState snapshot() const;

  // Lobby or Paused -> Running.
  void start();
  // Running -> Paused.
  void pause();
  // Ends the tick loop and agent workers for good.
  void stop();
  // Plays one tick immediately, agents taking as long as they need. Only
  // outside Running.
  void step();

  // Stores the human's action for the next tick; a later call in the same
  // tick replaces it. Throws 403 for a wrong token and 409 unless Running.
  void submit_input(const std::string& token, const Action& a);

  // Registers a frame listener. The hello message and the latest frame are
  // delivered before any later frame.
  int subscribe(Sink sink, bool seat);
  void unsubscribe(int handle);

  void human_connected();
  void human_disconnected();

  json info() const;
  Message latest_frame() const;
  // Seed, parameters and every applied joint action so far.
  Replay replay() const;
  std::uint64_t ai_timeouts() const;
  std::uint64_t frames_sent() const;

 private:
  class AgentSeat;

  void loop();
  void play_tick(bool capped);
  void post_to_agents();
  void broadcast(const Message& m);
  json info_locked() const;
  Message hello_message(bool seat) const;
  Message frame_message_locked() const;

  const std::string id_;
  const std::string seat_token_;
  const SessionConfig cfg_;
  const std::chrono::nanoseconds period_;
  const std::chrono::nanoseconds move_cap_;

  mutable std::mutex mu_;
  std::condition_variable wake_;
  GameState state_;
  SessionStatus status_ = SessionStatus::Lobby;
  bool stopping_ = false;
  Action human_latch_;
  int human_connections_ = 0;
  std::chrono::steady_clock::time_point human_last_seen_;
  Replay log_;
  std::optional<Outcome> outcome_;
  std::uint64_t timeouts_ = 0;
  std::array<std::unique_ptr<AgentSeat>, 2> seats_;
  std::thread loop_thread_;
  std::mutex tick_mu_;  // serialises play_tick between the loop and step()

  mutable std::mutex sub_mu_;
  std::map<int, Sink> sinks_;
  int next_sink_ = 0;
  Message latest_frame_;
  std::uint64_t frames_ = 0;
};

class SessionManager {
 public:
  explicit SessionManager(std::size_t max_sessions = 64) : max_sessions_(max_sessions) {}
  ~SessionManager();

  std::shared_ptr<Session> create(SessionConfig cfg);
  // Throws SessionError(404).
  std::shared_ptr<Session> get(const std::string& id) const;
  void remove(const std::string& id);
  std::vector<std::shared_ptr<Session>> list() const;
  void stop_all();

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t max_sessions_;
};

// Cell-centre samples of the field on a coarser grid, for display.
json downsample_gravity(const GravityField& field, int max_cols);

}  // namespace planetwars
