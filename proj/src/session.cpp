#include "planetwars/session.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

namespace planetwars {

namespace {

using Clock = std::chrono::steady_clock;

std::mutex log_mu;

std::function<void(const std::string&)>& log_sink() {
  static std::function<void(const std::string&)> sink = [](const std::string& line) { std::clog << line << '\n'; };
  return sink;
}

void session_log(const std::string& line) {
  std::lock_guard lock(log_mu);
  if (log_sink()) log_sink()(line);
}

std::string random_token() {
  static std::mutex mu;
  static std::random_device device;
  static std::mt19937_64 gen(device() ^ (static_cast<std::uint64_t>(device()) << 32) ^
                             static_cast<std::uint64_t>(Clock::now().time_since_epoch().count()));
  std::lock_guard lock(mu);
  return hash_hex(gen()) + hash_hex(gen());
}

std::chrono::nanoseconds seconds_to_ns(double s) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(s));
}

Session::Message make_message(const json& j) { return std::make_shared<const std::string>(j.dump()); }

}  // namespace

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::Lobby: return "Lobby";
    case SessionStatus::Running: return "Running";
    case SessionStatus::Paused: return "Paused";
    case SessionStatus::Finished: return "Finished";
  }
  return "Lobby";
}

void set_session_log(std::function<void(const std::string&)> sink) {
  std::lock_guard lock(log_mu);
  log_sink() = std::move(sink);
}

SessionConfig session_config_from_json(const json& j) {
  if (!j.is_object()) throw SessionError(400, "request body must be a JSON object");
  static const std::vector<std::string> known{"parameters", "seed",       "humanSide",     "opponent",
                                              "agents",     "tickRate",   "aiMoveCap",     "disconnectGrace",
                                              "agentSeed",  "humanActuator", "aiActuator"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw SessionError(400, "unknown field '" + key + "'");
    }
  }
  SessionConfig cfg;
  try {
    if (j.contains("parameters")) cfg.params = j.at("parameters").get<GameParameters>();
    cfg.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : std::random_device{}();
    const std::string side = j.value("humanSide", std::string("Player1"));
    if (side == "none") {
      cfg.human.reset();
    } else {
      const Owner o = owner_from_string(side);
      if (o == Owner::Neutral) throw std::invalid_argument("humanSide must be Player1, Player2 or none");
      cfg.human = o;
    }
    const std::string opponent = j.value("opponent", std::string("heuristic"));
    cfg.agents = {opponent, opponent};
    if (j.contains("agents")) {
      const auto& a = j.at("agents");
      if (!a.is_array() || a.size() != 2) throw std::invalid_argument("agents must list two identifiers");
      cfg.agents = {a[0].get<std::string>(), a[1].get<std::string>()};
    }
    if (cfg.human) cfg.agents[static_cast<std::size_t>(player_index(*cfg.human))].clear();
    cfg.tick_rate = j.value("tickRate", cfg.tick_rate);
    cfg.ai_move_cap = j.value("aiMoveCap", cfg.ai_move_cap);
    cfg.disconnect_grace = j.value("disconnectGrace", cfg.disconnect_grace);
    cfg.agent_seed = j.value("agentSeed", cfg.seed);
    if (j.contains("humanActuator")) cfg.human_actuator = j.at("humanActuator").get<Actuator>();
    if (j.contains("aiActuator")) cfg.ai_actuator = j.at("aiActuator").get<Actuator>();
  } catch (const SessionError&) {
    throw;
  } catch (const std::exception& e) {
    throw SessionError(400, e.what());
  }
  return cfg;
}

json downsample_gravity(const GravityField& field, int max_cols) {
  const int step = std::max(1, (field.cols() + max_cols - 1) / std::max(1, max_cols));
  const int cols = (field.cols() + step - 1) / step;
  const int rows = (field.rows() + step - 1) / step;
  json fx = json::array(), fy = json::array();
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int col = std::min(field.cols() - 1, c * step + step / 2);
      const int row = std::min(field.rows() - 1, r * step + step / 2);
      fx.push_back(field.cell(col, row).x);
      fy.push_back(field.cell(col, row).y);
    }
  }
  return {{"cellSize", field.cell_size() * step}, {"cols", cols}, {"rows", rows}, {"fx", fx}, {"fy", fy}};
}

// One planning agent on its own thread. The session posts the state it
// wants an action for and later collects the answer tagged with that tick.
class Session::AgentSeat {
 public:
  AgentSeat(std::unique_ptr<Agent> agent, Player player) : agent_(std::move(agent)), player_(player) {
    thread_ = std::thread([this] { run(); });
  }
  ~AgentSeat() { stop(); }

  void stop() {
    {
      std::lock_guard lock(mu_);
      quit_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }

  // Queues s unless the worker is still busy with an older request.
  void post(const GameState& s) {
    std::lock_guard lock(mu_);
    posted_at_ = Clock::now();
    if (busy_ || job_ || done_tick_ == s.tick) return;
    job_ = s;
    cv_.notify_all();
  }

  Clock::time_point posted_at() const {
    std::lock_guard lock(mu_);
    return posted_at_;
  }

  std::optional<Action> take(int tick, Clock::time_point deadline) {
    std::unique_lock lock(mu_);
    cv_.wait_until(lock, deadline, [&] { return done_tick_ == tick || quit_; });
    if (done_tick_ == tick) return done_action_;
    return std::nullopt;
  }

  Action compute_now(const GameState& s) {
    std::unique_lock lock(mu_);
    for (;;) {
      if (done_tick_ == s.tick) return done_action_;
      if (quit_) return Action::noop();
      if (!busy_ && !job_) {
        job_ = s;
        cv_.notify_all();
      }
      cv_.wait(lock);
    }
  }

 private:
  void run() {
    std::unique_lock lock(mu_);
    for (;;) {
      cv_.wait(lock, [&] { return quit_ || job_.has_value(); });
      if (quit_) return;
      GameState s = std::move(*job_);
      job_.reset();
      busy_ = true;
      lock.unlock();
      const Action a = agent_->act(s, player_);
      lock.lock();
      busy_ = false;
      done_tick_ = s.tick;
      done_action_ = a;
      cv_.notify_all();
    }
  }

  std::unique_ptr<Agent> agent_;
  Player player_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::optional<GameState> job_;
  bool busy_ = false;
  bool quit_ = false;
  int done_tick_ = -1;
  Action done_action_;
  Clock::time_point posted_at_{};
  std::thread thread_;
};

Session::Session(std::string id, std::string seat_token, SessionConfig cfg)
    : id_(std::move(id)),
      seat_token_(std::move(seat_token)),
      cfg_(std::move(cfg)),
      period_(seconds_to_ns(1.0 / (cfg_.tick_rate > 0.0 ? cfg_.tick_rate : 1.0))),
      move_cap_(cfg_.ai_move_cap > 0.0 ? seconds_to_ns(cfg_.ai_move_cap) : period_) {
  if (const auto errors = validate_parameters(cfg_.params); !errors.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw SessionError(400, msg);
  }
  if (!(cfg_.tick_rate > 0.0 && cfg_.tick_rate <= 1000.0)) throw SessionError(400, "tickRate must be in (0, 1000]");
  if (!(cfg_.ai_move_cap >= 0.0) || !(cfg_.disconnect_grace >= 0.0)) {
    throw SessionError(400, "aiMoveCap and disconnectGrace must be non-negative");
  }
  ActuatorPair actuators{cfg_.ai_actuator, cfg_.ai_actuator};
  for (int i = 0; i < 2; ++i) {
    const Player p = player_from_index(i);
    if (cfg_.human == p) {
      actuators[static_cast<std::size_t>(i)] = cfg_.human_actuator;
      continue;
    }
    const std::string& agent = cfg_.agents[static_cast<std::size_t>(i)];
    if (!is_known_agent(agent)) throw SessionError(400, "unknown agent '" + agent + "'");
  }
  try {
    state_ = new_game(cfg_.params, cfg_.seed, actuators);
  } catch (const std::exception& e) {
    throw SessionError(400, e.what());
  }
  for (int i = 0; i < 2; ++i) {
    const Player p = player_from_index(i);
    if (cfg_.human == p) continue;
    auto agent = make_agent(cfg_.agents[static_cast<std::size_t>(i)], mix_seed(cfg_.agent_seed, static_cast<std::uint64_t>(i + 1)));
    seats_[static_cast<std::size_t>(i)] = std::make_unique<AgentSeat>(std::move(agent), p);
  }
  log_.seed = cfg_.seed;
  log_.params = cfg_.params;
  log_.actuators = actuators;
  log_.agent1 = cfg_.human == Owner::Player1 ? "human" : cfg_.agents[0];
  log_.agent2 = cfg_.human == Owner::Player2 ? "human" : cfg_.agents[1];
  latest_frame_ = frame_message_locked();
}

Session::~Session() { stop(); }

SessionStatus Session::status() const {
  std::lock_guard lock(mu_);
  return status_;
}

int Session::tick() const {
  std::lock_guard lock(mu_);
  return state_.tick;
}

GameState Session::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::uint64_t Session::ai_timeouts() const {
  std::lock_guard lock(mu_);
  return timeouts_;
}

std::uint64_t Session::frames_sent() const {
  std::lock_guard lock(sub_mu_);
  return frames_;
}

void Session::start() {
  Message status;
  {
    std::lock_guard lock(mu_);
    if (stopping_) throw SessionError(409, "session has been stopped");
    if (status_ == SessionStatus::Finished) throw SessionError(409, "session is finished");
    if (status_ == SessionStatus::Running) return;
    status_ = SessionStatus::Running;
    human_last_seen_ = Clock::now();
    post_to_agents();
    if (!loop_thread_.joinable()) loop_thread_ = std::thread([this] { loop(); });
    status = make_message({{"type", "status"}, {"status", "Running"}, {"tick", state_.tick}});
  }
  wake_.notify_all();
  broadcast(status);
}

void Session::pause() {
  Message status;
  {
    std::lock_guard lock(mu_);
    if (status_ == SessionStatus::Paused) return;
    if (status_ != SessionStatus::Running) {
      throw SessionError(409, "cannot pause a session that is " + std::string(to_string(status_)));
    }
    status_ = SessionStatus::Paused;
    status = make_message({{"type", "status"}, {"status", "Paused"}, {"tick", state_.tick}});
  }
  wake_.notify_all();
  broadcast(status);
}

void Session::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (loop_thread_.joinable()) loop_thread_.join();
  for (auto& seat : seats_) {
    if (seat) seat->stop();
  }
}

void Session::step() {
  {
    std::lock_guard lock(mu_);
    if (status_ == SessionStatus::Running) throw SessionError(409, "session is running");
    if (status_ == SessionStatus::Finished) throw SessionError(409, "session is finished");
  }
  play_tick(false);
}

void Session::submit_input(const std::string& token, const Action& a) {
  std::lock_guard lock(mu_);
  if (!cfg_.human || token != seat_token_) throw SessionError(403, "not the human seat of this session");
  if (status_ != SessionStatus::Running) {
    throw SessionError(409, "session is " + std::string(to_string(status_)) + ", not Running");
  }
  human_latch_ = a;
}

int Session::subscribe(Sink sink, bool seat) {
  const Message hello = hello_message(seat);
  std::lock_guard lock(sub_mu_);
  sink(hello);
  sink(latest_frame_);
  const int handle = next_sink_++;
  sinks_.emplace(handle, std::move(sink));
  return handle;
}

void Session::unsubscribe(int handle) {
  std::lock_guard lock(sub_mu_);
  sinks_.erase(handle);
}

void Session::human_connected() {
  std::lock_guard lock(mu_);
  ++human_connections_;
  human_last_seen_ = Clock::now();
}

void Session::human_disconnected() {
  std::lock_guard lock(mu_);
  human_connections_ = std::max(0, human_connections_ - 1);
  human_last_seen_ = Clock::now();
}

json Session::info() const {
  std::lock_guard lock(mu_);
  return info_locked();
}

json Session::info_locked() const {
  const std::string a1 = cfg_.human == Owner::Player1 ? "human" : cfg_.agents[0];
  const std::string a2 = cfg_.human == Owner::Player2 ? "human" : cfg_.agents[1];
  return {{"id", id_},
          {"status", std::string(to_string(status_))},
          {"tick", state_.tick},
          {"humanSide", cfg_.human ? json(std::string(to_string(*cfg_.human))) : json(nullptr)},
          {"humanConnected", human_connections_ > 0},
          {"agents", {a1, a2}},
          {"tickRate", cfg_.tick_rate},
          {"seed", cfg_.seed},
          {"parameters", cfg_.params},
          {"actuators", state_.actuators},
          {"outcome", outcome_ ? json(std::string(to_string(*outcome_))) : json(nullptr)},
          {"ships", {player_ships(state_, Owner::Player1), player_ships(state_, Owner::Player2)}},
          {"aiTimeouts", timeouts_}};
}

Session::Message Session::latest_frame() const {
  std::lock_guard lock(sub_mu_);
  return latest_frame_;
}

Replay Session::replay() const {
  std::lock_guard lock(mu_);
  Replay r = log_;
  r.outcome = outcome_;
  r.final_hash = state_hash(state_);
  return r;
}

Session::Message Session::hello_message(bool seat) const {
  std::lock_guard lock(mu_);
  return make_message({{"type", "hello"},
                       {"seat", seat && cfg_.human ? json(std::string(to_string(*cfg_.human))) : json("spectator")},
                       {"session", info_locked()},
                       {"gravity", downsample_gravity(*state_.gravity, 64)}});
}

Session::Message Session::frame_message_locked() const {
  return make_message({{"type", "frame"}, {"tick", state_.tick}, {"hash", hash_hex(state_hash(state_))}, {"state", state_}});
}

void Session::post_to_agents() {
  for (auto& seat : seats_) {
    if (seat) seat->post(state_);
  }
}

void Session::broadcast(const Message& m) {
  std::lock_guard lock(sub_mu_);
  for (auto& [handle, sink] : sinks_) sink(m);
}

void Session::play_tick(bool capped) {
  std::lock_guard tick_lock(tick_mu_);
  GameState current;
  {
    std::lock_guard lock(mu_);
    if (outcome_ || stopping_) return;
    current = state_;
  }
  std::array<Action, 2> actions{};
  for (std::size_t i = 0; i < 2; ++i) {
    auto& seat = seats_[i];
    if (!seat) continue;
    if (!capped) {
      actions[i] = seat->compute_now(current);
      continue;
    }
    if (auto a = seat->take(current.tick, seat->posted_at() + move_cap_)) {
      actions[i] = *a;
    } else {
      std::uint64_t count;
      {
        std::lock_guard lock(mu_);
        count = ++timeouts_;
      }
      if (count == 1 || count % 100 == 0) {
        session_log("session " + id_ + ": " + std::string(to_string(player_from_index(static_cast<int>(i)))) +
                    " agent missed the move deadline at tick " + std::to_string(current.tick) + " (" +
                    std::to_string(count) + " so far); playing NoOp");
      }
    }
  }

  Message frame, result;
  {
    std::lock_guard lock(mu_);
    if (cfg_.human) {
      actions[static_cast<std::size_t>(player_index(*cfg_.human))] = human_latch_;
      human_latch_ = Action::noop();
    }
    advance(state_, actions[0], actions[1]);
    log_.actions.emplace_back(actions[0], actions[1]);
    const std::uint64_t h = state_hash(state_);
    log_.hashes.push_back(h);
    frame = frame_message_locked();
    if (const auto o = is_terminal(state_)) {
      outcome_ = o;
      status_ = SessionStatus::Finished;
      result = make_message({{"type", "result"},
                             {"outcome", std::string(to_string(*o))},
                             {"tick", state_.tick},
                             {"hash", hash_hex(h)},
                             {"ships", {player_ships(state_, Owner::Player1), player_ships(state_, Owner::Player2)}}});
    } else {
      post_to_agents();
    }
  }
  {
    std::lock_guard lock(sub_mu_);
    latest_frame_ = frame;
    ++frames_;
    for (auto& [handle, sink] : sinks_) sink(frame);
    if (result) {
      for (auto& [handle, sink] : sinks_) sink(result);
    }
  }
  wake_.notify_all();
}

void Session::loop() {
  std::unique_lock lock(mu_);
  bool was_running = false;
  auto next = Clock::now();
  for (;;) {
    wake_.wait(lock, [&] { return stopping_ || status_ == SessionStatus::Running; });
    if (stopping_) return;
    if (!was_running) {
      next = Clock::now() + period_;
      was_running = true;
    }
    if (wake_.wait_until(lock, next, [&] { return stopping_ || status_ != SessionStatus::Running; })) {
      if (stopping_) return;
      was_running = false;
      continue;
    }
    const auto now = Clock::now();
    if (cfg_.human && human_connections_ == 0 && now - human_last_seen_ > seconds_to_ns(cfg_.disconnect_grace)) {
      status_ = SessionStatus::Paused;
      was_running = false;
      const Message m = make_message(
          {{"type", "status"}, {"status", "Paused"}, {"tick", state_.tick}, {"reason", "human disconnected"}});
      lock.unlock();
      session_log("session " + id_ + ": paused, human seat disconnected");
      broadcast(m);
      lock.lock();
      continue;
    }
    lock.unlock();
    play_tick(true);
    lock.lock();
    next += period_;
    // After a long stall restart the schedule instead of bursting.
    if (Clock::now() - next > period_) next = Clock::now();
  }
}

SessionManager::~SessionManager() { stop_all(); }

std::shared_ptr<Session> SessionManager::create(SessionConfig cfg) {
  {
    std::lock_guard lock(mu_);
    if (sessions_.size() >= max_sessions_) throw SessionError(503, "session limit reached");
  }
  auto session = std::make_shared<Session>(random_token(), random_token(), std::move(cfg));
  std::lock_guard lock(mu_);
  sessions_.emplace(session->id(), session);
  return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionError(404, "no session '" + id + "'");
  return it->second;
}

void SessionManager::remove(const std::string& id) {
  std::shared_ptr<Session> victim;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw SessionError(404, "no session '" + id + "'");
    victim = std::move(it->second);
    sessions_.erase(it);
  }
  victim->stop();
}

std::vector<std::shared_ptr<Session>> SessionManager::list() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<Session>> out;
  for (const auto& [id, s] : sessions_) out.push_back(s);
  return out;
}

void SessionManager::stop_all() {
  std::map<std::string, std::shared_ptr<Session>> all;
  {
    std::lock_guard lock(mu_);
    all.swap(sessions_);
  }
  for (auto& [id, s] : all) s->stop();
}

}  // namespace planetwars
