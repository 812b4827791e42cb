#include <doctest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <thread>

#include "planetwars/http_server.hpp"

using namespace planetwars;
using namespace std::chrono_literals;

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

struct QuietLog {
  QuietLog() { set_session_log({}); }
};
const QuietLog quiet;

SessionConfig ai_config(const std::string& a1, const std::string& a2, double rate) {
  SessionConfig cfg;
  cfg.seed = 5;
  cfg.human.reset();
  cfg.agents = {a1, a2};
  cfg.tick_rate = rate;
  cfg.params.gravity_grid_cell = 4;
  return cfg;
}

SessionConfig human_config(double rate) {
  SessionConfig cfg;
  cfg.seed = 5;
  cfg.human = Owner::Player1;
  cfg.agents = {"", "heuristic"};
  cfg.tick_rate = rate;
  cfg.params.gravity_grid_cell = 4;
  return cfg;
}

int home_of(const GameState& s, Player p) {
  for (const auto& pl : s.planets) {
    if (pl.owner == p) return pl.id;
  }
  return -1;
}

// Collects every message a session broadcasts.
struct Recorder {
  std::mutex mu;
  std::vector<json> messages;

  Session::Sink sink() {
    return [this](const Session::Message& m) {
      std::lock_guard lock(mu);
      messages.push_back(json::parse(*m));
    };
  }
  std::vector<json> of_type(const std::string& type) {
    std::lock_guard lock(mu);
    std::vector<json> out;
    for (const auto& m : messages) {
      if (m.at("type") == type) out.push_back(m);
    }
    return out;
  }
};

template <class Pred>
bool wait_for(Pred pred, std::chrono::milliseconds limit) {
  const auto end = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < end) {
    if (pred()) return true;
    std::this_thread::sleep_for(5ms);
  }
  return pred();
}

struct Reply {
  int status = 0;
  json body;
};

Reply call(unsigned short port, http::verb method, const std::string& target, const std::string& body = "") {
  net::io_context ioc;
  tcp::resolver resolver(ioc);
  beast::tcp_stream stream(ioc);
  stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
  http::request<http::string_body> req{method, target, 11};
  req.set(http::field::host, "127.0.0.1");
  if (!body.empty()) {
    req.set(http::field::content_type, "application/json");
    req.body() = body;
  }
  req.prepare_payload();
  http::write(stream, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(stream, buffer, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return {static_cast<int>(res.result_int()), res.body().empty() ? json() : json::parse(res.body())};
}

struct WsClient {
  net::io_context ioc;
  websocket::stream<tcp::socket> ws{ioc};

  WsClient(unsigned short port, const std::string& target) {
    tcp::resolver resolver(ioc);
    net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws.handshake("127.0.0.1", target);
  }
  json read() {
    beast::flat_buffer buffer;
    ws.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  }
  // Next message of the given type, skipping others.
  json read_type(const std::string& type) {
    for (;;) {
      json m = read();
      if (m.at("type") == type) return m;
    }
  }
  void send(const json& j) { ws.write(net::buffer(j.dump())); }
  void close() { ws.close(websocket::close_code::normal); }
};

}  // namespace

TEST_CASE("session requests are validated") {
  const SessionConfig d = session_config_from_json(json::object());
  CHECK(d.human == Owner::Player1);
  CHECK(d.agents[1] == "heuristic");
  CHECK(d.tick_rate == 30.0);
  CHECK(d.human_actuator == Actuator::slingshot());

  const SessionConfig ai = session_config_from_json({{"humanSide", "none"}, {"agents", {"random", "mcts:4:10"}}, {"seed", 3}});
  CHECK_FALSE(ai.human.has_value());
  CHECK(ai.agents[1] == "mcts:4:10");
  CHECK(ai.seed == 3);

  CHECK_THROWS_AS(session_config_from_json({{"colour", "red"}}), SessionError);
  CHECK_THROWS_AS(session_config_from_json({{"humanSide", "Neutral"}}), SessionError);
  CHECK_THROWS_AS(session_config_from_json({{"parameters", {{"numPlanets", "many"}}}}), SessionError);

  SessionManager m;
  SessionConfig bad = human_config(30);
  bad.params.num_planets = 1;
  try {
    m.create(bad);
    FAIL("accepted numPlanets=1");
  } catch (const SessionError& e) {
    CHECK(e.status() == 400);
    CHECK(std::string(e.what()).find("numPlanets") != std::string::npos);
  }
  SessionConfig unknown = human_config(30);
  unknown.agents[1] = "nosuch";
  CHECK_THROWS_AS(m.create(unknown), SessionError);
  CHECK(m.list().empty());
}

TEST_CASE("a new session waits in the lobby at tick zero") {
  SessionManager m;
  const auto s = m.create(human_config(30));
  CHECK(s->status() == SessionStatus::Lobby);
  const json frame = json::parse(*s->latest_frame());
  CHECK(frame.at("type") == "frame");
  CHECK(frame.at("tick") == 0);
  CHECK(frame.at("state").at("gravity").is_null());
  std::this_thread::sleep_for(100ms);
  CHECK(s->tick() == 0);
}

TEST_CASE("the last input before a tick wins") {
  SessionManager m;
  const auto s = m.create(human_config(2));
  const int home = home_of(s->snapshot(), Owner::Player1);
  CHECK_THROWS_AS(s->submit_input(s->seat_token(), Action::press(home)), SessionError);  // not running yet
  s->start();
  s->submit_input(s->seat_token(), Action::release());
  s->submit_input(s->seat_token(), Action::press(home));
  REQUIRE(wait_for([&] { return s->tick() >= 1; }, 2000ms));
  s->pause();
  const GameState g = s->snapshot();
  CHECK(g.press_latch[0] == home);
  CHECK(s->replay().actions.front().first == Action::press(home));

  s->start();
  s->submit_input(s->seat_token(), Action::release());
  s->submit_input(s->seat_token(), Action::noop());
  const int t = s->tick();
  REQUIRE(wait_for([&] { return s->tick() > t; }, 2000ms));
  s->pause();
  CHECK(s->snapshot().press_latch[0] == home);
}

TEST_CASE("inputs need the seat token") {
  SessionManager m;
  const auto s = m.create(human_config(30));
  s->start();
  try {
    s->submit_input("not-the-token", Action::noop());
    FAIL("accepted a foreign token");
  } catch (const SessionError& e) {
    CHECK(e.status() == 403);
  }
  s->stop();
}

TEST_CASE("frames arrive at the tick rate") {
  SessionManager m;
  SessionConfig cfg = ai_config("heuristic", "heuristic", 30);
  const auto s = m.create(cfg);
  Recorder rec;
  s->subscribe(rec.sink(), false);
  s->start();
  std::this_thread::sleep_for(3s);
  s->pause();
  const auto frames = rec.of_type("frame");
  // The first frame is the snapshot sent on subscription.
  const auto ticked = static_cast<int>(frames.size()) - 1;
  CHECK(ticked >= 88);
  CHECK(ticked <= 92);
}

TEST_CASE("an unattended game runs to completion and every frame replays") {
  SessionManager m;
  SessionConfig cfg = ai_config("heuristic", "random", 1000);
  cfg.params.max_ticks = 400;
  const auto s = m.create(cfg);
  Recorder rec;
  s->subscribe(rec.sink(), false);
  s->start();
  REQUIRE(wait_for([&] { return s->status() == SessionStatus::Finished; }, 20000ms));
  const auto results = rec.of_type("result");
  REQUIRE(results.size() == 1);
  CHECK(results[0].at("outcome") == "P1Win");

  const Replay r = s->replay();
  CHECK(replay_verify(r).ok);
  GameState g = new_game(r.params, r.seed, r.actuators);
  std::map<int, std::string> expected;
  for (const auto& [a1, a2] : r.actions) {
    advance(g, a1, a2);
    expected[g.tick] = hash_hex(state_hash(g));
  }
  const auto frames = rec.of_type("frame");
  REQUIRE(frames.size() == r.actions.size() + 1);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    CHECK(frames[i].at("hash") == expected.at(frames[i].at("tick").get<int>()));
  }

  try {
    s->start();
    FAIL("restarted a finished session");
  } catch (const SessionError& e) {
    CHECK(e.status() == 409);
  }
}

TEST_CASE("a slow agent forfeits its move instead of stalling the game") {
  SessionManager m;
  SessionConfig cfg = ai_config("rhea:50:2000", "random", 100);
  cfg.ai_move_cap = 0.002;
  const auto s = m.create(cfg);
  s->start();
  std::this_thread::sleep_for(600ms);
  s->pause();
  CHECK(s->ai_timeouts() > 0);
  CHECK(s->tick() >= 40);
  const Replay r = s->replay();
  CHECK(replay_verify(r).ok);
}

TEST_CASE("sessions are isolated") {
  SessionManager m;
  const auto a = m.create(ai_config("random", "random", 200));
  const auto b = m.create(ai_config("random", "random", 200));
  a->start();
  b->start();
  std::this_thread::sleep_for(200ms);
  m.remove(a->id());
  const int tb = b->tick();
  std::this_thread::sleep_for(200ms);
  CHECK(b->tick() > tb);
  CHECK_THROWS_AS(m.get(a->id()), SessionError);
}

TEST_CASE("manual stepping plays one tick") {
  SessionManager m;
  const auto s = m.create(ai_config("rhea:2:10", "mcts:2:10", 30));
  s->step();
  s->step();
  CHECK(s->tick() == 2);
  CHECK(replay_verify(s->replay()).ok);
}

TEST_CASE("rest routes") {
  SessionManager m;
  CHECK(handle_request(m, "GET", "/agents", "").body.at("agents").size() == advertised_agents().size());
  CHECK(handle_request(m, "GET", "/nowhere", "").status == 404);
  CHECK(handle_request(m, "GET", "/sessions/abc", "").status == 404);
  CHECK(handle_request(m, "POST", "/sessions", "{not json").status == 400);
  CHECK(handle_request(m, "POST", "/sessions", R"({"parameters":{"numPlanets":1}})").status == 400);
  CHECK(handle_request(m, "POST", "/sessions", R"({"opponent":"nosuch"})").status == 400);
  CHECK(handle_request(m, "PUT", "/agents", "").status == 405);

  const HttpReply created = handle_request(m, "POST", "/sessions", R"({"seed":7,"opponent":"heuristic","tickRate":30})");
  REQUIRE(created.status == 201);
  const std::string id = created.body.at("id");
  const std::string token = created.body.at("seat").at("token");
  CHECK(created.body.at("session").at("status") == "Lobby");
  CHECK(handle_request(m, "GET", "/sessions/" + id + "/frame", "").body.at("tick") == 0);
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/pause", "").status == 409);
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/input", R"({"action":{"kind":"noop"},"token":")" + token + "\"}").status == 409);
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/start", "").body.at("status") == "Running");
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/input", R"({"action":{"kind":"noop"},"token":"x"})").status == 403);
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/input", R"({"action":{"kind":"fly"},"token":")" + token + "\"}").status == 400);
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/input", R"({"action":{"kind":"release"},"token":")" + token + "\"}").status == 200);
  CHECK(handle_request(m, "POST", "/sessions/" + id + "/pause", "").body.at("status") == "Paused");
  CHECK(handle_request(m, "GET", "/sessions/" + id + "/replay", "").body.at("version") == kReplayVersion);
  CHECK(handle_request(m, "GET", "/sessions", "").body.at("sessions").size() == 1);
  CHECK(handle_request(m, "DELETE", "/sessions/" + id, "").status == 200);
  CHECK(handle_request(m, "GET", "/sessions/" + id, "").status == 404);
}

TEST_CASE("query helpers") {
  CHECK(target_path("/sessions/a/ws?token=t") == "/sessions/a/ws");
  CHECK(query_value("/sessions/a/ws?x=1&token=abc", "token") == "abc");
  CHECK(query_value("/sessions/a/ws", "token").empty());
}

TEST_CASE("http and websocket end to end") {
  SessionManager m;
  HttpServer server(m, "127.0.0.1", 0, 2);
  const unsigned short port = server.port();

  const Reply agents = call(port, http::verb::get, "/agents");
  CHECK(agents.status == 200);
  CHECK(agents.body.at("agents").size() >= 4);
  CHECK(call(port, http::verb::post, "/sessions", R"({"parameters":{"numPlanets":1}})").status == 400);

  const Reply created = call(port, http::verb::post, "/sessions",
                             R"({"seed":11,"opponent":"heuristic","tickRate":50,"disconnectGrace":0.3,"parameters":{"gravityGridCell":4}})");
  REQUIRE(created.status == 201);
  const std::string id = created.body.at("id");
  const std::string token = created.body.at("seat").at("token");

  SUBCASE("seat plays through the socket") {
    WsClient seat(port, "/sessions/" + id + "/ws?token=" + token);
    const json hello = seat.read();
    CHECK(hello.at("type") == "hello");
    CHECK(hello.at("seat") == "Player1");
    CHECK(hello.at("gravity").at("cols").get<int>() <= 64);
    CHECK(hello.at("gravity").at("fx").size() ==
          hello.at("gravity").at("cols").get<std::size_t>() * hello.at("gravity").at("rows").get<std::size_t>());
    const json first = seat.read();
    CHECK(first.at("type") == "frame");
    CHECK(first.at("tick") == 0);
    const int home = home_of(first.at("state").get<GameState>(), Owner::Player1);

    WsClient watcher(port, "/sessions/" + id + "/ws");
    CHECK(watcher.read().at("seat") == "spectator");

    CHECK(call(port, http::verb::post, "/sessions/" + id + "/start").status == 200);
    CHECK(seat.read_type("frame").at("tick").get<int>() >= 1);
    seat.send({{"type", "input"}, {"action", Action::press(home)}});
    const json ack = seat.read_type("ack");
    CHECK(ack.at("action") == json(Action::press(home)));
    watcher.send({{"type", "input"}, {"action", Action::release()}});
    CHECK(watcher.read_type("error").at("status") == 403);
    seat.send({{"type", "dance"}});
    CHECK(seat.read_type("error").at("status") == 400);

    // Hold the press for a while, then release and look for the launch.
    std::this_thread::sleep_for(300ms);
    seat.send({{"type", "input"}, {"action", Action::release()}});
    bool launched = false;
    for (int i = 0; i < 30 && !launched; ++i) {
      const json f = seat.read_type("frame");
      launched = f.at("state").at("planets").at(home).at("transporter").at("status") == "InTransit";
    }
    CHECK(launched);
    watcher.close();
    seat.close();
    // The human is gone; the grace period runs out and the game pauses.
    CHECK(wait_for([&] { return m.get(id)->status() == SessionStatus::Paused; }, 3000ms));
  }
  SUBCASE("unknown session socket") {
    CHECK_THROWS(WsClient(port, "/sessions/nope/ws"));
  }
  server.stop();
}
