// Live game server: REST session management plus WebSocket frame streaming.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <thread>

#include "planetwars/http_server.hpp"

namespace {

volatile std::sig_atomic_t stop_requested = 0;

void on_signal(int) { stop_requested = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planet Wars session server"};
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  int threads = 2;
  std::size_t max_sessions = 64;
  bool quiet = false;
  app.add_option("--address", address, "Listen address");
  app.add_option("--port", port, "Listen port (0 picks a free one)");
  app.add_option("--threads", threads, "I/O threads")->check(CLI::PositiveNumber);
  app.add_option("--max-sessions", max_sessions, "Concurrent session limit")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Do not log session events");
  CLI11_PARSE(app, argc, argv);

  if (quiet) planetwars::set_session_log({});
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  planetwars::SessionManager sessions(max_sessions);
  try {
    planetwars::HttpServer server(sessions, address, port, threads);
    std::cout << "listening on http://" << address << ':' << server.port() << std::endl;
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::cout << "shutting down" << std::endl;
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "server: " << e.what() << '\n';
    return 1;
  }
  sessions.stop_all();
  return 0;
}
