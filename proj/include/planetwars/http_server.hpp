#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "planetwars/session.hpp"

namespace planetwars {

struct HttpReply {
  int status = 200;
  json body;  // null for an empty body
};

// REST routes, independent of the socket layer:
//   GET    /agents
//   GET    /sessions
//   POST   /sessions
//   GET    /sessions/:id
//   DELETE /sessions/:id
//   POST   /sessions/:id/start | pause | input
//   GET    /sessions/:id/frame | replay
HttpReply handle_request(SessionManager& sessions, std::string_view method, std::string_view target,
                         const std::string& body);

// Splits "/a/b?x=1&y=2" into the path and the value of one query key.
std::string_view target_path(std::string_view target);
std::string query_value(std::string_view target, std::string_view key);

// HTTP and WebSocket listener on a pool of I/O threads. WebSocket clients
// connect to /sessions/:id/ws, adding ?token=... to claim the human seat.
class HttpServer {
 public:
  // Port 0 picks a free port.
  HttpServer(SessionManager& sessions, const std::string& address, unsigned short port, int threads = 2);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  unsigned short port() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace planetwars
