#include "planetwars/http_server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <thread>
#include <vector>

namespace planetwars {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = path.find('/', start);
    const std::string_view part = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (!part.empty()) parts.push_back(part);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

HttpReply error_reply(int status, const std::string& message) { return {status, json{{"error", message}}}; }

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw SessionError(400, std::string("malformed JSON: ") + e.what());
  }
}

HttpReply session_route(SessionManager& sessions, std::string_view method, const std::vector<std::string_view>& parts,
                        const std::string& body) {
  const auto session = sessions.get(std::string(parts[1]));
  if (parts.size() == 2) {
    if (method == "GET") return {200, session->info()};
    if (method == "DELETE") {
      sessions.remove(session->id());
      return {200, json{{"deleted", session->id()}}};
    }
    return error_reply(405, "method not allowed");
  }
  if (parts.size() != 3) return error_reply(404, "not found");
  const std::string_view action = parts[2];
  if (action == "start" || action == "pause") {
    if (method != "POST") return error_reply(405, "method not allowed");
    action == "start" ? session->start() : session->pause();
    return {200, session->info()};
  }
  if (action == "input") {
    if (method != "POST") return error_reply(405, "method not allowed");
    const json j = parse_body(body);
    Action a;
    try {
      a = j.at("action").get<Action>();
    } catch (const std::exception& e) {
      throw SessionError(400, std::string("bad action: ") + e.what());
    }
    session->submit_input(j.value("token", std::string()), a);
    return {200, json{{"accepted", true}, {"tick", session->tick()}}};
  }
  if (action == "frame") {
    if (method != "GET") return error_reply(405, "method not allowed");
    return {200, json::parse(*session->latest_frame())};
  }
  if (action == "replay") {
    if (method != "GET") return error_reply(405, "method not allowed");
    return {200, json(session->replay())};
  }
  return error_reply(404, "not found");
}

}  // namespace

std::string_view target_path(std::string_view target) { return target.substr(0, target.find('?')); }

std::string query_value(std::string_view target, std::string_view key) {
  const auto q = target.find('?');
  if (q == std::string_view::npos) return {};
  std::string_view rest = target.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const std::string_view pair = rest.substr(0, amp);
    const auto eq = pair.find('=');
    if (pair.substr(0, eq) == key) return eq == std::string_view::npos ? std::string() : std::string(pair.substr(eq + 1));
    if (amp == std::string_view::npos) break;
    rest = rest.substr(amp + 1);
  }
  return {};
}

HttpReply handle_request(SessionManager& sessions, std::string_view method, std::string_view target,
                         const std::string& body) {
  if (method == "OPTIONS") return {204, nullptr};
  const auto parts = split_path(target_path(target));
  try {
    if (parts.size() == 1 && parts[0] == "agents") {
      if (method != "GET") return error_reply(405, "method not allowed");
      return {200, json{{"agents", advertised_agents()}}};
    }
    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1) {
        if (method == "GET") {
          json list = json::array();
          for (const auto& s : sessions.list()) list.push_back(s->info());
          return {200, json{{"sessions", list}}};
        }
        if (method != "POST") return error_reply(405, "method not allowed");
        const auto session = sessions.create(session_config_from_json(parse_body(body)));
        const auto& cfg = session->config();
        json seat = nullptr;
        if (cfg.human) seat = {{"player", std::string(to_string(*cfg.human))}, {"token", session->seat_token()}};
        return {201, json{{"id", session->id()}, {"seat", seat}, {"session", session->info()}}};
      }
      return session_route(sessions, method, parts, body);
    }
    return error_reply(404, "not found");
  } catch (const SessionError& e) {
    return error_reply(e.status(), e.what());
  }
}

namespace {

std::string_view sv(beast::string_view s) { return {s.data(), s.size()}; }

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, std::shared_ptr<Session> session, std::string token)
      : ws_(std::move(socket)), session_(std::move(session)), token_(std::move(token)) {
    seat_ = session_->config().human.has_value() && token_ == session_->seat_token();
  }

  ~WsConnection() { detach(); }

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsConnection::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    if (seat_) session_->human_connected();
    attached_ = true;
    std::weak_ptr<WsConnection> weak = shared_from_this();
    handle_ = session_->subscribe(
        [weak](const Session::Message& m) {
          if (auto self = weak.lock()) {
            net::post(self->ws_.get_executor(), [self, m] { self->enqueue(m); });
          }
        },
        seat_);
    do_read();
  }

  void detach() {
    if (!attached_) return;
    attached_ = false;
    session_->unsubscribe(handle_);
    if (seat_) session_->human_disconnected();
  }

  void enqueue(const Session::Message& m) {
    if (closed_) return;
    // A client that cannot keep up loses frames rather than memory.
    if (queue_.size() >= 256) return;
    queue_.push_back(m);
    if (queue_.size() == 1) do_write();
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()),
                    beast::bind_front_handler(&WsConnection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return close();
    queue_.pop_front();
    if (!queue_.empty()) do_write();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return close();
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    enqueue(std::make_shared<const std::string>(handle_message(text).dump()));
    do_read();
  }

  json handle_message(const std::string& text) {
    json msg;
    try {
      msg = json::parse(text);
    } catch (const json::parse_error& e) {
      return {{"type", "error"}, {"status", 400}, {"reason", std::string("malformed JSON: ") + e.what()}};
    }
    const std::string type = msg.is_object() ? msg.value("type", std::string()) : std::string();
    if (type != "input") return {{"type", "error"}, {"status", 400}, {"reason", "unknown message type '" + type + "'"}};
    try {
      const Action a = msg.at("action").get<Action>();
      session_->submit_input(token_, a);
      return {{"type", "ack"}, {"tick", session_->tick()}, {"action", a}};
    } catch (const SessionError& e) {
      return {{"type", "error"}, {"status", e.status()}, {"reason", e.what()}};
    } catch (const std::exception& e) {
      return {{"type", "error"}, {"status", 400}, {"reason", std::string("bad action: ") + e.what()}};
    }
  }

  void close() {
    closed_ = true;
    queue_.clear();
    detach();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::shared_ptr<Session> session_;
  std::string token_;
  bool seat_ = false;
  bool attached_ = false;
  bool closed_ = false;
  int handle_ = -1;
  std::deque<Session::Message> queue_;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, SessionManager& sessions) : stream_(std::move(socket)), sessions_(sessions) {}

  void run() {
    net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpConnection::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    parser_.emplace();
    parser_->body_limit(1 << 20);
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, *parser_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) return shutdown();
    if (ec) return;
    http::request<http::string_body> req = parser_->release();

    if (websocket::is_upgrade(req)) {
      const auto parts = split_path(target_path(sv(req.target())));
      if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "ws") {
        try {
          auto session = sessions_.get(std::string(parts[1]));
          stream_.expires_never();
          std::make_shared<WsConnection>(stream_.release_socket(), std::move(session),
                                         query_value(sv(req.target()), "token"))
              ->run(std::move(req));
          return;
        } catch (const SessionError& e) {
          return respond(req, {e.status(), json{{"error", e.what()}}});
        }
      }
      return respond(req, {404, json{{"error", "not a websocket endpoint"}}});
    }
    const HttpReply reply = handle_request(sessions_, sv(req.method_string()), sv(req.target()), req.body());
    respond(req, reply);
  }

  void respond(const http::request<http::string_body>& req, const HttpReply& reply) {
    auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(reply.status), req.version());
    res->set(http::field::server, "planetwars");
    res->set(http::field::access_control_allow_origin, "*");
    res->set(http::field::access_control_allow_methods, "GET, POST, DELETE, OPTIONS");
    res->set(http::field::access_control_allow_headers, "Content-Type");
    if (!reply.body.is_null()) {
      res->set(http::field::content_type, "application/json");
      res->body() = reply.body.dump();
    }
    res->keep_alive(req.keep_alive());
    res->prepare_payload();
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                        if (ec) return;
                        if (!res->keep_alive()) return self->shutdown();
                        self->do_read();
                      });
  }

  void shutdown() {
    beast::error_code ec;
    stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
  SessionManager& sessions_;
};

}  // namespace

struct HttpServer::Impl {
  Impl(SessionManager& s, int threads) : sessions(s), ioc(std::max(1, threads)), acceptor(net::make_strand(ioc)) {}

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (!acceptor.is_open()) return;
      } else {
        std::make_shared<HttpConnection>(std::move(socket), sessions)->run();
      }
      accept();
    });
  }

  SessionManager& sessions;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::vector<std::thread> workers;
  unsigned short port = 0;
  bool stopped = false;
};

HttpServer::HttpServer(SessionManager& sessions, const std::string& address, unsigned short port, int threads)
    : impl_(std::make_unique<Impl>(sessions, threads)) {
  const tcp::endpoint endpoint{net::ip::make_address(address), port};
  auto& acceptor = impl_->acceptor;
  acceptor.open(endpoint.protocol());
  acceptor.set_option(net::socket_base::reuse_address(true));
  acceptor.bind(endpoint);
  acceptor.listen(net::socket_base::max_listen_connections);
  impl_->port = acceptor.local_endpoint().port();
  impl_->accept();
  for (int i = 0; i < std::max(1, threads); ++i) impl_->workers.emplace_back([this] { impl_->ioc.run(); });
}

HttpServer::~HttpServer() { stop(); }

unsigned short HttpServer::port() const { return impl_->port; }

void HttpServer::stop() {
  if (impl_->stopped) return;
  impl_->stopped = true;
  net::post(impl_->acceptor.get_executor(), [this] {
    beast::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->ioc.stop();
  for (auto& t : impl_->workers) {
    if (t.joinable()) t.join();
  }
}

}  // namespace planetwars
