#include "gridpass/http_server.hpp"

#include <httplib.h>

namespace gridpass {

namespace {

using nlohmann::json;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::int64_t epoch_millis(TimePoint t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    reply(res, 400, {{"ok", false}, {"reason", "bad-request"}});
    return std::nullopt;
  }
  return body;
}

}  // namespace

json challenge_to_json(const Challenge& challenge) {
  json grid = json::array();
  const auto& charset = challenge.grid.charset();
  for (std::size_t i = 0; i < charset.size(); ++i)
    grid.push_back({{"ch", std::string(1, charset.at(i))}, {"code", challenge.grid.code_at(i)}});
  return {{"challenge_id", challenge.id}, {"grid", std::move(grid)},
          {"expires_at", epoch_millis(challenge.expires_at)}};
}

struct HttpServer::Impl {
  AuthService& service;
  httplib::Server server;

  explicit Impl(AuthService& s) : service(s) {}

  void routes() {
    server.Post("/api/challenge", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, 200, challenge_to_json(service.issue_challenge(req.remote_addr)));
      } catch (const ServiceError& e) {
        if (e.code() == ServiceErrc::throttled)
          reply(res, 429, {{"ok", false}, {"reason", "throttled"}});
        else
          reply(res, 503, {{"ok", false}, {"reason", "service-unavailable"}});
      }
    });

    server.Post("/api/login", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      const auto id = body->find("challenge_id");
      if (id == body->end() || !id->is_string()) {
        reply(res, 400, {{"ok", false}, {"reason", "bad-request"}});
        return;
      }
      // A non-string digits field is treated like non-digit input.
      std::string digits = "?";
      if (const auto d = body->find("digits"); d != body->end() && d->is_string()) digits = d->get<std::string>();
      std::optional<std::string> username;
      if (const auto u = body->find("username"); u != body->end() && u->is_string()) username = u->get<std::string>();

      const LoginResult result = service.login(id->get<std::string>(), digits,
                                               username ? std::optional<std::string_view>(*username) : std::nullopt,
                                               req.remote_addr);
      if (result.ok) {
        json ok = {{"ok", true}, {"session", result.session}};
        if (result.username) ok["username"] = *result.username;
        reply(res, 200, ok);
        return;
      }
      json fail = {{"ok", false}, {"reason", to_string(*result.reason)}};
      if (result.next_challenge) fail["next_challenge"] = challenge_to_json(*result.next_challenge);
      const int status = *result.reason == LoginFailure::throttled           ? 429
                         : *result.reason == LoginFailure::service_unavailable ? 503
                                                                               : 401;
      reply(res, status, fail);
    });

    server.Post("/api/logout", [this](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req, res);
      if (!body) return;
      const auto s = body->find("session");
      if (s == body->end() || !s->is_string()) {
        reply(res, 400, {{"ok", false}, {"reason", "bad-request"}});
        return;
      }
      reply(res, 200, {{"ok", service.logout(s->get<std::string>())}});
    });

    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
      const Health h = service.health();
      reply(res, 200, {{"status", h.store_loaded ? "ok" : "unavailable"}, {"store_size", h.store_size}});
    });

    if (const auto& root = service.config().web_root) server.set_mount_point("/", root->string());
  }
};

HttpServer::HttpServer(AuthService& service) : impl_(std::make_unique<Impl>(service)) { impl_->routes(); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace gridpass
