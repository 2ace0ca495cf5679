#include <httplib.h>

#include "cexplore/service.hpp"

namespace cexplore {

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    send(res, 200, f());
  } catch (const ServiceError& e) {
    send(res, e.status(), e.payload());
  } catch (const json::exception& e) {
    send(res, 400, {{"code", "bad_request"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send(res, 500, {{"code", "internal"}, {"message", e.what()}});
  }
}

std::string sse(const char* event, const json& data) {
  return std::string("event: ") + event + "\ndata: " + data.dump() + "\n\n";
}

}  // namespace

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(SessionManager& manager) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  SessionManager& m = manager;

  // Idle sessions are reaped lazily, on each request.
  srv.set_pre_routing_handler([&m](const httplib::Request&, httplib::Response&) {
    m.expire_idle();
    return httplib::Server::HandlerResponse::Unhandled;
  });

  srv.Post("/sessions", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return m.create(json::parse(req.body)); });
  });
  srv.Post(R"(/sessions/([^/]+)/op)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return m.apply(req.matches[1], json::parse(req.body)); });
  });
  srv.Get(R"(/sessions/([^/]+)/enabled)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return m.enabled(req.matches[1]); });
  });
  srv.Get(R"(/sessions/([^/]+)/trace)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return m.trace(req.matches[1]); });
  });
  srv.Get(R"(/sessions/([^/]+)/enabled/stream)", [&m](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    res.set_chunked_content_provider("text/event-stream", [&m, id](std::size_t, httplib::DataSink& sink) {
      try {
        bool streamed = false;
        json all = m.enabled(id, [&](const json& t) {
          streamed = true;
          std::string chunk = sse("type", t);
          sink.write(chunk.data(), chunk.size());
        });
        if (!streamed) {
          for (const auto& [name, v] : all["types"].items()) {
            std::string chunk = sse("type", {{"type", name}, {"enabled", v["enabled"]}, {"ms", v["ms"]}});
            sink.write(chunk.data(), chunk.size());
          }
        }
        std::string chunk = sse("done", all);
        sink.write(chunk.data(), chunk.size());
      } catch (const ServiceError& e) {
        std::string chunk = sse("error", e.payload());
        sink.write(chunk.data(), chunk.size());
      }
      sink.done();
      return true;
    });
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace cexplore
