#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "cexplore/explorer.hpp"
#include "cexplore/lexer.hpp"

namespace cexplore {

using json = nlohmann::json;

// Error payload {code, message, location?} plus the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message,
               std::optional<SourceLocation> where = std::nullopt);

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  json payload() const;

 private:
  int status_;
  std::string code_;
  std::string message_;
  std::optional<SourceLocation> where_;
};

// Trace {states:[{id,props}], events:[{name,args,type}], loopStart, focus,
// index}. `focus` is the display position in the stored lasso, `index` the
// unbounded focus of the session.
json render_trace(const Session& s);
json render_enabled(const TypedLks& lks, const std::vector<TypeAvailability>& types);

struct SessionHandle {
  std::string id;
  std::chrono::system_clock::time_point created;
  std::string model;
  std::string property;
  std::size_t bound = 0;
  Mode mode = Mode::counterexample;
};

struct ManagerOptions {
  std::size_t jobs = 1;           // per enabled_types call
  std::size_t max_queries = 8;    // process-wide concurrent checker queries
  std::chrono::steady_clock::duration idle_timeout = std::chrono::minutes(30);
  bool strict_type_switch = false;
  std::function<std::chrono::steady_clock::time_point()> clock = [] { return std::chrono::steady_clock::now(); };
};

// In-memory sessions. Calls on distinct sessions run concurrently; calls on
// one session are serialised. Every method throws ServiceError.
class SessionManager {
 public:
  explicit SessionManager(ManagerOptions opts = {});
  ~SessionManager();

  // Request {model, property, bound?, mode?, addIdle?}. `property` is either
  // the name of a property declared in the model or a formula over the
  // compiled proposition, event and type names.
  // Response {status:"session", session, revision, trace} or
  // {status:"holds", bound}.
  json create(const json& request);

  // Request {op: forward|backward|alt_state|alt_event|set_type, type?}.
  // Response {status: ok|no_alternative, revision, focus, index, trace?};
  // the trace is included only when pi changed.
  json apply(const std::string& id, const json& request);

  // Enabled {revision, types:{name:{enabled, ms}}}, cached per revision.
  // `on_type` sees each type as its query finishes (not on a cache hit).
  json enabled(const std::string& id, const std::function<void(const json&)>& on_type = {});

  json trace(const std::string& id);
  SessionHandle handle(const std::string& id);

  // Drops sessions idle for longer than the timeout; returns how many.
  std::size_t expire_idle();
  std::size_t size() const;

 private:
  struct Entry;
  std::shared_ptr<Entry> find(const std::string& id);

  ManagerOptions opts_;
  std::unique_ptr<QueryLimiter> limiter_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

// HTTP transport over a SessionManager:
//   POST /sessions, POST /sessions/{id}/op, GET /sessions/{id}/enabled,
//   GET /sessions/{id}/trace, GET /sessions/{id}/enabled/stream (SSE).
class HttpServer {
 public:
  explicit HttpServer(SessionManager& manager);
  ~HttpServer();

  // Binds and returns the port (an ephemeral one when port is 0).
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cexplore
