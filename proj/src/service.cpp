#include "cexplore/service.hpp"

#include "cexplore/egs.hpp"
#include "cexplore/formula_parser.hpp"

namespace cexplore {

ServiceError::ServiceError(int status, std::string code, const std::string& message, std::optional<SourceLocation> where)
    : std::runtime_error(message), status_(status), code_(std::move(code)), message_(message), where_(where) {}

json ServiceError::payload() const {
  json out{{"code", code_}, {"message", message_}};
  if (where_) out["location"] = {{"line", where_->line}, {"column", where_->column}};
  return out;
}

namespace {

json render_props(const TypedLks& lks, StateId s) {
  json props = json::object();
  if (lks.variables().empty()) {
    for (std::size_t p = 0; p < lks.num_props(); ++p) props[lks.prop_name(PropId(p))] = lks.holds(s, PropId(p));
    return props;
  }
  for (const StateVariable& v : lks.variables()) {
    if (v.is_bool) {
      props[v.name] = lks.holds(s, v.prop);
      continue;
    }
    json value = nullptr;
    for (const auto& [name, p] : v.choices) {
      if (lks.holds(s, p)) value = name;
    }
    props[v.name] = value;
  }
  return props;
}

json render_lasso(const TypedLks& lks, const Lasso& pi) {
  json states = json::array();
  json events = json::array();
  for (std::size_t j = 0; j < pi.size(); ++j) {
    states.push_back({{"id", lks.state_name(pi.states[j])}, {"props", render_props(lks, pi.states[j])}});
    const EventInfo& e = lks.event(pi.events[j]);
    events.push_back({{"name", e.schema}, {"args", e.args}, {"type", lks.type_name(e.type)}});
  }
  return {{"states", states}, {"events", events}, {"loopStart", pi.loop_start}};
}

const json& field(const json& request, const char* name) {
  if (!request.is_object() || !request.contains(name)) throw ServiceError(400, "bad_request", std::string("missing field '") + name + "'");
  return request.at(name);
}

Mode parse_mode(const json& request) {
  if (!request.contains("mode")) return Mode::counterexample;
  const json& m = request.at("mode");
  if (m == "counterexample" || m == "ce") return Mode::counterexample;
  if (m == "witness") return Mode::witness;
  throw ServiceError(400, "bad_request", "mode must be counterexample or witness");
}

}  // namespace

json render_trace(const Session& s) {
  json out = render_lasso(s.lks(), s.state().pi);
  out["focus"] = lasso_position(s.state().pi, s.state().focus);
  out["index"] = s.state().focus;
  return out;
}

json render_enabled(const TypedLks& lks, const std::vector<TypeAvailability>& types) {
  json out = json::object();
  for (const TypeAvailability& t : types) out[lks.type_name(t.type)] = {{"enabled", t.enabled}, {"ms", t.query_ms}};
  return out;
}

struct SessionManager::Entry {
  std::mutex mu;
  SessionHandle handle;
  std::optional<Session> session;
  std::chrono::steady_clock::time_point last_used;
  std::optional<std::uint64_t> cached_revision;
  json cached_enabled;
};

SessionManager::SessionManager(ManagerOptions opts)
    : opts_(std::move(opts)),
      limiter_(std::make_unique<QueryLimiter>(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, opts_.max_queries)))) {}

SessionManager::~SessionManager() = default;

json SessionManager::create(const json& request) {
  const json& source = field(request, "model");
  const json& property = field(request, "property");
  if (!source.is_string() || !property.is_string()) throw ServiceError(400, "bad_request", "model and property must be strings");
  std::size_t bound = 10;
  if (request.contains("bound")) {
    if (!request["bound"].is_number_integer() || request["bound"].get<long long>() <= 0)
      throw ServiceError(400, "bad_request", "bound must be a positive integer");
    bound = request["bound"].get<std::size_t>();
  }
  Mode mode = parse_mode(request);
  CompileOptions copts;
  copts.add_idle = request.value("addIdle", false);

  std::shared_ptr<const TypedLks> lks;
  std::optional<BoundFormula> phi;
  std::string model_name;
  try {
    EventSystem sys = parse_model(source.get<std::string>());
    model_name = sys.name;
    lks = std::make_shared<const TypedLks>(compile_lks(sys, copts));
    phi = resolve_property(sys, *lks, property.get<std::string>());
  } catch (const ModelError& e) {
    throw ServiceError(422, to_string(e.code()), e.message(), e.location());
  } catch (const ParseError& e) {
    throw ServiceError(422, "PropertySyntaxError", e.message(), e.location());
  } catch (const UnknownAtom& e) {
    throw ServiceError(422, "UnknownName", e.what());
  }

  ExplorerOptions eopts{opts_.jobs, opts_.strict_type_switch, limiter_.get()};
  auto started = Session::start(lks, *phi, bound, mode, eopts);
  if (auto* holds = std::get_if<PropertyHolds>(&started)) {
    return {{"status", "holds"}, {"bound", holds->bound}, {"ms", holds->stats.query_ms}};
  }

  auto entry = std::make_shared<Entry>();
  entry->session.emplace(std::move(std::get<Session>(started)));
  entry->last_used = opts_.clock();
  json out{{"status", "session"}, {"revision", entry->session->revision()}, {"trace", render_trace(*entry->session)}};
  {
    std::lock_guard lock(mu_);
    entry->handle = SessionHandle{"s" + std::to_string(next_id_++), std::chrono::system_clock::now(), model_name,
                                  property.get<std::string>(), bound, mode};
    sessions_.emplace(entry->handle.id, entry);
  }
  out["session"] = entry->handle.id;
  return out;
}

std::shared_ptr<SessionManager::Entry> SessionManager::find(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "UnknownSession", "no session '" + id + "'");
  return it->second;
}

json SessionManager::apply(const std::string& id, const json& request) {
  auto entry = find(id);
  const json& op = field(request, "op");
  if (!op.is_string()) throw ServiceError(400, "bad_request", "op must be a string");
  std::lock_guard lock(entry->mu);
  entry->last_used = opts_.clock();
  Session& s = *entry->session;
  Lasso before = s.state().pi;
  OpResult r;
  try {
    if (op == "forward") {
      s.forward();
    } else if (op == "backward") {
      s.backward();
    } else if (op == "alt_state") {
      r = s.alt_state();
    } else if (op == "alt_event") {
      r = s.alt_event();
    } else if (op == "set_type") {
      const json& t = field(request, "type");
      auto type = t.is_string() ? s.lks().find_type(t.get<std::string>()) : std::nullopt;
      if (!type) throw ServiceError(400, "UnknownType", "unknown event type " + t.dump());
      r = s.set_type(*type);
    } else {
      throw ServiceError(400, "UnknownOp", "unknown op " + op.dump());
    }
  } catch (const BoundaryError& e) {
    throw ServiceError(409, "BoundaryError", e.what());
  }
  json out{{"status", r.status == OpStatus::ok ? "ok" : "no_alternative"},
           {"revision", s.revision()},
           {"focus", lasso_position(s.state().pi, s.state().focus)},
           {"index", s.state().focus},
           {"ms", r.query_ms}};
  if (!(s.state().pi == before)) out["trace"] = render_trace(s);
  return out;
}

json SessionManager::enabled(const std::string& id, const std::function<void(const json&)>& on_type) {
  auto entry = find(id);
  std::lock_guard lock(entry->mu);
  entry->last_used = opts_.clock();
  const Session& s = *entry->session;
  if (entry->cached_revision != s.revision()) {
    std::function<void(const TypeAvailability&)> stream;
    if (on_type) {
      stream = [&](const TypeAvailability& t) {
        on_type({{"type", s.lks().type_name(t.type)}, {"enabled", t.enabled}, {"ms", t.query_ms}});
      };
    }
    json types = render_enabled(s.lks(), s.enabled_types(stream));
    entry->cached_enabled = {{"revision", s.revision()}, {"types", std::move(types)}};
    entry->cached_revision = s.revision();
  }
  return entry->cached_enabled;
}

json SessionManager::trace(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mu);
  entry->last_used = opts_.clock();
  json out = render_trace(*entry->session);
  out["revision"] = entry->session->revision();
  return out;
}

SessionHandle SessionManager::handle(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mu);
  return entry->handle;
}

std::size_t SessionManager::expire_idle() {
  const auto now = opts_.clock();
  std::lock_guard lock(mu_);
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::unique_lock busy(it->second->mu, std::try_to_lock);
    if (busy && now - it->second->last_used > opts_.idle_timeout) {
      busy.unlock();
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionManager::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

}  // namespace cexplore
