#include "cexplore/lks.hpp"

#include <algorithm>
#include <stdexcept>

namespace cexplore {

std::string EventInfo::identity() const {
  std::string out = schema;
  out += '[';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += ']';
  return out;
}

bool TypedLks::is_initial(StateId s) const {
  return std::binary_search(initial_.begin(), initial_.end(), s);
}

const std::vector<EventId>* TypedLks::events_between(StateId s, StateId t) const {
  const auto& out = edges_.at(s.index());
  auto it = std::lower_bound(out.begin(), out.end(), t,
                             [](const Edge& e, StateId v) { return e.target < v; });
  if (it == out.end() || it->target != t) return nullptr;
  return &it->events;
}

std::optional<PropId> TypedLks::find_prop(std::string_view name) const {
  auto it = prop_index_.find(std::string(name));
  if (it == prop_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EventId> TypedLks::find_event(std::string_view identity) const {
  auto it = event_index_.find(std::string(identity));
  if (it == event_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TypeId> TypedLks::find_type(std::string_view name) const {
  auto it = type_index_.find(std::string(name));
  if (it == type_index_.end()) return std::nullopt;
  return it->second;
}

PropId LksBuilder::add_prop(std::string name) {
  PropId id(lks_.prop_names_.size());
  if (!lks_.prop_index_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate proposition '" + name + "'");
  }
  lks_.prop_names_.push_back(std::move(name));
  return id;
}

TypeId LksBuilder::add_type(std::string name) {
  TypeId id(lks_.type_names_.size());
  if (!lks_.type_index_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate event type '" + name + "'");
  }
  lks_.type_names_.push_back(std::move(name));
  return id;
}

EventId LksBuilder::add_event(std::string schema, std::vector<std::string> args, TypeId type) {
  EventId id(lks_.events_.size());
  EventInfo info{std::move(schema), std::move(args), type};
  std::string identity = info.identity();
  if (!lks_.event_index_.emplace(identity, id).second) {
    throw std::invalid_argument("duplicate event '" + identity + "'");
  }
  lks_.events_.push_back(std::move(info));
  lks_.event_identities_.push_back(std::move(identity));
  return id;
}

StateId LksBuilder::add_state(std::string name, std::vector<PropId> label) {
  StateId id(lks_.state_names_.size());
  std::sort(label.begin(), label.end());
  label.erase(std::unique(label.begin(), label.end()), label.end());
  lks_.state_names_.push_back(std::move(name));
  lks_.labels_.push_back(std::move(label));
  pending_.emplace_back();
  return id;
}

void LksBuilder::add_initial(StateId s) { lks_.initial_.push_back(s); }

void LksBuilder::add_transition(StateId s, StateId t, std::vector<EventId> events) {
  auto& slot = pending_.at(s.index())[t.value];
  slot.insert(slot.end(), events.begin(), events.end());
}

TypedLks LksBuilder::build() && {
  TypedLks& l = lks_;
  std::sort(l.initial_.begin(), l.initial_.end());
  l.initial_.erase(std::unique(l.initial_.begin(), l.initial_.end()), l.initial_.end());

  const std::size_t np = l.prop_names_.size();
  l.valuation_.assign(l.state_names_.size() * np, 0);
  for (std::size_t s = 0; s < l.labels_.size(); ++s) {
    for (PropId p : l.labels_[s]) {
      if (p.index() < np) l.valuation_[s * np + p.index()] = 1;
    }
  }

  l.edges_.assign(l.state_names_.size(), {});
  for (std::size_t s = 0; s < pending_.size(); ++s) {
    auto& out = l.edges_[s];
    for (auto& [target, events] : pending_[s]) {
      std::sort(events.begin(), events.end());
      events.erase(std::unique(events.begin(), events.end()), events.end());
      out.push_back(Edge{StateId(target), std::move(events)});
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return a.target < b.target; });
  }
  pending_.clear();
  if (auto report = validate_lks(l); !report.empty()) l.first_issue_ = to_string(report.front());
  return std::move(lks_);
}

ValidationReport validate_lks(const TypedLks& lks) {
  ValidationReport report;
  using Kind = LksIssue::Kind;
  const std::size_t n = lks.num_states();

  if (lks.initial().empty()) report.push_back({Kind::EmptyInitial, {}, {}, ""});
  for (StateId s : lks.initial()) {
    if (s.index() >= n) report.push_back({Kind::UnknownState, s, s, "initial"});
  }
  for (std::size_t e = 0; e < lks.num_events(); ++e) {
    if (lks.type_of(EventId(e)).index() >= lks.num_types()) {
      report.push_back({Kind::DanglingType, {}, {}, lks.event_name(EventId(e))});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    StateId s(i);
    for (PropId p : lks.label(s)) {
      if (p.index() >= lks.num_props()) report.push_back({Kind::UnknownProp, s, s, std::to_string(p.value)});
    }
    auto out = lks.successors(s);
    if (out.empty()) report.push_back({Kind::Deadlock, s, s, ""});
    for (const Edge& edge : out) {
      if (edge.target.index() >= n) {
        report.push_back({Kind::UnknownState, s, edge.target, "transition target"});
      }
      if (edge.events.empty()) report.push_back({Kind::EmptyLabel, s, edge.target, ""});
      for (EventId e : edge.events) {
        if (e.index() >= lks.num_events()) {
          report.push_back({Kind::UnknownEvent, s, edge.target, std::to_string(e.value)});
        }
      }
    }
  }
  return report;
}

std::string to_string(const LksIssue& issue) {
  auto st = [](StateId s) { return "s" + std::to_string(s.value); };
  switch (issue.kind) {
    case LksIssue::Kind::Deadlock: return "Deadlock(" + st(issue.source) + ")";
    case LksIssue::Kind::EmptyLabel: return "EmptyLabel(" + st(issue.source) + "," + st(issue.target) + ")";
    case LksIssue::Kind::EmptyInitial: return "EmptyInitial";
    case LksIssue::Kind::DanglingType: return "DanglingType(" + issue.detail + ")";
    case LksIssue::Kind::UnknownProp: return "UnknownProp(" + st(issue.source) + "," + issue.detail + ")";
    case LksIssue::Kind::UnknownEvent:
      return "UnknownEvent(" + st(issue.source) + "," + st(issue.target) + "," + issue.detail + ")";
    case LksIssue::Kind::UnknownState: return "UnknownState(" + issue.detail + ")";
  }
  return "?";
}

std::size_t lasso_position(const Lasso& pi, std::size_t j) {
  if (j < pi.size()) return j;
  return pi.loop_start + (j - pi.loop_start) % pi.loop_length();
}

Step unroll(const Lasso& pi, std::size_t j) {
  std::size_t k = lasso_position(pi, j);
  return {pi.states[k], pi.events[k]};
}

bool is_path_of(const TypedLks& lks, const Lasso& pi) {
  if (pi.states.empty() || pi.states.size() != pi.events.size() || pi.loop_start >= pi.size()) return false;
  for (StateId s : pi.states) {
    if (s.index() >= lks.num_states()) return false;
  }
  if (!lks.is_initial(pi.states.front())) return false;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    const auto* label = lks.events_between(pi.states[j], pi.states[pi.successor(j)]);
    if (!label || !std::binary_search(label->begin(), label->end(), pi.events[j])) return false;
  }
  return true;
}

}  // namespace cexplore
