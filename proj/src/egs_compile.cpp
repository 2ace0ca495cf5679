#include <algorithm>
#include <functional>
#include <unordered_map>

#include "cexplore/egs.hpp"
#include "cexplore/formula_parser.hpp"

namespace cexplore {

namespace {

using Kind = ModelExpr::Kind;
using Cell = std::int8_t;

constexpr int kUndefined = -1;  // next(max), prev(min)
constexpr int kUnknown = -2;    // unassigned cell during init enumeration
constexpr int kMaybe = 2;       // third truth value

// Three-valued evaluation over a (possibly partial) valuation.
class Evaluator {
 public:
  Evaluator(const EventSystem& sys, const Cell* cells, std::vector<int>& env) : sys_(sys), cells_(cells), env_(env) {}

  // Cell read by a VarRead node: an index, kUndefined or kUnknown.
  int cell_of(const ModelExpr& read) {
    const ModelVar& v = sys_.vars[read.value];
    int offset = 0;
    for (std::size_t i = 0; i < read.kids.size(); ++i) {
      int idx = term(read.kids[i]);
      if (idx < 0) return idx;
      offset = offset * static_cast<int>(sys_.sorts[v.index_sorts[i]].values.size()) + idx;
    }
    return static_cast<int>(v.first_cell) + offset;
  }

  int term(const ModelExpr& e) {
    switch (e.kind) {
      case Kind::SortConst: return e.value;
      case Kind::Binder: return env_[e.value];
      case Kind::VarRead: {
        int c = cell_of(e);
        return c < 0 ? c : cells_[c];
      }
      case Kind::Next:
      case Kind::Prev: {
        int t = term(e.kids[0]);
        if (t < 0) return t;
        int n = static_cast<int>(sys_.sorts[e.type].values.size());
        t += e.kind == Kind::Next ? 1 : -1;
        return t >= 0 && t < n ? t : kUndefined;
      }
      default: return truth(e);
    }
  }

  int truth(const ModelExpr& e) {
    switch (e.kind) {
      case Kind::BoolConst: return e.value;
      case Kind::VarRead: {
        int c = cell_of(e);
        if (c == kUnknown) return kMaybe;
        if (c < 0) return 0;
        return cells_[c] == kUnknown ? kMaybe : cells_[c];
      }
      case Kind::Not: {
        int t = truth(e.kids[0]);
        return t == kMaybe ? kMaybe : 1 - t;
      }
      case Kind::And: return conj(truth(e.kids[0]), e.kids[1]);
      case Kind::Or: return disj(truth(e.kids[0]), e.kids[1]);
      case Kind::Implies: {
        int a = truth(e.kids[0]);
        return disj(a == kMaybe ? kMaybe : 1 - a, e.kids[1]);
      }
      case Kind::Compare: return compare(e);
      case Kind::Forall:
      case Kind::Exists: {
        const bool all = e.kind == Kind::Forall;
        int acc = all ? 1 : 0;
        int n = static_cast<int>(sys_.sorts[e.sort].values.size());
        for (int v = 0; v < n; ++v) {
          env_[e.value] = v;
          int t = truth(e.kids[0]);
          if (t == (all ? 0 : 1)) return t;
          if (t == kMaybe) acc = kMaybe;
        }
        return acc;
      }
      default: throw std::logic_error("temporal operator or event atom in a state expression");
    }
  }

 private:
  int conj(int a, const ModelExpr& rhs) {
    if (a == 0) return 0;
    int b = truth(rhs);
    if (b == 0) return 0;
    return a == kMaybe || b == kMaybe ? kMaybe : 1;
  }

  int disj(int a, const ModelExpr& rhs) {
    if (a == 1) return 1;
    int b = truth(rhs);
    if (b == 1) return 1;
    return a == kMaybe || b == kMaybe ? kMaybe : 0;
  }

  int compare(const ModelExpr& e) {
    const bool boolean = e.kids[0].type == ModelExpr::kBool;
    int a = boolean ? truth(e.kids[0]) : term(e.kids[0]);
    int b = boolean ? truth(e.kids[1]) : term(e.kids[1]);
    if (boolean) {
      if (a == kMaybe || b == kMaybe) return kMaybe;
    } else {
      if (a == kUnknown || b == kUnknown) return kMaybe;
      if (a == kUndefined || b == kUndefined) return 0;
    }
    switch (e.value) {
      case ModelExpr::Eq: return a == b;
      case ModelExpr::Ne: return a != b;
      case ModelExpr::Lt: return a < b;
      case ModelExpr::Le: return a <= b;
      case ModelExpr::Gt: return a > b;
      default: return a >= b;
    }
  }

  const EventSystem& sys_;
  const Cell* cells_;
  std::vector<int>& env_;
};

std::string cell_name(const EventSystem& sys, const ModelVar& v, std::size_t offset) {
  std::vector<std::size_t> idx(v.index_sorts.size());
  for (std::size_t i = v.index_sorts.size(); i-- > 0;) {
    std::size_t n = sys.sorts[v.index_sorts[i]].values.size();
    idx[i] = offset % n;
    offset /= n;
  }
  std::string out = v.name;
  for (std::size_t i = 0; i < idx.size(); ++i) out += "[" + sys.sorts[v.index_sorts[i]].values[idx[i]] + "]";
  return out;
}

class Compiler {
 public:
  Compiler(const EventSystem& sys, const CompileOptions& opts) : sys_(sys), opts_(opts), events_(ground(sys)) {
    for (const ModelVar& v : sys_.vars) {
      for (std::size_t c = 0; c < v.num_cells; ++c) {
        domain_.push_back(v.value_sort ? static_cast<int>(sys_.sorts[*v.value_sort].values.size()) : 2);
      }
    }
  }

  TypedLks run() {
    enumerate_initial();
    if (states_.empty()) {
      throw ModelError(ModelError::Code::EmptyInitial, "no valuation satisfies the init constraint of '" + sys_.name + "'");
    }
    explore();
    return build();
  }

 private:
  using Key = std::string;

  static Key key_of(const std::vector<Cell>& cells) { return Key(cells.begin(), cells.end()); }

  std::uint32_t intern(const std::vector<Cell>& cells) {
    auto [it, fresh] = index_.emplace(key_of(cells), static_cast<std::uint32_t>(states_.size()));
    if (fresh) {
      if (states_.size() >= opts_.state_limit) {
        throw ModelError(ModelError::Code::StateLimit,
                         "more than " + std::to_string(opts_.state_limit) + " reachable states");
      }
      states_.push_back(cells);
    }
    return it->second;
  }

  int init_truth(const std::vector<Cell>& cells) {
    std::vector<int> env(sys_.init_slots, 0);
    Evaluator ev(sys_, cells.data(), env);
    int acc = 1;
    for (const auto& e : sys_.init) {
      int t = ev.truth(e);
      if (t == 0) return 0;
      if (t == kMaybe) acc = kMaybe;
    }
    return acc;
  }

  // Depth-first over cells in declaration order with ascending values, so
  // initial valuations come out in lexicographic order. Branches whose
  // partial valuation already falsifies init are cut.
  void enumerate_initial() {
    std::vector<Cell> cells(sys_.num_cells, static_cast<Cell>(kUnknown));
    std::function<void(std::size_t)> assign = [&](std::size_t c) {
      if (c == cells.size()) {
        if (init_truth(cells) == 1) intern(cells);
        return;
      }
      for (int v = 0; v < domain_[c]; ++v) {
        cells[c] = static_cast<Cell>(v);
        if (init_truth(cells) != 0) assign(c + 1);
      }
      cells[c] = static_cast<Cell>(kUnknown);
    };
    if (init_truth(cells) != 0) assign(0);
    num_initial_ = states_.size();
  }

  void apply(const std::vector<ModelAssignment>& body, const EventSchema& schema, Evaluator& pre, std::vector<int>& env,
             std::vector<Cell>& next, std::vector<int>& written) {
    for (const ModelAssignment& a : body) {
      if (a.sort >= 0) {
        int n = static_cast<int>(sys_.sorts[a.sort].values.size());
        for (int v = 0; v < n; ++v) {
          env[a.slot] = v;
          apply(a.body, schema, pre, env, next, written);
        }
        continue;
      }
      ModelExpr read;
      read.kind = Kind::VarRead;
      read.value = static_cast<int>(a.var);
      read.kids = a.index;
      int c = pre.cell_of(read);
      int value = sys_.vars[a.var].is_bool() ? pre.truth(a.value) : pre.term(a.value);
      if (c < 0 || value < 0) {
        throw ModelError(ModelError::Code::Runtime,
                         "event '" + schema.name + "' assigns an undefined value or index", a.where);
      }
      if (written[c] >= 0 && written[c] != value) {
        throw ModelError(ModelError::Code::Runtime, "event '" + schema.name + "' assigns two values to " +
                                                        cell_name(sys_, sys_.vars[a.var], c - sys_.vars[a.var].first_cell),
                         a.where);
      }
      written[c] = value;
      next[c] = static_cast<Cell>(value);
    }
  }

  void explore() {
    for (std::uint32_t s = 0; s < states_.size(); ++s) {
      std::vector<Cell> cur = states_[s];
      std::vector<std::pair<std::uint32_t, std::uint32_t>> out;  // target, event
      for (std::uint32_t e = 0; e < events_.size(); ++e) {
        const GroundEvent& g = events_[e];
        const EventSchema& schema = sys_.schemas[g.schema];
        std::vector<int> env(std::max<std::size_t>(schema.num_slots, g.args.size()), 0);
        for (std::size_t i = 0; i < g.args.size(); ++i) env[i] = static_cast<int>(g.args[i]);
        Evaluator pre(sys_, cur.data(), env);
        if (pre.truth(schema.guard) != 1) continue;
        std::vector<Cell> next = cur;
        std::vector<int> written(cur.size(), -1);
        apply(schema.effect, schema, pre, env, next, written);
        out.push_back({intern(next), e});
      }
      transitions_.push_back(std::move(out));
    }
  }

  TypedLks build() {
    std::vector<std::uint32_t> deadlocked;
    for (std::uint32_t s = 0; s < states_.size(); ++s) {
      if (transitions_[s].empty()) deadlocked.push_back(s);
    }
    if (!deadlocked.empty() && !opts_.add_idle) {
      std::vector<std::string> names;
      for (std::uint32_t s : deadlocked) names.push_back(describe(s));
      std::string message = std::to_string(deadlocked.size()) + " reachable state(s) enable no event, first " + names[0];
      throw ModelError(ModelError::Code::Deadlock, message, std::nullopt, std::move(names));
    }

    LksBuilder b(sys_.name);
    // Propositions and display metadata.
    std::vector<std::vector<PropId>> cell_props;  // per cell: [bool prop] or per value
    for (const ModelVar& v : sys_.vars) {
      for (std::size_t c = 0; c < v.num_cells; ++c) {
        StateVariable meta;
        meta.name = cell_name(sys_, v, c);
        meta.is_bool = v.is_bool();
        std::vector<PropId> props;
        if (v.is_bool()) {
          meta.prop = b.add_prop(meta.name);
          props.push_back(meta.prop);
        } else {
          for (const std::string& value : sys_.sorts[*v.value_sort].values) {
            PropId p = b.add_prop(meta.name + "=" + value);
            meta.choices.push_back({value, p});
            props.push_back(p);
          }
        }
        cell_props.push_back(std::move(props));
        b.add_variable(std::move(meta));
      }
    }
    std::vector<TypeId> type_ids;
    for (const std::string& t : sys_.type_names()) type_ids.push_back(b.add_type(t));
    auto types = sys_.type_names();
    std::vector<EventId> event_ids;
    for (const GroundEvent& g : events_) {
      const EventSchema& schema = sys_.schemas[g.schema];
      std::vector<std::string> args;
      for (std::size_t i = 0; i < g.args.size(); ++i) args.push_back(sys_.sorts[schema.params[i].second].values[g.args[i]]);
      auto t = std::find(types.begin(), types.end(), schema.type) - types.begin();
      event_ids.push_back(b.add_event(schema.name, std::move(args), type_ids[t]));
    }
    std::optional<EventId> idle;
    if (!deadlocked.empty()) {
      if (sys_.find_schema("idle")) throw ModelError(ModelError::Code::Type, "cannot add idle[]: an event named idle exists");
      auto it = std::find(types.begin(), types.end(), "Idle");
      TypeId t = it != types.end() ? type_ids[it - types.begin()] : b.add_type("Idle");
      idle = b.add_event("idle", {}, t);
    }

    for (std::uint32_t s = 0; s < states_.size(); ++s) {
      std::vector<PropId> label;
      for (std::size_t c = 0; c < states_[s].size(); ++c) {
        const auto& props = cell_props[c];
        if (is_bool_cell(c)) {
          if (states_[s][c]) label.push_back(props[0]);
        } else {
          label.push_back(props[states_[s][c]]);
        }
      }
      b.add_state("s" + std::to_string(s), std::move(label));
    }
    for (std::uint32_t s = 0; s < num_initial_; ++s) b.add_initial(StateId(s));
    for (std::uint32_t s = 0; s < states_.size(); ++s) {
      for (auto [target, e] : transitions_[s]) b.add_transition(StateId(s), StateId(target), {event_ids[e]});
      if (transitions_[s].empty()) b.add_transition(StateId(s), StateId(s), {*idle});
    }
    return std::move(b).build();
  }

  bool is_bool_cell(std::size_t c) const {
    for (const ModelVar& v : sys_.vars) {
      if (c >= v.first_cell && c < v.first_cell + v.num_cells) return v.is_bool();
    }
    return false;
  }

  std::string describe(std::uint32_t s) const {
    std::string out = "s" + std::to_string(s) + "{";
    bool first = true;
    for (const ModelVar& v : sys_.vars) {
      for (std::size_t c = 0; c < v.num_cells; ++c) {
        if (!first) out += ",";
        first = false;
        int value = states_[s][v.first_cell + c];
        out += cell_name(sys_, v, c) + "=" +
               (v.is_bool() ? std::string(value ? "true" : "false") : sys_.sorts[*v.value_sort].values[value]);
      }
    }
    return out + "}";
  }

  const EventSystem& sys_;
  const CompileOptions& opts_;
  std::vector<GroundEvent> events_;
  std::vector<int> domain_;
  std::vector<std::vector<Cell>> states_;
  std::unordered_map<Key, std::uint32_t> index_;
  std::size_t num_initial_ = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> transitions_;
};

// Property grounding.

class PropertyGrounder {
 public:
  PropertyGrounder(const EventSystem& sys, std::size_t slots) : sys_(sys), env_(slots, 0) {}

  Formula formula(const ModelExpr& e) {
    switch (e.kind) {
      case Kind::BoolConst: return e.value ? Formula::top() : Formula::bottom();
      case Kind::Not: return !formula(e.kids[0]);
      case Kind::And: {
        Formula a = formula(e.kids[0]);
        return a && formula(e.kids[1]);
      }
      case Kind::Or: {
        Formula a = formula(e.kids[0]);
        return a || formula(e.kids[1]);
      }
      case Kind::Implies: {
        Formula a = formula(e.kids[0]);
        return !a || formula(e.kids[1]);
      }
      case Kind::Forall:
      case Kind::Exists: {
        const bool all = e.kind == Kind::Forall;
        std::optional<Formula> acc;
        int n = static_cast<int>(sys_.sorts[e.sort].values.size());
        for (int v = 0; v < n; ++v) {
          env_[e.value] = v;
          Formula f = formula(e.kids[0]);
          acc = acc ? (all ? *acc && f : *acc || f) : f;
        }
        return acc ? *acc : (all ? Formula::top() : Formula::bottom());
      }
      case Kind::TNext: return next(formula(e.kids[0]));
      case Kind::TGlobally: return globally(formula(e.kids[0]));
      case Kind::TFinally: return finally(formula(e.kids[0]));
      case Kind::TUntil: {
        Formula a = formula(e.kids[0]);
        return until(a, formula(e.kids[1]));
      }
      case Kind::EventAtom: {
        const EventSchema& schema = sys_.schemas[e.value];
        std::string id = schema.name + "[";
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
          int v = static_term(e.kids[i]);
          if (v < 0) throw ModelError(ModelError::Code::Type, "undefined event argument", e.kids[i].where);
          if (i) id += ",";
          id += sys_.sorts[schema.params[i].second].values[v];
        }
        return Formula::event(id + "]");
      }
      case Kind::TypeAtom: return Formula::type(e.name);
      case Kind::VarRead: {
        int c = static_cell(e);
        if (c < 0) return Formula::bottom();
        const ModelVar& v = sys_.vars[e.value];
        return Formula::prop(cell_name(sys_, v, c - v.first_cell));
      }
      case Kind::Compare: return compare(e);
      default: throw ModelError(ModelError::Code::Type, "unexpected term in property", e.where);
    }
  }

 private:
  static Formula conj(const Formula& a, const Formula& b) {
    if (a.op() == Op::True) return b;
    if (b.op() == Op::True) return a;
    return a && b;
  }

  int static_cell(const ModelExpr& read) {
    const ModelVar& v = sys_.vars[read.value];
    int offset = 0;
    for (std::size_t i = 0; i < read.kids.size(); ++i) {
      int idx = static_term(read.kids[i]);
      if (idx < 0) return kUndefined;
      offset = offset * static_cast<int>(sys_.sorts[v.index_sorts[i]].values.size()) + idx;
    }
    return static_cast<int>(v.first_cell) + offset;
  }

  int static_term(const ModelExpr& e) {
    switch (e.kind) {
      case Kind::SortConst: return e.value;
      case Kind::Binder: return env_[e.value];
      case Kind::Next:
      case Kind::Prev: {
        int t = static_term(e.kids[0]);
        if (t < 0) return t;
        int n = static_cast<int>(sys_.sorts[e.type].values.size());
        t += e.kind == Kind::Next ? 1 : -1;
        return t >= 0 && t < n ? t : kUndefined;
      }
      default:
        throw ModelError(ModelError::Code::Type, "indices and event arguments in properties cannot depend on the state",
                         e.where);
    }
  }

  // Possible values of a sort term with the proposition formula under which
  // each is taken.
  std::vector<std::pair<Formula, int>> options(const ModelExpr& e) {
    if (e.kind == Kind::VarRead) {
      int c = static_cell(e);
      if (c < 0) return {{Formula::top(), kUndefined}};
      const ModelVar& v = sys_.vars[e.value];
      std::string name = cell_name(sys_, v, c - v.first_cell);
      std::vector<std::pair<Formula, int>> out;
      const auto& values = sys_.sorts[*v.value_sort].values;
      for (std::size_t i = 0; i < values.size(); ++i) out.push_back({Formula::prop(name + "=" + values[i]), static_cast<int>(i)});
      return out;
    }
    if (e.kind == Kind::Next || e.kind == Kind::Prev) {
      auto inner = options(e.kids[0]);
      int n = static_cast<int>(sys_.sorts[e.type].values.size());
      for (auto& [cond, v] : inner) {
        if (v < 0) continue;
        v += e.kind == Kind::Next ? 1 : -1;
        if (v < 0 || v >= n) v = kUndefined;
      }
      return inner;
    }
    return {{Formula::top(), static_term(e)}};
  }

  Formula compare(const ModelExpr& e) {
    if (e.kids[0].type == ModelExpr::kBool) {
      Formula a = formula(e.kids[0]);
      Formula b = formula(e.kids[1]);
      Formula same = (a && b) || (!a && !b);
      return e.value == ModelExpr::Eq ? same : !same;
    }
    std::optional<Formula> acc;
    for (const auto& [ca, va] : options(e.kids[0])) {
      for (const auto& [cb, vb] : options(e.kids[1])) {
        if (va < 0 || vb < 0) continue;
        bool holds = false;
        switch (e.value) {
          case ModelExpr::Eq: holds = va == vb; break;
          case ModelExpr::Ne: holds = va != vb; break;
          case ModelExpr::Lt: holds = va < vb; break;
          case ModelExpr::Le: holds = va <= vb; break;
          case ModelExpr::Gt: holds = va > vb; break;
          default: holds = va >= vb; break;
        }
        if (!holds) continue;
        Formula both = conj(ca, cb);
        if (both.op() == Op::True) return both;
        acc = acc ? *acc || both : both;
      }
    }
    return acc ? *acc : Formula::bottom();
  }

  const EventSystem& sys_;
  std::vector<int> env_;
};

}  // namespace

std::vector<GroundEvent> ground(const EventSystem& sys) {
  std::vector<GroundEvent> out;
  for (std::size_t s = 0; s < sys.schemas.size(); ++s) {
    const EventSchema& schema = sys.schemas[s];
    std::vector<std::size_t> args(schema.params.size(), 0);
    for (;;) {
      GroundEvent g;
      g.schema = s;
      g.args = args;
      g.identity = schema.name + "[";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) g.identity += ",";
        g.identity += sys.sorts[schema.params[i].second].values[args[i]];
      }
      g.identity += "]";
      out.push_back(std::move(g));
      // Odometer increment, last parameter fastest.
      bool advanced = false;
      for (std::size_t i = args.size(); i-- > 0;) {
        if (++args[i] < sys.sorts[schema.params[i].second].values.size()) {
          advanced = true;
          break;
        }
        args[i] = 0;
      }
      if (!advanced) break;
    }
  }
  return out;
}

TypedLks compile_lks(const EventSystem& sys, const CompileOptions& opts) { return Compiler(sys, opts).run(); }

Formula ground_property(const EventSystem& sys, std::string_view name) {
  const ModelProperty* p = sys.find_property(name);
  if (!p) throw ModelError(ModelError::Code::Type, "unknown property '" + std::string(name) + "'");
  return PropertyGrounder(sys, p->num_slots).formula(p->body);
}

BoundFormula resolve_property(const EventSystem& sys, const TypedLks& lks, std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  std::string_view trimmed = first == std::string_view::npos ? text : text.substr(first, last - first + 1);
  if (sys.find_property(trimmed)) return bind(ground_property(sys, trimmed), lks);
  return bind(parse_formula(text), lks);
}

}  // namespace cexplore
