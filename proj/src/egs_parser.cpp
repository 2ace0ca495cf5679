#include <algorithm>

#include "cexplore/egs.hpp"

namespace cexplore {

ModelError::ModelError(Code code, const std::string& message, std::optional<SourceLocation> where,
                       std::vector<std::string> states)
    : std::runtime_error(where ? std::to_string(where->line) + ":" + std::to_string(where->column) + ": " + message
                               : message),
      code_(code),
      message_(message),
      where_(where),
      states_(std::move(states)) {}

const char* to_string(ModelError::Code code) {
  switch (code) {
    case ModelError::Code::Syntax: return "SyntaxError";
    case ModelError::Code::Type: return "TypeError";
    case ModelError::Code::FrameViolation: return "FrameViolation";
    case ModelError::Code::EmptyInitial: return "EmptyInitial";
    case ModelError::Code::Deadlock: return "Deadlock";
    case ModelError::Code::StateLimit: return "StateLimit";
    case ModelError::Code::Runtime: return "RuntimeError";
  }
  return "Error";
}

std::optional<std::size_t> EventSystem::find_sort(std::string_view n) const {
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (sorts[i].name == n) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> EventSystem::find_var(std::string_view n) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == n) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> EventSystem::find_schema(std::string_view n) const {
  for (std::size_t i = 0; i < schemas.size(); ++i) {
    if (schemas[i].name == n) return i;
  }
  return std::nullopt;
}

const ModelProperty* EventSystem::find_property(std::string_view n) const {
  for (const auto& p : properties) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

std::vector<std::string> EventSystem::type_names() const {
  std::vector<std::string> out;
  for (const auto& s : schemas) {
    if (std::find(out.begin(), out.end(), s.type) == out.end()) out.push_back(s.type);
  }
  return out;
}

namespace {

using Kind = ModelExpr::Kind;

class ModelParser {
 public:
  explicit ModelParser(std::vector<Token> tokens) : ts_(std::move(tokens)) {}

  EventSystem parse() {
    if (ts_.at_end()) throw ModelError(ModelError::Code::Syntax, "empty model: declare at least one variable and one event");
    ts_.expect_word("model");
    sys_.name = ts_.expect_ident("model name").text;
    while (!ts_.at_end()) {
      const Token& t = ts_.peek();
      if (t.is_word("sort")) {
        sort_decl();
      } else if (t.is_word("var")) {
        var_decl();
      } else if (t.is_word("init")) {
        init_decl();
      } else if (t.is_word("event")) {
        event_decl();
      } else if (t.is_word("property")) {
        property_decl();
      } else {
        ts_.fail_at(t, "expected sort, var, init, event or property, found '" + t.text + "'");
      }
    }
    if (sys_.vars.empty() || sys_.schemas.empty()) {
      throw ModelError(ModelError::Code::Syntax, "model must declare at least one variable and one event",
                       ts_.peek().where);
    }
    auto types = sys_.type_names();
    for (const auto& [name, where] : type_atoms_) {
      if (std::find(types.begin(), types.end(), name) == types.end()) type_error(where, "unknown event type '" + name + "'");
    }
    return std::move(sys_);
  }

 private:
  [[noreturn]] static void type_error(SourceLocation where, const std::string& message) {
    throw ModelError(ModelError::Code::Type, message, where);
  }

  void check_fresh(const Token& t) {
    const std::string& n = t.text;
    bool taken = sys_.find_sort(n) || sys_.find_var(n) || sys_.find_schema(n) || sys_.find_property(n) ||
                 find_constant(n).first >= 0;
    if (taken) type_error(t.where, "name '" + n + "' is already declared");
  }

  std::pair<int, int> find_constant(std::string_view n) const {
    for (std::size_t s = 0; s < sys_.sorts.size(); ++s) {
      const auto& vals = sys_.sorts[s].values;
      auto it = std::find(vals.begin(), vals.end(), n);
      if (it != vals.end()) return {static_cast<int>(s), static_cast<int>(it - vals.begin())};
    }
    return {-1, -1};
  }

  std::size_t sort_ref() {
    const Token& t = ts_.expect_ident("sort name");
    auto s = sys_.find_sort(t.text);
    if (!s) type_error(t.where, "unknown sort '" + t.text + "'");
    return *s;
  }

  void sort_decl() {
    ts_.expect_word("sort");
    const Token& name = ts_.expect_ident("sort name");
    check_fresh(name);
    ModelSort sort;
    sort.name = name.text;
    ts_.expect("=");
    ts_.expect("{");
    do {
      const Token& v = ts_.expect_ident("sort value");
      check_fresh(v);
      if (std::find(sort.values.begin(), sort.values.end(), v.text) != sort.values.end()) {
        type_error(v.where, "duplicate value '" + v.text + "'");
      }
      sort.values.push_back(v.text);
    } while (ts_.accept(","));
    ts_.expect("}");
    if (sort.values.size() > 120) type_error(name.where, "sort '" + sort.name + "' has more than 120 values");
    sort.ordered = ts_.accept_word("ordered");
    sys_.sorts.push_back(std::move(sort));
  }

  void var_decl() {
    ts_.expect_word("var");
    std::vector<ModelVar> batch;
    do {
      const Token& name = ts_.expect_ident("variable name");
      check_fresh(name);
      for (const auto& b : batch) {
        if (b.name == name.text) type_error(name.where, "name '" + name.text + "' is already declared");
      }
      ModelVar v;
      v.name = name.text;
      while (ts_.accept("[")) {
        v.index_sorts.push_back(sort_ref());
        ts_.expect("]");
      }
      batch.push_back(std::move(v));
    } while (ts_.accept(","));
    ts_.expect(":");
    std::optional<std::size_t> value_sort;
    if (!ts_.accept_word("bool")) value_sort = sort_ref();
    for (auto& v : batch) {
      v.value_sort = value_sort;
      v.first_cell = sys_.num_cells;
      v.num_cells = 1;
      for (std::size_t s : v.index_sorts) v.num_cells *= sys_.sorts[s].values.size();
      sys_.num_cells += v.num_cells;
      sys_.vars.push_back(std::move(v));
    }
  }

  void init_decl() {
    ts_.expect_word("init");
    ts_.expect("{");
    begin_scope();
    ModelExpr e = bool_expr();
    sys_.init_slots = std::max(sys_.init_slots, max_slots_);
    ts_.expect("}");
    sys_.init.push_back(std::move(e));
  }

  void event_decl() {
    ts_.expect_word("event");
    const Token& name = ts_.expect_ident("event name");
    check_fresh(name);
    EventSchema ev;
    ev.name = name.text;
    ev.type = name.text;
    begin_scope();
    ts_.expect("(");
    if (!ts_.peek().is(")")) {
      do {
        const Token& p = ts_.expect_ident("parameter name");
        for (const auto& [existing, _] : ev.params) {
          if (existing == p.text) type_error(p.where, "duplicate parameter '" + p.text + "'");
        }
        ts_.expect(":");
        std::size_t s = sort_ref();
        ev.params.push_back({p.text, s});
        push_binder(p.text, s);
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    if (ts_.accept(":")) ev.type = ts_.expect_ident("event type").text;
    if (ts_.accept_word("modifies")) {
      do {
        const Token& v = ts_.expect_ident("variable name");
        auto var = sys_.find_var(v.text);
        if (!var) type_error(v.where, "unknown variable '" + v.text + "'");
        ev.modifies.push_back(*var);
      } while (ts_.accept(","));
    }
    ts_.expect("{");
    ev.guard = ModelExpr{};
    ev.guard.value = 1;
    if (ts_.accept_word("guard")) {
      ts_.expect(":");
      ev.guard = bool_expr();
    }
    if (ts_.accept_word("effect")) {
      ts_.expect(":");
      while (!ts_.peek().is("}")) ev.effect.push_back(assignment(ev));
    }
    ts_.expect("}");
    ev.num_slots = max_slots_;
    sys_.schemas.push_back(std::move(ev));
  }

  ModelAssignment assignment(const EventSchema& ev) {
    const Token& first = ts_.peek();
    if (first.is_word("forall")) {
      ts_.next();
      std::size_t depth = binders_.size();
      std::vector<std::pair<int, int>> bound;  // slot, sort
      do {
        const Token& n = ts_.expect_ident("binder name");
        ts_.expect(":");
        std::size_t s = sort_ref();
        bound.push_back({push_binder(n.text, s), static_cast<int>(s)});
      } while (ts_.accept(","));
      ts_.expect("|");
      std::vector<ModelAssignment> body;
      if (ts_.accept("{")) {
        while (!ts_.peek().is("}")) body.push_back(assignment(ev));
        ts_.expect("}");
      } else {
        body.push_back(assignment(ev));
      }
      binders_.resize(depth);
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        ModelAssignment loop;
        loop.sort = it->second;
        loop.slot = it->first;
        loop.body = std::move(body);
        loop.where = first.where;
        body.clear();
        body.push_back(std::move(loop));
      }
      return std::move(body.front());
    }
    const Token& name = ts_.expect_ident("variable name");
    auto var = sys_.find_var(name.text);
    if (!var) type_error(name.where, "unknown variable '" + name.text + "'");
    if (std::find(ev.modifies.begin(), ev.modifies.end(), *var) == ev.modifies.end()) {
      throw ModelError(ModelError::Code::FrameViolation,
                       "event '" + ev.name + "' assigns '" + name.text + "' which is not in its modifies list",
                       name.where);
    }
    ModelAssignment a;
    a.var = *var;
    a.where = name.where;
    a.index = indices(sys_.vars[*var], name.where);
    ts_.expect("'");
    ts_.expect(":=");
    const Token& at = ts_.peek();
    a.value = expr();
    const ModelVar& v = sys_.vars[*var];
    int want = v.value_sort ? static_cast<int>(*v.value_sort) : ModelExpr::kBool;
    if (a.value.type != want) type_error(at.where, "assigned value has type " + type_name(a.value.type) + ", expected " + type_name(want));
    ts_.accept(";");
    return a;
  }

  void property_decl() {
    ts_.expect_word("property");
    const Token& name = ts_.expect_ident("property name");
    check_fresh(name);
    ts_.expect("{");
    begin_scope();
    temporal_ = true;
    ModelProperty p;
    p.name = name.text;
    p.body = bool_expr();
    temporal_ = false;
    p.num_slots = max_slots_;
    ts_.expect("}");
    sys_.properties.push_back(std::move(p));
  }

  // Scopes and binders.

  void begin_scope() {
    binders_.clear();
    max_slots_ = 0;
  }

  int push_binder(const std::string& name, std::size_t sort) {
    int slot = static_cast<int>(binders_.size());
    binders_.push_back({name, sort});
    max_slots_ = std::max(max_slots_, binders_.size());
    return slot;
  }

  std::string type_name(int type) const { return type == ModelExpr::kBool ? "bool" : sys_.sorts[type].name; }

  // Expressions.

  ModelExpr bool_expr() {
    const Token& at = ts_.peek();
    ModelExpr e = expr();
    require_bool(e, at);
    return e;
  }

  void require_bool(const ModelExpr& e, const Token& at) const {
    if (e.type != ModelExpr::kBool) type_error(at.where, "expected a boolean expression, found " + type_name(e.type));
  }

  static ModelExpr node(Kind kind, SourceLocation where, std::vector<ModelExpr> kids = {}) {
    ModelExpr e;
    e.kind = kind;
    e.where = where;
    e.kids = std::move(kids);
    return e;
  }

  bool at_quantifier() const { return ts_.peek().is_word("forall") || ts_.peek().is_word("exists"); }

  ModelExpr expr() {
    if (at_quantifier()) return quantifier();
    return implication();
  }

  ModelExpr quantifier() {
    const Token& q = ts_.next();
    Kind kind = q.text == "forall" ? Kind::Forall : Kind::Exists;
    std::size_t depth = binders_.size();
    std::vector<std::pair<int, int>> bound;
    do {
      const Token& n = ts_.expect_ident("binder name");
      ts_.expect(":");
      std::size_t s = sort_ref();
      bound.push_back({push_binder(n.text, s), static_cast<int>(s)});
    } while (ts_.accept(","));
    ts_.expect("|");
    ModelExpr body = bool_expr();
    binders_.resize(depth);
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      ModelExpr e = node(kind, q.where, {std::move(body)});
      e.value = it->first;
      e.sort = it->second;
      body = std::move(e);
    }
    return body;
  }

  // Right operand of a binary connective; a quantifier extends to the end.
  ModelExpr operand(ModelExpr (ModelParser::*level)()) {
    const Token& at = ts_.peek();
    ModelExpr e = at_quantifier() ? quantifier() : (this->*level)();
    require_bool(e, at);
    return e;
  }

  ModelExpr implication() {
    const Token& at = ts_.peek();
    ModelExpr lhs = disjunction();
    if (ts_.peek().is("->")) {
      require_bool(lhs, at);
      SourceLocation where = ts_.next().where;
      ModelExpr rhs = operand(&ModelParser::implication);
      return node(Kind::Implies, where, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ModelExpr disjunction() {
    const Token& at = ts_.peek();
    ModelExpr lhs = conjunction();
    while (ts_.peek().is("||")) {
      require_bool(lhs, at);
      SourceLocation where = ts_.next().where;
      ModelExpr rhs = operand(&ModelParser::conjunction);
      lhs = node(Kind::Or, where, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ModelExpr conjunction() {
    const Token& at = ts_.peek();
    ModelExpr lhs = until_expr();
    while (ts_.peek().is("&&")) {
      require_bool(lhs, at);
      SourceLocation where = ts_.next().where;
      ModelExpr rhs = operand(&ModelParser::until_expr);
      lhs = node(Kind::And, where, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ModelExpr until_expr() {
    const Token& at = ts_.peek();
    ModelExpr lhs = unary();
    if (temporal_ && ts_.peek().is_word("U")) {
      require_bool(lhs, at);
      SourceLocation where = ts_.next().where;
      ModelExpr rhs = operand(&ModelParser::until_expr);
      return node(Kind::TUntil, where, {std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ModelExpr unary() {
    const Token& t = ts_.peek();
    Kind kind;
    if (t.is("!")) {
      kind = Kind::Not;
    } else if (temporal_ && t.is_word("X")) {
      kind = Kind::TNext;
    } else if (temporal_ && t.is_word("G")) {
      kind = Kind::TGlobally;
    } else if (temporal_ && t.is_word("F")) {
      kind = Kind::TFinally;
    } else {
      return comparison();
    }
    SourceLocation where = ts_.next().where;
    const Token& at = ts_.peek();
    ModelExpr e = at_quantifier() ? quantifier() : unary();
    require_bool(e, at);
    return node(kind, where, {std::move(e)});
  }

  ModelExpr comparison() {
    ModelExpr lhs = primary();
    static constexpr std::pair<std::string_view, ModelExpr::CompareOp> kOps[] = {
        {"=", ModelExpr::Eq}, {"!=", ModelExpr::Ne}, {"<", ModelExpr::Lt},
        {"<=", ModelExpr::Le}, {">", ModelExpr::Gt}, {">=", ModelExpr::Ge},
    };
    for (auto [sym, op] : kOps) {
      if (!ts_.peek().is(sym)) continue;
      const Token& opt = ts_.next();
      ModelExpr rhs = primary();
      if (lhs.type != rhs.type) {
        type_error(opt.where, "cannot compare " + type_name(lhs.type) + " with " + type_name(rhs.type));
      }
      if (op != ModelExpr::Eq && op != ModelExpr::Ne &&
          (lhs.type == ModelExpr::kBool || !sys_.sorts[lhs.type].ordered)) {
        type_error(opt.where, "order comparison needs an ordered sort, found " + type_name(lhs.type));
      }
      ModelExpr e = node(Kind::Compare, opt.where, {std::move(lhs), std::move(rhs)});
      e.value = op;
      return e;
    }
    return lhs;
  }

  std::vector<ModelExpr> indices(const ModelVar& v, SourceLocation where) {
    std::vector<ModelExpr> out;
    while (ts_.peek().is("[")) {
      const Token& open = ts_.next();
      if (out.size() == v.index_sorts.size()) type_error(open.where, "too many indices for '" + v.name + "'");
      ModelExpr idx = expr();
      int want = static_cast<int>(v.index_sorts[out.size()]);
      if (idx.type != want) type_error(open.where, "index of '" + v.name + "' must be " + type_name(want) + ", found " + type_name(idx.type));
      ts_.expect("]");
      out.push_back(std::move(idx));
    }
    if (out.size() != v.index_sorts.size()) {
      type_error(where, "'" + v.name + "' needs " + std::to_string(v.index_sorts.size()) + " indices");
    }
    return out;
  }

  static bool is_static(const ModelExpr& e) {
    if (e.kind == Kind::VarRead) return false;
    return std::all_of(e.kids.begin(), e.kids.end(), is_static);
  }

  ModelExpr ordered_term(const Token& fn) {
    ts_.expect("(");
    const Token& at = ts_.peek();
    ModelExpr arg = expr();
    ts_.expect(")");
    if (arg.type == ModelExpr::kBool || !sys_.sorts[arg.type].ordered) {
      type_error(at.where, fn.text + "() needs a term of an ordered sort");
    }
    ModelExpr e = node(fn.text == "next" ? Kind::Next : Kind::Prev, fn.where, {std::move(arg)});
    e.type = e.kids[0].type;
    return e;
  }

  ModelExpr primary() {
    const Token& t = ts_.peek();
    if (ts_.accept("(")) {
      ModelExpr e = expr();
      ts_.expect(")");
      return e;
    }
    if (at_quantifier()) return quantifier();
    if (t.is_word("true") || t.is_word("false")) {
      ModelExpr e = node(Kind::BoolConst, ts_.next().where);
      e.value = t.text == "true";
      return e;
    }
    if (t.is("@")) return at_atom();
    if (t.kind != TokenKind::Ident) {
      if (t.kind == TokenKind::End) ts_.fail("unexpected end of input in expression");
      ts_.fail_at(t, "unexpected '" + t.text + "' in expression");
    }
    const Token& name = ts_.next();
    const bool call = ts_.peek().is("(");
    if (call && (name.text == "next" || name.text == "prev")) return ordered_term(name);
    if (call && (name.text == "min" || name.text == "max")) {
      ts_.expect("(");
      const Token& st = ts_.peek();
      std::size_t s = sort_ref();
      ts_.expect(")");
      if (!sys_.sorts[s].ordered) type_error(st.where, name.text + "() needs an ordered sort");
      ModelExpr e = node(Kind::SortConst, name.where);
      e.type = static_cast<int>(s);
      e.value = name.text == "min" ? 0 : static_cast<int>(sys_.sorts[s].values.size()) - 1;
      return e;
    }
    for (std::size_t i = binders_.size(); i-- > 0;) {
      if (binders_[i].first == name.text) {
        ModelExpr e = node(Kind::Binder, name.where);
        e.value = static_cast<int>(i);
        e.type = static_cast<int>(binders_[i].second);
        return e;
      }
    }
    if (auto var = sys_.find_var(name.text)) {
      const ModelVar& v = sys_.vars[*var];
      ModelExpr e = node(Kind::VarRead, name.where, indices(v, name.where));
      e.value = static_cast<int>(*var);
      e.type = v.value_sort ? static_cast<int>(*v.value_sort) : ModelExpr::kBool;
      return e;
    }
    auto [sort, value] = find_constant(name.text);
    if (sort >= 0) {
      ModelExpr e = node(Kind::SortConst, name.where);
      e.type = sort;
      e.value = value;
      return e;
    }
    type_error(name.where, "unknown name '" + name.text + "'");
  }

  ModelExpr at_atom() {
    const Token& at = ts_.next();
    if (!temporal_) type_error(at.where, "event and type atoms are only allowed in properties");
    const Token& name = ts_.expect_ident("event or type name");
    if (!ts_.peek().is("[")) {
      ModelExpr e = node(Kind::TypeAtom, at.where);
      e.name = name.text;
      type_atoms_.push_back({name.text, name.where});
      return e;
    }
    auto schema = sys_.find_schema(name.text);
    if (!schema) type_error(name.where, "unknown event '" + name.text + "' (events must be declared before use)");
    const EventSchema& ev = sys_.schemas[*schema];
    ts_.expect("[");
    std::vector<ModelExpr> args;
    if (!ts_.peek().is("]")) {
      do {
        const Token& a = ts_.peek();
        ModelExpr arg = expr();
        if (args.size() == ev.params.size()) type_error(a.where, "too many arguments for event '" + ev.name + "'");
        int want = static_cast<int>(ev.params[args.size()].second);
        if (arg.type != want) type_error(a.where, "argument must be " + type_name(want) + ", found " + type_name(arg.type));
        if (!is_static(arg)) type_error(a.where, "event arguments cannot depend on state variables");
        args.push_back(std::move(arg));
      } while (ts_.accept(","));
    }
    ts_.expect("]");
    if (args.size() != ev.params.size()) {
      type_error(name.where, "event '" + ev.name + "' takes " + std::to_string(ev.params.size()) + " arguments");
    }
    ModelExpr e = node(Kind::EventAtom, at.where, std::move(args));
    e.value = static_cast<int>(*schema);
    return e;
  }

  TokenStream ts_;
  EventSystem sys_;
  std::vector<std::pair<std::string, std::size_t>> binders_;
  std::size_t max_slots_ = 0;
  bool temporal_ = false;
  std::vector<std::pair<std::string, SourceLocation>> type_atoms_;
};

}  // namespace

EventSystem parse_model(std::string_view text) {
  try {
    return ModelParser(tokenize(text)).parse();
  } catch (const ParseError& e) {
    throw ModelError(ModelError::Code::Syntax, e.message(), e.location());
  }
}

}  // namespace cexplore
