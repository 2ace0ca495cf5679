#include "cexplore/formula.hpp"

#include <algorithm>
#include <functional>

namespace cexplore {

bool is_atom(Op op) {
  return op == Op::True || op == Op::False || op == Op::Prop || op == Op::Event || op == Op::Type;
}
bool is_unary(Op op) { return op == Op::Not || op == Op::Next || op == Op::Globally || op == Op::Finally; }
bool is_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Until || op == Op::Release; }

namespace {
bool temporal_op(Op op) {
  return op == Op::Next || op == Op::Globally || op == Op::Finally || op == Op::Until || op == Op::Release;
}
}  // namespace

Formula::Formula() : Formula(std::make_shared<const Node>()) {}

Formula Formula::top() { return Formula(); }

Formula Formula::bottom() {
  auto n = std::make_shared<Node>();
  n->op = Op::False;
  return Formula(std::move(n));
}

Formula Formula::make_atom(Op op, Atom atom) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->atom = std::move(atom);
  return Formula(std::move(n));
}

Formula Formula::prop(std::string name, std::int64_t id) { return make_atom(Op::Prop, {std::move(name), id}); }
Formula Formula::event(std::string identity, std::int64_t id) { return make_atom(Op::Event, {std::move(identity), id}); }
Formula Formula::type(std::string name, std::int64_t id) { return make_atom(Op::Type, {std::move(name), id}); }

Formula Formula::make(Op op, Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids[0] = a.node_;
  n->depth = a.node_->depth + 1;
  n->size = a.node_->size + 1;
  n->temporal = temporal_op(op) || a.node_->temporal;
  if (is_binary(op)) {
    n->kids[1] = b.node_;
    n->depth = std::max(n->depth, b.node_->depth + 1);
    n->size += b.node_->size;
    n->temporal = n->temporal || b.node_->temporal;
  }
  return Formula(std::move(n));
}

std::size_t Formula::depth() const { return node_->depth; }
std::size_t Formula::size() const { return node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.size() != b.size()) return false;
  if (is_atom(a.op())) return a.atom() == b.atom();
  if (!(a.lhs() == b.lhs())) return false;
  return !is_binary(a.op()) || a.rhs() == b.rhs();
}

Formula operator!(Formula f) { return Formula::make(Op::Not, std::move(f)); }
Formula operator&&(Formula a, Formula b) { return Formula::make(Op::And, std::move(a), std::move(b)); }
Formula operator||(Formula a, Formula b) { return Formula::make(Op::Or, std::move(a), std::move(b)); }
Formula next(Formula f) { return Formula::make(Op::Next, std::move(f)); }
Formula globally(Formula f) { return Formula::make(Op::Globally, std::move(f)); }
Formula finally(Formula f) { return Formula::make(Op::Finally, std::move(f)); }
Formula until(Formula a, Formula b) { return Formula::make(Op::Until, std::move(a), std::move(b)); }
Formula release(Formula a, Formula b) { return Formula::make(Op::Release, std::move(a), std::move(b)); }

Formula core_or(Formula a, Formula b) { return !(!std::move(a) && !std::move(b)); }
Formula core_implies(Formula a, Formula b) { return !(std::move(a) && !std::move(b)); }
Formula core_false() { return !Formula::top(); }

namespace {

void print(const Formula& f, std::string& out) {
  auto operand = [&](const Formula& g) { print(g, out); };
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Prop: out += f.atom().name; return;
    case Op::Event:
    case Op::Type:
      out += '@';
      out += f.atom().name;
      return;
    case Op::Not: out += '!'; operand(f.child()); return;
    case Op::Next: out += "X "; operand(f.child()); return;
    case Op::Globally: out += "G "; operand(f.child()); return;
    case Op::Finally: out += "F "; operand(f.child()); return;
    case Op::And:
    case Op::Or:
    case Op::Until: {
      const char* sym = f.op() == Op::And ? " && " : f.op() == Op::Or ? " || " : " U ";
      out += '(';
      operand(f.lhs());
      out += sym;
      operand(f.rhs());
      out += ')';
      return;
    }
    case Op::Release:
      out += "!(!";
      operand(f.lhs());
      out += " U !";
      operand(f.rhs());
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

namespace {

Formula nnf_of(const Formula& f, bool negate) {
  switch (f.op()) {
    case Op::True: return negate ? Formula::bottom() : f;
    case Op::False: return negate ? Formula::top() : f;
    case Op::Prop:
    case Op::Event:
    case Op::Type: return negate ? !f : f;
    case Op::Not: return nnf_of(f.child(), !negate);
    case Op::And:
      return negate ? nnf_of(f.lhs(), true) || nnf_of(f.rhs(), true)
                    : nnf_of(f.lhs(), false) && nnf_of(f.rhs(), false);
    case Op::Or:
      return negate ? nnf_of(f.lhs(), true) && nnf_of(f.rhs(), true)
                    : nnf_of(f.lhs(), false) || nnf_of(f.rhs(), false);
    case Op::Next: return next(nnf_of(f.child(), negate));
    case Op::Globally: return negate ? finally(nnf_of(f.child(), true)) : globally(nnf_of(f.child(), false));
    case Op::Finally: return negate ? globally(nnf_of(f.child(), true)) : finally(nnf_of(f.child(), false));
    case Op::Until:
      return negate ? release(nnf_of(f.lhs(), true), nnf_of(f.rhs(), true))
                    : until(nnf_of(f.lhs(), false), nnf_of(f.rhs(), false));
    case Op::Release:
      return negate ? until(nnf_of(f.lhs(), true), nnf_of(f.rhs(), true))
                    : release(nnf_of(f.lhs(), false), nnf_of(f.rhs(), false));
  }
  return f;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_of(f, false); }

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out = "unknown atom(s):";
  for (const auto& n : names) out += " " + n;
  return out;
}

}  // namespace

UnknownAtom::UnknownAtom(std::vector<std::string> n) : std::runtime_error(join_names(n)), names(std::move(n)) {}

BoundFormula BoundFormula::prop(const TypedLks& lks, PropId p) {
  return BoundFormula(Formula::prop(lks.prop_name(p), p.value));
}

BoundFormula BoundFormula::event(const TypedLks& lks, EventId e) {
  return BoundFormula(Formula::event(lks.event_name(e), e.value));
}

BoundFormula BoundFormula::type(const TypedLks& lks, TypeId t) {
  return BoundFormula(Formula::type(lks.type_name(t), t.value));
}

BoundFormula bind(const Formula& f, const TypedLks& lks) {
  std::vector<std::string> missing;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    switch (g.op()) {
      case Op::Prop:
      case Op::Event:
      case Op::Type: {
        std::optional<std::int64_t> id;
        if (g.op() == Op::Prop) {
          if (auto p = lks.find_prop(g.atom().name)) id = p->value;
        } else if (g.op() == Op::Event) {
          if (auto e = lks.find_event(g.atom().name)) id = e->value;
        } else if (auto t = lks.find_type(g.atom().name)) {
          id = t->value;
        }
        if (!id) {
          const char* tag = g.op() == Op::Prop ? "" : "@";
          std::string shown = tag + g.atom().name;
          if (std::find(missing.begin(), missing.end(), shown) == missing.end()) missing.push_back(shown);
          return g;
        }
        if (*id == g.atom().id) return g;
        return Formula::make_atom(g.op(), {g.atom().name, *id});
      }
      case Op::True:
      case Op::False: return g;
      default: break;
    }
    if (is_binary(g.op())) {
      Formula lhs = go(g.lhs());  // sequenced so names are listed left to right
      return Formula::make(g.op(), lhs, go(g.rhs()));
    }
    return Formula::make(g.op(), go(g.child()));
  };
  Formula out = go(f);
  if (!missing.empty()) throw UnknownAtom(std::move(missing));
  return BoundFormula(std::move(out));
}

}  // namespace cexplore
