#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cexplore/lks.hpp"

namespace cexplore {

// SE-LTL syntax. The surface parser only produces the core constructors
// (True, Prop, Event, Type, Not, And, Next, Globally, Finally, Until).
// False, Or and Release appear in negation normal form and in grounded
// model properties.
enum class Op : std::uint8_t {
  True,
  False,
  Prop,
  Event,
  Type,
  Not,
  And,
  Or,
  Next,
  Globally,
  Finally,
  Until,
  Release,
};

bool is_atom(Op op);
bool is_unary(Op op);
bool is_binary(Op op);

// Leaf payload. `name` is the proposition name, the event identity
// ("In[g0,r0,k1]") or the type name. `id` is -1 until bound to a model.
struct Atom {
  std::string name;
  std::int64_t id = -1;

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Immutable formula tree with shared subterms; cheap to copy.
class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula prop(std::string name, std::int64_t id = -1);
  static Formula event(std::string identity, std::int64_t id = -1);
  static Formula type(std::string name, std::int64_t id = -1);

  Op op() const { return node_->op; }
  const Atom& atom() const { return node_->atom; }
  Formula lhs() const { return Formula(node_->kids[0]); }
  Formula rhs() const { return Formula(node_->kids[1]); }
  Formula child() const { return Formula(node_->kids[0]); }

  std::size_t depth() const;
  std::size_t size() const;
  bool is_temporal() const { return node_->temporal; }
  // Stable while any copy of this formula is alive.
  const void* identity() const { return node_.get(); }

  // Value of a non-temporal formula; `atom_value(op, id)` decides the atoms.
  template <class AtomValue>
  bool eval_boolean(const AtomValue& atom_value) const {
    return eval_boolean(node_.get(), atom_value);
  }

  friend bool operator==(const Formula& a, const Formula& b);

  friend Formula operator!(Formula f);
  friend Formula operator&&(Formula a, Formula b);
  friend Formula operator||(Formula a, Formula b);
  friend Formula next(Formula f);
  friend Formula globally(Formula f);
  friend Formula finally(Formula f);
  friend Formula until(Formula a, Formula b);
  friend Formula release(Formula a, Formula b);

  static Formula make(Op op, Formula a, Formula b = Formula());
  static Formula make_atom(Op op, Atom atom);

 private:
  struct Node {
    Op op = Op::True;
    Atom atom;
    std::shared_ptr<const Node> kids[2];
    bool temporal = false;
    std::size_t depth = 1;
    std::size_t size = 1;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  template <class AtomValue>
  static bool eval_boolean(const Node* n, const AtomValue& atom_value) {
    switch (n->op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Prop:
      case Op::Event:
      case Op::Type: return atom_value(n->op, n->atom.id);
      case Op::Not: return !eval_boolean(n->kids[0].get(), atom_value);
      case Op::And: return eval_boolean(n->kids[0].get(), atom_value) && eval_boolean(n->kids[1].get(), atom_value);
      case Op::Or: return eval_boolean(n->kids[0].get(), atom_value) || eval_boolean(n->kids[1].get(), atom_value);
      default: throw std::logic_error("eval_boolean on a temporal formula");
    }
  }
  std::shared_ptr<const Node> node_;
};

Formula operator!(Formula f);
Formula operator&&(Formula a, Formula b);
Formula operator||(Formula a, Formula b);
Formula next(Formula f);
Formula globally(Formula f);
Formula finally(Formula f);
Formula until(Formula a, Formula b);
Formula release(Formula a, Formula b);
bool operator==(const Formula& a, const Formula& b);

// Derived forms in the core syntax: a || b as !(!a && !b), a -> b as !(a && !b).
Formula core_or(Formula a, Formula b);
Formula core_implies(Formula a, Formula b);
Formula core_false();

// Prints in the surface grammar, fully parenthesising binary operators.
// Release prints as its dual !(!a U !b).
std::string to_string(const Formula& f);

// Negation normal form: negations only on atoms; uses Or, False and Release.
Formula nnf(const Formula& f);

struct UnknownAtom : std::runtime_error {
  explicit UnknownAtom(std::vector<std::string> names);
  std::vector<std::string> names;
};

// Formula whose every atom is resolved against one model.
class BoundFormula {
 public:
  const Formula& formula() const { return f_; }
  operator const Formula&() const { return f_; }

  friend BoundFormula bind(const Formula& f, const TypedLks& lks);
  friend bool operator==(const BoundFormula&, const BoundFormula&) = default;

  friend BoundFormula operator!(const BoundFormula& f) { return BoundFormula(!f.f_); }
  friend BoundFormula operator&&(const BoundFormula& a, const BoundFormula& b) { return BoundFormula(a.f_ && b.f_); }
  friend BoundFormula next(const BoundFormula& f) { return BoundFormula(next(f.f_)); }
  // Core-syntax disjunction, !(!a && !b).
  friend BoundFormula core_or(const BoundFormula& a, const BoundFormula& b) {
    return BoundFormula(core_or(a.f_, b.f_));
  }
  static BoundFormula top() { return BoundFormula(Formula::top()); }
  // Atoms built from model ids are bound by construction.
  static BoundFormula prop(const TypedLks& lks, PropId p);
  static BoundFormula event(const TypedLks& lks, EventId e);
  static BoundFormula type(const TypedLks& lks, TypeId t);

 private:
  explicit BoundFormula(Formula f) : f_(std::move(f)) {}
  Formula f_;
};

// Resolves every atom by name; throws UnknownAtom listing all unresolved names.
BoundFormula bind(const Formula& f, const TypedLks& lks);

}  // namespace cexplore
