// Terms, the three formula languages, contexts, and capture-avoiding
// substitution.
//
// All three languages share one immutable node representation. The
// language tag on Formula<L> restricts which constructors are available:
//
//   Formula<Lang::base>  first-order formulas
//   Formula<Lang::pre>   first-order formulas plus the presupposition
//                        connective pi/phi
//   Formula<Lang::con>   first-order formulas plus in(Gamma, phi) and true
//
// A first-order formula converts implicitly to either extension.

#pragma once

#include <cassert>
#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace presup {

class Term {
 public:
  enum class Kind { variable, constant, application };

  static Term variable(std::string name) {
    return Term(Kind::variable, std::move(name), {});
  }
  static Term constant(std::string name) {
    return Term(Kind::constant, std::move(name), {});
  }
  static Term application(std::string function, std::vector<Term> args) {
    if (args.empty())
      throw std::invalid_argument("function application needs arguments: " +
                                  function);
    return Term(Kind::application, std::move(function), std::move(args));
  }

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::variable; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  bool operator==(const Term&) const = default;

 private:
  Term(Kind kind, std::string name, std::vector<Term> args)
      : kind_(kind), name_(std::move(name)), args_(std::move(args)) {
    if (name_.empty()) throw std::invalid_argument("empty term name");
    for (char c : name_)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw std::invalid_argument("invalid identifier: " + name_);
  }

  Kind kind_;
  std::string name_;
  std::vector<Term> args_;
};

enum class Lang { base, pre, con };

enum class Op {
  atom,
  top,
  negation,
  conjunction,
  disjunction,
  implication,
  forall,
  exists,
  presupposition,
  in,
};

inline bool is_binary(Op op) {
  return op == Op::conjunction || op == Op::disjunction ||
         op == Op::implication;
}
inline bool is_quantifier(Op op) { return op == Op::forall || op == Op::exists; }

namespace detail {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// `name` holds the predicate of an atom or the bound variable of a
// quantifier. `lhs` is the operand of unary operators, the left side of
// binary ones, and the presupposition of pi/phi. `rhs` is the right side or
// body.
struct Node {
  Op op;
  std::string name;
  std::vector<Term> args;
  NodePtr lhs;
  NodePtr rhs;
  std::vector<NodePtr> context;
};

inline NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline bool belongs_to(const NodePtr& n, Lang lang) {
  switch (n->op) {
    case Op::atom:
      return true;
    case Op::top:
      return lang == Lang::con;
    case Op::negation:
      return belongs_to(n->lhs, lang);
    case Op::conjunction:
    case Op::disjunction:
    case Op::implication:
      return belongs_to(n->lhs, lang) && belongs_to(n->rhs, lang);
    case Op::forall:
    case Op::exists:
      return belongs_to(n->rhs, lang);
    case Op::presupposition:
      return lang == Lang::pre && belongs_to(n->lhs, Lang::base) &&
             belongs_to(n->rhs, lang);
    case Op::in:
      if (lang != Lang::con) return false;
      for (const auto& m : n->context)
        if (!belongs_to(m, Lang::base)) return false;
      return belongs_to(n->rhs, lang);
  }
  return false;
}

}  // namespace detail

class Context;

template <Lang L>
class Formula {
 public:
  static constexpr Lang language = L;

  static Formula atom(std::string predicate, std::vector<Term> args = {}) {
    if (predicate.empty()) throw std::invalid_argument("empty predicate name");
    return Formula(detail::make({Op::atom, std::move(predicate), std::move(args),
                                 nullptr, nullptr, {}}));
  }
  static Formula negation(const Formula& f) {
    return Formula(detail::make({Op::negation, {}, {}, f.node_, nullptr, {}}));
  }
  static Formula conjunction(const Formula& a, const Formula& b) {
    return binary(Op::conjunction, a, b);
  }
  static Formula disjunction(const Formula& a, const Formula& b) {
    return binary(Op::disjunction, a, b);
  }
  static Formula implication(const Formula& a, const Formula& b) {
    return binary(Op::implication, a, b);
  }
  static Formula forall(std::string var, const Formula& body) {
    return quantifier(Op::forall, std::move(var), body);
  }
  static Formula exists(std::string var, const Formula& body) {
    return quantifier(Op::exists, std::move(var), body);
  }
  static Formula quantifier(Op op, std::string var, const Formula& body) {
    assert(is_quantifier(op));
    if (var.empty()) throw std::invalid_argument("empty bound variable");
    return Formula(detail::make({op, std::move(var), {}, nullptr, body.node_, {}}));
  }
  static Formula binary(Op op, const Formula& a, const Formula& b) {
    assert(is_binary(op));
    return Formula(detail::make({op, {}, {}, a.node_, b.node_, {}}));
  }

  static Formula presupposition(const Formula<Lang::base>& pi, const Formula& body)
    requires(L == Lang::pre)
  {
    return Formula(
        detail::make({Op::presupposition, {}, {}, pi.node(), body.node_, {}}));
  }

  static Formula in(const Context& context, const Formula& body)
    requires(L == Lang::con);

  static Formula top()
    requires(L == Lang::con)
  {
    return Formula(detail::make({Op::top, {}, {}, nullptr, nullptr, {}}));
  }

  // Widening from first-order formulas.
  template <Lang M>
    requires(M == Lang::base && L != Lang::base)
  Formula(const Formula<M>& f) : node_(f.node()) {}

  // Returns the formula viewed in language L if every constructor it uses
  // belongs to L.
  template <Lang M>
  static std::optional<Formula> narrow(const Formula<M>& f) {
    if (!detail::belongs_to(f.node(), L)) return std::nullopt;
    return Formula(f.node());
  }

  static Formula from_node(detail::NodePtr node) {
    if (!node || !detail::belongs_to(node, L))
      throw std::invalid_argument("node does not belong to the formula language");
    return Formula(std::move(node));
  }

  Op op() const { return node_->op; }
  bool is_atom() const { return node_->op == Op::atom; }
  bool is_literal() const {
    return is_atom() || (op() == Op::negation && node_->lhs->op == Op::atom);
  }

  const std::string& predicate() const { return node_->name; }
  const std::vector<Term>& arguments() const { return node_->args; }
  const std::string& variable() const { return node_->name; }

  Formula operand() const { return Formula(node_->lhs); }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  Formula body() const { return Formula(node_->rhs); }
  Formula<Lang::base> presupposition() const {
    return Formula<Lang::base>::from_node(node_->lhs);
  }
  Context context() const;

  const detail::NodePtr& node() const { return node_; }

  // Structural (AST) equality. Use alpha_eq for equality up to bound names.
  bool operator==(const Formula& other) const;

 private:
  explicit Formula(detail::NodePtr node) : node_(std::move(node)) {}

  template <Lang>
  friend class Formula;

  detail::NodePtr node_;
};

using LFormula = Formula<Lang::base>;
using PreFormula = Formula<Lang::pre>;
using ConFormula = Formula<Lang::con>;

// ---------------------------------------------------------------------------
// Free variables

namespace detail {

inline void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable())
    out.insert(t.name());
  else
    for (const auto& a : t.args()) term_vars(a, out);
}

inline void free_vars(const NodePtr& n, std::set<std::string>& bound,
                      std::set<std::string>& out) {
  switch (n->op) {
    case Op::atom: {
      std::set<std::string> vs;
      for (const auto& a : n->args) term_vars(a, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
      return;
    }
    case Op::top:
      return;
    case Op::negation:
      free_vars(n->lhs, bound, out);
      return;
    case Op::forall:
    case Op::exists: {
      bool fresh = bound.insert(n->name).second;
      free_vars(n->rhs, bound, out);
      if (fresh) bound.erase(n->name);
      return;
    }
    case Op::in:
      for (const auto& m : n->context) free_vars(m, bound, out);
      free_vars(n->rhs, bound, out);
      return;
    default:
      free_vars(n->lhs, bound, out);
      free_vars(n->rhs, bound, out);
      return;
  }
}

inline std::set<std::string> free_vars(const NodePtr& n) {
  std::set<std::string> bound, out;
  free_vars(n, bound, out);
  return out;
}

}  // namespace detail

inline std::set<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  detail::term_vars(t, out);
  return out;
}

template <Lang L>
std::set<std::string> free_vars(const Formula<L>& f) {
  return detail::free_vars(f.node());
}

// ---------------------------------------------------------------------------
// Substitution

inline Term substitute(const Term& t, const std::string& var, const Term& by) {
  switch (t.kind()) {
    case Term::Kind::variable:
      return t.name() == var ? by : t;
    case Term::Kind::constant:
      return t;
    case Term::Kind::application: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, var, by));
      return Term::application(t.name(), std::move(args));
    }
  }
  return t;
}

namespace detail {

// Least numeric suffix making `base` avoid every name in `avoid`.
inline std::string fresh_name(const std::string& base,
                              const std::set<std::string>& avoid) {
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// Every variable, constant, and function name occurring in terms of `n`.
// Renamed binders avoid all of them so that rendering stays unambiguous.
inline void term_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name());
  for (const auto& a : t.args()) term_names(a, out);
}

inline void term_names(const NodePtr& n, std::set<std::string>& out) {
  if (!n) return;
  if (is_quantifier(n->op)) out.insert(n->name);
  for (const auto& a : n->args) term_names(a, out);
  for (const auto& m : n->context) term_names(m, out);
  term_names(n->lhs, out);
  term_names(n->rhs, out);
}

inline NodePtr substitute(const NodePtr& n, const std::string& var,
                          const Term& by, const std::set<std::string>& by_vars) {
  switch (n->op) {
    case Op::atom: {
      Node copy = *n;
      for (auto& a : copy.args) a = presup::substitute(a, var, by);
      return make(std::move(copy));
    }
    case Op::top:
      return n;
    case Op::forall:
    case Op::exists: {
      if (n->name == var) return n;
      if (!free_vars(n->rhs).count(var)) return n;
      if (by_vars.count(n->name)) {
        std::set<std::string> avoid = by_vars;
        term_names(n->rhs, avoid);
        std::string renamed = fresh_name(n->name, avoid);
        NodePtr body = substitute(n->rhs, n->name, Term::variable(renamed),
                                  {renamed});
        return make({n->op, renamed, {}, nullptr,
                     substitute(body, var, by, by_vars), {}});
      }
      return make({n->op, n->name, {}, nullptr, substitute(n->rhs, var, by, by_vars), {}});
    }
    case Op::in: {
      Node copy = *n;
      for (auto& m : copy.context) m = substitute(m, var, by, by_vars);
      copy.rhs = substitute(n->rhs, var, by, by_vars);
      return make(std::move(copy));
    }
    default: {
      Node copy = *n;
      copy.lhs = substitute(n->lhs, var, by, by_vars);
      if (n->rhs) copy.rhs = substitute(n->rhs, var, by, by_vars);
      return make(std::move(copy));
    }
  }
}

}  // namespace detail

// Replaces every free occurrence of `var` by `by`, renaming bound variables
// that would capture a variable of `by`.
template <Lang L>
Formula<L> substitute(const Formula<L>& f, const std::string& var, const Term& by) {
  return Formula<L>::from_node(detail::substitute(f.node(), var, by, term_vars(by)));
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace detail {

using Binders = std::vector<std::string>;

inline std::ptrdiff_t binder_index(const Binders& b, const std::string& name) {
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(b.size()) - 1; i >= 0; --i)
    if (b[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

inline bool alpha_eq(const Term& a, const Binders& ba, const Term& b,
                     const Binders& bb) {
  if (a.kind() != b.kind()) return false;
  if (a.is_variable()) {
    auto ia = binder_index(ba, a.name());
    auto ib = binder_index(bb, b.name());
    if (ia != ib) return false;
    return ia >= 0 || a.name() == b.name();
  }
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!alpha_eq(a.args()[i], ba, b.args()[i], bb)) return false;
  return true;
}

inline bool alpha_eq(const NodePtr& a, Binders& ba, const NodePtr& b, Binders& bb);

inline bool context_subset(const std::vector<NodePtr>& xs, Binders& bx,
                           const std::vector<NodePtr>& ys, Binders& by) {
  for (const auto& x : xs) {
    bool found = false;
    for (const auto& y : ys)
      if (alpha_eq(x, bx, y, by)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

inline bool alpha_eq(const NodePtr& a, Binders& ba, const NodePtr& b, Binders& bb) {
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::atom:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_eq(a->args[i], ba, b->args[i], bb)) return false;
      return true;
    case Op::top:
      return true;
    case Op::negation:
      return alpha_eq(a->lhs, ba, b->lhs, bb);
    case Op::forall:
    case Op::exists: {
      ba.push_back(a->name);
      bb.push_back(b->name);
      bool eq = alpha_eq(a->rhs, ba, b->rhs, bb);
      ba.pop_back();
      bb.pop_back();
      return eq;
    }
    case Op::in:
      return context_subset(a->context, ba, b->context, bb) &&
             context_subset(b->context, bb, a->context, ba) &&
             alpha_eq(a->rhs, ba, b->rhs, bb);
    default:
      return alpha_eq(a->lhs, ba, b->lhs, bb) && alpha_eq(a->rhs, ba, b->rhs, bb);
  }
}

inline bool alpha_eq(const NodePtr& a, const NodePtr& b) {
  Binders ba, bb;
  return alpha_eq(a, ba, b, bb);
}

inline bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->name != b->name || a->args != b->args ||
      a->context.size() != b->context.size())
    return false;
  for (std::size_t i = 0; i < a->context.size(); ++i)
    if (!structurally_equal(a->context[i], b->context[i])) return false;
  return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
}

}  // namespace detail

template <Lang L, Lang M>
bool alpha_eq(const Formula<L>& a, const Formula<M>& b) {
  return detail::alpha_eq(a.node(), b.node());
}

template <Lang L>
bool Formula<L>::operator==(const Formula& other) const {
  return detail::structurally_equal(node_, other.node_);
}

// ---------------------------------------------------------------------------
// Context

// A finite set of first-order formulas. Members keep their first-insertion
// order; equality ignores order. Inserting an alpha-variant of a member is a
// no-op.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<LFormula> members) {
    for (const auto& m : members) insert(m);
  }
  explicit Context(const std::vector<LFormula>& members) {
    for (const auto& m : members) insert(m);
  }

  // Returns false when an alpha-equivalent member was already present.
  bool insert(const LFormula& f) {
    if (contains(f)) return false;
    members_.push_back(f);
    return true;
  }

  Context with(const LFormula& f) const {
    Context c = *this;
    c.insert(f);
    return c;
  }

  Context united(const Context& other) const {
    Context c = *this;
    for (const auto& m : other.members_) c.insert(m);
    return c;
  }

  bool contains(const LFormula& f) const {
    for (const auto& m : members_)
      if (alpha_eq(m, f)) return true;
    return false;
  }

  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<LFormula>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const Context& a, const Context& b) {
    if (a.size() != b.size()) return false;
    for (const auto& m : a.members_)
      if (!b.contains(m)) return false;
    return true;
  }

 private:
  std::vector<LFormula> members_;
};

template <Lang L>
Formula<L> Formula<L>::in(const Context& context, const Formula& body)
  requires(L == Lang::con)
{
  detail::Node n{Op::in, {}, {}, nullptr, body.node_, {}};
  for (const auto& m : context) n.context.push_back(m.node());
  return Formula(detail::make(std::move(n)));
}

template <Lang L>
Context Formula<L>::context() const {
  Context c;
  for (const auto& m : node_->context) c.insert(LFormula::from_node(m));
  return c;
}

}  // namespace presup
