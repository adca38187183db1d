// Labeled tableau calculus for contextual formulas.
//
// Every node carries a label (i, sigma): i names the context the formula
// lives in, sigma the contexts accessible from it. Entering a context with
// (in) or (not-in) allocates a fresh id j and extends sigma with the id of
// the context being left. Boolean and quantifier rules copy the label.
//
// Two nodes (i, sigma) : A and (j, sigma') : ~B close a branch when A and B
// unify and i == j, i in sigma', or j in sigma.
//
// Free variables introduced by the universal rule are rigid: one
// substitution must close every branch. The search is depth-first with
// backtracking over closing pairs and iterative deepening on the number of
// instantiations allowed per universal formula.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "presup/formulas.hpp"
#include "presup/syntax.hpp"

namespace presup {

enum class Rule : std::uint8_t {
  root,
  in,
  not_in,
  conj,
  not_conj,
  disj,
  not_disj,
  impl,
  not_impl,
  not_not,
  forall,
  exists,
  not_forall,
  not_exists,
};

inline constexpr std::size_t kRuleCount = 14;

inline constexpr std::array<Rule, kRuleCount - 1> kExpansionRules = {
    Rule::in,       Rule::not_in,  Rule::conj,   Rule::not_conj, Rule::disj,
    Rule::not_disj, Rule::impl,    Rule::not_impl, Rule::not_not, Rule::forall,
    Rule::exists,   Rule::not_forall, Rule::not_exists};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::root: return "root";
    case Rule::in: return "in";
    case Rule::not_in: return "not-in";
    case Rule::conj: return "and";
    case Rule::not_conj: return "not-and";
    case Rule::disj: return "or";
    case Rule::not_disj: return "not-or";
    case Rule::impl: return "implies";
    case Rule::not_impl: return "not-implies";
    case Rule::not_not: return "not-not";
    case Rule::forall: return "forall";
    case Rule::exists: return "exists";
    case Rule::not_forall: return "not-forall";
    case Rule::not_exists: return "not-exists";
  }
  return "?";
}

struct Label {
  std::uint32_t context = 0;
  std::set<std::uint32_t> accessible;

  bool operator==(const Label&) const = default;
};

inline std::string render(const Label& l) {
  std::string s = "(" + std::to_string(l.context) + ",{";
  bool first = true;
  for (auto c : l.accessible) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(c);
  }
  return s + "})";
}

// Label half of the closure condition.
inline bool labels_compatible(const Label& a, const Label& b) {
  return a.context == b.context || b.accessible.count(a.context) > 0 ||
         a.accessible.count(b.context) > 0;
}

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct TableauNode {
  NodeId id = kNoNode;
  Label label;
  ConFormula formula;
  Rule rule = Rule::root;
  NodeId premise = kNoNode;  // node whose expansion produced this one
  NodeId parent = kNoNode;   // predecessor on the branch
  std::size_t application = 0;
  std::optional<Term> instance;  // term introduced by the quantifier rules
  bool from_context = false;     // descends from a context member
};

// ---------------------------------------------------------------------------
// Substitutions and unification

class Substitution {
 public:
  const Term* lookup(const std::string& var) const {
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  Term apply(const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::variable: {
        const Term* b = lookup(t.name());
        return b ? *b : t;
      }
      case Term::Kind::constant:
        return t;
      case Term::Kind::application: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto& a : t.args()) args.push_back(apply(a));
        return Term::application(t.name(), std::move(args));
      }
    }
    return t;
  }

  template <Lang L>
  Formula<L> apply(const Formula<L>& f) const {
    Formula<L> out = f;
    for (const auto& [var, term] : bindings_) out = substitute(out, var, term);
    return out;
  }

  // Adds var := term, keeping the substitution idempotent. Fails the occurs
  // check by returning false.
  bool bind(const std::string& var, const Term& term) {
    Term t = apply(term);
    if (t.is_variable() && t.name() == var) return true;
    if (term_vars(t).count(var)) return false;
    for (auto& [v, existing] : bindings_) existing = presup::substitute(existing, var, t);
    bindings_.emplace(var, std::move(t));
    return true;
  }

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }

  bool operator==(const Substitution&) const = default;

 private:
  std::map<std::string, Term> bindings_;
};

inline std::string render(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += v + " -> " + render(t);
  }
  return out + "}";
}

// Decides which variables unification may bind. An empty filter binds all.
using VariableFilter = std::function<bool(const std::string&)>;

inline bool unify_terms(const Term& a, const Term& b, Substitution& s,
                        const VariableFilter& bindable) {
  Term x = s.apply(a);
  Term y = s.apply(b);
  auto can_bind = [&](const Term& t) {
    return t.is_variable() && (!bindable || bindable(t.name()));
  };
  if (can_bind(x)) return s.bind(x.name(), y);
  if (can_bind(y)) return s.bind(y.name(), x);
  if (x.kind() != y.kind() || x.name() != y.name() || x.args().size() != y.args().size())
    return false;
  for (std::size_t i = 0; i < x.args().size(); ++i)
    if (!unify_terms(x.args()[i], y.args()[i], s, bindable)) return false;
  return true;
}

// Most general unifier of two atoms extending `base`, or nullopt.
template <Lang L>
std::optional<Substitution> unify_atoms(const Formula<L>& a, const Formula<L>& b,
                                        Substitution base = {},
                                        const VariableFilter& bindable = {}) {
  if (!a.is_atom() || !b.is_atom())
    throw std::invalid_argument("unify_atoms expects atomic formulas");
  if (a.predicate() != b.predicate() || a.arguments().size() != b.arguments().size())
    return std::nullopt;
  for (std::size_t i = 0; i < a.arguments().size(); ++i)
    if (!unify_terms(a.arguments()[i], b.arguments()[i], base, bindable))
      return std::nullopt;
  return base;
}

// Closure test for a pair of literal nodes: one atom, one negated atom, with
// unifiable atoms and compatible labels.
inline std::optional<Substitution> check_closure(const TableauNode& x, const TableauNode& y,
                                                 const Substitution& base = {},
                                                 const VariableFilter& bindable = {}) {
  const TableauNode* pos = nullptr;
  const TableauNode* neg = nullptr;
  if (x.formula.is_atom() && y.formula.op() == Op::negation && y.formula.operand().is_atom()) {
    pos = &x;
    neg = &y;
  } else if (y.formula.is_atom() && x.formula.op() == Op::negation &&
             x.formula.operand().is_atom()) {
    pos = &y;
    neg = &x;
  } else {
    return std::nullopt;
  }
  if (!labels_compatible(pos->label, neg->label)) return std::nullopt;
  return unify_atoms(pos->formula, neg->formula.operand(), base, bindable);
}

// ---------------------------------------------------------------------------
// Statistics and limits

struct ProofStats {
  std::array<std::uint64_t, kRuleCount> applications{};
  std::uint64_t nodes_created = 0;
  std::uint64_t branches_opened = 0;
  std::uint64_t branches_closed = 0;
  // Context members placed on a branch plus rule applications to nodes
  // descending from context members.
  std::uint64_t formula_expansions = 0;
  std::uint64_t unification_attempts = 0;
  std::uint64_t proofs = 0;
  // Rendered context member -> number of times it was placed on a branch.
  std::map<std::string, std::uint64_t> premise_introductions;

  std::uint64_t& operator[](Rule r) { return applications[static_cast<std::size_t>(r)]; }
  std::uint64_t operator[](Rule r) const { return applications[static_cast<std::size_t>(r)]; }

  std::uint64_t total_applications() const {
    std::uint64_t n = 0;
    for (auto r : kExpansionRules) n += (*this)[r];
    return n;
  }

  ProofStats& operator+=(const ProofStats& o) {
    for (std::size_t i = 0; i < kRuleCount; ++i) applications[i] += o.applications[i];
    nodes_created += o.nodes_created;
    branches_opened += o.branches_opened;
    branches_closed += o.branches_closed;
    formula_expansions += o.formula_expansions;
    unification_attempts += o.unification_attempts;
    proofs += o.proofs;
    for (const auto& [k, v] : o.premise_introductions) premise_introductions[k] += v;
    return *this;
  }
};

struct ProofLimits {
  std::uint32_t gamma_multiplicity = 3;
  std::size_t node_limit = 100000;
  std::uint32_t depth_limit = 5;

  void validate() const {
    if (gamma_multiplicity == 0 || node_limit == 0 || depth_limit == 0)
      throw std::invalid_argument("proof limits must be positive");
  }
};

enum class ProofVerdict { closed, open, resource_out };

inline const char* verdict_name(ProofVerdict v) {
  switch (v) {
    case ProofVerdict::closed: return "closed";
    case ProofVerdict::open: return "open";
    case ProofVerdict::resource_out: return "resource-out";
  }
  return "?";
}

struct Closure {
  NodeId leaf = kNoNode;
  NodeId positive = kNoNode;  // equals `negative` when ~true closes alone
  NodeId negative = kNoNode;
};

// A closed tableau: the nodes of every closed branch, one closure per leaf,
// and the substitution that makes every closing pair complementary.
struct Proof {
  ConFormula goal;
  std::vector<TableauNode> nodes;  // sorted by id
  std::vector<Closure> closures;
  Substitution substitution;

  const TableauNode* find(NodeId id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const TableauNode& n, NodeId i) { return n.id < i; });
    return it != nodes.end() && it->id == id ? &*it : nullptr;
  }
};

struct ProofResult {
  ProofVerdict verdict = ProofVerdict::open;
  ProofStats stats;
  std::optional<Proof> proof;
};

// ---------------------------------------------------------------------------
// Rule application

namespace detail {

inline void collect_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.name());
  for (const auto& a : t.args()) collect_names(a, out);
}

inline void collect_names(const NodePtr& n, std::set<std::string>& out) {
  if (!n) return;
  if (!n->name.empty()) out.insert(n->name);
  for (const auto& a : n->args) collect_names(a, out);
  for (const auto& m : n->context) collect_names(m, out);
  collect_names(n->lhs, out);
  collect_names(n->rhs, out);
}

inline bool has_quantifier(const NodePtr& n) {
  if (!n) return false;
  if (is_quantifier(n->op)) return true;
  for (const auto& m : n->context)
    if (has_quantifier(m)) return true;
  return has_quantifier(n->lhs) || has_quantifier(n->rhs);
}

}  // namespace detail

// Source of fresh context ids, rigid variables, and Skolem symbols.
class FreshSupply {
 public:
  FreshSupply() = default;
  explicit FreshSupply(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  std::uint32_t context() { return next_context_++; }

  std::string variable() { return next("X", next_variable_); }
  std::string skolem() { return next("sk", next_skolem_); }

  std::uint32_t contexts_allocated() const { return next_context_ - 1; }

 private:
  std::string next(const char* prefix, std::size_t& counter) {
    for (;;) {
      std::string name = prefix + std::to_string(++counter);
      if (!reserved_.count(name)) return name;
    }
  }

  std::set<std::string> reserved_;
  std::uint32_t next_context_ = 1;
  std::size_t next_variable_ = 0;
  std::size_t next_skolem_ = 0;
};

struct NodeSpec {
  Label label;
  ConFormula formula;
  std::optional<Term> instance;
  bool context_member = false;
};

// One entry per branch; non-branching rules produce a single branch.
struct Expansion {
  Rule rule = Rule::root;
  std::vector<std::vector<NodeSpec>> branches;
};

// Rule that expands `f`, or nullopt for literals, true, and ~true.
inline std::optional<Rule> rule_for(const ConFormula& f) {
  switch (f.op()) {
    case Op::in: return Rule::in;
    case Op::conjunction: return Rule::conj;
    case Op::disjunction: return Rule::disj;
    case Op::implication: return Rule::impl;
    case Op::forall: return Rule::forall;
    case Op::exists: return Rule::exists;
    case Op::negation:
      switch (f.operand().op()) {
        case Op::in: return Rule::not_in;
        case Op::conjunction: return Rule::not_conj;
        case Op::disjunction: return Rule::not_disj;
        case Op::implication: return Rule::not_impl;
        case Op::negation: return Rule::not_not;
        case Op::forall: return Rule::not_forall;
        case Op::exists: return Rule::not_exists;
        default: return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

inline bool is_branching(Rule r) { return r == Rule::disj || r == Rule::impl || r == Rule::in; }

inline Label enter_context(const Label& from, std::uint32_t fresh) {
  Label l{fresh, from.accessible};
  l.accessible.insert(from.context);
  return l;
}

// Disjunction of the negated members, associated to the left; ~true when the
// context is empty.
inline ConFormula negated_disjunction(const Context& ctx) {
  if (ctx.empty()) return ConFormula::negation(ConFormula::top());
  std::optional<ConFormula> acc;
  for (const auto& m : ctx) {
    ConFormula neg = ConFormula::negation(m);
    acc = acc ? ConFormula::disjunction(*acc, neg) : neg;
  }
  return *acc;
}

inline Expansion expand_node(const TableauNode& node, FreshSupply& fresh) {
  auto rule = rule_for(node.formula);
  if (!rule) throw std::invalid_argument("no rule applies to " + render(node.formula));
  const Label& l = node.label;
  const ConFormula& f = node.formula;
  Expansion e{*rule, {}};
  auto same = [&](ConFormula g) { return NodeSpec{l, std::move(g), std::nullopt, false}; };
  switch (*rule) {
    case Rule::not_in: {
      ConFormula inner = f.operand();
      Label child = enter_context(l, fresh.context());
      std::vector<NodeSpec> out;
      for (const auto& m : inner.context()) out.push_back({child, m, std::nullopt, true});
      out.push_back({child, ConFormula::negation(inner.body()), std::nullopt, false});
      e.branches.push_back(std::move(out));
      break;
    }
    case Rule::in: {
      Label child = enter_context(l, fresh.context());
      e.branches.push_back({{child, negated_disjunction(f.context()), std::nullopt, true}});
      e.branches.push_back({{child, f.body(), std::nullopt, false}});
      break;
    }
    case Rule::conj:
      e.branches.push_back({same(f.left()), same(f.right())});
      break;
    case Rule::not_conj: {
      ConFormula g = f.operand();
      e.branches.push_back({same(ConFormula::disjunction(ConFormula::negation(g.left()),
                                                         ConFormula::negation(g.right())))});
      break;
    }
    case Rule::disj:
      e.branches.push_back({same(f.left())});
      e.branches.push_back({same(f.right())});
      break;
    case Rule::not_disj: {
      ConFormula g = f.operand();
      e.branches.push_back({same(ConFormula::conjunction(ConFormula::negation(g.left()),
                                                         ConFormula::negation(g.right())))});
      break;
    }
    case Rule::impl:
      e.branches.push_back({same(ConFormula::negation(f.left()))});
      e.branches.push_back({same(f.right())});
      break;
    case Rule::not_impl: {
      ConFormula g = f.operand();
      e.branches.push_back(
          {same(ConFormula::conjunction(g.left(), ConFormula::negation(g.right())))});
      break;
    }
    case Rule::not_not:
      e.branches.push_back({same(f.operand().operand())});
      break;
    case Rule::forall: {
      Term x = Term::variable(fresh.variable());
      e.branches.push_back({{l, substitute(f.body(), f.variable(), x), x, false}});
      break;
    }
    case Rule::exists: {
      std::vector<Term> args;
      for (const auto& v : free_vars(f)) args.push_back(Term::variable(v));
      std::string sk = fresh.skolem();
      Term t = args.empty() ? Term::constant(sk) : Term::application(sk, std::move(args));
      e.branches.push_back({{l, substitute(f.body(), f.variable(), t), t, false}});
      break;
    }
    case Rule::not_forall: {
      ConFormula g = f.operand();
      e.branches.push_back(
          {same(ConFormula::exists(g.variable(), ConFormula::negation(g.body())))});
      break;
    }
    case Rule::not_exists: {
      ConFormula g = f.operand();
      e.branches.push_back(
          {same(ConFormula::forall(g.variable(), ConFormula::negation(g.body())))});
      break;
    }
    case Rule::root:
      break;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Proof search

namespace detail {

struct NodeLimitReached {};

class Prover {
 public:
  using Continuation = std::function<bool(const Substitution&)>;

  Prover(const ConFormula& goal, const ProofLimits& limits) : goal_(goal), limits_(limits) {}

  ProofResult run() {
    limits_.validate();
    ProofResult result;
    result.stats.proofs = 1;
    std::set<std::string> reserved;
    collect_names(goal_.node(), reserved);
    ground_ = !has_quantifier(goal_.node());
    std::uint32_t rounds = std::min(limits_.depth_limit, limits_.gamma_multiplicity);
    for (std::uint32_t round = 1; round <= rounds; ++round) {
      arena_.clear();
      closures_.clear();
      rigid_.clear();
      fresh_ = FreshSupply(reserved);
      multiplicity_ = round;
      gamma_blocked_ = false;
      application_ = 0;

      Branch b;
      stats_.branches_opened += 1;
      NodeSpec root{Label{}, ConFormula::negation(goal_), std::nullopt, false};
      bool closed = false;
      try {
        Substitution solution;
        Continuation done = [&solution](const Substitution& s) {
          solution = s;
          return true;
        };
        Outcome o = add(b, root, kNoNode, Rule::root, false, {}, done);
        closed = o == Outcome::closed || (o == Outcome::pending && close(b, {}, done));
        if (closed) {
          result.verdict = ProofVerdict::closed;
          result.proof = build_proof(ground_ ? Substitution{} : solution);
        }
      } catch (const NodeLimitReached&) {
        result.verdict = ProofVerdict::resource_out;
        result.stats += stats_;
        return result;
      }
      if (closed) {
        result.stats += stats_;
        return result;
      }
      if (!gamma_blocked_) {
        result.verdict = ProofVerdict::open;
        result.stats += stats_;
        return result;
      }
    }
    result.verdict = ProofVerdict::resource_out;
    result.stats += stats_;
    return result;
  }

 private:
  enum class Outcome { pending, closed, failed };

  struct Branch {
    std::vector<NodeId> literals;
    std::array<std::deque<NodeId>, 4> queues;  // alpha, not-in, beta, delta
    std::deque<NodeId> gamma;
    std::map<NodeId, std::uint32_t> gamma_uses;
    NodeId tip = kNoNode;
  };

  static int priority(Rule r) {
    switch (r) {
      case Rule::not_in: return 1;
      case Rule::disj:
      case Rule::impl:
      case Rule::in: return 2;
      case Rule::exists: return 3;
      case Rule::forall: return 4;
      default: return 0;
    }
  }

  bool bindable(const std::string& v) const { return rigid_.count(v) > 0; }

  VariableFilter filter() const {
    return [this](const std::string& v) { return bindable(v); };
  }

  NodeId create(Branch& b, const NodeSpec& spec, NodeId premise, Rule rule, bool from_context) {
    if (stats_.nodes_created >= limits_.node_limit) throw NodeLimitReached{};
    ++stats_.nodes_created;
    NodeId id = arena_.size();
    arena_.push_back(TableauNode{id, spec.label, spec.formula, rule, premise, b.tip,
                                 application_, spec.instance, from_context});
    if (spec.instance && rule == Rule::forall) rigid_.insert(spec.instance->name());
    b.tip = id;
    return id;
  }

  // Puts a node on the branch. Literals are tested against every earlier
  // literal; a closing pair hands the extended substitution to `k`.
  Outcome add(Branch& b, const NodeSpec& spec, NodeId premise, Rule rule, bool from_context,
              const Substitution& s, const Continuation& k) {
    NodeId id = create(b, spec, premise, rule, from_context || spec.context_member);
    const ConFormula& f = arena_[id].formula;
    if (f.op() == Op::top) return Outcome::pending;
    if (f.op() == Op::negation && f.operand().op() == Op::top) {
      if (!k(s)) return Outcome::failed;
      record(b.tip, id, id);
      return Outcome::closed;
    }
    if (f.is_literal()) {
      bool negative = f.op() == Op::negation;
      for (NodeId other : b.literals) {
        const TableauNode& o = arena_[other];
        if ((o.formula.op() == Op::negation) == negative) continue;
        if (!labels_compatible(o.label, arena_[id].label)) continue;
        ++stats_.unification_attempts;
        auto unifier = check_closure(arena_[id], o, s, filter());
        if (!unifier) continue;
        bool general = *unifier == s;
        if (k(*unifier)) {
          record(b.tip, negative ? other : id, negative ? id : other);
          return Outcome::closed;
        }
        // Nothing more specific can succeed where the most general failed.
        if (general) return Outcome::failed;
      }
      b.literals.push_back(id);
      return Outcome::pending;
    }
    Rule r = *rule_for(f);
    if (r == Rule::forall)
      b.gamma.push_back(id);
    else
      b.queues[static_cast<std::size_t>(priority(r))].push_back(id);
    return Outcome::pending;
  }

  void record(NodeId leaf, NodeId positive, NodeId negative) {
    ++stats_.branches_closed;
    closures_.push_back({leaf, positive, negative});
  }

  NodeId next_node(Branch& b) {
    for (auto& q : b.queues)
      if (!q.empty()) {
        NodeId id = q.front();
        q.pop_front();
        return id;
      }
    while (!b.gamma.empty()) {
      NodeId id = b.gamma.front();
      b.gamma.pop_front();
      auto& uses = b.gamma_uses[id];
      if (uses < multiplicity_) {
        ++uses;
        b.gamma.push_back(id);
        return id;
      }
      gamma_blocked_ = true;
    }
    return kNoNode;
  }

  void count(const TableauNode& premise, Rule rule) {
    ++stats_[rule];
    if (premise.from_context) ++stats_.formula_expansions;
    if (rule == Rule::in || rule == Rule::not_in) {
      Context members =
          rule == Rule::in ? premise.formula.context() : premise.formula.operand().context();
      for (const auto& m : members) {
        ++stats_.formula_expansions;
        ++stats_.premise_introductions[render(m)];
      }
    }
  }

  Outcome add_all(Branch& b, const std::vector<NodeSpec>& specs, NodeId premise, Rule rule,
                  bool from_context, const Substitution& s, const Continuation& k) {
    for (const auto& spec : specs) {
      Outcome o = add(b, spec, premise, rule, from_context, s, k);
      if (o != Outcome::pending) return o;
    }
    return Outcome::pending;
  }

  bool close_with(Branch b, const std::vector<NodeSpec>& specs, NodeId premise, Rule rule,
                  bool from_context, std::size_t application, const Substitution& s,
                  const Continuation& k) {
    application_ = application;
    Outcome o = add_all(b, specs, premise, rule, from_context, s, k);
    if (o == Outcome::closed) return true;
    if (o == Outcome::failed) return false;
    return close(b, s, k);
  }

  // Expands `b` until it closes (and `k` accepts the closing substitution)
  // or saturates.
  bool close(Branch& b, const Substitution& s, const Continuation& k) {
    for (;;) {
      NodeId next = next_node(b);
      if (next == kNoNode) return false;
      Expansion e = expand_node(arena_[next], fresh_);
      count(arena_[next], e.rule);
      bool ctx = arena_[next].from_context;
      std::size_t application = ++next_application_;
      application_ = application;
      if (e.branches.size() == 1) {
        Outcome o = add_all(b, e.branches[0], next, e.rule, ctx, s, k);
        if (o == Outcome::closed) return true;
        if (o == Outcome::failed) return false;
        continue;
      }
      ++stats_.branches_opened;
      Branch right = b;
      if (ground_) {
        // Without rigid variables branches close independently.
        static const Continuation accept = [](const Substitution&) { return true; };
        return close_with(std::move(b), e.branches[0], next, e.rule, ctx, application, s,
                          accept) &&
               close_with(std::move(right), e.branches[1], next, e.rule, ctx, application, s,
                          k);
      }
      const auto& branches = e.branches;
      return close_with(std::move(b), branches[0], next, e.rule, ctx, application, s,
                        [&, application](const Substitution& s1) {
                          return close_with(right, branches[1], next, e.rule, ctx,
                                            application, s1, k);
                        });
    }
  }

  Proof build_proof(const Substitution& solution) const {
    std::set<NodeId> live;
    for (const auto& c : closures_)
      for (NodeId n = c.leaf; n != kNoNode && live.insert(n).second; n = arena_[n].parent) {
      }
    Proof p{goal_, {}, closures_, solution};
    for (NodeId id : live) p.nodes.push_back(arena_[id]);
    return p;
  }

  ConFormula goal_;
  ProofLimits limits_;
  ProofStats stats_;
  std::vector<TableauNode> arena_;
  std::vector<Closure> closures_;
  std::set<std::string> rigid_;
  FreshSupply fresh_;
  std::uint32_t multiplicity_ = 1;
  bool gamma_blocked_ = false;
  bool ground_ = true;
  std::size_t application_ = 0;
  std::size_t next_application_ = 0;
};

}  // namespace detail

// Searches for a closed tableau rooted at (0, {}) : ~goal.
inline ProofResult prove(const ConFormula& goal, const ProofLimits& limits = {}) {
  return detail::Prover(goal, limits).run();
}

enum class EntailmentVerdict { entailed, not_proved, unknown };

struct EntailmentResult {
  EntailmentVerdict verdict = EntailmentVerdict::not_proved;
  ProofStats stats;
  std::optional<Proof> proof;
};

// Decides context |- pi by proving in(context, pi).
inline EntailmentResult entails(const Context& context, const LFormula& pi,
                                const ProofLimits& limits = {}) {
  ProofResult r = prove(ConFormula::in(context, pi), limits);
  EntailmentResult out{EntailmentVerdict::not_proved, std::move(r.stats), std::move(r.proof)};
  if (r.verdict == ProofVerdict::closed) out.verdict = EntailmentVerdict::entailed;
  if (r.verdict == ProofVerdict::resource_out) out.verdict = EntailmentVerdict::unknown;
  return out;
}

// ---------------------------------------------------------------------------
// Trace

// One line per node: id, label, formula, rule, premise, branch parent, and
// for leaves the pair of nodes closing the branch.
inline std::string render_trace(const Proof& proof) {
  std::map<NodeId, const Closure*> by_leaf;
  for (const auto& c : proof.closures) by_leaf[c.leaf] = &c;
  auto id_or_dash = [](NodeId n) { return n == kNoNode ? std::string("-") : std::to_string(n); };
  std::ostringstream out;
  for (const auto& n : proof.nodes) {
    out << n.id << '\t' << render(n.label) << '\t' << render(n.formula) << '\t'
        << rule_name(n.rule) << '\t' << id_or_dash(n.premise) << '\t' << id_or_dash(n.parent)
        << '\t';
    auto it = by_leaf.find(n.id);
    if (it == by_leaf.end())
      out << '-';
    else
      out << "closed:" << it->second->positive << ',' << it->second->negative;
    out << '\n';
  }
  if (!proof.substitution.empty()) out << "substitution\t" << render(proof.substitution) << '\n';
  return out.str();
}

}  // namespace presup
