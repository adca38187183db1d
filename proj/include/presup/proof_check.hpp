// Independent checker for closed tableaux. It re-derives what every rule
// application must have produced from the premise alone and re-tests every
// closing pair, without calling into the prover.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "presup/formulas.hpp"
#include "presup/syntax.hpp"
#include "presup/tableau.hpp"

namespace presup {

struct ProofProblem {
  enum class Kind { structure, rule, label, fresh_context, quantifier, closure, substitution };
  Kind kind;
  std::string message;
};

namespace detail {

struct Expected {
  ConFormula formula;
  bool enters_context = false;
};

class ProofChecker {
 public:
  explicit ProofChecker(const Proof& p) : p_(p) {}

  std::vector<ProofProblem> run() {
    collect_names(p_.goal.node(), goal_names_);
    std::map<std::size_t, std::vector<const TableauNode*>> applications;
    const TableauNode* root = nullptr;
    for (const auto& n : p_.nodes) {
      if (n.parent == kNoNode) {
        if (root) fail(ProofProblem::Kind::structure, "more than one root");
        root = &n;
        continue;
      }
      if (!p_.find(n.parent))
        fail(ProofProblem::Kind::structure, "node " + std::to_string(n.id) + " has no parent");
      children_[n.parent].push_back(n.id);
      applications[n.application].push_back(&n);
    }
    if (!root) {
      fail(ProofProblem::Kind::structure, "no root node");
      return problems_;
    }
    if (root->rule != Rule::root || !(root->label == Label{}) ||
        !(root->formula == ConFormula::negation(p_.goal)))
      fail(ProofProblem::Kind::structure, "root is not (0,{}) : ~goal");

    for (const auto& [app, nodes] : applications) check_application(nodes);
    check_closures();
    check_substitution();
    return problems_;
  }

 private:
  void fail(ProofProblem::Kind k, std::string msg) { problems_.push_back({k, std::move(msg)}); }

  bool on_branch(NodeId ancestor, NodeId from) const {
    for (NodeId n = from; n != kNoNode;) {
      if (n == ancestor) return true;
      const TableauNode* node = p_.find(n);
      if (!node) return false;
      n = node->parent;
    }
    return false;
  }

  static Rule classify(const ConFormula& f, bool& ok) {
    ok = true;
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
          default: break;
        }
        break;
      default:
        break;
    }
    ok = false;
    return Rule::root;
  }

  // Branches of formulas the rule must produce from `f`; quantifier rules use
  // the recorded instance.
  std::vector<std::vector<ConFormula>> expected(const ConFormula& f, Rule r,
                                                const std::optional<Term>& instance) {
    using F = ConFormula;
    switch (r) {
      case Rule::not_in: {
        std::vector<F> out;
        F in = f.operand();
        for (const auto& m : in.node()->context) out.push_back(LFormula::from_node(m));
        out.push_back(F::negation(in.body()));
        return {out};
      }
      case Rule::in: {
        std::optional<F> disj;
        for (const auto& m : f.node()->context) {
          F neg = F::negation(LFormula::from_node(m));
          disj = disj ? F::disjunction(*disj, neg) : neg;
        }
        return {{disj ? *disj : F::negation(F::top())}, {f.body()}};
      }
      case Rule::conj: return {{f.left(), f.right()}};
      case Rule::not_conj:
        return {{F::disjunction(F::negation(f.operand().left()),
                                F::negation(f.operand().right()))}};
      case Rule::disj: return {{f.left()}, {f.right()}};
      case Rule::not_disj:
        return {{F::conjunction(F::negation(f.operand().left()),
                                F::negation(f.operand().right()))}};
      case Rule::impl: return {{F::negation(f.left())}, {f.right()}};
      case Rule::not_impl:
        return {{F::conjunction(f.operand().left(), F::negation(f.operand().right()))}};
      case Rule::not_not: return {{f.operand().operand()}};
      case Rule::not_forall:
        return {{F::exists(f.operand().variable(), F::negation(f.operand().body()))}};
      case Rule::not_exists:
        return {{F::forall(f.operand().variable(), F::negation(f.operand().body()))}};
      case Rule::forall:
      case Rule::exists:
        if (!instance) return {};
        return {{substitute(f.body(), f.variable(), *instance)}};
      case Rule::root:
        return {};
    }
    return {};
  }

  void check_application(std::vector<const TableauNode*> nodes) {
    std::sort(nodes.begin(), nodes.end(),
              [](const TableauNode* a, const TableauNode* b) { return a->id < b->id; });
    const TableauNode& first = *nodes.front();
    std::string where = "application producing node " + std::to_string(first.id);
    const TableauNode* premise = p_.find(first.premise);
    if (!premise) {
      fail(ProofProblem::Kind::structure, where + ": premise missing");
      return;
    }
    for (const auto* n : nodes) {
      if (n->premise != first.premise || n->rule != first.rule)
        fail(ProofProblem::Kind::structure, where + ": mixed premises or rules");
      if (!on_branch(premise->id, n->parent))
        fail(ProofProblem::Kind::structure,
             where + ": premise " + std::to_string(premise->id) + " not on the branch");
    }
    bool ok = false;
    Rule r = classify(premise->formula, ok);
    if (!ok || r != first.rule) {
      fail(ProofProblem::Kind::rule, where + ": rule " + rule_name(first.rule) +
                                         " does not apply to " + render(premise->formula));
      return;
    }
    auto want = expected(premise->formula, r, first.instance);
    bool branching = r == Rule::in || r == Rule::disj || r == Rule::impl;
    if (branching) {
      if (nodes.size() != 2 || nodes[0]->parent != nodes[1]->parent) {
        fail(ProofProblem::Kind::structure, where + ": branching rule must yield two siblings");
        return;
      }
      for (std::size_t i = 0; i < 2; ++i)
        if (!(nodes[i]->formula == want[i][0]))
          fail(ProofProblem::Kind::rule, where + ": expected " + render(want[i][0]) + ", got " +
                                             render(nodes[i]->formula));
    } else {
      // A branch may close before all conclusions are written; the last one
      // written must then be a leaf.
      bool truncated = !want.empty() && nodes.size() < want[0].size() &&
                       !children_.count(nodes.back()->id);
      if (want.empty() || (nodes.size() != want[0].size() && !truncated)) {
        fail(ProofProblem::Kind::rule, where + ": wrong number of conclusions");
        return;
      }
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0 && nodes[i]->parent != nodes[i - 1]->id)
          fail(ProofProblem::Kind::structure, where + ": conclusions are not consecutive");
        if (!(nodes[i]->formula == want[0][i]))
          fail(ProofProblem::Kind::rule, where + ": expected " + render(want[0][i]) + ", got " +
                                             render(nodes[i]->formula));
      }
    }
    check_labels(*premise, nodes, r, where);
    if (r == Rule::forall || r == Rule::exists) check_instance(*premise, first, r, where);
  }

  void check_labels(const TableauNode& premise, const std::vector<const TableauNode*>& nodes,
                    Rule r, const std::string& where) {
    if (r == Rule::in || r == Rule::not_in) {
      std::uint32_t j = nodes.front()->label.context;
      std::set<std::uint32_t> sigma = premise.label.accessible;
      sigma.insert(premise.label.context);
      for (const auto* n : nodes)
        if (n->label.context != j || n->label.accessible != sigma)
          fail(ProofProblem::Kind::label,
               where + ": label " + render(n->label) + " does not extend " + render(premise.label));
      if (j == 0 || sigma.count(j) || !contexts_.insert(j).second)
        fail(ProofProblem::Kind::fresh_context,
             where + ": context id " + std::to_string(j) + " is not fresh");
      return;
    }
    for (const auto* n : nodes)
      if (!(n->label == premise.label))
        fail(ProofProblem::Kind::label, where + ": label " + render(n->label) +
                                            " differs from the premise " + render(premise.label));
  }

  void check_instance(const TableauNode& premise, const TableauNode& node, Rule r,
                      const std::string& where) {
    if (!node.instance) {
      fail(ProofProblem::Kind::quantifier, where + ": missing instance term");
      return;
    }
    const Term& t = *node.instance;
    if (r == Rule::forall) {
      if (!t.is_variable() || goal_names_.count(t.name()) || !rigid_.insert(t.name()).second)
        fail(ProofProblem::Kind::quantifier, where + ": " + render(t) + " is not a fresh variable");
      return;
    }
    if (t.is_variable() || goal_names_.count(t.name()) || !skolems_.insert(t.name()).second)
      fail(ProofProblem::Kind::quantifier, where + ": " + render(t) + " is not a fresh Skolem term");
    std::vector<Term> args;
    for (const auto& v : free_vars(premise.formula)) args.push_back(Term::variable(v));
    if (t.args() != args)
      fail(ProofProblem::Kind::quantifier,
           where + ": Skolem term " + render(t) + " must range over the free variables");
  }

  void check_closures() {
    std::map<NodeId, int> closed;
    for (const auto& c : p_.closures) {
      std::string where = "closure at leaf " + std::to_string(c.leaf);
      const TableauNode* leaf = p_.find(c.leaf);
      const TableauNode* pos = p_.find(c.positive);
      const TableauNode* neg = p_.find(c.negative);
      if (!leaf || !pos || !neg) {
        fail(ProofProblem::Kind::closure, where + ": unknown node");
        continue;
      }
      ++closed[c.leaf];
      if (children_.count(c.leaf))
        fail(ProofProblem::Kind::closure, where + ": not a leaf");
      if (!on_branch(pos->id, leaf->id) || !on_branch(neg->id, leaf->id))
        fail(ProofProblem::Kind::closure, where + ": closing nodes not on the branch");
      if (pos->id == neg->id) {
        if (!(pos->formula == ConFormula::negation(ConFormula::top())))
          fail(ProofProblem::Kind::closure, where + ": single-node closure needs ~true");
        continue;
      }
      if (!pos->formula.is_atom() || neg->formula.op() != Op::negation ||
          !neg->formula.operand().is_atom()) {
        fail(ProofProblem::Kind::closure, where + ": not a complementary pair of literals");
        continue;
      }
      ConFormula a = p_.substitution.apply(pos->formula);
      ConFormula b = p_.substitution.apply(neg->formula.operand());
      if (!(a == b))
        fail(ProofProblem::Kind::closure,
             where + ": " + render(a) + " and " + render(b) + " differ under the substitution");
      const Label& l1 = pos->label;
      const Label& l2 = neg->label;
      bool reachable = l1.context == l2.context || l2.accessible.count(l1.context) ||
                       l1.accessible.count(l2.context);
      if (!reachable)
        fail(ProofProblem::Kind::closure,
             where + ": contexts " + render(l1) + " and " + render(l2) + " are not accessible");
    }
    for (const auto& n : p_.nodes)
      if (!children_.count(n.id) && closed[n.id] != 1)
        fail(ProofProblem::Kind::closure, "leaf " + std::to_string(n.id) + " is not closed");
  }

  void check_substitution() {
    const auto& s = p_.substitution;
    for (const auto& [v, t] : s.bindings()) {
      if (!rigid_.count(v))
        fail(ProofProblem::Kind::substitution, "binding of non-rigid variable " + v);
      if (!(s.apply(t) == t))
        fail(ProofProblem::Kind::substitution, "substitution is not idempotent at " + v);
    }
  }

  const Proof& p_;
  std::set<std::string> goal_names_;
  std::map<NodeId, std::vector<NodeId>> children_;
  std::set<std::uint32_t> contexts_;
  std::set<std::string> rigid_;
  std::set<std::string> skolems_;
  std::vector<ProofProblem> problems_;
};

}  // namespace detail

// Empty when every rule application and every closure in `proof` is valid.
inline std::vector<ProofProblem> check_proof(const Proof& proof) {
  return detail::ProofChecker(proof).run();
}

}  // namespace presup
