// Baseline-versus-contextual comparison, a truth-table oracle for the
// propositional fragment, and a generator of discourses whose triggers share
// one large context.

#pragma once

#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "presup/formulas.hpp"
#include "presup/projection.hpp"
#include "presup/syntax.hpp"
#include "presup/tableau.hpp"

namespace presup {

// ---------------------------------------------------------------------------
// Truth-table oracle

namespace detail {

inline void propositional_atoms(const NodePtr& n, std::set<std::string>& out) {
  switch (n->op) {
    case Op::atom:
      if (!n->args.empty())
        throw std::invalid_argument("truth tables need zero-ary atoms, got " + n->name);
      out.insert(n->name);
      return;
    case Op::negation:
      propositional_atoms(n->lhs, out);
      return;
    case Op::conjunction:
    case Op::disjunction:
    case Op::implication:
      propositional_atoms(n->lhs, out);
      propositional_atoms(n->rhs, out);
      return;
    default:
      throw std::invalid_argument("truth tables need propositional formulas");
  }
}

inline bool evaluate(const NodePtr& n, const std::map<std::string, bool>& v) {
  switch (n->op) {
    case Op::atom: return v.at(n->name);
    case Op::negation: return !evaluate(n->lhs, v);
    case Op::conjunction: return evaluate(n->lhs, v) && evaluate(n->rhs, v);
    case Op::disjunction: return evaluate(n->lhs, v) || evaluate(n->rhs, v);
    case Op::implication: return !evaluate(n->lhs, v) || evaluate(n->rhs, v);
    default: throw std::invalid_argument("truth tables need propositional formulas");
  }
}

}  // namespace detail

// Context |= pi by enumerating every assignment to the atoms involved.
inline bool truth_table_entails(const Context& context, const LFormula& pi) {
  std::set<std::string> atoms;
  detail::propositional_atoms(pi.node(), atoms);
  for (const auto& m : context) detail::propositional_atoms(m.node(), atoms);
  if (atoms.size() > 24) throw std::invalid_argument("too many atoms for a truth table");
  std::vector<std::string> names(atoms.begin(), atoms.end());
  std::map<std::string, bool> v;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << names.size()); ++bits) {
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (bits >> i) & 1;
    bool premises = true;
    for (const auto& m : context)
      if (!detail::evaluate(m.node(), v)) {
        premises = false;
        break;
      }
    if (premises && !detail::evaluate(pi.node(), v)) return false;
  }
  return true;
}

// Semantic value of a positive combination of first-order formulas, true,
// and in-statements, evaluated against the accumulated context.
inline bool eval_oracle(const Context& context, const ConFormula& f) {
  if (auto l = LFormula::narrow(f)) return truth_table_entails(context, *l);
  switch (f.op()) {
    case Op::top: return true;
    case Op::conjunction: return eval_oracle(context, f.left()) && eval_oracle(context, f.right());
    case Op::disjunction: return eval_oracle(context, f.left()) || eval_oracle(context, f.right());
    case Op::in: return eval_oracle(context.united(f.context()), f.body());
    default:
      throw std::invalid_argument("formula outside the oracle fragment: " + render(f));
  }
}

// Adapter deciding local tests of pres by truth tables.
inline EntailmentResult truth_table_entailment(const Context& context, const LFormula& pi) {
  return {truth_table_entails(context, pi) ? EntailmentVerdict::entailed
                                           : EntailmentVerdict::not_proved,
          {},
          std::nullopt};
}

// ---------------------------------------------------------------------------
// Generator

// c1 & (c2 & ... & (cn & (pi1/a1 & (... & pik/ak)))) where every pij is a
// conjunction of a seeded non-empty subset of the ci. Conjunctions nest to
// the right so that every trigger sits inside the same shared context.
inline PreFormula generate_family(unsigned n, unsigned k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("family needs n >= 1 and k >= 1");
  std::mt19937_64 rng(seed);
  auto c = [](unsigned i) { return LFormula::atom("c" + std::to_string(i)); };
  std::vector<PreFormula> conjuncts;
  for (unsigned i = 1; i <= n; ++i) conjuncts.push_back(c(i));
  for (unsigned j = 1; j <= k; ++j) {
    std::vector<unsigned> chosen;
    for (unsigned i = 1; i <= n; ++i)
      if (rng() & 1) chosen.push_back(i);
    if (chosen.empty()) chosen.push_back(static_cast<unsigned>(rng() % n) + 1);
    LFormula pi = c(chosen[0]);
    for (std::size_t x = 1; x < chosen.size(); ++x) pi = LFormula::conjunction(pi, c(chosen[x]));
    conjuncts.push_back(PreFormula::presupposition(pi, LFormula::atom("a" + std::to_string(j))));
  }
  PreFormula out = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;)
    out = PreFormula::conjunction(conjuncts[i], out);
  return out;
}

// ---------------------------------------------------------------------------
// Runs

struct BaselineRun {
  PresuppositionSet set;
  std::size_t proofs = 0;
};

// One independent tableau proof per local test.
inline BaselineRun run_baseline(const PreFormula& f, const ProofLimits& limits = {}) {
  BaselineRun run{pres(f, {}, limits), 0};
  run.proofs = run.set.checks().size();
  return run;
}

struct ContextualRun {
  ConFormula translation;
  std::vector<std::string> warnings;
  bool none_project = true;
  // Unset when the translation simplifies to true and no proof is needed.
  std::optional<ProofVerdict> verdict;
  ProofStats stats;
  std::optional<Proof> proof;
};

// Translates the whole discourse and decides every trigger in one proof.
inline ContextualRun run_contextual(const PreFormula& f, const ProofLimits& limits = {}) {
  Translation t = translate(f);
  ContextualRun run{simplify_top(t.formula), std::move(t.warnings), true, std::nullopt, {}, {}};
  if (run.translation.op() == Op::top) return run;
  ProofResult r = prove(run.translation, limits);
  run.verdict = r.verdict;
  run.none_project = r.verdict == ProofVerdict::closed;
  run.stats = std::move(r.stats);
  run.proof = std::move(r.proof);
  return run;
}

class DisagreementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchReport {
  PreFormula formula;
  BaselineRun baseline;
  ContextualRun contextual;
  // Baseline over contextual formula expansions; unset when the contextual
  // count is zero.
  std::optional<double> ratio;
  bool agreement = false;
  // False when a resource limit left either side undecided.
  bool decided = true;
};

inline BenchReport compare(const PreFormula& f, const ProofLimits& limits = {}) {
  BenchReport report{f, run_baseline(f, limits), run_contextual(f, limits), std::nullopt, false,
                     true};
  report.decided = !report.baseline.set.any_unknown() &&
                   report.contextual.verdict != ProofVerdict::resource_out;
  report.agreement = report.decided &&
                     report.baseline.set.none_project() == report.contextual.none_project;
  if (report.decided && !report.agreement)
    throw DisagreementError("baseline and contextual projection disagree on " + render(f));
  std::uint64_t ctx = report.contextual.stats.formula_expansions;
  if (ctx > 0)
    report.ratio = static_cast<double>(report.baseline.set.stats.formula_expansions) /
                   static_cast<double>(ctx);
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const ProofStats& s) {
  nlohmann::json rules = nlohmann::json::object();
  for (auto r : kExpansionRules) rules[rule_name(r)] = s[r];
  nlohmann::json premises = nlohmann::json::object();
  for (const auto& [f, n] : s.premise_introductions) premises[f] = n;
  return {{"proofs", s.proofs},
          {"nodes_created", s.nodes_created},
          {"branches_opened", s.branches_opened},
          {"branches_closed", s.branches_closed},
          {"formula_expansions", s.formula_expansions},
          {"unification_attempts", s.unification_attempts},
          {"rules", rules},
          {"premise_introductions", premises}};
}

inline nlohmann::json to_json(const PresuppositionSet& set) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : set.members())
    members.push_back({{"formula", render(m.formula)}, {"verdict", verdict_name(m.verdict)}});
  nlohmann::json projected = nlohmann::json::array();
  for (const auto& p : set.projected()) projected.push_back(render(p));
  return {{"presuppositions", members},
          {"projected", projected},
          {"checks", set.checks().size()},
          {"stats", to_json(set.stats)}};
}

inline nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json contextual = {
      {"translation", render(r.contextual.translation)},
      {"verdict", r.contextual.verdict ? verdict_name(*r.contextual.verdict) : "trivial"},
      {"none_project", r.contextual.none_project},
      {"stats", to_json(r.contextual.stats)}};
  nlohmann::json baseline = to_json(r.baseline.set);
  baseline["proofs"] = r.baseline.proofs;
  return {{"command", "bench"},
          {"formula", render(r.formula)},
          {"baseline", baseline},
          {"contextual", contextual},
          {"ratio", r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr)},
          {"agreement", r.agreement},
          {"decided", r.decided}};
}

inline std::string to_table(const BenchReport& r) {
  const ProofStats& b = r.baseline.set.stats;
  const ProofStats& c = r.contextual.stats;
  std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>> rows = {
      {"proofs", b.proofs, c.proofs},
      {"nodes created", b.nodes_created, c.nodes_created},
      {"branches opened", b.branches_opened, c.branches_opened},
      {"branches closed", b.branches_closed, c.branches_closed},
      {"formula expansions", b.formula_expansions, c.formula_expansions},
      {"unification attempts", b.unification_attempts, c.unification_attempts},
  };
  for (auto rule : kExpansionRules)
    if (b[rule] || c[rule])
      rows.emplace_back(std::string("rule ") + rule_name(rule), b[rule], c[rule]);
  std::ostringstream out;
  out << "formula: " << render(r.formula) << '\n';
  out << "translation: " << render(r.contextual.translation) << '\n';
  out << std::left << std::setw(24) << "metric" << std::right << std::setw(12) << "baseline"
      << std::setw(12) << "contextual" << '\n';
  for (const auto& [name, x, y] : rows)
    out << std::left << std::setw(24) << name << std::right << std::setw(12) << x << std::setw(12)
        << y << '\n';
  out << "ratio: ";
  if (r.ratio)
    out << std::fixed << std::setprecision(3) << *r.ratio;
  else
    out << "n/a";
  out << '\n';
  out << "agreement: " << (r.agreement ? "yes" : r.decided ? "no" : "undecided") << '\n';
  out << "projects: " << (r.baseline.set.none_project() ? "none" : "some") << '\n';
  return out.str();
}

}  // namespace presup
