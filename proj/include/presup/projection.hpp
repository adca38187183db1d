// Presupposition projection: assertive content, potential presuppositions,
// the recursive projection function over local contexts, and the
// translation of a discourse into a single contextual formula.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "presup/formulas.hpp"
#include "presup/syntax.hpp"
#include "presup/tableau.hpp"

namespace presup {

// Replaces every pi/phi by phi.
inline LFormula assertive_content(const PreFormula& f) {
  switch (f.op()) {
    case Op::atom:
      return LFormula::atom(f.predicate(), f.arguments());
    case Op::negation:
      return LFormula::negation(assertive_content(f.operand()));
    case Op::conjunction:
    case Op::disjunction:
    case Op::implication:
      return LFormula::binary(f.op(), assertive_content(f.left()), assertive_content(f.right()));
    case Op::forall:
    case Op::exists:
      return LFormula::quantifier(f.op(), f.variable(), assertive_content(f.body()));
    case Op::presupposition:
      return assertive_content(f.body());
    default:
      throw std::logic_error("unexpected operator in presupposition formula");
  }
}

namespace detail {

inline void collect_presuppositions(const PreFormula& f, Context& out) {
  switch (f.op()) {
    case Op::atom:
      return;
    case Op::negation:
      collect_presuppositions(f.operand(), out);
      return;
    case Op::forall:
    case Op::exists:
      collect_presuppositions(f.body(), out);
      return;
    case Op::presupposition:
      collect_presuppositions(f.body(), out);
      out.insert(f.presupposition());
      return;
    default:
      collect_presuppositions(f.left(), out);
      collect_presuppositions(f.right(), out);
      return;
  }
}

inline bool has_presupposition(const PreFormula& f) {
  return !belongs_to(f.node(), Lang::base);
}

}  // namespace detail

// All left arguments of pi/phi subformulas, alpha-deduplicated.
inline Context potential_presuppositions(const PreFormula& f) {
  Context out;
  detail::collect_presuppositions(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// pres

enum class ProjectionVerdict { entailed, projects, unknown };

inline const char* verdict_name(ProjectionVerdict v) {
  switch (v) {
    case ProjectionVerdict::entailed: return "entailed";
    case ProjectionVerdict::projects: return "projects";
    case ProjectionVerdict::unknown: return "unknown";
  }
  return "?";
}

// One local-context test of a trigger.
struct ProjectionCheck {
  Context context;
  LFormula presupposition;
  ProjectionVerdict verdict;
  std::optional<Proof> proof;
};

class PresuppositionSet {
 public:
  struct Member {
    LFormula formula;
    ProjectionVerdict verdict;
  };

  // A presupposition checked in several local contexts projects if any
  // check fails; unresolved checks rank between the two.
  void add(ProjectionCheck check) {
    ProjectionVerdict v = check.verdict;
    bool found = false;
    for (auto& m : members_)
      if (alpha_eq(m.formula, check.presupposition)) {
        found = true;
        if (rank(v) > rank(m.verdict)) m.verdict = v;
      }
    if (!found) members_.push_back({check.presupposition, v});
    checks_.push_back(std::move(check));
  }

  const std::vector<Member>& members() const { return members_; }
  const std::vector<ProjectionCheck>& checks() const { return checks_; }

  // Members that project, counting unresolved ones as projecting.
  std::vector<LFormula> projected() const {
    std::vector<LFormula> out;
    for (const auto& m : members_)
      if (m.verdict != ProjectionVerdict::entailed) out.push_back(m.formula);
    return out;
  }

  bool none_project() const { return projected().empty(); }
  bool any_unknown() const {
    for (const auto& m : members_)
      if (m.verdict == ProjectionVerdict::unknown) return true;
    return false;
  }

  ProofStats stats;

 private:
  static int rank(ProjectionVerdict v) {
    switch (v) {
      case ProjectionVerdict::entailed: return 0;
      case ProjectionVerdict::unknown: return 1;
      case ProjectionVerdict::projects: return 2;
    }
    return 0;
  }

  std::vector<Member> members_;
  std::vector<ProjectionCheck> checks_;
};

namespace detail {

template <class Entails>
void pres(const PreFormula& f, const Context& ctx, Entails& entails, PresuppositionSet& out) {
  switch (f.op()) {
    case Op::atom:
      return;
    case Op::negation:
      pres(f.operand(), ctx, entails, out);
      return;
    case Op::conjunction:
    case Op::implication:
      pres(f.left(), ctx, entails, out);
      pres(f.right(), ctx.with(assertive_content(f.left())), entails, out);
      return;
    case Op::disjunction:
      pres(f.left(), ctx, entails, out);
      pres(f.right(), ctx.with(assertive_content(PreFormula::negation(f.left()))), entails, out);
      return;
    case Op::forall:
    case Op::exists:
      pres(f.body(), ctx, entails, out);
      return;
    case Op::presupposition: {
      EntailmentResult r = entails(ctx, f.presupposition());
      ProjectionVerdict v = r.verdict == EntailmentVerdict::entailed   ? ProjectionVerdict::entailed
                            : r.verdict == EntailmentVerdict::unknown ? ProjectionVerdict::unknown
                                                                      : ProjectionVerdict::projects;
      out.stats += r.stats;
      out.add({ctx, f.presupposition(), v, std::move(r.proof)});
      pres(f.body(), ctx, entails, out);
      return;
    }
    default:
      throw std::logic_error("unexpected operator in presupposition formula");
  }
}

}  // namespace detail

// Projected presuppositions of `f` in `context`, deciding each local test
// with `entails(Context, LFormula) -> EntailmentResult`.
template <class Entails>
PresuppositionSet pres_with(const PreFormula& f, const Context& context, Entails&& entails) {
  PresuppositionSet out;
  detail::pres(f, context, entails, out);
  return out;
}

// Projected presuppositions using one tableau proof per local test.
inline PresuppositionSet pres(const PreFormula& f, const Context& context = {},
                              const ProofLimits& limits = {}) {
  limits.validate();
  return pres_with(f, context, [&limits](const Context& ctx, const LFormula& pi) {
    return entails(ctx, pi, limits);
  });
}

// Text listing of a projection result; the CLI prints exactly this.
inline std::string format_presuppositions(const PresuppositionSet& set) {
  std::string out;
  for (const auto& m : set.members())
    out += std::string(verdict_name(m.verdict)) + ": " + render(m.formula) + "\n";
  out += "checks: " + std::to_string(set.checks().size()) + "\n";
  auto projected = set.projected();
  if (projected.empty())
    out += "no presuppositions project\n";
  else
    out += std::to_string(projected.size()) +
           (projected.size() == 1 ? " presupposition projects\n" : " presuppositions project\n");
  return out;
}

// ---------------------------------------------------------------------------
// Translation to contextual formulas

struct Translation {
  ConFormula formula;
  std::vector<std::string> warnings;
};

namespace detail {

class Translator {
 public:
  ConFormula run(const PreFormula& f, const Context& ctx) {
    switch (f.op()) {
      case Op::atom:
        return ConFormula::top();
      case Op::negation:
        if (has_presupposition(f.operand())) return run(f.operand(), ctx);
        return ConFormula::top();
      case Op::conjunction:
      case Op::implication:
        return binary(f, ctx, assertive_content(f.left()));
      case Op::disjunction:
        return binary(f, ctx, assertive_content(PreFormula::negation(f.left())));
      case Op::presupposition: {
        LFormula pi = f.presupposition();
        if (has_presupposition(f.body())) {
          ConFormula inner = ConFormula::conjunction(pi, run(f.body(), {}));
          return ctx.empty() ? inner : in(ctx, inner);
        }
        return ctx.empty() ? ConFormula(pi) : in(ctx, pi);
      }
      case Op::forall:
      case Op::exists: {
        if (!has_presupposition(f.body())) return ConFormula::top();
        bound_.push_back(f.variable());
        ConFormula body = run(f.body(), {});
        bound_.pop_back();
        ConFormula q = ConFormula::quantifier(f.op(), f.variable(), body);
        return ctx.empty() ? q : in(ctx, q);
      }
      default:
        throw std::logic_error("unexpected operator in presupposition formula");
    }
  }

  std::vector<std::string> warnings;

 private:
  // Rows for binary connectives; `extension` is what the right operand may
  // assume.
  ConFormula binary(const PreFormula& f, const Context& ctx, const LFormula& extension) {
    if (has_presupposition(f.left())) {
      ConFormula inner = ConFormula::conjunction(run(f.left(), {}),
                                                 run(f.right(), Context{extension}));
      return ctx.empty() ? inner : in(ctx, inner);
    }
    // The left operand is first-order here, so it is its own assertive
    // content; for disjunction the right side assumes its negation.
    LFormula left = *LFormula::narrow(f.left());
    LFormula added = f.op() == Op::disjunction ? LFormula::negation(left) : left;
    return run(f.right(), ctx.with(added));
  }

  ConFormula in(const Context& ctx, const ConFormula& body) {
    for (const auto& m : ctx)
      for (const auto& v : free_vars(m))
        for (const auto& b : bound_)
          if (b == v)
            warnings.push_back("context formula " + render(m) + " mentions variable " + v +
                               " bound by an enclosing quantifier");
    return ConFormula::in(ctx, body);
  }

  std::vector<std::string> bound_;
};

}  // namespace detail

// Translation with diagnostics about context formulas that mention a
// variable bound outside their in-statement.
inline Translation translate(const PreFormula& f, const Context& context = {}) {
  detail::Translator t;
  ConFormula out = t.run(f, context);
  return {out, std::move(t.warnings)};
}

inline ConFormula translate_tau(const PreFormula& f, const Context& context = {}) {
  return translate(f, context).formula;
}

// Removes true by the unit and zero laws; ~true is left alone.
inline ConFormula simplify_top(const ConFormula& f) {
  auto is_top = [](const ConFormula& g) { return g.op() == Op::top; };
  switch (f.op()) {
    case Op::negation:
      return ConFormula::negation(simplify_top(f.operand()));
    case Op::conjunction: {
      ConFormula a = simplify_top(f.left()), b = simplify_top(f.right());
      if (is_top(a)) return b;
      if (is_top(b)) return a;
      return ConFormula::conjunction(a, b);
    }
    case Op::disjunction: {
      ConFormula a = simplify_top(f.left()), b = simplify_top(f.right());
      if (is_top(a) || is_top(b)) return ConFormula::top();
      return ConFormula::disjunction(a, b);
    }
    case Op::implication: {
      ConFormula a = simplify_top(f.left()), b = simplify_top(f.right());
      if (is_top(a)) return b;
      if (is_top(b)) return ConFormula::top();
      return ConFormula::implication(a, b);
    }
    case Op::forall:
    case Op::exists: {
      ConFormula body = simplify_top(f.body());
      if (is_top(body)) return body;
      return ConFormula::quantifier(f.op(), f.variable(), body);
    }
    case Op::in: {
      ConFormula body = simplify_top(f.body());
      if (is_top(body)) return body;
      return ConFormula::in(f.context(), body);
    }
    default:
      return f;
  }
}

}  // namespace presup
