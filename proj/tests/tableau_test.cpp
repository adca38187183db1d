#include <gtest/gtest.h>

#include "generators.hpp"
#include "presup/bench.hpp"
#include "presup/proof_check.hpp"
#include "presup/syntax.hpp"
#include "presup/tableau.hpp"

using namespace presup;

namespace {

const char* kNested = "in({p}, p & in({q}, p & q) & in({q -> r}, p))";

TableauNode node(Label label, const char* formula) {
  return TableauNode{kNoNode, std::move(label), parse_con(formula), Rule::root, kNoNode, kNoNode, 0, std::nullopt, false};
}

std::string show(const NodeSpec& s) { return render(s.label) + " " + render(s.formula); }

ProofVerdict verdict(const char* goal, ProofLimits limits = {}) {
  return prove(parse_con(goal), limits).verdict;
}

}  // namespace

// ---- rule application ---------------------------------------------------

TEST(ExpandNode, NotIn) {
  FreshSupply fresh;
  auto e = expand_node(node({0, {}}, "~in({p}, q)"), fresh);
  EXPECT_EQ(e.rule, Rule::not_in);
  ASSERT_EQ(e.branches.size(), 1u);
  ASSERT_EQ(e.branches[0].size(), 2u);
  EXPECT_EQ(show(e.branches[0][0]), "(1,{0}) p");
  EXPECT_TRUE(e.branches[0][0].context_member);
  EXPECT_EQ(show(e.branches[0][1]), "(1,{0}) ~q");
}

TEST(ExpandNode, In) {
  FreshSupply fresh;
  fresh.context();
  auto e = expand_node(node({1, {0}}, "in({q}, r)"), fresh);
  EXPECT_EQ(e.rule, Rule::in);
  ASSERT_EQ(e.branches.size(), 2u);
  EXPECT_EQ(show(e.branches[0][0]), "(2,{0,1}) ~q");
  EXPECT_EQ(show(e.branches[1][0]), "(2,{0,1}) r");
}

TEST(ExpandNode, InWithSeveralOrNoMembers) {
  FreshSupply fresh;
  auto e = expand_node(node({0, {}}, "in({p, q, r}, s)"), fresh);
  EXPECT_EQ(render(e.branches[0][0].formula), "~p | ~q | ~r");
  auto empty = expand_node(node({0, {}}, "in({}, s)"), fresh);
  EXPECT_EQ(render(empty.branches[0][0].formula), "~true");
  EXPECT_EQ(empty.branches[0][0].label.context, 2u);
}

TEST(ExpandNode, BooleanRulesKeepTheLabel) {
  FreshSupply fresh;
  Label l{3, {0}};
  auto conj = expand_node(node(l, "p & q"), fresh);
  ASSERT_EQ(conj.branches.size(), 1u);
  EXPECT_EQ(show(conj.branches[0][0]), "(3,{0}) p");
  EXPECT_EQ(show(conj.branches[0][1]), "(3,{0}) q");
  EXPECT_EQ(show(expand_node(node(l, "~(p & q)"), fresh).branches[0][0]), "(3,{0}) ~p | ~q");
  EXPECT_EQ(show(expand_node(node(l, "~(p | q)"), fresh).branches[0][0]), "(3,{0}) ~p & ~q");
  EXPECT_EQ(show(expand_node(node(l, "~(p -> q)"), fresh).branches[0][0]), "(3,{0}) p & ~q");
  EXPECT_EQ(show(expand_node(node(l, "~~p"), fresh).branches[0][0]), "(3,{0}) p");
  auto impl = expand_node(node(l, "p -> q"), fresh);
  ASSERT_EQ(impl.branches.size(), 2u);
  EXPECT_EQ(show(impl.branches[0][0]), "(3,{0}) ~p");
  EXPECT_EQ(show(impl.branches[1][0]), "(3,{0}) q");
  EXPECT_THROW(expand_node(node(l, "~p"), fresh), std::invalid_argument);
  EXPECT_THROW(expand_node(node(l, "true"), fresh), std::invalid_argument);
}

TEST(ExpandNode, QuantifierRules) {
  FreshSupply fresh;
  Label l{0, {}};
  auto g = expand_node(node(l, "forall x. P(x, Y)"), fresh);
  EXPECT_EQ(render(g.branches[0][0].formula), "P(X1, Y)");
  auto d = expand_node(node(l, "exists x. P(x, Y)"), fresh);
  EXPECT_EQ(render(d.branches[0][0].formula), "P(sk1(Y), Y)");
  auto c = expand_node(node(l, "exists x. P(x)"), fresh);
  EXPECT_EQ(render(c.branches[0][0].formula), "P(sk2)");
  EXPECT_EQ(render(expand_node(node(l, "~forall x. P(x)"), fresh).branches[0][0].formula),
            "exists x. ~P(x)");
  EXPECT_EQ(render(expand_node(node(l, "~exists x. P(x)"), fresh).branches[0][0].formula),
            "forall x. ~P(x)");
}

TEST(FreshSupply, AvoidsReservedNames) {
  FreshSupply fresh({"X1", "sk1", "sk2"});
  EXPECT_EQ(fresh.variable(), "X2");
  EXPECT_EQ(fresh.skolem(), "sk3");
  EXPECT_EQ(fresh.context(), 1u);
  EXPECT_EQ(fresh.context(), 2u);
}

// ---- unification and closure --------------------------------------------

TEST(Unify, Examples) {
  auto s = unify_atoms(parse_l("P(X, a)"), parse_l("P(b, Y)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(render(*s), "{X -> b, Y -> a}");
  EXPECT_FALSE(unify_atoms(parse_l("P(X)"), parse_l("P(f(X))")));
  auto empty = unify_atoms(parse_l("p"), parse_l("p"));
  ASSERT_TRUE(empty);
  EXPECT_TRUE(empty->empty());
  EXPECT_FALSE(unify_atoms(parse_l("p"), parse_l("q")));
  EXPECT_FALSE(unify_atoms(parse_l("P(a)"), parse_l("P(a, b)")));
  EXPECT_FALSE(unify_atoms(parse_l("P(a)"), parse_l("P(b)")));
  EXPECT_THROW(unify_atoms(parse_l("~p"), parse_l("p")), std::invalid_argument);
}

TEST(Unify, ChainsStayIdempotent) {
  auto s = unify_atoms(parse_l("P(X, Y, Z)"), parse_l("P(Y, Z, f(a))"));
  ASSERT_TRUE(s);
  for (const auto& [v, t] : s->bindings()) EXPECT_EQ(s->apply(t), t);
  EXPECT_EQ(render(s->apply(Term::variable("X"))), "f(a)");
}

TEST(Unify, RespectsTheBindableFilter) {
  auto rigid = [](const std::string& v) { return v.rfind('X', 0) == 0; };
  EXPECT_TRUE(unify_atoms(parse_l("P(X1)"), parse_l("P(a)"), {}, rigid));
  EXPECT_FALSE(unify_atoms(parse_l("P(Y)"), parse_l("P(a)"), {}, rigid));
  EXPECT_TRUE(unify_atoms(parse_l("P(Y)"), parse_l("P(X1)"), {}, rigid));
}

TEST(Closure, LabelCases) {
  // The node at (1,{0}) is accessible from (2,{0,1}).
  EXPECT_TRUE(check_closure(node({1, {0}}, "p"), node({2, {0, 1}}, "~p")));
  // Same context.
  EXPECT_TRUE(check_closure(node({3, {0}}, "q"), node({3, {0}}, "~q")));
  // Sibling contexts cannot see each other.
  EXPECT_FALSE(check_closure(node({1, {0}}, "p"), node({2, {0}}, "~p")));
  // Accessibility in the other direction.
  EXPECT_TRUE(check_closure(node({2, {0, 1}}, "p"), node({1, {0}}, "~p")));
  // Order of the pair does not matter.
  EXPECT_TRUE(check_closure(node({2, {0, 1}}, "~p"), node({1, {0}}, "p")));
}

TEST(Closure, NeedsComplementaryUnifiableAtoms) {
  EXPECT_FALSE(check_closure(node({0, {}}, "p"), node({0, {}}, "q")));
  EXPECT_FALSE(check_closure(node({0, {}}, "p"), node({0, {}}, "p")));
  EXPECT_FALSE(check_closure(node({0, {}}, "~p"), node({0, {}}, "~p")));
  EXPECT_FALSE(check_closure(node({0, {}}, "p & q"), node({0, {}}, "~(p & q)")));
  auto s = check_closure(node({0, {}}, "P(X)"), node({0, {}}, "~P(a)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(render(*s), "{X -> a}");
}

// ---- proof search -------------------------------------------------------

TEST(Prove, Examples) {
  EXPECT_EQ(verdict(kNested), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({p}, p)"), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({p}, q)"), ProofVerdict::open);
  EXPECT_EQ(verdict("true"), ProofVerdict::closed);
  EXPECT_EQ(verdict("~true"), ProofVerdict::open);
  EXPECT_EQ(verdict("p | ~p"), ProofVerdict::closed);
  EXPECT_EQ(verdict("p"), ProofVerdict::open);
  EXPECT_EQ(verdict("in({}, p -> p)"), ProofVerdict::closed);
}

TEST(Prove, NestedContextsStatistics) {
  auto r = prove(parse_con(kNested));
  ASSERT_EQ(r.verdict, ProofVerdict::closed);
  EXPECT_EQ(r.stats.proofs, 1u);
  EXPECT_EQ(r.stats.nodes_created, 16u);
  EXPECT_EQ(r.stats.branches_opened, 4u);
  EXPECT_EQ(r.stats.branches_closed, 4u);
  EXPECT_EQ(r.stats.formula_expansions, 3u);
  EXPECT_EQ(r.stats[Rule::not_in], 3u);
  EXPECT_EQ(r.stats[Rule::not_conj], 3u);
  EXPECT_EQ(r.stats[Rule::disj], 3u);
  EXPECT_EQ(r.stats.premise_introductions.at("p"), 1u);
  ASSERT_TRUE(r.proof);
  EXPECT_TRUE(check_proof(*r.proof).empty());
  EXPECT_EQ(r.proof->closures.size(), 4u);
}

TEST(Prove, FirstOrder) {
  EXPECT_EQ(verdict("in({forall x. (P(x) -> Q(x)), P(a)}, Q(a))"), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({P(a)}, exists x. P(x))"), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({forall x. P(x)}, P(a) & P(b))"), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({forall x. exists y. R(x, y)}, exists y. R(a, y))"), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({exists x. P(x)}, P(a))"), ProofVerdict::open);
  EXPECT_EQ(verdict("(exists x. forall y. R(x, y)) -> forall y. exists x. R(x, y)"),
            ProofVerdict::closed);
}

TEST(Prove, GoalVariablesAreParameters) {
  // X in the goal names one unknown individual; it cannot be chosen.
  EXPECT_EQ(verdict("in({P(X)}, P(a))"), ProofVerdict::open);
  EXPECT_EQ(verdict("in({P(X)}, P(X))"), ProofVerdict::closed);
}

TEST(Prove, UniversalInstancesAreBranchLocal) {
  // The universal formula is expanded below the split, so each branch gets
  // its own rigid variable.
  EXPECT_EQ(verdict("in({forall x. P(x)}, P(a) & P(b))", {1, 100000, 1}), ProofVerdict::closed);
}

TEST(Prove, ResourceLimits) {
  // Two instances of the universal premise are needed on one branch.
  const char* chain = "in({forall x. (P(x) -> P(f(x))), P(a)}, P(f(f(a))))";
  EXPECT_EQ(verdict(chain, {1, 100000, 5}), ProofVerdict::resource_out);
  EXPECT_EQ(verdict(chain, {2, 100000, 1}), ProofVerdict::resource_out);
  EXPECT_EQ(verdict(chain, {2, 100000, 2}), ProofVerdict::closed);
  const char* longer = "in({forall x. (P(x) -> P(f(x))), P(a)}, P(f(f(f(f(a))))))";
  EXPECT_EQ(verdict(longer), ProofVerdict::closed);
  EXPECT_EQ(verdict(kNested, {3, 5, 5}), ProofVerdict::resource_out);
  EXPECT_THROW(prove(parse_con("p"), {0, 1, 1}), std::invalid_argument);
}

TEST(Prove, OpenWhenSaturated) {
  // No universal formula: nothing to deepen, so the answer is a firm Open.
  EXPECT_EQ(verdict("in({exists x. P(x)}, Q(a))"), ProofVerdict::open);
}

TEST(Prove, ClosureAcrossContextsFollowsLabels) {
  // The contexts opened for the two in-statements are siblings, so p in one
  // cannot close ~p in the other.
  EXPECT_EQ(verdict("in({q}, q) & in({r}, r)"), ProofVerdict::closed);
  EXPECT_EQ(verdict("in({q}, p) | in({p}, q)"), ProofVerdict::open);
}

TEST(Entails, Examples) {
  EXPECT_EQ(entails({parse_l("p"), parse_l("p -> q")}, parse_l("q")).verdict,
            EntailmentVerdict::entailed);
  EXPECT_EQ(entails({parse_l("p"), parse_l("q -> r")}, parse_l("p")).verdict,
            EntailmentVerdict::entailed);
  EXPECT_EQ(entails({}, parse_l("p")).verdict, EntailmentVerdict::not_proved);
  EXPECT_EQ(entails({parse_l("p"), parse_l("q")}, parse_l("p & q"), {3, 3, 5}).verdict,
            EntailmentVerdict::unknown);
}

TEST(Trace, Format) {
  auto r = prove(parse_con("in({p}, p)"));
  ASSERT_TRUE(r.proof);
  EXPECT_EQ(render_trace(*r.proof),
            "0\t(0,{})\t~in({p}, p)\troot\t-\t-\t-\n"
            "1\t(1,{0})\tp\tnot-in\t0\t0\t-\n"
            "2\t(1,{0})\t~p\tnot-in\t0\t1\tclosed:1,2\n");
  auto fo = prove(parse_con("in({forall x. P(x)}, P(a))"));
  EXPECT_NE(render_trace(*fo.proof).find("substitution\t{X1 -> a}\n"), std::string::npos);
}

// ---- properties ---------------------------------------------------------

TEST(TableauProperties, SoundAndCompleteOnTheTranslationFragment) {
  fuzz::Gen gen(41);
  int closed = 0;
  for (int i = 0; i < 1000; ++i) {
    auto goal = gen.tau_image(5, 4);
    bool truth = eval_oracle({}, goal);
    auto r = prove(goal);
    ASSERT_NE(r.verdict, ProofVerdict::resource_out) << render(goal);
    ASSERT_EQ(r.verdict == ProofVerdict::closed, truth) << render(goal);
    if (r.proof) {
      ++closed;
      auto problems = check_proof(*r.proof);
      ASSERT_TRUE(problems.empty()) << render(goal) << ": " << problems[0].message;
    }
  }
  EXPECT_GT(closed, 100);
}

TEST(TableauProperties, FirstOrderProofsVerify) {
  fuzz::Gen gen(42);
  int closed = 0;
  for (int i = 0; i < 300; ++i) {
    Context ctx;
    for (int j = 0; j < 2; ++j) ctx.insert(gen.any<Lang::base>(3));
    auto goal = ConFormula::in(ctx, gen.any<Lang::base>(3));
    auto r = prove(goal, {2, 20000, 2});
    if (!r.proof) continue;
    ++closed;
    auto problems = check_proof(*r.proof);
    ASSERT_TRUE(problems.empty()) << render(goal) << ": " << problems[0].message;
    for (const auto& [v, t] : r.proof->substitution.bindings())
      ASSERT_EQ(r.proof->substitution.apply(t), t);
  }
  EXPECT_GT(closed, 20);
}
