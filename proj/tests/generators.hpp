// Seeded random formula generators shared by the property tests and the
// acceptance binary.

#pragma once

#include <cctype>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "presup/formulas.hpp"

namespace presup::fuzz {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin(unsigned percent = 50) { return below(100) < percent; }

  // ---- propositional ----------------------------------------------------

  LFormula prop_atom(unsigned atoms) {
    return LFormula::atom(std::string(1, static_cast<char>('p' + below(atoms))));
  }

  LFormula prop_l(unsigned atoms, unsigned depth) {
    if (depth == 0 || coin(30)) return prop_atom(atoms);
    switch (below(4)) {
      case 0: return LFormula::negation(prop_l(atoms, depth - 1));
      case 1: return LFormula::conjunction(prop_l(atoms, depth - 1), prop_l(atoms, depth - 1));
      case 2: return LFormula::disjunction(prop_l(atoms, depth - 1), prop_l(atoms, depth - 1));
      default: return LFormula::implication(prop_l(atoms, depth - 1), prop_l(atoms, depth - 1));
    }
  }

  // Propositional discourse with at most `nesting` presupposition connectives
  // stacked on any path.
  PreFormula prop_pre(unsigned atoms, unsigned depth, unsigned nesting) {
    if (depth == 0) return prop_atom(atoms);
    unsigned pick = static_cast<unsigned>(below(10));
    if (pick < 3 && nesting > 0)
      return PreFormula::presupposition(prop_l(atoms, 1 + below(2)),
                                        prop_pre(atoms, depth - 1, nesting - 1));
    if (pick == 3) return prop_atom(atoms);
    switch (pick % 4) {
      case 0: return PreFormula::negation(prop_pre(atoms, depth - 1, nesting));
      case 1:
        return PreFormula::conjunction(prop_pre(atoms, depth - 1, nesting),
                                       prop_pre(atoms, depth - 1, nesting));
      case 2:
        return PreFormula::disjunction(prop_pre(atoms, depth - 1, nesting),
                                       prop_pre(atoms, depth - 1, nesting));
      default:
        return PreFormula::implication(prop_pre(atoms, depth - 1, nesting),
                                       prop_pre(atoms, depth - 1, nesting));
    }
  }

  Context prop_context(unsigned atoms, unsigned max_size) {
    Context c;
    std::size_t n = below(max_size + 1);
    for (std::size_t i = 0; i < n; ++i) c.insert(prop_l(atoms, 2));
    return c;
  }

  // Formulas of the shape the translation emits: l-formulas, true,
  // conjunctions, and in-statements.
  ConFormula tau_image(unsigned atoms, unsigned depth) {
    if (depth == 0 || coin(25)) return coin(10) ? ConFormula::top() : prop_l(atoms, 2);
    if (coin(50))
      return ConFormula::in(prop_context(atoms, 3), tau_image(atoms, depth - 1));
    return ConFormula::conjunction(tau_image(atoms, depth - 1), tau_image(atoms, depth - 1));
  }

  // ---- first order ------------------------------------------------------

  // Free variables are capitalized and constants lower case, matching how the
  // parser classifies identifiers; bound variables come from x, y, z.
  Term term(const std::vector<std::string>& bound, unsigned depth) {
    unsigned pick = static_cast<unsigned>(below(depth > 0 ? 4 : 3));
    if (pick == 0 && !bound.empty()) return Term::variable(bound[below(bound.size())]);
    if (pick == 1) return Term::variable(coin() ? "X" : "Y1");
    if (pick == 3) {
      std::vector<Term> args;
      std::size_t n = 1 + below(2);
      for (std::size_t i = 0; i < n; ++i) args.push_back(term(bound, depth - 1));
      return Term::application(coin() ? "f" : "g", std::move(args));
    }
    static const char* constants[] = {"a", "b", "c0"};
    return Term::constant(constants[below(3)]);
  }

  LFormula fo_atom(const std::vector<std::string>& bound) {
    static const char* preds[] = {"P", "Q", "R", "p", "q"};
    std::string pred = preds[below(5)];
    std::vector<Term> args;
    if (std::isupper(static_cast<unsigned char>(pred[0]))) {
      std::size_t n = 1 + below(3);
      for (std::size_t i = 0; i < n; ++i) args.push_back(term(bound, 2));
    }
    return LFormula::atom(pred, std::move(args));
  }

  template <Lang L>
  Formula<L> any(unsigned depth, std::vector<std::string> bound = {}) {
    using F = Formula<L>;
    if (depth == 0) {
      if constexpr (L == Lang::con)
        if (coin(10)) return F::top();
      return fo_atom(bound);
    }
    unsigned pick = static_cast<unsigned>(below(9));
    if constexpr (L == Lang::pre) {
      if (pick == 7) return F::presupposition(any<Lang::base>(depth - 1, bound), any<L>(depth - 1, bound));
    }
    if constexpr (L == Lang::con) {
      if (pick == 7) {
        Context c;
        std::size_t n = below(3);
        for (std::size_t i = 0; i < n; ++i) c.insert(any<Lang::base>(depth - 1, bound));
        return F::in(c, any<L>(depth - 1, bound));
      }
    }
    switch (pick) {
      case 0: return F::negation(any<L>(depth - 1, bound));
      case 1: return F::conjunction(any<L>(depth - 1, bound), any<L>(depth - 1, bound));
      case 2: return F::disjunction(any<L>(depth - 1, bound), any<L>(depth - 1, bound));
      case 3: return F::implication(any<L>(depth - 1, bound), any<L>(depth - 1, bound));
      case 4:
      case 5: {
        static const char* names[] = {"x", "y", "z"};
        std::string v = names[below(3)];
        bound.push_back(v);
        return pick == 4 ? F::forall(v, any<L>(depth - 1, bound))
                         : F::exists(v, any<L>(depth - 1, bound));
      }
      default: return fo_atom(bound);
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace presup::fuzz
