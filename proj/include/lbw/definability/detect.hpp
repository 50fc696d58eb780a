#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lbw/definability/profile.hpp"
#include "lbw/definability/translation.hpp"
#include "lbw/error.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/logic/consequence.hpp"
#include "lbw/logic/derivability.hpp"
#include "lbw/util/parallel.hpp"

namespace lbw {

struct DetectionBounds {
  std::size_t depth = 2;  // binary candidate terms
  std::size_t term_budget = 20'000;
  DerivationBudget derivation{};
  std::size_t filter_budget = kDefaultFilterBudget;
  std::size_t jobs = 1;
};

namespace detail {

/// Gamma |- phi in the presented logic. Presenting matrices decide it
/// exactly; a calculus alone goes through tri-state derivability.
inline Verdict entails(LogicPresentation const& p, std::vector<Term> const& gamma,
                       Term const& phi, DerivationBudget const& budget) {
  if (p.has_matrices()) {
    return matrix_consequence(p.matrices, gamma, phi) ? Verdict::derived : Verdict::refuted;
  }
  return derivable(p.require_calculus(), gamma, phi, budget).verdict;
}

inline std::vector<Term> binary_candidates(Signature const& sig, DetectionBounds const& b) {
  std::size_t depth = b.depth;
  while (true) {
    try {
      return generate_terms(sig, 2, depth, b.term_budget);
    } catch (BudgetExceeded const&) {
      if (depth == 0) {
        throw;
      }
      --depth;
    }
  }
}

/// First candidate t(x, y) for which every rule in `rules` (each built from
/// t) is entailed.
template <class Rules>
std::optional<Term> first_binary_term(LogicPresentation const& p, DetectionBounds const& b,
                                      Rules const& rules) {
  Term const x = Term::var(0), y = Term::var(1);
  for (auto const& t : binary_candidates(p.signature, b)) {
    bool all = true;
    for (auto const& [gamma, phi] : rules(x, y, t)) {
      if (entails(p, gamma, phi, b.derivation) != Verdict::derived) {
        all = false;
        break;
      }
    }
    if (all) {
      return t;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// A binary term t with x |- t(x,y) and y |- t(x,y), searched in
/// breadth-first order up to the depth bound.
inline std::optional<Term> detect_protodisjunction(LogicPresentation const& p,
                                                   DetectionBounds const& b = {}) {
  using R = std::vector<std::pair<std::vector<Term>, Term>>;
  return detail::first_binary_term(p, b, [](Term const& x, Term const& y, Term const& t) {
    return R{{{x}, t}, {{y}, t}};
  });
}

/// A binary term t with x, y |- t(x,y), x, t(x,y) |- y and y, t(x,y) |- x.
inline std::optional<Term> detect_protoconjunction(LogicPresentation const& p,
                                                   DetectionBounds const& b = {}) {
  using R = std::vector<std::pair<std::vector<Term>, Term>>;
  return detail::first_binary_term(p, b, [](Term const& x, Term const& y, Term const& t) {
    return R{{{x, y}, t}, {{x, t}, y}, {{y, t}, x}};
  });
}

struct ProtoalgebraResult {
  TriStateVerdict verdict;
  std::vector<Term> delta;                   // set when derived
  std::optional<std::size_t> algebra_index;  // refuting profile, when refuted
  std::optional<std::size_t> row;
};

/// Protoalgebraicity. Refuted when some tested algebra has a filter F with
/// Omega F != Suszko F; derived when a set Delta(x,y) of candidate terms has
/// |- Delta(x,x) and x, Delta(x,y) |- y; unknown otherwise.
///
/// The Delta search takes every candidate whose diagonal instance is a
/// theorem, checks that the whole set works, then shrinks it: a single
/// term, else a pair, else greedy removal.
inline ProtoalgebraResult detect_protoalgebraic(LogicPresentation const& p,
                                                std::vector<FiniteAlgebra> const& family,
                                                DetectionBounds const& b = {}) {
  ProtoalgebraResult out;
  if (p.has_calculus()) {
    auto const& calc = *p.calculus;
    std::vector<std::optional<std::size_t>> bad(family.size());
    parallel_for(family.size(), b.jobs, [&](std::size_t i) {
      auto prof = operator_profile(calc, family[i], b.filter_budget);
      for (std::size_t r = 0; r < prof.size(); ++r) {
        if (!(prof.rows[r].leibniz == prof.rows[r].suszko)) {
          bad[i] = r;
          return;
        }
      }
    });
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (bad[i]) {
        auto prof = operator_profile(calc, family[i], b.filter_budget);
        auto const& row = prof.rows[*bad[i]];
        auto const& a = family[i];
        out.algebra_index = i;
        out.row = *bad[i];
        out.verdict = TriStateVerdict::refuted(
            Countermodel{Matrix(a, row.filter), {}, std::nullopt},
            "Omega" + a.render_set(row.filter) + " = " + row.leibniz.render(a) +
                " differs from Suszko" + a.render_set(row.filter) + " = " + row.suszko.render(a));
        return out;
      }
    }
  }

  Term const x = Term::var(0), y = Term::var(1);
  std::vector<Term> diag_sub{x, x};
  std::vector<Term> theorems;
  for (auto const& t : detail::binary_candidates(p.signature, b)) {
    if (detail::entails(p, {}, t.substitute(diag_sub), b.derivation) == Verdict::derived) {
      theorems.push_back(t);
    }
  }
  auto works = [&](std::vector<Term> const& delta) {
    std::vector<Term> gamma{x};
    gamma.insert(gamma.end(), delta.begin(), delta.end());
    return detail::entails(p, gamma, y, b.derivation) == Verdict::derived;
  };
  std::string const bounds = "binary terms of depth <= " + std::to_string(b.depth);
  if (theorems.empty() || !works(theorems)) {
    out.verdict = TriStateVerdict::unknown("no Delta among " + bounds + " (" +
                                           std::to_string(theorems.size()) +
                                           " diagonal theorems)");
    return out;
  }
  std::optional<std::vector<Term>> found;
  for (std::size_t i = 0; i < theorems.size() && !found; ++i) {
    if (works({theorems[i]})) {
      found = std::vector<Term>{theorems[i]};
    }
  }
  for (std::size_t i = 0; i < theorems.size() && !found; ++i) {
    for (std::size_t j = i + 1; j < theorems.size() && !found; ++j) {
      if (works({theorems[i], theorems[j]})) {
        found = std::vector<Term>{theorems[i], theorems[j]};
      }
    }
  }
  if (!found) {
    auto delta = theorems;
    for (std::size_t i = delta.size(); i-- > 0;) {
      auto smaller = delta;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
      if (works(smaller)) {
        delta = std::move(smaller);
      }
    }
    found = std::move(delta);
  }
  std::string what = "Delta = {";
  for (std::size_t i = 0; i < found->size(); ++i) {
    what += (i ? ", " : "") + render((*found)[i], p.signature);
  }
  out.delta = *found;
  out.verdict = TriStateVerdict::derived({}, what + "}");
  return out;
}

/// Expansions of each member by a fresh constant interpreted at each
/// solution of tau, with the solution set designated.
inline std::vector<Matrix> expand_with_constant(std::vector<Matrix> const& family,
                                                Translation const& tau,
                                                std::string const& name = "one") {
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto const& a = family[i].algebra;
    auto sol = solutions(tau, a);
    if (sol.empty()) {
      throw Error("member " + std::to_string(i) +
                  " has no solutions of the translation to interpret the constant at");
    }
    for (auto e : sol.elements()) {
      auto expanded = add_constant(a, name, e);
      out.emplace_back(expanded, sol);
    }
  }
  return out;
}

}  // namespace lbw
