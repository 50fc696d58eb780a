#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/kernel/enumerate.hpp"
#include "lbw/kernel/polynomials.hpp"
#include "lbw/logic/calculus.hpp"
#include "lbw/logic/consequence.hpp"
#include "lbw/logic/filters.hpp"
#include "lbw/logic/verdict.hpp"

namespace lbw {

struct DerivationBudget {
  std::size_t depth = 3;              // rounds of term generation
  std::size_t instances = 100'000;    // premise match attempts in proof search
  std::size_t terms = 20'000;         // size of the term universe
  std::size_t max_model_size = 4;     // countermodel algebras
  std::size_t enumeration_guard = kDefaultEnumerationGuard;

  static DerivationBudget zero() { return {0, 0, 0, 0, 0}; }
};

namespace detail {

/// One-way matching of `pattern` against `t`, extending `sigma`.
inline bool match_term(Term const& pattern, Term const& t, std::vector<std::optional<Term>>& sigma) {
  if (pattern.is_var()) {
    auto& slot = sigma[pattern.var_index()];
    if (slot) {
      return *slot == t;
    }
    slot = t;
    return true;
  }
  if (t.is_var() || t.op() != pattern.op()) {
    return false;
  }
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (!match_term(pattern.args()[i], t.args()[i], sigma)) {
      return false;
    }
  }
  return true;
}

class ForwardChainer {
 public:
  ForwardChainer(HilbertCalculus const& calc, std::vector<Term> const& universe,
                 std::size_t budget)
      : calc_(calc), universe_(universe), budget_(budget) {
    for (auto const& t : universe_) {
      in_universe_.insert(t);
    }
  }

  void assume(Term const& t) {
    if (!index_.count(t)) {
      push({t, ProofStep::Kind::hypothesis, 0, {}, {}});
    }
  }

  /// Saturates until `goal` appears, nothing new follows, or the budget
  /// runs out. Returns true when the goal was derived.
  bool run(Term const& goal) {
    bool changed = true;
    while (changed && !index_.count(goal) && !exhausted_) {
      changed = false;
      auto const& rules = calc_.rules();
      for (std::size_t r = 0; r < rules.size() && !exhausted_; ++r) {
        std::vector<std::optional<Term>> sigma(rules[r].num_vars());
        std::vector<std::size_t> used;
        std::size_t const snapshot = steps_.size();
        changed = fire(r, 0, snapshot, sigma, used) || changed;
        if (index_.count(goal)) {
          return true;
        }
      }
    }
    return index_.count(goal) > 0;
  }

  bool exhausted() const noexcept { return exhausted_; }
  std::size_t attempts() const noexcept { return attempts_; }

  /// The steps needed for `goal`, renumbered in dependency order.
  std::vector<ProofStep> proof_of(Term const& goal) const {
    std::vector<std::size_t> order;
    std::vector<bool> seen(steps_.size(), false);
    auto visit = [&](auto&& self, std::size_t s) -> void {
      if (seen[s]) {
        return;
      }
      seen[s] = true;
      for (auto p : steps_[s].premises) {
        self(self, p);
      }
      order.push_back(s);
    };
    visit(visit, index_.at(goal));
    std::vector<std::size_t> renum(steps_.size());
    std::vector<ProofStep> out;
    for (auto s : order) {
      renum[s] = out.size();
      ProofStep step = steps_[s];
      for (auto& p : step.premises) {
        p = renum[p];
      }
      out.push_back(std::move(step));
    }
    return out;
  }

 private:
  void push(ProofStep step) {
    index_.emplace(step.formula, steps_.size());
    steps_.push_back(std::move(step));
  }

  bool fire(std::size_t r, std::size_t i, std::size_t snapshot,
            std::vector<std::optional<Term>>& sigma, std::vector<std::size_t>& used) {
    auto const& rule = calc_.rules()[r];
    if (i == rule.premises.size()) {
      return conclude(r, sigma, used);
    }
    bool changed = false;
    for (std::size_t s = 0; s < snapshot; ++s) {
      if (++attempts_ > budget_) {
        exhausted_ = true;
        return changed;
      }
      auto saved = sigma;
      if (match_term(rule.premises[i], steps_[s].formula, sigma)) {
        used.push_back(s);
        changed = fire(r, i + 1, snapshot, sigma, used) || changed;
        used.pop_back();
        if (exhausted_) {
          return changed;
        }
      }
      sigma = std::move(saved);
    }
    return changed;
  }

  // Variables bound by no premise range over the term universe.
  bool conclude(std::size_t r, std::vector<std::optional<Term>> const& sigma,
                std::vector<std::size_t> const& used) {
    std::vector<std::size_t> free;
    for (std::size_t v = 0; v < sigma.size(); ++v) {
      if (!sigma[v]) {
        free.push_back(v);
      }
    }
    std::vector<Term> full(sigma.size(), Term::var(0));
    for (std::size_t v = 0; v < sigma.size(); ++v) {
      if (sigma[v]) {
        full[v] = *sigma[v];
      }
    }
    if (!free.empty() && universe_.empty()) {
      return false;
    }
    bool changed = false;
    std::vector<std::size_t> idx(free.size(), 0);
    do {
      if (!free.empty() && ++attempts_ > budget_) {
        exhausted_ = true;
        return changed;
      }
      for (std::size_t j = 0; j < free.size(); ++j) {
        full[free[j]] = universe_[idx[j]];
      }
      Term c = calc_.rules()[r].conclusion.substitute(full);
      if (in_universe_.count(c) && !index_.count(c)) {
        push({c, ProofStep::Kind::rule, r, used, full});
        changed = true;
      }
    } while (next_tuple(idx, universe_.size()));
    return changed;
  }

  HilbertCalculus const& calc_;
  std::vector<Term> const& universe_;
  std::unordered_set<Term, TermHash> in_universe_;
  std::vector<ProofStep> steps_;
  std::unordered_map<Term, std::size_t, TermHash> index_;
  std::size_t budget_;
  std::size_t attempts_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

/// Replays a proof: every step is a hypothesis from Gamma or an instance of
/// a rule whose premises are earlier steps; the last step is phi.
inline bool check_proof(HilbertCalculus const& calc, std::span<Term const> gamma,
                        std::vector<ProofStep> const& proof, Term const& phi) {
  if (proof.empty() || !(proof.back().formula == phi)) {
    return false;
  }
  for (std::size_t s = 0; s < proof.size(); ++s) {
    auto const& step = proof[s];
    switch (step.kind) {
      case ProofStep::Kind::hypothesis:
        if (std::find(gamma.begin(), gamma.end(), step.formula) == gamma.end()) {
          return false;
        }
        break;
      case ProofStep::Kind::rule: {
        if (step.rule >= calc.rules().size()) {
          return false;
        }
        auto const& r = calc.rules()[step.rule];
        if (step.premises.size() != r.premises.size() ||
            step.substitution.size() != r.num_vars()) {
          return false;
        }
        for (std::size_t i = 0; i < r.premises.size(); ++i) {
          if (step.premises[i] >= s ||
              !(proof[step.premises[i]].formula == r.premises[i].substitute(step.substitution))) {
            return false;
          }
        }
        if (!(step.formula == r.conclusion.substitute(step.substitution))) {
          return false;
        }
        break;
      }
      case ProofStep::Kind::semantic:
        return false;  // not a calculus proof
    }
  }
  return true;
}

/// A countermodel to Gamma |- phi: every calculus rule is valid in the
/// matrix and the assignment designates Gamma but not phi.
inline bool check_countermodel(HilbertCalculus const& calc, std::span<Term const> gamma,
                               Term const& phi, Countermodel const& cm) {
  auto const& m = cm.matrix;
  if (!(m.algebra.signature() == calc.signature()) ||
      cm.assignment.size() < num_vars_of(gamma, phi)) {
    return false;
  }
  for (auto const& r : calc.rules()) {
    if (!rule_valid(m, r)) {
      return false;
    }
  }
  for (auto const& g : gamma) {
    if (!m.designated.contains(eval_term(g, m.algebra, cm.assignment))) {
      return false;
    }
  }
  return !m.designated.contains(eval_term(phi, m.algebra, cm.assignment));
}

namespace detail {

inline std::vector<Term> term_universe(Signature const& sig, std::span<Term const> gamma,
                                       Term const& phi, DerivationBudget const& budget,
                                       std::size_t& depth_used) {
  std::size_t const nv = std::max<std::size_t>(1, num_vars_of(gamma, phi));
  std::vector<Term> gen;
  depth_used = budget.depth;
  while (true) {
    try {
      gen = generate_terms(sig, nv, depth_used, budget.terms);
      break;
    } catch (BudgetExceeded const&) {
      if (depth_used == 0) {
        break;
      }
      --depth_used;
    }
  }
  std::unordered_set<Term, TermHash> seen(gen.begin(), gen.end());
  std::vector<Term> subs;
  for (auto const& g : gamma) {
    g.collect_subterms(subs);
  }
  phi.collect_subterms(subs);
  for (auto const& t : subs) {
    if (seen.insert(t).second) {
      gen.push_back(t);
    }
  }
  return gen;
}

}  // namespace detail

/// Tri-state derivability of Gamma |- phi in a Hilbert calculus. Proof
/// search runs first (forward chaining inside a finite term universe), then
/// a countermodel search over small pruned algebras and their filters.
/// Nonempty filters are tried before the empty one so that countermodels
/// are non-almost-trivial whenever one exists within the bounds.
inline TriStateVerdict derivable(HilbertCalculus const& calc, std::vector<Term> const& gamma,
                                 Term const& phi,
                                 DerivationBudget const& budget = DerivationBudget{}) {
  auto const& sig = calc.signature();
  for (auto const& t : gamma) {
    if (!well_formed(t, sig)) {
      throw Error("premise is not well formed over the signature");
    }
  }
  if (!well_formed(phi, sig)) {
    throw Error("conclusion is not well formed over the signature");
  }
  if (std::find(gamma.begin(), gamma.end(), phi) != gamma.end()) {
    return TriStateVerdict::derived({{phi, ProofStep::Kind::hypothesis, 0, {}, {}}},
                                    "conclusion is a premise");
  }
  if (budget.instances == 0 && budget.max_model_size == 0) {
    return TriStateVerdict::unknown("zero budget");
  }

  std::size_t depth_used = 0;
  auto universe = detail::term_universe(sig, gamma, phi, budget, depth_used);
  detail::ForwardChainer chain(calc, universe, budget.instances);
  for (auto const& g : gamma) {
    chain.assume(g);
  }
  if (budget.instances > 0 && chain.run(phi)) {
    auto proof = chain.proof_of(phi);
    if (!check_proof(calc, gamma, proof, phi)) {
      throw Error("internal: derived proof failed to replay");
    }
    std::string what = std::to_string(proof.size()) + "-step proof";
    return TriStateVerdict::derived(std::move(proof), std::move(what));
  }

  std::size_t const nv = num_vars_of(gamma, phi);
  struct Candidate {
    FiniteAlgebra algebra;
    std::vector<ElemSet> filters;
  };
  std::vector<Candidate> candidates;
  std::vector<std::size_t> skipped_sizes;
  for (std::size_t n = 1; n <= budget.max_model_size; ++n) {
    try {
      AlgebraEnumerator en(sig, n, true, budget.enumeration_guard);
      while (auto a = en.next()) {
        FilterLattice lat(calc, *a);
        candidates.push_back({std::move(*a), lat.filters()});
      }
    } catch (BudgetExceeded const&) {
      skipped_sizes.push_back(n);
    }
  }
  auto try_filter = [&](Candidate const& c, ElemSet const& f) -> std::optional<TriStateVerdict> {
    Matrix m(c.algebra, f);
    if (auto env = refuting_assignment(m, gamma, phi)) {
      env->resize(nv);
      Countermodel cm{std::move(m), std::move(*env), std::nullopt};
      if (!check_countermodel(calc, gamma, phi, cm)) {
        throw Error("internal: countermodel failed to re-verify");
      }
      std::string what = "countermodel " + cm.matrix.render();
      return TriStateVerdict::refuted(std::move(cm), std::move(what));
    }
    return std::nullopt;
  };
  for (auto const& c : candidates) {
    for (auto const& f : c.filters) {
      if (!f.empty()) {
        if (auto v = try_filter(c, f)) {
          return *v;
        }
      }
    }
  }
  for (auto const& c : candidates) {
    for (auto const& f : c.filters) {
      if (f.empty()) {
        if (auto v = try_filter(c, f)) {
          return *v;
        }
      }
    }
  }

  std::string bounds = "proof search " + std::to_string(chain.attempts()) + " attempts over " +
                       std::to_string(universe.size()) + " terms (depth " +
                       std::to_string(depth_used) + (chain.exhausted() ? ", budget hit" : "") +
                       "); countermodels up to size " + std::to_string(budget.max_model_size);
  if (!skipped_sizes.empty()) {
    bounds += " (size";
    for (auto n : skipped_sizes) {
      bounds += " " + std::to_string(n);
    }
    bounds += " skipped by the enumeration guard)";
  }
  return TriStateVerdict::unknown(bounds);
}

/// A witness that a presented logic has no theorems: a nonempty subuniverse
/// of a model disjoint from its designated set.
inline bool check_theorem_free_witness(Countermodel const& cm) {
  if (!cm.subuniverse || cm.subuniverse->empty()) {
    return false;
  }
  auto const& s = *cm.subuniverse;
  return is_subuniverse(cm.matrix.algebra, s) && (s & cm.matrix.designated).empty();
}

/// Whether the presented logic has theorems.
///
/// With a calculus the answer is exact: the closure of the empty set only
/// fires axioms, so theorems exist iff some rule is an axiom; otherwise the
/// one-element matrix with nothing designated is a model without theorems.
///
/// For matrix presentations a presenting matrix with a nonempty subuniverse
/// disjoint from its designated set refutes. Otherwise the 1-generated free
/// algebra of the family decides: a theorem in one variable exists iff some
/// element is designated at every coordinate. If no such element exists,
/// that free algebra with nothing designated embeds in a power of the
/// family and is itself the witness. A bounded term search takes over when
/// the free algebra exceeds its budget.
inline TriStateVerdict has_theorems(LogicPresentation const& p,
                                    std::size_t free_budget = kDefaultFunctionBudget,
                                    std::size_t search_depth = 3) {
  if (p.calculus) {
    auto const& calc = *p.calculus;
    auto const& rules = calc.rules();
    for (std::size_t r = 0; r < rules.size(); ++r) {
      if (rules[r].is_axiom()) {
        std::vector<Term> sub(rules[r].num_vars(), Term::var(0));
        ProofStep step{rules[r].conclusion.substitute(sub), ProofStep::Kind::rule, r, {}, sub};
        return TriStateVerdict::derived({step}, "axiom " + render(rules[r], calc.signature()));
      }
    }
    auto one = trivial_algebra(calc.signature());
    Countermodel cm{Matrix(one, ElemSet(1)), {}, ElemSet::full(1)};
    return TriStateVerdict::refuted(std::move(cm), "no axioms; <1,{}> is a model");
  }
  if (p.matrices.empty()) {
    throw Error("logic '" + p.name + "' has neither a calculus nor matrices");
  }
  for (auto const& m : p.matrices) {
    for (Elem a = 0; a < m.algebra.size(); ++a) {
      ElemSet seed(m.algebra.size());
      seed.insert(a);
      auto s = subalgebra_generate(m.algebra, seed);
      if ((s & m.designated).empty()) {
        std::string what = m.algebra.render_set(s) + " is a subuniverse of " + m.render() +
                           " disjoint from the designated set";
        return TriStateVerdict::refuted({m, {a}, s}, what);
      }
    }
  }
  std::vector<FiniteAlgebra> family;
  for (auto const& m : p.matrices) {
    family.push_back(m.algebra);
  }
  auto designated_everywhere = [&](auto&& value_at) {
    for (std::size_t i = 0; i < p.matrices.size(); ++i) {
      auto const& m = p.matrices[i];
      for (Elem a = 0; a < m.algebra.size(); ++a) {
        if (!m.designated.contains(value_at(i, a))) {
          return false;
        }
      }
    }
    return true;
  };
  try {
    auto fa = free_term_functions(p.signature, family, 1, free_budget);
    for (std::size_t e = 0; e < fa.size(); ++e) {
      if (designated_everywhere([&](std::size_t i, Elem a) {
            Elem args[1] = {a};
            return fa.value(e, i, family[i].size(), args);
          })) {
        auto const& t = fa.witnesses[e];
        return TriStateVerdict::derived({{t, ProofStep::Kind::semantic, 0, {}, {}}},
                                        "theorem " + render(t, p.signature));
      }
    }
    std::size_t const n = fa.algebra.size();
    std::string what = "none of the " + std::to_string(n) +
                       " unary term functions is designated in every presenting matrix";
    return TriStateVerdict::refuted({Matrix(fa.algebra, ElemSet(n)), {}, ElemSet::full(n)},
                                    what);
  } catch (BudgetExceeded const&) {
  }
  std::vector<Term> terms;
  std::size_t depth = search_depth;
  while (true) {
    try {
      terms = generate_terms(p.signature, 1, depth, kDefaultFunctionBudget);
      break;
    } catch (BudgetExceeded const&) {
      if (depth == 0) {
        break;
      }
      --depth;
    }
  }
  for (auto const& t : terms) {
    if (designated_everywhere([&](std::size_t i, Elem a) {
          Elem env[1] = {a};
          return eval_term(t, family[i], env);
        })) {
      return TriStateVerdict::derived({{t, ProofStep::Kind::semantic, 0, {}, {}}},
                                      "theorem " + render(t, p.signature));
    }
  }
  return TriStateVerdict::unknown("free algebra over budget; no theorem among " +
                                  std::to_string(terms.size()) + " terms of depth <= " +
                                  std::to_string(depth));
}

}  // namespace lbw
