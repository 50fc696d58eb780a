#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/logic/calculus.hpp"

namespace lbw {

inline std::size_t num_vars_of(std::span<Term const> premises, Term const& conclusion) {
  std::set<std::size_t> vs;
  for (auto const& p : premises) {
    p.collect_vars(vs);
  }
  conclusion.collect_vars(vs);
  return vs.empty() ? 0 : *vs.rbegin() + 1;
}

/// An assignment sending every premise into the designated set and the
/// conclusion outside it, if one exists.
inline std::optional<std::vector<Elem>> refuting_assignment(Matrix const& m,
                                                            std::span<Term const> premises,
                                                            Term const& conclusion) {
  std::size_t const v = num_vars_of(premises, conclusion);
  std::vector<std::size_t> idx(v, 0);
  std::vector<Elem> env(v);
  do {
    for (std::size_t i = 0; i < v; ++i) {
      env[i] = static_cast<Elem>(idx[i]);
    }
    bool premises_hold = true;
    for (auto const& p : premises) {
      if (!m.designated.contains(eval_term(p, m.algebra, env))) {
        premises_hold = false;
        break;
      }
    }
    if (premises_hold && !m.designated.contains(eval_term(conclusion, m.algebra, env))) {
      return env;
    }
  } while (next_tuple(idx, m.algebra.size()));
  return std::nullopt;
}

inline bool rule_valid(Matrix const& m, Rule const& r) {
  return !refuting_assignment(m, r.premises, r.conclusion).has_value();
}

inline bool matrix_consequence(std::span<Matrix const> matrices, std::span<Term const> gamma,
                               Term const& phi) {
  for (auto const& m : matrices) {
    if (refuting_assignment(m, gamma, phi)) {
      return false;
    }
  }
  return true;
}

/// Soundness cross-check of a two-sided presentation: the first rule that
/// fails in some presenting matrix, as (rule index, matrix index).
inline std::optional<std::pair<std::size_t, std::size_t>> first_unsound_rule(
    LogicPresentation const& p) {
  if (!p.calculus) {
    return std::nullopt;
  }
  auto const& rules = p.calculus->rules();
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (std::size_t m = 0; m < p.matrices.size(); ++m) {
      if (!rule_valid(p.matrices[m], rules[r])) {
        return std::make_pair(r, m);
      }
    }
  }
  return std::nullopt;
}

}  // namespace lbw
