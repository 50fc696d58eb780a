#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbw/congruence/congruence.hpp"
#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/term.hpp"

namespace lbw {

struct Equation {
  Term lhs;
  Term rhs;

  bool operator==(Equation const& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

/// A parametrized equational translation tau(x, y1..ym). Variable 0 is the
/// distinguished x; variables 1..m are the parameters. An empty equation
/// list behaves like {x = x}.
struct Translation {
  std::size_t params = 0;
  std::vector<Equation> equations;

  Translation() = default;
  Translation(std::size_t m, std::vector<Equation> eqs) : params(m), equations(std::move(eqs)) {
    for (auto const& e : equations) {
      for (auto v : e.lhs.vars()) {
        check_var(v);
      }
      for (auto v : e.rhs.vars()) {
        check_var(v);
      }
    }
  }

  /// Substitutes x for every parameter.
  Translation collapsed() const {
    std::vector<Term> sigma(params + 1, Term::var(0));
    Translation out;
    for (auto const& e : equations) {
      out.equations.push_back({e.lhs.substitute(sigma), e.rhs.substitute(sigma)});
    }
    return out;
  }

 private:
  void check_var(std::size_t v) const {
    if (v > params) {
      throw Error("translation uses a variable beyond x and its " + std::to_string(params) +
                  " parameters");
    }
  }
};

inline std::string render(Equation const& e, Signature const& sig) {
  return render(e.lhs, sig, param_var_name) + " ~ " + render(e.rhs, sig, param_var_name);
}

inline std::string render(Translation const& t, Signature const& sig) {
  if (t.equations.empty()) {
    return "{x ~ x}";
  }
  std::string out = "{";
  for (std::size_t i = 0; i < t.equations.size(); ++i) {
    out += (i ? "; " : "") + render(t.equations[i], sig);
  }
  return out + "}";
}

namespace detail {

/// Calls visit(env) for env = (a, c1..cm) over all parameter tuples; stops
/// early when visit returns false. Returns whether every call returned true.
template <class Visit>
bool for_each_parameter_tuple(std::size_t n, std::size_t m, Elem a, Visit&& visit) {
  std::vector<std::size_t> idx(m, 0);
  std::vector<Elem> env(m + 1);
  env[0] = a;
  do {
    for (std::size_t i = 0; i < m; ++i) {
      env[i + 1] = static_cast<Elem>(idx[i]);
    }
    if (!visit(std::span<Elem const>(env))) {
      return false;
    }
  } while (next_tuple(idx, n));
  return true;
}

}  // namespace detail

/// {a : A satisfies tau(a, c) for every parameter tuple c}.
inline ElemSet solutions(Translation const& tau, FiniteAlgebra const& a) {
  ElemSet out(a.size());
  for (Elem e = 0; e < a.size(); ++e) {
    bool ok = detail::for_each_parameter_tuple(a.size(), tau.params, e, [&](auto env) {
      for (auto const& eq : tau.equations) {
        if (eval_term(eq.lhs, a, env) != eval_term(eq.rhs, a, env)) {
          return false;
        }
      }
      return true;
    });
    if (ok) {
      out.insert(e);
    }
  }
  return out;
}

struct TruthFailure {
  std::size_t matrix_index;
  Elem element;
  bool designated;  // the element is designated but not a solution, or vice versa
};

struct DefinesTruth {
  bool holds = true;
  std::optional<TruthFailure> witness;  // first failing member and element
  explicit operator bool() const { return holds; }
};

/// Whether tau's solution set equals the designated set of every member
/// (skipping almost-trivial members when `almost`).
inline DefinesTruth defines_truth(Translation const& tau, std::vector<Matrix> const& family,
                                  bool almost = false) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto const& m = family[i];
    if (almost && m.almost_trivial()) {
      continue;
    }
    auto sol = solutions(tau, m.algebra);
    for (Elem e = 0; e < m.algebra.size(); ++e) {
      if (sol.contains(e) != m.designated.contains(e)) {
        return {false, TruthFailure{i, e, m.designated.contains(e)}};
      }
    }
  }
  return {};
}

/// Whether tau defines truth in the reduction of a non-almost-trivial
/// matrix: a in F exactly when every equation's value pair at (a, c) is in
/// the Leibniz congruence of F, for all parameter tuples c.
inline bool check_in_reduction(Translation const& tau, Matrix const& m) {
  if (m.almost_trivial()) {
    throw Error("check_in_reduction needs a nonempty designated set");
  }
  auto const& a = m.algebra;
  auto omega = leibniz(a, m.designated);
  for (Elem e = 0; e < a.size(); ++e) {
    bool related = detail::for_each_parameter_tuple(a.size(), tau.params, e, [&](auto env) {
      for (auto const& eq : tau.equations) {
        if (!omega.related(eval_term(eq.lhs, a, env), eval_term(eq.rhs, a, env))) {
          return false;
        }
      }
      return true;
    });
    if (related != m.designated.contains(e)) {
      return false;
    }
  }
  return true;
}

}  // namespace lbw
