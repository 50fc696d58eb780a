#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/closure.hpp"

namespace lbw {

inline constexpr std::size_t kDefaultFunctionBudget = 1'000'000;

/// A unary self-map of the universe, as its value table.
using UnaryMap = std::vector<Elem>;

/// All unary polynomial functions of `a`: the closure of the identity and
/// the constant maps under pointwise basic operations. Sorted ascending.
inline std::vector<UnaryMap> unary_polynomials(FiniteAlgebra const& a,
                                               std::size_t budget = kDefaultFunctionBudget) {
  std::size_t const n = a.size();
  std::vector<FiniteAlgebra const*> coords(n, &a);
  std::vector<std::vector<Elem>> gens;
  std::vector<Term> terms;
  UnaryMap id(n);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = static_cast<Elem>(i);
  }
  gens.push_back(id);
  terms.push_back(Term::var(0));
  for (Elem c = 0; c < n; ++c) {
    gens.emplace_back(n, c);
    terms.push_back(Term::var(c + 1));  // parameter variable for constant c
  }
  auto sp = generate_subpower(a.signature(), coords, gens, terms, budget);
  std::sort(sp.elements.begin(), sp.elements.end());
  return std::move(sp.elements);
}

/// The k-generated free algebra of the variety generated by `family`,
/// realized inside the product of A_i^(A_i^k) as the subalgebra generated by
/// the k projections. Element e is a term function up to equivalence in the
/// variety; `witnesses[e]` is the first term found for it.
struct FreeAlgebra {
  FiniteAlgebra algebra;                    // operations on term functions
  std::vector<std::vector<Elem>> functions; // value vectors over all coordinates
  std::vector<Term> witnesses;
  std::vector<std::size_t> offsets;         // first coordinate of member i
  std::size_t arity = 0;                    // k

  std::size_t size() const { return functions.size(); }

  /// Value of element e in family member i at the argument tuple `args`.
  Elem value(std::size_t e, std::size_t member, std::size_t member_size,
             std::span<Elem const> args) const {
    std::size_t idx = 0;
    for (auto x : args) {
      idx = idx * member_size + x;
    }
    return functions[e][offsets[member] + idx];
  }
};

inline FreeAlgebra free_term_functions(Signature const& sig,
                                       std::vector<FiniteAlgebra> const& family,
                                       std::size_t k,
                                       std::size_t budget = kDefaultFunctionBudget) {
  if (k == 0) {
    throw Error("free algebra needs at least one generator");
  }
  FreeAlgebra out;
  out.arity = k;
  std::vector<FiniteAlgebra const*> coords;
  std::vector<std::vector<Elem>> gens(k);
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto const& a = family[i];
    if (!(a.signature() == sig)) {
      throw Error("free algebra family must share one signature");
    }
    out.offsets.push_back(coords.size());
    std::size_t const rows = FiniteAlgebra::table_size(a.size(), k);
    if (coords.size() + rows > budget) {
      throw BudgetExceeded("free algebra coordinate budget exceeded", 0);
    }
    std::vector<std::size_t> idx(k, 0);
    do {
      coords.push_back(&a);
      for (std::size_t j = 0; j < k; ++j) {
        gens[j].push_back(static_cast<Elem>(idx[j]));
      }
    } while (next_tuple(idx, a.size()));
  }
  std::vector<Term> terms;
  for (std::size_t j = 0; j < k; ++j) {
    terms.push_back(Term::var(j));
  }
  auto sp = generate_subpower(sig, coords, gens, terms, budget);
  std::size_t const n = sp.elements.size();
  if (n == 0) {
    throw Error("free algebra over an empty family");
  }

  // Operation tables over element indices.
  std::unordered_map<std::vector<Elem>, Elem, TupleHash> index;
  for (std::size_t e = 0; e < n; ++e) {
    index.emplace(sp.elements[e], static_cast<Elem>(e));
  }
  std::vector<std::vector<Elem>> tables(sig.size());
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const ar = sig.arity(op);
    if (FiniteAlgebra::table_size(n, ar) > budget) {
      throw BudgetExceeded("free algebra table budget exceeded", n);
    }
    std::vector<std::size_t> idx(ar, 0);
    std::vector<std::vector<Elem> const*> args(ar);
    do {
      for (std::size_t i = 0; i < ar; ++i) {
        args[i] = &sp.elements[idx[i]];
      }
      tables[op].push_back(index.at(apply_coordinatewise(sig, coords, op, args)));
    } while (next_tuple(idx, n));
  }
  std::vector<std::string> names;
  for (auto const& t : sp.witnesses) {
    names.push_back(render(t, sig));
  }
  out.algebra = FiniteAlgebra(sig, n, std::move(tables), std::move(names));
  out.functions = std::move(sp.elements);
  out.witnesses = std::move(sp.witnesses);
  return out;
}

}  // namespace lbw
