#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "lbw/congruence/congruence.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/partition.hpp"
#include "lbw/kernel/polynomials.hpp"
#include "lbw/logic/filters.hpp"

namespace lbw {

enum class SuszkoMethod { definition, polynomial };

/// Suszko congruence as the meet of the Leibniz congruences of all filters
/// above F.
inline Partition suszko_by_definition(FilterLattice const& lat, ElemSet const& f) {
  auto const& a = lat.algebra();
  Partition out = Partition::total(a.size());
  for (auto g : lat.above(f)) {
    out = out.meet(leibniz(a, lat[g]));
  }
  return out;
}

/// Suszko congruence through unary polynomials: a ~ b iff for every unary
/// polynomial p the filters generated by F + p(a) and F + p(b) coincide.
inline Partition suszko_by_polynomials(FilterLattice const& lat, ElemSet const& f,
                                       std::size_t budget = kDefaultFunctionBudget) {
  auto const& a = lat.algebra();
  std::size_t const n = a.size();
  // g[e] = id of the filter generated by F + e
  std::map<std::vector<Elem>, std::size_t> ids;
  std::vector<std::size_t> g(n);
  for (Elem e = 0; e < n; ++e) {
    ElemSet s = f;
    s.insert(e);
    g[e] = ids.emplace(lat.closure(s).elements(), ids.size()).first->second;
  }
  std::vector<std::vector<std::size_t>> profile(n);
  for (auto const& p : unary_polynomials(a, budget)) {
    for (Elem x = 0; x < n; ++x) {
      profile[x].push_back(g[p[x]]);
    }
  }
  return Partition::from_labels(profile);
}

inline Partition suszko(FilterLattice const& lat, ElemSet const& f,
                        SuszkoMethod method = SuszkoMethod::definition) {
  return method == SuszkoMethod::definition ? suszko_by_definition(lat, f)
                                            : suszko_by_polynomials(lat, f);
}

inline Partition suszko(HilbertCalculus const& calc, FiniteAlgebra const& a, ElemSet const& f,
                        SuszkoMethod method = SuszkoMethod::definition) {
  return suszko(FilterLattice(calc, a), f, method);
}

}  // namespace lbw
