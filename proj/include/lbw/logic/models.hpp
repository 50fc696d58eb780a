#pragma once

#include <cstddef>
#include <vector>

#include "lbw/congruence/congruence.hpp"
#include "lbw/congruence/suszko.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/logic/calculus.hpp"
#include "lbw/logic/filters.hpp"
#include "lbw/util/parallel.hpp"

namespace lbw {

struct ModelEntry {
  std::size_t algebra_index;  // position in the input family
  Matrix matrix;
  bool almost_trivial;        // nothing designated
};

namespace detail {

template <class Keep>
std::vector<ModelEntry> collect_models(HilbertCalculus const& calc,
                                       std::vector<FiniteAlgebra> const& family,
                                       std::size_t jobs, Keep const& keep) {
  std::vector<std::vector<ModelEntry>> per(family.size());
  parallel_for(family.size(), jobs, [&](std::size_t i) {
    FilterLattice lat(calc, family[i]);
    for (auto const& f : lat.filters()) {
      if (keep(lat, f)) {
        per[i].push_back({i, Matrix(family[i], f), f.empty()});
      }
    }
  });
  std::vector<ModelEntry> out;
  for (auto& v : per) {
    for (auto& e : v) {
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace detail

/// Reduced models <A,F> with A in the family and F a deductive filter.
inline std::vector<ModelEntry> modstar(HilbertCalculus const& calc,
                                       std::vector<FiniteAlgebra> const& family,
                                       std::size_t jobs = 1) {
  return detail::collect_models(calc, family, jobs, [](FilterLattice const& lat, ElemSet const& f) {
    return leibniz(lat.algebra(), f).is_identity();
  });
}

/// Suszko-reduced models over the family.
inline std::vector<ModelEntry> modsuszko(HilbertCalculus const& calc,
                                         std::vector<FiniteAlgebra> const& family,
                                         std::size_t jobs = 1) {
  return detail::collect_models(calc, family, jobs, [](FilterLattice const& lat, ElemSet const& f) {
    return suszko_by_definition(lat, f).is_identity();
  });
}

}  // namespace lbw
