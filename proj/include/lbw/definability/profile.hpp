#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lbw/congruence/congruence.hpp"
#include "lbw/congruence/suszko.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/partition.hpp"
#include "lbw/logic/filters.hpp"
#include "lbw/logic/models.hpp"

namespace lbw {

struct ProfileRow {
  ElemSet filter;
  Partition leibniz;
  Partition suszko;
};

/// The Leibniz and Suszko operators of a logic on one algebra, one row per
/// filter in lattice order.
struct OperatorProfile {
  FiniteAlgebra algebra;
  FilterLattice lattice;
  std::vector<ProfileRow> rows;

  std::size_t size() const { return rows.size(); }
};

inline OperatorProfile operator_profile(HilbertCalculus const& calc, FiniteAlgebra const& a,
                                        std::size_t filter_budget = kDefaultFilterBudget) {
  FilterLattice lat(calc, a, filter_budget);
  std::vector<ProfileRow> rows;
  for (auto const& f : lat.filters()) {
    rows.push_back({f, leibniz(a, f), suszko_by_definition(lat, f)});
  }
  return {a, std::move(lat), std::move(rows)};
}

/// Outcome of an operator property check. `first` and `second` index
/// profile rows; `element` is set for complete order-reflection failures.
struct PropertyCheck {
  bool holds = true;
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
  std::optional<Elem> element;
  std::string detail;

  explicit operator bool() const { return holds; }
};

namespace detail {

inline bool skip_row(OperatorProfile const& p, std::size_t i, bool almost) {
  return almost && p.rows[i].filter.empty();
}

}  // namespace detail

/// Whether F -> Omega F is injective on the (nonempty, if almost) filters.
inline PropertyCheck check_injective(OperatorProfile const& p, bool almost) {
  auto const& a = p.algebra;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (detail::skip_row(p, i, almost) || detail::skip_row(p, j, almost)) {
        continue;
      }
      if (p.rows[i].leibniz == p.rows[j].leibniz) {
        return {false, i, j, std::nullopt,
                a.render_set(p.rows[i].filter) + " and " + a.render_set(p.rows[j].filter) +
                    " share the Leibniz congruence " + p.rows[i].leibniz.render(a)};
      }
    }
  }
  return {};
}

/// Whether Omega F <= Omega G implies F <= G on the (nonempty, if almost)
/// filters.
inline PropertyCheck check_order_reflecting(OperatorProfile const& p, bool almost) {
  auto const& a = p.algebra;
  // larger F first, so the witness names the largest filter that fails
  for (std::size_t i = p.size(); i-- > 0;) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (i == j || detail::skip_row(p, i, almost) || detail::skip_row(p, j, almost)) {
        continue;
      }
      if (p.rows[i].leibniz.refines(p.rows[j].leibniz) &&
          !p.rows[i].filter.subset_of(p.rows[j].filter)) {
        return {false, i, j, std::nullopt,
                "Omega" + a.render_set(p.rows[i].filter) + " <= Omega" +
                    a.render_set(p.rows[j].filter) + " but the filters are not included"};
      }
    }
  }
  return {};
}

/// Complete order-reflection: for every family of filters {G_k} and filter
/// F, meet_k Omega G_k <= Omega F implies meet_k G_k <= F, the empty family
/// included (meet = total congruence, intersection = the whole universe).
///
/// Checked through principal filters: the property fails iff some filter G
/// and a not in G have Suszko(Fg{a}) <= Omega G, or the empty family fails
/// (some G != A with Omega G total). With `almost`, G and Fg{a} range over
/// nonempty filters and the families over nonempty families of them.
inline PropertyCheck check_completely_order_reflecting(OperatorProfile const& p, bool almost) {
  auto const& a = p.algebra;
  auto const& lat = p.lattice;
  std::size_t const n = a.size();
  for (std::size_t g = 0; g < p.size(); ++g) {
    auto const& row = p.rows[g];
    if (detail::skip_row(p, g, almost)) {
      continue;
    }
    if (!row.filter.is_full() && row.leibniz.is_total()) {
      return {false, std::nullopt, g, std::nullopt,
              "empty family: Omega" + a.render_set(row.filter) + " is total"};
    }
  }
  std::vector<std::optional<Partition>> principal(n);
  for (Elem e = 0; e < n; ++e) {
    ElemSet s(n);
    s.insert(e);
    auto f = lat.closure(s);
    principal[e] = suszko_by_definition(lat, f);
  }
  for (std::size_t g = 0; g < p.size(); ++g) {
    auto const& row = p.rows[g];
    if (detail::skip_row(p, g, almost)) {
      continue;
    }
    for (Elem e = 0; e < n; ++e) {
      if (!row.filter.contains(e) && principal[e]->refines(row.leibniz)) {
        return {false, std::nullopt, g, e,
                "Suszko(Fg{" + a.name(e) + "}) <= Omega" + a.render_set(row.filter) + " but " +
                    a.name(e) + " is not in it"};
      }
    }
  }
  return {};
}

/// Whether the truth set of each reduced model is determined by its
/// algebra: no two members on the same algebra (compared structurally) with
/// different designated sets. With `almost`, almost-trivial members are
/// ignored.
inline PropertyCheck check_truth_implicit(std::vector<ModelEntry> const& models, bool almost) {
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      auto const& m = models[i].matrix;
      auto const& k = models[j].matrix;
      if (almost && (models[i].almost_trivial || models[j].almost_trivial)) {
        continue;
      }
      if (m.algebra == k.algebra && !(m.designated == k.designated)) {
        return {false, i, j, std::nullopt,
                m.render() + " and " + k.render() + " are reduced models on one algebra"};
      }
    }
  }
  return {};
}

/// Whether every reduced model's truth set is nonempty and contained in
/// every nonempty filter of its algebra. `lattices[k]` is the filter lattice
/// of the family algebra with index k; models refer to it through
/// algebra_index.
inline PropertyCheck check_truth_small(std::vector<ModelEntry> const& models,
                                       std::vector<FilterLattice const*> const& lattices,
                                       bool almost) {
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto const& e = models[i];
    if (almost && e.almost_trivial) {
      continue;
    }
    auto const& m = e.matrix;
    if (m.designated.empty()) {
      return {false, i, std::nullopt, std::nullopt,
              m.render() + " is a reduced model with an empty truth set"};
    }
    auto const& lat = *lattices.at(e.algebra_index);
    for (std::size_t g = 0; g < lat.size(); ++g) {
      if (!lat[g].empty() && !m.designated.subset_of(lat[g])) {
        return {false, i, g, std::nullopt,
                m.render() + " has truth set outside the filter " +
                    m.algebra.render_set(lat[g])};
      }
    }
  }
  return {};
}

}  // namespace lbw
