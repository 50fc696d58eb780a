#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lbw/congruence/suszko.hpp"
#include "lbw/definability/translation.hpp"
#include "lbw/error.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/polynomials.hpp"
#include "lbw/logic/calculus.hpp"
#include "lbw/logic/filters.hpp"

namespace lbw {

enum class SynthesisMode { exact, bounded };

inline char const* to_string(SynthesisMode m) {
  return m == SynthesisMode::exact ? "exact" : "bounded";
}

struct SynthesisOptions {
  SynthesisMode mode = SynthesisMode::exact;
  std::size_t depth = 2;                        // bounded mode term depth
  std::size_t free_budget = kDefaultFunctionBudget;
  std::size_t term_budget = 20'000;
  bool almost = false;                          // ignore almost-trivial members
  bool fallback_to_bounded = true;              // exact over budget -> bounded
  HilbertCalculus const* calculus = nullptr;    // enables Suszko-guided ordering
};

struct SynthesisResult {
  std::optional<Translation> translation;
  SynthesisMode mode = SynthesisMode::exact;    // the mode that actually ran
  bool definitive = false;  // a found translation, or an exhaustive None
  std::size_t functions = 0;                    // free algebra size / distinct term functions
  std::size_t surviving_pairs = 0;
  std::vector<Term> witnesses;                  // one term per function (exact mode)
  std::optional<Translation> collapsed;         // parameters set to x, if that still works
  std::string note;
};

namespace detail {

// Term functions on the whole family, one coordinate per (member, x, c).
struct FunctionTable {
  std::vector<Term> witnesses;
  std::vector<std::vector<Elem>> values;
  std::vector<std::size_t> offsets;  // first coordinate of member i
};

inline FunctionTable exact_functions(std::vector<Matrix> const& family, std::size_t k,
                                     std::size_t budget) {
  std::vector<FiniteAlgebra> algebras;
  for (auto const& m : family) {
    algebras.push_back(m.algebra);
  }
  auto fa = free_term_functions(family.front().algebra.signature(), algebras, k, budget);
  return {std::move(fa.witnesses), std::move(fa.functions), std::move(fa.offsets)};
}

inline FunctionTable bounded_functions(std::vector<Matrix> const& family, std::size_t k,
                                       std::size_t depth, std::size_t budget,
                                       std::size_t& depth_used) {
  auto const& sig = family.front().algebra.signature();
  std::vector<Term> terms;
  depth_used = depth;
  while (true) {
    try {
      terms = generate_terms(sig, k, depth_used, budget);
      break;
    } catch (BudgetExceeded const&) {
      if (depth_used == 0) {
        throw;
      }
      --depth_used;
    }
  }
  FunctionTable out;
  std::size_t off = 0;
  for (auto const& m : family) {
    out.offsets.push_back(off);
    off += FiniteAlgebra::table_size(m.algebra.size(), k);
  }
  std::map<std::vector<Elem>, std::size_t> seen;
  for (auto const& t : terms) {
    std::vector<Elem> v;
    for (auto const& m : family) {
      auto f = term_function(t, m.algebra, k);
      v.insert(v.end(), f.begin(), f.end());
    }
    if (seen.emplace(v, out.values.size()).second) {
      out.witnesses.push_back(t);
      out.values.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace detail

/// Searches for a translation with m parameters whose solution sets are the
/// designated sets of the family.
///
/// Exact mode works in the (m+1)-generated free algebra of the family: two
/// elements p, q form a candidate equation when they agree at every
/// designated x and every parameter tuple. The full candidate set tau* has
/// the least solution sets among all translations over these terms, so if
/// tau* fails, every translation with m parameters fails on this family.
/// Bounded mode runs the same sieve over the depth-limited terms.
///
/// A found tau* is shrunk greedily. Pairs related by the Suszko congruence
/// of the filter generated by x (when a calculus is given) come first, then
/// pairs excluding more undesignated elements, then shorter pairs.
inline SynthesisResult synthesize_translation(std::vector<Matrix> const& family, std::size_t m,
                                              SynthesisOptions const& opt = {}) {
  SynthesisResult res;
  res.mode = opt.mode;
  std::vector<Matrix> active;
  for (auto const& mm : family) {
    if (!(opt.almost && mm.almost_trivial())) {
      active.push_back(mm);
    }
  }
  if (active.empty()) {
    res.translation = Translation(m, {});
    res.definitive = true;
    res.note = "no members to define truth in";
    return res;
  }
  auto const& sig = active.front().algebra.signature();
  for (auto const& mm : active) {
    if (!(mm.algebra.signature() == sig)) {
      throw Error("synthesis family must share one signature");
    }
  }
  std::size_t const k = m + 1;

  detail::FunctionTable ft;
  if (opt.mode == SynthesisMode::exact) {
    try {
      ft = detail::exact_functions(active, k, opt.free_budget);
    } catch (BudgetExceeded const&) {
      if (!opt.fallback_to_bounded) {
        throw;
      }
      res.mode = SynthesisMode::bounded;
      res.note = "free algebra over budget; bounded evidence only. ";
    }
  }
  std::size_t depth_used = opt.depth;
  if (res.mode == SynthesisMode::bounded) {
    ft = detail::bounded_functions(active, k, opt.depth, opt.term_budget, depth_used);
    res.note += "terms of depth <= " + std::to_string(depth_used);
  }
  res.functions = ft.values.size();
  if (res.mode == SynthesisMode::exact) {
    res.witnesses = ft.witnesses;
  }

  // Coordinates where x is designated, and where it is not.
  struct Coord {
    std::size_t member;
    Elem x;
    std::size_t index;
  };
  std::vector<Coord> designated, undesignated;
  for (std::size_t i = 0; i < active.size(); ++i) {
    std::size_t const n = active[i].algebra.size();
    std::size_t const per_x = FiniteAlgebra::table_size(n, m);
    for (Elem a = 0; a < n; ++a) {
      auto& dst = active[i].designated.contains(a) ? designated : undesignated;
      for (std::size_t c = 0; c < per_x; ++c) {
        dst.push_back({i, a, ft.offsets[i] + a * per_x + c});
      }
    }
  }

  // Group functions by their values at designated coordinates.
  std::map<std::vector<Elem>, std::vector<std::size_t>> groups;
  for (std::size_t f = 0; f < ft.values.size(); ++f) {
    std::vector<Elem> key;
    key.reserve(designated.size());
    for (auto const& c : designated) {
      key.push_back(ft.values[f][c.index]);
    }
    groups[key].push_back(f);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  constexpr std::size_t kAllPairsCap = 4096;
  for (auto const& [key, fs] : groups) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      // all pairs inside small groups, a spanning star inside large ones
      std::size_t const upto = fs.size() * fs.size() <= kAllPairsCap ? fs.size() : 1;
      for (std::size_t j = 0; j < std::min(i, upto); ++j) {
        pairs.emplace_back(fs[j], fs[i]);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  res.surviving_pairs = pairs.size();

  // Which undesignated (member, x) each pair excludes.
  auto excluded_by = [&](std::pair<std::size_t, std::size_t> pq) {
    std::vector<std::pair<std::size_t, Elem>> out;
    for (auto const& c : undesignated) {
      if (ft.values[pq.first][c.index] != ft.values[pq.second][c.index] &&
          (out.empty() || out.back() != std::make_pair(c.member, c.x))) {
        out.emplace_back(c.member, c.x);
      }
    }
    return out;
  };
  std::vector<std::vector<std::pair<std::size_t, Elem>>> excl(pairs.size());
  std::set<std::pair<std::size_t, Elem>> need;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    excl[p] = excluded_by(pairs[p]);
    need.insert(excl[p].begin(), excl[p].end());
  }
  std::size_t total_undesignated = 0;
  for (auto const& mm : active) {
    total_undesignated += mm.algebra.size() - mm.designated.count();
  }
  auto witness_sizes = [&](std::size_t p) {
    return ft.witnesses[pairs[p].first].size() + ft.witnesses[pairs[p].second].size();
  };
  if (need.size() != total_undesignated) {
    res.definitive = res.mode == SynthesisMode::exact;
    res.note += res.definitive ? "" : "; ";
    res.note += "the " + std::to_string(pairs.size()) + " surviving equations leave " +
                std::to_string(total_undesignated - need.size()) + " undesignated element(s)";
    return res;
  }

  // Suszko tier: the pair's values at (a, c) are related by the Suszko
  // congruence of the filter generated by a, at every (a, c) of every member.
  std::vector<bool> suszko_tier(pairs.size(), false);
  if (opt.calculus) {
    std::vector<std::vector<Partition>> sz(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      FilterLattice lat(*opt.calculus, active[i].algebra);
      for (Elem a = 0; a < active[i].algebra.size(); ++a) {
        ElemSet s(active[i].algebra.size());
        s.insert(a);
        sz[i].push_back(suszko_by_definition(lat, lat.closure(s)));
      }
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      bool all = true;
      for (std::size_t i = 0; i < active.size() && all; ++i) {
        std::size_t const n = active[i].algebra.size();
        std::size_t const per_x = FiniteAlgebra::table_size(n, m);
        for (std::size_t idx = 0; idx < n * per_x && all; ++idx) {
          Elem const a = static_cast<Elem>(idx / per_x);
          std::size_t const coord = ft.offsets[i] + idx;
          all = sz[i][a].related(ft.values[pairs[p].first][coord],
                                 ft.values[pairs[p].second][coord]);
        }
      }
      suszko_tier[p] = all;
    }
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    if (suszko_tier[p] != suszko_tier[q]) {
      return static_cast<bool>(suszko_tier[p]);
    }
    if (excl[p].size() != excl[q].size()) {
      return excl[p].size() > excl[q].size();
    }
    return witness_sizes(p) < witness_sizes(q);
  });

  // Greedy cover of the undesignated elements, then drop redundant pairs.
  std::set<std::pair<std::size_t, Elem>> covered;
  std::vector<std::size_t> chosen;
  for (auto p : order) {
    bool useful = std::any_of(excl[p].begin(), excl[p].end(),
                              [&](auto const& e) { return !covered.count(e); });
    if (useful) {
      chosen.push_back(p);
      covered.insert(excl[p].begin(), excl[p].end());
      if (covered.size() == total_undesignated) {
        break;
      }
    }
  }
  for (std::size_t i = chosen.size(); i-- > 0;) {
    std::set<std::pair<std::size_t, Elem>> rest;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      if (j != i) {
        rest.insert(excl[chosen[j]].begin(), excl[chosen[j]].end());
      }
    }
    if (rest.size() == total_undesignated) {
      chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  std::vector<Equation> eqs;
  for (auto p : chosen) {
    // the larger term on the left, as in x & y ~ y
    Term const& u = ft.witnesses[pairs[p].first];
    Term const& v = ft.witnesses[pairs[p].second];
    if (v.size() > u.size()) {
      eqs.push_back({v, u});
    } else {
      eqs.push_back({u, v});
    }
  }
  Translation tau(m, std::move(eqs));
  if (!defines_truth(tau, active)) {
    throw Error("internal: synthesized translation failed verification");
  }
  if (m > 0) {
    auto c = tau.collapsed();
    if (defines_truth(c, active)) {
      res.collapsed = std::move(c);
    }
  }
  res.translation = std::move(tau);
  res.definitive = true;
  return res;
}

}  // namespace lbw
