#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lbw/congruence/reduction.hpp"
#include "lbw/definability/detect.hpp"
#include "lbw/definability/profile.hpp"
#include "lbw/definability/synthesis.hpp"
#include "lbw/definability/translation.hpp"
#include "lbw/logic/derivability.hpp"
#include "lbw/logic/models.hpp"
#include "lbw/util/parallel.hpp"

namespace lbw {

enum class Level {
  equational,
  parametrized,
  almost_parametrized,
  small,
  almost_small,
  implicit,
  almost_implicit,
  protoalgebraic,
};
inline constexpr std::size_t kNumLevels = 8;

inline char const* to_string(Level l) {
  constexpr std::array<char const*, kNumLevels> names{
      "equational", "parametrized",    "almost-parametrized", "small",
      "almost-small", "implicit", "almost-implicit",     "protoalgebraic"};
  return names[static_cast<std::size_t>(l)];
}

enum class Status { holds_definitive, refuted_definitive, holds_on_tested_family, unknown_at_bounds };

inline char const* to_string(Status s) {
  switch (s) {
    case Status::holds_definitive:
      return "holds-definitive";
    case Status::refuted_definitive:
      return "refuted-definitive";
    case Status::holds_on_tested_family:
      return "holds-on-tested-family";
    case Status::unknown_at_bounds:
      return "unknown-at-bounds";
  }
  return "?";
}

struct ClassifyBounds {
  std::size_t depth = 2;   // term depth for detection and bounded synthesis
  std::size_t params = 1;  // parameters tried for almost-parametrized synthesis
  std::size_t jobs = 1;
  std::size_t free_budget = kDefaultFunctionBudget;
  std::size_t term_budget = 20'000;
  std::size_t filter_budget = kDefaultFilterBudget;
  DerivationBudget derivation{};

  DetectionBounds detection() const {
    return {depth, term_budget, derivation, filter_budget, jobs};
  }
};

struct Assumptions {
  bool fregean = false;  // user-asserted; only produces hints
};

struct LevelResult {
  Level level;
  Status status = Status::unknown_at_bounds;
  std::string evidence;                   // reason for the status
  std::optional<Translation> translation; // a witness translation when one was found
};

/// One tested algebra with its filter lattice and operator properties.
struct AlgebraFindings {
  std::size_t index;
  std::size_t filters = 0;
  bool skipped = false;  // filter lattice over budget
  std::array<PropertyCheck, 6> checks;  // injective, order-reflecting, c.o.r.; full then almost
};

struct HierarchyReport {
  std::string logic;
  ClassifyBounds bounds;
  std::size_t family_size = 0;
  std::array<LevelResult, kNumLevels> levels;
  TriStateVerdict theorems;
  std::vector<ModelEntry> modstar;  // reduced models found on the family
  std::vector<AlgebraFindings> algebras;
  std::optional<SynthesisResult> equational_synthesis;  // m = 0 on a Mod* member or family
  std::optional<std::size_t> equational_member;        // Mod* index of that member
  std::optional<SynthesisResult> parametrized_synthesis;  // m = params, almost
  std::optional<Term> protodisjunction;
  std::optional<Term> protoconjunction;
  ProtoalgebraResult protoalgebraic;
  std::vector<std::string> hints;  // consequences of user assumptions, never verdicts
  std::vector<std::string> notes;

  LevelResult const& operator[](Level l) const { return levels[static_cast<std::size_t>(l)]; }
  LevelResult& operator[](Level l) { return levels[static_cast<std::size_t>(l)]; }
};

namespace detail {

// Arrows of the hierarchy as (stronger, weaker).
inline constexpr std::array<std::pair<Level, Level>, 10> kArrows{{
    {Level::equational, Level::parametrized},
    {Level::parametrized, Level::equational},
    {Level::equational, Level::almost_parametrized},
    {Level::equational, Level::small},
    {Level::almost_parametrized, Level::almost_small},
    {Level::small, Level::almost_small},
    {Level::small, Level::implicit},
    {Level::almost_small, Level::almost_implicit},
    {Level::implicit, Level::almost_implicit},
    {Level::parametrized, Level::almost_parametrized},
}};

inline void refute(HierarchyReport& r, Level l, std::string why) {
  auto& lr = r[l];
  if (lr.status != Status::refuted_definitive) {
    lr.status = Status::refuted_definitive;
    lr.evidence = std::move(why);
    lr.translation.reset();
  }
}

inline void support(HierarchyReport& r, Level l, std::string why,
                    std::optional<Translation> tau = std::nullopt) {
  auto& lr = r[l];
  if (lr.status == Status::unknown_at_bounds) {
    lr.status = Status::holds_on_tested_family;
    lr.evidence = std::move(why);
    lr.translation = std::move(tau);
  }
}

/// Refutations flow to stronger levels, support flows to weaker ones.
inline void enforce_monotonicity(HierarchyReport& r) {
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [strong, weak] : kArrows) {
      if (r[weak].status == Status::refuted_definitive &&
          r[strong].status != Status::refuted_definitive) {
        refute(r, strong, std::string("implies ") + to_string(weak) + ", which is refuted");
        changed = true;
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [strong, weak] : kArrows) {
      auto const s = r[strong].status;
      if ((s == Status::holds_on_tested_family || s == Status::holds_definitive) &&
          r[weak].status == Status::unknown_at_bounds) {
        support(r, weak, std::string("implied by ") + to_string(strong),
                r[strong].translation);
        changed = true;
      }
    }
  }
}

inline bool non_almost_trivial(ModelEntry const& e) { return !e.almost_trivial; }

}  // namespace detail

/// Places a logic in the extended Leibniz hierarchy as far as the tested
/// family allows.
///
/// A failed operator property on any tested algebra refutes its level
/// outright, as do a truth-set check failing on genuine reduced models, an
/// exhaustive synthesis failure on some reduced models, and the absence of
/// theorems (for the equational levels). Successes only count as evidence on
/// the tested family. Protoalgebraicity is definitive both ways when a
/// witness is found.
inline HierarchyReport classify(LogicPresentation const& p,
                                std::vector<FiniteAlgebra> const& family,
                                ClassifyBounds const& bounds = {},
                                Assumptions const& assume = {}) {
  HierarchyReport r;
  r.logic = p.name;
  r.bounds = bounds;
  r.family_size = family.size();
  for (std::size_t i = 0; i < kNumLevels; ++i) {
    r.levels[i].level = static_cast<Level>(i);
    r.levels[i].evidence = "no decisive evidence within the bounds";
  }
  if (auto bad = first_unsound_rule(p)) {
    throw Error("rule " + std::to_string(bad->first) + " of '" + p.name +
                "' fails in presenting matrix " + std::to_string(bad->second));
  }

  // Theorems.
  r.theorems = has_theorems(p, bounds.free_budget, bounds.depth);
  if (r.theorems.verdict == Verdict::refuted) {
    detail::refute(r, Level::equational, "no theorems: " + r.theorems.detail);
    detail::refute(r, Level::parametrized, "no theorems: " + r.theorems.detail);
  }

  // Operator profiles and reduced models.
  static constexpr std::array<Level, 6> kPropertyLevel{
      Level::implicit, Level::small,           Level::equational,
      Level::almost_implicit, Level::almost_small, Level::almost_parametrized};
  static constexpr std::array<char const*, 6> kPropertyName{
      "injective", "order-reflecting", "completely order-reflecting",
      "almost injective", "almost order-reflecting", "almost completely order-reflecting"};
  std::vector<FilterLattice const*> lattices(family.size(), nullptr);
  std::vector<std::optional<OperatorProfile>> profiles(family.size());
  if (p.has_calculus()) {
    auto const& calc = *p.calculus;
    r.algebras.resize(family.size());
    std::vector<std::vector<ModelEntry>> models(family.size());
    parallel_for(family.size(), bounds.jobs, [&](std::size_t i) {
      auto& f = r.algebras[i];
      f.index = i;
      try {
        profiles[i] = operator_profile(calc, family[i], bounds.filter_budget);
      } catch (BudgetExceeded const&) {
        f.skipped = true;
        return;
      }
      auto const& prof = *profiles[i];
      f.filters = prof.size();
      for (int almost = 0; almost < 2; ++almost) {
        f.checks[3 * almost + 0] = check_injective(prof, almost);
        f.checks[3 * almost + 1] = check_order_reflecting(prof, almost);
        f.checks[3 * almost + 2] = check_completely_order_reflecting(prof, almost);
      }
      for (auto const& row : prof.rows) {
        if (row.leibniz.is_identity()) {
          models[i].push_back({i, Matrix(family[i], row.filter), row.filter.empty()});
        }
      }
    });
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (profiles[i]) {
        lattices[i] = &profiles[i]->lattice;
      }
      for (auto& m : models[i]) {
        r.modstar.push_back(std::move(m));
      }
    }
    bool all_hold[6] = {true, true, true, true, true, true};
    std::size_t tested = 0;
    for (auto const& f : r.algebras) {
      if (f.skipped) {
        r.notes.push_back("algebra " + std::to_string(f.index) +
                          " skipped: filter lattice over budget");
        continue;
      }
      ++tested;
      for (std::size_t k = 0; k < 6; ++k) {
        if (!f.checks[k]) {
          all_hold[k] = false;
          detail::refute(r, kPropertyLevel[k],
                         std::string("Leibniz operator not ") + kPropertyName[k] +
                             " on algebra " + std::to_string(f.index) + ": " +
                             f.checks[k].detail);
          if (k == 2) {
            detail::refute(r, Level::parametrized,
                           std::string("Leibniz operator not ") + kPropertyName[k] +
                               " on algebra " + std::to_string(f.index) + ": " +
                               f.checks[k].detail);
          }
        }
      }
    }

    // Truth-set checks on the reduced models found.
    for (int almost = 0; almost < 2; ++almost) {
      auto imp = check_truth_implicit(r.modstar, almost);
      auto sm = check_truth_small(r.modstar, lattices, almost);
      Level const li = almost ? Level::almost_implicit : Level::implicit;
      Level const ls = almost ? Level::almost_small : Level::small;
      if (!imp) {
        detail::refute(r, li, "reduced models: " + imp.detail);
      }
      if (!sm) {
        detail::refute(r, ls, "reduced models: " + sm.detail);
      }
      if (tested > 0 && imp && all_hold[3 * almost]) {
        detail::support(r, li,
                        std::string(almost ? "almost " : "") +
                            "injective and truth determined by the algebra on " +
                            std::to_string(tested) + " tested algebras");
      }
      if (tested > 0 && sm && all_hold[3 * almost + 1]) {
        detail::support(r, ls,
                        std::string(almost ? "almost " : "") +
                            "order-reflecting and truth sets least nonempty filters on " +
                            std::to_string(tested) + " tested algebras");
      }
    }
  } else {
    // Without a calculus the reductions of the presenting matrices are the
    // reduced models at hand.
    for (std::size_t i = 0; i < p.matrices.size(); ++i) {
      auto red = reduce_matrix(p.matrices[i]).matrix;
      r.modstar.push_back({i, red, red.almost_trivial()});
    }
    r.notes.push_back("no calculus: filter-dependent checks skipped; reduced models are the "
                      "reductions of the presenting matrices");
  }

  // Equational synthesis, m = 0, on single reduced models then on all.
  SynthesisOptions eq_opt;
  eq_opt.mode = SynthesisMode::exact;
  eq_opt.depth = bounds.depth;
  eq_opt.free_budget = bounds.free_budget;
  eq_opt.term_budget = bounds.term_budget;
  eq_opt.calculus = p.has_calculus() ? &*p.calculus : nullptr;
  auto synth = [&](std::vector<Matrix> const& fam, std::size_t m,
                   SynthesisOptions const& opt) -> std::optional<SynthesisResult> {
    try {
      return synthesize_translation(fam, m, opt);
    } catch (BudgetExceeded const& e) {
      r.notes.push_back("synthesis with " + std::to_string(m) +
                        " parameters over budget: " + e.what());
      return std::nullopt;
    }
  };
  {
    std::vector<std::size_t> order(r.modstar.size());
    std::iota(order.begin(), order.end(), 0);
    // larger algebras first: they are the likeliest to defeat synthesis
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return r.modstar[a].matrix.algebra.size() > r.modstar[b].matrix.algebra.size();
    });
    for (auto i : order) {
      auto found = synth({r.modstar[i].matrix}, 0, eq_opt);
      if (!found) {
        continue;
      }
      auto& res = *found;
      if (!res.translation && res.definitive) {
        r.equational_member = i;
        detail::refute(r, Level::equational,
                       "no equation in x defines truth in the reduced model on algebra " +
                           std::to_string(r.modstar[i].algebra_index) + " with truth set " +
                           r.modstar[i].matrix.render() + " (" + std::to_string(res.functions) +
                           " unary term functions, exhaustive)");
        r.equational_synthesis = std::move(res);
        break;
      }
    }
    if (!r.equational_member && !r.modstar.empty()) {
      std::vector<Matrix> all;
      for (auto const& e : r.modstar) {
        all.push_back(e.matrix);
      }
      auto found = synth(all, 0, eq_opt);
      if (found && found->translation) {
        detail::support(r, Level::equational,
                        "defines truth in all " + std::to_string(all.size()) +
                            " reduced models found",
                        found->translation);
      } else if (found && found->definitive) {
        detail::refute(r, Level::equational,
                       "no equation in x defines truth in the reduced models found");
      }
      r.equational_synthesis = std::move(found);
    }
  }
  if (r.theorems.verdict == Verdict::derived &&
      r[Level::equational].status == Status::refuted_definitive) {
    detail::refute(r, Level::almost_parametrized,
                   "the logic has theorems, so almost-parametrized would give equational, "
                   "which is refuted");
  }

  // Almost-parametrized synthesis on the non-almost-trivial reduced models.
  {
    std::vector<Matrix> fam;
    for (auto const& e : r.modstar) {
      if (detail::non_almost_trivial(e)) {
        fam.push_back(e.matrix);
      }
    }
    if (!fam.empty()) {
      SynthesisOptions opt = eq_opt;
      opt.almost = true;
      std::optional<SynthesisResult> best;
      for (std::size_t m = 0; m <= bounds.params; ++m) {
        auto res = synth(fam, m, opt);
        if (!res) {
          break;
        }
        bool const found = res->translation.has_value();
        best = std::move(res);
        if (found) {
          break;
        }
      }
      if (best && best->translation) {
        detail::support(r, Level::almost_parametrized,
                        "almost defines truth in the " + std::to_string(fam.size()) +
                            " non-almost-trivial reduced models found",
                        best->translation);
      }
      r.parametrized_synthesis = std::move(best);
    }
  }

  // Protoalgebraicity and the protoconnectives.
  auto db = bounds.detection();
  try {
    r.protoalgebraic = detect_protoalgebraic(p, family, db);
  } catch (BudgetExceeded const& e) {
    r.protoalgebraic.verdict = TriStateVerdict::unknown(e.what());
  }
  if (r.protoalgebraic.verdict.verdict == Verdict::refuted) {
    detail::refute(r, Level::protoalgebraic, r.protoalgebraic.verdict.detail);
  } else if (r.protoalgebraic.verdict.verdict == Verdict::derived) {
    auto& lr = r[Level::protoalgebraic];
    lr.status = Status::holds_definitive;
    lr.evidence = r.protoalgebraic.verdict.detail;
  } else {
    r[Level::protoalgebraic].evidence = r.protoalgebraic.verdict.detail;
  }
  try {
    r.protodisjunction = detect_protodisjunction(p, db);
    r.protoconjunction = detect_protoconjunction(p, db);
  } catch (BudgetExceeded const& e) {
    r.notes.push_back(std::string("protoconnective search over budget: ") + e.what());
  }

  if (assume.fregean) {
    auto const& sig = p.signature;
    Term const x = Term::var(0), y1 = Term::var(1);
    std::vector<Term> sub{x, y1};
    if (r.protodisjunction) {
      Translation tau(1, {{r.protodisjunction->substitute(sub), x}});
      r.hints.push_back("Fregean with a protodisjunction: expect " + render(tau, sig) +
                        " to almost define truth");
    }
    if (r.protoconjunction) {
      Translation tau(1, {{r.protoconjunction->substitute(sub), y1}});
      r.hints.push_back("Fregean with a protoconjunction: expect " + render(tau, sig) +
                        " to almost define truth");
    }
    if (r.theorems.verdict == Verdict::derived) {
      r.hints.push_back("Fregean with theorems: expect truth to be equationally definable");
    }
  }

  detail::enforce_monotonicity(r);
  return r;
}

}  // namespace lbw
