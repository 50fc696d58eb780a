#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "lbw/congruence/reduction.hpp"
#include "lbw/kernel/enumerate.hpp"
#include "lbw/kernel/isomorphism.hpp"
#include "lbw/logic/consequence.hpp"
#include "lbw/logic/derivability.hpp"
#include "lbw/logic/filters.hpp"
#include "lbw/logic/models.hpp"

using namespace lbw;
using namespace fx;

namespace {

// Oracle for filter lattices: every subset that is closed under every rule
// instance, by direct evaluation of the rules over all assignments.
std::vector<ElemSet> closed_subsets(HilbertCalculus const& calc, FiniteAlgebra const& a) {
  std::vector<ElemSet> out;
  std::size_t const n = a.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    ElemSet f(n);
    for (Elem i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        f.insert(i);
      }
    }
    Matrix m(a, f);
    bool ok = true;
    for (auto const& r : calc.rules()) {
      ok = ok && rule_valid(m, r);
    }
    if (ok) {
      out.push_back(f);
    }
  }
  return out;
}

std::set<std::vector<Elem>> as_sets(std::vector<ElemSet> const& v) {
  std::set<std::vector<Elem>> out;
  for (auto const& s : v) {
    out.insert(s.elements());
  }
  return out;
}

}  // namespace

TEST(Calculus, CanonicalRenamingRemovesDuplicates) {
  HilbertCalculus c(meet_sig(), {Rule{{meet(y(), z())}, y()}, Rule{{meet(x(), y())}, x()}});
  ASSERT_EQ(c.rules().size(), 1u);
  EXPECT_EQ(render(c.rules()[0], meet_sig()), "meet(x,y) |- x");
  EXPECT_EQ(render(box_calculus().rules()[0], box_sig()), "|- one");
  EXPECT_THROW(HilbertCalculus(meet_sig(), {Rule{{}, box(x())}}), Error);
}

TEST(Consequence, RuleValidity) {
  Matrix two(meet2(), set(2, {1}));
  EXPECT_TRUE(rule_valid(two, Rule{{x(), y()}, meet(x(), y())}));
  Matrix m4(a4(), set(4, {e1, ea}));
  EXPECT_TRUE(rule_valid(m4, Rule{{box(box(x()))}, y()}));
  EXPECT_FALSE(rule_valid(m4, Rule{{x()}, box(x())}));
}

TEST(Consequence, MatrixConsequence) {
  std::vector<Matrix> two{Matrix(meet2(), set(2, {1}))};
  EXPECT_TRUE(matrix_consequence(two, std::vector<Term>{meet(x(), y())}, x()));
  std::vector<Matrix> j{Matrix(join2(), set(2, {1}))};
  EXPECT_FALSE(matrix_consequence(j, std::vector<Term>{}, join1(x(), y())));
  EXPECT_TRUE(matrix_consequence(j, std::vector<Term>{x()}, join1(x(), y())));
}

TEST(Filters, GenerationExamples) {
  EXPECT_EQ(filter_generate(cpc_and(), meet2(), set(2, {0})), set(2, {0, 1}));
  EXPECT_EQ(filter_generate(box_calculus(), a4(), ElemSet(4)), set(4, {e1, ea}));
  EXPECT_EQ(filter_generate(box_calculus(), a4(), ElemSet::full(4)), ElemSet::full(4));
  EXPECT_FALSE(is_filter(box_calculus(), a4(), set(4, {e1, ea, eb})));
  EXPECT_TRUE(is_filter(box_calculus(), a4(), set(4, {e1, ea})));
  EXPECT_FALSE(is_filter(box_calculus(), a4(), ElemSet(4)));
}

TEST(Filters, LatticeExamples) {
  FilterLattice l2(cpc_and(), meet2());
  EXPECT_EQ(l2.render(), "{{},{1},{0,1}}");
  FilterLattice l4(box_calculus(), a4());
  EXPECT_EQ(l4.render(), "{{1,a},{1,a,c},{1,a,b,c}}");
  FilterLattice l1(box_calculus(), trivial_algebra(box_sig()));
  EXPECT_EQ(l1.size(), 1u);
  EXPECT_TRUE(l1[0].is_full());
}

TEST(Filters, LatticeMatchesSubsetOracleAndIsAClosureSystem) {
  std::vector<std::pair<HilbertCalculus, Signature>> cases = {
      {box_calculus(), box_sig()}, {cpc_and(), meet_sig()}, {cpc_or(), join_sig()}};
  for (auto const& [calc, sig] : cases) {
    for (std::size_t n = 1; n <= (sig.max_arity() == 2 ? 3u : 4u); ++n) {
      for (auto const& a : enumerate_algebras(sig, n, true)) {
        FilterLattice lat(calc, a);
        EXPECT_EQ(as_sets(lat.filters()), as_sets(closed_subsets(calc, a)));
        EXPECT_TRUE(lat.filters().back().is_full());
        EXPECT_EQ(lat.least().empty(), !calc.has_axiom());
        for (std::size_t i = 0; i < lat.size(); ++i) {
          for (std::size_t j = 0; j < lat.size(); ++j) {
            EXPECT_TRUE(lat.find(lat[i] & lat[j]).has_value());
            auto jn = lat[lat.join(i, j)];
            EXPECT_TRUE(lat[i].subset_of(jn) && lat[j].subset_of(jn));
          }
        }
      }
    }
  }
}

TEST(Filters, GenerationIsAClosureOperator) {
  auto calc = box_calculus();
  for (auto const& a : enumerate_algebras(box_sig(), 3, true)) {
    RuleInstances inst(calc, a);
    for (unsigned mask = 0; mask < 8; ++mask) {
      ElemSet x0(3);
      for (Elem i = 0; i < 3; ++i) {
        if (mask >> i & 1) {
          x0.insert(i);
        }
      }
      auto c = inst.closure(x0);
      EXPECT_TRUE(x0.subset_of(c));
      EXPECT_EQ(inst.closure(c), c);
      EXPECT_TRUE(inst.is_closed(c));
      for (unsigned sup = mask; sup < 8; sup = (sup + 1) | mask) {
        ElemSet s(3);
        for (Elem i = 0; i < 3; ++i) {
          if (sup >> i & 1) {
            s.insert(i);
          }
        }
        EXPECT_TRUE(c.subset_of(inst.closure(s)));
      }
    }
  }
}

// h^{-1}(G) is a filter of A for every homomorphism h: A -> B and filter G of B.
TEST(Filters, PreimagesOfFiltersAreFilters) {
  auto calc = box_calculus();
  auto family = enumerate_algebras_up_to(box_sig(), 3, true);
  std::size_t checked = 0;
  for (auto const& a : family) {
    for (auto const& b : family) {
      std::vector<std::size_t> idx(a.size(), 0);
      do {
        std::vector<Elem> h(idx.begin(), idx.end());
        bool hom = h[a.table(kOne)[0]] == b.table(kOne)[0];
        for (Elem e = 0; e < a.size() && hom; ++e) {
          hom = h[a.apply(kBox, {e})] == b.apply(kBox, {h[e]});
        }
        if (!hom) {
          continue;
        }
        FilterLattice lb(calc, b);
        for (auto const& g : lb.filters()) {
          ElemSet pre(a.size());
          for (Elem e = 0; e < a.size(); ++e) {
            if (g.contains(h[e])) {
              pre.insert(e);
            }
          }
          EXPECT_TRUE(is_filter(calc, a, pre));
          ++checked;
        }
      } while (next_tuple(idx, b.size()));
    }
  }
  EXPECT_GT(checked, 10u);
}

TEST(Theorems, HilbertPresentations) {
  LogicPresentation p{"box", box_sig(), box_calculus(), {}};
  auto v = has_theorems(p);
  EXPECT_EQ(v.verdict, Verdict::derived);
  EXPECT_EQ(v.detail, "axiom |- one");
  LogicPresentation empty{"empty", meet_sig(), HilbertCalculus(meet_sig(), {}), {}};
  auto r = has_theorems(empty);
  ASSERT_EQ(r.verdict, Verdict::refuted);
  EXPECT_TRUE(check_theorem_free_witness(*r.countermodel));
  EXPECT_EQ(has_theorems({"and", meet_sig(), cpc_and(), {}}).verdict, Verdict::refuted);
}

TEST(Theorems, MatrixPresentations) {
  // <2,{1}> over meet: {0} is a subuniverse outside the designated set.
  LogicPresentation and2{"and2", meet_sig(), std::nullopt, {Matrix(meet2(), set(2, {1}))}};
  auto r = has_theorems(and2);
  ASSERT_EQ(r.verdict, Verdict::refuted);
  EXPECT_TRUE(check_theorem_free_witness(*r.countermodel));
  LogicPresentation boxm{"box", box_sig(), std::nullopt, {Matrix(a4(), set(4, {e1, ea}))}};
  auto d = has_theorems(boxm);
  ASSERT_EQ(d.verdict, Verdict::derived);
  EXPECT_EQ(d.detail, "theorem one");
}

TEST(Theorems, EmptyFilterIffNoTheorems) {
  for (auto const& [calc, sig] : std::vector<std::pair<HilbertCalculus, Signature>>{
           {box_calculus(), box_sig()}, {cpc_and(), meet_sig()}, {cpc_or(), join_sig()}}) {
    auto v = has_theorems({"l", sig, calc, {}});
    for (auto const& a : enumerate_algebras_up_to(sig, 2, true)) {
      EXPECT_EQ(is_filter(calc, a, ElemSet(a.size())), v.verdict == Verdict::refuted);
    }
  }
}

TEST(Derivable, Examples) {
  auto calc = box_calculus();
  std::vector<Term> gamma{box(box(x()))};
  auto d = derivable(calc, gamma, y());
  ASSERT_EQ(d.verdict, Verdict::derived);
  EXPECT_TRUE(check_proof(calc, gamma, d.proof, y()));
  EXPECT_EQ(d.proof.size(), 2u);

  auto r = derivable(cpc_and(), {}, x());
  ASSERT_EQ(r.verdict, Verdict::refuted);
  ASSERT_TRUE(r.countermodel);
  EXPECT_TRUE(check_countermodel(cpc_and(), {}, x(), *r.countermodel));
  EXPECT_TRUE(find_matrix_isomorphism(r.countermodel->matrix, Matrix(meet2(), set(2, {1}))));
  EXPECT_EQ(r.countermodel->assignment, std::vector<Elem>{0});

  EXPECT_EQ(derivable(calc, gamma, y(), DerivationBudget::zero()).verdict, Verdict::unknown);
  EXPECT_EQ(derivable(calc, gamma, gamma[0], DerivationBudget::zero()).verdict, Verdict::derived);
}

TEST(Derivable, ProofsAreSoundInEveryModel) {
  auto calc = cpc_and();
  using Query = std::pair<std::vector<Term>, Term>;
  std::vector<Query> queries;
  queries.emplace_back(std::vector<Term>{meet(x(), y())}, meet(y(), x()));
  queries.emplace_back(std::vector<Term>{x(), y()}, meet(y(), x()));
  queries.emplace_back(std::vector<Term>{meet(x(), meet(y(), z()))}, meet(meet(x(), y()), z()));
  queries.emplace_back(std::vector<Term>{x()}, meet(x(), x()));
  queries.emplace_back(std::vector<Term>{x()}, y());
  queries.emplace_back(std::vector<Term>{meet(x(), y())}, z());
  auto models = enumerate_algebras_up_to(meet_sig(), 3, true);
  for (auto const& [gamma, phi] : queries) {
    auto v = derivable(calc, gamma, phi);
    EXPECT_NE(v.verdict, Verdict::unknown);
    if (v.verdict == Verdict::derived) {
      EXPECT_TRUE(check_proof(calc, gamma, v.proof, phi));
      for (auto const& a : models) {
        FilterLattice lat(calc, a);
        for (auto const& f : lat.filters()) {
          std::vector<Matrix> m{Matrix(a, f)};
          EXPECT_TRUE(matrix_consequence(m, gamma, phi));
        }
      }
    } else {
      EXPECT_TRUE(check_countermodel(calc, gamma, phi, *v.countermodel));
    }
  }
}

TEST(Models, ReducedModelsOfBoxLogic) {
  auto family = enumerate_algebras_up_to(box_sig(), 4, true);
  auto models = modstar(box_calculus(), family, 2);
  std::vector<Matrix> expected{Matrix(a4(), set(4, {e1, ea})), Matrix(a3(), set(3, {e1, ea})),
                               Matrix(trivial_algebra(box_sig()), ElemSet::full(1))};
  ASSERT_EQ(models.size(), expected.size());
  for (auto const& e : expected) {
    std::size_t hits = 0;
    for (auto const& m : models) {
      hits += find_matrix_isomorphism(m.matrix, e).has_value();
      EXPECT_TRUE(is_reduced(m.matrix));
    }
    EXPECT_EQ(hits, 1u);
  }
}

TEST(Models, ReducedModelsOfConjunction) {
  auto models = modstar(cpc_and(), enumerate_algebras_up_to(meet_sig(), 3, true));
  Matrix two(meet2(), set(2, {1}));
  Matrix triv(trivial_algebra(meet_sig()), ElemSet::full(1));
  for (auto const& m : models) {
    if (!m.almost_trivial) {
      EXPECT_TRUE(find_matrix_isomorphism(m.matrix, two) || find_matrix_isomorphism(m.matrix, triv));
    }
  }
  EXPECT_TRUE(modstar(cpc_and(), {}).empty());
}

TEST(Models, SuszkoReducedModels) {
  auto ms = modsuszko(cpc_and(), {meet2()});
  auto has = [&](ElemSet const& f) {
    return std::any_of(ms.begin(), ms.end(), [&](ModelEntry const& m) { return m.matrix.designated == f; });
  };
  EXPECT_TRUE(has(set(2, {1})));
  EXPECT_TRUE(has(ElemSet(2)));
  auto ms1 = modsuszko(box_calculus(), {trivial_algebra(box_sig())});
  ASSERT_EQ(ms1.size(), 1u);
  for (auto const& m : modsuszko(box_calculus(), enumerate_algebras_up_to(box_sig(), 3, true))) {
    EXPECT_TRUE(suszko(box_calculus(), m.matrix.algebra, m.matrix.designated).is_identity());
  }
}
