#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "lbw/congruence/congruence.hpp"
#include "lbw/congruence/reduction.hpp"
#include "lbw/congruence/suszko.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/kernel/enumerate.hpp"
#include "lbw/kernel/isomorphism.hpp"

using namespace lbw;
using namespace fx;

namespace {

FiniteAlgebra random_algebra(Signature const& sig, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<Elem> d(0, static_cast<Elem>(n - 1));
  std::vector<std::vector<Elem>> tables;
  for (auto const& s : sig) {
    std::vector<Elem> t(FiniteAlgebra::table_size(n, s.arity));
    for (auto& v : t) {
      v = d(rng);
    }
    tables.push_back(std::move(t));
  }
  return FiniteAlgebra(sig, n, std::move(tables));
}

ElemSet random_subset(std::size_t n, std::mt19937& rng) {
  ElemSet s(n);
  for (Elem i = 0; i < n; ++i) {
    if (rng() & 1) {
      s.insert(i);
    }
  }
  return s;
}

}  // namespace

TEST(Congruence, PrincipalAndLargestBelow) {
  auto a = a4();
  EXPECT_EQ(principal_congruence(a, e1, ea).render(a), "{{1,a,b},{c}}");
  EXPECT_TRUE(largest_congruence_below(a, Partition::from_blocks(4, {{e1, ea}, {eb, ec}}))
                  .is_identity());
  EXPECT_EQ(largest_congruence_below(a, Partition::from_blocks(4, {{e1, ea, ec}, {eb}})).render(a),
            "{{1,c},{a},{b}}");
  EXPECT_TRUE(largest_congruence_below(a, Partition::total(4)).is_total());
}

TEST(Congruence, CongruenceListOfBoxAlgebra) {
  auto cons = all_congruences(a4());
  for (auto const& c : cons) {
    EXPECT_TRUE(is_congruence(a4(), c));
  }
  EXPECT_EQ(cons.front(), Partition::total(4));
  EXPECT_EQ(cons.back(), Partition::identity(4));
  EXPECT_THROW(all_congruences(power(meet2(), 3)), BudgetExceeded);
}

TEST(Leibniz, Examples) {
  auto a = a4();
  EXPECT_TRUE(leibniz(a, set(4, {e1, ea})).is_identity());
  EXPECT_TRUE(leibniz(a, ElemSet(4)).is_total());
  EXPECT_EQ(leibniz(a, set(4, {e1, ea, ec})).render(a), "{{1,c},{a},{b}}");
  EXPECT_TRUE(leibniz_via_polynomials(a, set(4, {e1, ea})).is_identity());
  EXPECT_TRUE(leibniz_via_polynomials(meet2(), set(2, {1})).is_identity());
  EXPECT_TRUE(leibniz_via_polynomials(meet2(), set(2, {0, 1})).is_total());
}

TEST(Leibniz, ThreeRoutesAgreeOnRandomAlgebras) {
  std::mt19937 rng(2024);
  std::vector<Signature> sigs = {Signature({{"f", 2}}), Signature({{"g", 1}, {"c", 0}}),
                                 Signature({{"f", 2}, {"g", 1}}), box_sig()};
  for (int trial = 0; trial < 150; ++trial) {
    auto const& sig = sigs[trial % sigs.size()];
    std::size_t n = 1 + rng() % 4;
    auto a = random_algebra(sig, n, rng);
    auto f = random_subset(n, rng);
    auto omega = leibniz(a, f);
    EXPECT_TRUE(is_congruence(a, omega));
    EXPECT_TRUE(omega.compatible_with(f));
    EXPECT_EQ(omega, leibniz_via_polynomials(a, f));
    EXPECT_EQ(omega, leibniz_via_congruence_list(a, f));
  }
}

TEST(Congruence, AddingConstantsKeepsCongruences) {
  std::mt19937 rng(99);
  Signature sig({{"f", 2}});
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 4;
    auto a = random_algebra(sig, n, rng);
    auto base = all_congruences(a);
    for (Elem c = 0; c < n; ++c) {
      EXPECT_EQ(all_congruences(add_constant(a, "k", c)), base);
    }
  }
}

TEST(Quotient, BoxAlgebraByLeibniz) {
  auto a = a4();
  auto theta = Partition::from_blocks(4, {{e1, ec}, {ea}, {eb}});
  auto q = quotient(a, theta);
  EXPECT_EQ(q.algebra.size(), 3u);
  EXPECT_TRUE(find_isomorphism(q.algebra, a3()));
  EXPECT_THROW(quotient(a, Partition::from_blocks(4, {{e1, ea}, {eb}, {ec}})), Error);
  EXPECT_EQ(quotient(a, Partition::total(4)).algebra.size(), 1u);
  EXPECT_TRUE(find_isomorphism(quotient(a, Partition::identity(4)).algebra, a));
}

TEST(Quotient, BlockMapIsASurjectiveHomomorphism) {
  std::mt19937 rng(8);
  Signature sig({{"f", 2}, {"g", 1}});
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trial % 4;
    auto a = random_algebra(sig, n, rng);
    for (auto const& theta : all_congruences(a)) {
      auto q = quotient(a, theta);
      std::vector<bool> hit(q.algebra.size(), false);
      for (Elem x0 = 0; x0 < n; ++x0) {
        hit[q.block_map[x0]] = true;
        EXPECT_EQ(q.block_map[a.apply(1, {x0})], q.algebra.apply(1, {q.block_map[x0]}));
        for (Elem y0 = 0; y0 < n; ++y0) {
          EXPECT_EQ(q.block_map[a.apply(0, {x0, y0})],
                    q.algebra.apply(0, {q.block_map[x0], q.block_map[y0]}));
        }
      }
      EXPECT_TRUE(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    }
  }
}

TEST(Reduction, Examples) {
  auto r = reduce_matrix(Matrix(a4(), set(4, {e1, ea, ec})));
  EXPECT_TRUE(is_reduced(r.matrix));
  EXPECT_TRUE(find_matrix_isomorphism(r.matrix, Matrix(a3(), set(3, {e1, ea}))));
  Matrix m3(a3(), set(3, {e1, ea}));
  EXPECT_TRUE(find_matrix_isomorphism(reduce_matrix(m3).matrix, m3));
  auto r0 = reduce_matrix(Matrix(a4(), ElemSet(4)));
  EXPECT_EQ(r0.matrix.algebra.size(), 1u);
  EXPECT_TRUE(r0.matrix.almost_trivial());
}

TEST(Suszko, BoxLogicExamples) {
  auto calc = box_calculus();
  auto a = a4();
  FilterLattice lat(calc, a);
  for (auto m : {SuszkoMethod::definition, SuszkoMethod::polynomial}) {
    EXPECT_TRUE(suszko(lat, set(4, {e1, ea}), m).is_identity());
    EXPECT_EQ(suszko(lat, set(4, {e1, ea, ec}), m).render(a), "{{1,c},{a},{b}}");
    EXPECT_TRUE(suszko(lat, a.universe_set(), m).is_total());
  }
}

TEST(Suszko, BelowLeibnizMonotoneAndMethodsAgree) {
  std::mt19937 rng(4);
  std::vector<std::pair<HilbertCalculus, std::vector<FiniteAlgebra>>> cases;
  cases.push_back({box_calculus(), enumerate_algebras_up_to(box_sig(), 3, true)});
  cases.push_back({cpc_and(), enumerate_algebras_up_to(meet_sig(), 3, true)});
  cases.push_back({cpc_or(), enumerate_algebras_up_to(join_sig(), 3, true)});
  for (auto const& [calc, family] : cases) {
    for (auto const& a : family) {
      FilterLattice lat(calc, a);
      for (auto const& f : lat.filters()) {
        auto s = suszko_by_definition(lat, f);
        EXPECT_EQ(s, suszko_by_polynomials(lat, f));
        EXPECT_TRUE(s.refines(leibniz(a, f)));
        for (auto const& g : lat.filters()) {
          if (f.subset_of(g)) {
            EXPECT_TRUE(s.refines(suszko_by_definition(lat, g)));
          }
        }
      }
    }
  }
}
