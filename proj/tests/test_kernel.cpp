#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "lbw/kernel/closure.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/kernel/enumerate.hpp"
#include "lbw/kernel/isomorphism.hpp"
#include "lbw/kernel/partition.hpp"
#include "lbw/kernel/polynomials.hpp"

using namespace lbw;
using namespace fx;

namespace {

// Brute-force canonical key: least serialization of all tables over every
// relabelling of the universe. Written independently of canonical_form.
std::vector<Elem> brute_canonical_key(FiniteAlgebra const& a) {
  std::size_t const n = a.size();
  std::vector<Elem> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Elem> best;
  do {
    std::vector<Elem> inv(n);
    for (Elem i = 0; i < n; ++i) {
      inv[perm[i]] = i;
    }
    std::vector<Elem> key;
    auto const& sig = a.signature();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      std::size_t k = sig.arity(op);
      std::vector<std::size_t> idx(k, 0);
      std::vector<Elem> args(k);
      do {
        for (std::size_t i = 0; i < k; ++i) {
          args[i] = inv[idx[i]];
        }
        key.push_back(perm[a.apply(op, args)]);
      } while (next_tuple(idx, n));
    }
    if (best.empty() || key < best) {
      best = key;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

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

}  // namespace

TEST(Term, EvaluatesMeetBoxAndConstants) {
  std::vector<Elem> env{1, 0};
  EXPECT_EQ(eval_term(meet(x(), y()), meet2(), env), 0u);
  std::vector<Elem> envc{ec};
  EXPECT_EQ(eval_term(box(box(x())), a4(), envc), eb);
  EXPECT_EQ(eval_term(one(), a4(), std::vector<Elem>{}), e1);
}

TEST(Term, EvaluationErrors) {
  EXPECT_THROW(eval_term(meet(x(), y()), meet2(), std::vector<Elem>{1}), Error);
  EXPECT_THROW(eval_term(op(5), meet2(), std::vector<Elem>{}), Error);
}

TEST(Term, RenderAndDepth) {
  auto sig = box_sig();
  EXPECT_EQ(render(box(box(x())), sig), "box(box(x))");
  EXPECT_EQ(render(one(), sig), "one");
  EXPECT_EQ(one().depth(), 0u);
  EXPECT_EQ(box(one()).depth(), 1u);
  EXPECT_EQ(meet(x(), meet(y(), z())).vars(), (std::set<std::size_t>{0, 1, 2}));
}

TEST(Term, EvaluationRespectsSubstitution) {
  std::mt19937 rng(7);
  auto sig = lattice_sig();
  auto terms = generate_terms(sig, 2, 2, 10'000);
  auto l = chain_lattice(3);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  std::uniform_int_distribution<Elem> el(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    auto const& t = terms[pick(rng)];
    std::vector<Term> sigma{terms[pick(rng)], terms[pick(rng)]};
    std::vector<Elem> env{el(rng), el(rng)};
    std::vector<Elem> composed{eval_term(sigma[0], l, env), eval_term(sigma[1], l, env)};
    EXPECT_EQ(eval_term(t.substitute(sigma), l, env), eval_term(t, l, composed));
  }
}

TEST(Term, GenerationIsBreadthFirstAndDuplicateFree) {
  auto terms = generate_terms(box_sig(), 1, 2, 100);
  std::vector<std::string> shown;
  for (auto const& t : terms) {
    shown.push_back(render(t, box_sig()));
  }
  EXPECT_EQ(shown, (std::vector<std::string>{"x", "box(x)", "one", "box(box(x))", "box(one)"}));
  EXPECT_THROW(generate_terms(lattice_sig(), 2, 3, 50), BudgetExceeded);
}

TEST(Subalgebra, GeneratedSubuniverses) {
  auto a = a4();
  EXPECT_EQ(subalgebra_generate(a, set(4, {e1})), set(4, {e1, ea, eb}));
  EXPECT_EQ(subalgebra_generate(a, ElemSet(4)), set(4, {e1, ea, eb}));
  EXPECT_EQ(subalgebra_generate(meet2(), set(2, {0})), set(2, {0}));
}

TEST(Subalgebra, GenerationIsAClosureOperator) {
  std::mt19937 rng(11);
  Signature sig({{"f", 2}, {"g", 1}});
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trial % 4;
    auto a = random_algebra(sig, n, rng);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      ElemSet x(n);
      for (Elem i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          x.insert(i);
        }
      }
      auto cx = subalgebra_generate(a, x);
      EXPECT_TRUE(x.subset_of(cx));
      EXPECT_EQ(subalgebra_generate(a, cx), cx);
      for (unsigned sup = mask; sup < (1u << n); sup = (sup + 1) | mask) {
        ElemSet s(n);
        for (Elem i = 0; i < n; ++i) {
          if (sup >> i & 1) {
            s.insert(i);
          }
        }
        EXPECT_TRUE(cx.subset_of(subalgebra_generate(a, s)));
      }
    }
  }
}

TEST(Product, EmptyBinaryAndPower) {
  auto triv = product(meet_sig(), {});
  EXPECT_EQ(triv.size(), 1u);
  auto sq = product(meet_sig(), {meet2(), meet2()});
  ASSERT_EQ(sq.size(), 4u);
  for (Elem p = 0; p < 4; ++p) {
    for (Elem q = 0; q < 4; ++q) {
      Elem r = sq.apply(0, {p, q});
      // first factor slowest
      EXPECT_EQ(r / 2, std::min(p / 2, q / 2));
      EXPECT_EQ(r % 2, std::min(p % 2, q % 2));
    }
  }
  EXPECT_EQ(power(a4(), 2).size(), 16u);
  EXPECT_THROW(product(meet_sig(), {meet2(), a4()}), Error);
}

TEST(Polynomials, SemilatticeAndBoxAlgebra) {
  auto polys = unary_polynomials(meet2());
  std::set<UnaryMap> got(polys.begin(), polys.end());
  EXPECT_EQ(got, (std::set<UnaryMap>{{0, 1}, {0, 0}, {1, 1}}));
  EXPECT_EQ(unary_polynomials(trivial_algebra(box_sig())).size(), 1u);
  auto a4p = unary_polynomials(a4());
  EXPECT_NE(std::find(a4p.begin(), a4p.end(), UnaryMap{eb, eb, eb, eb}), a4p.end());
}

TEST(Polynomials, ClosedUnderCompositionWithIdentityAndConstants) {
  std::mt19937 rng(3);
  Signature sig({{"f", 2}, {"c", 0}});
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 4;
    auto a = random_algebra(sig, n, rng);
    auto polys = unary_polynomials(a);
    std::set<UnaryMap> s(polys.begin(), polys.end());
    UnaryMap id(n);
    std::iota(id.begin(), id.end(), 0);
    EXPECT_TRUE(s.count(id));
    for (Elem c = 0; c < n; ++c) {
      EXPECT_TRUE(s.count(UnaryMap(n, c)));
    }
    for (auto const& p : polys) {
      for (auto const& q : polys) {
        UnaryMap pq(n);
        for (Elem i = 0; i < n; ++i) {
          pq[i] = p[q[i]];
        }
        EXPECT_TRUE(s.count(pq));
      }
    }
  }
}

TEST(FreeAlgebra, OneGeneratedOverBoxAlgebra) {
  auto fa = free_term_functions(box_sig(), {a4()}, 1);
  ASSERT_EQ(fa.size(), 5u);
  std::set<std::string> names;
  for (auto const& t : fa.witnesses) {
    names.insert(render(t, box_sig()));
  }
  EXPECT_EQ(names, (std::set<std::string>{"x", "box(x)", "box(box(x))", "one", "box(one)"}));
}

TEST(FreeAlgebra, Semilattice) {
  EXPECT_EQ(free_term_functions(meet_sig(), {meet2()}, 1).size(), 1u);
  auto fa = free_term_functions(meet_sig(), {meet2()}, 2);
  ASSERT_EQ(fa.size(), 3u);
  std::set<std::string> names;
  for (auto const& t : fa.witnesses) {
    names.insert(render(t, meet_sig()));
  }
  EXPECT_EQ(names, (std::set<std::string>{"x", "y", "meet(x,y)"}));
}

TEST(FreeAlgebra, BudgetReportsPartialSize) {
  EXPECT_THROW(free_term_functions(lattice_sig(), {chain_lattice(4)}, 2, 20), BudgetExceeded);
}

// The free algebra must equal the set of term functions reached by depth
// enumeration once that enumeration stops producing new functions. Terms
// are generated round by round; each round keeps one term per new function
// so the enumeration stays finite.
TEST(FreeAlgebra, MatchesSaturatedTermEnumeration) {
  std::mt19937 rng(5);
  std::vector<std::pair<Signature, std::vector<std::size_t>>> cases = {
      {box_sig(), {4}}, {box_sig(), {2, 3}}, {meet_sig(), {3}}, {lattice_sig(), {2, 2}},
      {Signature({{"f", 2}}), {2}}, {Signature({{"g", 1}, {"c", 0}}), {5}}};
  for (auto const& [sig, sizes] : cases) {
    for (std::size_t k = 1; k <= 2; ++k) {
      std::vector<FiniteAlgebra> fam;
      for (auto n : sizes) {
        fam.push_back(random_algebra(sig, n, rng));
      }
      auto fa = free_term_functions(sig, fam, k);
      auto function_of = [&](Term const& t) {
        std::vector<Elem> v;
        for (auto const& a : fam) {
          auto tf = term_function(t, a, k);
          v.insert(v.end(), tf.begin(), tf.end());
        }
        return v;
      };
      std::map<std::vector<Elem>, Term> seen;
      std::vector<Term> reps;
      for (std::size_t v = 0; v < k; ++v) {
        if (seen.emplace(function_of(Term::var(v)), Term::var(v)).second) {
          reps.push_back(Term::var(v));
        }
      }
      for (std::size_t round = 0;; ++round) {
        ASSERT_LT(round, 40u);
        std::vector<Term> fresh;
        for (std::size_t o = 0; o < sig.size(); ++o) {
          std::vector<std::size_t> idx(sig.arity(o), 0);
          do {
            std::vector<Term> args;
            for (auto i : idx) {
              args.push_back(reps[i]);
            }
            Term t = Term::app(o, args);
            if (seen.emplace(function_of(t), t).second) {
              fresh.push_back(t);
            }
          } while (next_tuple(idx, reps.size()));
        }
        if (fresh.empty()) {
          break;
        }
        reps.insert(reps.end(), fresh.begin(), fresh.end());
      }
      std::set<std::vector<Elem>> expected(fa.functions.begin(), fa.functions.end());
      std::set<std::vector<Elem>> got;
      for (auto const& [f, t] : seen) {
        got.insert(f);
      }
      EXPECT_EQ(got, expected);
      for (std::size_t e = 0; e < fa.size(); ++e) {
        EXPECT_EQ(function_of(fa.witnesses[e]), fa.functions[e]);
      }
    }
  }
}

// For unary signatures plain depth enumeration saturates quickly; it must
// reach exactly the free algebra.
TEST(FreeAlgebra, MatchesPlainDepthEnumerationForUnarySignatures) {
  std::mt19937 rng(6);
  Signature sig({{"g", 1}, {"h", 1}, {"c", 0}});
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_algebra(sig, 2 + trial % 3, rng);
    auto fa = free_term_functions(sig, {a}, 1);
    std::set<std::vector<Elem>> expected(fa.functions.begin(), fa.functions.end());
    std::set<std::vector<Elem>> prev;
    for (std::size_t d = 0; d < 12; ++d) {
      std::set<std::vector<Elem>> cur;
      for (auto const& t : generate_terms(sig, 1, d, 1'000'000)) {
        cur.insert(term_function(t, a, 1));
      }
      if (cur == prev) {
        break;
      }
      prev = std::move(cur);
    }
    EXPECT_EQ(prev, expected);
  }
}

TEST(Enumerate, BoxSignatureCounts) {
  auto sig = box_sig();
  EXPECT_EQ(enumerate_algebras(sig, 1, false).size(), 1u);
  EXPECT_EQ(enumerate_algebras(sig, 2, false).size(), 8u);
  EXPECT_EQ(enumerate_algebras(sig, 2, true).size(), 4u);
  EXPECT_EQ(enumerate_algebras(sig, 3, false).size(), 81u);
  EXPECT_THROW(AlgebraEnumerator(lattice_sig(), 4, false), BudgetExceeded);
}

TEST(Enumerate, PruningKeepsExactlyOneRepresentativePerClass) {
  for (auto const& sig : {box_sig(), meet_sig(), Signature({{"g", 1}, {"h", 1}})}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      if (sig.max_arity() == 2 && n == 3) {
        continue;
      }
      auto raw = enumerate_algebras(sig, n, false);
      auto pruned = enumerate_algebras(sig, n, true);
      std::set<std::vector<Elem>> classes;
      for (auto const& a : raw) {
        classes.insert(brute_canonical_key(a));
      }
      EXPECT_EQ(pruned.size(), classes.size());
      for (auto const& a : raw) {
        std::size_t matches = 0;
        for (auto const& r : pruned) {
          matches += find_isomorphism(a, r).has_value();
        }
        EXPECT_EQ(matches, 1u);
      }
    }
  }
}

TEST(Isomorphism, MatrixExamples) {
  Matrix m3(a3(), set(3, {e1, ea}));
  EXPECT_TRUE(find_matrix_isomorphism(m3, m3).has_value());
  Matrix two1(meet2(), set(2, {1})), two01(meet2(), set(2, {0, 1}));
  EXPECT_FALSE(find_matrix_isomorphism(two1, two01));
  auto id = find_matrix_isomorphism(two1, two1);
  ASSERT_TRUE(id);
  EXPECT_EQ(*id, (std::vector<Elem>{0, 1}));
}

TEST(Isomorphism, FindsRelabelledCopies) {
  std::mt19937 rng(17);
  Signature sig({{"f", 2}, {"g", 1}});
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + trial % 5;
    auto a = random_algebra(sig, n, rng);
    std::vector<Elem> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto b = permute(a, perm);
    auto f = find_isomorphism(a, b);
    ASSERT_TRUE(f);
    EXPECT_EQ(canonical_form(a), canonical_form(b));
  }
}

TEST(Twist, TwoChainOperations) {
  auto t = twist_structure(chain_lattice(2));
  auto pr = [](Elem a1, Elem a2) { return static_cast<Elem>(a1 * 2 + a2); };
  auto const neg = *t.signature().find("neg");
  auto const conj = *t.signature().find("and");
  auto const oplus = *t.signature().find("oplus");
  EXPECT_EQ(t.apply(neg, {pr(0, 1)}), pr(1, 0));
  EXPECT_EQ(t.apply(conj, {pr(1, 0), pr(0, 1)}), pr(0, 1));
  EXPECT_EQ(t.apply(oplus, {pr(1, 0), pr(0, 1)}), pr(1, 1));
  EXPECT_EQ(t.name(pr(1, 0)), "1_0");
  Signature bad({{"f", 2}, {"g", 2}});
  EXPECT_THROW(twist_structure(FiniteAlgebra(bad, 2, {{0, 0, 0, 0}, {1, 1, 1, 1}})), Error);
}

TEST(Partition, CanonicalFormAndLattice) {
  auto p = Partition::from_labels(std::vector<int>{7, 3, 7, 1});
  EXPECT_EQ(p.ids(), (std::vector<std::size_t>{0, 1, 0, 2}));
  EXPECT_EQ(p.render(a4()), "{{1,b},{a},{c}}");
  auto q = Partition::from_blocks(4, {{0, 1, 2}, {3}});
  EXPECT_TRUE(p.refines(q));
  EXPECT_FALSE(q.refines(p));
  EXPECT_EQ(p.meet(q), p);
  EXPECT_EQ(p.join(Partition::from_blocks(4, {{0}, {1, 3}, {2}})).num_blocks(), 2u);
  EXPECT_TRUE(Partition::identity(3).is_identity());
  EXPECT_TRUE(Partition::total(3).is_total());
  EXPECT_THROW(Partition::from_blocks(3, {{0, 1}}), Error);
}
