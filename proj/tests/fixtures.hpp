#pragma once

// Structures shared by the test suites. Tables are
// written out by hand so tests do not depend on the DSL front end.

#include <string>
#include <vector>

#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/signature.hpp"
#include "lbw/kernel/term.hpp"
#include "lbw/logic/calculus.hpp"

namespace fx {

using lbw::Elem;
using lbw::ElemSet;
using lbw::FiniteAlgebra;
using lbw::HilbertCalculus;
using lbw::Matrix;
using lbw::Rule;
using lbw::Signature;
using lbw::Term;

inline Term x() { return Term::var(0); }
inline Term y() { return Term::var(1); }
inline Term z() { return Term::var(2); }
inline Term op(std::size_t o, std::vector<Term> args = {}) { return Term::app(o, std::move(args)); }

inline ElemSet set(std::size_t n, std::vector<Elem> const& elems) { return ElemSet::of(n, elems); }

// <box/1, one/0>
inline Signature box_sig() {
  Signature s;
  s.add("box", 1);
  s.add("one", 0);
  return s;
}
inline constexpr std::size_t kBox = 0, kOne = 1;
inline Term box(Term t) { return op(kBox, {std::move(t)}); }
inline Term one() { return op(kOne); }

// Universe 1,a,b,c (indices 0..3); box sends 1 and c to a, everything else to b.
inline constexpr Elem e1 = 0, ea = 1, eb = 2, ec = 3;
inline FiniteAlgebra a4() {
  return FiniteAlgebra(box_sig(), 4, {{ea, eb, eb, ea}, {e1}}, {"1", "a", "b", "c"});
}
inline FiniteAlgebra a3() {
  return FiniteAlgebra(box_sig(), 3, {{ea, eb, eb}, {e1}}, {"1", "a", "b"});
}
inline HilbertCalculus box_calculus() {
  return HilbertCalculus(box_sig(), {Rule{{}, one()}, Rule{{}, box(one())},
                                     Rule{{box(box(x()))}, y()}});
}

// <meet/2> and <join/2>
inline Signature meet_sig() {
  Signature s;
  s.add("meet", 2);
  return s;
}
inline Signature join_sig() {
  Signature s;
  s.add("join", 2);
  return s;
}
inline Signature lattice_sig() {
  Signature s;
  s.add("meet", 2);
  s.add("join", 2);
  return s;
}
inline Term meet(Term a, Term b) { return op(0, {std::move(a), std::move(b)}); }
inline Term join(Term a, Term b) { return op(1, {std::move(a), std::move(b)}); }
inline Term join1(Term a, Term b) { return op(0, {std::move(a), std::move(b)}); }  // join_sig

// Chain 0 < 1 < ... < n-1 as a meet or join semilattice.
inline FiniteAlgebra chain_semilattice(Signature sig, std::size_t n, bool is_meet) {
  std::vector<Elem> t;
  for (Elem i = 0; i < n; ++i) {
    for (Elem j = 0; j < n; ++j) {
      t.push_back(is_meet ? std::min(i, j) : std::max(i, j));
    }
  }
  return FiniteAlgebra(std::move(sig), n, {t});
}
inline FiniteAlgebra meet2() { return chain_semilattice(meet_sig(), 2, true); }
inline FiniteAlgebra join2() { return chain_semilattice(join_sig(), 2, false); }

inline FiniteAlgebra chain_lattice(std::size_t n) {
  std::vector<Elem> m, j;
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      m.push_back(std::min(a, b));
      j.push_back(std::max(a, b));
    }
  }
  return FiniteAlgebra(lattice_sig(), n, {m, j});
}

// x, y |- x meet y ; x meet y |- x ; x meet y |- y
inline HilbertCalculus cpc_and() {
  return HilbertCalculus(meet_sig(), {Rule{{x(), y()}, meet(x(), y())},
                                      Rule{{meet(x(), y())}, x()},
                                      Rule{{meet(x(), y())}, y()}});
}

// Disjunction fragment: x |- x v y ; x v y |- y v x ; x v x |- x ;
// x v (y v z) |- (x v y) v z
inline HilbertCalculus cpc_or() {
  auto j = join1;
  return HilbertCalculus(join_sig(), {Rule{{x()}, j(x(), y())},
                                      Rule{{j(x(), y())}, j(y(), x())},
                                      Rule{{j(x(), x())}, x()},
                                      Rule{{j(x(), j(y(), z()))}, j(j(x(), y()), z())}});
}

// Implication fragment: the two-element matrix and a Hilbert calculus for it
// (two axioms of positive implication, Peirce's law, modus ponens).
inline Signature imp_sig() {
  Signature s;
  s.add("imp", 2);
  return s;
}
inline Term imp(Term a, Term b) { return op(0, {std::move(a), std::move(b)}); }
inline FiniteAlgebra imp2() { return FiniteAlgebra(imp_sig(), 2, {{1, 1, 0, 1}}); }
inline HilbertCalculus imp_calculus() {
  return HilbertCalculus(
      imp_sig(), {Rule{{}, imp(x(), imp(y(), x()))},
                  Rule{{}, imp(imp(x(), imp(y(), z())), imp(imp(x(), y()), imp(x(), z())))},
                  Rule{{}, imp(imp(imp(x(), y()), x()), x())},
                  Rule{{x(), imp(x(), y())}, y()}});
}

}  // namespace fx
