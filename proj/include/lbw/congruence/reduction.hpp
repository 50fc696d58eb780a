#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lbw/congruence/congruence.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/partition.hpp"

namespace lbw {

struct Quotient {
  FiniteAlgebra algebra;
  std::vector<Elem> block_map;  // element -> its block in the quotient
};

/// A / theta. Block b is named after its least element.
inline Quotient quotient(FiniteAlgebra const& a, Partition const& theta) {
  if (!is_congruence(a, theta)) {
    throw Error("quotient: partition " + theta.render(a) + " is not a congruence");
  }
  auto const reps = theta.representatives();
  std::size_t const m = theta.num_blocks();
  auto const& sig = a.signature();
  std::vector<std::vector<Elem>> tables(sig.size());
  std::vector<Elem> args;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    std::vector<std::size_t> idx(k, 0);
    args.resize(k);
    do {
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = reps[idx[i]];
      }
      tables[op].push_back(static_cast<Elem>(theta.block_of(a.apply(op, args))));
    } while (next_tuple(idx, m));
  }
  std::vector<std::string> names;
  for (auto r : reps) {
    names.push_back(a.name(r));
  }
  std::vector<Elem> map(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    map[i] = static_cast<Elem>(theta.block_of(static_cast<Elem>(i)));
  }
  return {FiniteAlgebra(sig, m, std::move(tables), std::move(names)), std::move(map)};
}

struct Reduction {
  Matrix matrix;
  std::vector<Elem> block_map;
  Partition leibniz;
};

/// <A/Omega F, F/Omega F>.
inline Reduction reduce_matrix(Matrix const& m) {
  auto omega = leibniz(m.algebra, m.designated);
  auto q = quotient(m.algebra, omega);
  ElemSet f(q.algebra.size());
  for (auto e : m.designated.elements()) {
    f.insert(q.block_map[e]);
  }
  return {Matrix(std::move(q.algebra), std::move(f)), std::move(q.block_map), std::move(omega)};
}

inline bool is_reduced(Matrix const& m) {
  return leibniz(m.algebra, m.designated).is_identity();
}

}  // namespace lbw
