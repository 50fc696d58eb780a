#pragma once

#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/partition.hpp"
#include "lbw/kernel/polynomials.hpp"

namespace lbw {

inline constexpr std::size_t kDefaultCongruenceOracleCap = 5;

/// Every basic operation maps related argument tuples to related values.
inline bool is_congruence(FiniteAlgebra const& a, Partition const& p) {
  if (p.universe() != a.size()) {
    throw Error("partition and algebra have different universes");
  }
  // f(t) must be related to f(rep(t)) where rep picks each block's least
  // element; that is equivalent to compatibility with every operation.
  auto const reps = p.representatives();
  auto const& sig = a.signature();
  std::vector<Elem> args, rargs;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    if (k == 0) {
      continue;
    }
    std::vector<std::size_t> idx(k, 0);
    args.resize(k);
    rargs.resize(k);
    do {
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = static_cast<Elem>(idx[i]);
        rargs[i] = reps[p.block_of(args[i])];
      }
      if (!p.related(a.apply(op, args), a.apply(op, rargs))) {
        return false;
      }
    } while (next_tuple(idx, a.size()));
  }
  return true;
}

/// All partitions of {0..n-1}, as restricted growth strings in lexicographic
/// order (so Id's string 0,1,2,... comes last and the total partition first).
inline std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> rgs(n, 0), maxp(n, 0);
  while (true) {
    out.push_back(Partition::from_labels(rgs));
    // increment the restricted growth string
    std::size_t i = n;
    while (i-- > 1) {
      if (rgs[i] <= maxp[i - 1]) {
        ++rgs[i];
        maxp[i] = std::max(maxp[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
          rgs[j] = 0;
          maxp[j] = maxp[i];
        }
        break;
      }
    }
    if (i == 0 || n <= 1) {
      break;
    }
  }
  return out;
}

/// Con A by filtering every partition through is_congruence.
inline std::vector<Partition> all_congruences(FiniteAlgebra const& a,
                                              std::size_t cap = kDefaultCongruenceOracleCap) {
  if (a.size() > cap) {
    throw BudgetExceeded("all_congruences is limited to algebras of size <= " +
                             std::to_string(cap),
                         0);
  }
  std::vector<Partition> out;
  for (auto& p : all_partitions(a.size())) {
    if (is_congruence(a, p)) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) {
      return false;
    }
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }
  Partition partition() {
    std::vector<std::size_t> labels(parent_.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = find(i);
    }
    return Partition::from_labels(labels);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Least congruence containing the pairs in `seeds`: every pair that merges
/// two classes is pushed through all basic unary translations
/// x -> f(c1,..,x,..,ck) until nothing new merges.
inline Partition generated_congruence(FiniteAlgebra const& a,
                                      std::vector<std::pair<Elem, Elem>> seeds) {
  detail::UnionFind uf(a.size());
  std::vector<std::pair<Elem, Elem>> work;
  for (auto [x, y] : seeds) {
    if (uf.unite(x, y)) {
      work.emplace_back(x, y);
    }
  }
  auto const& sig = a.signature();
  std::vector<Elem> args;
  while (!work.empty()) {
    auto [u, v] = work.back();
    work.pop_back();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      std::size_t const k = sig.arity(op);
      if (k == 0) {
        continue;
      }
      args.resize(k);
      for (std::size_t pos = 0; pos < k; ++pos) {
        // parameters for the other k-1 positions
        std::vector<std::size_t> idx(k - 1, 0);
        do {
          for (std::size_t i = 0, j = 0; i < k; ++i) {
            if (i != pos) {
              args[i] = static_cast<Elem>(idx[j++]);
            }
          }
          args[pos] = u;
          Elem fu = a.apply(op, args);
          args[pos] = v;
          Elem fv = a.apply(op, args);
          if (uf.unite(fu, fv)) {
            work.emplace_back(fu, fv);
          }
        } while (next_tuple(idx, a.size()));
      }
    }
  }
  return uf.partition();
}

inline Partition principal_congruence(FiniteAlgebra const& a, Elem x, Elem y) {
  if (x >= a.size() || y >= a.size()) {
    throw Error("element outside universe");
  }
  return generated_congruence(a, {{x, y}});
}

/// Largest congruence contained in the equivalence `e`.
///
/// Moore-style refinement: each splitter is an (operation, argument
/// position, parameter tuple) triple, i.e. a basic unary translation t.
/// A block is split by the block of t(a). Passes repeat until a whole pass
/// over all splitters changes nothing; the fixpoint is the answer.
inline Partition largest_congruence_below(FiniteAlgebra const& a, Partition const& e) {
  if (e.universe() != a.size()) {
    throw Error("partition and algebra have different universes");
  }
  std::size_t const n = a.size();
  auto const& sig = a.signature();
  Partition cur = e;
  std::vector<Elem> args;
  std::vector<std::pair<std::size_t, std::size_t>> labels(n);
  bool changed = true;
  while (changed && !cur.is_identity()) {
    changed = false;
    for (std::size_t op = 0; op < sig.size() && !cur.is_identity(); ++op) {
      std::size_t const k = sig.arity(op);
      if (k == 0) {
        continue;
      }
      args.resize(k);
      for (std::size_t pos = 0; pos < k; ++pos) {
        std::vector<std::size_t> idx(k - 1, 0);
        do {
          for (std::size_t i = 0, j = 0; i < k; ++i) {
            if (i != pos) {
              args[i] = static_cast<Elem>(idx[j++]);
            }
          }
          for (Elem x = 0; x < n; ++x) {
            args[pos] = x;
            labels[x] = {cur.block_of(x), cur.block_of(a.apply(op, args))};
          }
          auto next = Partition::from_labels(labels);
          if (next.num_blocks() != cur.num_blocks()) {
            cur = std::move(next);
            changed = true;
          }
        } while (next_tuple(idx, n));
      }
    }
  }
  return cur;
}

/// Leibniz congruence: the largest congruence compatible with F.
inline Partition leibniz(FiniteAlgebra const& a, ElemSet const& f) {
  return largest_congruence_below(a, Partition::split_by(f));
}

/// Leibniz congruence through unary polynomials: a ~ b iff every unary
/// polynomial p has p(a) in F exactly when p(b) in F.
inline Partition leibniz_via_polynomials(FiniteAlgebra const& a, ElemSet const& f,
                                         std::size_t budget = kDefaultFunctionBudget) {
  auto polys = unary_polynomials(a, budget);
  std::vector<std::vector<bool>> profile(a.size());
  for (auto const& p : polys) {
    for (std::size_t x = 0; x < a.size(); ++x) {
      profile[x].push_back(f.contains(p[x]));
    }
  }
  return Partition::from_labels(profile);
}

/// Largest member of Con A compatible with F, read off the full congruence
/// list (oracle route for small algebras).
inline Partition leibniz_via_congruence_list(FiniteAlgebra const& a, ElemSet const& f,
                                             std::size_t cap = kDefaultCongruenceOracleCap) {
  std::optional<Partition> best;
  for (auto const& c : all_congruences(a, cap)) {
    if (c.compatible_with(f) && (!best || best->refines(c))) {
      best = c;
    }
  }
  return *best;  // Id is always compatible
}

}  // namespace lbw
