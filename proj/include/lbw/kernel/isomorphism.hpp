#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/matrix.hpp"

namespace lbw {

/// True iff `f` is a bijection A1 -> A2 preserving every operation and
/// designated membership in both directions.
inline bool is_matrix_isomorphism(Matrix const& m1, Matrix const& m2,
                                  std::vector<Elem> const& f) {
  auto const& a = m1.algebra;
  auto const& b = m2.algebra;
  if (!(a.signature() == b.signature()) || a.size() != b.size() || f.size() != a.size()) {
    return false;
  }
  std::vector<bool> hit(b.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= b.size() || hit[f[i]]) {
      return false;
    }
    hit[f[i]] = true;
    if (m1.designated.contains(static_cast<Elem>(i)) != m2.designated.contains(f[i])) {
      return false;
    }
  }
  auto const& sig = a.signature();
  std::vector<Elem> args, img;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    std::vector<std::size_t> idx(k, 0);
    args.resize(k);
    img.resize(k);
    do {
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = static_cast<Elem>(idx[i]);
        img[i] = f[idx[i]];
      }
      if (f[a.apply(op, args)] != b.apply(op, img)) {
        return false;
      }
    } while (next_tuple(idx, a.size()));
  }
  return true;
}

namespace detail {

class IsoSearch {
 public:
  IsoSearch(Matrix const& m1, Matrix const& m2)
      : m1_(m1), m2_(m2), n_(m1.algebra.size()), f_(n_, kUnbound), used_(n_, false) {}

  std::optional<std::vector<Elem>> run() {
    if (extend(0)) {
      return f_;
    }
    return std::nullopt;
  }

 private:
  // Checks every operation instance whose arguments and value are mapped and
  // which involves the newly mapped element `e`.
  bool consistent(Elem e) const {
    auto const& a = m1_.algebra;
    auto const& b = m2_.algebra;
    auto const& sig = a.signature();
    std::vector<Elem> args, img;
    for (std::size_t op = 0; op < sig.size(); ++op) {
      std::size_t const k = sig.arity(op);
      if (k == 0) {
        Elem v = a.table(op)[0];
        if (f_[v] != kUnbound && f_[v] != b.table(op)[0]) {
          return false;
        }
        continue;
      }
      std::vector<std::size_t> idx(k, 0);
      args.resize(k);
      img.resize(k);
      // arguments range over mapped elements 0..e
      do {
        bool involves = false;
        for (std::size_t i = 0; i < k; ++i) {
          args[i] = static_cast<Elem>(idx[i]);
          img[i] = f_[idx[i]];
          involves = involves || idx[i] == e;
        }
        Elem v = a.apply(op, args);
        if ((involves || v == e) && f_[v] != kUnbound && f_[v] != b.apply(op, img)) {
          return false;
        }
      } while (next_tuple(idx, static_cast<std::size_t>(e) + 1));
    }
    return true;
  }

  bool extend(Elem e) {
    if (e == n_) {
      return is_matrix_isomorphism(m1_, m2_, f_);
    }
    bool const designated = m1_.designated.contains(e);
    for (Elem t = 0; t < n_; ++t) {
      if (used_[t] || m2_.designated.contains(t) != designated) {
        continue;
      }
      f_[e] = t;
      used_[t] = true;
      if (consistent(e) && extend(e + 1)) {
        return true;
      }
      used_[t] = false;
      f_[e] = kUnbound;
    }
    return false;
  }

  Matrix const& m1_;
  Matrix const& m2_;
  Elem n_;
  std::vector<Elem> f_;
  std::vector<bool> used_;
};

}  // namespace detail

/// A matrix isomorphism M1 -> M2, verified before it is returned.
inline std::optional<std::vector<Elem>> find_matrix_isomorphism(Matrix const& m1,
                                                                Matrix const& m2) {
  if (!(m1.algebra.signature() == m2.algebra.signature()) ||
      m1.algebra.size() != m2.algebra.size() ||
      m1.designated.count() != m2.designated.count()) {
    return std::nullopt;
  }
  auto f = detail::IsoSearch(m1, m2).run();
  if (f && !is_matrix_isomorphism(m1, m2, *f)) {
    return std::nullopt;
  }
  return f;
}

inline std::optional<std::vector<Elem>> find_isomorphism(FiniteAlgebra const& a,
                                                         FiniteAlgebra const& b) {
  return find_matrix_isomorphism(Matrix(a, ElemSet(a.size())), Matrix(b, ElemSet(b.size())));
}

}  // namespace lbw
