#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"

namespace lbw {

inline constexpr std::size_t kMaxCanonicalSize = 7;
inline constexpr std::size_t kDefaultEnumerationGuard = 50'000'000;

namespace detail {

// Compares the serialization of pi(A) against that of A, entry by entry.
// `inv` is the inverse of pi. Returns <0, 0, >0.
inline int compare_permuted(FiniteAlgebra const& a, std::vector<Elem> const& perm,
                            std::vector<Elem> const& inv) {
  auto const& sig = a.signature();
  std::size_t const n = a.size();
  std::vector<Elem> args;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    auto const& table = a.table(op);
    std::vector<std::size_t> idx(k, 0);
    args.resize(k);
    std::size_t pos = 0;
    do {
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = inv[idx[i]];
      }
      Elem permuted = perm[a.apply(op, args)];
      if (permuted != table[pos]) {
        return permuted < table[pos] ? -1 : 1;
      }
      ++pos;
    } while (next_tuple(idx, n));
  }
  return 0;
}

}  // namespace detail

/// Image of `a` under the bijection `perm` (old element -> new element).
inline FiniteAlgebra permute(FiniteAlgebra const& a, std::vector<Elem> const& perm) {
  std::size_t const n = a.size();
  std::vector<Elem> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv[perm[i]] = static_cast<Elem>(i);
  }
  auto const& sig = a.signature();
  std::vector<std::vector<Elem>> tables(sig.size());
  std::vector<Elem> args;
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    std::vector<std::size_t> idx(k, 0);
    args.resize(k);
    do {
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = inv[idx[i]];
      }
      tables[op].push_back(perm[a.apply(op, args)]);
    } while (next_tuple(idx, n));
  }
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    names[perm[i]] = a.name(static_cast<Elem>(i));
  }
  return FiniteAlgebra(sig, n, std::move(tables), std::move(names));
}

/// True iff the table serialization of `a` is the lexicographic minimum over
/// all n! relabellings.
inline bool is_canonical(FiniteAlgebra const& a) {
  std::size_t const n = a.size();
  if (n > kMaxCanonicalSize) {
    throw Error("canonical forms are limited to universes of size <= " +
                std::to_string(kMaxCanonicalSize));
  }
  std::vector<Elem> perm(n), inv(n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t i = 0; i < n; ++i) {
      inv[perm[i]] = static_cast<Elem>(i);
    }
    if (detail::compare_permuted(a, perm, inv) < 0) {
      return false;
    }
  }
  return true;
}

/// The lexicographically least relabelling of `a`.
inline FiniteAlgebra canonical_form(FiniteAlgebra const& a) {
  std::size_t const n = a.size();
  if (n > kMaxCanonicalSize) {
    throw Error("canonical forms are limited to universes of size <= " +
                std::to_string(kMaxCanonicalSize));
  }
  std::vector<Elem> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  FiniteAlgebra best = a;
  do {
    auto c = permute(a, perm);
    if (c.tables() < best.tables()) {
      best = std::move(c);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Streams every algebra of a signature on a universe of size n, in
/// ascending order of table serialization. With `prune_iso`, only the
/// canonical representative of each isomorphism class is produced.
class AlgebraEnumerator {
 public:
  AlgebraEnumerator(Signature sig, std::size_t n, bool prune_iso,
                    std::size_t guard = kDefaultEnumerationGuard)
      : sig_(std::move(sig)), n_(n), prune_(prune_iso) {
    if (n_ == 0) {
      throw Error("universe size must be at least 1");
    }
    if (prune_ && n_ > kMaxCanonicalSize) {
      throw Error("isomorphism pruning unavailable above size " +
                  std::to_string(kMaxCanonicalSize));
    }
    std::size_t entries = 0;
    for (auto const& s : sig_) {
      entries += FiniteAlgebra::table_size(n_, s.arity);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < entries; ++i) {
      if (total > guard / n_) {
        throw BudgetExceeded("enumeration of size-" + std::to_string(n_) +
                                 " algebras exceeds the feasibility guard",
                             0);
      }
      total *= n_;
    }
    total_ = total;
    digits_.assign(entries, 0);
  }

  std::size_t raw_count() const noexcept { return total_; }

  std::optional<FiniteAlgebra> next() {
    while (!done_) {
      auto a = build();
      done_ = !advance();
      if (!prune_ || is_canonical(a)) {
        return a;
      }
    }
    return std::nullopt;
  }

 private:
  FiniteAlgebra build() const {
    std::vector<std::vector<Elem>> tables;
    std::size_t pos = 0;
    for (auto const& s : sig_) {
      std::size_t len = FiniteAlgebra::table_size(n_, s.arity);
      tables.emplace_back(digits_.begin() + pos, digits_.begin() + pos + len);
      pos += len;
    }
    return FiniteAlgebra(sig_, n_, std::move(tables));
  }

  bool advance() {
    for (std::size_t pos = digits_.size(); pos-- > 0;) {
      if (++digits_[pos] < n_) {
        return true;
      }
      digits_[pos] = 0;
    }
    return false;
  }

  Signature sig_;
  std::size_t n_;
  bool prune_;
  std::size_t total_ = 0;
  std::vector<Elem> digits_;
  bool done_ = false;
};

inline std::vector<FiniteAlgebra> enumerate_algebras(Signature const& sig, std::size_t n,
                                                     bool prune_iso,
                                                     std::size_t guard = kDefaultEnumerationGuard) {
  AlgebraEnumerator en(sig, n, prune_iso, guard);
  std::vector<FiniteAlgebra> out;
  while (auto a = en.next()) {
    out.push_back(std::move(*a));
  }
  return out;
}

/// All algebras of sizes 1..max_size, smallest first.
inline std::vector<FiniteAlgebra> enumerate_algebras_up_to(Signature const& sig,
                                                           std::size_t max_size, bool prune_iso,
                                                           std::size_t guard = kDefaultEnumerationGuard) {
  std::vector<FiniteAlgebra> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto part = enumerate_algebras(sig, n, prune_iso, guard);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace lbw
