#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/term.hpp"

namespace lbw {

struct TupleHash {
  std::size_t operator()(std::vector<Elem> const& v) const noexcept {
    std::size_t h = v.size();
    for (auto e : v) {
      h = h * 0x100000001b3ull ^ e;
    }
    return h;
  }
};

/// Subuniverse of a product of algebras generated by a set of tuples.
///
/// Coordinate c lives in `*coords[c]`; operations act coordinatewise. Every
/// element carries the first term (in breadth-first generation order) that
/// produces it from the generators, which are variables 0, 1, ...
struct Subpower {
  std::vector<std::vector<Elem>> elements;
  std::vector<Term> witnesses;
};

inline std::vector<Elem> apply_coordinatewise(Signature const& sig,
                                              std::span<FiniteAlgebra const* const> coords,
                                              std::size_t op,
                                              std::span<std::vector<Elem> const* const> args) {
  std::size_t const k = sig.arity(op);
  std::vector<Elem> out(coords.size());
  std::vector<Elem> tuple(k);
  for (std::size_t c = 0; c < coords.size(); ++c) {
    for (std::size_t i = 0; i < k; ++i) {
      tuple[i] = (*args[i])[c];
    }
    out[c] = coords[c]->apply(op, tuple);
  }
  return out;
}

// Odometer over the box [lo, hi), last position fastest.
inline bool next_in_box(std::vector<std::size_t>& idx, std::vector<std::size_t> const& lo,
                        std::vector<std::size_t> const& hi) {
  for (std::size_t pos = idx.size(); pos-- > 0;) {
    if (++idx[pos] < hi[pos]) {
      return true;
    }
    idx[pos] = lo[pos];
  }
  return false;
}

inline constexpr std::size_t kClosureWorkFactor = 200;

/// Semi-naive closure: round r only evaluates argument tuples that use at
/// least one element first produced in round r-1, so each tuple is applied
/// exactly once. `entry_budget` bounds |elements| * |coordinates|, and
/// kClosureWorkFactor times it bounds the coordinate operations performed.

inline Subpower generate_subpower(Signature const& sig,
                                  std::span<FiniteAlgebra const* const> coords,
                                  std::vector<std::vector<Elem>> const& generators,
                                  std::vector<Term> const& generator_terms,
                                  std::size_t entry_budget) {
  Subpower out;
  std::unordered_map<std::vector<Elem>, std::size_t, TupleHash> index;
  std::size_t const width = std::max<std::size_t>(coords.size(), 1);
  // coordinate operations allowed; the closure is quadratic in its size for
  // binary symbols, so the entry budget alone does not bound the time
  std::size_t const work_budget = entry_budget * kClosureWorkFactor;
  std::size_t work = 0;

  auto add = [&](std::vector<Elem> v, Term const& t) {
    auto [it, inserted] = index.emplace(v, out.elements.size());
    if (!inserted) {
      return;
    }
    out.elements.push_back(std::move(v));
    out.witnesses.push_back(t);
    if (out.elements.size() * width > entry_budget) {
      throw BudgetExceeded("closure budget exceeded", out.elements.size());
    }
  };

  for (std::size_t g = 0; g < generators.size(); ++g) {
    add(generators[g], generator_terms.at(g));
  }

  std::size_t start = 0;
  bool first_round = true;
  while (true) {
    std::size_t const end = out.elements.size();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      std::size_t const k = sig.arity(op);
      if (k == 0) {
        if (first_round) {
          add(apply_coordinatewise(sig, coords, op, {}), Term::app(op));
        }
        continue;
      }
      if (end == 0) {
        continue;
      }
      std::vector<std::vector<Elem> const*> args(k);
      // Position j holds the first fresh argument: earlier positions range
      // over old elements, later ones over everything.
      for (std::size_t j = 0; j < k; ++j) {
        if (j > 0 && start == 0) {
          break;
        }
        std::vector<std::size_t> lo(k), hi(k);
        for (std::size_t i = 0; i < k; ++i) {
          lo[i] = i == j ? start : 0;
          hi[i] = i < j ? start : end;
        }
        std::vector<std::size_t> idx = lo;
        do {
          for (std::size_t i = 0; i < k; ++i) {
            args[i] = &out.elements[idx[i]];
          }
          auto v = apply_coordinatewise(sig, coords, op, args);
          work += width;
          if (work > work_budget) {
            throw BudgetExceeded("closure work budget exceeded", out.elements.size());
          }
          if (index.find(v) == index.end()) {
            std::vector<Term> targs;
            targs.reserve(k);
            for (auto i : idx) {
              targs.push_back(out.witnesses[i]);
            }
            add(std::move(v), Term::app(op, std::move(targs)));
          }
        } while (next_in_box(idx, lo, hi));
      }
    }
    first_round = false;
    if (out.elements.size() == end) {
      break;
    }
    start = end;
  }
  return out;
}

}  // namespace lbw
