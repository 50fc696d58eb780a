#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/logic/calculus.hpp"

namespace lbw {

inline constexpr std::size_t kDefaultInstanceBudget = 5'000'000;
inline constexpr std::size_t kDefaultFilterBudget = 100'000;

/// Every ground instance of every rule of a calculus in one algebra, as Horn
/// clauses premises -> conclusion over elements. Trivial instances (the
/// conclusion among the premises) are dropped and the rest deduplicated.
class RuleInstances {
 public:
  struct Clause {
    std::vector<Elem> premises;  // sorted, unique
    Elem conclusion;
    auto operator<=>(Clause const&) const = default;
  };

  RuleInstances(HilbertCalculus const& calc, FiniteAlgebra const& a,
                std::size_t budget = kDefaultInstanceBudget)
      : n_(a.size()), watchers_(a.size()) {
    if (!(calc.signature() == a.signature())) {
      throw Error("calculus and algebra have different signatures");
    }
    std::set<Clause> seen;
    std::size_t tried = 0;
    for (auto const& r : calc.rules()) {
      std::size_t const v = r.num_vars();
      std::vector<std::size_t> idx(v, 0);
      std::vector<Elem> env(v);
      do {
        if (++tried > budget) {
          throw BudgetExceeded("rule instance budget exceeded", tried);
        }
        for (std::size_t i = 0; i < v; ++i) {
          env[i] = static_cast<Elem>(idx[i]);
        }
        Clause c;
        c.conclusion = eval_term(r.conclusion, a, env);
        for (auto const& p : r.premises) {
          c.premises.push_back(eval_term(p, a, env));
        }
        std::sort(c.premises.begin(), c.premises.end());
        c.premises.erase(std::unique(c.premises.begin(), c.premises.end()), c.premises.end());
        if (!std::binary_search(c.premises.begin(), c.premises.end(), c.conclusion)) {
          seen.insert(std::move(c));
        }
      } while (next_tuple(idx, a.size()));
    }
    clauses_.assign(seen.begin(), seen.end());
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      for (auto e : clauses_[i].premises) {
        watchers_[e].push_back(i);
      }
    }
  }

  std::size_t universe() const noexcept { return n_; }
  std::vector<Clause> const& clauses() const noexcept { return clauses_; }

  /// Least filter containing X. Counting closure: each clause keeps the
  /// number of premises not yet in the set and fires when it reaches zero,
  /// so the cost is linear in the total size of the clauses.
  ElemSet closure(ElemSet const& x) const {
    ElemSet out(n_);
    std::vector<std::size_t> missing(clauses_.size());
    std::vector<Elem> queue;
    auto add = [&](Elem e) {
      if (!out.contains(e)) {
        out.insert(e);
        queue.push_back(e);
      }
    };
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      missing[i] = clauses_[i].premises.size();
      if (missing[i] == 0) {
        add(clauses_[i].conclusion);
      }
    }
    for (auto e : x.elements()) {
      add(e);
    }
    while (!queue.empty()) {
      Elem e = queue.back();
      queue.pop_back();
      for (auto i : watchers_[e]) {
        if (--missing[i] == 0) {
          add(clauses_[i].conclusion);
        }
      }
    }
    return out;
  }

  bool is_closed(ElemSet const& f) const {
    for (auto const& c : clauses_) {
      if (!f.contains(c.conclusion) &&
          std::all_of(c.premises.begin(), c.premises.end(),
                      [&](Elem e) { return f.contains(e); })) {
        return false;
      }
    }
    return true;
  }

 private:
  std::size_t n_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<std::size_t>> watchers_;
};

inline ElemSet filter_generate(HilbertCalculus const& calc, FiniteAlgebra const& a,
                               ElemSet const& x) {
  return RuleInstances(calc, a).closure(x);
}

inline bool is_filter(HilbertCalculus const& calc, FiniteAlgebra const& a, ElemSet const& f) {
  return RuleInstances(calc, a).is_closed(f);
}

/// Closed sets of a closure operator on {0..n-1} in lectic order
/// (NextClosure). Work is proportional to n^2 per closed set, independent of
/// 2^n.
template <class Close>
std::vector<ElemSet> next_closure_all(std::size_t n, Close const& close,
                                      std::size_t budget = kDefaultFilterBudget) {
  std::vector<ElemSet> out;
  ElemSet cur = close(ElemSet(n));
  out.push_back(cur);
  while (true) {
    bool found = false;
    for (std::size_t i = n; i-- > 0;) {
      Elem const e = static_cast<Elem>(i);
      if (cur.contains(e)) {
        cur.erase(e);
        continue;
      }
      ElemSet seed = cur;  // already restricted to elements below i
      seed.insert(e);
      ElemSet next = close(seed);
      bool ok = true;
      for (Elem j = 0; j < e; ++j) {
        if (next.contains(j) && !cur.contains(j)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        cur = std::move(next);
        found = true;
        break;
      }
    }
    if (!found) {
      return out;
    }
    if (out.size() >= budget) {
      throw BudgetExceeded("filter lattice exceeds " + std::to_string(budget) + " filters",
                           out.size());
    }
    out.push_back(cur);
  }
}

/// Fi_L A with its order and lattice operations. Filters are listed by
/// size, then by element list, so the least filter comes first and A last.
class FilterLattice {
 public:
  FilterLattice(HilbertCalculus const& calc, FiniteAlgebra const& a,
                std::size_t budget = kDefaultFilterBudget)
      : algebra_(a), instances_(calc, a) {
    filters_ = next_closure_all(
        a.size(), [this](ElemSet const& x) { return instances_.closure(x); }, budget);
    std::sort(filters_.begin(), filters_.end(), [](ElemSet const& x, ElemSet const& y) {
      auto cx = x.count(), cy = y.count();
      return cx != cy ? cx < cy : x < y;
    });
    for (std::size_t i = 0; i < filters_.size(); ++i) {
      index_.emplace(filters_[i].elements(), i);
    }
  }

  FiniteAlgebra const& algebra() const noexcept { return algebra_; }
  RuleInstances const& instances() const noexcept { return instances_; }
  std::vector<ElemSet> const& filters() const noexcept { return filters_; }
  std::size_t size() const noexcept { return filters_.size(); }
  ElemSet const& operator[](std::size_t i) const { return filters_.at(i); }
  ElemSet const& least() const { return filters_.front(); }

  ElemSet closure(ElemSet const& x) const { return instances_.closure(x); }

  std::optional<std::size_t> find(ElemSet const& f) const {
    auto it = index_.find(f.elements());
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t index_of(ElemSet const& f) const {
    auto i = find(f);
    if (!i) {
      throw Error("set " + algebra_.render_set(f) + " is not a filter");
    }
    return *i;
  }

  bool leq(std::size_t i, std::size_t j) const { return filters_[i].subset_of(filters_[j]); }
  std::size_t meet(std::size_t i, std::size_t j) const {
    return index_of(filters_[i] & filters_[j]);
  }
  std::size_t join(std::size_t i, std::size_t j) const {
    return index_of(closure(filters_[i] | filters_[j]));
  }

  /// Indices of the filters containing F.
  std::vector<std::size_t> above(ElemSet const& f) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < filters_.size(); ++i) {
      if (f.subset_of(filters_[i])) {
        out.push_back(i);
      }
    }
    return out;
  }

  std::string render() const {
    std::string out = "{";
    for (std::size_t i = 0; i < filters_.size(); ++i) {
      out += (i ? "," : "") + algebra_.render_set(filters_[i]);
    }
    return out + "}";
  }

 private:
  FiniteAlgebra algebra_;
  RuleInstances instances_;
  std::vector<ElemSet> filters_;
  std::map<std::vector<Elem>, std::size_t> index_;
};

}  // namespace lbw
