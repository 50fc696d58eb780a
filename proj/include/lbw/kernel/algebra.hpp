#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/signature.hpp"
#include "lbw/kernel/term.hpp"

namespace lbw {

using Elem = std::uint32_t;

inline constexpr Elem kUnbound = std::numeric_limits<Elem>::max();

/// A subset of a universe {0..n-1}.
class ElemSet {
 public:
  ElemSet() = default;
  explicit ElemSet(std::size_t n) : bits_(n, false) {}
  ElemSet(std::size_t n, std::initializer_list<Elem> elems) : bits_(n, false) {
    for (auto e : elems) {
      insert(e);
    }
  }

  static ElemSet full(std::size_t n) {
    ElemSet s(n);
    s.bits_.assign(n, true);
    return s;
  }

  template <typename Range>
  static ElemSet of(std::size_t n, Range const& elems) {
    ElemSet s(n);
    for (auto e : elems) {
      s.insert(static_cast<Elem>(e));
    }
    return s;
  }

  std::size_t universe() const noexcept { return bits_.size(); }
  bool contains(Elem e) const { return e < bits_.size() && bits_[e]; }
  void insert(Elem e) {
    if (e >= bits_.size()) {
      throw Error("element " + std::to_string(e) + " outside universe of size " +
                  std::to_string(bits_.size()));
    }
    bits_[e] = true;
  }
  void erase(Elem e) { bits_.at(e) = false; }

  std::size_t count() const {
    std::size_t c = 0;
    for (bool b : bits_) {
      c += b ? 1 : 0;
    }
    return c;
  }
  bool empty() const { return count() == 0; }
  bool is_full() const { return count() == bits_.size(); }

  std::vector<Elem> elements() const {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) {
        out.push_back(static_cast<Elem>(i));
      }
    }
    return out;
  }

  bool subset_of(ElemSet const& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] && !other.contains(static_cast<Elem>(i))) {
        return false;
      }
    }
    return true;
  }

  ElemSet operator&(ElemSet const& o) const {
    ElemSet r(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      r.bits_[i] = bits_[i] && o.bits_.at(i);
    }
    return r;
  }
  ElemSet operator|(ElemSet const& o) const {
    ElemSet r(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      r.bits_[i] = bits_[i] || o.bits_.at(i);
    }
    return r;
  }
  ElemSet complement() const {
    ElemSet r(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      r.bits_[i] = !bits_[i];
    }
    return r;
  }

  bool operator==(ElemSet const&) const = default;
  // Orders by sorted element list, so {0} < {0,1} < {1}.
  bool operator<(ElemSet const& o) const { return elements() < o.elements(); }

 private:
  std::vector<bool> bits_;
};

/// A finite algebra: total operation tables over the universe {0..n-1}.
///
/// A k-ary table has n^k entries, row-major in the first argument, so
/// f(a1,...,ak) sits at index a1*n^(k-1) + ... + ak.
class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;

  FiniteAlgebra(Signature sig, std::size_t n, std::vector<std::vector<Elem>> tables,
                std::vector<std::string> names = {})
      : sig_(std::move(sig)), n_(n), tables_(std::move(tables)), names_(std::move(names)) {
    if (n_ == 0) {
      throw Error("algebra universe must be non-empty");
    }
    if (tables_.size() != sig_.size()) {
      throw Error("expected " + std::to_string(sig_.size()) + " operation tables, got " +
                  std::to_string(tables_.size()));
    }
    for (std::size_t op = 0; op < sig_.size(); ++op) {
      if (tables_[op].size() != table_size(n_, sig_.arity(op))) {
        throw Error("table for '" + sig_.name(op) + "' has wrong size");
      }
      for (auto v : tables_[op]) {
        if (v >= n_) {
          throw Error("table for '" + sig_.name(op) + "' has entry out of range");
        }
      }
    }
    if (names_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) {
        names_.push_back(std::to_string(i));
      }
    } else if (names_.size() != n_) {
      throw Error("element name list does not match universe size");
    }
  }

  static std::size_t table_size(std::size_t n, std::size_t arity) {
    std::size_t s = 1;
    for (std::size_t i = 0; i < arity; ++i) {
      if (s > std::numeric_limits<std::size_t>::max() / n) {
        throw Error("operation table too large");
      }
      s *= n;
    }
    return s;
  }

  Signature const& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return n_; }
  std::vector<Elem> const& table(std::size_t op) const { return tables_.at(op); }
  std::vector<std::vector<Elem>> const& tables() const noexcept { return tables_; }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string const& name(Elem e) const { return names_.at(e); }

  std::optional<Elem> find_element(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        return static_cast<Elem>(i);
      }
    }
    return std::nullopt;
  }

  std::size_t index_of(std::span<Elem const> args) const {
    std::size_t idx = 0;
    for (auto a : args) {
      idx = idx * n_ + a;
    }
    return idx;
  }

  Elem apply(std::size_t op, std::span<Elem const> args) const {
    return tables_[op][index_of(args)];
  }
  Elem apply(std::size_t op, std::initializer_list<Elem> args) const {
    return apply(op, std::span<Elem const>(args.begin(), args.size()));
  }

  ElemSet universe_set() const { return ElemSet::full(n_); }

  FiniteAlgebra with_names(std::vector<std::string> names) const {
    return FiniteAlgebra(sig_, n_, tables_, std::move(names));
  }

  std::string render_set(ElemSet const& s) const {
    std::string out = "{";
    bool first = true;
    for (auto e : s.elements()) {
      out += first ? "" : ",";
      out += names_[e];
      first = false;
    }
    return out + "}";
  }

  // Structural equality; element names are presentation only.
  bool operator==(FiniteAlgebra const& o) const {
    return n_ == o.n_ && sig_ == o.sig_ && tables_ == o.tables_;
  }

 private:
  Signature sig_;
  std::size_t n_ = 0;
  std::vector<std::vector<Elem>> tables_;
  std::vector<std::string> names_;
};

/// Value of `t` under the homomorphic extension of `env` (indexed by
/// variable; kUnbound marks a missing binding).
inline Elem eval_term(Term const& t, FiniteAlgebra const& a, std::span<Elem const> env) {
  if (t.is_var()) {
    if (t.var_index() >= env.size() || env[t.var_index()] == kUnbound) {
      throw Error("unbound variable " + default_var_name(t.var_index()));
    }
    return env[t.var_index()];
  }
  auto const& sig = a.signature();
  if (t.op() >= sig.size() || sig.arity(t.op()) != t.args().size()) {
    throw Error("term symbol not in signature");
  }
  std::size_t idx = 0;
  for (auto const& arg : t.args()) {
    idx = idx * a.size() + eval_term(arg, a, env);
  }
  return a.table(t.op())[idx];
}

inline Elem eval_term(Term const& t, FiniteAlgebra const& a,
                      std::initializer_list<Elem> env) {
  return eval_term(t, a, std::span<Elem const>(env.begin(), env.size()));
}

/// Table of the term function of `t` in `num_vars` variables, indexed like
/// an operation table (first variable slowest).
inline std::vector<Elem> term_function(Term const& t, FiniteAlgebra const& a,
                                       std::size_t num_vars) {
  std::vector<Elem> out;
  out.reserve(FiniteAlgebra::table_size(a.size(), num_vars));
  std::vector<std::size_t> idx(num_vars, 0);
  std::vector<Elem> env(num_vars);
  do {
    for (std::size_t i = 0; i < num_vars; ++i) {
      env[i] = static_cast<Elem>(idx[i]);
    }
    out.push_back(eval_term(t, a, env));
  } while (next_tuple(idx, a.size()));
  return out;
}

}  // namespace lbw
