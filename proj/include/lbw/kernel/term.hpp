#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lbw/kernel/signature.hpp"

namespace lbw {

/// Immutable term over a signature: a variable or an operation applied to
/// argument terms. Copies share structure.
class Term {
 public:
  static Term var(std::size_t index) {
    return Term(std::make_shared<Node const>(Node{true, index, {}, 0, 0}));
  }

  static Term app(std::size_t op, std::vector<Term> args = {}) {
    std::size_t depth = 0;
    std::size_t h = std::hash<std::size_t>{}(op) * 31 + 7;
    for (auto const& a : args) {
      depth = std::max(depth, a.depth() + 1);
      h = h * 1000003u ^ a.hash();
    }
    return Term(std::make_shared<Node const>(
        Node{false, op, std::move(args), depth, h}));
  }

  bool is_var() const noexcept { return node_->is_var; }
  std::size_t var_index() const noexcept { return node_->index; }
  std::size_t op() const noexcept { return node_->index; }
  std::vector<Term> const& args() const noexcept { return node_->args; }
  std::size_t depth() const noexcept { return node_->depth; }

  std::size_t hash() const noexcept {
    return node_->is_var ? node_->index * 2654435761u + 1 : node_->hash;
  }

  void collect_vars(std::set<std::size_t>& out) const {
    if (is_var()) {
      out.insert(var_index());
      return;
    }
    for (auto const& a : args()) {
      a.collect_vars(out);
    }
  }

  std::set<std::size_t> vars() const {
    std::set<std::size_t> out;
    collect_vars(out);
    return out;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (auto const& a : args()) {
      s += a.size();
    }
    return s;
  }

  /// Simultaneous substitution; variables outside `sigma` are kept.
  Term substitute(std::span<Term const> sigma) const {
    if (is_var()) {
      return var_index() < sigma.size() ? sigma[var_index()] : *this;
    }
    std::vector<Term> args;
    args.reserve(this->args().size());
    for (auto const& a : this->args()) {
      args.push_back(a.substitute(sigma));
    }
    return app(op(), std::move(args));
  }

  void collect_subterms(std::vector<Term>& out) const {
    for (auto const& a : args()) {
      a.collect_subterms(out);
    }
    out.push_back(*this);
  }

  /// Structural total order: variables before applications, then by index,
  /// then argument-wise.
  friend int compare(Term const& a, Term const& b) {
    if (a.node_ == b.node_) {
      return 0;
    }
    if (a.is_var() != b.is_var()) {
      return a.is_var() ? -1 : 1;
    }
    if (a.node_->index != b.node_->index) {
      return a.node_->index < b.node_->index ? -1 : 1;
    }
    auto const& x = a.args();
    auto const& y = b.args();
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
      if (int c = compare(x[i], y[i]); c != 0) {
        return c;
      }
    }
    return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
  }

  friend bool operator==(Term const& a, Term const& b) {
    return a.hash() == b.hash() && compare(a, b) == 0;
  }
  friend bool operator<(Term const& a, Term const& b) {
    return compare(a, b) < 0;
  }

 private:
  struct Node {
    bool is_var;
    std::size_t index;
    std::vector<Term> args;
    std::size_t depth;
    std::size_t hash;
  };

  explicit Term(std::shared_ptr<Node const> node) : node_(std::move(node)) {}

  std::shared_ptr<Node const> node_;
};

struct TermHash {
  std::size_t operator()(Term const& t) const noexcept { return t.hash(); }
};

// Variable naming used when rendering: x, y, z, u, v, w, then x6, x7, ...
inline std::string default_var_name(std::size_t i) {
  static char const* const names[] = {"x", "y", "z", "u", "v", "w"};
  return i < 6 ? names[i] : "x" + std::to_string(i);
}

// Translation naming: x is the distinguished variable, y1..ym parameters.
inline std::string param_var_name(std::size_t i) {
  return i == 0 ? "x" : "y" + std::to_string(i);
}

using VarNamer = std::function<std::string(std::size_t)>;

inline std::string render(Term const& t, Signature const& sig,
                          VarNamer const& names = default_var_name) {
  if (t.is_var()) {
    return names(t.var_index());
  }
  std::string out = sig.name(t.op());
  if (t.args().empty()) {
    return out;
  }
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += render(t.args()[i], sig, names);
  }
  out += ')';
  return out;
}

inline bool well_formed(Term const& t, Signature const& sig) {
  if (t.is_var()) {
    return true;
  }
  if (t.op() >= sig.size() || sig.arity(t.op()) != t.args().size()) {
    return false;
  }
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](Term const& a) { return well_formed(a, sig); });
}

// Advances `idx` as an odometer over [0, base)^k, last position fastest.
inline bool next_tuple(std::vector<std::size_t>& idx, std::size_t base) {
  for (std::size_t pos = idx.size(); pos-- > 0;) {
    if (++idx[pos] < base) {
      return true;
    }
    idx[pos] = 0;
  }
  return false;
}

/// All terms over `sig` in variables 0..num_vars-1 produced within
/// `max_depth` generation rounds (constants count as round 1), in
/// breadth-first order: by round, then by symbol order, then by argument
/// tuple. Each term appears once. Throws BudgetExceeded once more than
/// `limit` terms exist.
inline std::vector<Term> generate_terms(Signature const& sig,
                                        std::size_t num_vars,
                                        std::size_t max_depth,
                                        std::size_t limit) {
  std::vector<Term> out;
  for (std::size_t v = 0; v < num_vars; ++v) {
    out.push_back(Term::var(v));
  }
  std::size_t prev_end = 0;  // terms from rounds < d-1 are out[0, prev_end)
  for (std::size_t d = 1; d <= max_depth; ++d) {
    std::size_t const end = out.size();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      std::size_t const k = sig.arity(op);
      if (k == 0) {
        if (d == 1) {
          out.push_back(Term::app(op));
        }
        continue;
      }
      // argument tuples over out[0, end) using at least one round d-1 term
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        bool fresh = std::any_of(idx.begin(), idx.end(),
                                 [&](std::size_t i) { return i >= prev_end; });
        if (fresh) {
          std::vector<Term> args;
          args.reserve(k);
          for (auto i : idx) {
            args.push_back(out[i]);
          }
          out.push_back(Term::app(op, std::move(args)));
          if (out.size() > limit) {
            throw BudgetExceeded("term generation budget exceeded", out.size());
          }
        }
        if (!next_tuple(idx, end)) {
          break;
        }
      }
    }
    prev_end = end;
  }
  return out;
}

}  // namespace lbw
