#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"

namespace lbw {

/// Least subuniverse containing `x` and the values of all constants.
inline ElemSet subalgebra_generate(FiniteAlgebra const& a, ElemSet const& x) {
  auto const& sig = a.signature();
  ElemSet cur = x;
  std::vector<Elem> members = cur.elements();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    if (sig.arity(op) == 0) {
      Elem v = a.table(op)[0];
      if (!cur.contains(v)) {
        cur.insert(v);
        members.push_back(v);
      }
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t const m = members.size();
    for (std::size_t op = 0; op < sig.size(); ++op) {
      std::size_t const k = sig.arity(op);
      if (k == 0 || m == 0) {
        continue;
      }
      std::vector<std::size_t> idx(k, 0);
      std::vector<Elem> args(k);
      do {
        for (std::size_t i = 0; i < k; ++i) {
          args[i] = members[idx[i]];
        }
        Elem v = a.apply(op, args);
        if (!cur.contains(v)) {
          cur.insert(v);
          members.push_back(v);
          changed = true;
        }
      } while (next_tuple(idx, m));
    }
  }
  return cur;
}

inline bool is_subuniverse(FiniteAlgebra const& a, ElemSet const& s) {
  return subalgebra_generate(a, s) == s;
}

struct Embedded {
  FiniteAlgebra algebra;
  std::vector<Elem> embedding;  // new element i is embedding[i] in the parent
};

/// Subalgebra induced on a subuniverse; elements keep their relative order.
inline Embedded subalgebra(FiniteAlgebra const& a, ElemSet const& s) {
  if (s.empty() || !is_subuniverse(a, s)) {
    throw Error("not a non-empty subuniverse: " + a.render_set(s));
  }
  auto members = s.elements();
  std::vector<Elem> back(a.size(), kUnbound);
  for (std::size_t i = 0; i < members.size(); ++i) {
    back[members[i]] = static_cast<Elem>(i);
  }
  auto const& sig = a.signature();
  std::size_t const n = members.size();
  std::vector<std::vector<Elem>> tables(sig.size());
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    std::vector<std::size_t> idx(k, 0);
    std::vector<Elem> args(k);
    do {
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = members[idx[i]];
      }
      tables[op].push_back(back[a.apply(op, args)]);
    } while (next_tuple(idx, n));
  }
  std::vector<std::string> names;
  for (auto m : members) {
    names.push_back(a.name(m));
  }
  return {FiniteAlgebra(sig, n, std::move(tables), std::move(names)), std::move(members)};
}

/// Direct product with componentwise operations. Element i encodes the
/// tuple of component indices in mixed radix, first factor slowest. The
/// empty product is the one-element algebra over `sig`.
inline FiniteAlgebra product(Signature const& sig, std::vector<FiniteAlgebra> const& factors) {
  std::size_t n = 1;
  for (auto const& f : factors) {
    if (!(f.signature() == sig)) {
      throw Error("product factors must share one signature");
    }
    n *= f.size();
  }
  auto decode = [&](std::size_t e) {
    std::vector<Elem> comps(factors.size());
    for (std::size_t i = factors.size(); i-- > 0;) {
      comps[i] = static_cast<Elem>(e % factors[i].size());
      e /= factors[i].size();
    }
    return comps;
  };
  auto encode = [&](std::vector<Elem> const& comps) {
    std::size_t e = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      e = e * factors[i].size() + comps[i];
    }
    return static_cast<Elem>(e);
  };
  std::vector<std::vector<Elem>> decoded(n);
  for (std::size_t e = 0; e < n; ++e) {
    decoded[e] = decode(e);
  }
  std::vector<std::vector<Elem>> tables(sig.size());
  for (std::size_t op = 0; op < sig.size(); ++op) {
    std::size_t const k = sig.arity(op);
    std::vector<std::size_t> idx(k, 0);
    std::vector<Elem> comps(factors.size());
    std::vector<Elem> args(k);
    do {
      for (std::size_t f = 0; f < factors.size(); ++f) {
        for (std::size_t i = 0; i < k; ++i) {
          args[i] = decoded[idx[i]][f];
        }
        comps[f] = factors[f].apply(op, args);
      }
      tables[op].push_back(encode(comps));
    } while (next_tuple(idx, n));
  }
  std::vector<std::string> names;
  for (std::size_t e = 0; e < n; ++e) {
    std::string nm;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      nm += (f ? "_" : "") + factors[f].name(decoded[e][f]);
    }
    names.push_back(factors.empty() ? "0" : nm);
  }
  return FiniteAlgebra(sig, n, std::move(tables), std::move(names));
}

inline FiniteAlgebra power(FiniteAlgebra const& a, std::size_t k) {
  return product(a.signature(), std::vector<FiniteAlgebra>(k, a));
}

inline FiniteAlgebra trivial_algebra(Signature const& sig) { return product(sig, {}); }

/// Expansion of `a` by a fresh constant symbol interpreted as `value`.
inline FiniteAlgebra add_constant(FiniteAlgebra const& a, std::string const& name, Elem value) {
  if (value >= a.size()) {
    throw Error("constant value outside universe");
  }
  Signature sig = a.signature();
  sig.add(name, 0);
  auto tables = a.tables();
  tables.push_back({value});
  return FiniteAlgebra(std::move(sig), a.size(), std::move(tables), a.names());
}

namespace detail {

inline bool is_lattice(FiniteAlgebra const& l, std::size_t meet, std::size_t join) {
  std::size_t const n = l.size();
  for (Elem a = 0; a < n; ++a) {
    if (l.apply(meet, {a, a}) != a || l.apply(join, {a, a}) != a) {
      return false;
    }
    for (Elem b = 0; b < n; ++b) {
      if (l.apply(meet, {a, b}) != l.apply(meet, {b, a}) ||
          l.apply(join, {a, b}) != l.apply(join, {b, a})) {
        return false;
      }
      if (l.apply(meet, {a, l.apply(join, {a, b})}) != a ||
          l.apply(join, {a, l.apply(meet, {a, b})}) != a) {
        return false;
      }
      for (Elem c = 0; c < n; ++c) {
        if (l.apply(meet, {a, l.apply(meet, {b, c})}) !=
                l.apply(meet, {l.apply(meet, {a, b}), c}) ||
            l.apply(join, {a, l.apply(join, {b, c})}) !=
                l.apply(join, {l.apply(join, {a, b}), c})) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace detail

inline Signature bilattice_signature() {
  return Signature({{"and", 2}, {"or", 2}, {"otimes", 2}, {"oplus", 2}, {"neg", 1}});
}

/// Twist structure L (.) L on L x L. The meet and join of L are the symbols
/// named "meet"/"join" when present, otherwise the first two binary symbols.
/// Element <a1,a2> has index a1*n + a2 and name "a1_a2".
inline FiniteAlgebra twist_structure(FiniteAlgebra const& l) {
  auto const& sig = l.signature();
  auto meet = sig.find("meet");
  auto join = sig.find("join");
  if (!meet || !join) {
    std::vector<std::size_t> binary;
    for (std::size_t op = 0; op < sig.size(); ++op) {
      if (sig.arity(op) == 2) {
        binary.push_back(op);
      }
    }
    if (binary.size() < 2) {
      throw Error("twist structure needs a lattice signature with two binary operations");
    }
    meet = binary[0];
    join = binary[1];
  }
  if (sig.arity(*meet) != 2 || sig.arity(*join) != 2 || !detail::is_lattice(l, *meet, *join)) {
    throw Error("twist structure input is not a lattice");
  }
  std::size_t const n = l.size();
  auto pair = [n](Elem a1, Elem a2) { return static_cast<Elem>(a1 * n + a2); };
  std::size_t const m = n * n;
  std::vector<std::vector<Elem>> tables(5);
  for (Elem x = 0; x < m; ++x) {
    for (Elem y = 0; y < m; ++y) {
      Elem a1 = x / n, a2 = x % n, b1 = y / n, b2 = y % n;
      auto cap = [&](Elem p, Elem q) { return l.apply(*meet, {p, q}); };
      auto cup = [&](Elem p, Elem q) { return l.apply(*join, {p, q}); };
      tables[0].push_back(pair(cap(a1, b1), cup(a2, b2)));
      tables[1].push_back(pair(cup(a1, b1), cap(a2, b2)));
      tables[2].push_back(pair(cap(a1, b1), cap(a2, b2)));
      tables[3].push_back(pair(cup(a1, b1), cup(a2, b2)));
    }
    tables[4].push_back(pair(x % n, x / n));
  }
  std::vector<std::string> names;
  for (Elem x = 0; x < m; ++x) {
    names.push_back(l.name(x / n) + "_" + l.name(x % n));
  }
  return FiniteAlgebra(bilattice_signature(), m, std::move(tables), std::move(names));
}

}  // namespace lbw
