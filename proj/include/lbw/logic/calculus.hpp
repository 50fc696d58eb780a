#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/signature.hpp"
#include "lbw/kernel/term.hpp"

namespace lbw {

/// Gamma |- phi with finitely many premises; an axiom has none.
struct Rule {
  std::vector<Term> premises;
  Term conclusion = Term::var(0);

  std::size_t num_vars() const {
    std::set<std::size_t> vs;
    for (auto const& p : premises) {
      p.collect_vars(vs);
    }
    conclusion.collect_vars(vs);
    return vs.empty() ? 0 : *vs.rbegin() + 1;
  }

  bool is_axiom() const { return premises.empty(); }

  /// Variables renamed 0,1,2,... in order of first occurrence (premises left
  /// to right, then the conclusion).
  Rule canonical() const {
    std::map<std::size_t, std::size_t> ren;
    auto visit = [&](auto&& self, Term const& t) -> void {
      if (t.is_var()) {
        ren.emplace(t.var_index(), ren.size());
        return;
      }
      for (auto const& a : t.args()) {
        self(self, a);
      }
    };
    for (auto const& p : premises) {
      visit(visit, p);
    }
    visit(visit, conclusion);
    std::size_t top = ren.empty() ? 0 : ren.rbegin()->first + 1;
    std::vector<Term> sigma;
    for (std::size_t v = 0; v < top; ++v) {
      auto it = ren.find(v);
      sigma.push_back(Term::var(it == ren.end() ? v : it->second));
    }
    Rule out;
    for (auto const& p : premises) {
      out.premises.push_back(p.substitute(sigma));
    }
    out.conclusion = conclusion.substitute(sigma);
    return out;
  }

  bool operator==(Rule const& o) const {
    return premises == o.premises && conclusion == o.conclusion;
  }
};

inline std::string render(Rule const& r, Signature const& sig,
                          VarNamer const& names = default_var_name) {
  std::string out;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    out += (i ? ", " : "") + render(r.premises[i], sig, names);
  }
  out += out.empty() ? "|- " : " |- ";
  return out + render(r.conclusion, sig, names);
}

/// A finite Hilbert calculus. Rules are stored canonically and duplicates
/// (after canonical renaming) are dropped.
class HilbertCalculus {
 public:
  HilbertCalculus() = default;
  HilbertCalculus(Signature sig, std::vector<Rule> const& rules) : sig_(std::move(sig)) {
    for (auto const& r : rules) {
      add(r);
    }
  }

  void add(Rule const& r) {
    for (auto const& p : r.premises) {
      check(p);
    }
    check(r.conclusion);
    auto c = r.canonical();
    for (auto const& existing : rules_) {
      if (existing == c) {
        return;
      }
    }
    rules_.push_back(std::move(c));
  }

  Signature const& signature() const noexcept { return sig_; }
  std::vector<Rule> const& rules() const noexcept { return rules_; }

  bool has_axiom() const {
    for (auto const& r : rules_) {
      if (r.is_axiom()) {
        return true;
      }
    }
    return false;
  }

 private:
  void check(Term const& t) const {
    if (!well_formed(t, sig_)) {
      throw Error("rule term is not well formed over the signature");
    }
  }

  Signature sig_;
  std::vector<Rule> rules_;
};

/// A logic given by a Hilbert calculus, a finite family of finite matrices,
/// or both (in which case every rule must be valid in every matrix; see
/// first_unsound_rule in consequence.hpp).
struct LogicPresentation {
  std::string name;
  Signature signature;
  std::optional<HilbertCalculus> calculus;
  std::vector<Matrix> matrices;

  bool has_calculus() const { return calculus.has_value(); }
  bool has_matrices() const { return !matrices.empty(); }

  HilbertCalculus const& require_calculus() const {
    if (!calculus) {
      throw Error("logic '" + name + "' has no Hilbert presentation; filter-dependent "
                  "operations need one");
    }
    return *calculus;
  }
};

}  // namespace lbw
