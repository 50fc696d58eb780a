#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/term.hpp"

namespace lbw {

enum class Verdict { derived, refuted, unknown };

inline char const* to_string(Verdict v) {
  switch (v) {
    case Verdict::derived:
      return "derived";
    case Verdict::refuted:
      return "refuted";
    case Verdict::unknown:
      return "unknown";
  }
  return "?";
}

struct ProofStep {
  enum class Kind {
    hypothesis,  // a member of Gamma
    rule,        // instance of calculus rule `rule` under `substitution`
    semantic,    // valid in every presenting matrix (matrix presentations)
  };
  Term formula;
  Kind kind = Kind::hypothesis;
  std::size_t rule = 0;
  std::vector<std::size_t> premises;  // indices of earlier steps
  std::vector<Term> substitution;     // image of rule variable i
};

/// A matrix together with the data that makes it refute a query: an
/// assignment of the query variables, or a nonempty subuniverse disjoint
/// from the designated set (for theorem-freeness).
struct Countermodel {
  Matrix matrix;
  std::vector<Elem> assignment;
  std::optional<ElemSet> subuniverse;
};

struct TriStateVerdict {
  Verdict verdict = Verdict::unknown;
  std::vector<ProofStep> proof;
  std::optional<Countermodel> countermodel;
  std::string detail;  // human-readable witness or the bounds reached

  static TriStateVerdict derived(std::vector<ProofStep> proof, std::string detail) {
    return {Verdict::derived, std::move(proof), std::nullopt, std::move(detail)};
  }
  static TriStateVerdict refuted(Countermodel cm, std::string detail) {
    return {Verdict::refuted, {}, std::move(cm), std::move(detail)};
  }
  static TriStateVerdict unknown(std::string bounds) {
    return {Verdict::unknown, {}, std::nullopt, std::move(bounds)};
  }
};

}  // namespace lbw
