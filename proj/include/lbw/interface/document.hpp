#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lbw/definability/translation.hpp"
#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"
#include "lbw/kernel/matrix.hpp"
#include "lbw/kernel/signature.hpp"
#include "lbw/logic/calculus.hpp"

namespace lbw::dsl {

struct Span {
  std::size_t line = 1;
  std::size_t column = 1;

  bool operator==(Span const&) const = default;
};

/// A diagnostic for a spec file: lexical, syntactic, arity, range or
/// resolution errors. what() reads "line:column: message".
class SpecError : public Error {
 public:
  SpecError(Span span, std::string const& message)
      : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
        span_(span),
        message_(message) {}

  Span span() const noexcept { return span_; }
  std::string const& message() const noexcept { return message_; }

 private:
  Span span_;
  std::string message_;
};

struct SignatureDecl {
  std::string name;
  Signature signature;
  Span span;
};

struct AlgebraDecl {
  std::string name;
  std::string signature;
  FiniteAlgebra algebra;
  Span span;
};

struct MatrixDecl {
  std::string name;
  std::string algebra;
  Matrix matrix;
  Span span;
};

struct CalculusDecl {
  std::string name;
  std::string signature;
  HilbertCalculus calculus;
  Span span;
};

struct TranslationDecl {
  std::string name;
  std::string signature;
  Translation translation;
  Span span;
};

/// A logic presented by an optional calculus and any number of matrices.
struct LogicDecl {
  std::string name;
  std::string signature;
  std::optional<std::string> calculus;
  std::vector<std::string> matrices;
  Span span;
};

enum class TaskKind { classify, detect, theorems, derive, modstar, profile, filters, defines, synthesize };

inline constexpr std::pair<TaskKind, char const*> kTaskKinds[] = {
    {TaskKind::classify, "classify"}, {TaskKind::detect, "detect"},
    {TaskKind::theorems, "theorems"}, {TaskKind::derive, "derive"},
    {TaskKind::modstar, "modstar"},   {TaskKind::profile, "profile"},
    {TaskKind::filters, "filters"},   {TaskKind::defines, "defines"},
    {TaskKind::synthesize, "synthesize"},
};

inline char const* to_string(TaskKind k) {
  for (auto const& [kind, name] : kTaskKinds) {
    if (kind == k) {
      return name;
    }
  }
  return "?";
}

/// `algebras(S, maxsize=N)` or an explicit list `{A, B}` of algebra or
/// matrix names, depending on the task.
struct FamilyRef {
  std::optional<std::string> signature;  // set for enumerated families
  std::size_t max_size = 0;
  std::vector<std::string> names;
  Span span;

  bool enumerated() const { return signature.has_value(); }
  bool operator==(FamilyRef const& o) const {
    return signature == o.signature && max_size == o.max_size && names == o.names;
  }
};

/// Bounds written in a task. Unset fields fall back to the command line and
/// then to the library defaults. jobs = 0 means one per hardware thread.
struct TaskBounds {
  std::optional<std::size_t> depth;
  std::optional<std::size_t> params;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> max_size;
  std::optional<std::size_t> budget;

  bool operator==(TaskBounds const&) const = default;
};

enum class TargetKind { none, logic, calculus, matrix, translation };

struct TaskDecl {
  TaskKind kind = TaskKind::classify;
  std::string target;  // empty for synthesize
  TargetKind target_kind = TargetKind::none;
  std::optional<FamilyRef> family;
  std::optional<Rule> query;  // derive
  bool almost = false;        // defines, synthesize
  bool bounded = false;       // synthesize
  bool fregean = false;       // classify
  TaskBounds bounds;
  Span span;

  bool operator==(TaskDecl const& o) const {
    return kind == o.kind && target == o.target && target_kind == o.target_kind &&
           family == o.family && query == o.query && almost == o.almost &&
           bounded == o.bounded && fregean == o.fregean && bounds == o.bounds;
  }
};

enum class DeclKind { signature, algebra, matrix, calculus, translation, logic, task };

/// A parsed and resolved spec file. Names are unique per kind and every
/// reference points to an earlier declaration.
struct SpecDocument {
  std::vector<SignatureDecl> signatures;
  std::vector<AlgebraDecl> algebras;
  std::vector<MatrixDecl> matrices;
  std::vector<CalculusDecl> calculi;
  std::vector<TranslationDecl> translations;
  std::vector<LogicDecl> logics;
  std::vector<TaskDecl> tasks;
  std::vector<std::pair<DeclKind, std::size_t>> order;  // declaration order

  template <class Decl>
  static Decl const* find_in(std::vector<Decl> const& v, std::string const& name) {
    for (auto const& d : v) {
      if (d.name == name) {
        return &d;
      }
    }
    return nullptr;
  }

  SignatureDecl const* find_signature(std::string const& n) const { return find_in(signatures, n); }
  AlgebraDecl const* find_algebra(std::string const& n) const { return find_in(algebras, n); }
  MatrixDecl const* find_matrix(std::string const& n) const { return find_in(matrices, n); }
  CalculusDecl const* find_calculus(std::string const& n) const { return find_in(calculi, n); }
  TranslationDecl const* find_translation(std::string const& n) const {
    return find_in(translations, n);
  }
  LogicDecl const* find_logic(std::string const& n) const { return find_in(logics, n); }

  Signature const& signature(std::string const& n) const {
    if (auto const* s = find_signature(n)) {
      return s->signature;
    }
    throw Error("unknown signature '" + n + "'");
  }

  std::string const& signature_of_matrix(MatrixDecl const& m) const {
    return find_algebra(m.algebra)->signature;
  }

  /// The logic a task target denotes: a logic declaration, a calculus, or
  /// a single matrix.
  LogicPresentation presentation(std::string const& name, TargetKind kind) const {
    LogicPresentation p;
    p.name = name;
    switch (kind) {
      case TargetKind::logic: {
        auto const& l = *find_logic(name);
        p.signature = signature(l.signature);
        if (l.calculus) {
          p.calculus = find_calculus(*l.calculus)->calculus;
        }
        for (auto const& m : l.matrices) {
          p.matrices.push_back(find_matrix(m)->matrix);
        }
        return p;
      }
      case TargetKind::calculus: {
        auto const& c = *find_calculus(name);
        p.signature = signature(c.signature);
        p.calculus = c.calculus;
        return p;
      }
      case TargetKind::matrix: {
        auto const& m = *find_matrix(name);
        p.signature = m.matrix.algebra.signature();
        p.matrices.push_back(m.matrix);
        return p;
      }
      default:
        throw Error("'" + name + "' does not denote a logic");
    }
  }
};

}  // namespace lbw::dsl
