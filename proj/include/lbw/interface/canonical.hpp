#pragma once

#include <cstddef>
#include <string>

#include "lbw/interface/document.hpp"

namespace lbw::dsl {

namespace detail {

inline std::string join_names(std::vector<std::string> const& v, char const* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? sep : "") + v[i];
  }
  return out;
}

inline void table_literal(FiniteAlgebra const& a, std::size_t op, std::size_t depth,
                          std::size_t& at, std::string& out) {
  if (depth == 0) {
    out += a.name(a.table(op)[at++]);
    return;
  }
  out += '[';
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += i ? "," : "";
    table_literal(a, op, depth - 1, at, out);
  }
  out += ']';
}

}  // namespace detail

/// An operation table in DSL form: nested lists, row-major in the first
/// argument; a constant is just its value.
inline std::string table_literal(FiniteAlgebra const& a, std::size_t op) {
  std::string out;
  std::size_t at = 0;
  detail::table_literal(a, op, a.signature().arity(op), at, out);
  return out;
}

inline std::string render_signature_body(Signature const& sig) {
  std::string out = "{ ";
  for (std::size_t i = 0; i < sig.size(); ++i) {
    out += (i ? ", " : "") + sig.name(i) + "/" + std::to_string(sig.arity(i));
  }
  return out + (sig.empty() ? "}" : " }");
}

inline std::string render_algebra_body(FiniteAlgebra const& a) {
  std::string out = "{ universe = {" + detail::join_names(a.names(), ",") + "}";
  auto const& sig = a.signature();
  for (std::size_t op = 0; op < sig.size(); ++op) {
    out += "; " + sig.name(op) + " = " + (sig.arity(op) ? "table " : "") + table_literal(a, op);
  }
  return out + " }";
}

inline std::string render_family(FamilyRef const& f) {
  if (f.enumerated()) {
    return "algebras(" + *f.signature + ", maxsize=" + std::to_string(f.max_size) + ")";
  }
  return "{" + detail::join_names(f.names, ", ") + "}";
}

inline std::string render_bounds(TaskBounds const& b) {
  std::vector<std::string> parts;
  auto add = [&](char const* key, std::optional<std::size_t> const& v) {
    if (v) {
      parts.push_back(std::string(key) + "=" + std::to_string(*v));
    }
  };
  add("depth", b.depth);
  add("params", b.params);
  if (b.jobs) {
    parts.push_back(*b.jobs == 0 ? "jobs=auto" : "jobs=" + std::to_string(*b.jobs));
  }
  add("maxsize", b.max_size);
  add("budget", b.budget);
  return "{ " + detail::join_names(parts, ", ") + " }";
}

inline std::string render_task(SpecDocument const& doc, TaskDecl const& t) {
  std::string out = std::string("task ") + to_string(t.kind);
  if (!t.target.empty()) {
    out += " " + t.target;
  }
  if (t.query) {
    std::string sig;
    switch (t.target_kind) {
      case TargetKind::logic:
        sig = doc.find_logic(t.target)->signature;
        break;
      case TargetKind::calculus:
        sig = doc.find_calculus(t.target)->signature;
        break;
      default:
        sig = doc.signature_of_matrix(*doc.find_matrix(t.target));
    }
    out += " { " + render(t.query->canonical(), doc.signature(sig)) + " }";
  }
  if (t.family) {
    out += " over " + render_family(*t.family);
  }
  if (t.almost) {
    out += " almost";
  }
  if (t.bounded) {
    out += " bounded";
  }
  if (t.fregean) {
    out += " assume fregean";
  }
  if (!(t.bounds == TaskBounds{})) {
    out += " bounds " + render_bounds(t.bounds);
  }
  return out;
}

/// The canonical text of a document: one declaration per line in source
/// order, constructed algebras written out as tables. Parsing it yields
/// the same document.
inline std::string render_canonical(SpecDocument const& doc) {
  std::string out;
  for (auto const& [kind, i] : doc.order) {
    switch (kind) {
      case DeclKind::signature: {
        auto const& d = doc.signatures[i];
        out += "signature " + d.name + " " + render_signature_body(d.signature);
        break;
      }
      case DeclKind::algebra: {
        auto const& d = doc.algebras[i];
        out += "algebra " + d.name + " over " + d.signature + " " + render_algebra_body(d.algebra);
        break;
      }
      case DeclKind::matrix: {
        auto const& d = doc.matrices[i];
        out += "matrix " + d.name + " = (" + d.algebra + ", " + d.matrix.render() + ")";
        break;
      }
      case DeclKind::calculus: {
        auto const& d = doc.calculi[i];
        auto const& sig = doc.signature(d.signature);
        std::vector<std::string> rules;
        for (auto const& r : d.calculus.rules()) {
          rules.push_back("rule " + render(r, sig));
        }
        out += "calculus " + d.name + " over " + d.signature + " { " +
               detail::join_names(rules, "; ") + (rules.empty() ? "}" : " }");
        break;
      }
      case DeclKind::translation: {
        auto const& d = doc.translations[i];
        auto const& sig = doc.signature(d.signature);
        std::vector<std::string> eqs;
        for (auto const& e : d.translation.equations) {
          eqs.push_back(render(e, sig));
        }
        out += "translation " + d.name + " over " + d.signature + " params " +
               std::to_string(d.translation.params) + " { " + detail::join_names(eqs, "; ") +
               (eqs.empty() ? "}" : " }");
        break;
      }
      case DeclKind::logic: {
        auto const& d = doc.logics[i];
        std::vector<std::string> items;
        if (d.calculus) {
          items.push_back("calculus " + *d.calculus);
        }
        for (auto const& m : d.matrices) {
          items.push_back("matrix " + m);
        }
        out += "logic " + d.name + " over " + d.signature + " { " +
               detail::join_names(items, "; ") + " }";
        break;
      }
      case DeclKind::task:
        out += render_task(doc, doc.tasks[i]);
        break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace lbw::dsl
