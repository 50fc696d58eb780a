#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "lbw/definability/classify.hpp"
#include "lbw/interface/cache.hpp"
#include "lbw/interface/canonical.hpp"
#include "lbw/interface/document.hpp"
#include "lbw/interface/report.hpp"
#include "lbw/kernel/enumerate.hpp"
#include "lbw/logic/consequence.hpp"

namespace lbw {

/// Command-line overrides (they win over task bounds) and the cache.
struct RunOptions {
  std::optional<std::size_t> depth{};
  std::optional<std::size_t> params{};
  std::optional<std::size_t> jobs{};
  std::optional<std::size_t> max_size{};
  std::optional<std::size_t> budget{};
  ResultCache* cache = nullptr;
};

/// Bounds a task actually runs with. `jobs` never affects results and is
/// kept out of the report body.
struct EffectiveBounds {
  std::size_t depth = 2;
  std::size_t params = 1;
  std::size_t max_size = 3;
  std::optional<std::size_t> budget;
  std::size_t jobs = 1;

  Json to_json() const {
    return Json{{"depth", depth},
                {"params", params},
                {"maxsize", max_size},
                {"budget", budget ? Json(*budget) : Json(nullptr)}};
  }

  std::size_t cap(std::size_t fallback) const { return budget ? *budget : fallback; }
  DerivationBudget derivation() const {
    DerivationBudget d;
    d.depth = std::max(d.depth, depth);
    d.instances = cap(d.instances);
    d.terms = cap(d.terms);
    return d;
  }
};

inline EffectiveBounds effective_bounds(dsl::TaskDecl const& t, RunOptions const& o) {
  EffectiveBounds b;
  auto pick = [](auto const& cli, auto const& task, std::size_t fallback) {
    return cli ? *cli : task ? *task : fallback;
  };
  b.depth = pick(o.depth, t.bounds.depth, b.depth);
  b.params = pick(o.params, t.bounds.params, b.params);
  std::optional<std::size_t> family_size;
  if (t.family && t.family->enumerated()) {
    family_size = t.family->max_size;
  }
  b.max_size = pick(o.max_size, family_size ? family_size : t.bounds.max_size, b.max_size);
  b.budget = o.budget ? o.budget : t.bounds.budget;
  b.jobs = pick(o.jobs, t.bounds.jobs, 1);
  if (b.jobs == 0) {
    b.jobs = std::max(1u, std::thread::hardware_concurrency());
  }
  return b;
}

inline std::string task_id(dsl::SpecDocument const& doc, std::size_t index) {
  auto const& t = doc.tasks.at(index);
  return std::to_string(index + 1) + "-" + dsl::to_string(t.kind) +
         (t.target.empty() ? "" : "-" + t.target);
}

namespace detail {

// Declarations a task depends on, rendered canonically in source order.
inline std::string dependency_text(dsl::SpecDocument const& doc, dsl::TaskDecl const& t) {
  using dsl::DeclKind;
  std::set<std::pair<DeclKind, std::string>> need;
  auto add_sig = [&](std::string const& s) { need.emplace(DeclKind::signature, s); };
  auto add_alg = [&](std::string const& a) {
    need.emplace(DeclKind::algebra, a);
    add_sig(doc.find_algebra(a)->signature);
  };
  auto add_mat = [&](std::string const& m) {
    need.emplace(DeclKind::matrix, m);
    add_alg(doc.find_matrix(m)->algebra);
  };
  auto add_calc = [&](std::string const& c) {
    need.emplace(DeclKind::calculus, c);
    add_sig(doc.find_calculus(c)->signature);
  };
  switch (t.target_kind) {
    case dsl::TargetKind::logic: {
      auto const& l = *doc.find_logic(t.target);
      need.emplace(DeclKind::logic, l.name);
      add_sig(l.signature);
      if (l.calculus) {
        add_calc(*l.calculus);
      }
      for (auto const& m : l.matrices) {
        add_mat(m);
      }
      break;
    }
    case dsl::TargetKind::calculus:
      add_calc(t.target);
      break;
    case dsl::TargetKind::matrix:
      add_mat(t.target);
      break;
    case dsl::TargetKind::translation:
      need.emplace(DeclKind::translation, t.target);
      add_sig(doc.find_translation(t.target)->signature);
      break;
    case dsl::TargetKind::none:
      break;
  }
  if (t.family) {
    if (t.family->enumerated()) {
      add_sig(*t.family->signature);
    }
    bool const matrices =
        t.kind == dsl::TaskKind::defines || t.kind == dsl::TaskKind::synthesize;
    for (auto const& n : t.family->names) {
      matrices ? add_mat(n) : add_alg(n);
    }
  }
  auto name_of = [&](DeclKind k, std::size_t i) -> std::string const& {
    switch (k) {
      case DeclKind::signature:
        return doc.signatures[i].name;
      case DeclKind::algebra:
        return doc.algebras[i].name;
      case DeclKind::matrix:
        return doc.matrices[i].name;
      case DeclKind::calculus:
        return doc.calculi[i].name;
      case DeclKind::translation:
        return doc.translations[i].name;
      case DeclKind::logic:
        return doc.logics[i].name;
      default:
        return doc.tasks[i].target;
    }
  };
  dsl::SpecDocument sub = doc;
  sub.order.clear();
  for (auto const& [k, i] : doc.order) {
    if (k != DeclKind::task && need.count({k, name_of(k, i)})) {
      sub.order.emplace_back(k, i);
    }
  }
  return dsl::render_canonical(sub);
}

}  // namespace detail

/// Key of a task result: SHA-256 over the operation, the canonical text of
/// everything it reads, the effective bounds and the algorithm version.
inline std::string cache_key(dsl::SpecDocument const& doc, std::size_t index,
                             EffectiveBounds const& b, int algorithm = kAlgorithmVersion) {
  auto const& t = doc.tasks.at(index);
  std::string text = "lbw task result\nalgorithm " + std::to_string(algorithm) + "\nid " +
                     task_id(doc, index) + "\nop " + dsl::render_task(doc, t) + "\nbounds " +
                     b.to_json().dump() + "\ninputs\n" + detail::dependency_text(doc, t);
  return sha256_hex(text);
}

namespace detail {

struct Family {
  std::vector<FiniteAlgebra> algebras;
  std::vector<std::string> labels;
  std::string description;
  bool enumerated = false;

  Json to_json() const { return Json{{"description", description}, {"size", algebras.size()}}; }
};

inline Family algebra_family(dsl::SpecDocument const& doc, dsl::TaskDecl const& t,
                             EffectiveBounds const& b) {
  Family f;
  auto enumerate = [&](std::string const& sig_name) {
    f.algebras = enumerate_algebras_up_to(doc.signature(sig_name), b.max_size, true);
    for (std::size_t i = 0; i < f.algebras.size(); ++i) {
      f.labels.push_back("#" + std::to_string(i));
    }
    f.description = "algebras(" + sig_name + ", maxsize=" + std::to_string(b.max_size) + ")";
    f.enumerated = true;
  };
  if (t.family && t.family->enumerated()) {
    enumerate(*t.family->signature);
  } else if (t.family) {
    for (auto const& n : t.family->names) {
      f.algebras.push_back(doc.find_algebra(n)->algebra);
      f.labels.push_back(n);
    }
    f.description = dsl::render_family(*t.family);
  } else {
    std::vector<std::string> names;
    if (t.target_kind == dsl::TargetKind::logic) {
      for (auto const& m : doc.find_logic(t.target)->matrices) {
        names.push_back(doc.find_matrix(m)->algebra);
      }
    } else if (t.target_kind == dsl::TargetKind::matrix) {
      names.push_back(doc.find_matrix(t.target)->algebra);
    }
    if (names.empty()) {
      std::string sig = t.target_kind == dsl::TargetKind::logic
                            ? doc.find_logic(t.target)->signature
                            : doc.find_calculus(t.target)->signature;
      enumerate(sig);
    } else {
      for (auto const& n : names) {
        if (std::find(f.labels.begin(), f.labels.end(), n) == f.labels.end()) {
          f.algebras.push_back(doc.find_algebra(n)->algebra);
          f.labels.push_back(n);
        }
      }
      f.description = "algebras of the presenting matrices";
    }
  }
  return f;
}

inline std::vector<Matrix> matrix_family(dsl::SpecDocument const& doc, dsl::TaskDecl const& t) {
  std::vector<Matrix> out;
  for (auto const& n : t.family->names) {
    out.push_back(doc.find_matrix(n)->matrix);
  }
  return out;
}

inline Signature const& task_signature(dsl::SpecDocument const& doc, dsl::TaskDecl const& t,
                                       LogicPresentation const* p) {
  if (p) {
    return p->signature;
  }
  if (t.target_kind == dsl::TargetKind::translation) {
    return doc.signature(doc.find_translation(t.target)->signature);
  }
  return doc.find_matrix(t.family->names.front())->matrix.algebra.signature();
}

[[noreturn]] inline void unverified(std::string const& what) {
  throw Error("internal error: " + what + " failed re-verification");
}

inline Json synthesis_json(SynthesisResult const& s, Signature const& sig) {
  Json w = Json::array();
  for (auto const& t : s.witnesses) {
    w.push_back(render(t, sig, param_var_name));
  }
  return Json{{"result", s.translation ? "found" : s.definitive ? "none" : "unknown"},
              {"mode", to_string(s.mode)},
              {"definitive", s.definitive},
              {"translation", s.translation ? Json(render(*s.translation, sig)) : Json()},
              {"collapsed", s.collapsed ? Json(render(*s.collapsed, sig)) : Json()},
              {"functions", s.functions},
              {"surviving_pairs", s.surviving_pairs},
              {"witnesses", std::move(w)},
              {"note", s.note}};
}

inline std::string row_text(FiniteAlgebra const& a, ElemSet const& s) { return a.render_set(s); }

// ---- task handlers: each fills `out` and returns the status ----

inline std::string run_classify(LogicPresentation const& p, Family const& fam,
                                dsl::TaskDecl const& t, EffectiveBounds const& b, Json& out) {
  ClassifyBounds cb;
  cb.depth = b.depth;
  cb.params = b.params;
  cb.jobs = b.jobs;
  cb.free_budget = b.cap(cb.free_budget);
  cb.term_budget = b.cap(cb.term_budget);
  cb.filter_budget = b.cap(cb.filter_budget);
  cb.derivation = b.derivation();
  auto r = classify(p, fam.algebras, cb, Assumptions{t.fregean});
  auto const& sig = p.signature;

  std::vector<Matrix> all, proper;
  for (auto const& e : r.modstar) {
    all.push_back(e.matrix);
    if (!e.almost_trivial) {
      proper.push_back(e.matrix);
    }
  }
  Json levels = Json::array();
  for (auto const& l : r.levels) {
    Json j{{"label", to_string(l.level)}, {"status", to_string(l.status)}, {"evidence", l.evidence}};
    if (l.translation) {
      bool const full = l.level == Level::equational || l.level == Level::parametrized;
      if (!defines_truth(*l.translation, full ? all : proper, !full)) {
        unverified("translation for " + std::string(to_string(l.level)));
      }
      j["translation"] = render(*l.translation, sig);
    }
    levels.push_back(std::move(j));
  }

  // Labels of reduced models: family labels, or the presenting matrices
  // they reduce when there is no calculus.
  auto model_label = [&](ModelEntry const& e) {
    return p.has_calculus() ? fam.labels.at(e.algebra_index)
                            : "reduction of matrix " + std::to_string(e.algebra_index);
  };
  Json members = Json::array();
  Json algebras = Json::object();
  std::size_t trivial = 0;
  for (auto const& e : r.modstar) {
    if (e.almost_trivial) {
      ++trivial;
      continue;
    }
    auto label = model_label(e);
    members.push_back(Json{{"algebra", label},
                           {"size", e.matrix.algebra.size()},
                           {"designated", to_json::set(e.matrix.algebra, e.matrix.designated)}});
    if (!algebras.contains(label)) {
      algebras[label] = to_json::algebra(e.matrix.algebra);
    }
  }

  Json props = Json::array();
  static constexpr char const* kNames[6] = {
      "injective", "order-reflecting", "completely order-reflecting",
      "almost injective", "almost order-reflecting", "almost completely order-reflecting"};
  for (std::size_t k = 0; k < 6 && !r.algebras.empty(); ++k) {
    std::size_t tested = 0, failures = 0;
    std::string first;
    for (auto const& f : r.algebras) {
      if (f.skipped) {
        continue;
      }
      ++tested;
      if (!f.checks[k]) {
        if (failures++ == 0) {
          first = fam.labels.at(f.index) + ": " + f.checks[k].detail;
        }
      }
    }
    props.push_back(Json{{"property", kNames[k]},
                         {"tested", tested},
                         {"failures", failures},
                         {"first failure", first.empty() ? Json() : Json(first)}});
  }

  auto term_or_null = [&](std::optional<Term> const& t) {
    return t ? Json(render(*t, sig)) : Json();
  };
  Json eq = Json();
  if (r.equational_synthesis) {
    eq = synthesis_json(*r.equational_synthesis, sig);
    if (r.equational_member) {
      auto const& e = r.modstar[*r.equational_member];
      eq["member"] = model_label(e) + " with " + e.matrix.render();
    }
  }
  Json proto{{"status", to_string(r.protoalgebraic.verdict.verdict)},
             {"detail", r.protoalgebraic.verdict.detail}};
  if (!r.protoalgebraic.delta.empty()) {
    Json d = Json::array();
    for (auto const& t : r.protoalgebraic.delta) {
      d.push_back(render(t, sig));
    }
    proto["delta"] = std::move(d);
  }

  out["logic"] = p.name;
  out["family"] = fam.to_json();
  out["levels"] = std::move(levels);
  out["theorems"] = to_json::verdict(r.theorems, sig);
  out["reduced_models"] = Json{{"count", r.modstar.size()},
                               {"almost_trivial", trivial},
                               {"members", std::move(members)},
                               {"algebras", std::move(algebras)}};
  out["operator_properties"] = std::move(props);
  out["equational_synthesis"] = std::move(eq);
  out["parametrized_synthesis"] =
      r.parametrized_synthesis ? synthesis_json(*r.parametrized_synthesis, sig) : Json();
  out["protoconjunction"] = term_or_null(r.protoconjunction);
  out["protodisjunction"] = term_or_null(r.protodisjunction);
  out["protoalgebraic"] = std::move(proto);
  out["hints"] = r.hints;
  out["notes"] = r.notes;
  return "ok";
}

inline Json protoalgebra_json(ProtoalgebraResult const& r, LogicPresentation const& p,
                              Family const& fam, EffectiveBounds const& b) {
  auto const& sig = p.signature;
  Json j{{"status", to_string(r.verdict.verdict)}, {"detail", r.verdict.detail}};
  if (!r.delta.empty()) {
    Json d = Json::array();
    for (auto const& t : r.delta) {
      d.push_back(render(t, sig));
    }
    j["delta"] = std::move(d);
  }
  if (r.verdict.verdict == Verdict::refuted && r.algebra_index && r.row) {
    auto const& a = fam.algebras.at(*r.algebra_index);
    auto prof = operator_profile(p.require_calculus(), a, b.cap(kDefaultFilterBudget));
    auto const& row = prof.rows.at(*r.row);
    if (row.leibniz == row.suszko) {
      unverified("protoalgebraicity refutation");
    }
    j["witness"] = Json{{"algebra", fam.labels.at(*r.algebra_index)},
                        {"filter", to_json::set(a, row.filter)},
                        {"leibniz", to_json::partition(a, row.leibniz)},
                        {"suszko", to_json::partition(a, row.suszko)}};
  }
  return j;
}

inline std::string run_detect(LogicPresentation const& p, Family const& fam,
                              EffectiveBounds const& b, Json& out) {
  DetectionBounds db;
  db.depth = b.depth;
  db.term_budget = b.cap(db.term_budget);
  db.derivation = b.derivation();
  db.filter_budget = b.cap(db.filter_budget);
  db.jobs = b.jobs;
  auto const& sig = p.signature;
  auto conj = detect_protoconjunction(p, db);
  auto disj = detect_protodisjunction(p, db);
  auto proto = detect_protoalgebraic(p, fam.algebras, db);
  out["logic"] = p.name;
  out["family"] = fam.to_json();
  out["protoconjunction"] = conj ? Json(render(*conj, sig)) : Json();
  out["protodisjunction"] = disj ? Json(render(*disj, sig)) : Json();
  out["protoalgebraic"] = protoalgebra_json(proto, p, fam, b);
  return "ok";
}

inline std::string run_theorems(LogicPresentation const& p, EffectiveBounds const& b, Json& out) {
  auto v = has_theorems(p, b.cap(kDefaultFunctionBudget), b.depth);
  if (v.verdict == Verdict::refuted && v.countermodel && v.countermodel->subuniverse &&
      !check_theorem_free_witness(*v.countermodel)) {
    unverified("theorem-freeness witness");
  }
  auto j = to_json::verdict(v, p.signature);
  out["logic"] = p.name;
  out["detail"] = j["detail"];
  if (j.contains("witness")) {
    out["witness"] = j["witness"];
  }
  return j["status"].get<std::string>();
}

inline std::string run_derive(LogicPresentation const& p, Rule const& q, EffectiveBounds const& b,
                              Json& out) {
  TriStateVerdict v;
  if (p.has_matrices()) {
    v = TriStateVerdict::derived({}, "valid in every presenting matrix");
    for (std::size_t i = 0; i < p.matrices.size(); ++i) {
      if (auto asg = refuting_assignment(p.matrices[i], q.premises, q.conclusion)) {
        v = TriStateVerdict::refuted(Countermodel{p.matrices[i], *asg, std::nullopt},
                                     "fails in presenting matrix " + std::to_string(i));
        break;
      }
    }
  } else {
    auto const& calc = p.require_calculus();
    v = derivable(calc, q.premises, q.conclusion, b.derivation());
    if (v.verdict == Verdict::derived && !check_proof(calc, q.premises, v.proof, q.conclusion)) {
      unverified("proof");
    }
    if (v.verdict == Verdict::refuted &&
        !check_countermodel(calc, q.premises, q.conclusion, *v.countermodel)) {
      unverified("countermodel");
    }
  }
  auto j = to_json::verdict(v, p.signature);
  out["logic"] = p.name;
  out["query"] = render(q, p.signature);
  out["detail"] = j["detail"];
  if (j.contains("witness")) {
    out["witness"] = j["witness"];
  }
  return j["status"].get<std::string>();
}

inline std::string run_modstar(LogicPresentation const& p, Family const& fam,
                               EffectiveBounds const& b, Json& out) {
  auto models = modstar(p.require_calculus(), fam.algebras, b.jobs);
  Json members = Json::array();
  Json algebras = Json::object();
  for (auto const& e : models) {
    auto const& label = fam.labels.at(e.algebra_index);
    members.push_back(Json{{"algebra", label},
                           {"size", e.matrix.algebra.size()},
                           {"designated", to_json::set(e.matrix.algebra, e.matrix.designated)}});
    if (fam.enumerated && !algebras.contains(label)) {
      algebras[label] = to_json::algebra(e.matrix.algebra);
    }
  }
  out["logic"] = p.name;
  out["family"] = fam.to_json();
  out["count"] = models.size();
  out["members"] = std::move(members);
  if (fam.enumerated) {
    out["algebras"] = std::move(algebras);
  }
  return "ok";
}

inline std::string run_profile(LogicPresentation const& p, Family const& fam,
                               EffectiveBounds const& b, Json& out) {
  Json profiles = Json::array();
  for (std::size_t i = 0; i < fam.algebras.size(); ++i) {
    auto const& a = fam.algebras[i];
    auto prof = operator_profile(p.require_calculus(), a, b.cap(kDefaultFilterBudget));
    Json rows = Json::array();
    for (auto const& row : prof.rows) {
      if (!row.suszko.refines(row.leibniz)) {
        unverified("Suszko below Leibniz");
      }
      rows.push_back(Json{{"filter", row_text(a, row.filter)},
                          {"leibniz", row.leibniz.render(a)},
                          {"suszko", row.suszko.render(a)}});
    }
    Json props = Json::array();
    static constexpr char const* kNames[3] = {"injective", "order-reflecting",
                                              "completely order-reflecting"};
    for (int almost = 0; almost < 2; ++almost) {
      PropertyCheck checks[3] = {check_injective(prof, almost), check_order_reflecting(prof, almost),
                                 check_completely_order_reflecting(prof, almost)};
      for (int k = 0; k < 3; ++k) {
        props.push_back(Json{{"property", std::string(almost ? "almost " : "") + kNames[k]},
                             {"holds", checks[k].holds},
                             {"witness", checks[k].holds ? Json() : Json(checks[k].detail)}});
      }
    }
    profiles.push_back(Json{{"algebra", fam.labels[i]},
                            {"filters", prof.size()},
                            {"rows", std::move(rows)},
                            {"properties", std::move(props)}});
  }
  out["logic"] = p.name;
  out["family"] = fam.to_json();
  out["profiles"] = std::move(profiles);
  return "ok";
}

inline std::string run_filters(LogicPresentation const& p, Family const& fam,
                               EffectiveBounds const& b, Json& out) {
  Json lattices = Json::array();
  for (std::size_t i = 0; i < fam.algebras.size(); ++i) {
    auto const& a = fam.algebras[i];
    FilterLattice lat(p.require_calculus(), a, b.cap(kDefaultFilterBudget));
    Json filters = Json::array();
    for (auto const& f : lat.filters()) {
      filters.push_back(row_text(a, f));
    }
    lattices.push_back(
        Json{{"algebra", fam.labels[i]}, {"count", lat.size()}, {"filters", std::move(filters)}});
  }
  out["logic"] = p.name;
  out["family"] = fam.to_json();
  out["lattices"] = std::move(lattices);
  return "ok";
}

inline std::string run_defines(dsl::SpecDocument const& doc, dsl::TaskDecl const& t, Json& out) {
  auto const& td = *doc.find_translation(t.target);
  auto const& sig = doc.signature(td.signature);
  auto fam = matrix_family(doc, t);
  auto d = defines_truth(td.translation, fam, t.almost);
  Json sols = Json::array();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    auto const& a = fam[i].algebra;
    sols.push_back(Json{{"matrix", t.family->names[i]},
                        {"designated", a.render_set(fam[i].designated)},
                        {"solutions", a.render_set(solutions(td.translation, a))}});
  }
  out["translation"] = render(td.translation, sig);
  out["almost"] = t.almost;
  out["members"] = std::move(sols);
  if (!d.holds) {
    auto const& w = *d.witness;
    auto const& m = fam[w.matrix_index];
    bool const sol = solutions(td.translation, m.algebra).contains(w.element);
    if (sol == m.designated.contains(w.element)) {
      unverified("truth-definition counterexample");
    }
    out["witness"] = Json{{"matrix", t.family->names[w.matrix_index]},
                          {"element", m.algebra.name(w.element)},
                          {"designated", m.designated.contains(w.element)},
                          {"solution", sol}};
    return "refuted";
  }
  return "holds";
}

inline std::string run_synthesize(dsl::SpecDocument const& doc, dsl::TaskDecl const& t,
                                  EffectiveBounds const& b, Json& out) {
  auto fam = matrix_family(doc, t);
  auto const& sig = fam.front().algebra.signature();
  SynthesisOptions opt;
  opt.mode = t.bounded ? SynthesisMode::bounded : SynthesisMode::exact;
  opt.depth = b.depth;
  opt.free_budget = b.cap(opt.free_budget);
  opt.term_budget = b.cap(opt.term_budget);
  opt.almost = t.almost;
  auto res = synthesize_translation(fam, b.params, opt);
  if (res.translation && !defines_truth(*res.translation, fam, t.almost)) {
    unverified("synthesized translation");
  }
  out["family"] = dsl::render_family(*t.family);
  out["params"] = b.params;
  out["almost"] = t.almost;
  out["synthesis"] = synthesis_json(res, sig);
  return res.translation ? "found" : res.definitive ? "none" : "unknown";
}

inline Json compute_body(dsl::SpecDocument const& doc, std::size_t index,
                         EffectiveBounds const& b) {
  auto const& t = doc.tasks.at(index);
  Json body;
  body["schema"] = kSchemaVersion;
  body["tool"] = Json{{"name", "lbw"}, {"version", kToolVersion}, {"algorithm", kAlgorithmVersion}};
  body["task"] = Json{{"id", task_id(doc, index)},
                      {"kind", dsl::to_string(t.kind)},
                      {"target", t.target.empty() ? Json() : Json(t.target)}};
  body["status"] = "";
  Json out = Json::object();
  std::string status;
  if (b.budget && *b.budget == 0) {
    status = "unknown-at-bounds";
    out["reason"] = "budget";
    out["detail"] = "zero budget: nothing was computed";
  } else {
    try {
      std::optional<LogicPresentation> p;
      if (t.target_kind != dsl::TargetKind::none && t.target_kind != dsl::TargetKind::translation) {
        p = doc.presentation(t.target, t.target_kind);
      }
      auto family = [&] { return algebra_family(doc, t, b); };
      switch (t.kind) {
        case dsl::TaskKind::classify:
          status = run_classify(*p, family(), t, b, out);
          break;
        case dsl::TaskKind::detect:
          status = run_detect(*p, family(), b, out);
          break;
        case dsl::TaskKind::theorems:
          status = run_theorems(*p, b, out);
          break;
        case dsl::TaskKind::derive:
          status = run_derive(*p, *t.query, b, out);
          break;
        case dsl::TaskKind::modstar:
          status = run_modstar(*p, family(), b, out);
          break;
        case dsl::TaskKind::profile:
          status = run_profile(*p, family(), b, out);
          break;
        case dsl::TaskKind::filters:
          status = run_filters(*p, family(), b, out);
          break;
        case dsl::TaskKind::defines:
          status = run_defines(doc, t, out);
          break;
        case dsl::TaskKind::synthesize:
          status = run_synthesize(doc, t, b, out);
          break;
      }
    } catch (BudgetExceeded const& e) {
      out = Json::object();
      status = "unknown-at-bounds";
      out["reason"] = "budget";
      out["detail"] = e.what();
    }
  }
  body["status"] = status;
  for (auto& [k, v] : out.items()) {
    body[k] = v;
  }
  body["bounds"] = b.to_json();
  return body;
}

}  // namespace detail

/// Runs one task of a resolved document. A budget hit that no fallback
/// absorbs yields status unknown-at-bounds with reason "budget".
inline Report run_task(dsl::SpecDocument const& doc, std::size_t index, RunOptions const& opt = {}) {
  auto const start = std::chrono::steady_clock::now();
  auto const& t = doc.tasks.at(index);
  auto const b = effective_bounds(t, opt);
  Report r;
  r.task_id = task_id(doc, index);
  r.jobs = b.jobs;
  std::string key;
  if (opt.cache && opt.cache->enabled()) {
    key = cache_key(doc, index, b);
    if (auto hit = opt.cache->get(key)) {
      r.body = std::move(*hit);
      r.cache = "hit";
    } else {
      r.cache = opt.cache->enabled() ? "miss" : "off";
    }
  }
  if (r.cache != "hit") {
    r.body = detail::compute_body(doc, index, b);
    if (!key.empty()) {
      opt.cache->put(key, r.body);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace lbw
