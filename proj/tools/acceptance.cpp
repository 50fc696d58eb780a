// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

#include "lbw/congruence/congruence.hpp"
#include "lbw/congruence/reduction.hpp"
#include "lbw/congruence/suszko.hpp"
#include "lbw/definability/classify.hpp"
#include "lbw/definability/detect.hpp"
#include "lbw/definability/profile.hpp"
#include "lbw/definability/synthesis.hpp"
#include "lbw/definability/translation.hpp"
#include "lbw/interface/parser.hpp"
#include "lbw/interface/run.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/kernel/enumerate.hpp"
#include "lbw/kernel/isomorphism.hpp"

using namespace lbw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failed check; later checks only add to the detail.
struct Checker {
  Outcome out;
  void expect(bool ok, std::string const& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

struct CorpusFile {
  std::string name;
  dsl::SpecDocument doc;
};

std::vector<CorpusFile> const& corpus() {
  static std::vector<CorpusFile> files = [] {
    std::vector<CorpusFile> out;
    std::vector<fs::path> paths;
    for (auto const& e : fs::directory_iterator(LBW_CORPUS_DIR)) {
      if (e.path().extension() == ".lbw") {
        paths.push_back(e.path());
      }
    }
    std::sort(paths.begin(), paths.end());
    for (auto const& p : paths) {
      out.push_back({p.filename().string(), dsl::parse_spec_file(p)});
    }
    return out;
  }();
  return files;
}

dsl::SpecDocument const& corpus_doc(std::string const& file) {
  for (auto const& f : corpus()) {
    if (f.name == file) {
      return f.doc;
    }
  }
  throw Error("corpus file '" + file + "' missing");
}

FiniteAlgebra random_algebra(Signature const& sig, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<Elem> d(0, static_cast<Elem>(n - 1));
  std::vector<std::vector<Elem>> tables;
  for (auto const& s : sig) {
    std::vector<Elem> t(FiniteAlgebra::table_size(n, s.arity));
    for (auto& v : t) {
      v = d(rng);
    }
    tables.push_back(std::move(t));
  }
  return FiniteAlgebra(sig, n, std::move(tables));
}

ElemSet random_subset(std::size_t n, std::mt19937& rng) {
  ElemSet s(n);
  for (Elem i = 0; i < n; ++i) {
    if (rng() & 1) {
      s.insert(i);
    }
  }
  return s;
}

std::vector<Signature> random_signatures() {
  return {Signature({{"f", 2}}), Signature({{"g", 1}, {"c", 0}}), Signature({{"f", 2}, {"g", 1}}),
          Signature({{"box", 1}, {"one", 0}})};
}

std::vector<FilterLattice const*> pointers(std::vector<FilterLattice> const& lats) {
  std::vector<FilterLattice const*> out;
  for (auto const& l : lats) {
    out.push_back(&l);
  }
  return out;
}

// True iff every model is isomorphic to exactly one expected matrix and
// every expected matrix is hit exactly once.
bool same_up_to_iso(std::vector<Matrix> const& got, std::vector<Matrix> const& want) {
  if (got.size() != want.size()) {
    return false;
  }
  std::vector<bool> used(want.size(), false);
  for (auto const& g : got) {
    bool found = false;
    for (std::size_t j = 0; j < want.size() && !found; ++j) {
      if (!used[j] && find_matrix_isomorphism(g, want[j])) {
        used[j] = found = true;
      }
    }
    if (!found) {
      return false;
    }
  }
  return true;
}

// Every (calculus, algebra) pair the corpus mentions: declared algebras of
// the calculus signature and the families of its tasks.
struct CorpusLattice {
  std::string label;
  HilbertCalculus const* calc;
  FiniteAlgebra algebra;
};

std::vector<CorpusLattice> corpus_lattices() {
  std::vector<CorpusLattice> out;
  std::set<std::string> seen;
  auto add = [&](std::string const& file, std::string const& calc_name, HilbertCalculus const& calc,
                 FiniteAlgebra const& a, std::string const& label) {
    std::string key = file + "/" + calc_name + "/" + std::to_string(a.size());
    for (auto const& t : a.tables()) {
      for (auto v : t) {
        key += "," + std::to_string(v);
      }
      key += ";";
    }
    if (seen.insert(key).second) {
      out.push_back({file + ": " + calc_name + " on " + label, &calc, a});
    }
  };
  for (auto const& f : corpus()) {
    auto const& doc = f.doc;
    for (auto const& c : doc.calculi) {
      for (auto const& a : doc.algebras) {
        if (a.signature == c.signature) {
          add(f.name, c.name, c.calculus, a.algebra, a.name);
        }
      }
    }
    for (std::size_t i = 0; i < doc.tasks.size(); ++i) {
      auto const& t = doc.tasks[i];
      std::string calc_name;
      if (t.target_kind == dsl::TargetKind::calculus) {
        calc_name = t.target;
      } else if (t.target_kind == dsl::TargetKind::logic && doc.find_logic(t.target)->calculus) {
        calc_name = *doc.find_logic(t.target)->calculus;
      } else {
        continue;
      }
      auto fam = detail::algebra_family(doc, t, effective_bounds(t, {}));
      auto const& calc = doc.find_calculus(calc_name)->calculus;
      for (std::size_t k = 0; k < fam.algebras.size(); ++k) {
        add(f.name, calc_name, calc, fam.algebras[k], fam.labels[k]);
      }
    }
  }
  return out;
}

// Complete order-reflection straight from the definition: every subfamily
// of filters, the empty one included, against every filter.
bool corf_naive(OperatorProfile const& p, bool almost) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(almost && p.rows[i].filter.empty())) {
      rows.push_back(i);
    }
  }
  std::size_t const n = p.algebra.size();
  for (unsigned long mask = 0; mask < (1ul << rows.size()); ++mask) {
    Partition meet_omega = Partition::total(n);
    ElemSet meet_f = ElemSet::full(n);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (mask >> k & 1) {
        meet_omega = meet_omega.meet(p.rows[rows[k]].leibniz);
        meet_f = meet_f & p.rows[rows[k]].filter;
      }
    }
    for (auto g : rows) {
      if (meet_omega.refines(p.rows[g].leibniz) && !meet_f.subset_of(p.rows[g].filter)) {
        return false;
      }
    }
  }
  return true;
}

// ---- criteria ----

Outcome box_reduced_models() {
  Checker c;
  auto const& doc = corpus_doc("box.lbw");
  auto const& calc = doc.find_calculus("BoxC")->calculus;
  auto const& sig = doc.signature("Box");
  auto family = enumerate_algebras_up_to(sig, 5, true);
  auto models = modstar(calc, family);
  std::vector<Matrix> got;
  for (auto const& m : models) {
    got.push_back(m.matrix);
  }
  auto const& a4 = doc.find_algebra("A4")->algebra;
  auto const& a3 = doc.find_algebra("A3")->algebra;
  auto one = trivial_algebra(sig);
  std::vector<Matrix> want{Matrix(a4, ElemSet::of(4, std::vector<Elem>{*a4.find_element("1"),
                                                                      *a4.find_element("a")})),
                           Matrix(a3, ElemSet::of(3, std::vector<Elem>{*a3.find_element("1"),
                                                                      *a3.find_element("a")})),
                           Matrix(one, ElemSet::full(1))};
  c.expect(same_up_to_iso(got, want),
           "reduced models differ from {<A4,{1,a}>, <A3,{1,a}>, <1,{1}>}: found " +
               std::to_string(got.size()));
  c.out.detail = c.out.pass ? std::to_string(family.size()) + " algebras, " +
                                  std::to_string(got.size()) + " reduced models"
                            : c.out.detail;
  return c.out;
}

Outcome box_small_not_equational() {
  Checker c;
  auto const& doc = corpus_doc("box.lbw");
  auto const& calc = doc.find_calculus("BoxC")->calculus;
  auto family = enumerate_algebras_up_to(doc.signature("Box"), 5, true);
  std::vector<FilterLattice> lats;
  for (auto const& a : family) {
    lats.emplace_back(calc, a);
  }
  auto models = modstar(calc, family);
  c.expect(static_cast<bool>(check_truth_small(models, pointers(lats), false)),
           "truth is not small on the family");
  auto res = synthesize_translation({doc.find_matrix("A4M")->matrix}, 0);
  c.expect(!res.translation, "an equation was found on <A4,{1,a}>");
  c.expect(res.definitive, "exact synthesis was not definitive");
  c.expect(res.functions == 5, "unary term functions: " + std::to_string(res.functions));
  if (c.out.pass) {
    c.out.detail = "small; no equation among " + std::to_string(res.functions) + " term functions";
  }
  return c.out;
}

Outcome conjunction_models() {
  Checker c;
  auto const& doc = corpus_doc("semilattices.lbw");
  auto const& calc = doc.find_calculus("CPCand")->calculus;
  auto const& sig = doc.signature("Meet");
  auto family = enumerate_algebras_up_to(sig, 3, true);
  auto models = modstar(calc, family);
  auto const& two = doc.find_matrix("M2T")->matrix;
  Matrix one(trivial_algebra(sig), ElemSet::full(1));
  std::vector<Matrix> nat;
  for (auto const& m : models) {
    if (m.almost_trivial) {
      continue;
    }
    nat.push_back(m.matrix);
    c.expect(find_matrix_isomorphism(m.matrix, two) || find_matrix_isomorphism(m.matrix, one),
             "reduced model of size " + std::to_string(m.matrix.algebra.size()) +
                 " is neither <2,{1}> nor <1,{1}>");
  }
  auto const& tau = doc.find_translation("TauMeet")->translation;
  c.expect(static_cast<bool>(defines_truth(tau, nat, true)), "meet(x,y1) ~ y1 fails");
  if (c.out.pass) {
    c.out.detail = std::to_string(family.size()) + " algebras, " + std::to_string(nat.size()) +
                   " non-almost-trivial reduced models";
  }
  return c.out;
}

Outcome twist_structures() {
  Checker c;
  auto const& doc = corpus_doc("bilattices.lbw");
  auto const& tau = doc.find_translation("TauLB")->translation;
  for (auto const& name : {"C2", "C3"}) {
    auto const& l = doc.find_algebra(name)->algebra;
    auto const t = twist_structure(l);
    auto const& ls = l.signature();
    auto const& ts = t.signature();
    auto lop = [&](char const* s, Elem p, Elem q) { return l.apply(*ls.find(s), {p, q}); };
    auto top = [&](char const* s, std::vector<Elem> const& args) {
      return t.apply(*ts.find(s), args);
    };
    // decode <a1,a2> from the element name "a1_a2"
    std::map<std::pair<Elem, Elem>, Elem> code;
    for (Elem e = 0; e < t.size(); ++e) {
      auto const& nm = t.name(e);
      auto cut = nm.find('_');
      code[{*l.find_element(nm.substr(0, cut)), *l.find_element(nm.substr(cut + 1))}] = e;
    }
    c.expect(code.size() == l.size() * l.size(), "twist universe is not L x L");
    for (auto const& [a, x] : code) {
      c.expect(top("neg", {x}) == code.at({a.second, a.first}), "negation law");
      for (auto const& [b, y] : code) {
        c.expect(top("and", {x, y}) ==
                     code.at({lop("meet", a.first, b.first), lop("join", a.second, b.second)}),
                 "conjunction law");
        c.expect(top("or", {x, y}) ==
                     code.at({lop("join", a.first, b.first), lop("meet", a.second, b.second)}),
                 "disjunction law");
        c.expect(top("otimes", {x, y}) ==
                     code.at({lop("meet", a.first, b.first), lop("meet", a.second, b.second)}),
                 "knowledge meet law");
        c.expect(top("oplus", {x, y}) ==
                     code.at({lop("join", a.first, b.first), lop("join", a.second, b.second)}),
                 "knowledge join law");
      }
    }
    // the top of a chain is the element that joins to itself with everything
    Elem top_elem = 0;
    for (Elem e = 0; e < l.size(); ++e) {
      bool is_top = true;
      for (Elem f = 0; f < l.size(); ++f) {
        is_top = is_top && lop("join", e, f) == e;
      }
      if (is_top) {
        top_elem = e;
      }
    }
    ElemSet expected(t.size());
    for (Elem b = 0; b < l.size(); ++b) {
      expected.insert(code.at({top_elem, b}));
    }
    c.expect(solutions(tau, t) == expected,
             std::string("solutions of tau differ from {1} x L on twist(") + name + ")");
    if (std::string(name) == "C2") {
      c.expect(is_reduced(Matrix(t, expected)), "<twist(2), {1} x 2> is not reduced");
    }
  }
  if (c.out.pass) {
    c.out.detail = "laws hold on twist(2) and twist(3); solutions are {1} x L";
  }
  return c.out;
}

Outcome oracle_equivalence() {
  Checker c;
  std::mt19937 rng(2024);
  auto sigs = random_signatures();
  int const trials = 200;
  for (int i = 0; i < trials; ++i) {
    auto const& sig = sigs[i % sigs.size()];
    std::size_t n = 1 + rng() % 4;
    auto a = random_algebra(sig, n, rng);
    auto f = random_subset(n, rng);
    auto omega = leibniz(a, f);
    c.expect(omega == leibniz_via_polynomials(a, f), "leibniz != leibniz_via_polynomials");
    c.expect(omega == leibniz_via_congruence_list(a, f), "leibniz != congruence-list route");
  }
  std::size_t filters = 0;
  auto lattices = corpus_lattices();
  for (auto const& cl : lattices) {
    FilterLattice lat(*cl.calc, cl.algebra);
    for (auto const& f : lat.filters()) {
      ++filters;
      c.expect(suszko_by_definition(lat, f) == suszko_by_polynomials(lat, f),
               "Suszko methods disagree: " + cl.label);
    }
  }
  if (c.out.pass) {
    c.out.detail = std::to_string(trials) + " random algebras; " + std::to_string(filters) +
                   " corpus filters on " + std::to_string(lattices.size()) + " algebras";
  }
  return c.out;
}

Outcome invariants() {
  Checker c;
  std::size_t rows = 0;
  for (auto const& cl : corpus_lattices()) {
    auto p = operator_profile(*cl.calc, cl.algebra);
    for (auto const& r : p.rows) {
      ++rows;
      c.expect(r.suszko.refines(r.leibniz), "Suszko not below Leibniz: " + cl.label);
      for (auto const& s : p.rows) {
        if (r.filter.subset_of(s.filter)) {
          c.expect(r.suszko.refines(s.suszko), "Suszko not monotone: " + cl.label);
        }
      }
    }
  }
  std::mt19937 rng(77);
  auto sigs = random_signatures();
  int const matrices = 150;
  for (int i = 0; i < matrices; ++i) {
    std::size_t n = 1 + rng() % 5;
    auto a = random_algebra(sigs[i % sigs.size()], n, rng);
    c.expect(is_reduced(reduce_matrix(Matrix(a, random_subset(n, rng))).matrix),
             "a reduction is not reduced");
  }
  // h: A -> A/theta is a surjective homomorphism; Omega of a preimage is the
  // preimage of Omega.
  std::size_t surjections = 0;
  for (int i = 0; surjections < 80; ++i) {
    std::size_t n = 1 + rng() % 4;
    auto a = random_algebra(sigs[i % sigs.size()], n, rng);
    auto cons = all_congruences(a);
    auto const& theta = cons[rng() % cons.size()];
    auto q = quotient(a, theta);
    ++surjections;
    auto fb = random_subset(q.algebra.size(), rng);
    ElemSet pre(n);
    for (Elem e = 0; e < n; ++e) {
      if (fb.contains(q.block_map[e])) {
        pre.insert(e);
      }
    }
    auto omega_b = leibniz(q.algebra, fb).ids();
    std::vector<std::size_t> labels(n);
    for (Elem e = 0; e < n; ++e) {
      labels[e] = omega_b[q.block_map[e]];
    }
    c.expect(leibniz(a, pre) == Partition::from_labels(labels), "preimage law fails");
  }
  if (c.out.pass) {
    c.out.detail = std::to_string(rows) + " profile rows, " + std::to_string(matrices) +
                   " reductions, " + std::to_string(surjections) + " surjections";
  }
  return c.out;
}

Outcome checker_equivalence() {
  Checker c;
  std::size_t checked = 0;
  for (auto const& cl : corpus_lattices()) {
    auto p = operator_profile(*cl.calc, cl.algebra);
    if (p.size() > 12) {
      continue;
    }
    ++checked;
    for (bool almost : {false, true}) {
      c.expect(static_cast<bool>(check_completely_order_reflecting(p, almost)) ==
                   corf_naive(p, almost),
               std::string("c.o.r. checkers disagree") + (almost ? " (almost): " : ": ") +
                   cl.label);
    }
  }
  c.expect(checked > 0, "no corpus filter lattice with at most 12 filters");
  if (c.out.pass) {
    c.out.detail = std::to_string(checked) + " filter lattices, full and almost";
  }
  return c.out;
}

Outcome corollary_consistency() {
  Checker c;
  std::size_t refuted = 0;
  bool lb_subuniverse = false;
  for (auto const& f : corpus()) {
    for (auto const& l : f.doc.logics) {
      auto p = f.doc.presentation(l.name, dsl::TargetKind::logic);
      auto th = has_theorems(p);
      if (th.verdict != Verdict::refuted) {
        continue;
      }
      ++refuted;
      std::vector<FiniteAlgebra> family;
      for (auto const& m : p.matrices) {
        family.push_back(m.algebra);
      }
      auto r = classify(p, family);
      c.expect(r[Level::equational].status == Status::refuted_definitive,
               l.name + ": equational level is " + to_string(r[Level::equational].status));
      if (l.name == "LB") {
        lb_subuniverse = th.countermodel && th.countermodel->subuniverse.has_value();
      }
    }
  }
  c.expect(lb_subuniverse, "LB was not refuted through a subuniverse");
  if (c.out.pass) {
    c.out.detail = std::to_string(refuted) + " purely inferential logics; LB via subuniverse";
  }
  return c.out;
}

Outcome constant_expansion() {
  Checker c;
  auto const& sl = corpus_doc("semilattices.lbw");
  auto const& ex = corpus_doc("expansion.lbw");
  auto out = expand_with_constant({sl.find_matrix("M2T")->matrix},
                                  sl.find_translation("TauMeet")->translation);
  c.expect(out.size() == 1, "expansion size");
  if (out.size() == 1) {
    auto const& want = ex.find_matrix("M2PT")->matrix;
    c.expect(out[0].algebra.tables() == want.algebra.tables() &&
                 out[0].designated == want.designated,
             "expansion differs from 2+");
    c.expect(static_cast<bool>(defines_truth(ex.find_translation("IsOne")->translation,
                                             {want})),
             "x ~ one does not define truth on 2+");
    c.expect(all_congruences(out[0].algebra) == all_congruences(sl.find_algebra("M2")->algebra),
             "Con(2+) != Con(2)");
  }
  if (c.out.pass) {
    c.out.detail = "2+ built; x ~ one defines truth; congruences unchanged";
  }
  return c.out;
}

Outcome detection() {
  Checker c;
  auto const& sl = corpus_doc("semilattices.lbw");
  auto const& im = corpus_doc("implication.lbw");
  auto cand = sl.presentation("CPCAnd", dsl::TargetKind::logic);
  auto cor = sl.presentation("CPCOr", dsl::TargetKind::logic);
  auto conj = detect_protoconjunction(cand);
  c.expect(conj && render(*conj, cand.signature) == "meet(x,y)", "protoconjunction for CPC-and");
  auto disj = detect_protodisjunction(cor);
  c.expect(disj && render(*disj, cor.signature) == "join(x,y)", "protodisjunction for CPC-or");

  std::vector<FiniteAlgebra> meet_family{sl.find_algebra("M2")->algebra};
  auto pa = detect_protoalgebraic(cand, meet_family);
  c.expect(pa.verdict.verdict == Verdict::refuted, "CPC-and protoalgebraicity not refuted");
  if (pa.verdict.verdict == Verdict::refuted) {
    c.expect(pa.algebra_index && pa.row, "refutation names no profile row");
    if (pa.algebra_index && pa.row) {
      auto p = operator_profile(*cand.calculus, meet_family[*pa.algebra_index]);
      auto const& row = p.rows.at(*pa.row);
      c.expect(!(row.leibniz == row.suszko), "refuting row has Omega F = Suszko F");
    }
  }
  auto imp = im.presentation("IMP", dsl::TargetKind::logic);
  auto pi = detect_protoalgebraic(imp, {im.find_algebra("I2")->algebra});
  c.expect(pi.verdict.verdict == Verdict::derived, "implication logic not protoalgebraic");
  c.expect(pi.delta.size() == 1 && render(pi.delta[0], imp.signature) == "imp(x,y)",
           "Delta differs from {imp(x,y)}");
  if (c.out.pass) {
    c.out.detail = "meet(x,y), join(x,y); CPC-and refuted; Delta = {imp(x,y)}";
  }
  return c.out;
}

Outcome determinism() {
  Checker c;
  auto dir = fs::temp_directory_path() / ("lbw-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::size_t tasks = 0;
  {
    ResultCache cache(dir);
    RunOptions cached;
    cached.cache = &cache;
    for (auto const& f : corpus()) {
      for (std::size_t i = 0; i < f.doc.tasks.size(); ++i) {
        ++tasks;
        auto id = f.name + " " + task_id(f.doc, i);
        auto a = run_task(f.doc, i);
        auto b = run_task(f.doc, i);
        auto miss = run_task(f.doc, i, cached);
        auto hit = run_task(f.doc, i, cached);
        c.expect(a.body.dump() == b.body.dump(), id + ": uncached runs differ");
        c.expect(miss.cache == "miss" && hit.cache == "hit", id + ": cache did not hit");
        c.expect(a.body.dump() == miss.body.dump() && a.body.dump() == hit.body.dump(),
                 id + ": cached body differs");
      }
    }
  }
  fs::remove_all(dir);
  if (c.out.pass) {
    c.out.detail = std::to_string(tasks) + " corpus tasks, with and without the cache";
  }
  return c.out;
}

struct Criterion {
  char const* name;
  double limit_seconds;  // 0 for no limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"box logic reduced models", 60, box_reduced_models},
      {"box logic small, not equational", 10, box_small_not_equational},
      {"conjunction reduced models and truth", 120, conjunction_models},
      {"twist structures", 10, twist_structures},
      {"oracle equivalence", 60, oracle_equivalence},
      {"invariant suite", 60, invariants},
      {"checker equivalence", 30, checker_equivalence},
      {"corollary consistency", 5, corollary_consistency},
      {"constant expansion", 5, constant_expansion},
      {"detection", 10, detection},
      {"determinism", 0, determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto const& cr = criteria[i];
    auto const start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double const secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && cr.limit_seconds > 0 && secs >= cr.limit_seconds) {
      o = {false, "took longer than " + std::to_string(static_cast<int>(cr.limit_seconds)) + " s"};
    }
    failed += !o.pass;
    std::printf("%s %2zu  %-38s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", i + 1, cr.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
