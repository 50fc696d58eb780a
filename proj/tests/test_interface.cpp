#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "lbw/interface/canonical.hpp"
#include "lbw/interface/parser.hpp"
#include "lbw/interface/run.hpp"

using namespace lbw;
namespace fs = std::filesystem;

namespace {

std::string const kBox = R"(
signature Box { box/1, one/0 }
algebra A4 over Box { universe = {1,a,b,c}; box = table [a,b,b,a]; one = 1 }
algebra A3 over Box { universe = {1,a,b}; box = table [a,b,b]; one = 1 }
matrix A4M = (A4, {1,a})
calculus BoxC over Box {
  rule |- one
  rule |- box(one)
  rule box(box(x)) |- y
}
)";

std::string const kMeet = R"(
signature Meet { meet/2 }
algebra M2 over Meet { universe = {0,1}; meet = table [[0,0],[0,1]] }
algebra M3 over Meet { universe = {0,1,2}; meet = table [[0,0,0],[0,1,1],[0,1,2]] }
matrix M2T = (M2, {1})
calculus CPCand over Meet {
  rule x, y |- meet(x,y)
  rule meet(x,y) |- x
  rule meet(x,y) |- y
}
logic CPCAnd over Meet { calculus CPCand; matrix M2T }
)";

dsl::SpecError parse_error(std::string const& text) {
  try {
    dsl::parse_spec(text);
  } catch (dsl::SpecError const& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for:\n" << text;
  return dsl::SpecError({0, 0}, "");
}

fs::path fresh_dir(std::string const& name) {
  auto dir = fs::temp_directory_path() / ("lbw-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

}  // namespace

// ---- parser ----

TEST(Parser, BoxAlgebraTables) {
  auto doc = dsl::parse_spec(kBox);
  auto const* a4 = doc.find_algebra("A4");
  ASSERT_NE(a4, nullptr);
  auto const& a = a4->algebra;
  EXPECT_EQ(a.size(), 4u);
  auto box = a.signature().find("box");
  ASSERT_TRUE(box);
  Elem c = *a.find_element("c");
  EXPECT_EQ(a.name(a.apply(*box, std::array<Elem, 1>{c})), "a");
  auto one = a.signature().find("one");
  EXPECT_EQ(a.name(a.apply(*one, std::span<Elem const>{})), "1");
}

TEST(Parser, RaggedTableIsLocated) {
  auto e = parse_error(
      "signature S { f/2 }\n"
      "algebra A over S { universe = {0,1}; f = table [[0,0],[0]] }\n");
  EXPECT_EQ(e.span().line, 2u);
  EXPECT_NE(e.message().find("ragged table"), std::string::npos) << e.message();
}

TEST(Parser, UnknownElementIsLocated) {
  auto e = parse_error(
      "signature S { f/1 }\n"
      "algebra A over S {\n"
      "  universe = {0,1}\n"
      "  f = table [0, q]\n"
      "}\n");
  EXPECT_EQ(e.span().line, 4u);
  EXPECT_EQ(e.span().column, 17u);
  EXPECT_NE(e.message().find("'q' is not an element"), std::string::npos) << e.message();
}

TEST(Parser, ColumnsCountCodePoints) {
  auto e = parse_error(
      "signature S { f/1 }\n"
      "algebra A over S { universe = {\xC3\xA4,b}; f = table [\xC3\xA4, q] }\n");
  EXPECT_EQ(e.span().line, 2u);
  // 'q' follows one two-byte character on the line
  EXPECT_EQ(e.span().column, 52u);
}

TEST(Parser, UnresolvedNames) {
  EXPECT_NE(parse_error("matrix M = (Nope, {0})\n").message().find("Nope"), std::string::npos);
  EXPECT_NE(parse_error(kMeet + "task classify Missing\n").message().find("Missing"),
            std::string::npos);
  EXPECT_NE(parse_error("algebra A over S { universe = {0} }\n").message().find("S"),
            std::string::npos);
}

TEST(Parser, ArityAndDuplicates) {
  EXPECT_NE(parse_error(kMeet + "calculus C over Meet { rule meet(x) |- x }\n")
                .message()
                .find("takes 2 arguments"),
            std::string::npos);
  EXPECT_NE(parse_error(kMeet + "signature Meet { f/1 }\n").message().find("Meet"),
            std::string::npos);
}

TEST(Parser, UnsoundLogicIsRejected) {
  auto e = parse_error(kMeet +
                       "calculus Bad over Meet { rule x |- meet(x,y) }\n"
                       "logic L over Meet { calculus Bad; matrix M2T }\n");
  EXPECT_NE(e.message().find("fails in matrix"), std::string::npos) << e.message();
}

TEST(Parser, KeywordsCannotNameDeclarations) {
  parse_error("signature task { f/1 }\n");
  parse_error("signature S { f/1 }\nalgebra over over S { universe = {0}; f = table [0] }\n");
}

TEST(Parser, BomAndComments) {
  auto doc = dsl::parse_spec("\xEF\xBB\xBF# leading comment\n" + kMeet + "# trailing\n");
  EXPECT_NE(doc.find_algebra("M3"), nullptr);
}

TEST(Parser, InvalidUtf8IsRejected) { parse_error("signature S { f/1 }\n# \xFF\n"); }

// ---- canonical form ----

TEST(Canonical, CorpusIsAFixpoint) {
  std::size_t files = 0;
  for (auto const& e : fs::directory_iterator(LBW_CORPUS_DIR)) {
    if (e.path().extension() != ".lbw") {
      continue;
    }
    ++files;
    auto doc = dsl::parse_spec_file(e.path());
    auto c1 = dsl::render_canonical(doc);
    auto c2 = dsl::render_canonical(dsl::parse_spec(c1));
    EXPECT_EQ(c1, c2) << e.path();
  }
  EXPECT_GE(files, 5u);
}

// Random documents: parse, print, parse again. The second print must equal
// the first and the algebras must survive unchanged.
TEST(Canonical, RandomRoundTrip) {
  std::mt19937 rng(20240917);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<std::string> const pool = {"0", "1", "2", "a", "b", "t", "f", "n_1", "x'"};

  for (int round = 0; round < 150; ++round) {
    std::size_t const nops = 1 + pick(3);
    std::vector<std::size_t> arity(nops);
    std::string text = "signature S {";
    for (std::size_t o = 0; o < nops; ++o) {
      arity[o] = pick(3);
      text += (o ? ", " : " ") + std::string("f") + std::to_string(o) + "/" +
              std::to_string(arity[o]);
    }
    text += " }\n";

    std::function<std::string(std::size_t, std::string const&)> term =
        [&](std::size_t depth, std::string const& vars) -> std::string {
      std::size_t o = pick(nops);
      if (depth == 0 || (arity[o] > 0 && pick(3) == 0)) {
        return std::string(1, vars[pick(vars.size())]);
      }
      std::string s = "f" + std::to_string(o);
      if (arity[o] == 0) {
        return s;
      }
      s += "(";
      for (std::size_t i = 0; i < arity[o]; ++i) {
        s += (i ? "," : "") + term(depth - 1, vars);
      }
      return s + ")";
    };

    std::size_t const nalg = 1 + pick(2);
    for (std::size_t k = 0; k < nalg; ++k) {
      std::size_t const n = 1 + pick(3);
      std::vector<std::string> names;
      std::set<std::string> used;
      while (names.size() < n) {
        auto const& s = pool[pick(pool.size())];
        if (used.insert(s).second) {
          names.push_back(s);
        }
      }
      text += "algebra A" + std::to_string(k) + " over S { universe = {";
      for (std::size_t i = 0; i < n; ++i) {
        text += (i ? "," : "") + names[i];
      }
      text += "}";
      for (std::size_t o = 0; o < nops; ++o) {
        text += pick(2) ? "; " : "\n  ";
        text += "f" + std::to_string(o) + " = ";
        if (arity[o] == 0) {
          text += names[pick(n)];
        } else if (arity[o] == 1) {
          text += "table [";
          for (std::size_t i = 0; i < n; ++i) {
            text += (i ? ", " : "") + names[pick(n)];
          }
          text += "]";
        } else {
          text += "table [";
          for (std::size_t i = 0; i < n; ++i) {
            text += (i ? "," : "") + std::string("[");
            for (std::size_t j = 0; j < n; ++j) {
              text += (j ? "," : "") + names[pick(n)];
            }
            text += "]";
          }
          text += "]";
        }
      }
      text += " }\n";
      text += "matrix M" + std::to_string(k) + " = (A" + std::to_string(k) + ", {" +
              names[pick(n)] + "})\n";
    }
    text += "calculus C over S {\n";
    for (std::size_t r = 0, nr = 1 + pick(3); r < nr; ++r) {
      text += "  rule ";
      for (std::size_t p = 0, np = pick(3); p < np; ++p) {
        text += (p ? ", " : "") + term(2, "xyz");
      }
      text += " |- " + term(2, "xyz") + "\n";
    }
    text += "}\n";
    text += "logic L over S { matrix M0 }\n";
    text += "translation T over S params 1 { " + term(1, "x") + " ~ y1 }\n";
    text += "task filters C over {A0}\n";
    text += "task derive L { " + term(1, "xyz") + " |- " + term(1, "xyz") + " }\n";
    text += "task synthesize over {M0} almost bounds { params=0, depth=1, budget=50 }\n";
    text += "task classify C over algebras(S, maxsize=2) bounds { jobs=auto }\n";

    SCOPED_TRACE(text);
    auto d1 = dsl::parse_spec(text);
    auto c1 = dsl::render_canonical(d1);
    auto d2 = dsl::parse_spec(c1);
    EXPECT_EQ(c1, dsl::render_canonical(d2));
    ASSERT_EQ(d1.algebras.size(), d2.algebras.size());
    for (std::size_t k = 0; k < d1.algebras.size(); ++k) {
      EXPECT_EQ(d1.algebras[k].algebra.tables(), d2.algebras[k].algebra.tables());
      EXPECT_EQ(d1.algebras[k].algebra.names(), d2.algebras[k].algebra.names());
    }
    ASSERT_EQ(d1.tasks.size(), d2.tasks.size());
    for (std::size_t i = 0; i < d1.tasks.size(); ++i) {
      EXPECT_EQ(task_id(d1, i), task_id(d2, i));
    }
  }
}

// ---- reports ----

TEST(Reports, DeterministicBodies) {
  auto doc = dsl::parse_spec(kMeet + "task profile CPCand over {M2, M3}\ntask detect CPCAnd\n");
  for (std::size_t i = 0; i < doc.tasks.size(); ++i) {
    auto a = run_task(doc, i);
    auto b = run_task(doc, i, RunOptions{.jobs = 4});
    EXPECT_EQ(a.body_digest(), b.body_digest()) << a.task_id;
    EXPECT_EQ(a.cache, "off");
  }
}

TEST(Reports, ProfileOfCpcAndOnTwoHasThreeRows) {
  auto doc = dsl::parse_spec(kMeet + "task profile CPCand over {M2}\n");
  auto r = run_task(doc, 0);
  ASSERT_EQ(r.status(), "ok");
  auto const& prof = r.body.at("profiles").at(0);
  EXPECT_EQ(prof.at("rows").size(), 3u);
  // the empty set, {1} and the whole universe
  EXPECT_EQ(prof.at("filters").get<std::size_t>(), 3u);
}

TEST(Reports, RefutedDeriveCarriesCountermodel) {
  auto doc = dsl::parse_spec(kMeet + "task derive CPCAnd { x |- meet(x,y) }\n");
  auto r = run_task(doc, 0);
  EXPECT_EQ(r.status(), "refuted");
  auto const& w = r.body.at("witness");
  ASSERT_TRUE(w.contains("matrix"));
  ASSERT_TRUE(w.contains("assignment"));
  auto json = Json::parse(render_report(r, ReportFormat::json));
  EXPECT_EQ(json.at("status"), "refuted");
  EXPECT_EQ(json.at("run").at("body_sha256"), r.body_digest());
}

TEST(Reports, ZeroBudgetIsUnknownAtBounds) {
  auto doc = dsl::parse_spec(kMeet + "task classify CPCAnd bounds { budget=0 }\n");
  auto r = run_task(doc, 0);
  EXPECT_EQ(r.status(), "unknown-at-bounds");
  EXPECT_TRUE(r.budget_exhausted());
  ASSERT_TRUE(r.body.contains("bounds"));
  EXPECT_EQ(r.body.at("bounds").at("budget"), 0);

  auto doc2 = dsl::parse_spec(kMeet + "task classify CPCAnd\n");
  auto r2 = run_task(doc2, 0, RunOptions{.budget = 0});
  EXPECT_EQ(r2.status(), "unknown-at-bounds");
}

TEST(Reports, SmallBudgetHitIsReportedNotThrown) {
  auto doc = dsl::parse_spec(kMeet + "task profile CPCand over {M2, M3}\n");
  auto r = run_task(doc, 0, RunOptions{.budget = 1});
  EXPECT_EQ(r.status(), "unknown-at-bounds");
  EXPECT_EQ(r.body.at("reason"), "budget");
  EXPECT_TRUE(r.body.contains("bounds"));
}

TEST(Reports, CliOverridesTaskBounds) {
  auto doc = dsl::parse_spec(kMeet + "task classify CPCAnd bounds { depth=3, params=2 }\n");
  auto b = effective_bounds(doc.tasks[0], RunOptions{.depth = 1});
  EXPECT_EQ(b.depth, 1u);
  EXPECT_EQ(b.params, 2u);
  EXPECT_EQ(b.max_size, 3u);
}

TEST(Reports, BoxClassifyRefutesEquationalWithFiveWitnesses) {
  auto doc = dsl::parse_spec(kBox + "task classify BoxC over {A4, A3}\n");
  auto r = run_task(doc, 0);
  ASSERT_EQ(r.status(), "ok");
  auto text = render_report(r, ReportFormat::text);
  EXPECT_NE(text.find("equational: refuted"), std::string::npos) << text;
  auto const& eq = r.body.at("equational_synthesis");
  EXPECT_EQ(eq.at("witnesses").size(), 5u) << eq.dump(2);
}

TEST(Reports, TextTablesRenderSingleRows) {
  auto doc = dsl::parse_spec(kMeet + "task filters CPCand over {M2}\n");
  auto text = render_report(run_task(doc, 0), ReportFormat::text);
  EXPECT_NE(text.find("algebra  count"), std::string::npos) << text;
}

// ---- cache ----

TEST(Cache, HitReturnsTheSameBody) {
  auto dir = fresh_dir("hit");
  auto doc = dsl::parse_spec(kMeet + "task detect CPCAnd over {M2, M3}\n");
  ResultCache cache(dir);
  auto first = run_task(doc, 0, RunOptions{.cache = &cache});
  EXPECT_EQ(first.cache, "miss");
  auto second = run_task(doc, 0, RunOptions{.cache = &cache});
  EXPECT_EQ(second.cache, "hit");
  EXPECT_EQ(first.body_digest(), second.body_digest());
  EXPECT_EQ(first.body_digest(), run_task(doc, 0).body_digest());
  fs::remove_all(dir);
}

TEST(Cache, TruncatedEntryWarnsAndRecomputes) {
  auto dir = fresh_dir("trunc");
  auto doc = dsl::parse_spec(kMeet + "task theorems CPCAnd\n");
  std::vector<std::string> warnings;
  ResultCache cache(dir, [&](std::string const& w) { warnings.push_back(w); });
  auto first = run_task(doc, 0, RunOptions{.cache = &cache});
  auto path = cache.path_for(cache_key(doc, 0, effective_bounds(doc.tasks[0], {})));
  ASSERT_TRUE(fs::exists(path));
  fs::resize_file(path, fs::file_size(path) / 2);

  auto second = run_task(doc, 0, RunOptions{.cache = &cache});
  EXPECT_EQ(second.cache, "miss");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("corrupt"), std::string::npos);
  EXPECT_EQ(first.body_digest(), second.body_digest());
  EXPECT_EQ(run_task(doc, 0, RunOptions{.cache = &cache}).cache, "hit");
  fs::remove_all(dir);
}

TEST(Cache, TamperedValueIsRejected) {
  auto dir = fresh_dir("tamper");
  std::vector<std::string> warnings;
  ResultCache cache(dir, [&](std::string const& w) { warnings.push_back(w); });
  cache.put("k", Json{{"status", "holds"}});
  auto path = cache.path_for("k");
  auto entry = Json::parse(dsl::read_text_file(path));
  entry["value"]["status"] = "refuted";
  std::ofstream(path) << entry.dump();
  EXPECT_FALSE(cache.get("k"));
  EXPECT_EQ(warnings.size(), 1u);
  fs::remove_all(dir);
}

TEST(Cache, KeyDependsOnAlgorithmBoundsAndDependencies) {
  auto doc = dsl::parse_spec(kMeet + "task detect CPCAnd over {M2}\n");
  auto b = effective_bounds(doc.tasks[0], {});
  auto k = cache_key(doc, 0, b);
  EXPECT_EQ(k, cache_key(doc, 0, b));
  EXPECT_NE(k, cache_key(doc, 0, b, kAlgorithmVersion + 1));
  auto b2 = b;
  b2.depth += 1;
  EXPECT_NE(k, cache_key(doc, 0, b2));

  // an unrelated declaration does not change the key; a changed table does
  auto extra = dsl::parse_spec(kMeet + "signature Other { g/1 }\ntask detect CPCAnd over {M2}\n");
  EXPECT_EQ(k, cache_key(extra, 0, b));
  auto changed = kMeet;
  changed.replace(changed.find("[[0,0],[0,1]]"), 13, "[[0,1],[1,1]]");
  // M2 now is a join table; the logic matrix is unsound, so use a bare calculus task
  auto plain = [](std::string const& src) {
    auto cut = src.substr(0, src.find("logic"));
    return dsl::parse_spec(cut + "task filters CPCand over {M2}\n");
  };
  auto d1 = plain(kMeet);
  auto d2 = plain(changed);
  EXPECT_NE(cache_key(d1, 0, b), cache_key(d2, 0, b));
}

TEST(Cache, UnwritableDirectoryDisablesCache) {
  auto dir = fresh_dir("blocked");
  fs::create_directories(dir.parent_path());
  std::ofstream(dir) << "not a directory";
  std::vector<std::string> warnings;
  ResultCache cache(dir / "sub", [&](std::string const& w) { warnings.push_back(w); });
  EXPECT_FALSE(cache.enabled());
  EXPECT_EQ(warnings.size(), 1u);
  auto doc = dsl::parse_spec(kMeet + "task theorems CPCAnd\n");
  EXPECT_EQ(run_task(doc, 0, RunOptions{.cache = &cache}).cache, "off");
  fs::remove(dir);
}

TEST(Corpus, EveryTaskRunsAndIsDeterministicUnderTheCache) {
  auto dir = fresh_dir("corpus");
  ResultCache cache(dir);
  for (auto const& e : fs::directory_iterator(LBW_CORPUS_DIR)) {
    if (e.path().extension() != ".lbw" || e.path().filename() == "bilattices.lbw") {
      continue;
    }
    auto doc = dsl::parse_spec_file(e.path());
    for (std::size_t i = 0; i < doc.tasks.size(); ++i) {
      if (doc.tasks[i].kind == dsl::TaskKind::classify) {
        continue;  // the slow ones; covered by the acceptance run
      }
      auto a = run_task(doc, i, RunOptions{.cache = &cache});
      auto b = run_task(doc, i, RunOptions{.cache = &cache});
      EXPECT_EQ(b.cache, "hit") << a.task_id;
      EXPECT_EQ(a.body_digest(), b.body_digest()) << a.task_id;
      EXPECT_FALSE(a.budget_exhausted()) << a.task_id;
    }
  }
  fs::remove_all(dir);
}
