// Command-line front end: run the tasks of .lbw spec files.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lbw/interface/parser.hpp"
#include "lbw/interface/run.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitSpecError = 2;
constexpr int kExitBudget = 3;

struct Flags {
  bool json = false;
  bool no_cache = false;
  std::string cache_dir;
  std::optional<std::size_t> jobs, max_size, depth, params, budget;
};

void add_run_flags(CLI::App& cmd, Flags& f) {
  cmd.add_flag("--json", f.json, "Print reports as JSON");
  cmd.add_option("--jobs", f.jobs, "Worker threads (0 = one per core)");
  cmd.add_option("--cache-dir", f.cache_dir, "Result cache directory (default: $LBW_CACHE)");
  cmd.add_flag("--no-cache", f.no_cache, "Do not read or write the result cache");
  cmd.add_option("--max-size", f.max_size, "Largest algebra size for enumerated families");
  cmd.add_option("--depth", f.depth, "Term depth for searches");
  cmd.add_option("--params", f.params, "Parameters for translation synthesis");
  cmd.add_option("--budget", f.budget, "Cap on every work budget (0 = compute nothing)");
}

std::optional<lbw::ResultCache> open_cache(Flags const& f) {
  if (f.no_cache) {
    return std::nullopt;
  }
  std::string dir = f.cache_dir;
  if (dir.empty()) {
    if (char const* env = std::getenv("LBW_CACHE"); env && *env) {
      dir = env;
    }
  }
  if (dir.empty()) {
    return std::nullopt;
  }
  return std::optional<lbw::ResultCache>(std::in_place, dir);
}

lbw::RunOptions run_options(Flags const& f, lbw::ResultCache* cache) {
  lbw::RunOptions o;
  o.depth = f.depth;
  o.params = f.params;
  o.jobs = f.jobs;
  o.max_size = f.max_size;
  o.budget = f.budget;
  o.cache = cache;
  return o;
}

std::optional<lbw::dsl::SpecDocument> load(std::string const& path) {
  try {
    return lbw::dsl::parse_spec_file(path);
  } catch (lbw::dsl::SpecError const& e) {
    std::cerr << path << ":" << e.span().line << ":" << e.span().column
              << ": error: " << e.message() << "\n";
  } catch (lbw::Error const& e) {
    std::cerr << path << ": error: " << e.what() << "\n";
  }
  return std::nullopt;
}

// Runs the selected tasks and prints their reports. Returns the exit code.
int run_tasks(lbw::dsl::SpecDocument const& doc, std::vector<std::size_t> const& tasks,
              Flags const& f) {
  auto cache = open_cache(f);
  auto opt = run_options(f, cache ? &*cache : nullptr);
  int code = 0;
  lbw::Json all = lbw::Json::array();
  for (auto i : tasks) {
    lbw::Report r;
    try {
      r = lbw::run_task(doc, i, opt);
    } catch (lbw::Error const& e) {
      std::cerr << "task " << lbw::task_id(doc, i) << ": error: " << e.what() << "\n";
      return 1;
    }
    if (r.budget_exhausted()) {
      code = kExitBudget;
    }
    if (f.json) {
      all.push_back(lbw::Json::parse(lbw::render_report(r, lbw::ReportFormat::json)));
    } else {
      std::cout << lbw::render_report(r, lbw::ReportFormat::text) << "\n";
    }
  }
  if (f.json) {
    std::cout << all.dump(2) << "\n";
  }
  return code;
}

std::vector<std::size_t> all_tasks(lbw::dsl::SpecDocument const& doc) {
  std::vector<std::size_t> out(doc.tasks.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = i;
  }
  return out;
}

// The classify tasks of a file; without any, one per declared logic.
std::vector<std::size_t> classify_tasks(lbw::dsl::SpecDocument& doc) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < doc.tasks.size(); ++i) {
    if (doc.tasks[i].kind == lbw::dsl::TaskKind::classify) {
      out.push_back(i);
    }
  }
  if (!out.empty()) {
    return out;
  }
  for (auto const& l : doc.logics) {
    lbw::dsl::TaskDecl t;
    t.kind = lbw::dsl::TaskKind::classify;
    t.target = l.name;
    t.target_kind = lbw::dsl::TargetKind::logic;
    doc.tasks.push_back(t);
    doc.order.emplace_back(lbw::dsl::DeclKind::task, doc.tasks.size() - 1);
    out.push_back(doc.tasks.size() - 1);
  }
  return out;
}

std::vector<fs::path> corpus_files(fs::path const& dir) {
  std::vector<fs::path> out;
  for (auto const& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".lbw") {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int corpus_run(fs::path const& dir, Flags const& f) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    std::cerr << "lbw: corpus directory '" << dir.string() << "' not found\n";
    return kExitSpecError;
  }
  auto cache = open_cache(f);
  auto opt = run_options(f, cache ? &*cache : nullptr);
  int code = 0;
  lbw::Json all = lbw::Json::array();
  for (auto const& path : corpus_files(dir)) {
    auto doc = load(path.string());
    if (!doc) {
      return kExitSpecError;
    }
    for (std::size_t i = 0; i < doc->tasks.size(); ++i) {
      auto r = lbw::run_task(*doc, i, opt);
      if (r.budget_exhausted()) {
        code = kExitBudget;
      }
      if (f.json) {
        auto j = lbw::Json::parse(lbw::render_report(r, lbw::ReportFormat::json));
        j["file"] = path.filename().string();
        all.push_back(std::move(j));
      } else {
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
        std::cout << path.filename().string() << "  " << r.task_id << ": " << r.status()
                  << "  (" << secs << " s, cache " << r.cache << ")\n";
      }
    }
  }
  if (f.json) {
    std::cout << all.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lbw: Leibniz hierarchy workbench"};
  app.set_version_flag("--version", std::string(lbw::kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  std::string file;

  auto* check = app.add_subcommand("check", "Run every task of a spec file");
  check->add_option("file", file, "Spec file")->required()->check(CLI::ExistingFile);
  add_run_flags(*check, flags);

  auto* cls = app.add_subcommand("classify", "Classify the logics of a spec file");
  cls->add_option("file", file, "Spec file")->required()->check(CLI::ExistingFile);
  add_run_flags(*cls, flags);

  auto* fmt = app.add_subcommand("format", "Print the canonical form of a spec file");
  fmt->add_option("file", file, "Spec file")->required()->check(CLI::ExistingFile);

  auto* corpus = app.add_subcommand("corpus", "Work with the shipped corpus");
  corpus->require_subcommand(1);
  auto* corpus_run_cmd = corpus->add_subcommand("run", "Run every task of every corpus file");
  std::string corpus_dir = LBW_CORPUS_DIR;
  corpus_run_cmd->add_option("--dir", corpus_dir, "Corpus directory")->capture_default_str();
  add_run_flags(*corpus_run_cmd, flags);

  CLI11_PARSE(app, argc, argv);

  if (corpus_run_cmd->parsed()) {
    return corpus_run(corpus_dir, flags);
  }
  auto doc = load(file);
  if (!doc) {
    return kExitSpecError;
  }
  if (fmt->parsed()) {
    std::cout << lbw::dsl::render_canonical(*doc);
    return 0;
  }
  if (cls->parsed()) {
    auto tasks = classify_tasks(*doc);
    return run_tasks(*doc, tasks, flags);
  }
  return run_tasks(*doc, all_tasks(*doc), flags);
}
