#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbw/interface/cache.hpp"
#include "lbw/interface/canonical.hpp"
#include "lbw/kernel/partition.hpp"
#include "lbw/logic/verdict.hpp"

namespace lbw {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr char const* kToolVersion = "0.1.0";
// Bump whenever a change can alter any report body; it is part of every
// cache key.
inline constexpr int kAlgorithmVersion = 1;

/// The outcome of one task. `body` is a pure function of the document, the
/// task, the effective bounds and kAlgorithmVersion; everything else here
/// describes the run.
struct Report {
  std::string task_id;
  Json body;
  double seconds = 0;
  std::string cache = "off";  // or "hit" / "miss"
  std::size_t jobs = 1;

  std::string status() const { return body.value("status", std::string("?")); }
  std::string body_digest() const { return sha256_hex(body.dump()); }
  bool budget_exhausted() const { return body.value("reason", std::string()) == "budget"; }
};

enum class ReportFormat { text, json };

// ---- domain objects in named-element form ----

namespace to_json {

inline Json set(FiniteAlgebra const& a, ElemSet const& s) {
  Json out = Json::array();
  for (auto e : s.elements()) {
    out.push_back(a.name(e));
  }
  return out;
}

inline Json partition(FiniteAlgebra const& a, Partition const& p) {
  Json out = Json::array();
  for (auto const& block : p.blocks()) {
    Json b = Json::array();
    for (auto e : block) {
      b.push_back(a.name(e));
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline Json algebra(FiniteAlgebra const& a) {
  Json ops = Json::object();
  for (std::size_t op = 0; op < a.signature().size(); ++op) {
    ops[a.signature().name(op)] = dsl::table_literal(a, op);
  }
  return Json{{"size", a.size()}, {"elements", a.names()}, {"operations", std::move(ops)}};
}

inline Json matrix(Matrix const& m) {
  return Json{{"algebra", algebra(m.algebra)}, {"designated", set(m.algebra, m.designated)}};
}

inline Json term(Term const& t, Signature const& sig, VarNamer const& names = default_var_name) {
  return render(t, sig, names);
}

inline Json countermodel(Countermodel const& cm) {
  Json out{{"matrix", matrix(cm.matrix)}};
  if (!cm.assignment.empty()) {
    Json asg = Json::object();
    for (std::size_t v = 0; v < cm.assignment.size(); ++v) {
      asg[default_var_name(v)] = cm.matrix.algebra.name(cm.assignment[v]);
    }
    out["assignment"] = std::move(asg);
  }
  if (cm.subuniverse) {
    out["subuniverse"] = set(cm.matrix.algebra, *cm.subuniverse);
  }
  return out;
}

inline Json proof(std::vector<ProofStep> const& steps, Signature const& sig) {
  Json out = Json::array();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto const& s = steps[i];
    Json step{{"step", i + 1}, {"formula", render(s.formula, sig)}};
    switch (s.kind) {
      case ProofStep::Kind::hypothesis:
        step["by"] = "hypothesis";
        break;
      case ProofStep::Kind::rule: {
        step["by"] = "rule " + std::to_string(s.rule + 1);
        Json from = Json::array();
        for (auto p : s.premises) {
          from.push_back(p + 1);
        }
        step["from"] = std::move(from);
        break;
      }
      case ProofStep::Kind::semantic:
        step["by"] = "valid in the matrices";
        break;
    }
    out.push_back(std::move(step));
  }
  return out;
}

/// A tri-state verdict: status plus its witness.
inline Json verdict(TriStateVerdict const& v, Signature const& sig) {
  Json out{{"status", to_string(v.verdict)}, {"detail", v.detail}};
  if (v.verdict == Verdict::derived && !v.proof.empty()) {
    out["witness"] = Json{{"proof", proof(v.proof, sig)}};
  }
  if (v.verdict == Verdict::refuted && v.countermodel) {
    out["witness"] = countermodel(*v.countermodel);
  }
  return out;
}

}  // namespace to_json

// ---- rendering ----

namespace detail {

inline std::size_t display_width(std::string const& s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    w += (c & 0xC0) != 0x80;
  }
  return w;
}

inline std::string scalar_text(Json const& v) {
  if (v.is_string()) {
    return v.get<std::string>();
  }
  if (v.is_null()) {
    return "none";
  }
  if (v.is_array()) {
    // nested arrays of scalars, e.g. partitions
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += (i ? "," : "") + scalar_text(v[i]);
    }
    return out + "}";
  }
  return v.dump();
}

inline bool is_flat(Json const& v) {
  if (!v.is_array()) {
    return !v.is_object();
  }
  return std::all_of(v.begin(), v.end(), [](Json const& x) { return is_flat(x); });
}

inline bool is_table(Json const& arr) {
  if (!arr.is_array() || arr.empty() || !arr[0].is_object() ||
      (arr[0].contains("label") && arr[0].contains("status"))) {
    return false;
  }
  std::vector<std::string> keys;
  for (auto const& [k, _] : arr[0].items()) {
    keys.push_back(k);
  }
  for (auto const& row : arr) {
    if (!row.is_object() || row.size() != keys.size()) {
      return false;
    }
    std::size_t i = 0;
    for (auto const& [k, v] : row.items()) {
      if (k != keys[i++] || !is_flat(v)) {
        return false;
      }
    }
  }
  return true;
}

inline void render_text(std::string const& key, Json const& v, std::size_t indent,
                        std::string& out);

inline void render_fields(Json const& obj, std::size_t indent, std::string& out,
                          std::vector<std::string> const& skip = {}) {
  for (auto const& [k, v] : obj.items()) {
    if (std::find(skip.begin(), skip.end(), k) == skip.end()) {
      render_text(k, v, indent, out);
    }
  }
}

inline void render_table(Json const& arr, std::size_t indent, std::string& out) {
  std::vector<std::string> keys;
  for (auto const& [k, _] : arr[0].items()) {
    keys.push_back(k);
  }
  std::vector<std::vector<std::string>> cells{keys};
  for (auto const& row : arr) {
    std::vector<std::string> r;
    for (auto const& k : keys) {
      r.push_back(scalar_text(row.at(k)));
    }
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(keys.size(), 0);
  for (auto const& r : cells) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      width[c] = std::max(width[c], display_width(r[c]));
    }
  }
  for (auto const& r : cells) {
    std::string line(indent, ' ');
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) {
        line += std::string(width[c] - display_width(r[c]) + 2, ' ');
      }
    }
    out += line + "\n";
  }
}

// Objects with a "label" and a "status" read as "label: status" with their
// other fields underneath; arrays of uniform flat objects become tables.
inline void render_text(std::string const& key, Json const& v, std::size_t indent,
                        std::string& out) {
  std::string const pad(indent, ' ');
  if (v.is_object() && v.contains("label") && v.contains("status")) {
    out += pad + scalar_text(v["label"]) + ": " + scalar_text(v["status"]) + "\n";
    render_fields(v, indent + 2, out, {"label", "status"});
    return;
  }
  if (v.is_object()) {
    out += pad + key + ":" + (v.empty() ? " none" : "") + "\n";
    render_fields(v, indent + 2, out);
    return;
  }
  if (v.is_array() && !is_flat(v)) {
    out += pad + key + ":\n";
    if (is_table(v)) {
      render_table(v, indent + 2, out);
      return;
    }
    for (auto const& item : v) {
      if (item.is_object() && !(item.contains("label") && item.contains("status"))) {
        out += pad + "  -\n";
        render_fields(item, indent + 4, out);
      } else {
        render_text("-", item, indent + 2, out);
      }
    }
    return;
  }
  if (v.is_array()) {
    std::string items;
    for (std::size_t i = 0; i < v.size(); ++i) {
      items += (i ? ", " : "") + scalar_text(v[i]);
    }
    out += pad + key + ": " + (v.empty() ? "none" : items) + "\n";
    return;
  }
  out += pad + key + ": " + scalar_text(v) + "\n";
}

}  // namespace detail

/// JSON: the body followed by a "run" block with timing and cache use,
/// which is excluded from the digest. Text: the same body, read as an
/// outline, with element names throughout.
inline std::string render_report(Report const& r, ReportFormat format) {
  if (format == ReportFormat::json) {
    Json out = r.body;
    out["run"] = Json{{"body_sha256", r.body_digest()},
                      {"seconds", r.seconds},
                      {"cache", r.cache},
                      {"jobs", r.jobs}};
    return out.dump(2) + "\n";
  }
  std::string out = "task " + r.task_id + ": " + r.status() + "\n";
  detail::render_fields(r.body, 2, out, {"schema", "tool", "task", "status"});
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.3f", r.seconds);
  out += "  run: " + std::string(timing) + " s, cache " + r.cache + "\n";
  return out;
}

}  // namespace lbw
