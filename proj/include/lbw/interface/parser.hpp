#pragma once

#include <cstddef>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lbw/interface/document.hpp"
#include "lbw/kernel/constructions.hpp"
#include "lbw/logic/consequence.hpp"

namespace lbw::dsl {

namespace detail {

struct Token {
  enum class Kind { word, punct, end };
  Kind kind = Kind::end;
  std::string text;
  Span span;

  std::string describe() const { return kind == Kind::end ? "end of input" : "'" + text + "'"; }
};

/// Length of the UTF-8 sequence starting at s[i], or 0 if it is malformed.
inline std::size_t utf8_length(std::string_view s, std::size_t i) {
  auto const c = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (c < 0x80) {
    return 1;
  } else if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) {
    return 0;
  }
  for (std::size_t k = 1; k < len; ++k) {
    auto const d = static_cast<unsigned char>(s[i + k]);
    if ((d & 0xC0) != 0x80) {
      return 0;
    }
    cp = (cp << 6) | (d & 0x3F);
  }
  // reject overlong forms and anything outside the scalar values
  static constexpr std::uint32_t min_cp[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < min_cp[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  return len;
}

inline bool word_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  if (src.substr(0, 3) == "\xEF\xBB\xBF") {
    i = 3;
  }
  auto step = [&] {
    std::size_t len = utf8_length(src, i);
    if (len == 0) {
      throw SpecError({line, col}, "invalid UTF-8");
    }
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    i += len;
  };
  while (i < src.size()) {
    auto const c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      step();
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') {
        step();
      }
      continue;
    }
    Span const at{line, col};
    std::size_t const start = i;
    if (word_byte(c)) {
      while (i < src.size() && word_byte(static_cast<unsigned char>(src[i]))) {
        step();
      }
      out.push_back({Token::Kind::word, std::string(src.substr(start, i - start)), at});
    } else if (c == '|' && i + 1 < src.size() && src[i + 1] == '-') {
      step();
      step();
      out.push_back({Token::Kind::punct, "|-", at});
    } else if (std::strchr("{}()[],;=/~", c) != nullptr) {
      step();
      out.push_back({Token::Kind::punct, std::string(1, static_cast<char>(c)), at});
    } else {
      throw SpecError(at, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
    }
  }
  out.push_back({Token::Kind::end, "", {line, col}});
  return out;
}

inline bool is_keyword(std::string_view w) {
  static constexpr char const* kw[] = {
      "signature", "algebra", "matrix", "calculus", "translation", "logic", "task",
      "over",      "rule",    "table",  "universe", "params",      "bounds", "almost",
      "bounded",   "assume",  "algebras", "twist"};
  for (auto const* k : kw) {
    if (w == k) {
      return true;
    }
  }
  return false;
}

// A bracketed table literal before it is checked against the universe.
struct TableNode {
  bool leaf = false;
  std::string text;
  Span span;
  std::vector<TableNode> kids;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SpecDocument run() {
    while (peek().kind != Token::Kind::end) {
      auto const& t = peek();
      if (t.kind == Token::Kind::word) {
        if (t.text == "signature") {
          signature_decl();
          continue;
        } else if (t.text == "algebra") {
          algebra_decl();
          continue;
        } else if (t.text == "matrix") {
          matrix_decl();
          continue;
        } else if (t.text == "calculus") {
          calculus_decl();
          continue;
        } else if (t.text == "translation") {
          translation_decl();
          continue;
        } else if (t.text == "logic") {
          logic_decl();
          continue;
        } else if (t.text == "task") {
          task_decl();
          continue;
        }
      }
      fail(t.span, "expected a declaration (signature, algebra, matrix, calculus, translation, "
                   "logic or task), found " + t.describe());
    }
    return std::move(doc_);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SpecDocument doc_;

  [[noreturn]] static void fail(Span s, std::string const& msg) { throw SpecError(s, msg); }

  Token const& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token const& next() {
    auto const& t = peek();
    if (pos_ < toks_.size() - 1) {
      ++pos_;
    }
    return t;
  }
  bool at_word(std::string_view w) const {
    return peek().kind == Token::Kind::word && peek().text == w;
  }
  bool at_punct(std::string_view p) const {
    return peek().kind == Token::Kind::punct && peek().text == p;
  }
  bool accept_punct(std::string_view p) {
    if (at_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  Token expect_word(std::string const& what) {
    if (peek().kind != Token::Kind::word) {
      fail(peek().span, "expected " + what + ", found " + peek().describe());
    }
    return next();
  }
  Token expect_keyword(std::string_view kw) {
    if (!at_word(kw)) {
      fail(peek().span, "expected '" + std::string(kw) + "', found " + peek().describe());
    }
    return next();
  }
  Token expect_punct(std::string_view p) {
    if (!at_punct(p)) {
      fail(peek().span, "expected '" + std::string(p) + "', found " + peek().describe());
    }
    return next();
  }
  std::size_t expect_number(std::string const& what) {
    auto t = expect_word(what);
    if (t.text.empty() || t.text.size() > 9 ||
        t.text.find_first_not_of("0123456789") != std::string::npos) {
      fail(t.span, "expected " + what + ", found '" + t.text + "'");
    }
    return std::stoul(t.text);
  }
  Token decl_name(std::string const& what) {
    auto t = expect_word(what);
    if (is_keyword(t.text)) {
      fail(t.span, "'" + t.text + "' is a keyword and cannot name a declaration");
    }
    return t;
  }

  template <class Decl>
  void check_fresh(std::vector<Decl> const& v, Token const& name, char const* kind) {
    if (SpecDocument::find_in(v, name.text)) {
      fail(name.span, "duplicate " + std::string(kind) + " '" + name.text + "'");
    }
  }

  SignatureDecl const& signature_ref(Token const& t) {
    auto const* s = doc_.find_signature(t.text);
    if (!s) {
      fail(t.span, "unknown signature '" + t.text + "'");
    }
    return *s;
  }
  AlgebraDecl const& algebra_ref(Token const& t) {
    auto const* a = doc_.find_algebra(t.text);
    if (!a) {
      fail(t.span, "unknown algebra '" + t.text + "'");
    }
    return *a;
  }
  MatrixDecl const& matrix_ref(Token const& t) {
    auto const* m = doc_.find_matrix(t.text);
    if (!m) {
      fail(t.span, "unknown matrix '" + t.text + "'");
    }
    return *m;
  }

  // Separator inside blocks: optional ';' or ','.
  void skip_separator() {
    if (!accept_punct(";")) {
      accept_punct(",");
    }
  }

  std::vector<Token> name_set() {
    expect_punct("{");
    std::vector<Token> out;
    if (accept_punct("}")) {
      return out;
    }
    do {
      out.push_back(expect_word("a name"));
    } while (accept_punct(","));
    expect_punct("}");
    return out;
  }

  // ---- signatures ----

  void signature_decl() {
    auto kw = next();
    auto name = decl_name("a signature name");
    check_fresh(doc_.signatures, name, "signature");
    Signature sig;
    expect_punct("{");
    if (!at_punct("}")) {
      do {
        auto sym = expect_word("an operation symbol");
        if (is_keyword(sym.text)) {
          fail(sym.span, "'" + sym.text + "' is a keyword and cannot name an operation");
        }
        expect_punct("/");
        auto arity = expect_number("an arity");
        if (sig.find(sym.text)) {
          fail(sym.span, "duplicate symbol '" + sym.text + "' in signature");
        }
        sig.add(sym.text, arity);
      } while (accept_punct(","));
    }
    expect_punct("}");
    doc_.signatures.push_back({name.text, std::move(sig), kw.span});
    doc_.order.emplace_back(DeclKind::signature, doc_.signatures.size() - 1);
  }

  // ---- algebras ----

  TableNode table_node() {
    if (at_punct("[")) {
      TableNode n;
      n.span = next().span;
      if (!accept_punct("]")) {
        do {
          n.kids.push_back(table_node());
        } while (accept_punct(","));
        expect_punct("]");
      }
      return n;
    }
    auto t = expect_word("an element or '['");
    return {true, t.text, t.span, {}};
  }

  void check_table(TableNode const& node, std::size_t depth, std::size_t n,
                   std::vector<std::string> const& names, std::vector<Elem>& out) {
    if (depth == 0) {
      if (!node.leaf) {
        fail(node.span, "expected an element, found a list");
      }
      auto it = std::find(names.begin(), names.end(), node.text);
      if (it == names.end()) {
        std::string u;
        for (auto const& s : names) {
          u += (u.empty() ? "" : ",") + s;
        }
        fail(node.span, "'" + node.text + "' is not an element of the universe {" + u + "}");
      }
      out.push_back(static_cast<Elem>(it - names.begin()));
      return;
    }
    if (node.leaf) {
      fail(node.span, "expected a list of " + std::to_string(n) + " entries, found '" +
                          node.text + "'");
    }
    if (depth > 1) {
      std::optional<std::size_t> width;
      for (auto const& k : node.kids) {
        if (k.leaf) {
          continue;
        }
        if (!width) {
          width = k.kids.size();
        } else if (*width != k.kids.size()) {
          fail(k.span, "ragged table: row has " + std::to_string(k.kids.size()) +
                           " entries, earlier rows have " + std::to_string(*width));
        }
      }
    }
    if (node.kids.size() != n) {
      fail(node.span, "table row has " + std::to_string(node.kids.size()) +
                          " entries, expected " + std::to_string(n));
    }
    for (auto const& k : node.kids) {
      check_table(k, depth - 1, n, names, out);
    }
  }

  void algebra_decl() {
    auto kw = next();
    auto name = decl_name("an algebra name");
    check_fresh(doc_.algebras, name, "algebra");
    expect_keyword("over");
    auto sig_tok = expect_word("a signature name");
    auto const& sd = signature_ref(sig_tok);
    Signature const sig = sd.signature;

    if (accept_punct("=")) {
      expect_keyword("twist");
      expect_punct("(");
      auto base = expect_word("an algebra name");
      auto const& lat = algebra_ref(base);
      expect_punct(")");
      if (!(sig == bilattice_signature())) {
        fail(sig_tok.span, "twist structures live over the signature "
                           "{ and/2, or/2, otimes/2, oplus/2, neg/1 }");
      }
      FiniteAlgebra a;
      try {
        a = twist_structure(lat.algebra);
      } catch (Error const& e) {
        fail(base.span, e.what());
      }
      doc_.algebras.push_back({name.text, sig_tok.text, std::move(a), kw.span});
      doc_.order.emplace_back(DeclKind::algebra, doc_.algebras.size() - 1);
      return;
    }

    expect_punct("{");
    expect_keyword("universe");
    expect_punct("=");
    auto const universe_open = peek().span;
    std::vector<std::string> names;
    for (auto const& t : name_set()) {
      if (std::find(names.begin(), names.end(), t.text) != names.end()) {
        fail(t.span, "duplicate element '" + t.text + "'");
      }
      if (is_keyword(t.text)) {
        fail(t.span, "'" + t.text + "' is a keyword and cannot name an element");
      }
      names.push_back(t.text);
    }
    if (names.empty()) {
      fail(universe_open, "the universe must be non-empty");
    }
    std::size_t const n = names.size();
    std::vector<std::optional<std::vector<Elem>>> tables(sig.size());
    skip_separator();
    while (!at_punct("}")) {
      auto op_tok = expect_word("an operation name or '}'");
      auto op = sig.find(op_tok.text);
      if (!op) {
        fail(op_tok.span, "'" + op_tok.text + "' is not an operation of signature '" +
                              sig_tok.text + "'");
      }
      if (tables[*op]) {
        fail(op_tok.span, "operation '" + op_tok.text + "' is defined twice");
      }
      expect_punct("=");
      std::size_t const arity = sig.arity(*op);
      std::vector<Elem> values;
      if (arity == 0) {
        auto v = expect_word("an element");
        check_table({true, v.text, v.span, {}}, 0, n, names, values);
      } else {
        if (FiniteAlgebra::table_size(n, arity) > 10'000'000) {
          fail(op_tok.span, "operation table too large");
        }
        expect_keyword("table");
        auto node = table_node();
        check_table(node, arity, n, names, values);
      }
      tables[*op] = std::move(values);
      skip_separator();
    }
    auto close = expect_punct("}");
    std::vector<std::vector<Elem>> flat;
    for (std::size_t op = 0; op < sig.size(); ++op) {
      if (!tables[op]) {
        fail(close.span, "operation '" + sig.name(op) + "' of algebra '" + name.text +
                             "' has no table");
      }
      flat.push_back(std::move(*tables[op]));
    }
    doc_.algebras.push_back(
        {name.text, sig_tok.text, FiniteAlgebra(sig, n, std::move(flat), names), kw.span});
    doc_.order.emplace_back(DeclKind::algebra, doc_.algebras.size() - 1);
  }

  // ---- matrices ----

  void matrix_decl() {
    auto kw = next();
    auto name = decl_name("a matrix name");
    check_fresh(doc_.matrices, name, "matrix");
    expect_punct("=");
    expect_punct("(");
    auto alg_tok = expect_word("an algebra name");
    auto const& ad = algebra_ref(alg_tok);
    expect_punct(",");
    ElemSet d(ad.algebra.size());
    for (auto const& t : name_set()) {
      auto e = ad.algebra.find_element(t.text);
      if (!e) {
        fail(t.span, "'" + t.text + "' is not an element of algebra '" + ad.name + "'");
      }
      d.insert(*e);
    }
    expect_punct(")");
    doc_.matrices.push_back({name.text, alg_tok.text, Matrix(ad.algebra, d), kw.span});
    doc_.order.emplace_back(DeclKind::matrix, doc_.matrices.size() - 1);
  }

  // ---- terms and rules ----

  using VarResolver = std::function<std::size_t(Token const&)>;

  Term term(Signature const& sig, VarResolver const& var) {
    auto t = expect_word("a term");
    if (auto op = sig.find(t.text)) {
      std::size_t const arity = sig.arity(*op);
      std::vector<Term> args;
      if (accept_punct("(")) {
        if (!at_punct(")")) {
          do {
            args.push_back(term(sig, var));
          } while (accept_punct(","));
        }
        expect_punct(")");
      }
      if (args.size() != arity) {
        fail(t.span, "'" + t.text + "' takes " + std::to_string(arity) + " argument" +
                         (arity == 1 ? "" : "s") + ", got " + std::to_string(args.size()));
      }
      return Term::app(*op, std::move(args));
    }
    if (at_punct("(")) {
      fail(t.span, "unknown operation '" + t.text + "'");
    }
    if (!std::isalpha(static_cast<unsigned char>(t.text[0]))) {
      fail(t.span, "'" + t.text + "' is neither an operation nor a variable");
    }
    return Term::var(var(t));
  }

  // premises |- conclusion, variables numbered by first occurrence
  Rule rule_body(Signature const& sig) {
    std::map<std::string, std::size_t> vars;
    VarResolver var = [&](Token const& t) { return vars.emplace(t.text, vars.size()).first->second; };
    Rule r;
    if (!at_punct("|-")) {
      do {
        r.premises.push_back(term(sig, var));
      } while (accept_punct(","));
    }
    expect_punct("|-");
    r.conclusion = term(sig, var);
    return r;
  }

  void calculus_decl() {
    auto kw = next();
    auto name = decl_name("a calculus name");
    check_fresh(doc_.calculi, name, "calculus");
    expect_keyword("over");
    auto sig_tok = expect_word("a signature name");
    Signature const sig = signature_ref(sig_tok).signature;
    expect_punct("{");
    std::vector<Rule> rules;
    skip_separator();
    while (!at_punct("}")) {
      expect_keyword("rule");
      rules.push_back(rule_body(sig));
      skip_separator();
    }
    next();
    doc_.calculi.push_back({name.text, sig_tok.text, HilbertCalculus(sig, rules), kw.span});
    doc_.order.emplace_back(DeclKind::calculus, doc_.calculi.size() - 1);
  }

  void translation_decl() {
    auto kw = next();
    auto name = decl_name("a translation name");
    check_fresh(doc_.translations, name, "translation");
    expect_keyword("over");
    auto sig_tok = expect_word("a signature name");
    Signature const sig = signature_ref(sig_tok).signature;
    expect_keyword("params");
    std::size_t const m = expect_number("a parameter count");
    VarResolver var = [&](Token const& t) -> std::size_t {
      if (t.text == "x") {
        return 0;
      }
      if (t.text.size() > 1 && t.text[0] == 'y' &&
          t.text.find_first_not_of("0123456789", 1) == std::string::npos && t.text[1] != '0' &&
          t.text.size() < 10) {
        std::size_t k = std::stoul(t.text.substr(1));
        if (k >= 1 && k <= m) {
          return k;
        }
      }
      fail(t.span, "unknown variable '" + t.text + "' (translations use x and y1..y" +
                       std::to_string(m) + ")");
    };
    expect_punct("{");
    std::vector<Equation> eqs;
    skip_separator();
    while (!at_punct("}")) {
      Term lhs = term(sig, var);
      expect_punct("~");
      Term rhs = term(sig, var);
      eqs.push_back({std::move(lhs), std::move(rhs)});
      skip_separator();
    }
    next();
    doc_.translations.push_back({name.text, sig_tok.text, Translation(m, std::move(eqs)), kw.span});
    doc_.order.emplace_back(DeclKind::translation, doc_.translations.size() - 1);
  }

  // ---- logics ----

  void logic_decl() {
    auto kw = next();
    auto name = decl_name("a logic name");
    check_fresh(doc_.logics, name, "logic");
    expect_keyword("over");
    auto sig_tok = expect_word("a signature name");
    signature_ref(sig_tok);
    LogicDecl l{name.text, sig_tok.text, std::nullopt, {}, kw.span};
    expect_punct("{");
    skip_separator();
    while (!at_punct("}")) {
      if (at_word("calculus")) {
        auto at = next();
        if (l.calculus) {
          fail(at.span, "logic '" + name.text + "' already has a calculus");
        }
        auto c = expect_word("a calculus name");
        auto const* cd = doc_.find_calculus(c.text);
        if (!cd) {
          fail(c.span, "unknown calculus '" + c.text + "'");
        }
        if (cd->signature != sig_tok.text) {
          fail(c.span, "calculus '" + c.text + "' is over '" + cd->signature + "', not '" +
                           sig_tok.text + "'");
        }
        l.calculus = c.text;
      } else if (at_word("matrix")) {
        next();
        auto m = expect_word("a matrix name");
        auto const& md = matrix_ref(m);
        if (doc_.signature_of_matrix(md) != sig_tok.text) {
          fail(m.span, "matrix '" + m.text + "' is over '" + doc_.signature_of_matrix(md) +
                           "', not '" + sig_tok.text + "'");
        }
        l.matrices.push_back(m.text);
      } else {
        fail(peek().span, "expected 'calculus', 'matrix' or '}', found " + peek().describe());
      }
      skip_separator();
    }
    next();
    if (!l.calculus && l.matrices.empty()) {
      fail(kw.span, "logic '" + name.text + "' needs a calculus or a matrix");
    }
    auto const matrices = l.matrices;
    doc_.logics.push_back(std::move(l));
    auto p = doc_.presentation(name.text, TargetKind::logic);
    if (auto bad = first_unsound_rule(p)) {
      fail(kw.span, "rule '" + render(p.calculus->rules()[bad->first], p.signature) +
                        "' fails in matrix '" + matrices[bad->second] + "'");
    }
    doc_.order.emplace_back(DeclKind::logic, doc_.logics.size() - 1);
  }

  // ---- tasks ----

  // Resolves a logic target: a logic, a calculus, or a matrix.
  std::pair<TargetKind, std::string> logic_target(Token const& t) {
    std::vector<std::pair<TargetKind, std::string>> hits;
    if (auto const* l = doc_.find_logic(t.text)) {
      hits.emplace_back(TargetKind::logic, l->signature);
    }
    if (auto const* c = doc_.find_calculus(t.text)) {
      hits.emplace_back(TargetKind::calculus, c->signature);
    }
    if (auto const* m = doc_.find_matrix(t.text)) {
      hits.emplace_back(TargetKind::matrix, doc_.signature_of_matrix(*m));
    }
    if (hits.empty()) {
      fail(t.span, "unknown logic, calculus or matrix '" + t.text + "'");
    }
    if (hits.size() > 1) {
      fail(t.span, "'" + t.text + "' is ambiguous: it names more than one logic, calculus or "
                   "matrix");
    }
    return hits.front();
  }

  bool target_has_calculus(TaskDecl const& task) const {
    if (task.target_kind == TargetKind::calculus) {
      return true;
    }
    return task.target_kind == TargetKind::logic &&
           doc_.find_logic(task.target)->calculus.has_value();
  }

  FamilyRef family_ref() {
    FamilyRef f;
    f.span = peek().span;
    if (at_word("algebras")) {
      next();
      expect_punct("(");
      f.signature = expect_word("a signature name").text;
      expect_punct(",");
      expect_keyword("maxsize");
      expect_punct("=");
      f.max_size = expect_number("a size");
      expect_punct(")");
      return f;
    }
    if (!at_punct("{")) {
      fail(peek().span, "expected 'algebras(...)' or '{', found " + peek().describe());
    }
    for (auto const& t : name_set()) {
      f.names.push_back(t.text);
    }
    return f;
  }

  // Checks the family against the task; `sig` is the signature name the
  // members must live over (empty: take it from the first member).
  void check_family(FamilyRef const& f, bool matrices, std::string sig) {
    if (f.enumerated()) {
      if (matrices) {
        fail(f.span, "this task needs an explicit list of matrices");
      }
      if (!doc_.find_signature(*f.signature)) {
        fail(f.span, "unknown signature '" + *f.signature + "'");
      }
      if (*f.signature != sig) {
        fail(f.span, "family is over '" + *f.signature + "', the task is over '" + sig + "'");
      }
      if (f.max_size == 0) {
        fail(f.span, "maxsize must be at least 1");
      }
      return;
    }
    if (f.names.empty()) {
      fail(f.span, "the family is empty");
    }
    for (auto const& n : f.names) {
      std::string member_sig;
      if (matrices) {
        auto const* m = doc_.find_matrix(n);
        if (!m) {
          fail(f.span, "unknown matrix '" + n + "'");
        }
        member_sig = doc_.signature_of_matrix(*m);
      } else {
        auto const* a = doc_.find_algebra(n);
        if (!a) {
          fail(f.span, "unknown algebra '" + n + "'");
        }
        member_sig = a->signature;
      }
      if (sig.empty()) {
        sig = member_sig;
      } else if (member_sig != sig) {
        fail(f.span, "'" + n + "' is over '" + member_sig + "', expected '" + sig + "'");
      }
    }
  }

  TaskBounds bounds_block() {
    TaskBounds b;
    expect_punct("{");
    if (accept_punct("}")) {
      return b;
    }
    do {
      auto key = expect_word("a bound name");
      expect_punct("=");
      std::optional<std::size_t>* slot = nullptr;
      if (key.text == "depth") {
        slot = &b.depth;
      } else if (key.text == "params") {
        slot = &b.params;
      } else if (key.text == "jobs") {
        slot = &b.jobs;
      } else if (key.text == "maxsize") {
        slot = &b.max_size;
      } else if (key.text == "budget") {
        slot = &b.budget;
      } else {
        fail(key.span, "unknown bound '" + key.text +
                           "' (expected depth, params, jobs, maxsize or budget)");
      }
      if (slot->has_value()) {
        fail(key.span, "bound '" + key.text + "' given twice");
      }
      if (key.text == "jobs" && at_word("auto")) {
        next();
        *slot = 0;
      } else {
        *slot = expect_number("a number");
      }
    } while (accept_punct(","));
    expect_punct("}");
    return b;
  }

  void task_decl() {
    auto kw = next();
    TaskDecl task;
    task.span = kw.span;
    auto kind_tok = expect_word("a task kind");
    bool known = false;
    for (auto const& [k, n] : kTaskKinds) {
      if (kind_tok.text == n) {
        task.kind = k;
        known = true;
      }
    }
    if (!known) {
      fail(kind_tok.span, "unknown task kind '" + kind_tok.text +
                              "' (expected classify, detect, theorems, derive, modstar, "
                              "profile, filters, defines or synthesize)");
    }
    std::string sig;
    if (task.kind == TaskKind::defines) {
      auto t = expect_word("a translation name");
      auto const* td = doc_.find_translation(t.text);
      if (!td) {
        fail(t.span, "unknown translation '" + t.text + "'");
      }
      task.target = t.text;
      task.target_kind = TargetKind::translation;
      sig = td->signature;
    } else if (task.kind != TaskKind::synthesize) {
      auto t = expect_word("a logic name");
      auto [kind, s] = logic_target(t);
      task.target = t.text;
      task.target_kind = kind;
      sig = s;
      if ((task.kind == TaskKind::modstar || task.kind == TaskKind::profile ||
           task.kind == TaskKind::filters) &&
          !target_has_calculus(task)) {
        fail(t.span, std::string("task ") + to_string(task.kind) + " needs a logic with a calculus");
      }
    }
    if (task.kind == TaskKind::derive) {
      expect_punct("{");
      task.query = rule_body(doc_.signature(sig));
      expect_punct("}");
    }
    bool seen_bounds = false;
    while (true) {
      auto const& t = peek();
      auto clause = [&](bool dup, bool allowed) {
        if (dup) {
          fail(t.span, "duplicate '" + t.text + "' clause");
        }
        if (!allowed) {
          fail(t.span, "'" + t.text + "' does not apply to " + to_string(task.kind) + " tasks");
        }
      };
      if (at_word("over")) {
        clause(task.family.has_value(),
               task.kind != TaskKind::theorems && task.kind != TaskKind::derive);
        next();
        task.family = family_ref();
      } else if (at_word("almost")) {
        clause(task.almost,
               task.kind == TaskKind::defines || task.kind == TaskKind::synthesize);
        next();
        task.almost = true;
      } else if (at_word("bounded")) {
        clause(task.bounded, task.kind == TaskKind::synthesize);
        next();
        task.bounded = true;
      } else if (at_word("assume")) {
        clause(task.fregean, task.kind == TaskKind::classify);
        next();
        expect_keyword("fregean");
        task.fregean = true;
      } else if (at_word("bounds")) {
        clause(seen_bounds, true);
        next();
        task.bounds = bounds_block();
        seen_bounds = true;
      } else {
        break;
      }
    }
    bool const matrices = task.kind == TaskKind::defines || task.kind == TaskKind::synthesize;
    if (matrices && !task.family) {
      fail(kw.span, std::string("task ") + to_string(task.kind) +
                        " needs 'over { ... }' with a list of matrices");
    }
    if (task.family) {
      check_family(*task.family, matrices, sig);
    }
    doc_.tasks.push_back(std::move(task));
    doc_.order.emplace_back(DeclKind::task, doc_.tasks.size() - 1);
  }
};

}  // namespace detail

/// Parses and resolves a spec document. Throws SpecError with the position
/// of the first problem.
inline SpecDocument parse_spec(std::string_view text) {
  return detail::Parser(detail::lex(text)).run();
}

inline std::string read_text_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpecDocument parse_spec_file(std::filesystem::path const& path) {
  return parse_spec(read_text_file(path));
}

}  // namespace lbw::dsl
