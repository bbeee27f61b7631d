#pragma once

// Text format for constrained databases (.cdb). One statement per '.':
//
//   rel E/3.                          explicit schema declaration
//   @e1 E(emp1, dept1, paderborn).    fact, optionally labelled
//   fd: T: [1] -> [3].                functional dependency
//   id: T[2] <= T[1].                 inclusion dependency
//   dc: ! E(X1,X2,X3), D(X2,X4,X5), X3 != X5.
//   lav: D(X1,X2,X3) -> E(Y1,X1,Y2).
//   % comment to end of line
//
// Variables start uppercase; constants are lowercase identifiers, numerals or
// double-quoted strings. Schema is inferred from first use unless declared;
// declarations win and conflicting uses are errors. Every input either parses
// completely or raises exactly one SourceError.

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace argdb {

enum class ErrorKind { Syntax, UnknownRelation, ArityMismatch, UnsafeVariable, DuplicateLabel };

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownRelation: return "unknown relation";
    case ErrorKind::ArityMismatch: return "arity mismatch";
    case ErrorKind::UnsafeVariable: return "unsafe variable";
    case ErrorKind::DuplicateLabel: return "duplicate label";
  }
  return "error";
}

struct SourceError : std::runtime_error {
  int line;
  int column;
  ErrorKind kind;

  SourceError(int line_, int column_, ErrorKind kind_, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(column_) +
                           ": " + kind_name(kind_) + ": " + message),
        line(line_), column(column_), kind(kind_) {}
};

struct ParsedInstance {
  ConstrainedDatabase cdb;
  std::map<std::string, Fact> labels;
};

namespace parser_detail {

enum class Tok {
  Ident, Int, Str,
  LParen, RParen, LBracket, RBracket,
  Comma, Dot, Colon, Slash, Bang, At, Arrow, Le, Eq, Neq,
  End
};

struct Token {
  Tok type;
  std::string text;
  int line;
  int col;
};

inline std::vector<Token> tokenize(const std::string& input) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (input[i + k] == '\n') { ++line; col = 1; } else { ++col; }
    }
    i += n;
  };
  while (i < input.size()) {
    char c = input[i];
    if (c == '%') {
      while (i < input.size() && input[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace((unsigned char)c)) { advance(1); continue; }
    int tl = line, tc = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < input.size() && (std::isalnum((unsigned char)input[j]) || input[j] == '_')) ++j;
      out.push_back({Tok::Ident, input.substr(i, j - i), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < input.size() && std::isdigit((unsigned char)input[j])) ++j;
      out.push_back({Tok::Int, input.substr(i, j - i), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      size_t j = i + 1;
      while (j < input.size() && input[j] != '"' && input[j] != '\n') ++j;
      if (j >= input.size() || input[j] != '"') {
        throw SourceError(tl, tc, ErrorKind::Syntax, "unterminated string literal");
      }
      out.push_back({Tok::Str, input.substr(i + 1, j - i - 1), tl, tc});
      advance(j + 1 - i);
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", tl, tc}); advance(1); continue;
      case ')': out.push_back({Tok::RParen, ")", tl, tc}); advance(1); continue;
      case '[': out.push_back({Tok::LBracket, "[", tl, tc}); advance(1); continue;
      case ']': out.push_back({Tok::RBracket, "]", tl, tc}); advance(1); continue;
      case ',': out.push_back({Tok::Comma, ",", tl, tc}); advance(1); continue;
      case '.': out.push_back({Tok::Dot, ".", tl, tc}); advance(1); continue;
      case ':': out.push_back({Tok::Colon, ":", tl, tc}); advance(1); continue;
      case '/': out.push_back({Tok::Slash, "/", tl, tc}); advance(1); continue;
      case '@': out.push_back({Tok::At, "@", tl, tc}); advance(1); continue;
      case '!':
        if (i + 1 < input.size() && input[i + 1] == '=') {
          out.push_back({Tok::Neq, "!=", tl, tc}); advance(2);
        } else {
          out.push_back({Tok::Bang, "!", tl, tc}); advance(1);
        }
        continue;
      case '=': out.push_back({Tok::Eq, "=", tl, tc}); advance(1); continue;
      case '-':
        if (i + 1 < input.size() && input[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", tl, tc}); advance(2); continue;
        }
        throw SourceError(tl, tc, ErrorKind::Syntax, "expected '->'");
      case '<':
        if (i + 1 < input.size() && input[i + 1] == '=') {
          out.push_back({Tok::Le, "<=", tl, tc}); advance(2); continue;
        }
        throw SourceError(tl, tc, ErrorKind::Syntax, "expected '<='");
      default:
        throw SourceError(tl, tc, ErrorKind::Syntax,
                          std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

inline bool is_variable_name(const std::string& s) {
  return !s.empty() && std::isupper((unsigned char)s[0]);
}

struct Pos { int line = 0; int col = 0; };

struct RawAtom {
  std::string relation;
  Pos rel_pos;
  std::vector<Term> terms;
};

struct RawCmp {
  Term lhs; Pos lhs_pos;
  CompareOp op;
  Term rhs; Pos rhs_pos;
};

struct RawPosList {
  std::vector<int> positions;
  Pos pos;
};

struct RawStatement {
  enum Kind { Decl, FactStmt, FdStmt, IdStmt, DcStmt, LavStmt } kind;
  // decl
  std::string decl_name; int decl_arity = 0; Pos decl_pos;
  // fact
  std::optional<std::string> label; Pos label_pos;
  RawAtom fact;  // terms all constants
  // fd / id
  std::string rel_a; Pos rel_a_pos; RawPosList list_a;
  std::string rel_b; Pos rel_b_pos; RawPosList list_b;
  // dc / lav
  std::vector<RawAtom> atoms;
  std::vector<RawCmp> cmps;
  RawAtom lav_body;
};

class Parser {
 public:
  explicit Parser(const std::string& input) : toks_(tokenize(input)) {}

  ParsedInstance run() {
    std::vector<RawStatement> stmts;
    while (peek().type != Tok::End) stmts.push_back(statement());
    return assemble(stmts);
  }

 private:
  std::vector<Token> toks_;
  size_t at_ = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t k = at_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  Token next() { return toks_[std::min(at_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const Token& t, ErrorKind kind, const std::string& msg) const {
    throw SourceError(t.line, t.col, kind, msg);
  }

  Token expect(Tok type, const std::string& what) {
    if (peek().type != type) fail(peek(), ErrorKind::Syntax, "expected " + what);
    return next();
  }

  RawStatement statement() {
    const Token& t = peek();
    if (t.type == Tok::At) return fact_statement();
    if (t.type != Tok::Ident) fail(t, ErrorKind::Syntax, "expected a statement");
    if (t.text == "rel" && peek(1).type == Tok::Ident) return decl_statement();
    if (peek(1).type == Tok::Colon) {
      if (t.text == "fd") return fd_statement();
      if (t.text == "id") return id_statement();
      if (t.text == "dc") return dc_statement();
      if (t.text == "lav") return lav_statement();
      fail(t, ErrorKind::Syntax, "unknown constraint keyword '" + t.text + "'");
    }
    if (peek(1).type == Tok::LParen) return fact_statement();
    fail(t, ErrorKind::Syntax, "expected a statement");
  }

  RawStatement decl_statement() {
    RawStatement s; s.kind = RawStatement::Decl;
    next();  // rel
    Token name = expect(Tok::Ident, "relation name");
    s.decl_name = name.text;
    s.decl_pos = {name.line, name.col};
    expect(Tok::Slash, "'/'");
    Token arity = expect(Tok::Int, "arity");
    s.decl_arity = std::stoi(arity.text);
    if (s.decl_arity < 1) fail(arity, ErrorKind::Syntax, "arity must be at least 1");
    expect(Tok::Dot, "'.'");
    return s;
  }

  RawStatement fact_statement() {
    RawStatement s; s.kind = RawStatement::FactStmt;
    if (peek().type == Tok::At) {
      next();
      Token lbl = expect(Tok::Ident, "label");
      s.label = lbl.text;
      s.label_pos = {lbl.line, lbl.col};
    }
    Token rel = expect(Tok::Ident, "relation name");
    s.fact.relation = rel.text;
    s.fact.rel_pos = {rel.line, rel.col};
    expect(Tok::LParen, "'('");
    while (true) {
      s.fact.terms.push_back(Term::constant(constant_token()));
      if (peek().type == Tok::Comma) { next(); continue; }
      break;
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    return s;
  }

  std::string constant_token() {
    const Token& t = peek();
    if (t.type == Tok::Ident) {
      if (is_variable_name(t.text)) {
        fail(t, ErrorKind::Syntax, "variable '" + t.text + "' not allowed in a fact");
      }
      return next().text;
    }
    if (t.type == Tok::Int || t.type == Tok::Str) return next().text;
    fail(t, ErrorKind::Syntax, "expected a constant");
  }

  RawPosList poslist() {
    RawPosList out;
    Token open = expect(Tok::LBracket, "'['");
    out.pos = {open.line, open.col};
    while (true) {
      Token n = expect(Tok::Int, "attribute position");
      int v = std::stoi(n.text);
      if (v < 1) fail(n, ErrorKind::Syntax, "attribute positions are 1-based");
      out.positions.push_back(v);
      if (peek().type == Tok::Comma) { next(); continue; }
      break;
    }
    expect(Tok::RBracket, "']'");
    return out;
  }

  RawStatement fd_statement() {
    RawStatement s; s.kind = RawStatement::FdStmt;
    next(); next();  // fd :
    Token rel = expect(Tok::Ident, "relation name");
    s.rel_a = rel.text;
    s.rel_a_pos = {rel.line, rel.col};
    expect(Tok::Colon, "':'");
    s.list_a = poslist();
    expect(Tok::Arrow, "'->'");
    s.list_b = poslist();
    expect(Tok::Dot, "'.'");
    return s;
  }

  RawStatement id_statement() {
    RawStatement s; s.kind = RawStatement::IdStmt;
    next(); next();  // id :
    Token src = expect(Tok::Ident, "relation name");
    s.rel_a = src.text;
    s.rel_a_pos = {src.line, src.col};
    s.list_a = poslist();
    expect(Tok::Le, "'<='");
    Token tgt = expect(Tok::Ident, "relation name");
    s.rel_b = tgt.text;
    s.rel_b_pos = {tgt.line, tgt.col};
    s.list_b = poslist();
    expect(Tok::Dot, "'.'");
    return s;
  }

  Term term_token(Pos* pos) {
    const Token& t = peek();
    *pos = {t.line, t.col};
    if (t.type == Tok::Ident) {
      return is_variable_name(t.text) ? Term::var(next().text) : Term::constant(next().text);
    }
    if (t.type == Tok::Int || t.type == Tok::Str) return Term::constant(next().text);
    fail(t, ErrorKind::Syntax, "expected a term");
  }

  RawAtom atom() {
    RawAtom a;
    Token rel = expect(Tok::Ident, "relation name");
    a.relation = rel.text;
    a.rel_pos = {rel.line, rel.col};
    expect(Tok::LParen, "'('");
    while (true) {
      Pos ignore;
      a.terms.push_back(term_token(&ignore));
      if (peek().type == Tok::Comma) { next(); continue; }
      break;
    }
    expect(Tok::RParen, "')'");
    return a;
  }

  RawStatement dc_statement() {
    RawStatement s; s.kind = RawStatement::DcStmt;
    next(); next();  // dc :
    expect(Tok::Bang, "'!'");
    s.atoms.push_back(atom());
    bool in_cmps = false;
    while (peek().type == Tok::Comma) {
      next();
      // An atom starts with IDENT '('; anything else is a comparison.
      if (!in_cmps && peek().type == Tok::Ident && peek(1).type == Tok::LParen) {
        s.atoms.push_back(atom());
        continue;
      }
      in_cmps = true;
      RawCmp cmp;
      cmp.lhs = term_token(&cmp.lhs_pos);
      if (peek().type == Tok::Eq) { next(); cmp.op = CompareOp::Eq; }
      else if (peek().type == Tok::Neq) { next(); cmp.op = CompareOp::Neq; }
      else fail(peek(), ErrorKind::Syntax, "expected '=' or '!='");
      cmp.rhs = term_token(&cmp.rhs_pos);
      s.cmps.push_back(cmp);
    }
    expect(Tok::Dot, "'.'");
    return s;
  }

  RawStatement lav_statement() {
    RawStatement s; s.kind = RawStatement::LavStmt;
    next(); next();  // lav :
    s.lav_body = atom();
    if (peek().type == Tok::Comma) {
      fail(peek(), ErrorKind::Syntax, "tgd body must be a single atom");
    }
    expect(Tok::Arrow, "'->'");
    s.atoms.push_back(atom());
    while (peek().type == Tok::Comma) {
      next();
      s.atoms.push_back(atom());
    }
    expect(Tok::Dot, "'.'");
    return s;
  }

  // -- schema resolution and assembly ------------------------------------

  struct SchemaBuilder {
    std::map<std::string, int> arity;       // settled arities
    std::map<std::string, bool> declared;   // declaration wins over use

    void declare(const std::string& name, int a, const Pos& p) {
      auto it = arity.find(name);
      if (it != arity.end() && it->second != a) {
        throw SourceError(p.line, p.col, ErrorKind::ArityMismatch,
                          "declaration of " + name + "/" + std::to_string(a) +
                          " conflicts with earlier arity " + std::to_string(it->second));
      }
      arity[name] = a;
      declared[name] = true;
    }
    void use(const std::string& name, int a, const Pos& p) {
      auto it = arity.find(name);
      if (it == arity.end()) { arity[name] = a; return; }
      if (it->second != a) {
        throw SourceError(p.line, p.col, ErrorKind::ArityMismatch,
                          name + " used with " + std::to_string(a) + " arguments, arity is " +
                          std::to_string(it->second));
      }
    }
  };

  ParsedInstance assemble(const std::vector<RawStatement>& stmts) {
    SchemaBuilder schema;
    for (const auto& s : stmts) {
      if (s.kind == RawStatement::Decl) schema.declare(s.decl_name, s.decl_arity, s.decl_pos);
    }
    for (const auto& s : stmts) {
      switch (s.kind) {
        case RawStatement::FactStmt:
          schema.use(s.fact.relation, (int)s.fact.terms.size(), s.fact.rel_pos);
          break;
        case RawStatement::DcStmt:
          for (const auto& a : s.atoms) schema.use(a.relation, (int)a.terms.size(), a.rel_pos);
          break;
        case RawStatement::LavStmt:
          schema.use(s.lav_body.relation, (int)s.lav_body.terms.size(), s.lav_body.rel_pos);
          for (const auto& a : s.atoms) schema.use(a.relation, (int)a.terms.size(), a.rel_pos);
          break;
        default:
          break;
      }
    }

    auto require_known = [&](const std::string& name, const Pos& p) -> int {
      auto it = schema.arity.find(name);
      if (it == schema.arity.end()) {
        throw SourceError(p.line, p.col, ErrorKind::UnknownRelation,
                          "relation " + name + " is never declared or used in an atom");
      }
      return it->second;
    };
    auto check_range = [&](const RawPosList& list, const std::string& rel, int arity) {
      for (int v : list.positions) {
        if (v > arity) {
          throw SourceError(list.pos.line, list.pos.col, ErrorKind::ArityMismatch,
                            "position " + std::to_string(v) + " out of range for " + rel + "/" +
                            std::to_string(arity));
        }
      }
    };

    ParsedInstance out;
    for (const auto& [name, a] : schema.arity) out.cdb.database.schema.relations[name] = a;

    for (const auto& s : stmts) {
      switch (s.kind) {
        case RawStatement::Decl:
          break;
        case RawStatement::FactStmt: {
          Fact f{s.fact.relation, {}};
          for (const auto& t : s.fact.terms) f.values.push_back(t.text);
          if (s.label) {
            auto [it, fresh] = out.labels.emplace(*s.label, f);
            if (!fresh && !(it->second == f)) {
              throw SourceError(s.label_pos.line, s.label_pos.col, ErrorKind::DuplicateLabel,
                                "label " + *s.label + " already names a different fact");
            }
            if (!fresh) {
              throw SourceError(s.label_pos.line, s.label_pos.col, ErrorKind::DuplicateLabel,
                                "label " + *s.label + " already used");
            }
          }
          out.cdb.database.facts.insert(std::move(f));
          break;
        }
        case RawStatement::FdStmt: {
          int arity = require_known(s.rel_a, s.rel_a_pos);
          check_range(s.list_a, s.rel_a, arity);
          check_range(s.list_b, s.rel_a, arity);
          out.cdb.constraints.push_back(Fd{s.rel_a, s.list_a.positions, s.list_b.positions});
          break;
        }
        case RawStatement::IdStmt: {
          int src_arity = require_known(s.rel_a, s.rel_a_pos);
          int tgt_arity = require_known(s.rel_b, s.rel_b_pos);
          check_range(s.list_a, s.rel_a, src_arity);
          check_range(s.list_b, s.rel_b, tgt_arity);
          if (s.list_a.positions.size() != s.list_b.positions.size()) {
            throw SourceError(s.list_b.pos.line, s.list_b.pos.col, ErrorKind::ArityMismatch,
                              "attribute lists differ in length");
          }
          out.cdb.constraints.push_back(
              Id{s.rel_a, s.list_a.positions, s.rel_b, s.list_b.positions});
          break;
        }
        case RawStatement::DcStmt: {
          Dc dc;
          std::set<std::string> body_vars;
          for (const auto& a : s.atoms) {
            dc.body.push_back(Atom{a.relation, a.terms});
            for (const auto& t : a.terms) {
              if (t.is_variable) body_vars.insert(t.text);
            }
          }
          for (const auto& c : s.cmps) {
            if (c.lhs.is_variable && !body_vars.count(c.lhs.text)) {
              throw SourceError(c.lhs_pos.line, c.lhs_pos.col, ErrorKind::UnsafeVariable,
                                "variable " + c.lhs.text + " does not occur in the body");
            }
            if (c.rhs.is_variable && !body_vars.count(c.rhs.text)) {
              throw SourceError(c.rhs_pos.line, c.rhs_pos.col, ErrorKind::UnsafeVariable,
                                "variable " + c.rhs.text + " does not occur in the body");
            }
            dc.comparisons.push_back(Comparison{c.lhs, c.op, c.rhs});
          }
          out.cdb.constraints.push_back(std::move(dc));
          break;
        }
        case RawStatement::LavStmt: {
          Ltgd l;
          l.body = Atom{s.lav_body.relation, s.lav_body.terms};
          for (const auto& a : s.atoms) l.head.push_back(Atom{a.relation, a.terms});
          out.cdb.constraints.push_back(std::move(l));
          break;
        }
      }
    }
    validate(out.cdb);
    return out;
  }
};

inline bool is_bare_constant(const std::string& s) {
  if (s.empty()) return false;
  if (std::isdigit((unsigned char)s[0])) {
    for (char c : s) {
      if (!std::isdigit((unsigned char)c)) return false;
    }
    return true;
  }
  if (!std::islower((unsigned char)s[0])) return false;
  for (char c : s) {
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  }
  return true;
}

inline std::string render_constant(const std::string& s) {
  return is_bare_constant(s) ? s : "\"" + s + "\"";
}

inline std::string render_term(const Term& t) {
  return t.is_variable ? t.text : render_constant(t.text);
}

inline std::string render_atom(const Atom& a) {
  std::string out = a.relation + "(";
  for (size_t i = 0; i < a.terms.size(); ++i) {
    if (i) out += ",";
    out += render_term(a.terms[i]);
  }
  return out + ")";
}

inline std::string render_poslist(const std::vector<int>& ps) {
  std::string out = "[";
  for (size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ps[i]);
  }
  return out + "]";
}

}  // namespace parser_detail

inline ParsedInstance parse_instance(const std::string& text) {
  return parser_detail::Parser(text).run();
}

// Canonical text: declarations sorted by name, facts sorted, constraints in
// input order. parse_instance(serialize_instance(x)) reproduces x.
inline std::string serialize_instance(const ConstrainedDatabase& cdb,
                                      const std::map<std::string, Fact>& labels = {}) {
  using namespace parser_detail;
  std::map<Fact, std::string> label_of;
  for (const auto& [name, fact] : labels) {
    auto it = label_of.find(fact);
    if (it == label_of.end() || name < it->second) label_of[fact] = name;
  }
  std::string out;
  for (const auto& [name, arity] : cdb.database.schema.relations) {
    out += "rel " + name + "/" + std::to_string(arity) + ".\n";
  }
  if (!cdb.database.facts.empty()) out += "\n";
  for (const auto& f : cdb.database.facts) {
    auto it = label_of.find(f);
    if (it != label_of.end()) out += "@" + it->second + " ";
    out += f.relation + "(";
    for (size_t i = 0; i < f.values.size(); ++i) {
      if (i) out += ",";
      out += render_constant(f.values[i]);
    }
    out += ").\n";
  }
  if (!cdb.constraints.empty()) out += "\n";
  for (const auto& c : cdb.constraints) {
    if (const Fd* fd = std::get_if<Fd>(&c)) {
      out += "fd: " + fd->relation + ": " + render_poslist(fd->determinant) + " -> " +
             render_poslist(fd->dependent) + ".\n";
    } else if (const Id* id = std::get_if<Id>(&c)) {
      out += "id: " + id->source_relation + render_poslist(id->source_attrs) + " <= " +
             id->target_relation + render_poslist(id->target_attrs) + ".\n";
    } else if (const Dc* dc = std::get_if<Dc>(&c)) {
      out += "dc: !";
      for (size_t i = 0; i < dc->body.size(); ++i) {
        out += (i ? ", " : " ") + render_atom(dc->body[i]);
      }
      for (const auto& cmp : dc->comparisons) {
        out += ", " + render_term(cmp.lhs) + (cmp.op == CompareOp::Eq ? " = " : " != ") +
               render_term(cmp.rhs);
      }
      out += ".\n";
    } else {
      const Ltgd& l = std::get<Ltgd>(c);
      out += "lav: " + render_atom(l.body) + " -> ";
      for (size_t i = 0; i < l.head.size(); ++i) {
        if (i) out += ", ";
        out += render_atom(l.head[i]);
      }
      out += ".\n";
    }
  }
  return out;
}

}  // namespace argdb
