#pragma once

// Constructive hardness reductions and a seeded instance generator.
//
// sat_to_instance encodes a CNF formula as a constrained database over two
// relations F/4 and C/2, with one fd and a cycle of ids. The clauses form a
// chain C(sat,c1), C(c1,c2), ..., C(cm,sat); each literal of clause i
// becomes a fact F(var, value, ci, sat), and the distinguished fact
// s_d = F(sat,sat,sat,sat) closes the cycle. Keeping s_d consistent forces a
// supported fact per clause, and the fd on F forbids picking both values of
// a variable, so s_d sits in some repair exactly when the formula is
// satisfiable. RepairExistence mode adds one more id so that every F-fact
// drags s_d in, making "some non-empty repair" the equivalent question.
//
// qbf_to_instance encodes a forall-exists QBF similarly, with a relation S/2
// and the distinguished fact s_sat = S(c1,exists). Universal literals carry
// the dummy marker in the fourth attribute (padded with F(y,value,d,d) when
// a literal occurs in no clause) and existential literals carry "exists",
// which chains them through s_sat. The formula is true exactly when s_sat
// belongs to every repair.

#include <cctype>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "parser.hpp"

namespace argdb {

struct Literal {
  std::string var;
  bool positive = true;
  auto operator<=>(const Literal&) const = default;
};

struct CnfFormula {
  std::vector<std::string> variables;
  std::vector<std::vector<Literal>> clauses;
};

struct QbfFormula {
  std::vector<std::string> universals;
  std::vector<std::string> existentials;
  CnfFormula matrix;
};

enum class SatMode { SomeRepair, RepairExistence };

struct SatInstance {
  ConstrainedDatabase cdb;
  Fact distinguished;
  SatMode mode = SatMode::SomeRepair;
  std::map<std::string, Fact> labels;
};

struct QbfInstance {
  ConstrainedDatabase cdb;
  Fact distinguished;
  std::map<std::string, Fact> labels;
};

namespace reductions_detail {

inline bool valid_var_name(const std::string& v) {
  if (v.empty() || !std::islower((unsigned char)v[0])) return false;
  for (char c : v) {
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  }
  if (v == "sat" || v == "exists" || v == "d") return false;
  if (v[0] == 'c' && v.size() > 1) {
    bool digits = true;
    for (size_t i = 1; i < v.size(); ++i) {
      if (!std::isdigit((unsigned char)v[i])) { digits = false; break; }
    }
    if (digits) return false;  // collides with clause tokens
  }
  return true;
}

inline void check_formula(const CnfFormula& cnf, bool require_occurrence) {
  if (cnf.clauses.empty()) throw std::invalid_argument("formula has no clauses");
  std::set<std::string> declared(cnf.variables.begin(), cnf.variables.end());
  if (declared.size() != cnf.variables.size()) {
    throw std::invalid_argument("duplicate variable");
  }
  std::set<std::string> seen;
  for (const auto& clause : cnf.clauses) {
    if (clause.empty()) throw std::invalid_argument("empty clause");
    for (const auto& lit : clause) {
      if (!declared.count(lit.var)) {
        throw std::invalid_argument("clause mentions undeclared variable '" + lit.var + "'");
      }
      seen.insert(lit.var);
    }
  }
  for (const auto& v : cnf.variables) {
    if (!valid_var_name(v)) throw std::invalid_argument("unusable variable name '" + v + "'");
    if (require_occurrence && !seen.count(v)) {
      throw std::invalid_argument("variable '" + v + "' occurs in no clause");
    }
  }
}

inline std::string clause_token(size_t i) { return "c" + std::to_string(i + 1); }

}  // namespace reductions_detail

inline SatInstance sat_to_instance(const CnfFormula& cnf, SatMode mode) {
  reductions_detail::check_formula(cnf, true);
  size_t m = cnf.clauses.size();

  SatInstance out;
  out.mode = mode;
  Schema& schema = out.cdb.database.schema;
  schema.relations["F"] = 4;
  schema.relations["C"] = 2;
  auto add = [&](const std::string& label, Fact f) {
    out.cdb.database.facts.insert(f);
    out.labels.emplace(label, std::move(f));
  };

  for (size_t i = 0; i < m; ++i) {
    std::string ci = reductions_detail::clause_token(i);
    for (const auto& lit : cnf.clauses[i]) {
      add(lit.var + (lit.positive ? "p" : "n") + std::to_string(i + 1),
          Fact{"F", {lit.var, lit.positive ? "1" : "0", ci, "sat"}});
    }
  }
  out.distinguished = Fact{"F", {"sat", "sat", "sat", "sat"}};
  add("sd", out.distinguished);
  add("sc", Fact{"C", {"sat", reductions_detail::clause_token(0)}});
  for (size_t i = 0; i + 1 < m; ++i) {
    add("s" + std::to_string(i + 1),
        Fact{"C", {reductions_detail::clause_token(i), reductions_detail::clause_token(i + 1)}});
  }
  add("s" + std::to_string(m), Fact{"C", {reductions_detail::clause_token(m - 1), "sat"}});

  out.cdb.constraints.push_back(Fd{"F", {1}, {2}});
  out.cdb.constraints.push_back(Id{"F", {4}, "C", {2}});
  out.cdb.constraints.push_back(Id{"C", {2}, "C", {1}});
  out.cdb.constraints.push_back(Id{"C", {1}, "F", {3}});
  if (mode == SatMode::RepairExistence) {
    out.cdb.constraints.push_back(Id{"F", {4}, "F", {3}});
  }
  validate(out.cdb);
  return out;
}

inline QbfInstance qbf_to_instance(const QbfFormula& qbf) {
  reductions_detail::check_formula(qbf.matrix, false);
  std::set<std::string> universal(qbf.universals.begin(), qbf.universals.end());
  std::set<std::string> existential(qbf.existentials.begin(), qbf.existentials.end());
  for (const auto& v : universal) {
    if (existential.count(v)) {
      throw std::invalid_argument("variable '" + v + "' quantified twice");
    }
  }
  std::set<std::string> quantified = universal;
  quantified.insert(existential.begin(), existential.end());
  for (const auto& v : qbf.matrix.variables) {
    if (!quantified.count(v)) throw std::invalid_argument("free variable '" + v + "'");
  }
  size_t m = qbf.matrix.clauses.size();

  QbfInstance out;
  Schema& schema = out.cdb.database.schema;
  schema.relations["F"] = 4;
  schema.relations["S"] = 2;
  schema.relations["C"] = 2;
  auto add = [&](const std::string& label, Fact f) {
    out.cdb.database.facts.insert(f);
    out.labels.emplace(label, std::move(f));
  };

  std::set<Literal> occurring;
  for (size_t i = 0; i < m; ++i) {
    std::string ci = reductions_detail::clause_token(i);
    for (const auto& lit : qbf.matrix.clauses[i]) {
      occurring.insert(lit);
      std::string marker = universal.count(lit.var) ? "d" : "exists";
      add(lit.var + (lit.positive ? "p" : "n") + std::to_string(i + 1),
          Fact{"F", {lit.var, lit.positive ? "1" : "0", ci, marker}});
    }
  }
  // a universal literal absent from every clause still needs a fact to
  // realize that truth value, parked on the dummy clause token
  for (const auto& y : qbf.universals) {
    for (bool positive : {false, true}) {
      if (!occurring.count(Literal{y, positive})) {
        add(y + (positive ? "p0" : "n0"), Fact{"F", {y, positive ? "1" : "0", "d", "d"}});
      }
    }
  }
  add("fdum", Fact{"F", {"d", "d", "d", "d"}});
  out.distinguished = Fact{"S", {reductions_detail::clause_token(0), "exists"}};
  add("ssat", out.distinguished);
  add("sdum", Fact{"S", {"d", "d"}});
  for (size_t i = 0; i < m; ++i) {
    add("s" + std::to_string(i + 1),
        Fact{"C", {reductions_detail::clause_token(i),
                   reductions_detail::clause_token((i + 1) % m)}});
  }
  add("cdum", Fact{"C", {"d", "d"}});

  out.cdb.constraints.push_back(Fd{"F", {1}, {2}});
  out.cdb.constraints.push_back(Id{"S", {1}, "C", {2}});
  out.cdb.constraints.push_back(Id{"C", {2}, "C", {1}});
  out.cdb.constraints.push_back(Id{"C", {1}, "F", {3}});
  out.cdb.constraints.push_back(Id{"F", {4}, "S", {2}});
  validate(out.cdb);
  return out;
}

// -- seeded generator --------------------------------------------------------

namespace reductions_detail {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  // modulo keeps the stream identical across standard library implementations
  int pick(int n) { return (int)(eng() % (uint64_t)n); }
  std::string constant() {
    static const char* pool[] = {"a", "b", "c"};
    return pool[pick(3)];
  }
};

}  // namespace reductions_detail

// Deterministic pseudo-random constrained database over the fixed schema
// r/2, s/2, t/3 containing at least one constraint per requested class, with
// a guaranteed violation injected for each. Denial constraints are shaped so
// that no single fact can violate one on its own.
inline ConstrainedDatabase random_instance(uint64_t seed, ConstraintProfile profile,
                                           int size_budget = 8) {
  if (!profile.has_fd && !profile.has_id && !profile.has_dc && !profile.has_ltgd) {
    throw std::invalid_argument("random_instance: profile selects no constraint class");
  }
  reductions_detail::Rng rng(seed);
  ConstrainedDatabase cdb;
  cdb.database.schema.relations = {{"r", 2}, {"s", 2}, {"t", 3}};

  auto var = [](const std::string& n) { return Term::var(n); };
  std::vector<Fact> forced;

  if (profile.has_fd) {
    if (rng.pick(2) == 0) {
      cdb.constraints.push_back(Fd{"r", {1}, {2}});
      std::string k = rng.constant();
      forced.push_back(Fact{"r", {k, "a"}});
      forced.push_back(Fact{"r", {k, "b"}});
    } else {
      cdb.constraints.push_back(Fd{"t", {2}, {3}});
      std::string k = rng.constant();
      forced.push_back(Fact{"t", {rng.constant(), k, "a"}});
      forced.push_back(Fact{"t", {rng.constant(), k, "b"}});
    }
  }
  if (profile.has_id) {
    if (rng.pick(2) == 0) {
      cdb.constraints.push_back(Id{"s", {1}, "r", {1}});
      forced.push_back(Fact{"s", {"q", rng.constant()}});
    } else {
      cdb.constraints.push_back(Id{"t", {1}, "s", {2}});
      forced.push_back(Fact{"t", {"q", rng.constant(), rng.constant()}});
    }
  }
  if (profile.has_dc) {
    if (rng.pick(2) == 0) {
      // two facts from different relations sharing the first attribute
      cdb.constraints.push_back(
          Dc{{Atom{"r", {var("X1"), var("X2")}}, Atom{"s", {var("X1"), var("X3")}}}, {}});
      std::string k = rng.constant();
      forced.push_back(Fact{"r", {k, rng.constant()}});
      forced.push_back(Fact{"s", {k, rng.constant()}});
    } else {
      // two t-facts sharing the second attribute but differing in the third
      cdb.constraints.push_back(
          Dc{{Atom{"t", {var("X1"), var("X2"), var("X3")}},
              Atom{"t", {var("X4"), var("X2"), var("X5")}}},
             {Comparison{var("X3"), CompareOp::Neq, var("X5")}}});
      std::string k = rng.constant();
      forced.push_back(Fact{"t", {rng.constant(), k, "a"}});
      forced.push_back(Fact{"t", {rng.constant(), k, "b"}});
    }
  }
  if (profile.has_ltgd) {
    if (rng.pick(2) == 0) {
      cdb.constraints.push_back(
          Ltgd{Atom{"r", {var("X1"), var("X2")}}, {Atom{"s", {var("X2"), var("Y1")}}}});
      forced.push_back(Fact{"r", {rng.constant(), "q"}});
    } else {
      cdb.constraints.push_back(Ltgd{Atom{"s", {var("X1"), var("X2")}},
                                     {Atom{"r", {var("Y1"), var("X1")}},
                                      Atom{"t", {var("X1"), var("Y2"), var("Y3")}}}});
      forced.push_back(Fact{"s", {"q", rng.constant()}});
    }
  }

  for (const auto& f : forced) cdb.database.facts.insert(f);
  int guard = 0;
  while ((int)cdb.database.facts.size() < size_budget && guard++ < 200) {
    int rel = rng.pick(3);
    if (rel == 0) {
      cdb.database.facts.insert(Fact{"r", {rng.constant(), rng.constant()}});
    } else if (rel == 1) {
      cdb.database.facts.insert(Fact{"s", {rng.constant(), rng.constant()}});
    } else {
      cdb.database.facts.insert(Fact{"t", {rng.constant(), rng.constant(), rng.constant()}});
    }
  }
  validate(cdb);
  return cdb;
}

// -- DIMACS / QDIMACS ---------------------------------------------------------

namespace reductions_detail {

struct DimacsReader {
  std::istringstream in;
  int line = 0;
  explicit DimacsReader(const std::string& text) : in(text) {}
  [[noreturn]] void fail(const std::string& msg) {
    throw SourceError(line, 1, ErrorKind::Syntax, msg);
  }
  // next content line split into tokens, or empty at eof
  std::vector<std::string> next() {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line;
      if (raw.empty() || raw[0] == 'c') continue;
      std::istringstream ls(raw);
      std::vector<std::string> tokens;
      std::string t;
      while (ls >> t) tokens.push_back(t);
      if (tokens.empty()) continue;
      return tokens;
    }
    return {};
  }
  static long to_int(const std::string& t, DimacsReader& r) {
    try {
      size_t used = 0;
      long v = std::stol(t, &used);
      if (used != t.size()) r.fail("bad integer '" + t + "'");
      return v;
    } catch (const std::invalid_argument&) {
      r.fail("bad integer '" + t + "'");
    } catch (const std::out_of_range&) {
      r.fail("bad integer '" + t + "'");
    }
  }
};

inline std::string dimacs_var(long v) { return "v" + std::to_string(v); }

}  // namespace reductions_detail

inline CnfFormula parse_dimacs(const std::string& text) {
  using reductions_detail::DimacsReader;
  DimacsReader r(text);
  auto header = r.next();
  if (header.size() != 4 || header[0] != "p" || header[1] != "cnf") {
    r.fail("expected 'p cnf <vars> <clauses>'");
  }
  long nvars = DimacsReader::to_int(header[2], r);
  long nclauses = DimacsReader::to_int(header[3], r);
  if (nvars < 1 || nclauses < 1) r.fail("empty problem");

  CnfFormula cnf;
  for (long v = 1; v <= nvars; ++v) cnf.variables.push_back(reductions_detail::dimacs_var(v));
  std::vector<Literal> clause;
  for (auto tokens = r.next(); !tokens.empty(); tokens = r.next()) {
    for (const auto& t : tokens) {
      long v = DimacsReader::to_int(t, r);
      if (v == 0) {
        if (clause.empty()) r.fail("empty clause");
        cnf.clauses.push_back(clause);
        clause.clear();
        continue;
      }
      long a = v < 0 ? -v : v;
      if (a > nvars) r.fail("literal out of range");
      clause.push_back(Literal{reductions_detail::dimacs_var(a), v > 0});
    }
  }
  if (!clause.empty()) r.fail("unterminated clause");
  if ((long)cnf.clauses.size() != nclauses) r.fail("clause count does not match header");
  return cnf;
}

inline QbfFormula parse_qdimacs(const std::string& text) {
  using reductions_detail::DimacsReader;
  DimacsReader r(text);
  auto header = r.next();
  if (header.size() != 4 || header[0] != "p" || header[1] != "cnf") {
    r.fail("expected 'p cnf <vars> <clauses>'");
  }
  long nvars = DimacsReader::to_int(header[2], r);
  long nclauses = DimacsReader::to_int(header[3], r);
  if (nvars < 1 || nclauses < 1) r.fail("empty problem");

  QbfFormula qbf;
  std::set<long> quantified;
  bool saw_exists = false;
  auto tokens = r.next();
  while (!tokens.empty() && (tokens[0] == "a" || tokens[0] == "e")) {
    bool is_forall = tokens[0] == "a";
    if (is_forall && saw_exists) r.fail("universal block after existential block");
    if (!is_forall) saw_exists = true;
    if (tokens.back() != "0") r.fail("quantifier line must end with 0");
    for (size_t i = 1; i + 1 < tokens.size(); ++i) {
      long v = DimacsReader::to_int(tokens[i], r);
      if (v < 1 || v > nvars) r.fail("quantified variable out of range");
      if (!quantified.insert(v).second) r.fail("variable quantified twice");
      auto& side = is_forall ? qbf.universals : qbf.existentials;
      side.push_back(reductions_detail::dimacs_var(v));
    }
    tokens = r.next();
  }
  for (long v = 1; v <= nvars; ++v) {
    if (!quantified.count(v)) r.fail("unquantified variable " + std::to_string(v));
  }
  qbf.matrix.variables.assign(qbf.universals.begin(), qbf.universals.end());
  qbf.matrix.variables.insert(qbf.matrix.variables.end(), qbf.existentials.begin(),
                              qbf.existentials.end());

  std::vector<Literal> clause;
  while (!tokens.empty()) {
    for (const auto& t : tokens) {
      long v = DimacsReader::to_int(t, r);
      if (v == 0) {
        if (clause.empty()) r.fail("empty clause");
        qbf.matrix.clauses.push_back(clause);
        clause.clear();
        continue;
      }
      long a = v < 0 ? -v : v;
      if (a > nvars) r.fail("literal out of range");
      clause.push_back(Literal{reductions_detail::dimacs_var(a), v > 0});
    }
    tokens = r.next();
  }
  if (!clause.empty()) r.fail("unterminated clause");
  if ((long)qbf.matrix.clauses.size() != nclauses) r.fail("clause count does not match header");
  return qbf;
}

}  // namespace argdb
