#pragma once

// Core value types: schemas, facts, databases and the four integrity
// constraint classes (functional dependencies, inclusion dependencies,
// denial constraints, single-body-atom tuple-generating dependencies).
// Attribute positions are 1-based throughout.

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace argdb {

namespace detail {

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

struct Schema {
  std::map<std::string, int> relations;  // name -> arity (>= 1)

  bool knows(const std::string& name) const { return relations.count(name) > 0; }
  int arity_of(const std::string& name) const {
    auto it = relations.find(name);
    return it == relations.end() ? -1 : it->second;
  }
  auto operator<=>(const Schema&) const = default;
};

struct Fact {
  std::string relation;
  std::vector<std::string> values;  // constants are opaque strings
  auto operator<=>(const Fact&) const = default;
};

inline std::string to_string(const Fact& f) {
  return f.relation + "(" + detail::join(f.values, ",") + ")";
}

struct Database {
  Schema schema;
  std::set<Fact> facts;  // set semantics; duplicates collapse

  std::set<std::string> active_domain() const {
    std::set<std::string> dom;
    for (const auto& f : facts) dom.insert(f.values.begin(), f.values.end());
    return dom;
  }
  auto operator<=>(const Database&) const = default;
};

struct Term {
  bool is_variable = false;
  std::string text;

  static Term var(std::string name) { return Term{true, std::move(name)}; }
  static Term constant(std::string value) { return Term{false, std::move(value)}; }
  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string relation;
  std::vector<Term> terms;
  auto operator<=>(const Atom&) const = default;
};

enum class CompareOp { Eq, Neq };

struct Comparison {
  Term lhs;
  CompareOp op = CompareOp::Neq;
  Term rhs;
  auto operator<=>(const Comparison&) const = default;
};

// R: determinant -> dependent, e.g. fd: T: [1] -> [3].
struct Fd {
  std::string relation;
  std::vector<int> determinant;
  std::vector<int> dependent;
  auto operator<=>(const Fd&) const = default;
};

// R[source_attrs] <= S[target_attrs].
struct Id {
  std::string source_relation;
  std::vector<int> source_attrs;
  std::string target_relation;
  std::vector<int> target_attrs;
  auto operator<=>(const Id&) const = default;
};

// Forbidden pattern: no homomorphism may map `body` into the database while
// satisfying `comparisons`. Comparisons may be empty.
struct Dc {
  std::vector<Atom> body;
  std::vector<Comparison> comparisons;
  auto operator<=>(const Dc&) const = default;
};

// Single body atom; head variables missing from the body are existential,
// ranging over the active domain (no fresh nulls).
struct Ltgd {
  Atom body;
  std::vector<Atom> head;
  auto operator<=>(const Ltgd&) const = default;
};

using Constraint = std::variant<Fd, Id, Dc, Ltgd>;

struct ConstrainedDatabase {
  Database database;
  std::vector<Constraint> constraints;
  auto operator<=>(const ConstrainedDatabase&) const = default;
};

struct ConstraintProfile {
  bool has_fd = false;
  bool has_id = false;
  bool has_dc = false;
  bool has_ltgd = false;
  auto operator<=>(const ConstraintProfile&) const = default;
};

// Tag-level classification; FDs do not count as DCs and IDs do not count as
// LTGDs even though they normalize into them.
inline ConstraintProfile classify(const std::vector<Constraint>& constraints) {
  ConstraintProfile p;
  for (const auto& c : constraints) {
    if (std::holds_alternative<Fd>(c)) p.has_fd = true;
    else if (std::holds_alternative<Id>(c)) p.has_id = true;
    else if (std::holds_alternative<Dc>(c)) p.has_dc = true;
    else p.has_ltgd = true;
  }
  return p;
}

inline ConstraintProfile classify(const ConstrainedDatabase& cdb) {
  return classify(cdb.constraints);
}

namespace detail {

inline Term pos_var(const std::string& prefix, int pos) {
  return Term::var(prefix + std::to_string(pos));
}

}  // namespace detail

// One denial constraint per dependent position: two atoms over the relation
// sharing variables on the determinant, with an inequality on the dependent.
inline std::vector<Dc> normalize_fd_to_dc(const Fd& fd, const Schema& schema) {
  int arity = schema.arity_of(fd.relation);
  if (arity < 1) throw std::invalid_argument("normalize_fd_to_dc: unknown relation " + fd.relation);
  std::set<int> det(fd.determinant.begin(), fd.determinant.end());
  std::vector<Dc> out;
  for (int dep : fd.dependent) {
    Atom left{fd.relation, {}};
    Atom right{fd.relation, {}};
    for (int p = 1; p <= arity; ++p) {
      left.terms.push_back(detail::pos_var("X", p));
      right.terms.push_back(det.count(p) ? detail::pos_var("X", p) : detail::pos_var("Y", p));
    }
    Comparison cmp{detail::pos_var("X", dep), CompareOp::Neq,
                   det.count(dep) ? detail::pos_var("X", dep) : detail::pos_var("Y", dep)};
    out.push_back(Dc{{left, right}, {cmp}});
  }
  return out;
}

// Body atom with distinct variables; target positions reuse the matching
// source variable, all other target positions get fresh existential variables.
inline Ltgd normalize_id_to_ltgd(const Id& id, const Schema& schema) {
  int src_arity = schema.arity_of(id.source_relation);
  int tgt_arity = schema.arity_of(id.target_relation);
  if (src_arity < 1) throw std::invalid_argument("normalize_id_to_ltgd: unknown relation " + id.source_relation);
  if (tgt_arity < 1) throw std::invalid_argument("normalize_id_to_ltgd: unknown relation " + id.target_relation);
  Atom body{id.source_relation, {}};
  for (int p = 1; p <= src_arity; ++p) body.terms.push_back(detail::pos_var("X", p));
  Atom head{id.target_relation, {}};
  for (int p = 1; p <= tgt_arity; ++p) {
    bool bound = false;
    for (size_t k = 0; k < id.target_attrs.size(); ++k) {
      if (id.target_attrs[k] == p) {
        head.terms.push_back(detail::pos_var("X", id.source_attrs[k]));
        bound = true;
        break;
      }
    }
    if (!bound) head.terms.push_back(detail::pos_var("Y", p));
  }
  return Ltgd{body, {head}};
}

namespace detail {

inline void check_positions(const std::vector<int>& positions, int arity,
                            const std::string& what) {
  if (positions.empty()) throw std::invalid_argument(what + ": empty position list");
  for (int p : positions) {
    if (p < 1 || p > arity) {
      throw std::invalid_argument(what + ": position " + std::to_string(p) +
                                  " out of range for arity " + std::to_string(arity));
    }
  }
}

inline void check_atom(const Atom& atom, const Schema& schema, const std::string& what) {
  int arity = schema.arity_of(atom.relation);
  if (arity < 0) throw std::invalid_argument(what + ": unknown relation " + atom.relation);
  if ((int)atom.terms.size() != arity) {
    throw std::invalid_argument(what + ": atom over " + atom.relation + " has " +
                                std::to_string(atom.terms.size()) + " terms, arity is " +
                                std::to_string(arity));
  }
}

}  // namespace detail

// Structural invariants. Throws std::invalid_argument on the first breach.
inline void validate(const ConstrainedDatabase& cdb) {
  const Schema& schema = cdb.database.schema;
  for (const auto& [name, arity] : schema.relations) {
    if (name.empty()) throw std::invalid_argument("validate: empty relation name");
    if (arity < 1) throw std::invalid_argument("validate: relation " + name + " has arity < 1");
  }
  for (const auto& f : cdb.database.facts) {
    int arity = schema.arity_of(f.relation);
    if (arity < 0) throw std::invalid_argument("validate: fact over unknown relation " + f.relation);
    if ((int)f.values.size() != arity) {
      throw std::invalid_argument("validate: fact " + to_string(f) + " does not match arity " +
                                  std::to_string(arity));
    }
  }
  for (size_t i = 0; i < cdb.constraints.size(); ++i) {
    const std::string what = "validate: constraint #" + std::to_string(i);
    const Constraint& c = cdb.constraints[i];
    if (const Fd* fd = std::get_if<Fd>(&c)) {
      int arity = schema.arity_of(fd->relation);
      if (arity < 0) throw std::invalid_argument(what + ": unknown relation " + fd->relation);
      detail::check_positions(fd->determinant, arity, what + " determinant");
      detail::check_positions(fd->dependent, arity, what + " dependent");
    } else if (const Id* id = std::get_if<Id>(&c)) {
      int src = schema.arity_of(id->source_relation);
      int tgt = schema.arity_of(id->target_relation);
      if (src < 0) throw std::invalid_argument(what + ": unknown relation " + id->source_relation);
      if (tgt < 0) throw std::invalid_argument(what + ": unknown relation " + id->target_relation);
      detail::check_positions(id->source_attrs, src, what + " source attrs");
      detail::check_positions(id->target_attrs, tgt, what + " target attrs");
      if (id->source_attrs.size() != id->target_attrs.size()) {
        throw std::invalid_argument(what + ": attribute lists differ in length");
      }
    } else if (const Dc* dc = std::get_if<Dc>(&c)) {
      if (dc->body.empty()) throw std::invalid_argument(what + ": denial constraint with empty body");
      std::set<std::string> body_vars;
      for (const auto& atom : dc->body) {
        detail::check_atom(atom, schema, what);
        for (const auto& t : atom.terms) {
          if (t.is_variable) body_vars.insert(t.text);
        }
      }
      for (const auto& cmp : dc->comparisons) {
        for (const Term* t : {&cmp.lhs, &cmp.rhs}) {
          if (t->is_variable && !body_vars.count(t->text)) {
            throw std::invalid_argument(what + ": comparison variable " + t->text +
                                        " does not occur in the body");
          }
        }
      }
    } else {
      const Ltgd& l = std::get<Ltgd>(c);
      detail::check_atom(l.body, schema, what);
      if (l.head.empty()) throw std::invalid_argument(what + ": tgd with empty head");
      for (const auto& atom : l.head) detail::check_atom(atom, schema, what);
    }
  }
}

}  // namespace argdb
