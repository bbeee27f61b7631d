#pragma once

// Homomorphism enumeration and constraint checking over a database, plus the
// two derived objects the framework builders consume: conflicts (subset-minimal
// fact sets violating a denial constraint, minimality per witnessing
// constraint) and supports (fact sets witnessing a tgd head for one source
// fact). Existential variables range over the active domain only.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "model.hpp"

namespace argdb {

using Assignment = std::map<std::string, std::string>;

struct Conflict {
  std::set<Fact> facts;
  int witness = -1;  // index into cdb.constraints
  auto operator<=>(const Conflict&) const = default;
};

struct SupportSet {
  std::set<Fact> facts;
  auto operator<=>(const SupportSet&) const = default;
};

namespace grounding_detail {

inline std::vector<const Fact*> facts_of(const Database& db, const std::string& relation) {
  std::vector<const Fact*> out;
  for (const auto& f : db.facts) {
    if (f.relation == relation) out.push_back(&f);
  }
  return out;
}

// Extends `binding` so that atom maps onto fact; records added keys for undo.
inline bool unify(const Atom& atom, const Fact& fact, Assignment& binding,
                  std::vector<std::string>& added) {
  if (atom.relation != fact.relation || atom.terms.size() != fact.values.size()) return false;
  size_t undo_from = added.size();
  for (size_t i = 0; i < atom.terms.size(); ++i) {
    const Term& t = atom.terms[i];
    const std::string& v = fact.values[i];
    if (!t.is_variable) {
      if (t.text != v) {
        for (size_t k = undo_from; k < added.size(); ++k) binding.erase(added[k]);
        added.resize(undo_from);
        return false;
      }
      continue;
    }
    auto it = binding.find(t.text);
    if (it != binding.end()) {
      if (it->second != v) {
        for (size_t k = undo_from; k < added.size(); ++k) binding.erase(added[k]);
        added.resize(undo_from);
        return false;
      }
    } else {
      binding.emplace(t.text, v);
      added.push_back(t.text);
    }
  }
  return true;
}

// Visits every assignment extending `binding` that maps atoms[i..] into the
// database. The visitor returns false to stop the walk; the function returns
// false iff a visitor stopped it.
inline bool match_atoms(const std::vector<Atom>& atoms, size_t i, const Database& db,
                        Assignment& binding,
                        const std::function<bool(const Assignment&)>& visit) {
  if (i == atoms.size()) return visit(binding);
  for (const Fact* f : facts_of(db, atoms[i].relation)) {
    std::vector<std::string> added;
    if (!unify(atoms[i], *f, binding, added)) continue;
    bool keep_going = match_atoms(atoms, i + 1, db, binding, visit);
    for (const auto& key : added) binding.erase(key);
    if (!keep_going) return false;
  }
  return true;
}

inline std::string term_value(const Term& t, const Assignment& a) {
  if (!t.is_variable) return t.text;
  return a.at(t.text);
}

inline bool eval_comparisons(const std::vector<Comparison>& cmps, const Assignment& a) {
  for (const auto& c : cmps) {
    bool eq = term_value(c.lhs, a) == term_value(c.rhs, a);
    if (c.op == CompareOp::Eq ? !eq : eq) return false;
  }
  return true;
}

inline Fact apply_assignment(const Atom& atom, const Assignment& a) {
  Fact f{atom.relation, {}};
  for (const auto& t : atom.terms) f.values.push_back(term_value(t, a));
  return f;
}

inline std::set<Fact> image_of(const std::vector<Atom>& atoms, const Assignment& a) {
  std::set<Fact> out;
  for (const auto& atom : atoms) out.insert(apply_assignment(atom, a));
  return out;
}

}  // namespace grounding_detail

// All assignments extending `fixed` whose atom images lie in db.facts,
// deduplicated, in lexicographic binding order.
inline std::vector<Assignment> enumerate_homomorphisms(const std::vector<Atom>& atoms,
                                                       const Database& db,
                                                       const Assignment& fixed = {}) {
  std::set<Assignment> found;
  Assignment binding = fixed;
  grounding_detail::match_atoms(atoms, 0, db, binding, [&](const Assignment& a) {
    found.insert(a);
    return true;
  });
  return {found.begin(), found.end()};
}

// True iff `fact` is an image of `body` under some assignment. If so and
// `out` is non-null, the (unique) body binding is stored there.
inline bool matches_body(const Atom& body, const Fact& fact, Assignment* out = nullptr) {
  Assignment binding;
  std::vector<std::string> added;
  if (!grounding_detail::unify(body, fact, binding, added)) return false;
  if (out) *out = std::move(binding);
  return true;
}

inline bool satisfies(const Database& db, const Constraint& constraint) {
  using namespace grounding_detail;
  if (const Fd* fd = std::get_if<Fd>(&constraint)) {
    auto facts = facts_of(db, fd->relation);
    for (size_t i = 0; i < facts.size(); ++i) {
      for (size_t j = i + 1; j < facts.size(); ++j) {
        bool same_det = true;
        for (int p : fd->determinant) {
          if (facts[i]->values[p - 1] != facts[j]->values[p - 1]) { same_det = false; break; }
        }
        if (!same_det) continue;
        for (int p : fd->dependent) {
          if (facts[i]->values[p - 1] != facts[j]->values[p - 1]) return false;
        }
      }
    }
    return true;
  }
  if (const Id* id = std::get_if<Id>(&constraint)) {
    auto sources = facts_of(db, id->source_relation);
    auto targets = facts_of(db, id->target_relation);
    for (const Fact* s : sources) {
      bool supported = false;
      for (const Fact* t : targets) {
        bool match = true;
        for (size_t k = 0; k < id->source_attrs.size(); ++k) {
          if (s->values[id->source_attrs[k] - 1] != t->values[id->target_attrs[k] - 1]) {
            match = false;
            break;
          }
        }
        if (match) { supported = true; break; }
      }
      if (!supported) return false;
    }
    return true;
  }
  if (const Dc* dc = std::get_if<Dc>(&constraint)) {
    Assignment binding;
    bool no_violation = match_atoms(dc->body, 0, db, binding, [&](const Assignment& a) {
      return !eval_comparisons(dc->comparisons, a);  // stop on a real violation
    });
    return no_violation;
  }
  const Ltgd& l = std::get<Ltgd>(constraint);
  for (const Fact* s : facts_of(db, l.body.relation)) {
    Assignment body_binding;
    if (!matches_body(l.body, *s, &body_binding)) continue;
    bool found = !match_atoms(l.head, 0, db, body_binding,
                              [](const Assignment&) { return false; });
    if (!found) return false;
  }
  return true;
}

inline bool consistent(const Database& db, const std::vector<Constraint>& constraints) {
  for (const auto& c : constraints) {
    if (!satisfies(db, c)) return false;
  }
  return true;
}

// Conflicts of the denial fragment (DCs, plus FDs via normalization); other
// constraint classes are ignored. Minimality is per witnessing constraint;
// pass global_minimal to additionally drop sets that strictly contain a
// conflict of another constraint.
inline std::vector<Conflict> compute_conflicts(const ConstrainedDatabase& cdb,
                                               bool global_minimal = false) {
  using namespace grounding_detail;
  std::vector<Conflict> out;
  for (size_t idx = 0; idx < cdb.constraints.size(); ++idx) {
    std::vector<Dc> dcs;
    if (const Dc* dc = std::get_if<Dc>(&cdb.constraints[idx])) {
      dcs.push_back(*dc);
    } else if (const Fd* fd = std::get_if<Fd>(&cdb.constraints[idx])) {
      dcs = normalize_fd_to_dc(*fd, cdb.database.schema);
    } else {
      continue;
    }
    std::set<std::set<Fact>> images;
    for (const auto& dc : dcs) {
      Assignment binding;
      match_atoms(dc.body, 0, cdb.database, binding, [&](const Assignment& a) {
        if (eval_comparisons(dc.comparisons, a)) images.insert(image_of(dc.body, a));
        return true;
      });
    }
    // Keep the subset-minimal images. std::set orders by content, so sort by
    // size first; any violating superset contains a minimal violating image.
    std::vector<const std::set<Fact>*> by_size;
    for (const auto& img : images) by_size.push_back(&img);
    std::stable_sort(by_size.begin(), by_size.end(),
                     [](const auto* a, const auto* b) { return a->size() < b->size(); });
    std::vector<const std::set<Fact>*> kept;
    for (const auto* img : by_size) {
      bool dominated = false;
      for (const auto* k : kept) {
        if (std::includes(img->begin(), img->end(), k->begin(), k->end())) {
          dominated = true;
          break;
        }
      }
      if (!dominated) kept.push_back(img);
    }
    for (const auto* img : kept) out.push_back(Conflict{*img, (int)idx});
  }
  if (global_minimal) {
    std::vector<Conflict> filtered;
    for (const auto& c : out) {
      bool dominated = false;
      for (const auto& other : out) {
        if (other.facts.size() < c.facts.size() &&
            std::includes(c.facts.begin(), c.facts.end(), other.facts.begin(),
                          other.facts.end())) {
          dominated = true;
          break;
        }
      }
      if (!dominated) filtered.push_back(c);
    }
    out = std::move(filtered);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Support sets for one source fact of a tgd: the head images of every
// assignment extending the body binding. Deduplicated, not minimized unless
// asked. Throws if `s` does not match the body atom.
inline std::vector<SupportSet> compute_supports(const ConstrainedDatabase& cdb, const Ltgd& ltgd,
                                                const Fact& s, bool minimize = false) {
  using namespace grounding_detail;
  Assignment body_binding;
  if (!matches_body(ltgd.body, s, &body_binding)) {
    throw std::invalid_argument("compute_supports: " + to_string(s) +
                                " does not match the body atom");
  }
  std::set<std::set<Fact>> images;
  Assignment binding = body_binding;
  match_atoms(ltgd.head, 0, cdb.database, binding, [&](const Assignment& a) {
    images.insert(image_of(ltgd.head, a));
    return true;
  });
  std::vector<SupportSet> out;
  for (const auto& img : images) {
    if (minimize) {
      bool dominated = false;
      for (const auto& other : images) {
        if (other.size() < img.size() &&
            std::includes(img.begin(), img.end(), other.begin(), other.end())) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
    }
    out.push_back(SupportSet{img});
  }
  return out;
}

// Direct route for inclusion dependencies: the single target facts that
// support `s`. Equals the tgd route after normalize_id_to_ltgd.
inline std::vector<Fact> id_supports(const Database& db, const Id& id, const Fact& s) {
  std::vector<Fact> out;
  for (const Fact* t : grounding_detail::facts_of(db, id.target_relation)) {
    bool match = true;
    for (size_t k = 0; k < id.source_attrs.size(); ++k) {
      if (s.values[id.source_attrs[k] - 1] != t->values[id.target_attrs[k] - 1]) {
        match = false;
        break;
      }
    }
    if (match) out.push_back(*t);
  }
  return out;
}

}  // namespace argdb
