#pragma once

// Argumentation frameworks with collective attacks. Arguments are database
// facts plus auxiliary arguments, one per (source fact, generating constraint)
// pair. Builders:
//
//   build_dc_setaf    conflicts C of the denial fragment -> attacks (C\{t}, t)
//   build_ltgd_setaf  aux argument per (source fact, tgd); aux self-attacks,
//                     attacks its fact, and is attacked by each support set
//   build_combined_setaf  union of both attack families
//   build_fd_af       symmetric binary attacks between violating pairs
//   build_id_af       plain-attack specialization of the tgd build
//   build_combined_af union of the fd and id builds
//
// A singleton conflict {t} degenerates to the self-attack ({t}, t).

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "grounding.hpp"
#include "model.hpp"
#include "parser.hpp"

namespace argdb {

enum class ArgKind { Fact = 0, Aux = 1 };

struct Argument {
  ArgKind kind = ArgKind::Fact;
  Fact fact;
  int constraint_index = -1;  // -1 for plain fact arguments

  static Argument for_fact(Fact f) { return Argument{ArgKind::Fact, std::move(f), -1}; }
  static Argument aux(Fact f, int constraint_index) {
    return Argument{ArgKind::Aux, std::move(f), constraint_index};
  }
  auto operator<=>(const Argument&) const = default;
};

inline std::string to_string(const Argument& a) {
  std::string s = to_string(a.fact);
  if (a.kind == ArgKind::Aux) s += "__c" + std::to_string(a.constraint_index);
  return s;
}

struct Attack {
  std::set<Argument> sources;  // non-empty
  Argument target;
  auto operator<=>(const Attack&) const = default;
};

struct Setaf {
  std::set<Argument> arguments;
  std::set<Attack> attacks;
  std::map<Attack, std::string> provenance;  // informational; ignored by ==

  void add_attack(std::set<Argument> sources, Argument target, std::string origin) {
    Attack atk{std::move(sources), std::move(target)};
    auto [it, fresh] = attacks.insert(atk);
    if (fresh) provenance.emplace(*it, std::move(origin));
  }
  bool operator==(const Setaf& o) const {
    return arguments == o.arguments && attacks == o.attacks;
  }
};

inline bool is_plain(const Setaf& s) {
  for (const auto& atk : s.attacks) {
    if (atk.sources.size() != 1) return false;
  }
  return true;
}

namespace framework_detail {

inline void add_fact_arguments(Setaf& s, const ConstrainedDatabase& cdb) {
  for (const auto& f : cdb.database.facts) s.arguments.insert(Argument::for_fact(f));
}

// Attacks of the denial fragment: for every conflict C and t in C, the rest of
// C attacks t. Ignores non-denial constraints.
inline void add_conflict_attacks(Setaf& s, const ConstrainedDatabase& cdb) {
  for (const auto& conflict : compute_conflicts(cdb)) {
    std::string origin = "conflict#" + std::to_string(conflict.witness);
    for (const auto& t : conflict.facts) {
      std::set<Argument> sources;
      for (const auto& f : conflict.facts) {
        if (!(f == t)) sources.insert(Argument::for_fact(f));
      }
      Argument target = Argument::for_fact(t);
      if (sources.empty()) sources.insert(target);  // singleton conflict
      s.add_attack(std::move(sources), std::move(target), origin);
    }
  }
}

// Aux structure for tgds (and ids, via normalization). Ignores the denial
// fragment.
inline void add_support_structure(Setaf& s, const ConstrainedDatabase& cdb, bool self_attacks) {
  for (size_t idx = 0; idx < cdb.constraints.size(); ++idx) {
    Ltgd ltgd;
    if (const Ltgd* l = std::get_if<Ltgd>(&cdb.constraints[idx])) {
      ltgd = *l;
    } else if (const Id* id = std::get_if<Id>(&cdb.constraints[idx])) {
      ltgd = normalize_id_to_ltgd(*id, cdb.database.schema);
    } else {
      continue;
    }
    std::string origin = "constraint#" + std::to_string(idx);
    for (const auto& f : cdb.database.facts) {
      if (f.relation != ltgd.body.relation || !matches_body(ltgd.body, f)) continue;
      Argument aux = Argument::aux(f, (int)idx);
      s.arguments.insert(aux);
      if (self_attacks) s.add_attack({aux}, aux, origin + " self");
      s.add_attack({aux}, Argument::for_fact(f), origin + " doubt");
      for (const auto& support : compute_supports(cdb, ltgd, f)) {
        std::set<Argument> sources;
        for (const auto& sf : support.facts) sources.insert(Argument::for_fact(sf));
        s.add_attack(std::move(sources), aux, origin + " support");
      }
    }
  }
}

inline void require_classes(const ConstrainedDatabase& cdb, bool fd, bool id, bool dc, bool ltgd,
                            const std::string& builder) {
  ConstraintProfile p = classify(cdb);
  if ((p.has_fd && !fd) || (p.has_id && !id) || (p.has_dc && !dc) || (p.has_ltgd && !ltgd)) {
    throw std::invalid_argument(builder + ": unsupported constraint class in input");
  }
}

}  // namespace framework_detail

inline Setaf build_dc_setaf(const ConstrainedDatabase& cdb) {
  framework_detail::require_classes(cdb, true, false, true, false, "build_dc_setaf");
  Setaf s;
  framework_detail::add_fact_arguments(s, cdb);
  framework_detail::add_conflict_attacks(s, cdb);
  return s;
}

inline Setaf build_ltgd_setaf(const ConstrainedDatabase& cdb, bool self_attacks = true) {
  framework_detail::require_classes(cdb, false, true, false, true, "build_ltgd_setaf");
  Setaf s;
  framework_detail::add_fact_arguments(s, cdb);
  framework_detail::add_support_structure(s, cdb, self_attacks);
  return s;
}

inline Setaf build_combined_setaf(const ConstrainedDatabase& cdb) {
  Setaf s;
  framework_detail::add_fact_arguments(s, cdb);
  framework_detail::add_conflict_attacks(s, cdb);
  framework_detail::add_support_structure(s, cdb, true);
  return s;
}

inline Setaf build_fd_af(const ConstrainedDatabase& cdb) {
  framework_detail::require_classes(cdb, true, false, false, false, "build_fd_af");
  Setaf s;
  framework_detail::add_fact_arguments(s, cdb);
  framework_detail::add_conflict_attacks(s, cdb);  // fd conflicts are pairs
  return s;
}

inline Setaf build_id_af(const ConstrainedDatabase& cdb, bool self_attacks = true) {
  framework_detail::require_classes(cdb, false, true, false, false, "build_id_af");
  Setaf s;
  framework_detail::add_fact_arguments(s, cdb);
  for (size_t idx = 0; idx < cdb.constraints.size(); ++idx) {
    const Id& id = std::get<Id>(cdb.constraints[idx]);
    std::string origin = "constraint#" + std::to_string(idx);
    for (const auto& f : cdb.database.facts) {
      if (f.relation != id.source_relation) continue;
      Argument aux = Argument::aux(f, (int)idx);
      s.arguments.insert(aux);
      if (self_attacks) s.add_attack({aux}, aux, origin + " self");
      s.add_attack({aux}, Argument::for_fact(f), origin + " doubt");
      for (const auto& t : id_supports(cdb.database, id, f)) {
        s.add_attack({Argument::for_fact(t)}, aux, origin + " support");
      }
    }
  }
  return s;
}

inline Setaf build_combined_af(const ConstrainedDatabase& cdb) {
  framework_detail::require_classes(cdb, true, true, false, false, "build_combined_af");
  Setaf fd_part = build_fd_af(ConstrainedDatabase{cdb.database, {}});
  Setaf s;
  framework_detail::add_fact_arguments(s, cdb);
  framework_detail::add_conflict_attacks(s, cdb);
  for (size_t idx = 0; idx < cdb.constraints.size(); ++idx) {
    if (!std::holds_alternative<Id>(cdb.constraints[idx])) continue;
    const Id& id = std::get<Id>(cdb.constraints[idx]);
    std::string origin = "constraint#" + std::to_string(idx);
    for (const auto& f : cdb.database.facts) {
      if (f.relation != id.source_relation) continue;
      Argument aux = Argument::aux(f, (int)idx);
      s.arguments.insert(aux);
      s.add_attack({aux}, aux, origin + " self");
      s.add_attack({aux}, Argument::for_fact(f), origin + " doubt");
      for (const auto& t : id_supports(cdb.database, id, f)) {
        s.add_attack({Argument::for_fact(t)}, aux, origin + " support");
      }
    }
  }
  return s;
}

// Builder dispatch on the constraint profile. Pure denial fragments stay in
// the conflict translation, pure generating fragments in the support
// translation, anything mixed (or force_setaf) takes the combined build.
inline Setaf build_for_profile(const ConstrainedDatabase& cdb, bool force_setaf = false) {
  if (force_setaf) return build_combined_setaf(cdb);
  ConstraintProfile p = classify(cdb);
  bool denial = p.has_fd || p.has_dc;
  bool generating = p.has_id || p.has_ltgd;
  if (!denial && !generating) return build_combined_setaf(cdb);
  if (!generating) return p.has_dc ? build_dc_setaf(cdb) : build_fd_af(cdb);
  if (!denial) return p.has_ltgd ? build_ltgd_setaf(cdb) : build_id_af(cdb);
  if (!p.has_dc && !p.has_ltgd) return build_combined_af(cdb);
  return build_combined_setaf(cdb);
}

struct PreprocessResult {
  Setaf reduced;
  std::set<Fact> removed_facts;
};

// Fixed point: while some aux argument has no attacker besides itself, drop
// its fact together with all of that fact's arguments and incident attacks.
// The scan order is irrelevant to the result; it is parameterized so tests
// can exercise confluence.
inline PreprocessResult preprocess(const Setaf& input,
                                   const std::vector<Argument>& scan_order = {}) {
  PreprocessResult result;
  result.reduced = input;
  Setaf& s = result.reduced;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Argument> order;
    if (scan_order.empty()) {
      for (const auto& a : s.arguments) {
        if (a.kind == ArgKind::Aux) order.push_back(a);
      }
    } else {
      for (const auto& a : scan_order) {
        if (a.kind == ArgKind::Aux && s.arguments.count(a)) order.push_back(a);
      }
    }
    for (const auto& aux : order) {
      bool attacked_by_other = false;
      for (const auto& atk : s.attacks) {
        if (atk.target == aux && !(atk.sources.size() == 1 && *atk.sources.begin() == aux)) {
          attacked_by_other = true;
          break;
        }
      }
      if (attacked_by_other) continue;
      Fact doomed = aux.fact;
      result.removed_facts.insert(doomed);
      std::set<Argument> gone;
      for (const auto& a : s.arguments) {
        if (a.fact == doomed) gone.insert(a);
      }
      for (const auto& a : gone) s.arguments.erase(a);
      for (auto it = s.attacks.begin(); it != s.attacks.end();) {
        bool touched = gone.count(it->target) > 0;
        if (!touched) {
          for (const auto& src : it->sources) {
            if (gone.count(src)) { touched = true; break; }
          }
        }
        if (touched) {
          s.provenance.erase(*it);
          it = s.attacks.erase(it);
        } else {
          ++it;
        }
      }
      changed = true;
      break;
    }
  }
  return result;
}

// -- text export / import ---------------------------------------------------

namespace framework_detail {

inline bool is_bare_name(const std::string& s) {
  if (s.empty() || !std::isalpha((unsigned char)s[0])) return false;
  for (char c : s) {
    if (!std::isalnum((unsigned char)c) && c != '_') return false;
  }
  return true;
}

inline std::string quoted_if_needed(const std::string& s) {
  return is_bare_name(s) ? s : "\"" + s + "\"";
}

}  // namespace framework_detail

// Display name: fact label when one exists, canonical fact string otherwise;
// aux arguments carry a __c<i> suffix for their constraint index. Unary facts
// over the import pseudo-relation keep their original name so that exporting
// an imported framework reproduces the input.
inline std::string argument_name(const Argument& a, const std::map<std::string, Fact>& labels) {
  std::string base;
  for (const auto& [name, fact] : labels) {
    if (fact == a.fact) { base = name; break; }
  }
  if (base.empty()) {
    if (a.fact.relation == "arg" && a.fact.values.size() == 1) {
      base = a.fact.values[0];
    } else {
      base = to_string(a.fact);
    }
  }
  if (a.kind == ArgKind::Aux) base += "__c" + std::to_string(a.constraint_index);
  return base;
}

// arg(a). / att(a,b). lines; collective attacks use satt([a,b],c).
inline std::string export_apx(const Setaf& s, const std::map<std::string, Fact>& labels = {}) {
  using framework_detail::quoted_if_needed;
  std::string out;
  for (const auto& a : s.arguments) {
    out += "arg(" + quoted_if_needed(argument_name(a, labels)) + ").\n";
  }
  for (const auto& atk : s.attacks) {
    if (atk.sources.size() == 1) {
      out += "att(" + quoted_if_needed(argument_name(*atk.sources.begin(), labels)) + "," +
             quoted_if_needed(argument_name(atk.target, labels)) + ").\n";
    } else {
      out += "satt([";
      bool first = true;
      for (const auto& src : atk.sources) {
        if (!first) out += ",";
        first = false;
        out += quoted_if_needed(argument_name(src, labels));
      }
      out += "]," + quoted_if_needed(argument_name(atk.target, labels)) + ").\n";
    }
  }
  return out;
}

struct ImportedFramework {
  Setaf setaf;
  std::map<std::string, Argument> names;
};

// Parses arg/att/satt lines. Imported arguments become unary facts over the
// pseudo-relation "arg" so the semantics engine can treat them uniformly.
inline ImportedFramework import_apx(const std::string& text);

namespace framework_detail {

struct ApxScanner {
  const std::string& text;
  size_t i = 0;
  int line = 1;
  int col = 1;

  explicit ApxScanner(const std::string& t) : text(t) {}
  void advance() {
    if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    ++i;
  }
  void skip_ws() {
    while (i < text.size()) {
      if (std::isspace((unsigned char)text[i])) { advance(); continue; }
      if (text[i] == '%') {
        while (i < text.size() && text[i] != '\n') advance();
        continue;
      }
      break;
    }
  }
  bool eof() { skip_ws(); return i >= text.size(); }
  [[noreturn]] void fail(const std::string& msg) {
    throw SourceError(line, col, ErrorKind::Syntax, msg);
  }
  void expect(char c) {
    skip_ws();
    if (i >= text.size() || text[i] != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  std::string name() {
    skip_ws();
    if (i < text.size() && text[i] == '"') {
      advance();
      std::string out;
      while (i < text.size() && text[i] != '"' && text[i] != '\n') { out += text[i]; advance(); }
      if (i >= text.size() || text[i] != '"') fail("unterminated quoted name");
      advance();
      return out;
    }
    std::string out;
    while (i < text.size() && (std::isalnum((unsigned char)text[i]) || text[i] == '_')) {
      out += text[i];
      advance();
    }
    if (out.empty()) fail("expected an argument name");
    return out;
  }
  std::string keyword() {
    skip_ws();
    std::string out;
    while (i < text.size() && std::isalpha((unsigned char)text[i])) { out += text[i]; advance(); }
    return out;
  }
};

}  // namespace framework_detail

inline ImportedFramework import_apx(const std::string& text) {
  framework_detail::ApxScanner sc(text);
  ImportedFramework out;
  auto resolve = [&](const std::string& name) -> Argument {
    auto it = out.names.find(name);
    if (it == out.names.end()) sc.fail("undeclared argument '" + name + "'");
    return it->second;
  };
  while (!sc.eof()) {
    std::string kw = sc.keyword();
    if (kw == "arg") {
      sc.expect('(');
      std::string name = sc.name();
      sc.expect(')');
      sc.expect('.');
      Argument a = Argument::for_fact(Fact{"arg", {name}});
      out.names.emplace(name, a);
      out.setaf.arguments.insert(a);
    } else if (kw == "att") {
      sc.expect('(');
      Argument src = resolve(sc.name());
      sc.expect(',');
      Argument tgt = resolve(sc.name());
      sc.expect(')');
      sc.expect('.');
      out.setaf.add_attack({src}, tgt, "imported");
    } else if (kw == "satt") {
      sc.expect('(');
      sc.expect('[');
      std::set<Argument> sources;
      sources.insert(resolve(sc.name()));
      sc.skip_ws();
      while (sc.i < sc.text.size() && sc.text[sc.i] == ',') {
        sc.advance();
        sources.insert(resolve(sc.name()));
        sc.skip_ws();
      }
      sc.expect(']');
      sc.expect(',');
      Argument tgt = resolve(sc.name());
      sc.expect(')');
      sc.expect('.');
      out.setaf.add_attack(std::move(sources), tgt, "imported");
    } else {
      sc.fail("expected arg, att or satt");
    }
  }
  return out;
}

}  // namespace argdb
