#pragma once

// Subset-maximal repairs, computed two independent ways:
//
//   Oracle         brute-force search over subsets of the database, checking
//                  consistency against the constraints directly
//   Argumentation  preferred extensions of the framework built for the
//                  instance's constraint profile
//
// check_equivalence cross-validates the two routes. What must coincide
// depends on the constraint classes present: with only denial constraints
// (fds, dcs) the repairs equal the naive, preferred and stable extensions;
// with only generating constraints (ids, tgds) there is a single repair and
// it equals the single preferred extension as well as the set of facts
// surviving preprocessing; in the mixed case only preferred is guaranteed.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "framework.hpp"
#include "grounding.hpp"
#include "semantics.hpp"

namespace argdb {

constexpr int kDefaultMaxFacts = 20;

struct Budgets {
  int max_facts = kDefaultMaxFacts;
  int max_args = kDefaultMaxArguments;
};

struct RepairSet {
  std::vector<std::set<Fact>> repairs;  // sorted, no duplicates
  bool operator==(const RepairSet&) const = default;
};

enum class Route { Oracle, Argumentation, Both };

struct RouteMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace repairs_detail {

// Consistency of subsets, compiled against the full database: a subset is
// consistent iff it includes no conflict and every member that matches the
// body of a generating constraint has a support lying inside the subset.
struct CompiledInstance {
  std::vector<Fact> facts;  // canonical order
  int n = 0;
  std::vector<uint64_t> conflict_masks;
  struct Need {
    int fact = 0;  // index of the fact that needs support
    std::vector<uint64_t> supports;
  };
  std::vector<Need> needs;

  explicit CompiledInstance(const ConstrainedDatabase& cdb, int max_facts) {
    facts.assign(cdb.database.facts.begin(), cdb.database.facts.end());
    n = (int)facts.size();
    int cap = std::min(max_facts, 62);
    if (n > cap) {
      throw BudgetExceeded("database has " + std::to_string(n) +
                           " facts, over the repair search budget of " + std::to_string(cap));
    }
    std::map<Fact, int> index;
    for (int i = 0; i < n; ++i) index.emplace(facts[i], i);
    auto mask_of = [&](const std::set<Fact>& fs) {
      uint64_t m = 0;
      for (const auto& f : fs) m |= 1ull << index.at(f);
      return m;
    };
    for (const auto& c : compute_conflicts(cdb)) conflict_masks.push_back(mask_of(c.facts));
    for (size_t ci = 0; ci < cdb.constraints.size(); ++ci) {
      if (const Ltgd* l = std::get_if<Ltgd>(&cdb.constraints[ci])) {
        for (int i = 0; i < n; ++i) {
          if (facts[i].relation != l->body.relation || !matches_body(l->body, facts[i])) continue;
          Need need;
          need.fact = i;
          for (const auto& sup : compute_supports(cdb, *l, facts[i])) {
            need.supports.push_back(mask_of(sup.facts));
          }
          needs.push_back(std::move(need));
        }
      } else if (const Id* id = std::get_if<Id>(&cdb.constraints[ci])) {
        for (int i = 0; i < n; ++i) {
          if (facts[i].relation != id->source_relation) continue;
          Need need;
          need.fact = i;
          for (const auto& t : id_supports(cdb.database, *id, facts[i])) {
            need.supports.push_back(1ull << index.at(t));
          }
          needs.push_back(std::move(need));
        }
      }
    }
  }

  bool consistent(uint64_t set) const {
    for (uint64_t c : conflict_masks) {
      if ((c & ~set) == 0) return false;
    }
    for (const auto& need : needs) {
      if (((set >> need.fact) & 1) == 0) continue;
      bool supported = false;
      for (uint64_t m : need.supports) {
        if ((m & ~set) == 0) { supported = true; break; }
      }
      if (!supported) return false;
    }
    return true;
  }

  std::set<Fact> decode(uint64_t set) const {
    std::set<Fact> out;
    for (int i = 0; i < n; ++i) {
      if ((set >> i) & 1) out.insert(facts[i]);
    }
    return out;
  }

  // Visits all size-k subsets, any order.
  template <typename Visit>
  bool each_of_size(int k, Visit&& visit) const {
    if (k == 0) return visit(0ull);
    uint64_t limit = n == 64 ? 0 : (1ull << n);
    uint64_t m = (1ull << k) - 1;
    while (m < limit) {
      if (visit(m)) return true;
      uint64_t u = m & (~m + 1);
      uint64_t v = m + u;
      m = v | (((v ^ m) / u) >> 2);
    }
    return false;
  }
};

}  // namespace repairs_detail

inline RepairSet all_repairs(const ConstrainedDatabase& cdb, int max_facts = kDefaultMaxFacts) {
  repairs_detail::CompiledInstance ci(cdb, max_facts);
  std::vector<uint64_t> found;
  for (int k = ci.n; k >= 0; --k) {
    ci.each_of_size(k, [&](uint64_t set) {
      for (uint64_t r : found) {
        if ((set & ~r) == 0) return false;  // below an existing repair
      }
      if (ci.consistent(set)) found.push_back(set);
      return false;
    });
  }
  RepairSet out;
  for (uint64_t r : found) out.repairs.push_back(ci.decode(r));
  std::sort(out.repairs.begin(), out.repairs.end());
  return out;
}

// True iff some repair has at least k facts, i.e. some consistent subset
// does (a consistent subset only ever grows on the way to a maximal one).
inline bool exists_repair_of_size(const ConstrainedDatabase& cdb, int k,
                                  int max_facts = kDefaultMaxFacts) {
  if (k <= 0) return true;  // the empty set is always consistent
  repairs_detail::CompiledInstance ci(cdb, max_facts);
  if (k > ci.n) return false;
  for (int size = ci.n; size >= k; --size) {
    if (ci.each_of_size(size, [&](uint64_t set) { return ci.consistent(set); })) return true;
  }
  return false;
}

inline RepairSet repairs_via_argumentation(const ConstrainedDatabase& cdb,
                                           int max_args = kDefaultMaxArguments) {
  Setaf s = build_for_profile(cdb);
  RepairSet out;
  for (const auto& ext : extensions(s, SemanticsKind::Preferred, max_args)) {
    std::set<Fact> repair;
    for (const auto& a : ext.arguments) {
      if (a.kind != ArgKind::Fact) {
        throw RouteMismatch("preferred extension contains an auxiliary argument");
      }
      repair.insert(a.fact);
    }
    out.repairs.push_back(std::move(repair));
  }
  std::sort(out.repairs.begin(), out.repairs.end());
  return out;
}

namespace repairs_detail {

inline bool agree_or_throw(bool oracle, bool argumentation, const std::string& what) {
  if (oracle != argumentation) {
    throw RouteMismatch(what + ": oracle says " + (oracle ? "yes" : "no") +
                        ", argumentation says " + (argumentation ? "yes" : "no"));
  }
  return oracle;
}

}  // namespace repairs_detail

inline bool rep_nonempty(const ConstrainedDatabase& cdb, Route route = Route::Argumentation,
                         Budgets budgets = {}) {
  auto oracle = [&] { return exists_repair_of_size(cdb, 1, budgets.max_facts); };
  auto argued = [&] {
    return exists_nonempty(build_for_profile(cdb), SemanticsKind::Preferred, budgets.max_args);
  };
  switch (route) {
    case Route::Oracle: return oracle();
    case Route::Argumentation: return argued();
    case Route::Both: return repairs_detail::agree_or_throw(oracle(), argued(), "rep_nonempty");
  }
  return false;
}

inline bool in_some_repair(const ConstrainedDatabase& cdb, const Fact& fact,
                           Route route = Route::Argumentation, Budgets budgets = {}) {
  auto oracle = [&] {
    for (const auto& r : all_repairs(cdb, budgets.max_facts).repairs) {
      if (r.count(fact)) return true;
    }
    return false;
  };
  auto argued = [&] {
    return credulous(build_for_profile(cdb), SemanticsKind::Preferred, Argument::for_fact(fact),
                     budgets.max_args);
  };
  switch (route) {
    case Route::Oracle: return oracle();
    case Route::Argumentation: return argued();
    case Route::Both: return repairs_detail::agree_or_throw(oracle(), argued(), "in_some_repair");
  }
  return false;
}

inline bool in_all_repairs(const ConstrainedDatabase& cdb, const Fact& fact,
                           Route route = Route::Argumentation, Budgets budgets = {}) {
  auto oracle = [&] {
    for (const auto& r : all_repairs(cdb, budgets.max_facts).repairs) {
      if (!r.count(fact)) return false;
    }
    return true;
  };
  auto argued = [&] {
    return skeptical(build_for_profile(cdb), SemanticsKind::Preferred, Argument::for_fact(fact),
                     budgets.max_args);
  };
  switch (route) {
    case Route::Oracle: return oracle();
    case Route::Argumentation: return argued();
    case Route::Both: return repairs_detail::agree_or_throw(oracle(), argued(), "in_all_repairs");
  }
  return false;
}

struct EquivalenceReport {
  ConstraintProfile profile;
  std::string regime;  // "denial", "generating" or "mixed"
  RepairSet repairs;
  std::vector<std::set<Fact>> naive;
  std::vector<std::set<Fact>> preferred;
  std::vector<std::set<Fact>> stable;
  bool naive_matches = false;
  bool preferred_matches = false;
  bool stable_matches = false;
  bool unique_repair = false;
  bool preprocess_survivors_match = true;  // only checked in the generating regime
  bool ok = false;
  std::string detail;
};

// Validates the framework route for `setaf` against brute-forced repairs.
// Passing a framework other than build_for_profile(cdb) lets tests verify
// that a broken translation is actually caught.
inline EquivalenceReport check_equivalence_against(const ConstrainedDatabase& cdb,
                                                   const Setaf& setaf, Budgets budgets = {}) {
  EquivalenceReport rep;
  rep.profile = classify(cdb);
  bool denial = rep.profile.has_fd || rep.profile.has_dc;
  bool generating = rep.profile.has_id || rep.profile.has_ltgd;
  rep.regime = generating ? (denial ? "mixed" : "generating") : "denial";

  rep.repairs = all_repairs(cdb, budgets.max_facts);
  rep.unique_repair = rep.repairs.repairs.size() == 1;

  auto family = [&](SemanticsKind kind, bool& clean) {
    std::vector<std::set<Fact>> out;
    clean = true;
    for (const auto& ext : extensions(setaf, kind, budgets.max_args)) {
      std::set<Fact> fs;
      for (const auto& a : ext.arguments) {
        if (a.kind != ArgKind::Fact) clean = false;
        fs.insert(a.fact);
      }
      out.push_back(std::move(fs));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  bool naive_clean = true, preferred_clean = true, stable_clean = true;
  rep.naive = family(SemanticsKind::Naive, naive_clean);
  rep.preferred = family(SemanticsKind::Preferred, preferred_clean);
  rep.stable = family(SemanticsKind::Stable, stable_clean);
  rep.naive_matches = naive_clean && rep.naive == rep.repairs.repairs;
  rep.preferred_matches = preferred_clean && rep.preferred == rep.repairs.repairs;
  rep.stable_matches = stable_clean && rep.stable == rep.repairs.repairs;

  if (rep.regime == "generating") {
    PreprocessResult pre = preprocess(setaf);
    std::set<Fact> survivors;
    for (const auto& a : pre.reduced.arguments) {
      if (a.kind == ArgKind::Fact) survivors.insert(a.fact);
    }
    rep.preprocess_survivors_match =
        rep.unique_repair && survivors == rep.repairs.repairs.front();
  }

  if (rep.regime == "denial") {
    rep.ok = rep.naive_matches && rep.preferred_matches && rep.stable_matches;
  } else if (rep.regime == "generating") {
    rep.ok = rep.preferred_matches && rep.unique_repair && rep.preprocess_survivors_match;
  } else {
    rep.ok = rep.preferred_matches;
  }

  rep.detail = "regime=" + rep.regime + " repairs=" + std::to_string(rep.repairs.repairs.size()) +
               " naive=" + std::to_string(rep.naive.size()) +
               (rep.naive_matches ? "(=)" : "(!)") +
               " preferred=" + std::to_string(rep.preferred.size()) +
               (rep.preferred_matches ? "(=)" : "(!)") +
               " stable=" + std::to_string(rep.stable.size()) +
               (rep.stable_matches ? "(=)" : "(!)");
  if (rep.regime == "generating") {
    rep.detail += rep.preprocess_survivors_match ? " pre(=)" : " pre(!)";
  }
  return rep;
}

inline EquivalenceReport check_equivalence(const ConstrainedDatabase& cdb, Budgets budgets = {}) {
  return check_equivalence_against(cdb, build_for_profile(cdb), budgets);
}

}  // namespace argdb
