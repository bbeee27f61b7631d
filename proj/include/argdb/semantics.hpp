#pragma once

// Exact extension enumeration for frameworks with collective attacks.
//
// A set S is conflict-free when no attack lies fully inside it, and it
// defends against an attack (T, s) when it attacks some member of T. The
// engine compiles arguments to bit positions and walks the conflict-free
// sets once via depth-first extension, so everything downstream (naive,
// admissible, preferred, stable) is a per-node predicate or an antichain
// filter over that walk. Budgets guard the exponential blowup.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "framework.hpp"

namespace argdb {

enum class SemanticsKind { ConflictFree, Naive, Admissible, Preferred, Stable };

inline std::string to_string(SemanticsKind k) {
  switch (k) {
    case SemanticsKind::ConflictFree: return "conflict-free";
    case SemanticsKind::Naive: return "naive";
    case SemanticsKind::Admissible: return "admissible";
    case SemanticsKind::Preferred: return "preferred";
    case SemanticsKind::Stable: return "stable";
  }
  return "?";
}

struct Extension {
  std::set<Argument> arguments;
  SemanticsKind semantics = SemanticsKind::ConflictFree;
  auto operator<=>(const Extension&) const = default;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kDefaultMaxArguments = 24;

// Reference predicates, used directly by tests and as documentation of the
// intended meaning. The engine below must agree with them.
inline bool is_conflict_free(const Setaf& s, const std::set<Argument>& set) {
  for (const auto& atk : s.attacks) {
    if (!set.count(atk.target)) continue;
    bool inside = true;
    for (const auto& src : atk.sources) {
      if (!set.count(src)) { inside = false; break; }
    }
    if (inside) return false;
  }
  return true;
}

inline bool attacks(const Setaf& s, const std::set<Argument>& set, const Argument& a) {
  for (const auto& atk : s.attacks) {
    if (!(atk.target == a)) continue;
    bool inside = true;
    for (const auto& src : atk.sources) {
      if (!set.count(src)) { inside = false; break; }
    }
    if (inside) return true;
  }
  return false;
}

inline bool defends(const Setaf& s, const std::set<Argument>& set, const Argument& a) {
  for (const auto& atk : s.attacks) {
    if (!(atk.target == a)) continue;
    bool countered = false;
    for (const auto& src : atk.sources) {
      if (attacks(s, set, src)) { countered = true; break; }
    }
    if (!countered) return false;
  }
  return true;
}

namespace semantics_detail {

struct CompiledSetaf {
  std::vector<Argument> args;  // canonical order
  int n = 0;
  uint64_t all = 0;
  struct Atk {
    uint64_t src = 0;
    int tgt = 0;
  };
  std::vector<Atk> atks;
  std::vector<std::vector<int>> involving;  // per argument, attack ids touching it

  explicit CompiledSetaf(const Setaf& s) {
    args.assign(s.arguments.begin(), s.arguments.end());
    n = (int)args.size();
    all = n == 64 ? ~0ull : ((1ull << n) - 1);
    std::map<Argument, int> index;
    for (int i = 0; i < n; ++i) index.emplace(args[i], i);
    involving.resize(n);
    for (const auto& atk : s.attacks) {
      Atk c;
      c.tgt = index.at(atk.target);
      for (const auto& src : atk.sources) c.src |= 1ull << index.at(src);
      int id = (int)atks.size();
      atks.push_back(c);
      uint64_t touched = c.src | (1ull << c.tgt);
      for (int i = 0; i < n; ++i) {
        if (touched & (1ull << i)) involving[i].push_back(id);
      }
    }
  }

  bool cf(uint64_t set) const {
    for (const auto& a : atks) {
      if ((a.src & ~set) == 0 && (set >> a.tgt) & 1) return false;
    }
    return true;
  }

  // whether S u {i} stays conflict-free, assuming S already is
  bool can_add(uint64_t set, int i) const {
    uint64_t grown = set | (1ull << i);
    for (int id : involving[i]) {
      const Atk& a = atks[id];
      if ((a.src & ~grown) == 0 && (grown >> a.tgt) & 1) return false;
    }
    return true;
  }

  uint64_t attacked_by(uint64_t set) const {
    uint64_t out = 0;
    for (const auto& a : atks) {
      if ((a.src & ~set) == 0) out |= 1ull << a.tgt;
    }
    return out;
  }

  bool admissible(uint64_t set) const {
    uint64_t countered = attacked_by(set);
    for (const auto& a : atks) {
      if (((set >> a.tgt) & 1) && (a.src & countered) == 0) return false;
    }
    return true;
  }

  bool maximal_cf(uint64_t set) const {
    for (int i = 0; i < n; ++i) {
      if (((set >> i) & 1) == 0 && can_add(set, i)) return false;
    }
    return true;
  }

  bool stable(uint64_t set) const { return (set | attacked_by(set)) == all; }

  // Visits every conflict-free superset of `seed` exactly once (including
  // seed itself, which must be conflict-free). Stops early when the visitor
  // returns true.
  template <typename Visit>
  bool walk(uint64_t seed, Visit&& visit) const {
    std::vector<std::pair<uint64_t, int>> stack;
    stack.emplace_back(seed, 0);
    while (!stack.empty()) {
      auto [set, next] = stack.back();
      stack.pop_back();
      if (visit(set)) return true;
      for (int i = next; i < n; ++i) {
        if ((set >> i) & 1) continue;
        if (can_add(set, i)) stack.emplace_back(set | (1ull << i), i + 1);
      }
    }
    return false;
  }

  std::set<Argument> decode(uint64_t set) const {
    std::set<Argument> out;
    for (int i = 0; i < n; ++i) {
      if ((set >> i) & 1) out.insert(args[i]);
    }
    return out;
  }

  int find(const Argument& a) const {
    for (int i = 0; i < n; ++i) {
      if (args[i] == a) return i;
    }
    return -1;
  }
};

inline void check_budget(const Setaf& s, int max_args) {
  int n = (int)s.arguments.size();
  int cap = std::min(max_args, 62);
  if (n > cap) {
    throw BudgetExceeded("framework has " + std::to_string(n) +
                         " arguments, over the enumeration budget of " + std::to_string(cap));
  }
}

}  // namespace semantics_detail

inline std::vector<Extension> extensions(const Setaf& s, SemanticsKind kind,
                                         int max_args = kDefaultMaxArguments) {
  semantics_detail::check_budget(s, max_args);
  semantics_detail::CompiledSetaf c(s);
  std::vector<uint64_t> keep;
  c.walk(0, [&](uint64_t set) {
    switch (kind) {
      case SemanticsKind::ConflictFree:
        keep.push_back(set);
        break;
      case SemanticsKind::Naive:
        if (c.maximal_cf(set)) keep.push_back(set);
        break;
      case SemanticsKind::Admissible:
        if (c.admissible(set)) keep.push_back(set);
        break;
      case SemanticsKind::Preferred:
        if (c.admissible(set)) {
          bool dominated = false;
          for (size_t i = 0; i < keep.size();) {
            if ((keep[i] & ~set) == 0 && keep[i] != set) {
              keep[i] = keep.back();
              keep.pop_back();
              continue;
            }
            if ((set & ~keep[i]) == 0) { dominated = true; break; }
            ++i;
          }
          if (!dominated) keep.push_back(set);
        }
        break;
      case SemanticsKind::Stable:
        if (c.stable(set)) keep.push_back(set);
        break;
    }
    return false;
  });
  std::vector<Extension> out;
  out.reserve(keep.size());
  for (uint64_t set : keep) out.push_back(Extension{c.decode(set), kind});
  std::sort(out.begin(), out.end());
  return out;
}

// Membership in at least one extension. Preferred and admissible coincide
// here (every admissible set extends to a preferred one), which allows an
// early-exit search instead of full enumeration.
inline bool credulous(const Setaf& s, SemanticsKind kind, const Argument& a,
                      int max_args = kDefaultMaxArguments) {
  semantics_detail::check_budget(s, max_args);
  semantics_detail::CompiledSetaf c(s);
  int i = c.find(a);
  if (i < 0) return false;
  uint64_t seed = 1ull << i;
  if (!c.cf(seed)) return false;
  switch (kind) {
    case SemanticsKind::ConflictFree:
    case SemanticsKind::Naive:
      // any conflict-free set grows into a maximal one, keeping its members
      return true;
    case SemanticsKind::Admissible:
    case SemanticsKind::Preferred:
      return c.walk(seed, [&](uint64_t set) { return c.admissible(set); });
    case SemanticsKind::Stable:
      return c.walk(seed, [&](uint64_t set) { return c.stable(set); });
  }
  return false;
}

// Membership in every extension; vacuously true when there are none.
inline bool skeptical(const Setaf& s, SemanticsKind kind, const Argument& a,
                      int max_args = kDefaultMaxArguments) {
  for (const auto& ext : extensions(s, kind, max_args)) {
    if (!ext.arguments.count(a)) return false;
  }
  return true;
}

inline bool exists_nonempty(const Setaf& s, SemanticsKind kind,
                            int max_args = kDefaultMaxArguments) {
  semantics_detail::check_budget(s, max_args);
  semantics_detail::CompiledSetaf c(s);
  switch (kind) {
    case SemanticsKind::ConflictFree:
    case SemanticsKind::Naive:
      return c.walk(0, [&](uint64_t set) { return set != 0; });
    case SemanticsKind::Admissible:
    case SemanticsKind::Preferred:
      return c.walk(0, [&](uint64_t set) { return set != 0 && c.admissible(set); });
    case SemanticsKind::Stable:
      return c.walk(0, [&](uint64_t set) { return set != 0 && c.stable(set); });
  }
  return false;
}

}  // namespace argdb
