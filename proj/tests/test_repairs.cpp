#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "argdb/parser.hpp"
#include "argdb/reductions.hpp"
#include "argdb/repairs.hpp"
#include "oracles.hpp"

using namespace argdb;

namespace {

ParsedInstance load_corpus(const std::string& name) {
  std::ifstream in(std::string(ARGDB_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::set<Fact> F(const ParsedInstance& pi, std::initializer_list<const char*> names) {
  std::set<Fact> out;
  for (const char* n : names) out.insert(pi.labels.at(n));
  return out;
}

std::vector<std::set<Fact>> sorted(std::vector<std::set<Fact>> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("mixed instance with two repairs") {
  ParsedInstance pi = load_corpus("running.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"d1", "d2", "e1", "e2"}),
                              F(pi, {"d1", "e1", "e2", "e3"})}));
  CHECK(repairs_via_argumentation(pi.cdb) == rs);
  CHECK(oracle::repairs(pi.cdb) == rs.repairs);

  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.regime == "mixed");
  CHECK(er.ok);
  CHECK(er.preferred_matches);
  CHECK_FALSE(er.naive_matches);  // generating constraints break the naive match
}

TEST_CASE("denial instance where everything coincides") {
  ParsedInstance pi = load_corpus("orders.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"s1", "s2", "s3", "t1", "t2"}),
                              F(pi, {"s1", "s2", "s3", "t2", "t3", "t4"}),
                              F(pi, {"s1", "s3", "t1", "t2", "t3"}),
                              F(pi, {"s2", "s3", "t1", "t2", "t3"})}));
  CHECK(oracle::repairs(pi.cdb) == rs.repairs);

  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.regime == "denial");
  CHECK(er.ok);
  CHECK(er.naive_matches);
  CHECK(er.preferred_matches);
  CHECK(er.stable_matches);
}

TEST_CASE("key dependencies give three repairs") {
  ParsedInstance pi = load_corpus("fd_table.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"s", "u"}), F(pi, {"s", "v"}), F(pi, {"t", "u"})}));
  CHECK(repairs_via_argumentation(pi.cdb) == rs);

  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.regime == "denial");
  CHECK(er.ok);

  SECTION("repair size thresholds") {
    CHECK(exists_repair_of_size(pi.cdb, 0));
    CHECK(exists_repair_of_size(pi.cdb, 1));
    CHECK(exists_repair_of_size(pi.cdb, 2));
    CHECK_FALSE(exists_repair_of_size(pi.cdb, 3));
    CHECK_FALSE(exists_repair_of_size(pi.cdb, 5));
    CHECK(exists_repair_of_size(pi.cdb, -2));
  }
}

TEST_CASE("inclusion dependencies force a unique repair") {
  ParsedInstance pi = load_corpus("ids_table.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"s", "t"})}));
  CHECK(repairs_via_argumentation(pi.cdb) == rs);
  CHECK(oracle::repairs(pi.cdb) == rs.repairs);

  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.regime == "generating");
  CHECK(er.ok);
  CHECK(er.unique_repair);
  CHECK(er.preprocess_survivors_match);
}

TEST_CASE("existence rules keep only the supported core") {
  ParsedInstance pi = load_corpus("employees_ltgd.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"s1", "s3", "t1", "t2", "u1", "u2"})}));
  CHECK(oracle::repairs(pi.cdb) == rs.repairs);

  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.regime == "generating");
  CHECK(er.ok);
  CHECK(er.unique_repair);
  CHECK(er.preprocess_survivors_match);
}

TEST_CASE("key and inclusion dependencies together") {
  ParsedInstance pi = load_corpus("combined_fd_id.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"t"})}));
  CHECK(repairs_via_argumentation(pi.cdb) == rs);

  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.regime == "mixed");
  CHECK(er.ok);
  CHECK(er.preferred_matches);
  CHECK_FALSE(er.naive_matches);
  // {s,u} is maximal conflict-free but not a repair
  bool saw_su = false;
  for (const auto& nx : er.naive) saw_su = saw_su || nx == F(pi, {"s", "u"});
  CHECK(saw_su);

  CHECK(in_all_repairs(pi.cdb, pi.labels.at("t"), Route::Both));
  CHECK_FALSE(in_some_repair(pi.cdb, pi.labels.at("s"), Route::Both));
  CHECK_FALSE(in_some_repair(pi.cdb, pi.labels.at("u"), Route::Both));
  CHECK(rep_nonempty(pi.cdb, Route::Both));
}

TEST_CASE("chain instance keeps self-supporting facts") {
  ParsedInstance pi = load_corpus("id_chain.cdb");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"s", "t", "v"})}));
  EquivalenceReport er = check_equivalence(pi.cdb);
  INFO(er.detail);
  CHECK(er.ok);
  CHECK(er.preprocess_survivors_match);
}

TEST_CASE("the empty database has the empty repair") {
  ParsedInstance pi = parse_instance("rel T/2.\nfd: T: [1] -> [2].\n");
  RepairSet rs = all_repairs(pi.cdb);
  REQUIRE(rs.repairs.size() == 1);
  CHECK(rs.repairs[0].empty());
  CHECK_FALSE(rep_nonempty(pi.cdb, Route::Both));
  CHECK(exists_repair_of_size(pi.cdb, 0));
  CHECK_FALSE(exists_repair_of_size(pi.cdb, 1));
}

TEST_CASE("a consistent database is its own unique repair") {
  ParsedInstance pi = parse_instance("rel T/2.\n@a T(x, p).\n@b T(y, q).\nfd: T: [1] -> [2].\n");
  RepairSet rs = all_repairs(pi.cdb);
  CHECK(rs.repairs == sorted({F(pi, {"a", "b"})}));
  CHECK(in_all_repairs(pi.cdb, pi.labels.at("a"), Route::Both));
}

TEST_CASE("facts in no repair exist under generating constraints only") {
  // u is unsupported: it appears in no repair even though it conflicts with nothing
  ParsedInstance pi = load_corpus("id_chain.cdb");
  CHECK_FALSE(in_some_repair(pi.cdb, pi.labels.at("u"), Route::Both));
  CHECK(in_some_repair(pi.cdb, pi.labels.at("v"), Route::Both));
  CHECK(in_all_repairs(pi.cdb, pi.labels.at("v"), Route::Both));
}

TEST_CASE("oracle validation across random instances") {
  // every profile combination that the generator supports
  std::vector<ConstraintProfile> profiles;
  for (int mask = 1; mask < 16; ++mask) {
    ConstraintProfile p;
    p.has_fd = mask & 1;
    p.has_id = mask & 2;
    p.has_dc = mask & 4;
    p.has_ltgd = mask & 8;
    profiles.push_back(p);
  }
  int checked = 0;
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    for (const auto& profile : profiles) {
      ConstrainedDatabase cdb = random_instance(seed, profile);
      CAPTURE(seed, cdb.database.facts.size(), cdb.constraints.size());
      RepairSet rs = all_repairs(cdb);
      REQUIRE(rs.repairs == oracle::repairs(cdb));
      REQUIRE(repairs_via_argumentation(cdb) == rs);
      EquivalenceReport er = check_equivalence(cdb);
      INFO(er.detail);
      REQUIRE(er.ok);
      ++checked;
    }
  }
  CHECK(checked == 8 * 15);
}

TEST_CASE("membership queries agree with the enumerated repairs") {
  for (uint64_t seed = 30; seed <= 40; ++seed) {
    ConstraintProfile p;
    p.has_dc = seed % 2 == 0;
    p.has_ltgd = true;
    ConstrainedDatabase cdb = random_instance(seed, p);
    RepairSet rs = all_repairs(cdb);
    for (const auto& f : cdb.database.facts) {
      bool some = false, all = true;
      for (const auto& r : rs.repairs) {
        if (r.count(f)) some = true;
        else all = false;
      }
      if (rs.repairs.empty()) all = true;
      CAPTURE(seed, to_string(f));
      REQUIRE(in_some_repair(cdb, f, Route::Both) == some);
      REQUIRE(in_all_repairs(cdb, f, Route::Both) == all);
    }
    bool nonempty = false;
    for (const auto& r : rs.repairs) nonempty = nonempty || !r.empty();
    REQUIRE(rep_nonempty(cdb, Route::Both) == nonempty);
    for (int k = 0; k <= (int)cdb.database.facts.size() + 1; ++k) {
      size_t best = 0;
      for (const auto& r : rs.repairs) best = std::max(best, r.size());
      REQUIRE(exists_repair_of_size(cdb, k) == (k <= (int)best));
    }
  }
}

TEST_CASE("tampered frameworks fail the cross-check") {
  ParsedInstance pi = load_corpus("fd_table.cdb");
  Setaf good = build_for_profile(pi.cdb);
  EquivalenceReport before = check_equivalence_against(pi.cdb, good);
  REQUIRE(before.ok);

  Setaf bad = good;
  REQUIRE_FALSE(bad.attacks.empty());
  bad.attacks.erase(bad.attacks.begin());
  EquivalenceReport after = check_equivalence_against(pi.cdb, bad);
  INFO(after.detail);
  CHECK_FALSE(after.ok);
  CHECK_FALSE(after.preferred_matches);
}

TEST_CASE("repair enumeration refuses oversized databases") {
  ConstrainedDatabase big;
  big.database.schema.relations = {{"T", 1}};
  for (int i = 0; i < 25; ++i) big.database.facts.insert({"T", {"v" + std::to_string(i)}});
  CHECK_THROWS_AS(all_repairs(big), BudgetExceeded);
  CHECK(all_repairs(big, 25).repairs.size() == 1);  // no constraints: one repair
}
