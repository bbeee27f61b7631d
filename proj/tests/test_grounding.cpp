#include <catch_amalgamated.hpp>

#include "argdb/grounding.hpp"
#include "argdb/parser.hpp"

using namespace argdb;

namespace {

std::set<Fact> F(const ParsedInstance& pi, std::initializer_list<const char*> names) {
  std::set<Fact> out;
  for (const char* n : names) out.insert(pi.labels.at(n));
  return out;
}

}  // namespace

TEST_CASE("homomorphisms range over the active domain") {
  ParsedInstance pi = parse_instance("E(a, b).\nE(b, c).\nE(c, c).\n");
  std::vector<Atom> path = {Atom{"E", {Term::var("X"), Term::var("Y")}},
                            Atom{"E", {Term::var("Y"), Term::var("Z")}}};
  std::vector<Assignment> hits = enumerate_homomorphisms(path, pi.cdb.database);
  // a->b->c, b->c->c, c->c->c
  CHECK(hits.size() == 3);
  for (const auto& h : hits) {
    CHECK(h.size() == 3);
    CHECK(h.count("X"));
  }

  std::vector<Atom> constant_probe = {Atom{"E", {Term::constant("a"), Term::var("Y")}}};
  CHECK(enumerate_homomorphisms(constant_probe, pi.cdb.database).size() == 1);
  std::vector<Atom> miss = {Atom{"E", {Term::constant("zzz"), Term::var("Y")}}};
  CHECK(enumerate_homomorphisms(miss, pi.cdb.database).empty());
}

TEST_CASE("satisfies and consistent report constraint violations") {
  ParsedInstance pi = parse_instance(
      "rel T/2.\n@a T(x, p).\n@b T(x, q).\n"
      "fd: T: [1] -> [2].\n");
  CHECK_FALSE(satisfies(pi.cdb.database, pi.cdb.constraints[0]));
  CHECK_FALSE(consistent(pi.cdb.database, pi.cdb.constraints));

  Database sub;
  sub.schema = pi.cdb.database.schema;
  sub.facts = {pi.labels.at("a")};
  CHECK(consistent(sub, pi.cdb.constraints));

  // the empty database satisfies everything
  Database empty;
  empty.schema = pi.cdb.database.schema;
  CHECK(consistent(empty, pi.cdb.constraints));
}

TEST_CASE("inclusion dependencies hold when every source value reappears") {
  ParsedInstance pi = parse_instance(
      "rel T/2.\nT(b, a).\nT(b, b).\n"
      "id: T[1] <= T[2].\n");
  CHECK(satisfies(pi.cdb.database, pi.cdb.constraints[0]));

  ParsedInstance bad = parse_instance(
      "rel T/2.\nT(d, c).\n"
      "id: T[1] <= T[2].\n");
  CHECK_FALSE(satisfies(bad.cdb.database, bad.cdb.constraints[0]));
}

TEST_CASE("conflicts of a city-mismatch denial") {
  ParsedInstance pi = parse_instance(R"(
rel E/3.
rel D/3.
@e1 E(emp1, dept1, paderborn).
@e2 E(emp2, dept2, sheffield).
@e3 E(emp3, dept2, hanover).
@d1 D(dept1, sales, paderborn).
@d2 D(dept2, marketing, sheffield).
@d3 D(dept3, hr, essen).
dc: ! E(X1,X2,X3), D(X2,X4,X5), X3 != X5.
lav: D(X1,X2,X3) -> E(Y1,X1,Y2).
)");
  std::vector<Conflict> conflicts = compute_conflicts(pi.cdb);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0].facts == F(pi, {"e3", "d2"}));
  CHECK(conflicts[0].witness == 0);  // the tgd contributes no conflicts
}

TEST_CASE("conflicts can span two constraints and four facts") {
  ParsedInstance pi = parse_instance(R"(
rel C/2.
rel O/4.
@s1 C(c1, paderborn).
@s2 C(c2, sheffield).
@s3 C(c3, hanover).
@t1 O(o1, c1, p1, sh1).
@t2 O(o2, c2, p2, sh2).
@t3 O(o3, c2, p1, sh1).
@t4 O(o5, c1, p1, sh4).
dc: ! O(X1,X2,X3,X4), O(X5,X2,X3,X6), X1 != X5.
dc: ! O(X1,X2,X3,X4), O(X5,X6,X7,X4), C(X2,X8), C(X6,X9), X8 != X9.
)");
  std::vector<Conflict> conflicts = compute_conflicts(pi.cdb);
  REQUIRE(conflicts.size() == 2);
  // sorted by fact set, so the C-facts put the four-fact conflict first
  CHECK(conflicts[0].facts == F(pi, {"t1", "t3", "s1", "s2"}));
  CHECK(conflicts[0].witness == 1);
  CHECK(conflicts[1].facts == F(pi, {"t1", "t4"}));
  CHECK(conflicts[1].witness == 0);
}

TEST_CASE("functional dependencies produce pairwise conflicts") {
  ParsedInstance pi = parse_instance(R"(
rel T/4.
@s T(timx3, jonx1, marketing, b1).
@t T(timx3, axek4, sales, b2).
@u T(jonx1, jonx1, production, b1).
@v T(jonx1, axek4, distribution, b4).
fd: T: [1] -> [3].
fd: T: [2] -> [4].
)");
  std::vector<Conflict> conflicts = compute_conflicts(pi.cdb);
  std::set<std::set<Fact>> sets;
  for (const auto& c : conflicts) {
    CHECK(c.facts.size() == 2);
    sets.insert(c.facts);
  }
  CHECK(sets == std::set<std::set<Fact>>{F(pi, {"s", "t"}), F(pi, {"u", "v"}),
                                         F(pi, {"t", "v"})});

  // the normalized denial form grounds to the same conflicts
  ConstrainedDatabase viadc;
  viadc.database = pi.cdb.database;
  for (const auto& c : pi.cdb.constraints)
    for (const auto& dc : normalize_fd_to_dc(std::get<Fd>(c), pi.cdb.database.schema))
      viadc.constraints.push_back(dc);
  std::set<std::set<Fact>> sets2;
  for (const auto& c : compute_conflicts(viadc)) sets2.insert(c.facts);
  CHECK(sets2 == sets);
}

TEST_CASE("conflict minimality is per constraint unless asked otherwise") {
  // the wide denial subsumes the narrow one on {a,b}
  ParsedInstance pi = parse_instance(
      "rel T/2.\n@a T(x, p).\n@b T(x, q).\n@c T(y, r).\n"
      "dc: ! T(X1, X2), T(X1, X3), X2 != X3.\n"
      "dc: ! T(X1, X2), T(X3, X4), T(X5, X6), X2 != X4, X4 != X6, X2 != X6.\n");
  std::vector<Conflict> per = compute_conflicts(pi.cdb);
  REQUIRE(per.size() == 2);
  CHECK(per[0].facts.size() == 2);
  CHECK(per[1].facts.size() == 3);
  std::vector<Conflict> global = compute_conflicts(pi.cdb, true);
  REQUIRE(global.size() == 1);
  CHECK(global[0].facts == F(pi, {"a", "b"}));
}

TEST_CASE("a fact alone can violate a denial") {
  ParsedInstance pi = parse_instance("rel T/2.\n@a T(x, x).\n@b T(x, y).\n"
                                     "dc: ! T(X1, X1).\n");
  std::vector<Conflict> conflicts = compute_conflicts(pi.cdb);
  REQUIRE(conflicts.size() == 1);
  CHECK(conflicts[0].facts == F(pi, {"a"}));
}

TEST_CASE("supports of the employees instance") {
  ParsedInstance pi = parse_instance(R"(
rel E/2.
rel D/2.
rel P/2.
@s1 E(e1, d1).
@s2 E(e2, d2).
@s3 E(e3, d3).
@t1 D(d1, accounting).
@t2 D(d3, sales).
@u1 P(p1, d1).
@u2 P(p2, d3).
lav: E(X1, X2) -> D(X2, Y1), P(Z1, X2).
lav: D(X1, X2) -> E(Y1, X1), P(Z1, X1).
)");
  const Ltgd& lav1 = std::get<Ltgd>(pi.cdb.constraints[0]);
  const Ltgd& lav2 = std::get<Ltgd>(pi.cdb.constraints[1]);

  auto sets_of = [&](const Ltgd& lav, const char* label) {
    std::set<std::set<Fact>> out;
    for (const auto& s : compute_supports(pi.cdb, lav, pi.labels.at(label))) out.insert(s.facts);
    return out;
  };
  CHECK(sets_of(lav1, "s1") == std::set<std::set<Fact>>{F(pi, {"t1", "u1"})});
  CHECK(sets_of(lav1, "s2").empty());
  CHECK(sets_of(lav1, "s3") == std::set<std::set<Fact>>{F(pi, {"t2", "u2"})});
  CHECK(sets_of(lav2, "t1") == std::set<std::set<Fact>>{F(pi, {"s1", "u1"})});
  CHECK(sets_of(lav2, "t2") == std::set<std::set<Fact>>{F(pi, {"s3", "u2"})});

  // facts of other relations do not match the body
  CHECK_THROWS_AS(compute_supports(pi.cdb, lav1, pi.labels.at("t1")), std::invalid_argument);
}

TEST_CASE("a fact may support itself") {
  ParsedInstance pi = parse_instance("rel T/2.\n@v T(e, e).\nid: T[1] <= T[2].\n");
  Ltgd lav = normalize_id_to_ltgd(std::get<Id>(pi.cdb.constraints[0]), pi.cdb.database.schema);
  auto supports = compute_supports(pi.cdb, lav, pi.labels.at("v"));
  REQUIRE(supports.size() == 1);
  CHECK(supports[0].facts == F(pi, {"v"}));
}

TEST_CASE("direct inclusion supports equal the normalized route") {
  ParsedInstance pi = parse_instance(R"(
rel T/4.
@s T(jonx1, axek4, production, marketing).
@t T(axek4, axek4, marketing, production).
@u T(timx3, jonx1, marketing, distribution).
@v T(jonx1, axek4, distribution, rnd).
id: T[2] <= T[1].
id: T[4] <= T[3].
)");
  for (const auto& c : pi.cdb.constraints) {
    const Id& id = std::get<Id>(c);
    Ltgd lav = normalize_id_to_ltgd(id, pi.cdb.database.schema);
    for (const auto& f : pi.cdb.database.facts) {
      std::set<std::set<Fact>> direct;
      for (const auto& t : id_supports(pi.cdb.database, id, f)) direct.insert({t});
      std::set<std::set<Fact>> via_tgd;
      for (const auto& s : compute_supports(pi.cdb, lav, f)) via_tgd.insert(s.facts);
      CHECK(direct == via_tgd);
    }
  }
}

TEST_CASE("support images collapse shared head atoms") {
  // both head atoms ground to the same fact under Y|->q
  ParsedInstance pi = parse_instance("rel T/2.\n@a T(p, q).\n@b T(q, q).\n"
                                     "lav: T(X1, X2) -> T(X2, Y1), T(Y1, X2).\n");
  const Ltgd& lav = std::get<Ltgd>(pi.cdb.constraints[0]);
  auto supports = compute_supports(pi.cdb, lav, pi.labels.at("a"));
  std::set<std::set<Fact>> sets;
  for (const auto& s : supports) sets.insert(s.facts);
  // Y1 = q gives {T(q,q)}; no other grounding exists
  CHECK(sets.count(F(pi, {"b"})) == 1);
  for (const auto& s : sets) CHECK(s.size() <= 2);
}
