#include <doctest.h>

#include <random>

#include "psodkit/error.hpp"
#include "psodkit/io.hpp"
#include "scenarios.hpp"

using namespace psodkit;

TEST_CASE("integers round-trip beyond machine width") {
  const mpz_class big("-123456789012345678901234567890");
  CHECK(io::integer_from_json(io::integer_to_json(big)) == big);
  CHECK(io::integer_to_json(mpz_class(-7)) == io::Json(-7));
  CHECK_THROWS_AS(io::integer_from_json(io::Json("12a")), ParseError);
  CHECK_THROWS_AS(io::integer_from_json(io::Json("-")), ParseError);
  CHECK_THROWS_AS(io::integer_from_json(io::Json(1.5)), ParseError);
}

TEST_CASE("preorders round-trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = scenarios::random_preorder(rng, 1 + trial % 6, "e");
    CHECK(io::preorder_from_json(io::to_json(p)) == p);
  }
  CHECK_THROWS_AS(io::preorder_from_json(io::parse_document(R"({"elements":["a"],"leq":[[1]]})")), ParseError);
  CHECK_THROWS_AS(io::preorder_from_json(io::parse_document(R"({"elements":["a","b"],"leq":[[true]]})")),
                  ParseError);
  CHECK_THROWS_AS(io::parse_document("{\"elements\": ["), ParseError);
}

TEST_CASE("malformed fixture is rejected") {
  CHECK_THROWS_AS(io::preorder_from_json(scenarios::load_fixture("malformed.json")), ParseError);
}

TEST_CASE("residues, tuples and matrices") {
  const auto chi = parse_tuple("(-1/2,-2/3,0)");
  CHECK(io::tuple_from_json(io::to_json(chi)) == chi);
  CHECK(io::residue_from_json(io::Json("-3/6")) == Residue(-1, 2));
  CHECK_THROWS(io::residue_from_json(io::Json("1/2")));
  const IntMatrix m{{1, -2, 3}, {0, 4, 5}};
  CHECK(io::matrix_from_json(io::to_json(m)) == m);
  CHECK(io::matrix_from_json(io::Json::array(), 0) == IntMatrix(0, 0));
}

TEST_CASE("groups and graded groups round-trip") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = scenarios::random_group(rng, 3);
    CHECK(io::group_from_json(io::to_json(g)) == g);
  }
  CHECK_THROWS_AS(io::group_from_json(io::parse_document(R"({"rank":0,"torsion":[4,6]})")), InputError);
  GradedGroup gg{chain_preorder({"a", "b"}), {FgAbGroup{1, {2}}, FgAbGroup::free(0)}};
  const auto back = io::graded_from_json(io::to_json(gg));
  CHECK(back.index == gg.index);
  CHECK(back.pieces == gg.pieces);
}

TEST_CASE("stratifications, atlases and psods round-trip") {
  const auto s = io::stratification_from_json(scenarios::load_fixture("nodal_cubic.json"));
  CHECK(io::stratification_from_json(io::to_json(s)) == s);
  const auto a = io::atlas_from_json(scenarios::load_fixture("nodal_atlas.json"));
  CHECK(strata_from_atlas(io::atlas_from_json(io::to_json(a))) == strata_from_atlas(a));
  const auto p = build_root_psod(s, 3);
  const auto q = io::psod_from_json(io::to_json(p));
  CHECK(q.index == p.index);
  CHECK(q.factors == p.factors);
  CHECK(q.notes == p.notes);
}

TEST_CASE("diagrams round-trip") {
  for (const char* name : {"gluing_chain_diagram.json", "identity_span.json", "two_singletons.json"}) {
    INFO(name);
    const auto d = io::diagram_from_json(scenarios::load_fixture(name));
    const auto e = io::diagram_from_json(io::to_json(d));
    CHECK(io::to_json(e) == io::to_json(d));
  }
}

TEST_CASE("gluing scenarios from both document shapes") {
  const auto cech = io::scenario_from_json(scenarios::load_fixture("cech.json"));
  CHECK(cech.vertices.size() == 2);
  CHECK(cech.arrows.size() == 2);
  const auto res = glue(cech);
  const auto j = io::to_json(res);
  CHECK(j.at("directed") == true);
  const auto disc = io::scenario_from_json(scenarios::load_fixture("discrete2.json"));
  CHECK(disc.vertices.size() == 1);
}
