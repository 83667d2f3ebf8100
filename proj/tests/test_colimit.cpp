#include <doctest.h>

#include "psodkit/colimit.hpp"
#include "psodkit/error.hpp"
#include "scenarios.hpp"

using namespace psodkit;

namespace {

const FinitePreorder& vertex(const PreorderDiagram& d, std::size_t i) { return d.vertices()[i].preorder; }

}  // namespace

TEST_CASE("coproduct of two singletons is complete") {
  const std::vector<FinitePreorder> parts{discrete_preorder({"a"}), discrete_preorder({"b"})};
  const auto res = coproduct(parts);
  CHECK(res.coproduct == complete_preorder({"a", "b"}));
  CHECK(res.injections.size() == 2);
  const auto d = PreorderDiagram::discrete(parts);
  const auto cert = verify_colimit(d, res.coproduct, {{0}, {1}});
  CHECK(cert.ok);
}

TEST_CASE("coproduct of one part is that part") {
  const auto chain = chain_preorder({"a", "b"});
  const std::vector<FinitePreorder> parts{chain};
  const auto res = coproduct(parts);
  CHECK(res.coproduct == chain);
  CHECK(res.injections[0].assignment() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("discrete union is not a coproduct") {
  const std::vector<FinitePreorder> parts{discrete_preorder({"a"}), discrete_preorder({"b"})};
  const auto d = PreorderDiagram::discrete(parts);
  const auto cert = verify_colimit(d, discrete_preorder({"a", "b"}), {{0}, {1}});
  CHECK_FALSE(cert.ok);
  CHECK(cert.witness_target.has_value());
}

TEST_CASE("mixed coproduct: the stated rule is not transitive") {
  const auto doc = scenarios::load_fixture("coproduct_mixed.json");
  const auto d = io::diagram_from_json(doc);
  const auto rule = colimit_rule(d);
  // Cross-part pairs related both ways, within-part relations preserved.
  CHECK(rule.relation.test(0, 2));
  CHECK(rule.relation.test(2, 0));
  CHECK(rule.relation.test(2, 3));
  CHECK_FALSE(rule.relation.test(3, 2));
  CHECK_FALSE(rule.relation.test(0, 1));
  CHECK_THROWS_AS(colimit(d), NoColimitError);
  // No preorder on the set colimit satisfies the universal property.
  CHECK_FALSE(search_colimit_on_set_carrier(d).has_value());
}

TEST_CASE("pushout over the empty preorder is the coproduct") {
  const auto d = io::diagram_from_json(scenarios::load_fixture("empty_pushout.json"));
  const auto res = colimit(d);
  CHECK(res.colimit == complete_preorder({"a", "b"}));
  CHECK(verify_colimit(d, res.colimit, res.cocone).ok);
}

TEST_CASE("identity span and Cech pair") {
  for (const char* name : {"identity_span.json", "cech_pair.json", "constant.json"}) {
    const auto d = io::diagram_from_json(scenarios::load_fixture(name));
    const auto res = colimit(d);
    CHECK(res.colimit == vertex(d, 0));
    const auto cert = verify_colimit(d, res.colimit, res.cocone);
    CHECK_MESSAGE(cert.ok, name << ": " << cert.reason);
  }
}

TEST_CASE("pushout of two chains glued at a point has no colimit") {
  const auto doc = scenarios::load_fixture("gluing_chain.json");
  const auto left = to_map(io::label_map_from_json(doc["left"]));
  const auto right = to_map(io::label_map_from_json(doc["right"]));
  CHECK_THROWS_AS(pushout(left, right), NoColimitError);
  const auto d = PreorderDiagram::span(left, right);
  const auto rule = colimit_rule(d);
  CHECK(rule.labels.size() == 3);
  CHECK_FALSE(search_colimit_on_set_carrier(d).has_value());
}

TEST_CASE("verify rejects broken cocones") {
  const auto d = io::diagram_from_json(scenarios::load_fixture("cech_pair.json"));
  const auto p = vertex(d, 0);
  const auto cert = verify_colimit(d, p, {{0, 1, 2}, {1, 0, 2}});
  CHECK_FALSE(cert.ok);
}

TEST_CASE("verify respects the carrier cap") {
  std::vector<FinitePreorder> parts;
  for (int i = 0; i < 13; ++i) parts.push_back(discrete_preorder({"x" + std::to_string(i)}));
  const auto d = PreorderDiagram::discrete(parts);
  const auto res = colimit(d);
  CHECK_THROWS_AS(verify_colimit(d, res.colimit, res.cocone), ResourceError);
}

TEST_CASE("serial and parallel verification agree") {
  const auto d = io::diagram_from_json(scenarios::load_fixture("identity_span.json"));
  const auto res = colimit(d);
  VerifyOptions serial;
  serial.parallel = false;
  const auto a = verify_colimit(d, res.colimit, res.cocone, serial);
  const auto b = verify_colimit(d, res.colimit, res.cocone);
  CHECK(a.ok == b.ok);
  CHECK(a.targets_checked == b.targets_checked);
}
