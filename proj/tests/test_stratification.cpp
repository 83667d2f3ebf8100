#include <doctest.h>

#include "psodkit/error.hpp"
#include "psodkit/stratification.hpp"
#include "scenarios.hpp"

using namespace psodkit;

namespace {

Stratification fixture(const char* name) { return io::stratification_from_json(scenarios::load_fixture(name)); }

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(fixture("nodal_cubic.json")).empty());
  CHECK(validate(fixture("coordinate_cross.json")).empty());

  auto two_ambient = fixture("smooth_divisor.json");
  two_ambient.strata.push_back({"Y", 0, {"Y"}});
  CHECK_FALSE(validate(two_ambient).empty());

  auto bad = fixture("nodal_cubic.json");
  bad.closure.emplace_back("X", "D");
  CHECK(validate(bad).size() >= 1);

  auto unknown = fixture("nodal_cubic.json");
  unknown.closure.emplace_back("o", "Z");
  CHECK_FALSE(validate(unknown).empty());

  auto no_norm = fixture("nodal_cubic.json");
  no_norm.strata[1].norm_components.clear();
  CHECK_FALSE(validate(no_norm).empty());
  CHECK_THROWS_AS(require_valid(no_norm), PreconditionError);
}

TEST_CASE("skeleta") {
  const auto nodal = fixture("nodal_cubic.json");
  const auto k1 = skeleton(nodal, 1);
  REQUIRE(k1.size() == 1);
  CHECK(k1[0].id == "D");
  CHECK(normalized_skeleton(nodal, 1) == std::vector<std::string>{"D~"});
  CHECK(skeleton(nodal, 3).empty());
  const auto cross = fixture("coordinate_cross.json");
  CHECK(skeleton(cross, 1).size() == 2);
  std::size_t total = 0;
  for (unsigned k = 0; k <= cross.max_codim(); ++k) total += skeleton(cross, k).size();
  CHECK(total == cross.strata.size());
}

TEST_CASE("strata preorder") {
  const auto nodal = strata_preorder(fixture("nodal_cubic.json"));
  CHECK(nodal.lt(nodal.index_of("o"), nodal.index_of("D")));
  CHECK(nodal.lt(nodal.index_of("D"), nodal.index_of("X")));
  CHECK_FALSE(nodal.leq(nodal.index_of("X"), nodal.index_of("o")));

  const auto cross = strata_preorder(fixture("coordinate_cross.json"));
  const auto l1 = cross.index_of("L1");
  const auto l2 = cross.index_of("L2");
  CHECK(cross.leq(l1, l2));
  CHECK(cross.leq(l2, l1));
  CHECK(cross.lt(cross.index_of("O"), l1));
  CHECK(cross.lt(l2, cross.index_of("X")));

  const auto smooth = strata_preorder(fixture("smooth_divisor.json"));
  CHECK(smooth.lt(smooth.index_of("D"), smooth.index_of("X")));
}

TEST_CASE("strata from atlases") {
  ChartAtlas cross{{{"U", {"b1", "b2"}}}, {}};
  auto s = strata_from_atlas(cross);
  CHECK(validate(s).empty());
  CHECK(s.strata.size() == 4);
  for (const auto& st : s.strata) CHECK(st.norm_components.size() == 1);

  ChartAtlas glued{{{"U", {"d"}}, {"V", {"e"}}}, {{"U", "V", {{"d", "e"}}}}};
  s = strata_from_atlas(glued);
  CHECK(s.strata.size() == 2);
  CHECK(s.strata[1].codim == 1);

  const auto nodal = strata_from_atlas(io::atlas_from_json(scenarios::load_fixture("nodal_atlas.json")));
  CHECK(validate(nodal).empty());
  REQUIRE(nodal.strata.size() == 3);
  CHECK(skeleton(nodal, 1).size() == 1);
  CHECK(skeleton(nodal, 1)[0].norm_components.size() == 1);
  CHECK(skeleton(nodal, 2).size() == 1);

  ChartAtlas self{{{"U", {"b1", "b2"}}}, {{"U", "U", {{"b1", "b2"}}}}};
  s = strata_from_atlas(self);
  CHECK(s.strata.size() == 3);

  ChartAtlas broken{{{"U", {"a", "b"}}, {"V", {"c"}}}, {{"U", "V", {{"a", "c"}, {"b", "c"}}}}};
  CHECK_THROWS_AS(strata_from_atlas(broken), InputError);
  ChartAtlas unknown{{{"U", {"a"}}}, {{"U", "W", {{"a", "a"}}}}};
  CHECK_THROWS_AS(strata_from_atlas(unknown), InputError);

  // Without overlaps (depth 1) the two charts stay separate.
  CHECK(strata_from_atlas(glued, 1).strata.size() == 3);
}

TEST_CASE("coordinate crossings validate") {
  for (unsigned k = 0; k <= 3; ++k) CHECK(validate(scenarios::coordinate_crossing(k)).empty());
}
