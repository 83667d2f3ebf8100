#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "psodkit/error.hpp"
#include "psodkit/preorder.hpp"
#include "scenarios.hpp"

using namespace psodkit;

TEST_CASE("complete and discrete preorders") {
  const auto c = complete_preorder({"a", "b"});
  CHECK(c.leq(0, 1));
  CHECK(c.leq(1, 0));
  const auto d = discrete_preorder({"a", "b", "c"});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(d.leq(i, j) == (i == j));
  CHECK(complete_preorder({}).empty());
  CHECK(discrete_preorder({"a"}).size() == 1);
  CHECK_THROWS_AS(complete_preorder({"a", "a"}), InputError);
  CHECK_THROWS_AS(discrete_preorder({"x", "x"}), InputError);
}

TEST_CASE("constructor rejects relations that are not preorders") {
  kernels::BitRelation rel(3);
  rel.set(0, 1);
  CHECK_THROWS_AS(FinitePreorder({"a", "b", "c"}, rel), InputError);
  for (std::size_t i = 0; i < 3; ++i) rel.set(i, i);
  rel.set(1, 2);
  CHECK_THROWS_AS(FinitePreorder({"a", "b", "c"}, rel), InputError);
  rel.set(0, 2);
  CHECK_NOTHROW(FinitePreorder({"a", "b", "c"}, rel));
}

TEST_CASE("order-reflecting maps") {
  const auto chain = chain_preorder({"0", "1", "2"});
  CHECK(is_order_reflecting(chain, chain, std::vector<std::size_t>{0, 1, 2}));
  const auto disc = discrete_preorder({"a", "b"});
  const auto point = discrete_preorder({"*"});
  CHECK_FALSE(is_order_reflecting(disc, point, std::vector<std::size_t>{0, 0}));
  const auto target = discrete_preorder({"u", "v", "w"});
  CHECK(is_order_reflecting(chain, target, std::vector<std::size_t>{2, 0, 1}));
  CHECK_THROWS_AS(OrderReflectingMap(disc, point, {0, 0}), PreconditionError);

  LabelMap partial{disc, point, {{"a", "*"}}};
  CHECK_THROWS_AS(is_order_reflecting(partial), InputError);
  LabelMap unknown{disc, point, {{"a", "*"}, {"b", "?"}}};
  CHECK_THROWS_AS(is_order_reflecting(unknown), InputError);
}

TEST_CASE("composition of random order-reflecting maps reflects") {
  std::mt19937_64 rng(7);
  int composed = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const auto p = scenarios::random_preorder(rng, 3, "p");
    const auto q = scenarios::random_preorder(rng, 3, "q");
    const auto r = scenarios::random_preorder(rng, 3, "r");
    std::uniform_int_distribution<std::size_t> pick(0, 2);
    std::vector<std::size_t> f(3), g(3);
    for (auto& x : f) x = pick(rng);
    for (auto& x : g) x = pick(rng);
    if (!is_order_reflecting(p, q, f) || !is_order_reflecting(q, r, g)) continue;
    const auto h = compose(OrderReflectingMap(q, r, g), OrderReflectingMap(p, q, f));
    CHECK(is_order_reflecting(p, r, h.assignment()));
    ++composed;
  }
  CHECK(composed > 20);
}

TEST_CASE("fibers of order-reflecting maps are complete") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = scenarios::random_preorder(rng, 4, "p");
    const auto q = scenarios::random_preorder(rng, 3, "q");
    std::uniform_int_distribution<std::size_t> pick(0, 2);
    std::vector<std::size_t> f(4);
    for (auto& x : f) x = pick(rng);
    if (!is_order_reflecting(p, q, f)) continue;
    const OrderReflectingMap m(p, q, f);
    for (std::size_t y = 0; y < q.size(); ++y) {
      const auto fib = m.fiber(y);
      CHECK(p.restrict_to(fib) == complete_preorder(p.restrict_to(fib).labels()));
    }
  }
}

TEST_CASE("directedness is totality") {
  CHECK(is_directed(chain_preorder({"0", "1", "2"})));
  CHECK_FALSE(is_directed(discrete_preorder({"a", "b"})));
  CHECK(is_directed(complete_preorder({"a", "b"})));
  CHECK(is_directed(complete_preorder({})));

  // Every preorder on up to 5 points, against a labelling search.
  for (std::size_t m = 0; m <= 5; ++m) {
    std::size_t count = 0;
    kernels::for_each_preorder(m, [&](const kernels::SmallRelation& q) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < m; ++i) labels.push_back(std::to_string(i));
      const auto p = FinitePreorder::from_predicate(labels, [&](std::size_t i, std::size_t j) { return (q[i] >> j) & 1U; });
      CHECK(is_directed(p) == oracle::directed_by_labelling(p));
      ++count;
      return true;
    });
    CHECK(count == kernels::preorder_count(m));
  }
}

TEST_CASE("directed numbering") {
  const auto chain = chain_preorder({"a", "b", "c"});
  CHECK(directed_numbering(chain) == std::vector<std::size_t>{0, 1, 2});
  CHECK(directed_numbering(complete_preorder({"a", "b"})) == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(directed_numbering(discrete_preorder({"a", "b"})), PreconditionError);

  const auto rev = FinitePreorder::from_predicate({"c", "b", "a"}, [](std::size_t i, std::size_t j) { return i >= j; });
  CHECK(directed_numbering(rev) == std::vector<std::size_t>{2, 1, 0});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = scenarios::random_total_preorder(rng, 6);
    const auto order = directed_numbering(p);
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        CHECK(p.leq(order[a], order[b]));
        CHECK(order[a] != order[b]);
        // Stable tie-break: mutually related elements keep input order.
        if (p.leq(order[b], order[a])) CHECK(order[a] < order[b]);
      }
  }
}

TEST_CASE("linear extension of a partial order") {
  const auto d = discrete_preorder({"b", "a"});
  CHECK(linear_extension(d) == std::vector<std::size_t>{0, 1});
  const auto v = FinitePreorder::from_predicate({"top", "l", "r"}, [](std::size_t i, std::size_t j) {
    return i == j || j == 0;
  });
  const auto order = linear_extension(v);
  CHECK(order.back() == 0);
}
