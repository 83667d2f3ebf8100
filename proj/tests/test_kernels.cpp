#include <doctest.h>

#include <random>

#include "psodkit/kernels.hpp"

using namespace psodkit::kernels;

namespace {

BitRelation random_relation(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  BitRelation r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i == j || coin(rng)) r.set(i, j);
  return r;
}

}  // namespace

TEST_CASE("serial and parallel closure agree") {
  std::mt19937_64 rng(42);
  for (std::size_t n : {0, 1, 5, 63, 64, 65, 130}) {
    const auto r = random_relation(rng, n, 2.0 / static_cast<double>(n + 1));
    const auto a = transitive_closure_serial(r);
    const auto b = transitive_closure_omp(r);
    CHECK(a == b);
    CHECK_FALSE(find_transitivity_violation_serial(a).has_value());
  }
}

TEST_CASE("serial and parallel transitivity witnesses agree") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_relation(rng, 40, 0.05);
    const auto a = find_transitivity_violation_serial(r);
    const auto b = find_transitivity_violation_omp(r);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(a->x == b->x);
      CHECK(a->y == b->y);
      CHECK(a->z == b->z);
      CHECK(r.test(a->x, a->y));
      CHECK(r.test(a->y, a->z));
      CHECK_FALSE(r.test(a->x, a->z));
    }
  }
}

TEST_CASE("reflexivity witness") {
  BitRelation r(3);
  r.set(0, 0);
  r.set(2, 2);
  CHECK(find_reflexivity_violation(r) == 1U);
}

TEST_CASE("preorder enumeration counts") {
  for (std::size_t m = 0; m <= 6; ++m) {
    std::uint64_t count = 0;
    for_each_preorder(m, [&](const SmallRelation& q) {
      // Each emitted relation is reflexive and transitive.
      for (std::size_t i = 0; i < m; ++i) {
        CHECK(((q[i] >> i) & 1U) == 1U);
        for (std::size_t j = 0; j < m; ++j)
          if ((q[i] >> j) & 1U) CHECK((q[j] & ~q[i]) == 0);
      }
      ++count;
      return true;
    });
    CHECK(count == preorder_count(m));
  }
}

TEST_CASE("serial and parallel preorder search agree") {
  for (std::size_t m = 1; m <= 5; ++m) {
    std::size_t target = 0;
    for_each_preorder(m, [&](const SmallRelation&) {
      ++target;
      return true;
    });
    target = target * 2 / 3;
    std::size_t seen = 0;
    SmallRelation expected;
    for_each_preorder(m, [&](const SmallRelation& q) {
      if (seen++ == target) {
        expected = q;
        return false;
      }
      return true;
    });
    auto pred = [&](const SmallRelation& q) { return q == expected; };
    const auto a = find_first_preorder_serial(m, pred);
    const auto b = find_first_preorder_omp(m, pred);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(*a == expected);
    CHECK(*b == expected);
  }
  CHECK_FALSE(find_first_preorder_omp(4, [](const SmallRelation&) { return false; }).has_value());
}
