#include "psodkit/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace psodkit::kernels {

BitRelation::BitRelation(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

void BitRelation::fill(bool value) noexcept {
  std::fill(bits_.begin(), bits_.end(), 0);
  if (!value) return;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) set(i, j);
}

std::optional<std::size_t> find_reflexivity_violation(const BitRelation& rel) {
  for (std::size_t i = 0; i < rel.size(); ++i)
    if (!rel.test(i, i)) return i;
  return std::nullopt;
}

namespace {

// Smallest (y, z) witnessing a transitivity failure starting at x.
std::optional<Triple> violation_from(const BitRelation& rel, std::size_t x) {
  const auto rx = rel.row(x);
  for (std::size_t y = 0; y < rel.size(); ++y) {
    if (!rel.test(x, y)) continue;
    const auto ry = rel.row(y);
    for (std::size_t w = 0; w < rel.words_per_row(); ++w) {
      if (const std::uint64_t missing = ry[w] & ~rx[w]) {
        return Triple{x, y, w * 64 + static_cast<std::size_t>(std::countr_zero(missing))};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Triple> find_transitivity_violation_serial(const BitRelation& rel) {
  for (std::size_t x = 0; x < rel.size(); ++x)
    if (auto v = violation_from(rel, x)) return v;
  return std::nullopt;
}

std::optional<Triple> find_transitivity_violation_omp(const BitRelation& rel) {
  const auto n = static_cast<std::ptrdiff_t>(rel.size());
  std::ptrdiff_t best = n;
  std::optional<Triple> found;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    std::ptrdiff_t current;
#pragma omp atomic read
    current = best;
    if (x >= current) continue;
    if (auto v = violation_from(rel, static_cast<std::size_t>(x))) {
#pragma omp critical(psodkit_transitivity)
      {
        if (x < best) {
          best = x;
          found = v;
        }
      }
    }
  }
  return found;
}

BitRelation transitive_closure_serial(BitRelation rel) {
  const std::size_t n = rel.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::vector<std::uint64_t> rk(rel.row(k).begin(), rel.row(k).end());
    for (std::size_t i = 0; i < n; ++i) {
      if (!rel.test(i, k)) continue;
      auto ri = rel.row(i);
      for (std::size_t w = 0; w < rk.size(); ++w) ri[w] |= rk[w];
    }
  }
  return rel;
}

BitRelation transitive_closure_omp(BitRelation rel) {
  const auto n = static_cast<std::ptrdiff_t>(rel.size());
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::vector<std::uint64_t> rk(rel.row(k).begin(), rel.row(k).end());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (!rel.test(i, k)) continue;
      auto ri = rel.row(i);
      for (std::size_t w = 0; w < rk.size(); ++w) ri[w] |= rk[w];
    }
  }
  return rel;
}

namespace {

// Calls visit(child) for every preorder on k+1 points extending `parent` (on k
// points) by the new point k. Returns false if the visitor asked to stop.
bool expand(const SmallRelation& parent, const std::function<bool(const SmallRelation&)>& visit) {
  const std::size_t k = parent.size();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  std::vector<std::uint16_t> below(k, 0);
  for (std::size_t y = 0; y < k; ++y)
    for (std::size_t x = 0; x < k; ++x)
      if ((parent[y] >> x) & 1U) below[x] |= static_cast<std::uint16_t>(1U << y);

  std::vector<std::uint16_t> downsets;
  std::vector<std::uint16_t> upsets;
  for (std::uint32_t s = 0; s <= full; ++s) {
    bool down = true;
    bool up = true;
    for (std::size_t x = 0; x < k && (down || up); ++x) {
      if (!((s >> x) & 1U)) continue;
      if ((below[x] & ~s) != 0) down = false;
      if ((parent[x] & ~s) != 0) up = false;
    }
    if (down) downsets.push_back(static_cast<std::uint16_t>(s));
    if (up) upsets.push_back(static_cast<std::uint16_t>(s));
  }

  SmallRelation child(k + 1);
  for (const std::uint16_t d : downsets) {
    // Everything below the new point must lie below everything above it.
    std::uint16_t common = static_cast<std::uint16_t>(full);
    for (std::size_t x = 0; x < k; ++x)
      if ((d >> x) & 1U) common &= parent[x];
    for (const std::uint16_t u : upsets) {
      if ((u & ~common & full) != 0) continue;
      for (std::size_t x = 0; x < k; ++x)
        child[x] = static_cast<std::uint16_t>(parent[x] | (((d >> x) & 1U) << k));
      child[k] = static_cast<std::uint16_t>(u | (1U << k));
      if (!visit(child)) return false;
    }
  }
  return true;
}

bool for_each_rec(const SmallRelation& cur, std::size_t m,
                  const std::function<bool(const SmallRelation&)>& visit) {
  if (cur.size() == m) return visit(cur);
  return expand(cur, [&](const SmallRelation& child) { return for_each_rec(child, m, visit); });
}

}  // namespace

void for_each_preorder(std::size_t m, const std::function<bool(const SmallRelation&)>& visit) {
  for_each_rec(SmallRelation{}, m, visit);
}

std::optional<SmallRelation> find_first_preorder_serial(
    std::size_t m, const std::function<bool(const SmallRelation&)>& fails) {
  std::optional<SmallRelation> found;
  for_each_preorder(m, [&](const SmallRelation& q) {
    if (fails(q)) {
      found = q;
      return false;
    }
    return true;
  });
  return found;
}

std::optional<SmallRelation> find_first_preorder_omp(
    std::size_t m, const std::function<bool(const SmallRelation&)>& fails) {
  if (m == 0) return find_first_preorder_serial(m, fails);
  std::vector<SmallRelation> parents;
  for_each_preorder(m - 1, [&](const SmallRelation& p) {
    parents.push_back(p);
    return true;
  });
  const auto count = static_cast<std::ptrdiff_t>(parents.size());
  std::ptrdiff_t best = count;
  std::optional<SmallRelation> found;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    std::ptrdiff_t current;
#pragma omp atomic read
    current = best;
    if (i >= current) continue;
    std::optional<SmallRelation> local;
    expand(parents[static_cast<std::size_t>(i)], [&](const SmallRelation& q) {
      if (fails(q)) {
        local = q;
        return false;
      }
      return true;
    });
    if (local) {
#pragma omp critical(psodkit_preorder_search)
      {
        if (i < best) {
          best = i;
          found = std::move(local);
        }
      }
    }
  }
  return found;
}

std::uint64_t preorder_count(std::size_t m) {
  static constexpr std::uint64_t counts[] = {1,      1,       4,         29,        355,
                                             6942,   209527,  9535241,   642779354, 63260289423};
  if (m < std::size(counts)) return counts[m];
  return std::numeric_limits<std::uint64_t>::max();
}

bool parallel_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace psodkit::kernels
