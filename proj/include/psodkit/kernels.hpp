#pragma once

// Bit-packed relation kernels. Every kernel has a serial reference and an
// OpenMP variant that must return bit-identical results.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace psodkit::kernels {

class BitRelation {
 public:
  BitRelation() = default;
  explicit BitRelation(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t words_per_row() const noexcept { return words_; }

  [[nodiscard]] bool test(std::size_t i, std::size_t j) const noexcept {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool value = true) noexcept {
    auto& w = bits_[i * words_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    w = value ? (w | mask) : (w & ~mask);
  }
  void fill(bool value) noexcept;

  [[nodiscard]] std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    return {bits_.data() + i * words_, words_};
  }
  [[nodiscard]] std::span<std::uint64_t> row(std::size_t i) noexcept {
    return {bits_.data() + i * words_, words_};
  }

  friend bool operator==(const BitRelation&, const BitRelation&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

struct Triple {
  std::size_t x, y, z;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// First x with not x<=x.
std::optional<std::size_t> find_reflexivity_violation(const BitRelation& rel);

// Lexicographically smallest (x, y, z) with x<=y, y<=z and not x<=z.
std::optional<Triple> find_transitivity_violation_serial(const BitRelation& rel);
std::optional<Triple> find_transitivity_violation_omp(const BitRelation& rel);

BitRelation transitive_closure_serial(BitRelation rel);
BitRelation transitive_closure_omp(BitRelation rel);

// Small relations on at most 16 points, one bitmask per row.
using SmallRelation = std::vector<std::uint16_t>;

// Enumerates every preorder on {0, ..., m-1} exactly once, in a fixed order
// (insertion of the last point into each preorder on m-1 points). Stops early
// when the visitor returns false.
void for_each_preorder(std::size_t m, const std::function<bool(const SmallRelation&)>& visit);

// First preorder on m points (in for_each_preorder order) for which `fails`
// returns true. The predicate must be safe to call concurrently.
std::optional<SmallRelation> find_first_preorder_serial(
    std::size_t m, const std::function<bool(const SmallRelation&)>& fails);
std::optional<SmallRelation> find_first_preorder_omp(
    std::size_t m, const std::function<bool(const SmallRelation&)>& fails);

// Number of labeled preorders on m points, for work estimates (m <= 9).
std::uint64_t preorder_count(std::size_t m);

bool parallel_enabled() noexcept;

}  // namespace psodkit::kernels
