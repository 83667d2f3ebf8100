// Serial reference vs OpenMP kernels on random relations and a full
// preorder search. Prints one line per kernel and size.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "psodkit/kernels.hpp"

using namespace psodkit::kernels;

namespace {

template <class F>
double seconds(F&& f, int reps) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

// Sparse random relation; its closure is far from the input.
BitRelation random_relation(std::size_t n, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  BitRelation r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.set(i, i);
    for (std::size_t j = 0; j < n; ++j)
      if (coin(rng)) r.set(i, j);
  }
  return r;
}

// A chain: transitive, so the violation search scans everything.
BitRelation chain(std::size_t n) {
  BitRelation r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r.set(i, j);
  return r;
}

void report(const char* kernel, std::size_t n, double serial, double parallel, bool same) {
  std::printf("%-22s n=%-6zu serial %9.4f s  omp %9.4f s  speedup %5.2fx  %s\n", kernel, n, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::mt19937_64 rng(1);
  for (std::size_t n : {256, 1024, 2048}) {
    const auto rel = random_relation(n, 1.5 / static_cast<double>(n), rng);
    BitRelation a, b;
    const int reps = n <= 256 ? 20 : 2;
    const double s = seconds([&] { a = transitive_closure_serial(rel); }, reps);
    const double p = seconds([&] { b = transitive_closure_omp(rel); }, reps);
    report("transitive_closure", n, s, p, a == b);
  }
  for (std::size_t n : {256, 512, 1024}) {
    const auto rel = chain(n);
    std::optional<Triple> a, b;
    const int reps = n <= 256 ? 10 : 2;
    const double s = seconds([&] { a = find_transitivity_violation_serial(rel); }, reps);
    const double p = seconds([&] { b = find_transitivity_violation_omp(rel); }, reps);
    report("transitivity_check", n, s, p, a == b);
  }
  for (std::size_t m : {5, 6, 7}) {
    // No preorder fails, so both searches visit every preorder on m points.
    const auto never = [](const SmallRelation& r) {
      unsigned bits = 0;
      for (auto row : r) bits += static_cast<unsigned>(__builtin_popcount(row));
      return bits == 0;
    };
    std::optional<SmallRelation> a, b;
    const double s = seconds([&] { a = find_first_preorder_serial(m, never); }, 1);
    const double p = seconds([&] { b = find_first_preorder_omp(m, never); }, 1);
    report("preorder_search", m, s, p, a == b);
  }
  return 0;
}
