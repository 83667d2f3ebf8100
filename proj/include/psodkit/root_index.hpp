#pragma once

// Characters in Q/Z = Q ∩ (-1, 0], normal factorial forms, the recursive
// factorial order <=!, and builders for the root-stack indexing preorders.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "psodkit/caps.hpp"
#include "psodkit/preorder.hpp"

namespace psodkit {

/// Reduced rational num/den with -den < num <= 0.
class Residue {
 public:
  Residue() = default;
  /// Reduces the fraction; throws InputError if den <= 0 or the value is
  /// outside (-1, 0].
  Residue(mpz_class num, mpz_class den);

  /// Parses "0" or "-p/q" (also "-p", "-0", unreduced forms are reduced).
  static Residue parse(std::string_view text);

  [[nodiscard]] const mpz_class& num() const noexcept { return num_; }
  [[nodiscard]] const mpz_class& den() const noexcept { return den_; }
  [[nodiscard]] bool is_zero() const noexcept { return num_ == 0; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Residue& a, const Residue& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  /// Standard order of rationals.
  friend std::strong_ordering operator<=>(const Residue& a, const Residue& b);

 private:
  mpz_class num_{0};
  mpz_class den_{1};
};

using CharTuple = std::vector<Residue>;

std::string to_string(const CharTuple& chi);
/// Accepts "(a,b,...)", "()" or a single residue.
CharTuple parse_tuple(std::string_view text);

mpz_class factorial(unsigned n);

/// chi = (-p_1/n!, ..., -p_N/n!) with n >= 2 minimal.
struct FactorialForm {
  unsigned level = 2;
  std::vector<mpz_class> numerators;
  friend bool operator==(const FactorialForm&, const FactorialForm&) = default;
};

FactorialForm to_factorial_form(const CharTuple& chi);
CharTuple from_factorial_form(const FactorialForm& form);

enum class Ordering { less, equal, greater, incomparable };
std::string_view to_string(Ordering o) noexcept;

/// <=! on Z_{n!}, elements given as numerators p of -p/n!.
Ordering cmp_bang_znfact(const mpz_class& p, const mpz_class& q, unsigned level);
/// Position of -p/n! in the <=! chain of Z_{n!} (0 = smallest).
mpz_class bang_rank(const mpz_class& p, unsigned level);
/// <=! on tuples of equal length (partial at a fixed level).
Ordering cmp_bang(const CharTuple& a, const CharTuple& b);

/// Z_r (or Z_r^* without 0) inside Q ∩ (-1, 0], increasing.
std::vector<Residue> zr_elements(unsigned long r, bool starred);

/// Z_{k,r} or Z_{k,r}^* with the componentwise order. Labels are tuples.
FinitePreorder build_zkr(unsigned k, unsigned long r, bool starred, const Caps& caps = {});

/// One block of a stratified index: the characters of one stratum.
struct StratumBlock {
  std::string id;
  unsigned codim = 0;
};

/// Z_{D,r}: blocks Z_{k,r}^* for k = N_D, ..., 0, larger codimension below.
/// Labels "k:(chars)". `totalize` replaces each block's product order by its
/// graded total preorder.
FinitePreorder build_zdr(unsigned max_codim, unsigned long r, bool totalize = false, const Caps& caps = {});

/// Z_{S(D),r}: one block per stratum; (S, x) <= (S', y) iff |S| > |S'|, or
/// |S| = |S'| and x <= y. Labels "id:(chars)".
FinitePreorder build_zsdr(const std::vector<StratumBlock>& strata, unsigned long r, bool totalize = false,
                          const Caps& caps = {});

/// All k-tuples of nonzero characters of factorial level <= n, sorted by <=!
/// (higher level first; within a level, lexicographic in <=!-ranks).
std::vector<CharTuple> enumerate_characters(unsigned k, unsigned max_level, const Caps& caps = {});
/// As enumerate_characters, keeping only denominators coprime to `prime`.
std::vector<CharTuple> enumerate_characters_coprime(unsigned k, unsigned max_level, unsigned long prime,
                                                    const Caps& caps = {});

/// Character blocks ordered by <=! (infinite root stack truncated at a level).
/// Same cross-stratum rule as build_zsdr. A nonzero `exclude_prime` drops
/// characters whose denominator is divisible by it.
FinitePreorder build_bang_index(const std::vector<StratumBlock>& strata, unsigned max_level, bool totalize = false,
                                const Caps& caps = {}, unsigned long exclude_prime = 0);

/// Element label used by the builders.
std::string character_label(const std::string& block, const CharTuple& chi);

}  // namespace psodkit
