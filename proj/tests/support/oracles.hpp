#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. None of these call the library routine they check.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "psodkit/intmatrix.hpp"
#include "psodkit/preorder.hpp"

namespace oracle {

/// Z_{n!} listed in <=! order, as rationals -p/n!, built by materializing each
/// fiber of Z_{n!} -> Z_n and ordering it by the level n-1 chain.
std::vector<mpq_class> bang_chain(unsigned n);
/// Position of -p/n! in bang_chain(n).
std::vector<std::size_t> bang_positions(unsigned n);

/// Laplace expansion along the first row.
mpz_class cofactor_determinant(const psodkit::IntMatrix& a);

/// Whether x lies in the integer span of the columns of basis (basis columns
/// independent); solved over Q, then tested for integrality.
bool in_lattice(const psodkit::IntMatrix& basis, const std::vector<mpz_class>& x);

/// All integer vectors with entries in [-bound, bound] and a x = 0.
std::vector<std::vector<mpz_class>> small_kernel_vectors(const psodkit::IntMatrix& a, int bound);

/// Search over all labellings by {0, ..., n-1} for an order-reflecting map to N.
bool directed_by_labelling(const psodkit::FinitePreorder& p);

/// Row Hermite form shape check: pivots positive, staircase, reduced above.
bool is_row_hnf(const psodkit::IntMatrix& h);
/// Diagonal with nonnegative divisibility chain, zeros last.
bool is_snf(const psodkit::IntMatrix& s);

}  // namespace oracle
