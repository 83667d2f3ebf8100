#pragma once

// Dense matrices over Z with Hermite and Smith normal forms.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace psodkit {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  /// Row-major nested list; throws InputError on ragged input.
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<mpz_class>>& rows, std::size_t cols = 0);
  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(const std::vector<mpz_class>& d, std::size_t rows, std::size_t cols);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] IntMatrix transpose() const;
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] std::vector<std::vector<mpz_class>> to_rows() const;
  /// Submatrix of the given rows and columns (half-open ranges).
  [[nodiscard]] IntMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;
  void set_block(std::size_t r0, std::size_t c0, const IntMatrix& b);
  [[nodiscard]] IntMatrix select_cols(const std::vector<std::size_t>& cols) const;
  [[nodiscard]] std::string to_string() const;

  // Elementary operations.
  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  void add_row(std::size_t dst, std::size_t src, const mpz_class& c);  // row dst += c * row src
  void add_col(std::size_t dst, std::size_t src, const mpz_class& c);  // col dst += c * col src
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

/// Horizontal concatenation [a | b]; row counts must agree.
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
/// Block-diagonal matrix.
IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);

/// Exact determinant of a square matrix (fraction-free elimination).
mpz_class determinant(const IntMatrix& a);
bool is_unimodular(const IntMatrix& a);

struct HnfResult {
  IntMatrix h;  // row Hermite normal form
  IntMatrix u;  // unimodular, u * a == h
  std::size_t rank = 0;
};

/// Row-style HNF: pivots positive, entries above a pivot reduced into [0, pivot),
/// zero rows at the bottom.
HnfResult hnf(const IntMatrix& a);

enum class PivotStrategy {
  smallest,       // smallest nonzero absolute value, first in row-major order
  first_nonzero,  // first nonzero entry in column-major order
};

struct SnfResult {
  IntMatrix s;     // diagonal, d_1 | d_2 | ..., nonnegative
  IntMatrix u;     // u * a * v == s
  IntMatrix uinv;  // u^{-1}
  IntMatrix v;
  std::size_t rank = 0;

  /// Nonzero diagonal entries.
  [[nodiscard]] std::vector<mpz_class> diagonal() const;
};

SnfResult snf(const IntMatrix& a, PivotStrategy strategy = PivotStrategy::smallest);

/// Lattice basis of {x : a x = 0}, one basis vector per column.
IntMatrix kernel(const IntMatrix& a);

}  // namespace psodkit
