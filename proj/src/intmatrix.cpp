#include "psodkit/intmatrix.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "psodkit/error.hpp"

namespace psodkit {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("matrix rows have different lengths");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<mpz_class>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("matrix rows have different lengths");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<mpz_class>& d, std::size_t rows, std::size_t cols) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < d.size() && i < rows && i < cols; ++i) m(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const mpz_class& x) { return x == 0; });
}

std::vector<std::vector<mpz_class>> IntMatrix::to_rows() const {
  std::vector<std::vector<mpz_class>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  return out;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
  IntMatrix b(r1 - r0, c1 - c0);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
  return b;
}

void IntMatrix::set_block(std::size_t r0, std::size_t c0, const IntMatrix& b) {
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

IntMatrix IntMatrix::select_cols(const std::vector<std::size_t>& cols) const {
  IntMatrix out(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols.size(); ++k) out(i, k) = (*this)(i, cols[k]);
  return out;
}

std::string IntMatrix::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < cols_; ++j) out += (j ? ", " : "") + (*this)(i, j).get_str();
    out += "]";
  }
  return out + "]";
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row(std::size_t dst, std::size_t src, const mpz_class& c) {
  if (c == 0) return;
  for (std::size_t k = 0; k < cols_; ++k) (*this)(dst, k) += c * (*this)(src, k);
}

void IntMatrix::add_col(std::size_t dst, std::size_t src, const mpz_class& c) {
  if (c == 0) return;
  for (std::size_t k = 0; k < rows_; ++k) (*this)(k, dst) += c * (*this)(k, src);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
}

void IntMatrix::negate_col(std::size_t j) {
  for (std::size_t k = 0; k < rows_; ++k) (*this)(k, j) = -(*this)(k, j);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw InputError("matrix product: dimension mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
    }
  return c;
}

IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw InputError("hconcat: row counts differ");
  IntMatrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  IntMatrix out(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

mpz_class determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("determinant: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  mpz_class prev = 1;
  int sign = 1;
  // Bareiss elimination: every division is exact.
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = t;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

bool is_unimodular(const IntMatrix& a) {
  if (a.rows() != a.cols()) return false;
  return abs(determinant(a)) == 1;
}

namespace {

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Row with the smallest nonzero |a(i, col)| among rows >= from.
std::optional<std::size_t> smallest_in_col(const IntMatrix& a, std::size_t col, std::size_t from) {
  std::optional<std::size_t> best;
  for (std::size_t i = from; i < a.rows(); ++i)
    if (a(i, col) != 0 && (!best || abs(a(i, col)) < abs(a(*best, col)))) best = i;
  return best;
}

}  // namespace

HnfResult hnf(const IntMatrix& a) {
  HnfResult res{a, IntMatrix::identity(a.rows()), 0};
  auto& h = res.h;
  auto& u = res.u;
  std::size_t r = 0;
  for (std::size_t col = 0; col < h.cols() && r < h.rows(); ++col) {
    while (true) {
      const auto p = smallest_in_col(h, col, r);
      if (!p) break;
      h.swap_rows(r, *p);
      u.swap_rows(r, *p);
      bool clean = true;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h(i, col) == 0) continue;
        const mpz_class q = -floor_div(h(i, col), h(r, col));
        h.add_row(i, r, q);
        u.add_row(i, r, q);
        if (h(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (h(r, col) == 0) continue;
    if (h(r, col) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const mpz_class q = -floor_div(h(i, col), h(r, col));
      h.add_row(i, r, q);
      u.add_row(i, r, q);
    }
    ++r;
  }
  res.rank = r;
  return res;
}

std::vector<mpz_class> SnfResult::diagonal() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 0; i < rank; ++i) d.push_back(s(i, i));
  return d;
}

namespace {

struct SnfState {
  IntMatrix s, u, uinv, v;

  void swap_rows(std::size_t i, std::size_t j) {
    s.swap_rows(i, j);
    u.swap_rows(i, j);
    uinv.swap_cols(i, j);
  }
  void add_row(std::size_t dst, std::size_t src, const mpz_class& c) {
    s.add_row(dst, src, c);
    u.add_row(dst, src, c);
    uinv.add_col(src, dst, -c);
  }
  void negate_row(std::size_t i) {
    s.negate_row(i);
    u.negate_row(i);
    uinv.negate_col(i);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    s.swap_cols(i, j);
    v.swap_cols(i, j);
  }
  void add_col(std::size_t dst, std::size_t src, const mpz_class& c) {
    s.add_col(dst, src, c);
    v.add_col(dst, src, c);
  }
};

std::optional<std::pair<std::size_t, std::size_t>> choose_pivot(const IntMatrix& s, std::size_t t,
                                                                PivotStrategy strategy) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  if (strategy == PivotStrategy::first_nonzero) {
    for (std::size_t j = t; j < s.cols(); ++j)
      for (std::size_t i = t; i < s.rows(); ++i)
        if (s(i, j) != 0) return std::make_pair(i, j);
    return best;
  }
  for (std::size_t i = t; i < s.rows(); ++i)
    for (std::size_t j = t; j < s.cols(); ++j)
      if (s(i, j) != 0 && (!best || abs(s(i, j)) < abs(s(best->first, best->second)))) best = {i, j};
  return best;
}

}  // namespace

SnfResult snf(const IntMatrix& a, PivotStrategy strategy) {
  SnfState st{a, IntMatrix::identity(a.rows()), IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols())};
  auto& s = st.s;
  const std::size_t limit = std::min(a.rows(), a.cols());
  std::size_t t = 0;
  for (; t < limit; ++t) {
    auto pivot = choose_pivot(s, t, strategy);
    if (!pivot) break;
    st.swap_rows(t, pivot->first);
    st.swap_cols(t, pivot->second);
    while (true) {
      bool done = true;
      // Clear column t below the pivot, moving smaller remainders up.
      for (std::size_t i = t + 1; i < s.rows(); ++i) {
        if (s(i, t) == 0) continue;
        st.add_row(i, t, -floor_div(s(i, t), s(t, t)));
        if (s(i, t) != 0) {
          st.swap_rows(t, i);
          done = false;
        }
      }
      for (std::size_t j = t + 1; j < s.cols(); ++j) {
        if (s(t, j) == 0) continue;
        st.add_col(j, t, -floor_div(s(t, j), s(t, t)));
        if (s(t, j) != 0) {
          st.swap_cols(t, j);
          done = false;
        }
      }
      if (!done) continue;
      // Enforce divisibility of the remaining block by the pivot.
      std::optional<std::size_t> offender;
      for (std::size_t i = t + 1; i < s.rows() && !offender; ++i)
        for (std::size_t j = t + 1; j < s.cols(); ++j)
          if (s(i, j) % s(t, t) != 0) {
            offender = i;
            break;
          }
      if (!offender) break;
      st.add_row(t, *offender, 1);
    }
    if (s(t, t) < 0) st.negate_row(t);
  }
  return {std::move(st.s), std::move(st.u), std::move(st.uinv), std::move(st.v), t};
}

IntMatrix kernel(const IntMatrix& a) {
  const auto h = hnf(a.transpose());
  IntMatrix k(a.cols(), a.cols() - h.rank);
  for (std::size_t r = h.rank; r < a.cols(); ++r)
    for (std::size_t j = 0; j < a.cols(); ++j) k(j, r - h.rank) = h.u(r, j);
  return k;
}

}  // namespace psodkit
