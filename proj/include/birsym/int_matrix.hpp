#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birsym/abelian_invariants.hpp"
#include "birsym/errors.hpp"

namespace birsym {

// Dense arbitrary-precision integer matrix, row-major.  Rows act as relations
// among column generators throughout the library, so the cokernel of M is
// Z^cols / (integer row span of M).
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix fromRows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InputError("fromRows: ragged row");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void appendRow(const std::vector<mpz_class>& row) {
    if (row.size() != cols_) throw InputError("appendRow: wrong length");
    a_.insert(a_.end(), row.begin(), row.end());
    ++rows_;
  }

  bool operator==(const IntMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
  }

  IntMatrix operator*(const IntMatrix& other) const {
    if (cols_ != other.rows_) throw InputError("matrix product: shape mismatch");
    IntMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const mpz_class& x = (*this)(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += x * other(k, j);
      }
    return out;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? "\n[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += " ";
        s += (*this)(i, j).get_str();
      }
      s += "]";
    }
    return s;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> a_;
};

namespace detail {

// Smith normal form working core.  The transforms are accumulated only on
// request; computing U on a tall relation matrix is much more expensive than
// the diagonal itself.
struct SnfCore {
  std::vector<mpz_class> diag;  // min(rows, cols) entries, chain d1 | d2 | ..., zeros last
  std::size_t rank = 0;
  IntMatrix u, v;
  bool hasU = false, hasV = false;
};

inline SnfCore snfCore(IntMatrix m, bool wantU, bool wantV) {
  const std::size_t r = m.rows(), c = m.cols();
  SnfCore out;
  if (wantU) out.u = IntMatrix::identity(r);
  if (wantV) out.v = IntMatrix::identity(c);
  out.hasU = wantU;
  out.hasV = wantV;

  auto swapRows = [&](std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < c; ++j) mpz_swap(m(i, j).get_mpz_t(), m(k, j).get_mpz_t());
    if (wantU)
      for (std::size_t j = 0; j < r; ++j) mpz_swap(out.u(i, j).get_mpz_t(), out.u(k, j).get_mpz_t());
  };
  auto swapCols = [&](std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < r; ++i) mpz_swap(m(i, j).get_mpz_t(), m(i, k).get_mpz_t());
    if (wantV)
      for (std::size_t i = 0; i < c; ++i) mpz_swap(out.v(i, j).get_mpz_t(), out.v(i, k).get_mpz_t());
  };
  // row i -= q * row k
  auto rowSub = [&](std::size_t i, std::size_t k, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < c; ++j)
      if (m(k, j) != 0) m(i, j) -= q * m(k, j);
    if (wantU)
      for (std::size_t j = 0; j < r; ++j)
        if (out.u(k, j) != 0) out.u(i, j) -= q * out.u(k, j);
  };
  // col j -= q * col k
  auto colSub = [&](std::size_t j, std::size_t k, const mpz_class& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < r; ++i)
      if (m(i, k) != 0) m(i, j) -= q * m(i, k);
    if (wantV)
      for (std::size_t i = 0; i < c; ++i)
        if (out.v(i, k) != 0) out.v(i, j) -= q * out.v(i, k);
  };
  auto negateRow = [&](std::size_t i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = -m(i, j);
    if (wantU)
      for (std::size_t j = 0; j < r; ++j) out.u(i, j) = -out.u(i, j);
  };

  const std::size_t steps = r < c ? r : c;
  std::size_t t = 0;
  for (; t < steps; ++t) {
    // Pivot: smallest nonzero absolute value, ties broken by lowest (row, col).
    // Row-major scanning with strict improvement gives exactly that tie-break.
    bool found = false;
    std::size_t pi = t, pj = t;
    mpz_class best;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        if (m(i, j) == 0) continue;
        mpz_class ab = abs(m(i, j));
        if (!found || ab < best) {
          found = true;
          best = ab;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    swapRows(t, pi);
    swapCols(t, pj);

    for (;;) {
      // Clear column t below the pivot; a nonzero remainder becomes the new,
      // strictly smaller pivot.
      for (std::size_t i = t + 1; i < r;) {
        if (m(i, t) == 0) {
          ++i;
          continue;
        }
        mpz_class q = m(i, t) / m(t, t);
        rowSub(i, t, q);
        if (m(i, t) != 0) {
          swapRows(t, i);
          i = t + 1;
        } else {
          ++i;
        }
      }
      // Clear row t; a column swap may repopulate column t, so restart then.
      bool colSwapped = false;
      for (std::size_t j = t + 1; j < c;) {
        if (m(t, j) == 0) {
          ++j;
          continue;
        }
        mpz_class q = m(t, j) / m(t, t);
        colSub(j, t, q);
        if (m(t, j) != 0) {
          swapCols(t, j);
          colSwapped = true;
          j = t + 1;
        } else {
          ++j;
        }
      }
      if (colSwapped) continue;

      // Divisibility fix-up: the pivot must divide the trailing submatrix.
      bool fixed = false;
      for (std::size_t i = t + 1; i < r && !fixed; ++i)
        for (std::size_t j = t + 1; j < c && !fixed; ++j)
          if (m(i, j) % m(t, t) != 0) {
            rowSub(t, i, mpz_class(-1));  // row t += row i
            fixed = true;
          }
      if (!fixed) break;
    }
    if (m(t, t) < 0) negateRow(t);
  }
  out.rank = t;
  out.diag.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) out.diag[i] = m(i, i);
  return out;
}

}  // namespace detail

struct SmithForm {
  IntMatrix u, d, v;  // u*m*v = d
};

// Smith normal form: U*M*V = D with D diagonal, d1 | d2 | ..., di >= 0, and
// U, V unimodular.  Total on all shapes, including empty matrices.
inline SmithForm smithNormalForm(const IntMatrix& m) {
  detail::SnfCore core = detail::snfCore(m, true, true);
  SmithForm out;
  out.u = core.u;
  out.v = core.v;
  out.d = IntMatrix(m.rows(), m.cols());
  for (std::size_t i = 0; i < core.diag.size(); ++i) out.d(i, i) = core.diag[i];
  return out;
}

// Invariants of Z^cols / rowspan(M).
inline AbGroupInvariants cokernelInvariants(const IntMatrix& m) {
  detail::SnfCore core = detail::snfCore(m, false, false);
  AbGroupInvariants out;
  out.free_rank = m.cols() - core.rank;
  for (const mpz_class& d : core.diag)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

// Order of the class of v in Z^cols / rowspan(M): smallest k >= 1 with k*v in
// the integer row span; nullopt when no such k exists.
inline std::optional<mpz_class> orderInCokernel(const IntMatrix& m, const std::vector<mpz_class>& v) {
  if (v.size() != m.cols()) throw InputError("orderInCokernel: vector length != cols");
  detail::SnfCore core = detail::snfCore(m, false, true);
  // w = v * V puts v in diagonal coordinates.
  std::vector<mpz_class> w(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i)
      if (v[i] != 0) w[j] += v[i] * core.v(i, j);
  mpz_class order = 1;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    mpz_class d = j < core.diag.size() ? core.diag[j] : mpz_class(0);
    if (d == 0) {
      if (w[j] != 0) return std::nullopt;
    } else {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), w[j].get_mpz_t());
      mpz_class need = d / g;
      mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), need.get_mpz_t());
    }
  }
  return order;
}

}  // namespace birsym
