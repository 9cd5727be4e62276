#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "birsym/errors.hpp"

namespace birsym {

// Matrix over Z/e with entries kept in [0, e).  Row spans of these are the
// kernel lattices behind every canonical symbol.
class ResidueMatrix {
public:
  ResidueMatrix(std::int64_t modulus, std::size_t rows, std::size_t cols)
      : mod_(modulus), rows_(rows), cols_(cols), a_(rows * cols) {
    if (modulus < 1) throw InputError("ResidueMatrix: modulus must be >= 1");
  }

  static ResidueMatrix fromRows(std::int64_t modulus, const std::vector<std::vector<std::int64_t>>& rows,
                                std::size_t cols) {
    ResidueMatrix m(modulus, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InputError("fromRows: ragged row");
      for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  std::int64_t modulus() const { return mod_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t x) {
    std::int64_t v = x % mod_;
    if (v < 0) v += mod_;
    a_[i * cols_ + j] = v;
  }

  std::vector<std::int64_t> row(std::size_t i) const {
    return std::vector<std::int64_t>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
  }
  std::vector<std::vector<std::int64_t>> rowList() const {
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  bool operator==(const ResidueMatrix& other) const {
    return mod_ == other.mod_ && rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
  }

private:
  std::int64_t mod_;
  std::size_t rows_, cols_;
  std::vector<std::int64_t> a_;
};

namespace detail {

// s*a + t*b = g = gcd(a, b) on nonnegative inputs; gcd(0, 0) = 0.
inline std::int64_t xgcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t s0 = 1, t0 = 0, s1 = 0, t1 = 1;
  while (b != 0) {
    std::int64_t q = a / b;
    std::int64_t r = a - q * b;
    a = b;
    b = r;
    std::int64_t s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = s1;
    t0 = t1;
    s1 = s2;
    t1 = t2;
  }
  s = s0;
  t = t0;
  return a;
}

// Smallest unit u of Z/e with u*a == gcd(a, e) mod e.  Moduli here are tiny,
// so a direct scan beats the algebraic stabilization dance.
inline std::int64_t stabilizingUnit(std::int64_t a, std::int64_t e) {
  std::int64_t g = std::gcd(a, e);
  for (std::int64_t u = 1; u < e; ++u) {
    if (std::gcd(u, e) != 1) continue;
    if ((u * a) % e == g) return u;
  }
  return 1;  // e == 1 or a == 0
}

}  // namespace detail

// Howell form: the canonical generating matrix of the row span inside
// (Z/e)^n.  Pivot columns strictly increase, each pivot entry divides e,
// entries above a pivot are reduced modulo it, and the span is closed under
// the annihilator shifts (e/g times a pivot row stays representable).  Unique
// per submodule; for prime e this is the reduced row echelon form.
inline ResidueMatrix howellForm(const ResidueMatrix& m) {
  const std::int64_t e = m.modulus();
  const std::size_t n = m.cols();
  std::vector<std::vector<std::int64_t>> work;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::int64_t> r = m.row(i);
    bool nz = false;
    for (std::int64_t x : r) nz = nz || x != 0;
    if (nz) work.push_back(std::move(r));
  }
  std::vector<std::vector<std::int64_t>> result;
  std::vector<std::size_t> pivotCol;

  auto modE = [e](std::int64_t x) {
    std::int64_t v = x % e;
    return v < 0 ? v + e : v;
  };

  for (std::size_t c = 0; c < n && !work.empty(); ++c) {
    // Combine every row with a nonzero entry in column c into one pivot row.
    std::vector<std::int64_t> pivot;
    std::vector<std::vector<std::int64_t>> rest;
    for (auto& r : work) {
      if (r[c] == 0) {
        rest.push_back(std::move(r));
        continue;
      }
      if (pivot.empty()) {
        pivot = std::move(r);
        continue;
      }
      std::int64_t s, t;
      std::int64_t g = detail::xgcd(pivot[c], r[c], s, t);
      std::int64_t ad = pivot[c] / g, bd = r[c] / g;
      std::vector<std::int64_t> np(n), nr(n);
      for (std::size_t j = 0; j < n; ++j) {
        np[j] = modE(s * pivot[j] + t * r[j]);
        nr[j] = modE(ad * r[j] - bd * pivot[j]);
      }
      pivot = std::move(np);
      bool nz = false;
      for (std::int64_t x : nr) nz = nz || x != 0;
      if (nz) rest.push_back(std::move(nr));
    }
    work = std::move(rest);
    if (pivot.empty()) continue;

    std::int64_t u = detail::stabilizingUnit(pivot[c], e);
    for (std::size_t j = 0; j < n; ++j) pivot[j] = modE(u * pivot[j]);
    std::int64_t g = pivot[c];  // now gcd(old entry, e), divides e

    // Annihilator shift keeps the span closed below this pivot.
    std::int64_t ann = e / g;
    std::vector<std::int64_t> shifted(n);
    bool nz = false;
    for (std::size_t j = 0; j < n; ++j) {
      shifted[j] = modE(ann * pivot[j]);
      nz = nz || shifted[j] != 0;
    }
    if (nz) work.push_back(std::move(shifted));

    result.push_back(std::move(pivot));
    pivotCol.push_back(c);
  }

  // Reduce entries above each pivot modulo the pivot entry.
  for (std::size_t l = 1; l < result.size(); ++l) {
    std::size_t c = pivotCol[l];
    std::int64_t g = result[l][c];
    for (std::size_t k = 0; k < l; ++k) {
      std::int64_t q = result[k][c] / g;
      if (q == 0) continue;
      for (std::size_t j = 0; j < n; ++j) result[k][j] = modE(result[k][j] - q * result[l][j]);
    }
  }
  return ResidueMatrix::fromRows(e, result, n);
}

// Membership test against a matrix already in Howell form.
inline bool howellSpanContains(const ResidueMatrix& h, const std::vector<std::int64_t>& v) {
  if (v.size() != h.cols()) throw InputError("howellSpanContains: length mismatch");
  const std::int64_t e = h.modulus();
  std::vector<std::int64_t> w(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    std::int64_t x = v[j] % e;
    w[j] = x < 0 ? x + e : x;
  }
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t c = 0;
    while (c < h.cols() && h.at(i, c) == 0) ++c;
    if (c == h.cols()) continue;
    std::int64_t g = h.at(i, c);
    if (w[c] % g != 0) return false;
    std::int64_t q = w[c] / g;
    if (q != 0)
      for (std::size_t j = c; j < h.cols(); ++j) {
        std::int64_t x = (w[j] - q * h.at(i, j)) % e;
        w[j] = x < 0 ? x + e : x;
      }
  }
  for (std::int64_t x : w)
    if (x != 0) return false;
  return true;
}

}  // namespace birsym
