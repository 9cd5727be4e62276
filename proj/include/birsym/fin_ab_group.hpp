#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "birsym/errors.hpp"
#include "birsym/int_matrix.hpp"

namespace birsym {

// Element of a finite abelian group in invariant-factor coordinates.
struct GroupElement {
  std::vector<std::int64_t> c;

  bool operator==(const GroupElement& other) const { return c == other.c; }
  bool operator<(const GroupElement& other) const { return c < other.c; }

  std::string str() const {
    if (c.empty()) return "(0)";
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + ")";
  }
};

// Finite abelian group stored in invariant-factor form d1 | d2 | ... with
// every di >= 2; the empty chain is the trivial group.
class FinAbGroup {
public:
  FinAbGroup() = default;

  explicit FinAbGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i] < 2) throw InputError("FinAbGroup: invariant factor < 2");
      if (i > 0 && factors_[i] % factors_[i - 1] != 0)
        throw InputError("FinAbGroup: divisibility chain violated");
    }
  }

  static FinAbGroup trivial() { return FinAbGroup(); }
  static FinAbGroup cyclic(std::int64_t d) {
    if (d < 1) throw InputError("cyclic: order must be >= 1");
    return d == 1 ? FinAbGroup() : FinAbGroup({d});
  }

  const std::vector<std::int64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  bool isTrivial() const { return factors_.empty(); }
  std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }
  std::int64_t order() const {
    std::int64_t n = 1;
    for (std::int64_t d : factors_) n *= d;
    return n;
  }

  bool validElement(const GroupElement& x) const {
    if (x.c.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < x.c.size(); ++i)
      if (x.c[i] < 0 || x.c[i] >= factors_[i]) return false;
    return true;
  }
  void requireElement(const GroupElement& x) const {
    if (!validElement(x)) throw InputError("element does not belong to the group");
  }

  GroupElement zero() const { return GroupElement{std::vector<std::int64_t>(factors_.size(), 0)}; }

  GroupElement reduce(std::vector<std::int64_t> coords) const {
    if (coords.size() != factors_.size()) throw InputError("reduce: coordinate count mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i) {
      coords[i] %= factors_[i];
      if (coords[i] < 0) coords[i] += factors_[i];
    }
    return GroupElement{std::move(coords)};
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    requireElement(a);
    requireElement(b);
    std::vector<std::int64_t> c(factors_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = (a.c[i] + b.c[i]) % factors_[i];
    return GroupElement{std::move(c)};
  }
  GroupElement neg(const GroupElement& a) const {
    requireElement(a);
    std::vector<std::int64_t> c(factors_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] == 0 ? 0 : factors_[i] - a.c[i];
    return GroupElement{std::move(c)};
  }
  GroupElement sub(const GroupElement& a, const GroupElement& b) const { return add(a, neg(b)); }
  GroupElement scaled(const GroupElement& a, std::int64_t k) const {
    requireElement(a);
    std::vector<std::int64_t> c(factors_.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::int64_t v = (a.c[i] * (k % factors_[i])) % factors_[i];
      c[i] = v < 0 ? v + factors_[i] : v;
    }
    return GroupElement{std::move(c)};
  }
  bool isZero(const GroupElement& a) const {
    requireElement(a);
    for (std::int64_t x : a.c)
      if (x != 0) return false;
    return true;
  }

  std::int64_t elementOrder(const GroupElement& a) const {
    requireElement(a);
    std::int64_t ord = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      ord = std::lcm(ord, factors_[i] / std::gcd(factors_[i], a.c[i]));
    return ord;
  }

  // Every element, in lexicographic coordinate order.  For small groups only.
  std::vector<GroupElement> allElements() const {
    if (order() > 2000000) throw ResourceError("allElements: group too large");
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order()));
    GroupElement cur = zero();
    for (;;) {
      out.push_back(cur);
      std::size_t i = factors_.size();
      while (i > 0) {
        --i;
        if (++cur.c[i] < factors_[i]) break;
        cur.c[i] = 0;
        if (i == 0) return out;
      }
      if (factors_.empty()) return out;
    }
  }

  bool operator==(const FinAbGroup& other) const { return factors_ == other.factors_; }

  std::string str() const {
    if (factors_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "+";
      s += "C" + std::to_string(factors_[i]);
    }
    return s;
  }

private:
  std::vector<std::int64_t> factors_;
};

namespace detail {

inline std::int64_t toInt64(const mpz_class& x) {
  if (!x.fits_slong_p()) throw ResourceError("value does not fit in 64 bits");
  return x.get_si();
}

// Shared quotient core: given relation rows on k generators (all of finite
// order, so the relation matrix has full column rank), produce the quotient's
// invariant factors and the coordinate map for generator images.
struct PresentedQuotient {
  FinAbGroup group;
  IntMatrix v;                    // SNF column transform, k x k
  std::vector<std::size_t> keep;  // columns whose diagonal entry is >= 2
  std::vector<std::int64_t> moduli;

  GroupElement image(const std::vector<mpz_class>& coords) const {
    std::vector<mpz_class> w(v.cols());
    for (std::size_t j = 0; j < v.cols(); ++j)
      for (std::size_t i = 0; i < v.cols(); ++i)
        if (coords[i] != 0) w[j] += coords[i] * v(i, j);
    std::vector<std::int64_t> out(keep.size());
    for (std::size_t t = 0; t < keep.size(); ++t) {
      mpz_class r = w[keep[t]] % moduli[t];
      if (r < 0) r += moduli[t];
      out[t] = toInt64(r);
    }
    return GroupElement{std::move(out)};
  }
  GroupElement imageOfGenerator(std::size_t i) const {
    std::vector<std::int64_t> out(keep.size());
    for (std::size_t t = 0; t < keep.size(); ++t) {
      mpz_class r = v(i, keep[t]) % moduli[t];
      if (r < 0) r += moduli[t];
      out[t] = toInt64(r);
    }
    return GroupElement{std::move(out)};
  }
};

inline PresentedQuotient presentQuotient(const IntMatrix& relations) {
  PresentedQuotient out;
  SnfCore core = snfCore(relations, false, true);
  if (core.rank != relations.cols()) throw InputError("presentQuotient: quotient is not finite");
  std::vector<std::int64_t> factors;
  for (std::size_t j = 0; j < relations.cols(); ++j) {
    std::int64_t d = toInt64(core.diag[j]);
    if (d >= 2) {
      out.keep.push_back(j);
      out.moduli.push_back(d);
      factors.push_back(d);
    }
  }
  out.group = FinAbGroup(factors);
  out.v = core.v;
  return out;
}

}  // namespace detail

// Quotient A/<gens> together with the induced (additive, surjective)
// projection map in invariant-factor coordinates.
class QuotientMap {
public:
  QuotientMap(FinAbGroup domain, detail::PresentedQuotient q)
      : domain_(std::move(domain)), q_(std::move(q)) {}

  const FinAbGroup& domain() const { return domain_; }
  const FinAbGroup& group() const { return q_.group; }

  GroupElement project(const GroupElement& x) const {
    domain_.requireElement(x);
    std::vector<mpz_class> coords(x.c.size());
    for (std::size_t i = 0; i < x.c.size(); ++i) coords[i] = x.c[i];
    return q_.image(coords);
  }

private:
  FinAbGroup domain_;
  detail::PresentedQuotient q_;
};

inline QuotientMap quotientByElements(const FinAbGroup& a, const std::vector<GroupElement>& gens) {
  const std::size_t r = a.rank();
  for (const GroupElement& g : gens) a.requireElement(g);
  IntMatrix rel(r + gens.size(), r);
  for (std::size_t i = 0; i < r; ++i) rel(i, i) = a.factors()[i];
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < r; ++j) rel(r + i, j) = gens[i].c[j];
  return QuotientMap(a, detail::presentQuotient(rel));
}

namespace detail {

// Integer basis of the kernel of Z^k -> A, y |-> sum y_i * gens_i.
inline std::vector<std::vector<mpz_class>> kernelBasisRows(const FinAbGroup& a,
                                                           const std::vector<GroupElement>& gens) {
  const std::size_t k = gens.size();
  const std::size_t r = a.rank();
  for (const GroupElement& g : gens) a.requireElement(g);
  IntMatrix b(k + r, r);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < r; ++j) b(i, j) = gens[i].c[j];
  for (std::size_t j = 0; j < r; ++j) b(k + j, j) = a.factors()[j];
  SnfCore core = snfCore(b, true, false);
  // Rows of U beyond the rank span the kernel of z -> z*B; their first k
  // coordinates are a basis of the kernel of the generator map.
  std::vector<std::vector<mpz_class>> out;
  for (std::size_t i = core.rank; i < k + r; ++i) {
    std::vector<mpz_class> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = core.u(i, j);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

// The subgroup <gens> of A, abstractly, with gens re-coordinatized as its
// generating images.
inline std::pair<FinAbGroup, std::vector<GroupElement>> subgroupGenerated(
    const FinAbGroup& a, const std::vector<GroupElement>& gens) {
  const std::size_t k = gens.size();
  std::vector<std::vector<mpz_class>> ker = detail::kernelBasisRows(a, gens);
  IntMatrix rel(0, k);
  for (auto& row : ker) rel.appendRow(row);
  detail::PresentedQuotient q = detail::presentQuotient(rel);
  std::vector<GroupElement> images;
  images.reserve(k);
  for (std::size_t i = 0; i < k; ++i) images.push_back(q.imageOfGenerator(i));
  return {q.group, std::move(images)};
}

// Invariant-factor normalization of C_{ds[0]} + C_{ds[1]} + ... with the
// images of the per-factor standard generators.
inline std::pair<FinAbGroup, std::vector<GroupElement>> normalizedDirectSum(
    const std::vector<std::int64_t>& ds) {
  const std::size_t k = ds.size();
  IntMatrix rel(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    if (ds[i] < 1) throw InputError("normalizedDirectSum: factor must be >= 1");
    rel(i, i) = ds[i];
  }
  detail::PresentedQuotient q = detail::presentQuotient(rel);
  std::vector<GroupElement> images;
  images.reserve(k);
  for (std::size_t i = 0; i < k; ++i) images.push_back(q.imageOfGenerator(i));
  return {q.group, std::move(images)};
}

}  // namespace birsym
