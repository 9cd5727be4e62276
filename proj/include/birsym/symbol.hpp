#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "birsym/errors.hpp"
#include "birsym/fin_ab_group.hpp"
#include "birsym/residue_matrix.hpp"

namespace birsym {

// A finite abelian group together with a generating sequence.  Zeros are
// allowed in the sequence (they contribute nothing to generation); the order
// of entries is significant until canonicalization.
struct SymbolPair {
  FinAbGroup group;
  std::vector<GroupElement> seq;

  std::size_t degree() const { return seq.size(); }
};

namespace detail {

// Kernel lattice of (Z/e)^n -> A induced by the sequence, as Howell-canonical
// rows over Z/e.
inline ResidueMatrix kernelLattice(const SymbolPair& p, std::int64_t e) {
  const std::size_t n = p.seq.size();
  std::vector<std::vector<mpz_class>> ker = kernelBasisRows(p.group, p.seq);
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(ker.size());
  for (auto& row : ker) {
    std::vector<std::int64_t> r(n);
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class m = row[j] % e;
      if (m < 0) m += e;
      r[j] = toInt64(m);
    }
    rows.push_back(std::move(r));
  }
  return howellForm(ResidueMatrix::fromRows(e, rows, n));
}

inline std::vector<std::int64_t> flattenPadded(const ResidueMatrix& h) {
  const std::size_t n = h.cols();
  std::vector<std::int64_t> out(n * n, 0);
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = h.at(i, j);
  return out;
}

// (Z/e)^n / L in invariant-factor form, with the images of the standard
// basis; works for any (not necessarily permutation-minimal) kernel rows.
inline SymbolPair decodeKernel(std::int64_t e, std::size_t n,
                               const std::vector<std::vector<std::int64_t>>& kernelRows) {
  if (n == 0) return SymbolPair{FinAbGroup::trivial(), {}};
  IntMatrix rel(kernelRows.size() + n, n);
  for (std::size_t i = 0; i < kernelRows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) rel(i, j) = kernelRows[i][j];
  for (std::size_t j = 0; j < n; ++j) rel(kernelRows.size() + j, j) = e;
  PresentedQuotient q = presentQuotient(rel);
  SymbolPair out;
  out.group = q.group;
  out.seq.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.seq.push_back(q.imageOfGenerator(i));
  return out;
}

// Lexicographically minimal Howell form over all coordinate permutations.
inline ResidueMatrix minimizeOverPermutations(const ResidueMatrix& h) {
  const std::size_t n = h.cols();
  if (n > 8) throw ResourceError("degree too large for permutation canonicalization");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  ResidueMatrix best = h;
  std::vector<std::int64_t> bestKey = flattenPadded(h);
  auto rows = h.rowList();
  std::vector<std::vector<std::int64_t>> permuted(rows.size(), std::vector<std::int64_t>(n));
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) permuted[i][j] = rows[i][perm[j]];
    ResidueMatrix cand = howellForm(ResidueMatrix::fromRows(h.modulus(), permuted, n));
    std::vector<std::int64_t> key = flattenPadded(cand);
    if (key < bestKey) {
      bestKey = std::move(key);
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace detail

class CanonicalSymbol;

namespace detail {
CanonicalSymbol symbolFromCanonicalKernel(std::int64_t torsion, std::size_t degree,
                                          std::vector<std::vector<std::int64_t>> kernel);
}

// Canonical representative of a symbol pair up to group isomorphism and
// permutation of the sequence.  A pair (A, S) with |S| = n and e-torsion A is
// determined, up to isomorphism of A, by the kernel of the induced surjection
// (Z/e)^n -> A; permutation equivalence becomes the coordinate action on
// (Z/e)^n.  The stored kernel is Howell-canonical and lexicographically
// minimal over all coordinate permutations.
class CanonicalSymbol {
public:
  std::int64_t torsionBound() const { return torsion_; }
  std::size_t degree() const { return degree_; }
  const std::vector<std::vector<std::int64_t>>& kernelRows() const { return kernel_; }

  std::strong_ordering operator<=>(const CanonicalSymbol& other) const {
    if (auto c = torsion_ <=> other.torsion_; c != 0) return c;
    if (auto c = degree_ <=> other.degree_; c != 0) return c;
    return flatten() <=> other.flatten();
  }
  bool operator==(const CanonicalSymbol& other) const {
    return torsion_ == other.torsion_ && degree_ == other.degree_ && kernel_ == other.kernel_;
  }

  // Deterministic representative (A, S): A = (Z/e)^n / L in invariant-factor
  // form, S = images of the standard basis.
  SymbolPair decode() const { return detail::decodeKernel(torsion_, degree_, kernel_); }

  // Textual notation: "[d1,d2,...;(x,..),(x,..),...]", e.g. "[5;(1),(2)]".
  // Trivial-group slots print as "(0)", so t^2[0,()] is "[;(0),(0)]".
  // Printed through a deterministic display normalization (unit scaling when
  // the group is cyclic, permutations with zeros pushed last); the symbol
  // identity itself is the kernel lattice.
  std::string str() const {
    SymbolPair p = displayPair();
    std::string s = "[";
    for (std::size_t i = 0; i < p.group.factors().size(); ++i) {
      if (i) s += ",";
      s += std::to_string(p.group.factors()[i]);
    }
    s += ";";
    for (std::size_t i = 0; i < p.seq.size(); ++i) {
      if (i) s += ",";
      s += p.seq[i].str();
    }
    return s + "]";
  }

  SymbolPair displayPair() const {
    SymbolPair p = decode();
    const FinAbGroup& g = p.group;
    if (g.isTrivial() || p.seq.empty()) return p;
    // zeros compare last so t-shift padding trails
    auto seqKey = [&](const std::vector<GroupElement>& seq) {
      std::vector<std::vector<std::int64_t>> key;
      key.reserve(seq.size());
      for (const GroupElement& x : seq) {
        std::vector<std::int64_t> k = x.c;
        k.insert(k.begin(), g.isZero(x) ? 1 : 0);
        key.push_back(std::move(k));
      }
      return key;
    };
    std::vector<std::vector<GroupElement>> candidates;
    if (g.rank() == 1) {
      std::int64_t d = g.factors()[0];
      for (std::int64_t u = 1; u < d; ++u) {
        if (std::gcd(u, d) != 1) continue;
        std::vector<GroupElement> scaled;
        scaled.reserve(p.seq.size());
        for (const GroupElement& x : p.seq) scaled.push_back(g.scaled(x, u));
        candidates.push_back(std::move(scaled));
      }
    } else {
      candidates.push_back(p.seq);
    }
    std::vector<GroupElement> best;
    std::vector<std::vector<std::int64_t>> bestKey;
    for (auto& cand : candidates) {
      std::sort(cand.begin(), cand.end(), [&](const GroupElement& a, const GroupElement& b) {
        bool za = g.isZero(a), zb = g.isZero(b);
        if (za != zb) return zb;
        return a.c < b.c;
      });
      auto key = seqKey(cand);
      if (best.empty() || key < bestKey) {
        best = std::move(cand);
        bestKey = std::move(key);
      }
    }
    p.seq = std::move(best);
    return p;
  }

private:
  CanonicalSymbol(std::int64_t torsion, std::size_t degree, std::vector<std::vector<std::int64_t>> kernel)
      : torsion_(torsion), degree_(degree), kernel_(std::move(kernel)) {}

  std::vector<std::int64_t> flatten() const {
    std::vector<std::int64_t> out(degree_ * degree_, 0);
    for (std::size_t i = 0; i < kernel_.size(); ++i)
      for (std::size_t j = 0; j < degree_; ++j) out[i * degree_ + j] = kernel_[i][j];
    return out;
  }

  std::int64_t torsion_ = 1;
  std::size_t degree_ = 0;
  std::vector<std::vector<std::int64_t>> kernel_;

  friend CanonicalSymbol canonicalize(const SymbolPair&, std::int64_t);
  friend CanonicalSymbol detail::symbolFromCanonicalKernel(std::int64_t, std::size_t,
                                                           std::vector<std::vector<std::int64_t>>);
};

namespace detail {

// Trusted constructor for kernels that are already permutation-minimal
// Howell forms (the symbol enumerator produces these directly).
inline CanonicalSymbol symbolFromCanonicalKernel(std::int64_t torsion, std::size_t degree,
                                                 std::vector<std::vector<std::int64_t>> kernel) {
  return CanonicalSymbol(torsion, degree, std::move(kernel));
}

}  // namespace detail

inline CanonicalSymbol canonicalize(const SymbolPair& p, std::int64_t torsionBound) {
  if (torsionBound < 1) throw InputError("canonicalize: torsion bound must be >= 1");
  if (torsionBound % p.group.exponent() != 0)
    throw InputError("canonicalize: torsion bound does not annihilate the group");
  for (const GroupElement& x : p.seq) p.group.requireElement(x);
  if (!quotientByElements(p.group, p.seq).group().isTrivial())
    throw InputError("canonicalize: sequence does not generate the group");
  if (p.seq.empty()) return CanonicalSymbol(torsionBound, 0, {});
  ResidueMatrix h = detail::minimizeOverPermutations(detail::kernelLattice(p, torsionBound));
  return CanonicalSymbol(torsionBound, p.seq.size(), h.rowList());
}

// Appends a zero weight: degree rises by one, group unchanged.
inline CanonicalSymbol tShift(const CanonicalSymbol& s) {
  SymbolPair p = s.decode();
  p.seq.push_back(p.group.zero());
  return canonicalize(p, s.torsionBound());
}

// Class of a faithful diagonal representation given by its weight sequence on
// the character group.  Rejects non-generating weights (a non-faithful
// representation).
inline CanonicalSymbol weightsToSymbol(const FinAbGroup& dualGroup,
                                       const std::vector<GroupElement>& weights,
                                       std::int64_t torsionBound) {
  return canonicalize(SymbolPair{dualGroup, weights}, torsionBound);
}

// Re-canonicalize at another torsion bound annihilating the group (the split
// inclusion when the bound grows).
inline CanonicalSymbol withTorsionBound(const CanonicalSymbol& s, std::int64_t e) {
  return canonicalize(s.decode(), e);
}

// --- textual notation -------------------------------------------------------

namespace detail {

inline void skipSpace(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline std::int64_t parseInt(const std::string& s, std::size_t& i) {
  skipSpace(s, i);
  std::size_t start = i;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i == start) throw InputError("symbol notation: expected integer at position " + std::to_string(i));
  return std::stoll(s.substr(start, i - start));
}

}  // namespace detail

// Parses "[d1,d2,...;(x,..),(x,..),...]".  Factor lists need not be in
// invariant-factor form; they are normalized and the coordinates mapped
// along.  "(0)" and "()" both denote the zero element of the trivial group.
inline SymbolPair parseSymbolPair(const std::string& text) {
  std::size_t i = 0;
  detail::skipSpace(text, i);
  if (i >= text.size() || text[i] != '[') throw InputError("symbol notation: expected '['");
  ++i;
  std::vector<std::int64_t> ds;
  detail::skipSpace(text, i);
  while (i < text.size() && text[i] != ';') {
    ds.push_back(detail::parseInt(text, i));
    detail::skipSpace(text, i);
    if (i < text.size() && text[i] == ',') {
      ++i;
    } else if (i >= text.size() || text[i] != ';') {
      throw InputError("symbol notation: expected ',' or ';' in factor list");
    }
  }
  if (i >= text.size() || text[i] != ';') throw InputError("symbol notation: expected ';'");
  ++i;
  std::vector<std::vector<std::int64_t>> elems;
  detail::skipSpace(text, i);
  bool expectSeparator = false;
  while (i < text.size() && text[i] != ']') {
    if (expectSeparator) {
      if (text[i] != ',') throw InputError("symbol notation: expected ',' between elements");
      ++i;
      detail::skipSpace(text, i);
      expectSeparator = false;
      continue;
    }
    if (text[i] != '(') throw InputError("symbol notation: expected '('");
    expectSeparator = true;
    ++i;
    std::vector<std::int64_t> coords;
    detail::skipSpace(text, i);
    while (i < text.size() && text[i] != ')') {
      coords.push_back(detail::parseInt(text, i));
      detail::skipSpace(text, i);
      if (i < text.size() && text[i] == ',') {
        ++i;
        detail::skipSpace(text, i);
      } else if (i >= text.size() || text[i] != ')') {
        throw InputError("symbol notation: expected ',' or ')' in element");
      }
    }
    if (i >= text.size()) throw InputError("symbol notation: unterminated element");
    ++i;  // ')'
    elems.push_back(std::move(coords));
    detail::skipSpace(text, i);
  }
  if (i >= text.size() || text[i] != ']') throw InputError("symbol notation: expected ']'");

  auto [group, images] = normalizedDirectSum(ds);
  SymbolPair out;
  out.group = group;
  for (auto& coords : elems) {
    if (group.isTrivial()) {
      // accept "()" and "(0)" slots
      for (std::int64_t c : coords)
        if (c != 0) throw InputError("symbol notation: nonzero coordinate in trivial group");
      out.seq.push_back(group.zero());
      continue;
    }
    if (coords.size() != ds.size())
      throw InputError("symbol notation: element arity does not match factor list");
    GroupElement x = group.zero();
    for (std::size_t k = 0; k < coords.size(); ++k)
      x = group.add(x, group.scaled(images[k], coords[k]));
    out.seq.push_back(std::move(x));
  }
  return out;
}

inline CanonicalSymbol parseSymbol(const std::string& text, std::int64_t torsionBound) {
  return canonicalize(parseSymbolPair(text), torsionBound);
}

}  // namespace birsym
