#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

#include "birsym/errors.hpp"
#include "birsym/formal_sum.hpp"
#include "birsym/int_matrix.hpp"
#include "birsym/residue_matrix.hpp"
#include "birsym/symbol.hpp"

namespace birsym {

struct EnumerationLimits {
  std::size_t degreeCap = 4;
  std::size_t submoduleCap = 100000;
};

namespace detail {

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// All submodules of (Z/e)^n as Howell forms, found by closing {0} under
// joins with cyclic generators.  Only vectors whose leading entry divides e
// are used as join candidates; every cyclic submodule has such a generator.
inline std::vector<ResidueMatrix> allSubmodules(std::size_t n, std::int64_t e, std::size_t cap) {
  std::vector<std::vector<std::int64_t>> candidates;
  {
    std::vector<std::int64_t> v(n, 0);
    for (;;) {
      std::size_t i = n;
      while (i > 0) {
        --i;
        if (++v[i] < e) break;
        v[i] = 0;
        if (i == 0) goto done;
      }
      if (n == 0) break;
      std::size_t lead = 0;
      while (lead < n && v[lead] == 0) ++lead;
      if (lead < n && e % v[lead] == 0) candidates.push_back(v);
    }
  done:;
  }

  std::vector<ResidueMatrix> out;
  std::unordered_set<std::vector<std::int64_t>, VecHash> seen;
  std::deque<std::size_t> queue;
  ResidueMatrix zero = howellForm(ResidueMatrix(e, 0, n));
  seen.insert(flattenPadded(zero));
  out.push_back(zero);
  queue.push_back(0);
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    const ResidueMatrix cur = out[idx];  // copy: out may grow below
    for (const auto& v : candidates) {
      if (howellSpanContains(cur, v)) continue;
      std::vector<std::vector<std::int64_t>> rows = cur.rowList();
      rows.push_back(v);
      ResidueMatrix joined = howellForm(ResidueMatrix::fromRows(e, rows, n));
      std::vector<std::int64_t> key = flattenPadded(joined);
      if (seen.insert(std::move(key)).second) {
        if (out.size() >= cap) throw ResourceError("submodule enumeration exceeded the configured cap");
        out.push_back(joined);
        queue.push_back(out.size() - 1);
      }
    }
  }
  return out;
}

}  // namespace detail

namespace detail {

inline std::vector<CanonicalSymbol> canonicalSymbolsFromSubmodules(const std::vector<ResidueMatrix>& subs,
                                                                   std::size_t degree,
                                                                   std::int64_t torsion) {
  std::unordered_set<std::vector<std::int64_t>, VecHash> seen;
  std::vector<CanonicalSymbol> out;
  for (const ResidueMatrix& h : subs) {
    ResidueMatrix m = minimizeOverPermutations(h);
    std::vector<std::int64_t> key = flattenPadded(m);
    if (seen.insert(std::move(key)).second)
      out.push_back(symbolFromCanonicalKernel(torsion, degree, m.rowList()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// One canonical symbol per equivalence class of degree n, torsion bound e,
// in increasing canonical-kernel order.  Complete: every submodule of
// (Z/e)^n is reached.
inline std::vector<CanonicalSymbol> enumerateSymbols(std::size_t degree, std::int64_t torsion,
                                                     const EnumerationLimits& limits = {}) {
  if (torsion < 1) throw InputError("enumerateSymbols: torsion bound must be >= 1");
  if (degree > limits.degreeCap) throw ResourceError("enumerateSymbols: degree above configured cap");
  std::vector<ResidueMatrix> subs = detail::allSubmodules(degree, torsion, limits.submoduleCap);
  return detail::canonicalSymbolsFromSubmodules(subs, degree, torsion);
}

// --- blow-up relations -------------------------------------------------------

namespace detail {

// Quotient data for one index set I: the subgroup <a_i - a_{i0}> does not
// depend on i0, so the realization is always built from i0 = min I.
struct BlowupTermContext {
  QuotientMap q;
  std::vector<std::size_t> indexSet;  // 0-based, sorted
  std::size_t j = 0;
};

inline QuotientMap blowupQuotient(const FinAbGroup& a, const std::vector<GroupElement>& seq,
                                  const std::vector<std::size_t>& indexSet) {
  std::vector<GroupElement> gens;
  gens.reserve(indexSet.size());
  std::size_t base = indexSet.front();
  for (std::size_t i : indexSet) gens.push_back(a.sub(seq[i], seq[base]));
  return quotientByElements(a, gens);
}

}  // namespace detail

// The degree-(m - |I| + 1) sequence of the I-term for a chosen i0, over the
// fixed realization of A/<a_i - a_{i0}>.  Identical for every i0 in I.
inline std::pair<FinAbGroup, std::vector<GroupElement>> blowupTermRaw(
    const FinAbGroup& a, const std::vector<GroupElement>& seq, const std::vector<std::size_t>& indexSet,
    std::size_t i0, std::size_t j) {
  if (j < 2 || j > seq.size()) throw InputError("blowup term: j out of range");
  if (indexSet.empty() || indexSet.back() >= j) throw InputError("blowup term: index set not within 1..j");
  if (std::find(indexSet.begin(), indexSet.end(), i0) == indexSet.end())
    throw InputError("blowup term: i0 not in the index set");
  QuotientMap q = detail::blowupQuotient(a, seq, indexSet);
  const FinAbGroup& quot = q.group();
  std::vector<GroupElement> out;
  out.reserve(1 + (j - indexSet.size()) + (seq.size() - j));
  GroupElement pivotImage = q.project(seq[i0]);
  out.push_back(pivotImage);
  for (std::size_t i = 0; i < j; ++i) {
    if (std::find(indexSet.begin(), indexSet.end(), i) != indexSet.end()) continue;
    out.push_back(quot.sub(q.project(seq[i]), pivotImage));
  }
  for (std::size_t i = j; i < seq.size(); ++i) out.push_back(q.project(seq[i]));
  return {quot, std::move(out)};
}

// Relator of the blow-up relation for a pair (A, S) at level j, as a degree
// |S| formal sum: [A,S] minus the signed sum over nonempty I within the
// first j entries, each term t^{|I|-1}-padded.
inline FormalSum blowupRelationForPair(const FinAbGroup& a, const std::vector<GroupElement>& seq,
                                       std::size_t j, std::int64_t torsion) {
  if (j < 2 || j > seq.size()) throw InputError("blowupRelation: j out of range");
  FormalSum out = FormalSum::single(canonicalize(SymbolPair{a, seq}, torsion), 1);
  for (std::uint32_t mask = 1; mask < (1u << j); ++mask) {
    std::vector<std::size_t> indexSet;
    for (std::size_t i = 0; i < j; ++i)
      if (mask & (1u << i)) indexSet.push_back(i);
    auto [quot, termSeq] = blowupTermRaw(a, seq, indexSet, indexSet.front(), j);
    for (std::size_t pad = 1; pad < indexSet.size(); ++pad) termSeq.push_back(quot.zero());
    CanonicalSymbol term = canonicalize(SymbolPair{quot, std::move(termSeq)}, torsion);
    std::int64_t sign = indexSet.size() % 2 == 1 ? 1 : -1;  // (-1)^(|I|-1)
    out.add(term, -sign);
  }
  return out;
}

inline FormalSum blowupRelation(const CanonicalSymbol& s, std::size_t j) {
  SymbolPair p = s.decode();
  return blowupRelationForPair(p.group, p.seq, j, s.torsionBound());
}

// --- split-symbol submodule generators ---------------------------------------

// Degree-n classes of direct sums of cyclic groups with one generator per
// factor, zero-padded to degree n: one per multiset of divisors >= 2 of e
// of size at most n, deduplicated after canonicalization.
inline std::vector<CanonicalSymbol> splitSymbols(std::size_t degree, std::int64_t torsion) {
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 2; d <= torsion; ++d)
    if (torsion % d == 0) divisors.push_back(d);
  std::vector<CanonicalSymbol> out;
  std::vector<std::int64_t> multiset;
  auto emit = [&]() {
    auto [group, gens] = normalizedDirectSum(multiset);
    std::vector<GroupElement> seq = gens;
    while (seq.size() < degree) seq.push_back(group.zero());
    out.push_back(canonicalize(SymbolPair{group, std::move(seq)}, torsion));
  };
  // multisets of size r <= degree, nondecreasing
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t left) {
    emit();
    if (left == 0) return;
    for (std::size_t k = from; k < divisors.size(); ++k) {
      multiset.push_back(divisors[k]);
      rec(k, left - 1);
      multiset.pop_back();
    }
  };
  rec(0, degree);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --- graded pieces ------------------------------------------------------------

enum class RelationDepth { firstLevelOnly, all };

// One graded piece with its presentation and the reduction context for
// coordinate and order queries.
struct GradedPiece {
  std::int64_t torsion = 1;
  std::size_t degree = 0;
  bool modSplit = false;
  std::vector<CanonicalSymbol> basis;
  IntMatrix relations;
  AbGroupInvariants invariants;
  std::vector<mpz_class> diag;  // SNF diagonal of the relation matrix
  IntMatrix colTransform;       // SNF V

  std::size_t indexOf(const CanonicalSymbol& s) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), s);
    if (it == basis.end() || !(*it == s)) throw InputError("symbol not in this graded piece");
    return static_cast<std::size_t>(it - basis.begin());
  }

  // Moduli of the reduced coordinate tuple, aligned with reduce(): a torsion
  // coordinate carries its invariant factor, a free coordinate carries 0.
  std::vector<mpz_class> coordinateModuli() const {
    std::vector<mpz_class> out;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      mpz_class d = j < diag.size() ? diag[j] : mpz_class(0);
      if (d == 1) continue;
      out.push_back(d);
    }
    return out;
  }

  // Coordinates of a class in the presented group: entries mod d on torsion
  // coordinates, free integer entries elsewhere.  Additive in the class.
  std::vector<mpz_class> reduce(const FormalSum& x) const {
    std::vector<mpz_class> c(basis.size());
    for (const auto& [s, k] : x.terms()) c[indexOf(s)] = k;
    std::vector<mpz_class> w(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (c[i] != 0) w[j] += c[i] * colTransform(i, j);
    std::vector<mpz_class> out;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      mpz_class d = j < diag.size() ? diag[j] : mpz_class(0);
      if (d == 1) continue;
      if (d == 0) {
        out.push_back(w[j]);
      } else {
        mpz_class r = w[j] % d;
        if (r < 0) r += d;
        out.push_back(r);
      }
    }
    return out;
  }

  // Order of the class: smallest k >= 1 killing it, nullopt when infinite.
  std::optional<mpz_class> order(const FormalSum& x) const {
    std::vector<mpz_class> c(basis.size());
    for (const auto& [s, k] : x.terms()) c[indexOf(s)] = k;
    std::vector<mpz_class> w(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (c[i] != 0) w[j] += c[i] * colTransform(i, j);
    mpz_class ord = 1;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      mpz_class d = j < diag.size() ? diag[j] : mpz_class(0);
      if (d == 0) {
        if (w[j] != 0) return std::nullopt;
      } else {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), w[j].get_mpz_t());
        mpz_class need = d / g;
        mpz_lcm(ord.get_mpz_t(), ord.get_mpz_t(), need.get_mpz_t());
      }
    }
    return ord;
  }
};

// Presents the degree-n, e-torsion graded piece.  The module's relations are
// indexed by pairs, and the blow-up relator is sensitive to the ordering of
// the sequence across the level-j boundary, so one relator per ordered kernel
// lattice is stacked for every level 2 <= j <= n (relators of lower-degree
// symbols are t-shifts of these, so full-degree rows suffice), plus one row
// per split-symbol generator when modSplit.  Duplicate and zero rows are
// pruned deterministically.
inline GradedPiece computeGradedPiece(std::size_t degree, std::int64_t torsion, bool modSplit,
                                      const EnumerationLimits& limits = {},
                                      RelationDepth depth = RelationDepth::all) {
  if (torsion < 1) throw InputError("computeGradedPiece: torsion bound must be >= 1");
  if (degree > limits.degreeCap) throw ResourceError("computeGradedPiece: degree above configured cap");
  GradedPiece out;
  out.torsion = torsion;
  out.degree = degree;
  out.modSplit = modSplit;
  std::vector<ResidueMatrix> subs = detail::allSubmodules(degree, torsion, limits.submoduleCap);
  out.basis = detail::canonicalSymbolsFromSubmodules(subs, degree, torsion);
  const std::size_t cols = out.basis.size();
  out.relations = IntMatrix(0, cols);

  std::unordered_set<std::vector<std::int64_t>, detail::VecHash> seenRows;
  std::vector<std::int64_t> row(cols);
  auto stack = [&](const FormalSum& relator) {
    if (relator.empty()) return;
    std::fill(row.begin(), row.end(), 0);
    for (const auto& [s, k] : relator.terms()) row[out.indexOf(s)] = k;
    if (!seenRows.insert(row).second) return;
    std::vector<mpz_class> mrow(cols);
    for (std::size_t j = 0; j < cols; ++j) mrow[j] = row[j];
    out.relations.appendRow(mrow);
  };
  const std::size_t jMax = depth == RelationDepth::firstLevelOnly ? std::min<std::size_t>(2, degree) : degree;
  for (const ResidueMatrix& sub : subs) {
    SymbolPair p = detail::decodeKernel(torsion, degree, sub.rowList());
    for (std::size_t j = 2; j <= jMax; ++j) stack(blowupRelationForPair(p.group, p.seq, j, torsion));
  }
  if (modSplit)
    for (const CanonicalSymbol& s : splitSymbols(degree, torsion)) stack(FormalSum::single(s, 1));

  detail::SnfCore core = detail::snfCore(out.relations, false, true);
  out.diag = core.diag;
  out.colTransform = core.v;
  out.invariants.free_rank = cols - core.rank;
  for (const mpz_class& d : core.diag)
    if (d > 1) out.invariants.torsion.push_back(d);
  return out;
}

// Diagnostic for the open question whether the first-level relations already
// generate the rest: computes both quotients, asserts nothing.
struct RelationDepthComparison {
  AbGroupInvariants firstLevelOnly;
  AbGroupInvariants all;
  bool equal = false;
};

inline RelationDepthComparison relationDepthComparison(std::size_t degree, std::int64_t torsion,
                                                       bool modSplit,
                                                       const EnumerationLimits& limits = {}) {
  RelationDepthComparison out;
  out.firstLevelOnly =
      computeGradedPiece(degree, torsion, modSplit, limits, RelationDepth::firstLevelOnly).invariants;
  out.all = computeGradedPiece(degree, torsion, modSplit, limits, RelationDepth::all).invariants;
  out.equal = out.firstLevelOnly == out.all;
  return out;
}

// --- splittings ----------------------------------------------------------------

// Retraction onto the p-primary part: the group becomes A(p), the sequence
// maps componentwise, and the torsion bound becomes the p-part of e.
inline CanonicalSymbol primaryProjection(const CanonicalSymbol& s, std::int64_t p) {
  if (p < 2) throw InputError("primaryProjection: p must be >= 2");
  SymbolPair pair = s.decode();
  std::vector<std::int64_t> pFactors;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pair.group.factors().size(); ++i) {
    std::int64_t d = pair.group.factors()[i];
    std::int64_t q = 1;
    while (d % p == 0) {
      d /= p;
      q *= p;
    }
    if (q >= 2) {
      pFactors.push_back(q);
      keep.push_back(i);
    }
  }
  FinAbGroup target(pFactors);
  std::vector<GroupElement> seq;
  seq.reserve(pair.seq.size());
  for (const GroupElement& x : pair.seq) {
    std::vector<std::int64_t> c(keep.size());
    for (std::size_t t = 0; t < keep.size(); ++t) c[t] = x.c[keep[t]] % pFactors[t];
    seq.push_back(GroupElement{std::move(c)});
  }
  std::int64_t e = s.torsionBound();
  std::int64_t ePart = 1;
  while (e % p == 0) {
    e /= p;
    ePart *= p;
  }
  return canonicalize(SymbolPair{target, std::move(seq)}, ePart);
}

// Retraction of a (possibly non-generating) formal pair to torsion bound e2:
// the group becomes <images of S in A/e2A>, which is A/e2A itself whenever S
// generates A.
inline CanonicalSymbol retractPair(const FinAbGroup& a, const std::vector<GroupElement>& seq,
                                   std::int64_t e2) {
  if (e2 < 1) throw InputError("retractPair: torsion bound must be >= 1");
  std::vector<GroupElement> scaled;
  scaled.reserve(a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) {
    GroupElement g = a.zero();
    g.c[i] = e2 % a.factors()[i];
    scaled.push_back(a.reduce(std::move(g.c)));
  }
  QuotientMap q = quotientByElements(a, scaled);
  std::vector<GroupElement> images;
  images.reserve(seq.size());
  for (const GroupElement& x : seq) images.push_back(q.project(x));
  auto [sub, reco] = subgroupGenerated(q.group(), images);
  return canonicalize(SymbolPair{sub, reco}, e2);
}

// Retraction within the torsion filtration: [A,S] -> [A/e2A, S].
inline CanonicalSymbol torsionRetraction(const CanonicalSymbol& s, std::int64_t e2) {
  if (e2 < 1 || s.torsionBound() % e2 != 0)
    throw InputError("torsionRetraction: target bound must divide the current one");
  SymbolPair p = s.decode();
  return retractPair(p.group, p.seq, e2);
}

}  // namespace birsym
