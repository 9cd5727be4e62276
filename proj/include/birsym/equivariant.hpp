#pragma once

#include <cstdint>
#include <vector>

#include "birsym/errors.hpp"
#include "birsym/formal_sum.hpp"
#include "birsym/graded_piece.hpp"
#include "birsym/symbol.hpp"

namespace birsym {

// Fixed-locus symbol with trivial Galois data: a character group together
// with a sequence of nonzero weights generating it (a faithful normal
// representation with trivial invariants).
struct FixedGroupSymbol {
  FinAbGroup group;
  std::vector<GroupElement> weights;

  FixedGroupSymbol(FinAbGroup g, std::vector<GroupElement> w) : group(std::move(g)), weights(std::move(w)) {
    for (const GroupElement& x : weights) {
      group.requireElement(x);
      if (group.isZero(x)) throw InputError("FixedGroupSymbol: zero weight");
    }
    if (!quotientByElements(group, weights).group().isTrivial())
      throw InputError("FixedGroupSymbol: weights do not generate the group");
  }
};

// A saturated pair (I, C_I): C_I = a_{i0} + <a_i - a_{i0}>_{i in I} and I is
// exactly the set of indices at most j whose weight lies in C_I.
struct SaturatedCoset {
  std::vector<std::size_t> indices;       // 0-based, sorted
  GroupElement cosetRepresentative;       // a_{min I}
  std::vector<std::int64_t> subgroupFactors;  // invariant factors of <a_i - a_{i0}>
};

// One term of the coset-indexed expansion: the quotient character group with
// its weight sequence, the transcendence bump |I| - 1, and the witnessing
// saturated pair.  Terms whose sequence contains zero are omitted from the
// expansion sum and carry the flag instead.
struct ExpansionTerm {
  FinAbGroup quotient;
  std::vector<GroupElement> sequence;
  std::size_t bump = 0;
  SaturatedCoset witness;
  bool omitted = false;
};

namespace detail {

inline std::vector<std::int64_t> subgroupChain(const FinAbGroup& a, const std::vector<GroupElement>& gens) {
  auto [sub, images] = subgroupGenerated(a, gens);
  return sub.factors();
}

}  // namespace detail

// All saturated pairs (I, C_I) for levels 1..j of the weight sequence.
inline std::vector<SaturatedCoset> saturatedSubsets(const FixedGroupSymbol& s, std::size_t j) {
  if (j < 2 || j > s.weights.size()) throw InputError("saturatedSubsets: j out of range");
  const FinAbGroup& g = s.group;
  std::vector<SaturatedCoset> out;
  for (std::uint32_t mask = 1; mask < (1u << j); ++mask) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < j; ++i)
      if (mask & (1u << i)) indices.push_back(i);
    std::size_t i0 = indices.front();
    std::vector<GroupElement> gens;
    for (std::size_t i : indices) gens.push_back(g.sub(s.weights[i], s.weights[i0]));
    QuotientMap q = quotientByElements(g, gens);
    // coset membership: a_i in C_I iff a_i - a_{i0} lies in the subgroup
    bool saturated = true;
    for (std::size_t i = 0; i < j && saturated; ++i) {
      bool member = q.group().isZero(q.project(g.sub(s.weights[i], s.weights[i0])));
      bool inSet = std::find(indices.begin(), indices.end(), i) != indices.end();
      saturated = member == inSet;
    }
    if (!saturated) continue;
    out.push_back(SaturatedCoset{indices, s.weights[i0], detail::subgroupChain(g, gens)});
  }
  return out;
}

// Expansion of the symbol at level j over its saturated pairs.  Each term's
// sequence is (a_{i0}-bar, (a_i - a_{i0})-bar for i <= j outside I, then the
// tail), independent of the choice of i0; terms containing a zero weight are
// omitted from the returned sum.  With includeOmitted the omitted records are
// kept, flagged, for inspection.
inline std::vector<ExpansionTerm> cosetExpansion(const FixedGroupSymbol& s, std::size_t j,
                                                 bool includeOmitted = false) {
  if (j < 2 || j > s.weights.size()) throw InputError("cosetExpansion: j out of range");
  const FinAbGroup& g = s.group;
  std::vector<ExpansionTerm> out;
  for (const SaturatedCoset& sc : saturatedSubsets(s, j)) {
    std::size_t i0 = sc.indices.front();
    std::vector<GroupElement> gens;
    for (std::size_t i : sc.indices) gens.push_back(g.sub(s.weights[i], s.weights[i0]));
    QuotientMap q = quotientByElements(g, gens);
    ExpansionTerm term;
    term.quotient = q.group();
    term.bump = sc.indices.size() - 1;
    term.witness = sc;
    GroupElement pivotImage = q.project(s.weights[i0]);
    term.sequence.push_back(pivotImage);
    for (std::size_t i = 0; i < j; ++i) {
      if (std::find(sc.indices.begin(), sc.indices.end(), i) != sc.indices.end()) continue;
      term.sequence.push_back(term.quotient.sub(q.project(s.weights[i]), pivotImage));
    }
    for (std::size_t i = j; i < s.weights.size(); ++i) term.sequence.push_back(q.project(s.weights[i]));
    for (const GroupElement& x : term.sequence)
      if (term.quotient.isZero(x)) term.omitted = true;
    if (!term.omitted || includeOmitted) out.push_back(std::move(term));
  }
  return out;
}

// Difference between the coset-indexed expansion (unsigned, bumps converted
// to zero-weight padding) and the degree-preserving blow-up expansion with
// its (-t)^{|I|-1} coefficients, as a formal sum at the given torsion bound
// (the group exponent when 0).  Reported as a diagnostic; the two totals
// often differ by a multiple of a fully split symbol.
inline FormalSum expansionDifference(const FixedGroupSymbol& s, std::size_t j,
                                     std::int64_t torsionBound = 0) {
  const std::int64_t e = torsionBound > 0 ? torsionBound : s.group.exponent();
  FormalSum cosetTotal;
  for (const ExpansionTerm& term : cosetExpansion(s, j)) {
    std::vector<GroupElement> seq = term.sequence;
    for (std::size_t pad = 0; pad < term.bump; ++pad) seq.push_back(term.quotient.zero());
    cosetTotal.add(canonicalize(SymbolPair{term.quotient, std::move(seq)}, e), 1);
  }
  // the blow-up expansion is [A,S] minus its relator
  FormalSum relator = blowupRelationForPair(s.group, s.weights, j, e);
  FormalSum blowupTotal = FormalSum::single(canonicalize(SymbolPair{s.group, s.weights}, e), 1) - relator;
  return cosetTotal - blowupTotal;
}

}  // namespace birsym
