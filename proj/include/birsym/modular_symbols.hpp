#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birsym/abelian_invariants.hpp"
#include "birsym/errors.hpp"
#include "birsym/graded_piece.hpp"
#include "birsym/int_matrix.hpp"

namespace birsym {

// Labeled generators plus integer relation rows.
struct Presentation {
  std::vector<std::string> generators;
  IntMatrix relations;

  AbGroupInvariants invariants() const { return cokernelInvariants(relations); }
};

namespace detail {

inline bool isPrime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void requirePrimeAtLeast5(std::int64_t p) {
  if (!isPrime(p) || p < 5) throw InputError("expected a prime p >= 5");
}

// positive representative in [1, p-1]
inline std::int64_t modPos(std::int64_t x, std::int64_t p) {
  std::int64_t r = x % p;
  if (r < 0) r += p;
  return r;
}

}  // namespace detail

// Multiplicative inverse as the positive integer less than p.
inline std::int64_t inverseMod(std::int64_t p, std::int64_t a) {
  if (a % p == 0) throw InputError("inverseMod: not invertible");
  std::int64_t t0 = 0, t1 = 1, r0 = p, r1 = detail::modPos(a, p);
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t2 = t0 - q * t1, r2 = r0 - q * r1;
    t0 = t1;
    t1 = t2;
    r0 = r1;
    r1 = r2;
  }
  return detail::modPos(t0, p);
}

// Genus of the modular curve of prime level p >= 5.
inline std::int64_t genusX0(std::int64_t p) {
  detail::requirePrimeAtLeast5(p);
  std::int64_t base = p / 12;
  if (p % 12 == 1) return base - 1;
  if (p % 12 == 11) return base + 1;
  return base;
}

// a^{-1}, a' = -a^{-1}-1 and a'' = -(a+1)^{-1}, all reduced to [1, p-1].
// a' and a'' are only defined away from a in {p-2, (p-1)/2}, where they would
// leave the generator index range.
struct ModularTriple {
  std::int64_t inverse, aPrime, aDoublePrime;
};

inline ModularTriple modularArithmetic(std::int64_t p, std::int64_t a) {
  detail::requirePrimeAtLeast5(p);
  if (a < 2 || a > p - 2) throw InputError("modularArithmetic: index out of range");
  if (a == p - 2 || a == (p - 1) / 2)
    throw InputError("modularArithmetic: a' and a'' undefined for this index");
  ModularTriple out;
  out.inverse = inverseMod(p, a);
  out.aPrime = detail::modPos(-out.inverse - 1, p);
  out.aDoublePrime = detail::modPos(-inverseMod(p, a + 1), p);
  return out;
}

// First homology of the level-p orbifold modular curve, presented on the
// generators {0, 1/a} for 2 <= a <= p-2.
struct OrbifoldHomology {
  Presentation presentation;
  AbGroupInvariants invariants;
};

namespace detail {

inline std::size_t genIndex(std::int64_t a, std::int64_t p) {
  if (a < 2 || a > p - 2) throw InputError("modular symbol generator index escaped [2, p-2]");
  return static_cast<std::size_t>(a - 2);
}

inline Presentation orbifoldHomologyPresentation(std::int64_t p) {
  requirePrimeAtLeast5(p);
  const std::size_t n = static_cast<std::size_t>(p - 3);
  Presentation pres;
  pres.generators.reserve(n);
  for (std::int64_t a = 2; a <= p - 2; ++a) pres.generators.push_back("{0,1/" + std::to_string(a) + "}");
  IntMatrix rel(0, n);
  std::vector<mpz_class> row(n);
  auto stack = [&](const std::vector<std::pair<std::int64_t, std::int64_t>>& entries) {
    std::fill(row.begin(), row.end(), mpz_class(0));
    for (auto [a, c] : entries) row[genIndex(a, p)] += c;
    rel.appendRow(row);
  };
  // {0,1/a} + {0,1/(p - a^{-1})} = 0, one instance per a
  for (std::int64_t a = 2; a <= p - 2; ++a) stack({{a, 1}, {p - inverseMod(p, a), 1}});
  // {0,1/a} + {0,1/a'} + {0,1/a''} = 0 away from the excluded indices
  for (std::int64_t a = 2; a <= p - 2; ++a) {
    if (a == p - 2 || a == (p - 1) / 2) continue;
    ModularTriple t = modularArithmetic(p, a);
    stack({{a, 1}, {t.aPrime, 1}, {t.aDoublePrime, 1}});
  }
  // {0,1/((p-1)/2)} + {0,1/(p-2)} = 0
  stack({{(p - 1) / 2, 1}, {p - 2, 1}});
  pres.relations = rel;
  return pres;
}

}  // namespace detail

inline OrbifoldHomology h1OrbPresentation(std::int64_t p) {
  OrbifoldHomology out;
  out.presentation = detail::orbifoldHomologyPresentation(p);
  out.invariants = out.presentation.invariants();
  return out;
}

// Quotient of the orbifold homology by cycle-plus-conjugate elements;
// conjugation sends {0,1/a} to {0,1/(p-a)}.
inline AbGroupInvariants conjugationQuotient(std::int64_t p) {
  Presentation pres = detail::orbifoldHomologyPresentation(p);
  const std::size_t n = pres.generators.size();
  std::vector<mpz_class> row(n);
  for (std::int64_t a = 2; a <= p - 2; ++a) {
    std::fill(row.begin(), row.end(), mpz_class(0));
    row[detail::genIndex(a, p)] += 1;
    row[detail::genIndex(p - a, p)] += 1;
    pres.relations.appendRow(row);
  }
  return pres.invariants();
}

// Direct presentation of the degree-2 split quotient at prime level, on the
// generators [C_p,(1,a)] for 2 <= a <= p-2, with the four relation families:
// inversion symmetry, 2[C_p,(1,2)] = 0, the reflection of the boundary
// generator, and the three-term recursion.
inline Presentation symbolPresentation(std::int64_t p) {
  detail::requirePrimeAtLeast5(p);
  const std::size_t n = static_cast<std::size_t>(p - 3);
  Presentation pres;
  pres.generators.reserve(n);
  for (std::int64_t a = 2; a <= p - 2; ++a)
    pres.generators.push_back("[" + std::to_string(p) + ";(1),(" + std::to_string(a) + ")]");
  IntMatrix rel(0, n);
  std::vector<mpz_class> row(n);
  auto stack = [&](const std::vector<std::pair<std::int64_t, std::int64_t>>& entries) {
    std::fill(row.begin(), row.end(), mpz_class(0));
    for (auto [a, c] : entries) row[detail::genIndex(a, p)] += c;
    rel.appendRow(row);
  };
  // [C_p,(1,a)] = [C_p,(1,a^{-1})]
  for (std::int64_t a = 2; a <= p - 2; ++a) stack({{a, 1}, {inverseMod(p, a), -1}});
  // 2[C_p,(1,2)] = 0
  stack({{2, 2}});
  // [C_p,(1,2)] = -[C_p,(1,p-2)]
  stack({{2, 1}, {p - 2, 1}});
  // [C_p,(1,a)] = [C_p,(1,a-1)] + [C_p,(1,a^{-1}-1)] for a in
  // {3,...,(p-1)/2} u {(p+3)/2,...,p-2}; at the excluded midpoint the
  // inverse-shift index would leave the generator range.
  for (std::int64_t a = 3; a <= p - 2; ++a) {
    if (a == (p + 1) / 2) continue;
    stack({{a, 1}, {a - 1, -1}, {inverseMod(p, a) - 1, -1}});
  }
  pres.relations = rel;
  return pres;
}

inline AbGroupInvariants symbolPresentationInvariants(std::int64_t p) {
  return symbolPresentation(p).invariants();
}

// Closed form of the degree-2 split quotient at prime level.
inline AbGroupInvariants closedFormInvariants(std::int64_t p) {
  detail::requirePrimeAtLeast5(p);
  AbGroupInvariants out;
  out.free_rank = static_cast<std::size_t>(genusX0(p));
  if (p % 4 == 1) out.torsion.push_back(2);
  return out;
}

// Multi-way consistency check at one prime: the full relation-matrix
// quotient (optional, it is the expensive route), the direct presentation,
// the conjugation quotient of the orbifold homology, and the closed form.
struct CrossCheckRow {
  std::int64_t p = 0;
  std::int64_t genus = 0;
  AbGroupInvariants h1orb;
  AbGroupInvariants conjugation;
  AbGroupInvariants presentation;
  AbGroupInvariants closedForm;
  std::optional<AbGroupInvariants> gradedPiece;
  bool match = false;
};

inline CrossCheckRow crossCheck(std::int64_t p, bool includeGradedPiece = true,
                                const EnumerationLimits& limits = {}) {
  detail::requirePrimeAtLeast5(p);
  CrossCheckRow out;
  out.p = p;
  out.genus = genusX0(p);
  out.h1orb = h1OrbPresentation(p).invariants;
  out.conjugation = conjugationQuotient(p);
  out.presentation = symbolPresentationInvariants(p);
  out.closedForm = closedFormInvariants(p);
  out.match = out.conjugation == out.closedForm && out.presentation == out.closedForm;
  if (includeGradedPiece) {
    out.gradedPiece = computeGradedPiece(2, p, true, limits).invariants;
    out.match = out.match && *out.gradedPiece == out.closedForm;
  }
  return out;
}

}  // namespace birsym
