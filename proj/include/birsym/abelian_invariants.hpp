#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "birsym/errors.hpp"

namespace birsym {

// Isomorphism type of a finitely generated abelian group: free rank plus the
// invariant-factor chain d1 | d2 | ..., every di >= 2.  This is the output
// type of every cokernel/quotient computation in the library.
struct AbGroupInvariants {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;

  bool isTrivial() const { return free_rank == 0 && torsion.empty(); }

  bool operator==(const AbGroupInvariants& other) const {
    return free_rank == other.free_rank && torsion == other.torsion;
  }
  bool operator!=(const AbGroupInvariants& other) const { return !(*this == other); }

  // "0", "Z/2", "Z^3", "Z/2 + Z^2", ...
  std::string str() const {
    if (isTrivial()) return "0";
    std::string out;
    for (const mpz_class& d : torsion) {
      if (!out.empty()) out += " + ";
      out += "Z/" + d.get_str();
    }
    if (free_rank > 0) {
      if (!out.empty()) out += " + ";
      out += free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
    }
    return out;
  }

  // Invariants of the direct sum, with the torsion multiset renormalized to a
  // divisibility chain via gcd/lcm exchanges.
  static AbGroupInvariants directSum(const AbGroupInvariants& a, const AbGroupInvariants& b) {
    AbGroupInvariants out;
    out.free_rank = a.free_rank + b.free_rank;
    std::vector<mpz_class> ds = a.torsion;
    ds.insert(ds.end(), b.torsion.begin(), b.torsion.end());
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = i + 1; j < ds.size(); ++j) {
          mpz_class g, l;
          mpz_gcd(g.get_mpz_t(), ds[i].get_mpz_t(), ds[j].get_mpz_t());
          mpz_lcm(l.get_mpz_t(), ds[i].get_mpz_t(), ds[j].get_mpz_t());
          if (g != ds[i] || l != ds[j]) {
            ds[i] = g;
            ds[j] = l;
            changed = true;
          }
        }
      }
    }
    for (const mpz_class& d : ds)
      if (d > 1) out.torsion.push_back(d);
    return out;
  }
};

}  // namespace birsym
