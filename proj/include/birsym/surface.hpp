#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "birsym/errors.hpp"
#include "birsym/formal_sum.hpp"
#include "birsym/graded_piece.hpp"
#include "birsym/symbol.hpp"

namespace birsym {

// Isolated stacky point: character group of the stabilizer with the two
// normal weights.  Weights are nonzero and generate the group.
struct StackyPoint {
  FinAbGroup group;
  GroupElement w1, w2;
};

// Special point on a stacky curve: its own stabilizer data, with the second
// weight the one restricting to the curve direction.
struct SpecialPoint {
  FinAbGroup group;
  GroupElement transverse, along;
};

// Stacky curve: cyclic stabilizer character group generated by the normal
// weight, carrying its special points.
struct StackyCurve {
  FinAbGroup group;
  GroupElement weight;
  std::vector<SpecialPoint> special;
};

// Symbolic stratification of a rational orbifold surface: disjoint stacky
// curves, isolated stacky points off the curves, and a rational free part.
class SurfaceModel {
public:
  SurfaceModel(std::int64_t torsion, std::vector<StackyPoint> points, std::vector<StackyCurve> curves,
               std::int64_t freeBlowups = 0)
      : torsion_(torsion), points_(std::move(points)), curves_(std::move(curves)),
        freeBlowups_(freeBlowups) {
    validate();
  }

  static SurfaceModel free(std::int64_t torsion) { return SurfaceModel(torsion, {}, {}); }

  std::int64_t torsion() const { return torsion_; }
  const std::vector<StackyPoint>& points() const { return points_; }
  const std::vector<StackyCurve>& curves() const { return curves_; }
  std::int64_t freeBlowups() const { return freeBlowups_; }

  // The class in the degree-2 graded piece, with every rational stratum
  // collapsed to the base:
  //   (1 - m - c) t^2[0,()] + sum_curves (1 - n_i) t[A_i,(w_i)]
  //                         + sum_points [A_v, weights_v],
  // where m counts isolated points, c counts curves, n_i special points.
  FormalSum classOf() const {
    FormalSum out;
    CanonicalSymbol t2 = tShift(tShift(canonicalize(SymbolPair{FinAbGroup::trivial(), {}}, torsion_)));
    std::int64_t freeCoeff = 1 - static_cast<std::int64_t>(points_.size()) -
                             static_cast<std::int64_t>(curves_.size());
    out.add(t2, freeCoeff);
    for (const StackyCurve& c : curves_) {
      CanonicalSymbol curveSym = tShift(canonicalize(SymbolPair{c.group, {c.weight}}, torsion_));
      out.add(curveSym, 1 - static_cast<std::int64_t>(c.special.size()));
      for (const SpecialPoint& v : c.special)
        out.add(canonicalize(SymbolPair{v.group, {v.transverse, v.along}}, torsion_), 1);
    }
    for (const StackyPoint& pt : points_)
      out.add(canonicalize(SymbolPair{pt.group, {pt.w1, pt.w2}}, torsion_), 1);
    return out;
  }

  // Blow-up of an isolated stacky point with weights (a1, a2).  Equal
  // weights produce one stacky curve with no special points; otherwise the
  // two exceptional charts carry (a1, a2-a1) and (a1-a2, a2), sitting on an
  // exceptional curve stratum exactly when A/<a2-a1> is nontrivial.
  SurfaceModel blowupIsolatedPoint(std::size_t index) const {
    if (index >= points_.size()) throw InputError("blowupIsolatedPoint: no such point");
    StackyPoint pt = points_[index];
    std::vector<StackyPoint> newPoints = points_;
    newPoints.erase(newPoints.begin() + static_cast<std::ptrdiff_t>(index));
    std::vector<StackyCurve> newCurves = curves_;
    const FinAbGroup& a = pt.group;
    if (pt.w1 == pt.w2) {
      newCurves.push_back(StackyCurve{a, pt.w1, {}});
      return SurfaceModel(torsion_, std::move(newPoints), std::move(newCurves), freeBlowups_);
    }
    GroupElement d = a.sub(pt.w2, pt.w1);
    QuotientMap q = quotientByElements(a, {d});
    SpecialPoint p1{a, pt.w1, d};
    SpecialPoint p2{a, pt.w2, a.neg(d)};
    if (q.group().isTrivial()) {
      newPoints.push_back(StackyPoint{a, p1.transverse, p1.along});
      newPoints.push_back(StackyPoint{a, p2.along, p2.transverse});
    } else {
      StackyCurve exceptional{q.group(), q.project(pt.w1), {p1, p2}};
      newCurves.push_back(std::move(exceptional));
    }
    return SurfaceModel(torsion_, std::move(newPoints), std::move(newCurves), freeBlowups_);
  }

  // Blow-up of a non-special point of a stacky curve (A, w): adds the
  // isolated chart point (A, (w, -w)); the curve data is unchanged.  The
  // order-2 degenerate case w = -w is not supported.
  SurfaceModel blowupCurvePoint(std::size_t index) const {
    if (index >= curves_.size()) throw InputError("blowupCurvePoint: no such curve");
    const StackyCurve& c = curves_[index];
    GroupElement neg = c.group.neg(c.weight);
    if (neg == c.weight)
      throw InputError("blowupCurvePoint: order-2 weight is unsupported (equal chart weights)");
    std::vector<StackyPoint> newPoints = points_;
    newPoints.push_back(StackyPoint{c.group, c.weight, neg});
    return SurfaceModel(torsion_, std::move(newPoints), curves_, freeBlowups_);
  }

  // Blow-up of a free point: no stacky data changes, the class is unchanged.
  SurfaceModel blowupFreePoint() const {
    return SurfaceModel(torsion_, points_, curves_, freeBlowups_ + 1);
  }

  // Over torsion bound 5: parity of the number of isolated points whose
  // class is the (1,2)-class (unequal weights not summing to zero).  Equals
  // the unique 2-torsion coordinate of classOf.
  int parityInvariant() const {
    if (torsion_ != 5) throw InputError("parityInvariant: defined for torsion bound 5 only");
    FinAbGroup c5 = FinAbGroup::cyclic(5);
    CanonicalSymbol marker = canonicalize(SymbolPair{c5, {c5.reduce({1}), c5.reduce({2})}}, 5);
    int count = 0;
    for (const StackyPoint& pt : points_)
      if (canonicalize(SymbolPair{pt.group, {pt.w1, pt.w2}}, 5) == marker) ++count;
    return count % 2;
  }

private:
  void validate() const {
    if (torsion_ < 1) throw InputError("SurfaceModel: torsion bound must be >= 1");
    auto checkStratumPair = [&](const FinAbGroup& g, const GroupElement& x, const GroupElement& y) {
      if (g.isTrivial()) throw InputError("SurfaceModel: stacky stratum with trivial stabilizer");
      if (torsion_ % g.exponent() != 0) throw InputError("SurfaceModel: stabilizer not torsion-bounded");
      g.requireElement(x);
      g.requireElement(y);
      if (g.isZero(x) || g.isZero(y)) throw InputError("SurfaceModel: zero normal weight");
      if (!quotientByElements(g, {x, y}).group().isTrivial())
        throw InputError("SurfaceModel: point weights do not generate the stabilizer group");
    };
    for (const StackyPoint& pt : points_) checkStratumPair(pt.group, pt.w1, pt.w2);
    for (const StackyCurve& c : curves_) {
      if (c.group.isTrivial()) throw InputError("SurfaceModel: curve with trivial stabilizer");
      if (c.group.rank() != 1) throw InputError("SurfaceModel: curve stabilizer group must be cyclic");
      if (torsion_ % c.group.exponent() != 0) throw InputError("SurfaceModel: stabilizer not torsion-bounded");
      c.group.requireElement(c.weight);
      if (!quotientByElements(c.group, {c.weight}).group().isTrivial())
        throw InputError("SurfaceModel: curve weight does not generate the stabilizer group");
      CanonicalSymbol curveClass = canonicalize(SymbolPair{c.group, {c.weight}}, torsion_);
      for (const SpecialPoint& v : c.special) {
        checkStratumPair(v.group, v.transverse, v.along);
        // the along-weight cuts out the curve: the residual stabilizer with
        // its transverse weight must reproduce the curve stratum
        QuotientMap q = quotientByElements(v.group, {v.along});
        if (q.group().isTrivial())
          throw InputError("SurfaceModel: special point along-weight kills the whole stabilizer");
        GroupElement w = q.project(v.transverse);
        if (q.group().isZero(w))
          throw InputError("SurfaceModel: special point transverse weight dies on the curve");
        if (canonicalize(SymbolPair{q.group(), {w}}, torsion_) != curveClass)
          throw InputError("SurfaceModel: special point inconsistent with its curve stratum");
      }
    }
  }

  std::int64_t torsion_;
  std::vector<StackyPoint> points_;
  std::vector<StackyCurve> curves_;
  std::int64_t freeBlowups_;
};

// --- open complements of divisor arrangements --------------------------------

// One nonempty intersection stratum of the labeled divisors.
struct DivisorStratum {
  std::vector<std::size_t> divisors;  // sorted, 0-based indices
  std::string label;
  std::size_t dim = 0;
};

// Signed symbolic term of the inclusion-exclusion class of the complement.
struct ComplementTerm {
  std::string label;
  std::size_t projectivePower = 0;
  int sign = 1;
};

// Inclusion-exclusion expansion of the class of the complement of a simple
// normal crossing arrangement: the ambient class, then for each listed
// stratum D_I the term D_I x P^{|I|} with sign (-1)^{|I|}.  Requires the
// intersection data to be closed under meets (every nonempty sub-intersection
// listed) with strictly decreasing dimensions along inclusions.
inline std::vector<ComplementTerm> openComplementClass(const std::string& totalLabel, std::size_t totalDim,
                                                       const std::vector<DivisorStratum>& strata) {
  std::size_t divisorCount = 0;
  for (const DivisorStratum& s : strata) {
    if (s.divisors.empty()) throw InputError("openComplementClass: empty index set");
    for (std::size_t i = 0; i + 1 < s.divisors.size(); ++i)
      if (s.divisors[i] >= s.divisors[i + 1])
        throw InputError("openComplementClass: index sets must be sorted and duplicate-free");
    if (s.dim >= totalDim) throw InputError("openComplementClass: stratum dimension not below ambient");
    if (s.divisors.back() + 1 > divisorCount) divisorCount = s.divisors.back() + 1;
  }
  auto find = [&](const std::vector<std::size_t>& key) -> const DivisorStratum* {
    for (const DivisorStratum& s : strata)
      if (s.divisors == key) return &s;
    return nullptr;
  };
  // singleton divisors must be listed, listed sets are distinct, and the
  // data is downward closed with strictly decreasing dimensions
  for (std::size_t i = 0; i < divisorCount; ++i)
    if (!find({i})) throw InputError("openComplementClass: divisor " + std::to_string(i) + " not listed");
  for (std::size_t a = 0; a < strata.size(); ++a)
    for (std::size_t b = a + 1; b < strata.size(); ++b)
      if (strata[a].divisors == strata[b].divisors)
        throw InputError("openComplementClass: duplicate index set");
  for (const DivisorStratum& s : strata) {
    if (s.divisors.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.divisors.size(); ++drop) {
      std::vector<std::size_t> sub = s.divisors;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
      const DivisorStratum* parent = find(sub);
      if (!parent) throw InputError("openComplementClass: intersection data not closed under meets");
      if (parent->dim <= s.dim)
        throw InputError("openComplementClass: dimensions must strictly decrease along inclusions");
    }
  }

  std::vector<ComplementTerm> out;
  out.push_back(ComplementTerm{totalLabel, 0, 1});
  std::vector<const DivisorStratum*> ordered;
  for (const DivisorStratum& s : strata) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](const DivisorStratum* x, const DivisorStratum* y) {
    if (x->divisors.size() != y->divisors.size()) return x->divisors.size() < y->divisors.size();
    return x->divisors < y->divisors;
  });
  for (const DivisorStratum* s : ordered)
    out.push_back(ComplementTerm{s->label, s->divisors.size(), s->divisors.size() % 2 == 0 ? 1 : -1});
  return out;
}

}  // namespace birsym
