#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "birsym/errors.hpp"
#include "birsym/symbol.hpp"

namespace birsym {

// Integer linear combination of canonical symbols of one degree and torsion
// bound.  Zero coefficients are never stored.
class FormalSum {
public:
  FormalSum() = default;

  static FormalSum single(const CanonicalSymbol& s, std::int64_t k = 1) {
    FormalSum out;
    out.add(s, k);
    return out;
  }

  void add(const CanonicalSymbol& s, std::int64_t k) {
    if (k == 0) return;
    if (!terms_.empty()) {
      const CanonicalSymbol& ref = terms_.begin()->first;
      if (ref.degree() != s.degree() || ref.torsionBound() != s.torsionBound())
        throw InputError("FormalSum: mixed degree or torsion bound");
    }
    auto it = terms_.find(s);
    if (it == terms_.end()) {
      terms_.emplace(s, k);
    } else {
      it->second += k;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void add(const FormalSum& other, std::int64_t scale = 1) {
    for (const auto& [s, k] : other.terms_) add(s, k * scale);
  }

  FormalSum operator+(const FormalSum& o) const {
    FormalSum out = *this;
    out.add(o);
    return out;
  }
  FormalSum operator-(const FormalSum& o) const {
    FormalSum out = *this;
    out.add(o, -1);
    return out;
  }

  bool empty() const { return terms_.empty(); }
  const std::map<CanonicalSymbol, std::int64_t>& terms() const { return terms_; }

  std::int64_t coefficient(const CanonicalSymbol& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? 0 : it->second;
  }

  // Termwise zero-weight append.
  FormalSum tShifted() const {
    FormalSum out;
    for (const auto& [s, k] : terms_) out.add(tShift(s), k);
    return out;
  }

  bool operator==(const FormalSum& other) const { return terms_ == other.terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [s, k] : terms_) {
      if (!out.empty()) out += k < 0 ? " - " : " + ";
      else if (k < 0) out += "-";
      std::int64_t a = k < 0 ? -k : k;
      if (a != 1) out += std::to_string(a) + "*";
      out += s.str();
    }
    return out;
  }

private:
  std::map<CanonicalSymbol, std::int64_t> terms_;
};

}  // namespace birsym
