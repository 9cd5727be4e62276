#pragma once

#include <json.hpp>

#include "birsym/surface.hpp"

namespace birsym {

// SurfaceModel document format:
//   {
//     "torsion": 5,
//     "points": [ {"factors": [5], "weights": [[1],[2]]} ],
//     "curves": [ {"factors": [5], "weight": [1],
//                  "special": [{"factors": [5,5], "weights": [[1,0],[0,1]]}]} ]
//   }
// For a special point, weights[0] is transverse to the curve and weights[1]
// restricts to the curve direction.  Factor lists are normalized to
// invariant-factor form with the coordinates mapped along.

namespace detail {

inline std::pair<FinAbGroup, GroupElement> elementFromJson(const std::vector<std::int64_t>& factors,
                                                           const nlohmann::json& coords) {
  auto [group, gens] = normalizedDirectSum(factors);
  if (!coords.is_array() || coords.size() != factors.size())
    throw InputError("model: weight arity does not match the factor list");
  GroupElement x = group.zero();
  for (std::size_t k = 0; k < factors.size(); ++k)
    x = group.add(x, group.scaled(gens[k], coords[k].get<std::int64_t>()));
  return {group, x};
}

inline std::vector<std::int64_t> factorList(const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("model: factors must be an array");
  std::vector<std::int64_t> out;
  for (const auto& v : j) out.push_back(v.get<std::int64_t>());
  return out;
}

}  // namespace detail

inline SurfaceModel modelFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("torsion")) throw InputError("model: missing torsion bound");
  std::int64_t torsion = j.at("torsion").get<std::int64_t>();
  std::vector<StackyPoint> points;
  std::vector<StackyCurve> curves;
  auto pairFrom = [](const nlohmann::json& entry) {
    std::vector<std::int64_t> fs = detail::factorList(entry.at("factors"));
    const nlohmann::json& ws = entry.at("weights");
    if (!ws.is_array() || ws.size() != 2) throw InputError("model: a point carries exactly two weights");
    auto [g1, w1] = detail::elementFromJson(fs, ws[0]);
    auto [g2, w2] = detail::elementFromJson(fs, ws[1]);
    return std::tuple<FinAbGroup, GroupElement, GroupElement>(g1, w1, w2);
  };
  if (j.contains("points"))
    for (const auto& entry : j.at("points")) {
      auto [g, w1, w2] = pairFrom(entry);
      points.push_back(StackyPoint{g, w1, w2});
    }
  if (j.contains("curves"))
    for (const auto& entry : j.at("curves")) {
      std::vector<std::int64_t> fs = detail::factorList(entry.at("factors"));
      auto [g, w] = detail::elementFromJson(fs, entry.at("weight"));
      StackyCurve curve{g, w, {}};
      if (entry.contains("special"))
        for (const auto& sp : entry.at("special")) {
          auto [vg, tr, al] = pairFrom(sp);
          curve.special.push_back(SpecialPoint{vg, tr, al});
        }
      curves.push_back(std::move(curve));
    }
  return SurfaceModel(torsion, std::move(points), std::move(curves),
                      j.value("free_blowups", std::int64_t(0)));
}

inline nlohmann::ordered_json modelToJson(const SurfaceModel& m) {
  nlohmann::ordered_json out;
  out["torsion"] = m.torsion();
  out["points"] = nlohmann::ordered_json::array();
  for (const StackyPoint& pt : m.points()) {
    nlohmann::ordered_json e;
    e["factors"] = pt.group.factors();
    e["weights"] = {pt.w1.c, pt.w2.c};
    e["symbol"] = canonicalize(SymbolPair{pt.group, {pt.w1, pt.w2}}, m.torsion()).str();
    out["points"].push_back(e);
  }
  out["curves"] = nlohmann::ordered_json::array();
  for (const StackyCurve& c : m.curves()) {
    nlohmann::ordered_json e;
    e["factors"] = c.group.factors();
    e["weight"] = c.weight.c;
    e["symbol"] = canonicalize(SymbolPair{c.group, {c.weight}}, m.torsion()).str();
    e["special"] = nlohmann::ordered_json::array();
    for (const SpecialPoint& v : c.special) {
      nlohmann::ordered_json s;
      s["factors"] = v.group.factors();
      s["weights"] = {v.transverse.c, v.along.c};
      s["symbol"] = canonicalize(SymbolPair{v.group, {v.transverse, v.along}}, m.torsion()).str();
      e["special"].push_back(s);
    }
    e["special_count"] = c.special.size();
    out["curves"].push_back(e);
  }
  if (m.freeBlowups() != 0) out["free_blowups"] = m.freeBlowups();
  return out;
}

}  // namespace birsym
