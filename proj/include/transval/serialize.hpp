#pragma once

#include <json.hpp>

#include "diffpoly.hpp"
#include "gamma.hpp"
#include "hahn.hpp"
#include "sigma.hpp"
#include "solver.hpp"
#include "tropical.hpp"

// JSON views of the core value types (schema "transval/v1").
namespace transval {

using Json = nlohmann::json;

inline Json to_json(const SigmaRational& x) { return Json{{"num", x.num().str()}, {"den", x.den().str()}}; }

inline Json to_json(const SigmaExponent& e) {
    Json terms = Json::array();
    for (const auto& [i, v] : e.entries())
        terms.push_back({{"i", i}, {"num", v.get_num().get_str()}, {"pden", v.get_den().get_str()}});
    return Json{{"terms", terms}};
}

inline Json to_json(const GammaVector& g) {
    Json coords = Json::array();
    for (const auto& c : g.coords()) coords.push_back(to_json(c));
    return Json{{"d", g.dim()}, {"coords", coords}};
}

template <CoefficientRing C>
Json to_json(const HahnSeries<C>& a) {
    Json terms = Json::array();
    for (const auto& [e, c] : a.terms()) terms.push_back({{"exp", to_json(e)}, {"coeff", coeff_str(c)}});
    Json out{{"terms", terms}};
    out["prec"] = a.prec() ? to_json(*a.prec()) : Json(nullptr);
    return out;
}

template <CoefficientRing C>
Json to_json(const DiffPoly<C>& f) {
    Json terms = Json::array();
    for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", to_json(e)}, {"coeff", coeff_str(c)}});
    return Json{{"terms", terms}};
}

template <CoefficientRing C>
Json to_json(const DiffPoly<HahnSeries<C>>& f) {
    Json terms = Json::array();
    for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", to_json(e)}, {"coeff", to_json(c)}});
    return Json{{"terms", terms}};
}

inline Json to_json(const PiecewiseTA& psi) {
    Json pieces = Json::array();
    for (const auto& p : psi.pieces) {
        Json j{{"slope", to_json(p.slope)}, {"intercept", to_json(p.intercept)}};
        j["from"] = p.from ? to_json(*p.from) : Json(nullptr);
        j["to"] = p.to ? to_json(*p.to) : Json(nullptr);
        pieces.push_back(std::move(j));
    }
    Json out;
    out["domainEnd"] = psi.domain_end ? to_json(*psi.domain_end) : Json(nullptr);
    out["pieces"] = pieces;
    return out;
}

inline Json to_json(const NewtonPolygon& np) {
    Json points = Json::array(), hull = Json::array(), slopes = Json::array();
    for (const auto& t : np.points) points.push_back({{"exp", to_json(t.exp)}, {"beta", to_json(t.beta)}});
    for (const auto& [x, y] : np.hull) hull.push_back({{"exp", to_json(x)}, {"beta", to_json(y)}});
    for (const auto& s : np.slopes) slopes.push_back(to_json(s));
    return Json{{"points", points}, {"hull", hull}, {"slopes", slopes}};
}

inline Json to_json(const TropicalRoots& tr) {
    Json roots = Json::array();
    for (const auto& r : tr.finite) roots.push_back(to_json(r));
    return Json{{"roots", roots}, {"infinity", tr.infinity}};
}

inline Json to_json(const CutData& cut) {
    Json samples = Json::array();
    for (const auto& s : cut.samples) samples.push_back(to_json(s));
    Json out{{"samples", samples}, {"closedAtLimit", cut.closed_at_limit}};
    out["limit"] = cut.limit ? to_json(*cut.limit) : Json(nullptr);
    return out;
}

inline Json to_json(const Valuation& v) {
    switch (v.kind) {
    case Valuation::Kind::Finite: return Json{{"kind", "finite"}, {"value", to_json(v.value)}};
    case Valuation::Kind::Infinity: return Json{{"kind", "infinity"}};
    case Valuation::Kind::Unknown: return Json{{"kind", "unknown"}, {"atLeast", to_json(v.value)}};
    }
    return {};
}

template <CoefficientRing C>
Json to_json(const LiftReport<C>& rep) {
    return Json{{"root", to_json(rep.root)},
                {"rootText", rep.root.str()},
                {"residualValuation", to_json(rep.residual)},
                {"steps", rep.steps},
                {"distanceToSeed", to_json(rep.distance_to_seed)}};
}

} // namespace transval
