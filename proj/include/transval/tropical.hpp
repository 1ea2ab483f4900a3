#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "diffpoly.hpp"
#include "error.hpp"
#include "hahn.hpp"
#include "sigma.hpp"

namespace transval {

// ---------------------------------------------------------------------------
// Valued terms: (exponent, coefficient valuation) pairs. Difference
// polynomials over a Hahn field reduce to these; classical polynomials from
// specialization do too, with plain integer exponents.
// ---------------------------------------------------------------------------
struct ValuedTerm {
    SigmaExponent exp;
    SigmaRational exp_value; // exp as an element of Q(sigma)
    SigmaRational beta;      // valuation of the coefficient

    ValuedTerm(SigmaExponent e, SigmaRational b)
        : exp(std::move(e)), exp_value(exp.as_sigma_rational()), beta(std::move(b)) {}
};

template <CoefficientRing C>
std::vector<ValuedTerm> valued_terms(const DiffPoly<HahnSeries<C>>& f) {
    std::vector<ValuedTerm> out;
    for (const auto& [e, c] : f.terms()) {
        Valuation v = c.valuation();
        if (v.kind == Valuation::Kind::Infinity) continue;
        if (v.kind == Valuation::Kind::Unknown)
            fail(ErrorCode::PrecisionLoss, "coefficient valuation hidden below precision");
        out.emplace_back(e, v.value);
    }
    return out;
}

template <CoefficientRing C>
std::vector<ValuedTerm> valued_terms(const std::map<Int, HahnSeries<C>>& unipoly) {
    std::vector<ValuedTerm> out;
    for (const auto& [n, c] : unipoly) {
        Valuation v = c.valuation();
        if (v.kind == Valuation::Kind::Infinity) continue;
        if (v.kind == Valuation::Kind::Unknown)
            fail(ErrorCode::PrecisionLoss, "coefficient valuation hidden below precision");
        if (!n.fits_slong_p()) fail(ErrorCode::BudgetExceeded, "exponent too large");
        out.emplace_back(SigmaExponent::term(0, Rat(n)), v.value);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Newton polygon: lower convex boundary of the points (mu, beta_mu), slopes
// strictly increasing along the hull. Tropical roots are the negated slopes,
// plus infinity when the constant term vanishes.
// ---------------------------------------------------------------------------
struct NewtonPolygon {
    std::vector<ValuedTerm> points;
    std::vector<std::pair<SigmaRational, SigmaRational>> hull; // (mu, beta) vertices, mu increasing
    std::vector<SigmaRational> slopes;                         // strictly increasing
};

inline NewtonPolygon newton_polygon(std::vector<ValuedTerm> terms) {
    if (terms.empty()) fail(ErrorCode::ZeroPolynomial, "Newton polygon of the zero polynomial");
    NewtonPolygon np;
    np.points = std::move(terms);
    std::vector<std::pair<SigmaRational, SigmaRational>> pts;
    for (const auto& t : np.points) pts.emplace_back(t.exp_value, t.beta);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        Order o = compare(a.first, b.first);
        if (o != Order::Equal) return o == Order::Less;
        return compare(a.second, b.second) == Order::Less;
    });
    // drop higher points over the same abscissa
    std::vector<std::pair<SigmaRational, SigmaRational>> uniq;
    for (auto& p : pts) {
        if (!uniq.empty() && uniq.back().first == p.first) continue;
        uniq.push_back(std::move(p));
    }
    // monotone chain, lower boundary only
    auto turns_right = [](const auto& a, const auto& b, const auto& c) {
        // cross product sign of (b-a) x (c-a); <= 0 means b is not below the chord
        SigmaRational cross = (b.first - a.first) * (c.second - a.second) -
                              (b.second - a.second) * (c.first - a.first);
        return compare(cross, SigmaRational(0)) != Order::Greater;
    };
    for (const auto& p : uniq) {
        while (np.hull.size() >= 2 && turns_right(np.hull[np.hull.size() - 2], np.hull.back(), p))
            np.hull.pop_back();
        np.hull.push_back(p);
    }
    for (size_t i = 0; i + 1 < np.hull.size(); ++i)
        np.slopes.push_back((np.hull[i + 1].second - np.hull[i].second) /
                            (np.hull[i + 1].first - np.hull[i].first));
    return np;
}

template <CoefficientRing C>
NewtonPolygon newton_polygon(const DiffPoly<HahnSeries<C>>& f) {
    return newton_polygon(valued_terms(f));
}

struct TropicalRoots {
    std::vector<SigmaRational> finite; // increasing
    bool infinity = false;             // constant term vanishes

    bool contains(const SigmaRational& g) const {
        return std::any_of(finite.begin(), finite.end(), [&](const SigmaRational& r) { return r == g; });
    }
};

inline TropicalRoots tropical_roots(const std::vector<ValuedTerm>& terms) {
    bool nonconstant = false, has_constant_term = false;
    for (const auto& t : terms) {
        if (t.exp.is_zero()) has_constant_term = true;
        else nonconstant = true;
    }
    if (!nonconstant) fail(ErrorCode::PreconditionFailed, "tropical roots need a nonconstant polynomial");
    TropicalRoots out;
    out.infinity = !has_constant_term;
    NewtonPolygon np = newton_polygon(terms);
    for (auto it = np.slopes.rbegin(); it != np.slopes.rend(); ++it) out.finite.push_back(-*it);
    return out;
}

template <CoefficientRing C>
TropicalRoots tropical_roots(const DiffPoly<HahnSeries<C>>& f) {
    return tropical_roots(valued_terms(f));
}

// ---------------------------------------------------------------------------
// Balls and generic values.
// ---------------------------------------------------------------------------
template <CoefficientRing C>
struct Ball {
    HahnSeries<C> center;
    SigmaRational radius;
    bool closed = true;
};

// Affine lines beta + mu*lambda entering the Herbrand minimum.
struct AffineLine {
    SigmaExponent slope;
    SigmaRational slope_value;
    SigmaRational intercept;
};

template <CoefficientRing C>
std::vector<AffineLine> herbrand_lines(const DiffPoly<HahnSeries<C>>& f, const HahnSeries<C>& center,
                                       bool center_is_root) {
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "Herbrand data of the zero polynomial");
    std::vector<AffineLine> lines;
    for (const auto& [mu, fmu] : f.taylor()) {
        if (center_is_root && mu.is_zero()) continue;
        Valuation v = fmu.evaluate(center).valuation();
        if (v.kind == Valuation::Kind::Infinity) continue;
        if (v.kind == Valuation::Kind::Unknown)
            fail(ErrorCode::PrecisionLoss, "center precision too small for a transformal derivative value");
        lines.push_back({mu, mu.as_sigma_rational(), v.value});
    }
    if (lines.empty()) fail(ErrorCode::PreconditionFailed, "no finite-valued lines above the center");
    return lines;
}

// generic value of f on the closed ball: min over mu of v(f_mu(center)) + mu*radius
template <CoefficientRing C>
SigmaRational generic_value(const DiffPoly<HahnSeries<C>>& f, const Ball<C>& b) {
    std::optional<SigmaRational> best;
    for (const auto& line : herbrand_lines(f, b.center, false)) {
        SigmaRational v = line.intercept + line.slope_value * b.radius;
        if (!best || v < *best) best = v;
    }
    return *best;
}

// ---------------------------------------------------------------------------
// PiecewiseTA: canonical piece list of a continuous concave piecewise
// transformally affine function (the lower envelope of finitely many lines).
// ---------------------------------------------------------------------------
struct PiecewiseTA {
    struct Piece {
        SigmaExponent slope;
        SigmaRational slope_value;
        SigmaRational intercept;
        std::optional<SigmaRational> from; // nullopt = -infinity
        std::optional<SigmaRational> to;   // nullopt = +infinity / domain end
    };

    std::optional<SigmaRational> domain_end; // exclusive; nullopt = whole line
    std::vector<Piece> pieces;               // left to right, slopes strictly decreasing

    SigmaRational value_at(const SigmaRational& lambda) const {
        for (const auto& p : pieces) {
            bool lo = !p.from || compare(*p.from, lambda) != Order::Greater;
            bool hi = !p.to || compare(lambda, *p.to) != Order::Greater;
            if (lo && hi) return p.intercept + p.slope_value * lambda;
        }
        fail(ErrorCode::PreconditionFailed, "lambda outside the domain");
    }

    std::vector<SigmaRational> singular_points() const {
        std::vector<SigmaRational> out;
        for (size_t i = 1; i < pieces.size(); ++i) out.push_back(*pieces[i].from);
        return out;
    }

    bool strictly_increasing() const {
        return std::all_of(pieces.begin(), pieces.end(), [](const Piece& p) { return !p.slope.is_zero(); });
    }

    std::optional<SigmaRational> max_singular_point() const {
        if (pieces.size() < 2) return std::nullopt;
        return *pieces.back().from;
    }
};

// Lower envelope of the lines, truncated to (-infinity, domain_end).
inline PiecewiseTA lower_envelope(std::vector<AffineLine> lines, std::optional<SigmaRational> domain_end) {
    if (lines.empty()) fail(ErrorCode::PreconditionFailed, "empty envelope");
    // steepest first; for equal slopes only the lowest intercept survives
    std::sort(lines.begin(), lines.end(), [](const AffineLine& a, const AffineLine& b) {
        Order o = compare(a.slope_value, b.slope_value);
        if (o != Order::Equal) return o == Order::Greater;
        return compare(a.intercept, b.intercept) == Order::Less;
    });
    std::vector<AffineLine> dedup;
    for (auto& l : lines) {
        if (!dedup.empty() && dedup.back().slope_value == l.slope_value) continue;
        dedup.push_back(std::move(l));
    }
    PiecewiseTA out;
    out.domain_end = std::move(domain_end);
    struct Open {
        AffineLine line;
        std::optional<SigmaRational> from;
    };
    std::vector<Open> stack;
    for (auto& l : dedup) {
        for (;;) {
            if (stack.empty()) {
                stack.push_back({std::move(l), std::nullopt});
                break;
            }
            const AffineLine& top = stack.back().line;
            // crossing with the current top; slopes differ by construction
            SigmaRational x = (l.intercept - top.intercept) / (top.slope_value - l.slope_value);
            if (stack.back().from && compare(x, *stack.back().from) != Order::Greater) {
                stack.pop_back(); // top never attains the minimum
                continue;
            }
            stack.push_back({std::move(l), std::move(x)});
            break;
        }
    }
    for (size_t i = 0; i < stack.size(); ++i) {
        PiecewiseTA::Piece p;
        p.slope = stack[i].line.slope;
        p.slope_value = stack[i].line.slope_value;
        p.intercept = stack[i].line.intercept;
        p.from = stack[i].from;
        p.to = i + 1 < stack.size() ? stack[i + 1].from : out.domain_end;
        if (out.domain_end) {
            if (p.from && compare(*p.from, *out.domain_end) != Order::Less) continue; // piece beyond the domain
            if (!p.to || compare(*p.to, *out.domain_end) == Order::Greater) p.to = out.domain_end;
        }
        out.pieces.push_back(std::move(p));
    }
    if (out.pieces.empty()) fail(ErrorCode::PreconditionFailed, "empty domain");
    return out;
}

// Transformal Herbrand function of f above the ball: Psi(lambda) = generic
// value of f on the ball of radius lambda around the center, for lambda
// below the ball's radius.
template <CoefficientRing C>
PiecewiseTA herbrand(const DiffPoly<HahnSeries<C>>& f, const Ball<C>& b) {
    return lower_envelope(herbrand_lines(f, b.center, false), b.radius);
}

// Above a point (lambda_0 = infinity). With center_is_root set, the center
// counts as an exact root and the constant line is dropped; use this when the
// center approximates a root to precision beyond the window of interest.
template <CoefficientRing C>
PiecewiseTA herbrand_above_point(const DiffPoly<HahnSeries<C>>& f, const HahnSeries<C>& center,
                                 bool center_is_root = false) {
    return lower_envelope(herbrand_lines(f, center, center_is_root), std::nullopt);
}

// ---------------------------------------------------------------------------
// Dominant exponents and additive truncation along a nest of radii with a
// rational limit.
// ---------------------------------------------------------------------------
struct RadiiNest {
    std::vector<SigmaRational> prefix; // strictly increasing
    SigmaRational limit;               // rational limit in Q(sigma), all prefix < limit

    RadiiNest(std::vector<SigmaRational> pre, std::optional<SigmaRational> lim) : prefix(std::move(pre)) {
        if (!lim) fail(ErrorCode::LimitNotRational, "radii nest needs an exact limit in Q(sigma)");
        limit = std::move(*lim);
        for (size_t i = 0; i < prefix.size(); ++i) {
            if (i > 0 && compare(prefix[i - 1], prefix[i]) != Order::Less)
                fail(ErrorCode::PreconditionFailed, "radii must increase strictly");
            if (compare(prefix[i], limit) != Order::Less)
                fail(ErrorCode::PreconditionFailed, "radii must stay below the limit");
        }
    }
};

template <CoefficientRing C>
struct DominanceReport {
    SigmaExponent rho;                    // dominant exponent just below the limit
    std::vector<SigmaExponent> dominant;  // I': asymptotically dominant exponents
    HahnSeries<C> center;                 // a_N
    DiffPoly<HahnSeries<C>> centered;     // g in y = x - a_N (constant term f(a_N))

    HahnSeries<C> evaluate(const HahnSeries<C>& x) const { return centered.evaluate(x - center); }
};

// The asymptotically dominant lines are those through the minimum at the
// limit radius; the dominant exponent is the strict minimizer just below it.
template <CoefficientRing C>
DominanceReport<C> dominance_analysis(const DiffPoly<HahnSeries<C>>& f, const HahnSeries<C>& a_N,
                                      const RadiiNest& radii) {
    std::vector<AffineLine> lines = herbrand_lines(f, a_N, true); // mu > 0 only
    std::optional<SigmaRational> best;
    for (const auto& l : lines) {
        SigmaRational v = l.intercept + l.slope_value * radii.limit;
        if (!best || v < *best) best = v;
    }
    DominanceReport<C> rep;
    rep.center = a_N;
    HahnSeries<C> f_at = f.evaluate(a_N);
    rep.centered = DiffPoly<HahnSeries<C>>::constant(f_at);
    for (const auto& l : lines) {
        if (!(l.intercept + l.slope_value * radii.limit == *best)) continue;
        rep.dominant.push_back(l.slope);
    }
    std::sort(rep.dominant.begin(), rep.dominant.end());
    rep.rho = rep.dominant.back();
    for (const auto& mu : rep.dominant)
        rep.centered = rep.centered + DiffPoly<HahnSeries<C>>::monomial(mu, f.transformal_derivative(mu).evaluate(a_N));
    return rep;
}

} // namespace transval
