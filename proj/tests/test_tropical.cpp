#include <doctest.h>

#include <transval/tropical.hpp>

#include "test_support.hpp"

using namespace transval;

namespace {

using HF = HahnSeries<Fq>;
using PF = DiffPoly<HF>;

struct World {
    std::shared_ptr<const FqField> F;
    explicit World(unsigned p, unsigned deg = 1, unsigned s = 0) : F(FqField::make(p, deg, s)) {}
    HF t(const SigmaRational& e) const { return HF::monomial(e, F->one()); }
    PF x_pow(SigmaExponent e) const { return PF::monomial(std::move(e), HF::constant(F->one())); }
    PF as_poly(const SigmaRational& cv) const {
        // x^p - x - c with v(c) = cv
        unsigned p = F->p();
        return x_pow(SigmaExponent(p)) - x_pow(SigmaExponent(1)) - PF::constant(t(cv));
    }
};

SigmaExponent sx(unsigned i) { return SigmaExponent::sigma_power(i); }
SigmaRational S() { return SigmaRational::sigma(); }

} // namespace

TEST_CASE("generic values on closed balls") {
    World w(2);
    PF x = w.x_pow(SigmaExponent(1));
    CHECK(generic_value(x, Ball<Fq>{HF::zero(), SigmaRational(7), true}) == SigmaRational(7));

    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)) - PF::constant(w.t(SigmaRational(-1)));
    CHECK(generic_value(f, Ball<Fq>{HF::zero(), SigmaRational(0), true}) == SigmaRational(-1));

    PF g = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1));
    CHECK(generic_value(g, Ball<Fq>{HF::zero(), SigmaRational(-3), true}) == S() * SigmaRational(-3));
}

TEST_CASE("Newton polygon shapes") {
    World w(2);
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)) - PF::constant(w.t(SigmaRational(-1)));
    NewtonPolygon np = newton_polygon(f);
    REQUIRE(np.hull.size() == 2);
    CHECK(np.hull[0].first == SigmaRational(0));
    CHECK(np.hull[0].second == SigmaRational(-1));
    CHECK(np.hull[1].first == S());
    CHECK(np.hull[1].second == SigmaRational(0));
    REQUIRE(np.slopes.size() == 1);
    CHECK(np.slopes[0] == SigmaRational(1) / S());

    NewtonPolygon as = newton_polygon(w.as_poly(SigmaRational(-1)));
    REQUIRE(as.slopes.size() == 1);
    CHECK(as.slopes[0] == SigmaRational(Rat(1, 2)));

    // x - 1: one edge through (0,0) and (1,0)
    PF lin = w.x_pow(SigmaExponent(1)) - PF::constant(HF::constant(w.F->one()));
    NewtonPolygon nl = newton_polygon(lin);
    REQUIRE(nl.slopes.size() == 1);
    CHECK(nl.slopes[0] == SigmaRational(0));
}

TEST_CASE("tropical roots") {
    World w2(2), w3(3);
    PF f = w2.x_pow(sx(1)) - w2.x_pow(SigmaExponent(1)) - PF::constant(w2.t(SigmaRational(-1)));
    TropicalRoots tr = tropical_roots(f);
    REQUIRE(tr.finite.size() == 1);
    CHECK(tr.finite[0] == -(SigmaRational(1) / S()));
    CHECK_FALSE(tr.infinity);

    TropicalRoots tx = tropical_roots(w2.x_pow(SigmaExponent(1)));
    CHECK(tx.finite.empty());
    CHECK(tx.infinity);

    TropicalRoots tas = tropical_roots(w3.as_poly(SigmaRational(-1)));
    REQUIRE(tas.finite.size() == 1);
    CHECK(tas.finite[0] == SigmaRational(Rat(-1, 3)));
}

TEST_CASE("Herbrand function above a root of the Artin-Schreier polynomial") {
    for (unsigned p : {2u, 3u, 5u}) {
        World w(p);
        PF f = w.as_poly(SigmaRational(-1));
        HF root = as_root(w.t(SigmaRational(-1)), 6);
        PiecewiseTA psi = herbrand_above_point(f, root, /*center_is_root=*/true);
        REQUIRE(psi.pieces.size() == 2);
        CHECK(psi.pieces[0].slope == SigmaExponent(p));
        CHECK(psi.pieces[1].slope == SigmaExponent(1));
        auto sing = psi.singular_points();
        REQUIRE(sing.size() == 1);
        CHECK(sing[0] == SigmaRational(0));
        CHECK(psi.strictly_increasing());
    }
}

TEST_CASE("Herbrand function of x^s - x - t above 0") {
    World w(2);
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)) - PF::constant(w.t(SigmaRational(1)));
    PiecewiseTA psi = herbrand_above_point(f, HF::zero());
    REQUIRE(psi.pieces.size() == 3);
    CHECK(psi.pieces[0].slope == sx(1));
    CHECK(psi.pieces[1].slope == SigmaExponent(1));
    CHECK(psi.pieces[2].slope == SigmaExponent(0));
    auto sing = psi.singular_points();
    REQUIRE(sing.size() == 2);
    CHECK(sing[0] == SigmaRational(0));
    CHECK(sing[1] == SigmaRational(1));
    CHECK_FALSE(psi.strictly_increasing());
    // pointwise values
    CHECK(psi.value_at(SigmaRational(-2)) == SigmaRational(-2) * S());
    CHECK(psi.value_at(SigmaRational(Rat(1, 2))) == SigmaRational(Rat(1, 2)));
    CHECK(psi.value_at(SigmaRational(5)) == SigmaRational(1));

    // x - a above its root a: a single affine piece of slope 1
    PF lin = w.x_pow(SigmaExponent(1)) - PF::constant(w.t(SigmaRational(2)));
    PiecewiseTA pl = herbrand_above_point(lin, w.t(SigmaRational(2)), false);
    CHECK(pl.singular_points().empty());
    REQUIRE(pl.pieces.size() == 1);
    CHECK(pl.pieces[0].slope == SigmaExponent(1));
    CHECK(pl.strictly_increasing());
}

TEST_CASE("Herbrand function above a ball truncates the domain") {
    World w(2);
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)) - PF::constant(w.t(SigmaRational(-1)));
    PiecewiseTA psi = herbrand(f, Ball<Fq>{HF::zero(), SigmaRational(-1), true});
    // on lambda < -1 only the sigma-line attains the minimum
    REQUIRE(psi.pieces.size() == 1);
    CHECK(psi.pieces[0].slope == sx(1));
    CHECK(psi.strictly_increasing());
    REQUIRE(psi.domain_end.has_value());
    CHECK(*psi.domain_end == SigmaRational(-1));

    // above the unit ball the flat constant line appears
    PiecewiseTA flat = herbrand(f, Ball<Fq>{HF::zero(), SigmaRational(0), true});
    CHECK_FALSE(flat.strictly_increasing());
}

TEST_CASE("Herbrand functions are continuous concave envelopes with slopes from the support") {
    test_support::Rng rng(57);
    World w(3);
    for (int trial = 0; trial < 50; ++trial) {
        PF f;
        unsigned terms = 1 + rng.below(4);
        for (unsigned i = 0; i < terms; ++i) {
            SigmaExponent e = test_support::random_exponent(rng, 2, 3);
            f = f + PF::monomial(e, w.t(SigmaRational(rng.int_in(-3, 3))));
        }
        if (f.is_zero()) continue;
        HF center = rng.flip() ? HF::zero() : w.t(SigmaRational(rng.int_in(-2, 2)));
        PiecewiseTA psi = herbrand_above_point(f, center);
        auto support = f.support();
        for (size_t i = 0; i < psi.pieces.size(); ++i) {
            // slopes strictly decrease (concavity) and are drawn from the taylor exponents
            if (i > 0)
                CHECK(compare(psi.pieces[i].slope_value, psi.pieces[i - 1].slope_value) == Order::Less);
        }
        // continuity at the breakpoints
        for (size_t i = 1; i < psi.pieces.size(); ++i) {
            const auto& a = psi.pieces[i - 1];
            const auto& b = psi.pieces[i];
            SigmaRational bp = *b.from;
            CHECK(a.intercept + a.slope_value * bp == b.intercept + b.slope_value * bp);
        }
        // pointwise minimum of the defining lines at sampled lambdas
        auto lines = herbrand_lines(f, center, false);
        std::vector<SigmaRational> samples = psi.singular_points();
        samples.push_back(SigmaRational(-9));
        samples.push_back(SigmaRational(9));
        samples.push_back(SigmaRational(Rat(1, 3)));
        for (const auto& bp : psi.singular_points()) {
            samples.push_back(bp - SigmaRational(Rat(1, 7)));
            samples.push_back(bp + SigmaRational(Rat(1, 7)));
        }
        for (const auto& lam : samples) {
            std::optional<SigmaRational> best;
            for (const auto& l : lines) {
                SigmaRational v = l.intercept + l.slope_value * lam;
                if (!best || v < *best) best = v;
            }
            CHECK(psi.value_at(lam) == *best);
        }
    }
}

TEST_CASE("tropical roots are negated polygon slopes on a random corpus") {
    test_support::Rng rng(61);
    World w(2);
    for (int trial = 0; trial < 60; ++trial) {
        PF f;
        unsigned terms = 2 + rng.below(3);
        for (unsigned i = 0; i < terms; ++i)
            f = f + PF::monomial(test_support::random_exponent(rng, 2, 2), w.t(SigmaRational(rng.int_in(-3, 3))));
        if (f.is_zero() || f.is_constant()) continue;
        NewtonPolygon np = newton_polygon(f);
        TropicalRoots tr = tropical_roots(f);
        REQUIRE(tr.finite.size() == np.slopes.size());
        for (size_t i = 0; i < np.slopes.size(); ++i) CHECK(tr.contains(-np.slopes[i]));
        // brute-force definition: gamma is tropical iff the minimum of
        // beta + mu*gamma is attained at least twice
        auto vt = valued_terms(f);
        for (const auto& g : tr.finite) {
            std::optional<SigmaRational> best;
            int hits = 0;
            for (const auto& t : vt) {
                SigmaRational v = t.beta + t.exp_value * g;
                if (!best || v < *best) {
                    best = v;
                    hits = 1;
                } else if (v == *best) {
                    ++hits;
                }
            }
            CHECK(hits >= 2);
        }
    }
}

TEST_CASE("dominance analysis on the Artin-Schreier nest") {
    World w(2);
    unsigned N = 4;
    HF c = w.t(SigmaRational(-1));
    PF f = w.as_poly(SigmaRational(-1));
    HF a_N = as_root(c, N);
    std::vector<SigmaRational> prefix;
    for (unsigned n = 1; n <= N; ++n) prefix.push_back(SigmaRational(Rat(-1, pow_int(Int(2), n + 1))));
    RadiiNest nest(prefix, SigmaRational(0));
    auto rep = dominance_analysis(f, a_N, nest);
    CHECK(rep.rho == SigmaExponent(2));
    REQUIRE(rep.dominant.size() == 2);
    CHECK(rep.dominant[0] == SigmaExponent(1));
    CHECK(rep.dominant[1] == SigmaExponent(2));
    // v(g(a_n)) = v(f(a_n)) beyond N (here even exact equality holds)
    for (unsigned n = N + 1; n <= N + 5; ++n) {
        HF a_n = as_root(c, n);
        HF gval = rep.evaluate(a_n);
        HF fval = f.evaluate(a_n);
        REQUIRE(gval.valuation().is_finite());
        CHECK(gval.valuation().value == fval.valuation().value);
    }
    // every dominant exponent is a transformal p-th power
    for (const auto& mu : rep.dominant) CHECK(mu.is_transformal_p_power(Int(2)));

    // single-exponent polynomial: I' is that exponent
    PF mono = w.x_pow(sx(1));
    auto rm = dominance_analysis(mono, w.t(SigmaRational(1)), nest);
    CHECK(rm.rho == sx(1));
    CHECK(rm.dominant.size() == 1);

    // strict minimizer far below every breakpoint stays a singleton
    PF g = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)) - PF::constant(c);
    RadiiNest low({SigmaRational(-8) * S()}, SigmaRational(-7) * S());
    auto rl = dominance_analysis(g, HF::zero(), low);
    CHECK(rl.dominant.size() == 1);
    CHECK(rl.rho == sx(1));
}

TEST_CASE("radii nests validate their shape") {
    CHECK_THROWS_AS(RadiiNest({SigmaRational(0)}, std::nullopt), Error);
    CHECK_THROWS_AS(RadiiNest({SigmaRational(1), SigmaRational(0)}, SigmaRational(2)), Error);
    CHECK_THROWS_AS(RadiiNest({SigmaRational(3)}, SigmaRational(2)), Error);
}

TEST_CASE("Newton polygon hull against a brute-force oracle") {
    test_support::Rng rng(83);
    for (int trial = 0; trial < 80; ++trial) {
        std::vector<ValuedTerm> terms;
        unsigned n = 1 + rng.below(6);
        for (unsigned i = 0; i < n; ++i)
            terms.emplace_back(test_support::random_exponent(rng, 2, 3),
                               SigmaRational(Rat(rng.int_in(-6, 6), 1 + rng.below(2))));
        NewtonPolygon np = newton_polygon(terms);
        REQUIRE(!np.hull.empty());
        // hull vertices are among the points
        for (const auto& [x, y] : np.hull) {
            bool found = false;
            for (const auto& t : terms)
                if (t.exp_value == x && t.beta == y) found = true;
            CHECK(found);
        }
        // slopes strictly increase along the hull
        for (size_t i = 1; i < np.slopes.size(); ++i)
            CHECK(compare(np.slopes[i - 1], np.slopes[i]) == Order::Less);
        // every point lies on or above every supporting hull edge, and the
        // hull spans the abscissa range
        for (size_t i = 0; i + 1 < np.hull.size(); ++i) {
            const auto& a = np.hull[i];
            const auto& b = np.hull[i + 1];
            for (const auto& t : terms) {
                SigmaRational cross = (b.first - a.first) * (t.beta - a.second) -
                                      (b.second - a.second) * (t.exp_value - a.first);
                CHECK(compare(cross, SigmaRational(0)) != Order::Less);
            }
        }
        for (const auto& t : terms) {
            CHECK(compare(np.hull.front().first, t.exp_value) != Order::Greater);
            CHECK(compare(np.hull.back().first, t.exp_value) != Order::Less);
        }
    }
}
