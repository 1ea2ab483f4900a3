#include <doctest.h>

#include <transval/diffpoly.hpp>

#include "test_support.hpp"

using namespace transval;

namespace {

using HF = HahnSeries<Fq>;
using HQ = HahnSeries<Rat>;
using PF = DiffPoly<HF>;
using PQ = DiffPoly<HQ>;

SigmaExponent sx(unsigned i) { return SigmaExponent::sigma_power(i); }

struct F2World {
    std::shared_ptr<const FqField> F = FqField::make(2, 1);
    HF one = HF::constant(F->one());
    HF t(const SigmaRational& e) const { return HF::monomial(e, F->one()); }
    PF x_pow(SigmaExponent e) const { return PF::monomial(std::move(e), one); }
};

// random difference polynomial over F_p((t^Q(sigma)))
PF random_poly(test_support::Rng& rng, const F2World& w, unsigned max_terms) {
    PF f;
    unsigned n = 1 + rng.below(max_terms);
    for (unsigned i = 0; i < n; ++i) {
        SigmaExponent e;
        if (rng.flip()) e = e + SigmaExponent(rng.below(3));
        if (rng.flip()) e = e + SigmaExponent::term(1, Rat(rng.below(2)));
        if (rng.below(4) == 0) e = e + SigmaExponent::term(2, Rat(1));
        HF c = w.t(SigmaRational(rng.int_in(-2, 2)));
        f = f + PF::monomial(e, c);
    }
    return f;
}

HF random_point(test_support::Rng& rng, const F2World& w) {
    HF a = w.t(SigmaRational(rng.int_in(-2, 3)));
    if (rng.flip()) a = a + w.t(SigmaRational(rng.int_in(4, 6)));
    return a;
}

} // namespace

TEST_CASE("arithmetic and degree additivity") {
    F2World w;
    PF xs = w.x_pow(sx(1));
    PF x = w.x_pow(sx(0).scaled(Rat(0)) + SigmaExponent(1));
    CHECK(xs * x == w.x_pow(SigmaExponent::sigma_power(1) + SigmaExponent(1)));
    CHECK((xs - x) + x == xs);

    // deg((x^s + 1) * (x^2 + x)) = s + 2
    PF f = xs + PF::constant(w.one);
    PF g = w.x_pow(SigmaExponent(2)) + w.x_pow(SigmaExponent(1));
    auto d = (f * g).degree();
    REQUIRE(d.has_value());
    CHECK(*d == SigmaExponent::sigma_power(1) + SigmaExponent(2));

    test_support::Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        PF a = random_poly(rng, w, 3), b = random_poly(rng, w, 3);
        if (a.is_zero() || b.is_zero()) continue;
        auto da = a.degree(), db = b.degree(), dab = (a * b).degree();
        REQUIRE(dab.has_value());
        CHECK(*dab == *da + *db); // coefficients live in a field: no degree drop
    }
}

TEST_CASE("taylor expansion of x^(s+1)") {
    F2World w;
    PF f = w.x_pow(sx(1) + SigmaExponent(1));
    auto tay = f.taylor();
    REQUIRE(tay.size() == 4);
    CHECK(tay[0].first.is_zero());
    CHECK(tay[0].second == f);
    CHECK(tay[1].first == SigmaExponent(1));
    CHECK(tay[1].second == w.x_pow(sx(1)));
    CHECK(tay[2].first == sx(1));
    CHECK(tay[2].second == w.x_pow(SigmaExponent(1)));
    CHECK(tay[3].first == sx(1) + SigmaExponent(1));
    CHECK(tay[3].second == PF::constant(w.one));
}

TEST_CASE("taylor expansion of the Artin-Schreier polynomial") {
    F2World w;
    PF f = w.x_pow(SigmaExponent(2)) - w.x_pow(SigmaExponent(1)); // x^p - x, p=2
    auto tay = f.taylor();
    REQUIRE(tay.size() == 3);
    CHECK(tay[1].first == SigmaExponent(1));
    CHECK(tay[1].second == -PF::constant(w.one));
    CHECK(tay[2].first == SigmaExponent(2));
    CHECK(tay[2].second == PF::constant(w.one));

    PF c = PF::constant(w.t(SigmaRational(3)));
    auto tc = c.taylor();
    REQUIRE(tc.size() == 1);
    CHECK(tc[0].first.is_zero());
}

TEST_CASE("derivative") {
    F2World w;
    CHECK((w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1))).derivative() == -PF::constant(w.one));
    // x^2 over Q: classical 2x
    PQ x2 = PQ::monomial(SigmaExponent(2), HQ::constant(Rat(1)));
    CHECK(x2.derivative() == PQ::monomial(SigmaExponent(1), HQ::constant(Rat(2))));
    // x^p over F_p
    CHECK(w.x_pow(SigmaExponent(2)).derivative().is_zero());
}

TEST_CASE("rescale") {
    F2World w;
    HF u = w.t(SigmaRational(1)) + w.one;
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1));
    PF g = f.rescale(u);
    // u^s x^s - u x
    CHECK(g == PF::monomial(sx(1), u.sigma_map(1)) - PF::monomial(SigmaExponent(1), u));
    CHECK(f.rescale(w.one) == f);
    CHECK(w.x_pow(sx(1)).rescale(u) == PF::monomial(sx(1), u.sigma_map(1)));
}

TEST_CASE("translate") {
    F2World w;
    HF c = w.t(SigmaRational(-1));
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1));
    PF g = f.translate(c);
    // x^s - x + (c^s - c)
    CHECK(g == f + PF::constant(c.sigma_map(1) - c));
    CHECK(f.translate(HF::zero()) == f);

    PQ x2 = PQ::monomial(SigmaExponent(2), HQ::constant(Rat(1)));
    PQ shifted = x2.translate(HQ::constant(Rat(1)));
    CHECK(shifted == x2 + PQ::monomial(SigmaExponent(1), HQ::constant(Rat(2))) + PQ::constant(HQ::constant(Rat(1))));
}

TEST_CASE("twist normalization") {
    F2World w;
    // x^(s p) - x^p + c  ->  x^s - x + c^(1/p), one Frobenius untwist
    HF c = w.t(SigmaRational(3));
    PF f = PF::monomial(sx(1).scaled(Rat(2)), w.one) - w.x_pow(SigmaExponent(2)) + PF::constant(c);
    auto rep = f.twist_normalize();
    CHECK(rep.sigma_shift == 0);
    CHECK(rep.frobenius_power == 1);
    CHECK(rep.poly == w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)) + PF::constant(c.frobenius(-1)));
    CHECK_FALSE(rep.poly.derivative().is_zero());

    // x^(s^2) - x^s -> x^s - x after one sigma shift
    PF g = w.x_pow(sx(2)) - w.x_pow(sx(1));
    auto rg = g.twist_normalize();
    CHECK(rg.sigma_shift == 1);
    CHECK(rg.frobenius_power == 0);
    CHECK(rg.poly == w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1)));

    // already normalized
    PF h = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1));
    auto rh = h.twist_normalize();
    CHECK(rh.sigma_shift == 0);
    CHECK(rh.frobenius_power == 0);
    CHECK(rh.poly == h);

    CHECK_THROWS_AS(PF().twist_normalize(), Error);

    test_support::Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        PF r = random_poly(rng, w, 4);
        if (r.is_zero() || r.is_constant()) continue;
        auto rr = r.twist_normalize();
        CHECK_FALSE(rr.poly.derivative().is_zero());
    }
}

TEST_CASE("specialize sigma to q") {
    F2World w;
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1));
    auto g = f.specialize_sigma(Int(4));
    REQUIRE(g.size() == 2);
    CHECK(g.count(Int(4)) == 1);
    CHECK(g.count(Int(1)) == 1);
    CHECK(unipoly_str(f.specialize_sigma(Int(4))) == "x^4 + x");

    auto h = w.x_pow(sx(1) + SigmaExponent(1)).specialize_sigma(Int(3));
    CHECK(h.count(Int(4)) == 1);

    PF c = PF::constant(w.t(SigmaRational(2)));
    CHECK(c.specialize_sigma(Int(5)).count(Int(0)) == 1);

    // collision: x^s and x^3 collide at q=3
    PF bad = w.x_pow(sx(1)) + w.x_pow(SigmaExponent(3));
    CHECK_THROWS_AS(bad.specialize_sigma(Int(3)), Error);
}

TEST_CASE("evaluate") {
    F2World w;
    PF f = w.x_pow(sx(1)) - w.x_pow(SigmaExponent(1));
    HF a = w.t(SigmaRational(-1));
    HF v = f.evaluate(a);
    CHECK(v == w.t(-SigmaRational::sigma()) - w.t(SigmaRational(-1)));
    CHECK(PF::constant(w.one).evaluate(a) == w.one);
    CHECK(w.x_pow(SigmaExponent(1)).evaluate(a) == a);
}

TEST_CASE("taylor identity at random points") {
    F2World w;
    test_support::Rng rng(31);
    int done = 0;
    for (int trial = 0; done < 60 && trial < 400; ++trial) {
        PF f = random_poly(rng, w, 4);
        if (f.is_zero()) continue;
        HF a = random_point(rng, w);
        HF h = random_point(rng, w);
        HF direct = f.evaluate(a + h);
        HF sum = HF::zero();
        for (const auto& [nu, fnu] : f.taylor())
            sum = nu.is_zero() ? sum + fnu.evaluate(a) : sum + fnu.evaluate(a) * coeff_pow_exponent(h, nu);
        CHECK(direct == sum);
        ++done;
    }
    CHECK(done == 60);
}

TEST_CASE("rescale-derivative law") {
    F2World w;
    test_support::Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        PF f = random_poly(rng, w, 3);
        HF u = w.t(SigmaRational(rng.int_in(-2, 2)));
        PF g = f.rescale(u);
        auto tg = g.taylor();
        for (const auto& [nu, gnu] : tg) {
            // g_nu(x) = u^nu f_nu(u x)
            PF expect = f.transformal_derivative(nu).rescale(u).scaled(coeff_pow_exponent(u, nu));
            CHECK(gnu == expect);
        }
    }
}

TEST_CASE("specialization is a ring homomorphism") {
    F2World w;
    test_support::Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        PF a = random_poly(rng, w, 3), b = random_poly(rng, w, 3);
        std::vector<SigmaExponent> support;
        for (const auto& e : a.support()) support.push_back(e);
        for (const auto& e : b.support()) support.push_back(e);
        for (const auto& e : (a * b).support()) support.push_back(e);
        for (const auto& e : (a + b).support()) support.push_back(e);
        Int q = injectivity_threshold(support);
        if (q < 2) q = 2;
        auto lhs_mul = (a * b).specialize_sigma(q);
        auto rhs_mul = [&] {
            std::map<Int, HF> out;
            for (const auto& [na, ca] : a.specialize_sigma(q))
                for (const auto& [nb, cb] : b.specialize_sigma(q)) {
                    auto it = out.find(na + nb);
                    if (it == out.end())
                        out.emplace(na + nb, ca * cb);
                    else
                        it->second = it->second + ca * cb;
                }
            for (auto it = out.begin(); it != out.end();)
                it = coeff_is_zero(it->second) ? out.erase(it) : std::next(it);
            return out;
        }();
        CHECK(lhs_mul == rhs_mul);
    }
}

TEST_CASE("degree is a monoid homomorphism into lex order") {
    // integer coefficients: check over Q to avoid characteristic accidents
    test_support::Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        PQ a, b;
        for (int i = 0; i < 3; ++i) {
            a = a + PQ::monomial(test_support::random_exponent(rng, 2, 2), HQ::constant(Rat(rng.int_in(-3, 3))));
            b = b + PQ::monomial(test_support::random_exponent(rng, 2, 2), HQ::constant(Rat(rng.int_in(-3, 3))));
        }
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(*(a * b).degree() == *a.degree() + *b.degree());
        auto ds = (a + b).degree();
        if (ds) CHECK(*ds <= std::max(*a.degree(), *b.degree()));
    }
}
