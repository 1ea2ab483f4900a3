#include <doctest.h>

#include <transval/sigma.hpp>

#include "test_support.hpp"

using namespace transval;

namespace {

SigmaRational S() { return SigmaRational::sigma(); }

} // namespace

TEST_CASE("Q(sigma) ordering: sigma is infinitely large") {
    CHECK(compare(S(), SigmaRational(Int("1000000000"))) == Order::Greater);
    CHECK(compare(SigmaRational::sigma_power(-1), SigmaRational(Rat(1, 1000))) == Order::Less);
    // (s+1)/(s-1) > 1, the difference being 2/(s-1)
    SigmaRational x = (S() + SigmaRational(1)) / (S() - SigmaRational(1));
    CHECK(compare(x, SigmaRational(1)) == Order::Greater);
    CHECK(compare(x, x) == Order::Equal);
}

TEST_CASE("Q(sigma) field arithmetic in canonical form") {
    SigmaRational inv = SigmaRational(1) / (S() - SigmaRational(1));
    CHECK((S() - SigmaRational(1)) * inv == SigmaRational(1));

    SigmaRational lhs = SigmaRational::sigma_power(-1) + SigmaRational::sigma_power(-2);
    SigmaRational rhs = (S() + SigmaRational(1)) / (S() * S());
    CHECK(lhs == rhs);

    SigmaRational a = (S() + SigmaRational(3)) / (S() * S() - SigmaRational(7));
    CHECK(SigmaRational(0) + a == a);
    CHECK_THROWS_AS(a / SigmaRational(0), Error);
}

TEST_CASE("digit decomposition") {
    // p=2: 3s has digits (1,0)=1 and (1,1)=1
    auto d = digit_decompose(SigmaExponent::term(1, Rat(3)), Int(2));
    CHECK(d.digits.size() == 2);
    CHECK(d.digits.at({1, 0}) == 1);
    CHECK(d.digits.at({1, 1}) == 1);
    CHECK(d.reconstruct() == SigmaExponent::term(1, Rat(3)));

    // p=3: 5s^2 -> (2,0)=2, (2,1)=1
    auto e = digit_decompose(SigmaExponent::term(2, Rat(5)), Int(3));
    CHECK(e.digits.at({2, 0}) == 2);
    CHECK(e.digits.at({2, 1}) == 1);

    CHECK(digit_decompose(SigmaExponent(), Int(2)).digits.empty());
    CHECK_THROWS_AS(digit_decompose(SigmaExponent(3), Int(1)), Error);
}

TEST_CASE("digit decomposition reports the clearing power") {
    // s/2 over p=2 clears with one power of p
    auto d = digit_decompose(SigmaExponent::term(1, Rat(1, 2)), Int(2));
    CHECK(d.clearing_power == 1);
    CHECK(d.digits.at({1, 0}) == 1);
    CHECK(d.reconstruct() == SigmaExponent::term(1, Rat(1, 2)));
}

TEST_CASE("digitwise domination") {
    SigmaExponent s = SigmaExponent::sigma_power(1);
    CHECK(digit_dominates(s, s + SigmaExponent(1), Int(2)));
    CHECK_FALSE(digit_dominates(s, s.scaled(Rat(2)), Int(2)));
    CHECK(digit_dominates(s, s, Int(2)));
    CHECK_FALSE(digit_dominates(s + SigmaExponent(1), s, Int(2)));
}

TEST_CASE("transformal binomial coefficients mod p") {
    SigmaExponent s = SigmaExponent::sigma_power(1);
    CHECK(transformal_binomial(s + SigmaExponent(1), s, Int(2)) == 1);
    CHECK(transformal_binomial(s.scaled(Rat(2)), s, Int(2)) == 0);
    CHECK(transformal_binomial(s.scaled(Rat(3)), s, Int(2)) == 1);
    // characteristic zero: exact integers per sigma-index
    CHECK(transformal_binomial(s.scaled(Rat(3)), s, Int(1)) == 3);
    CHECK(transformal_binomial(s.scaled(Rat(4)), s.scaled(Rat(2)), Int(1)) == 6);
}

TEST_CASE("brute-force binomial oracle agrees on small support") {
    // Expand (1+x)^(nu(q)) over F_p and read off coefficients at mu(q).
    // The identity with the digit formula needs q to be a power of p (the
    // Frobenius specialization), past the injectivity threshold.
    for (long pp : {2L, 3L}) {
        Int p(pp);
        std::vector<SigmaExponent> family;
        for (unsigned a = 0; a <= 3; ++a)
            for (unsigned b = 0; b <= 3; ++b)
                family.push_back(SigmaExponent::term(0, Rat(a)) + SigmaExponent::term(1, Rat(b)));
        Int threshold = injectivity_threshold(family);
        Int q(pp);
        while (q < threshold) q *= p;
        test_support::PascalModP pascal(static_cast<unsigned>(pp), 4 * (1 + q.get_ui()) + 1);
        for (const auto& nu : family) {
            for (const auto& mu : family) {
                unsigned long nq = Rat(nu.evaluate(Rat(q))).get_num().get_ui();
                unsigned long mq = Rat(mu.evaluate(Rat(q))).get_num().get_ui();
                Int expect(static_cast<long>(pascal.at(nq, mq)));
                CHECK(transformal_binomial(nu, mu, p) == expect);
                CHECK((expect != 0) == digit_dominates(mu, nu, p));
            }
        }
    }
}

TEST_CASE("specialization sigma -> q") {
    SigmaRational f = S() * S() + S();
    CHECK(specialize_q(f, Rat(5)) == 30);
    CHECK(specialize_q(SigmaRational(1) / (S() - SigmaRational(1)), Rat(3)) == Rat(1, 2));
    CHECK(specialize_q(SigmaRational(0), Rat(7)) == 0);
    CHECK_THROWS_AS(specialize_q(SigmaRational(1) / (S() - SigmaRational(3)), Rat(3)), Error);
}

TEST_CASE("injectivity threshold") {
    using E = SigmaExponent;
    CHECK(injectivity_threshold({E::sigma_power(1), E(3)}) == 4);
    CHECK(injectivity_threshold({E::sigma_power(1) + E(1), E::sigma_power(1).scaled(Rat(2))}) == 2);
    CHECK(injectivity_threshold({E::sigma_power(2)}) == 2);
}

TEST_CASE("order compatibility with specialization") {
    test_support::Rng rng(20260808);
    for (int trial = 0; trial < 300; ++trial) {
        SigmaRational a = test_support::random_sigma_rational(rng);
        SigmaRational b = test_support::random_sigma_rational(rng);
        SigmaRational d = a - b;
        Int q0 = order_specialization_bound(d);
        for (Int q = q0; q < q0 + 4; ++q) {
            Rat da = specialize_q(a, Rat(q)), db = specialize_q(b, Rat(q));
            int want = d.sign();
            int got = da > db ? 1 : (da < db ? -1 : 0);
            REQUIRE(want == got);
        }
    }
}

TEST_CASE("omega-increasing law on exponents") {
    test_support::Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        SigmaExponent alpha = test_support::random_exponent(rng, 3, 6);
        if (alpha.is_zero()) continue;
        SigmaRational a = alpha.as_sigma_rational();
        for (long n : {1L, 2L, 1000L}) {
            CHECK(compare(S() * a, SigmaRational(n) * a) == Order::Greater);
        }
    }
}

TEST_CASE("digitwise domination is a partial order with p-power atoms") {
    Int p(2);
    std::vector<SigmaExponent> all;
    for (unsigned a = 0; a <= 4; ++a)
        for (unsigned b = 0; b <= 4; ++b)
            all.push_back(SigmaExponent::term(0, Rat(a)) + SigmaExponent::term(1, Rat(b)));
    for (const auto& x : all) {
        CHECK(digit_dominates(x, x, p));
        for (const auto& y : all) {
            if (digit_dominates(x, y, p) && digit_dominates(y, x, p)) CHECK(x == y);
            // refines the total degree order
            if (digit_dominates(x, y, p)) CHECK(x <= y);
        }
    }
    // minimal nonzero elements are exactly the transformal p-th powers
    for (const auto& x : all) {
        if (x.is_zero()) continue;
        bool minimal = true;
        for (const auto& y : all) {
            if (!y.is_zero() && !(y == x) && digit_dominates(y, x, p)) minimal = false;
        }
        CHECK(minimal == x.is_transformal_p_power(p));
    }
}

TEST_CASE("truncated approximation of dense divisibility") {
    SigmaPoly nu = SigmaPoly::sigma() - SigmaPoly(1);
    LaurentPoly beta = truncate_approx(SigmaRational(1), nu, 3);
    REQUIRE(beta.coeffs.size() == 4);
    for (int e = -4; e <= -1; ++e) CHECK(beta.coeffs.at(e) == 1);
    SigmaRational resid = SigmaRational(nu) * beta.as_sigma_rational() - SigmaRational(1);
    CHECK(compare(resid.abs(), SigmaRational::sigma_power(-3)) == Order::Less);

    // already Laurent: returned exactly
    LaurentPoly exact = truncate_approx(S(), SigmaPoly(1), 5);
    CHECK(exact.as_sigma_rational() == S());
    CHECK(truncate_approx(SigmaRational(0), nu, 2).coeffs.empty());

    test_support::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        SigmaRational target = test_support::random_sigma_rational(rng);
        SigmaPoly d = test_support::random_sigma_poly(rng, 2, 5, /*nonzero=*/true);
        unsigned n = 1 + rng.below(4);
        LaurentPoly b = truncate_approx(target, d, n);
        SigmaRational r = SigmaRational(d) * b.as_sigma_rational() - target;
        CHECK(compare(r.abs(), SigmaRational::sigma_power(-static_cast<int>(n))) == Order::Less);
    }
}

TEST_CASE("rational cut equation x + alpha = nu x + beta") {
    CHECK(solve_affine_cut(SigmaRational(1), SigmaRational(0), SigmaPoly::sigma()) ==
          SigmaRational(1) / (S() - SigmaRational(1)));
    SigmaRational alpha = (S() + SigmaRational(2)) / S();
    CHECK(solve_affine_cut(alpha, alpha, SigmaPoly::sigma()) == SigmaRational(0));
    SigmaPoly s2 = SigmaPoly::sigma() * SigmaPoly::sigma();
    CHECK(solve_affine_cut(SigmaRational(0), SigmaRational(s2) - SigmaRational(1), s2) == SigmaRational(-1));
    CHECK_THROWS_AS(solve_affine_cut(SigmaRational(1), SigmaRational(0), SigmaPoly(5)), Error);

    test_support::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        SigmaRational a = test_support::random_sigma_rational(rng);
        SigmaRational b = test_support::random_sigma_rational(rng);
        SigmaPoly nu = test_support::random_sigma_poly(rng, 2, 4, true);
        if (nu.degree() < 1) continue;
        if (nu.leading() < 0) nu = -nu;
        SigmaRational x = solve_affine_cut(a, b, nu);
        CHECK(x + a == SigmaRational(nu) * x + b);
    }
}
