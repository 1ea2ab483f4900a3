#include <doctest.h>

#include <transval/gamma.hpp>

#include "test_support.hpp"

using namespace transval;

namespace {

GammaVector vec2(SigmaRational a, SigmaRational b) { return GammaVector({std::move(a), std::move(b)}); }

} // namespace

TEST_CASE("convex level picks the leading coordinate") {
    CHECK(convex_level(vec2(SigmaRational(0), SigmaRational(5))) == 1);
    CHECK(convex_level(vec2(SigmaRational::sigma_power(-3), SigmaRational(-7))) == 0);
    CHECK(convex_level(GammaVector::zero(2)) == 2);
}

TEST_CASE("convex levels are sigma-invariant and lex order is omega-increasing") {
    test_support::Rng rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        GammaVector g({test_support::random_sigma_rational(rng), test_support::random_sigma_rational(rng),
                       test_support::random_sigma_rational(rng)});
        CHECK(convex_level(g) == convex_level(g.sigma_applied()));
        if (lex_compare(g, GammaVector::zero(3)) == Order::Greater) {
            for (long n : {1L, 7L, 1000L}) {
                CHECK(lex_compare(g.sigma_applied(), g.scaled(SigmaRational(n))) == Order::Greater);
            }
        }
    }
}

TEST_CASE("transformally prime ideals by kind") {
    CHECK_FALSE(is_transformally_prime(GammaIdeal::radical_principal(GammaVector({SigmaRational(1)})), 1));
    CHECK(is_transformally_prime(GammaIdeal::positive_part(1), 2));
    CHECK_FALSE(is_transformally_prime(GammaIdeal::everything(), 1));
    // in d=1 exactly the strictly-positive part and the point at infinity survive
    CHECK(is_transformally_prime(GammaIdeal::positive_part(0), 1));
    CHECK(is_transformally_prime(GammaIdeal::point_at_infinity(), 1));
}

TEST_CASE("transformal divisibility by Gamma kind") {
    SigmaPoly nu = SigmaPoly::sigma() - SigmaPoly(1);
    CHECK(divisible_defect(GammaKind::FullVectorSpace, nu, Int(2)));
    CHECK_FALSE(divisible_defect(GammaKind::LaurentLattice, nu, Int(2)));
    CHECK(divisible_defect(GammaKind::LaurentLattice, SigmaPoly::sigma(), Int(2)));
    CHECK(divisible_defect(GammaKind::LaurentLattice, SigmaPoly(4), Int(2)));
    CHECK_FALSE(divisible_defect(GammaKind::LaurentLattice, SigmaPoly(4), Int(3)));
    CHECK_THROWS_AS(divisible_defect(GammaKind::LaurentLattice, SigmaPoly(), Int(2)), Error);
}
