#pragma once

#include "error.hpp"
#include "finite_field.hpp"
#include "numeric.hpp"
#include "sigma.hpp"

namespace transval {

// Customization points every coefficient ring provides: exact field ops, the
// distinguished automorphism sigma_k, the Frobenius, and integer scaling.
// Rationals (characteristic zero: sigma_k and phi are the identity):

inline bool coeff_is_zero(const Rat& c) { return c == 0; }
inline Rat coeff_inverse(const Rat& c) {
    if (c == 0) fail(ErrorCode::DivisionByZero, "inverse of 0 in Q");
    return Rat(1) / c;
}
inline Rat coeff_sigma(const Rat& c, long) { return c; }
inline Rat coeff_frobenius(const Rat& c, long) { return c; }
inline Rat coeff_scale_int(const Rat& c, const Int& n) { return c * Rat(n); }
inline Rat coeff_pow_int(const Rat& c, const Int& e) {
    if (!e.fits_slong_p()) fail(ErrorCode::BudgetExceeded, "exponent too large");
    return pow_rat(c, e.get_si());
}
inline Int coeff_char(const Rat&) { return Int(1); }
inline Rat coeff_zero_like(const Rat&) { return Rat(0); }
inline Rat coeff_one_like(const Rat&) { return Rat(1); }
inline std::string coeff_str(const Rat& c) { return to_string(c); }

// Finite fields:

inline bool coeff_is_zero(const Fq& c) { return c.is_zero(); }
inline Fq coeff_inverse(const Fq& c) { return c.inverse(); }
inline Fq coeff_sigma(const Fq& c, long k) { return c.sigma(k); }
inline Fq coeff_frobenius(const Fq& c, long m) { return c.frobenius(m); }
inline Fq coeff_scale_int(const Fq& c, const Int& n) {
    if (c.is_zero()) return c;
    return c * c.field()->from_int(n);
}
inline Fq coeff_pow_int(const Fq& c, const Int& e) { return c.pow(e); }
inline Int coeff_char(const Fq& c) {
    if (!c.field()) fail(ErrorCode::PreconditionFailed, "finite field element without context");
    return Int(static_cast<long>(c.field()->p()));
}
inline Fq coeff_zero_like(const Fq& c) { return c.field() ? c.field()->zero() : c; }
inline Fq coeff_one_like(const Fq& c) {
    if (!c.field()) fail(ErrorCode::PreconditionFailed, "finite field element without context");
    return c.field()->one();
}
inline std::string coeff_str(const Fq& c) { return c.str(); }

template <class C>
concept CoefficientRing = requires(const C& a, const C& b, long k, const Int& n) {
    { a + b } -> std::convertible_to<C>;
    { a - b } -> std::convertible_to<C>;
    { a* b } -> std::convertible_to<C>;
    { -a } -> std::convertible_to<C>;
    { a == b } -> std::convertible_to<bool>;
    { coeff_is_zero(a) } -> std::convertible_to<bool>;
    { coeff_inverse(a) } -> std::convertible_to<C>;
    { coeff_sigma(a, k) } -> std::convertible_to<C>;
    { coeff_frobenius(a, k) } -> std::convertible_to<C>;
    { coeff_scale_int(a, n) } -> std::convertible_to<C>;
    { coeff_pow_int(a, n) } -> std::convertible_to<C>;
    { coeff_char(a) } -> std::convertible_to<Int>;
    { coeff_zero_like(a) } -> std::convertible_to<C>;
    { coeff_one_like(a) } -> std::convertible_to<C>;
};

// t^nu for nu in N[sigma/p^infinity]: the product of sigma^i-shifts raised to
// the (possibly p-fractional) entries, via p-th roots in the perfect ring.
template <CoefficientRing C>
C coeff_pow_exponent(const C& t, const SigmaExponent& nu) {
    if (nu.is_zero()) return coeff_one_like(t);
    if (coeff_is_zero(t)) return coeff_zero_like(t);
    C acc = coeff_one_like(t);
    Int p = coeff_char(t);
    for (const auto& [i, v] : nu.entries()) {
        Int num = v.get_num();
        Int den = v.get_den();
        long root = 0;
        if (den != 1) {
            if (p == 1) fail(ErrorCode::NonUnitScale, "fractional exponent over characteristic zero");
            if (!is_power_of(den, p)) fail(ErrorCode::InvalidExponent, "exponent denominator not a p-power");
            root = static_cast<long>(p_adic_valuation(den, p));
        }
        C base = coeff_frobenius(coeff_sigma(t, static_cast<long>(i)), -root);
        acc = acc * coeff_pow_int(base, num);
    }
    return acc;
}

} // namespace transval
