#pragma once

#include <gmpxx.h>

#include <string>

#include "error.hpp"

namespace transval {

// Exact arithmetic backends. Everything downstream assumes these never
// overflow; GMP canonicalizes rationals (positive denominator, lowest terms).
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) fail(ErrorCode::DivisionByZero, "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int pow_int(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0 && e < 0) fail(ErrorCode::DivisionByZero, "0^negative");
    Rat num, out;
    unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(out.get_num().get_mpz_t(), base.get_num().get_mpz_t(), mag);
    mpz_pow_ui(out.get_den().get_mpz_t(), base.get_den().get_mpz_t(), mag);
    out.canonicalize();
    if (e < 0) out = 1 / out;
    return out;
}

inline Int binomial_int(const Int& n, const Int& k) {
    if (k < 0 || k > n) return Int(0);
    Int out;
    mpz_bin_ui(out.get_mpz_t(), n.get_mpz_t(), k.get_ui());
    return out;
}

// Largest e with p^e dividing n exactly; n must be nonzero.
inline unsigned p_adic_valuation(Int n, const Int& p) {
    unsigned e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline bool is_power_of(Int n, const Int& p) {
    if (n < 1) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rat& r) { return r.get_str(); }

} // namespace transval
