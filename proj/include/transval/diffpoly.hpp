#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "coeff.hpp"
#include "error.hpp"
#include "hahn.hpp"
#include "sigma.hpp"

namespace transval {

namespace detail {

inline std::optional<Int> maybe_char(const Rat&) { return Int(1); }
inline std::optional<Int> maybe_char(const Fq& c) {
    if (!c.field()) return std::nullopt;
    return Int(static_cast<long>(c.field()->p()));
}
template <CoefficientRing C>
std::optional<Int> maybe_char(const HahnSeries<C>& c) {
    if (c.terms().empty()) return std::nullopt;
    return maybe_char(c.terms().front().second);
}

} // namespace detail

// All exponents digitwise dominated by nu (including 0 and nu itself); these
// are exactly the mu with nonvanishing transformal binomial against nu.
inline std::vector<SigmaExponent> dominated_exponents(const SigmaExponent& nu, const Int& p) {
    std::vector<SigmaExponent> out{SigmaExponent()};
    if (p == 1) {
        if (!nu.is_integral()) fail(ErrorCode::InvalidExponent, "fractional exponent in characteristic zero");
        for (const auto& [i, v] : nu.entries()) {
            std::vector<SigmaExponent> next;
            unsigned long top = v.get_num().get_ui();
            for (const auto& base : out)
                for (unsigned long k = 0; k <= top; ++k)
                    next.push_back(base + SigmaExponent::term(i, Rat(static_cast<long>(k))));
            out = std::move(next);
        }
        return out;
    }
    DigitMatrix d = digit_decompose(nu, p);
    Rat unscale(Int(1), pow_int(p, d.clearing_power));
    for (const auto& [ij, digit] : d.digits) {
        std::vector<SigmaExponent> next;
        for (const auto& base : out)
            for (unsigned k = 0; k <= digit; ++k)
                next.push_back(base +
                               SigmaExponent::term(ij.first, Rat(static_cast<long>(k)) * Rat(pow_int(p, ij.second)) * unscale));
        out = std::move(next);
    }
    return out;
}

// Difference polynomial in one variable: finitely supported map from the
// exponent monoid to a coefficient ring.
template <CoefficientRing C>
class DiffPoly {
public:
    using Terms = std::map<SigmaExponent, C>;

    DiffPoly() = default;
    explicit DiffPoly(Terms terms) : terms_(std::move(terms)) { prune(); }

    static DiffPoly monomial(SigmaExponent e, C c) {
        DiffPoly f;
        if (!coeff_is_zero(c)) f.terms_.emplace(std::move(e), std::move(c));
        return f;
    }
    static DiffPoly constant(C c) { return monomial(SigmaExponent(), std::move(c)); }
    static DiffPoly variable(C one) { return monomial(SigmaExponent(1), std::move(one)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero()); }

    std::optional<SigmaExponent> degree() const {
        if (terms_.empty()) return std::nullopt;
        return terms_.rbegin()->first;
    }

    C coeff(const SigmaExponent& e, const C& zero_like) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? coeff_zero_like(zero_like) : it->second;
    }

    // characteristic exponent of the coefficient ring, read off the terms
    Int characteristic() const {
        for (const auto& [e, c] : terms_) {
            if (auto p = detail::maybe_char(c)) return *p;
        }
        fail(ErrorCode::PrecisionLoss, "cannot determine coefficient characteristic");
    }

    friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, c);
        return out;
    }
    DiffPoly operator-() const {
        DiffPoly out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }
    friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return a + (-b); }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }
    DiffPoly scaled(const C& c) const {
        DiffPoly out;
        for (const auto& [e, x] : terms_) out.add_term(e, x * c);
        return out;
    }
    friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.terms_ == b.terms_; }

    // nu-th transformal derivative: coefficient of eps^nu in f(x + eps)
    DiffPoly transformal_derivative(const SigmaExponent& mu) const {
        Int p = is_zero() ? Int(1) : characteristic();
        DiffPoly out;
        for (const auto& [nu, c] : terms_) {
            Int b;
            // subtraction nu - mu must stay in the monoid; domination ensures it
            if (p == 1) {
                b = transformal_binomial(nu, mu, p);
            } else {
                if (!digit_dominates(mu, nu, p)) continue;
                b = transformal_binomial(nu, mu, p);
            }
            if (b == 0) continue;
            out.add_term(nu - mu, coeff_scale_int(c, b));
        }
        return out;
    }

    DiffPoly derivative() const { return transformal_derivative(SigmaExponent(1)); }

    // complete Taylor expansion: all nonzero f_nu, ordered by nu
    std::vector<std::pair<SigmaExponent, DiffPoly>> taylor() const {
        Int p = is_zero() ? Int(1) : characteristic();
        std::map<SigmaExponent, DiffPoly> acc;
        for (const auto& [nu, c] : terms_) {
            for (const auto& mu : dominated_exponents(nu, p)) {
                Int b = transformal_binomial(nu, mu, p);
                if (b == 0) continue;
                acc[mu].add_term(nu - mu, coeff_scale_int(c, b));
            }
        }
        std::vector<std::pair<SigmaExponent, DiffPoly>> out;
        for (auto& [mu, f] : acc) {
            f.prune();
            if (!f.is_zero()) out.emplace_back(mu, std::move(f));
        }
        return out;
    }

    // g(x) = f(t x): each c_nu picks up t^nu
    DiffPoly rescale(const C& t) const {
        DiffPoly out;
        for (const auto& [nu, c] : terms_)
            out.add_term(nu, nu.is_zero() ? c : C(c * coeff_pow_exponent(t, nu)));
        return out;
    }

    // g(x) = f(x + a) = sum f_nu(a) x^nu
    DiffPoly translate(const C& a) const {
        DiffPoly out;
        for (const auto& [nu, fnu] : taylor()) out.add_term(nu, fnu.evaluate(a));
        return out;
    }

    C evaluate(const C& a) const {
        C acc = coeff_zero_like(a);
        for (const auto& [nu, c] : terms_)
            acc = nu.is_zero() ? acc + c : acc + c * coeff_pow_exponent(a, nu);
        return acc;
    }

    struct TwistReport {
        DiffPoly poly;
        unsigned sigma_shift = 0;   // exponents divided by sigma^s, coefficients by sigma_k^{-s}
        long frobenius_power = 0;   // net p-divisions of exponents (p-th roots of coefficients)
    };

    // Normalize by twisting until some exponent has constant term prime to p,
    // so the derivative of the output is nonzero (nonconstant input). Each
    // step strictly decreases the lex degree, so the loop is total.
    TwistReport twist_normalize() const {
        if (is_zero()) fail(ErrorCode::ZeroPolynomial, "twist_normalize of 0");
        Int p = characteristic();
        TwistReport rep{*this, 0, 0};
        for (;;) {
            if (rep.poly.is_constant()) break;
            bool all_const_zero = true;
            for (const auto& [nu, c] : rep.poly.terms_)
                if (nu.entry(0) != 0) all_const_zero = false;
            if (all_const_zero) {
                DiffPoly next;
                for (const auto& [nu, c] : rep.poly.terms_) next.add_term(nu.sigma_shifted(-1), coeff_sigma(c, -1));
                rep.poly = std::move(next);
                rep.sigma_shift += 1;
                continue;
            }
            if (p == 1) break; // characteristic zero: nonzero constant entry already gives f' != 0
            // clear p-denominators in the constant entries first
            unsigned long clear = 0;
            for (const auto& [nu, c] : rep.poly.terms_) {
                Int den = nu.entry(0).get_den();
                if (den != 1) clear = std::max(clear, static_cast<unsigned long>(p_adic_valuation(den, p)));
            }
            if (clear > 0) {
                DiffPoly next;
                Rat scale(pow_int(p, clear));
                for (const auto& [nu, c] : rep.poly.terms_)
                    next.add_term(nu.scaled(scale), coeff_frobenius(c, static_cast<long>(clear)));
                rep.poly = std::move(next);
                rep.frobenius_power -= static_cast<long>(clear);
                continue;
            }
            bool all_divisible = true;
            for (const auto& [nu, c] : rep.poly.terms_) {
                Rat e0 = nu.entry(0);
                if (e0 != 0 && e0.get_num() % p != 0) all_divisible = false;
            }
            if (!all_divisible) break;
            DiffPoly next;
            Rat inv_p(Int(1), p);
            for (const auto& [nu, c] : rep.poly.terms_) next.add_term(nu.scaled(inv_p), coeff_frobenius(c, -1));
            rep.poly = std::move(next);
            rep.frobenius_power += 1;
        }
        return rep;
    }

    // sigma -> q on exponents; coefficients unchanged
    std::map<Int, C> specialize_sigma(const Int& q) const {
        if (q < 2) fail(ErrorCode::PreconditionFailed, "specialization needs q >= 2");
        std::map<Int, C> out;
        for (const auto& [nu, c] : terms_) {
            Rat v = nu.evaluate(Rat(q));
            if (!is_integer(v) || v < 0)
                fail(ErrorCode::InvalidExponent, "exponent does not specialize to a natural at q=" + to_string(q));
            Int key = v.get_num();
            if (out.count(key)) fail(ErrorCode::SupportCollision, "support collides under sigma -> " + to_string(q));
            out.emplace(std::move(key), c);
        }
        return out;
    }

    std::vector<SigmaExponent> support() const {
        std::vector<SigmaExponent> s;
        s.reserve(terms_.size());
        for (const auto& [e, c] : terms_) s.push_back(e);
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string cs = coeff_str_of(c);
            bool negative = !cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos;
            if (negative) cs.erase(0, 1);
            if (first) {
                if (negative) os << "-";
            } else {
                os << (negative ? " - " : " + ");
            }
            first = false;
            if (e.is_zero()) {
                os << cs;
                continue;
            }
            if (cs != "1") os << cs << "*";
            os << "x";
            if (!(e == SigmaExponent(1))) os << "^(" << e.str() << ")";
        }
        return os.str();
    }

private:
    template <class D>
    static std::string coeff_str_of(const D& c) {
        std::string s = coeff_str(c);
        if (s.find_first_of("+-", 1) != std::string::npos) return "(" + s + ")";
        return s;
    }
    template <class D>
    static std::string coeff_str_of(const HahnSeries<D>& c) {
        std::string s = c.str();
        if (c.terms().size() > 1 || c.prec() || s.find_first_of("+-*", 1) != std::string::npos)
            return "(" + s + ")";
        return s;
    }

    void add_term(const SigmaExponent& e, const C& c) {
        if (coeff_is_zero(c)) return;
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second = it->second + c;
            if (coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (coeff_is_zero(it->second))
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    Terms terms_;
};

// ordinary one-variable polynomial produced by specialization
template <CoefficientRing C>
C evaluate_unipoly(const std::map<Int, C>& f, const C& a) {
    C acc = coeff_zero_like(a);
    for (const auto& [n, c] : f) acc = n == 0 ? acc + c : acc + c * coeff_pow_int(a, n);
    return acc;
}

template <CoefficientRing C>
std::string unipoly_str(const std::map<Int, C>& f) {
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        std::string cs = coeff_str(it->second);
        bool negative = !cs.empty() && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos;
        if (negative) cs.erase(0, 1);
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (it->first == 0) {
            os << cs;
            continue;
        }
        if (cs != "1") os << cs << "*";
        os << "x";
        if (it->first != 1) os << "^" << it->first.get_str();
    }
    return os.str();
}

} // namespace transval
