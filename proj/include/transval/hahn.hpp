#pragma once

#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "coeff.hpp"
#include "error.hpp"
#include "sigma.hpp"

namespace transval {

// Support and depth budgets; Hahn supports can grow at omega-type rates, so
// overruns are typed errors rather than silent truncation.
inline constexpr size_t kMaxSeriesTerms = 4096;
inline constexpr unsigned kMaxPdenDepth = 64;

// Valuation of a series: a value, exactly infinity (the zero series), or
// unknown because everything below the precision bound cancelled.
struct Valuation {
    enum class Kind { Finite, Infinity, Unknown };
    Kind kind = Kind::Infinity;
    SigmaRational value; // meaningful for Finite; for Unknown holds the precision bound

    static Valuation finite(SigmaRational v) { return {Kind::Finite, std::move(v)}; }
    static Valuation infinity() { return {Kind::Infinity, {}}; }
    static Valuation unknown(SigmaRational prec) { return {Kind::Unknown, std::move(prec)}; }

    bool is_finite() const { return kind == Kind::Finite; }
    // certified lower bound: every nonzero term sits at or above this
    std::optional<SigmaRational> lower_bound() const {
        if (kind == Kind::Infinity) return std::nullopt;
        return value;
    }
};

// Truncated Hahn series sum c_gamma t^gamma with exponents in Q(sigma),
// strictly increasing, all below prec when truncated.
template <CoefficientRing C>
class HahnSeries {
public:
    using Term = std::pair<SigmaRational, C>;

    HahnSeries() = default;
    HahnSeries(std::vector<Term> terms, std::optional<SigmaRational> prec = std::nullopt) : prec_(std::move(prec)) {
        set_terms(std::move(terms));
    }

    static HahnSeries zero() { return HahnSeries(); }
    static HahnSeries monomial(SigmaRational e, C c, std::optional<SigmaRational> prec = std::nullopt) {
        return HahnSeries({{std::move(e), std::move(c)}}, std::move(prec));
    }
    static HahnSeries constant(C c) { return monomial(SigmaRational(0), std::move(c)); }

    const std::vector<Term>& terms() const { return terms_; }
    const std::optional<SigmaRational>& prec() const { return prec_; }
    bool is_exact() const { return !prec_.has_value(); }
    bool is_exact_zero() const { return terms_.empty() && is_exact(); }

    Valuation valuation() const {
        if (!terms_.empty()) return Valuation::finite(terms_.front().first);
        if (prec_) return Valuation::unknown(*prec_);
        return Valuation::infinity();
    }

    const C& leading_coeff() const {
        if (terms_.empty()) fail(ErrorCode::PrecisionLoss, "no leading term");
        return terms_.front().second;
    }

    // coefficient at a given exponent (zero-like if absent; needs a sample)
    C coeff_at(const SigmaRational& e) const {
        for (const auto& [g, c] : terms_)
            if (g == e) return c;
        if (terms_.empty()) fail(ErrorCode::PrecisionLoss, "empty series has no sample coefficient");
        return coeff_zero_like(terms_.front().second);
    }

    // residue: the coefficient at exponent 0 for an integral series
    C residue() const { return coeff_at(SigmaRational(0)); }

    HahnSeries truncated_to(const SigmaRational& prec) const {
        HahnSeries out = *this;
        out.prec_ = out.prec_ ? min(*out.prec_, prec) : prec;
        out.set_terms(std::move(out.terms_));
        return out;
    }

    friend HahnSeries operator+(const HahnSeries& a, const HahnSeries& b) {
        std::vector<Term> t;
        t.reserve(a.terms_.size() + b.terms_.size());
        t.insert(t.end(), a.terms_.begin(), a.terms_.end());
        t.insert(t.end(), b.terms_.begin(), b.terms_.end());
        return HahnSeries(std::move(t), min_prec(a.prec_, b.prec_));
    }
    HahnSeries operator-() const {
        HahnSeries out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }
    friend HahnSeries operator-(const HahnSeries& a, const HahnSeries& b) { return a + (-b); }

    friend HahnSeries operator*(const HahnSeries& a, const HahnSeries& b) {
        // prec(ab) = min(v(a)+prec(b), v(b)+prec(a)) with exact sides dropped
        std::optional<SigmaRational> prec;
        auto side = [&prec](const HahnSeries& x, const HahnSeries& y) {
            if (!y.prec_) return;
            auto vx = x.valuation().lower_bound();
            if (!vx) return; // exact zero: product is exact zero
            SigmaRational cand = *vx + *y.prec_;
            prec = prec ? min(*prec, cand) : cand;
        };
        if (a.is_exact_zero() || b.is_exact_zero()) return zero();
        side(a, b);
        side(b, a);
        std::vector<Term> t;
        t.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) t.emplace_back(ea + eb, ca * cb);
        return HahnSeries(std::move(t), std::move(prec));
    }

    HahnSeries scaled(const C& c) const {
        HahnSeries out = *this;
        for (auto& [e, x] : out.terms_) x = x * c;
        out.set_terms(std::move(out.terms_));
        return out;
    }

    HahnSeries shifted(const SigmaRational& e) const {
        HahnSeries out = *this;
        for (auto& [g, c] : out.terms_) g = g + e;
        if (out.prec_) out.prec_ = *out.prec_ + e;
        return out;
    }

    // multiplicative inverse. A truncated input fixes the output precision
    // (prec - 2 v); an exact multi-term input needs target_prec, since its
    // inverse is an infinite series.
    HahnSeries inverse(std::optional<SigmaRational> target_prec = std::nullopt) const {
        if (terms_.empty()) {
            if (is_exact()) fail(ErrorCode::DivisionByZero, "inverse of exact zero series");
            fail(ErrorCode::PrecisionLoss, "inverse of O(t^prec): indistinguishable from zero");
        }
        const SigmaRational v = terms_.front().first;
        C lead_inv = coeff_inverse(terms_.front().second);
        HahnSeries head_inv = monomial(-v, lead_inv);
        if (terms_.size() == 1 && is_exact()) {
            if (target_prec) return head_inv.truncated_to(*target_prec);
            return head_inv;
        }
        // relative target for the geometric series in u = tail/lead
        std::optional<SigmaRational> rel;
        if (prec_) rel = *prec_ - v;
        if (target_prec) {
            SigmaRational r = *target_prec + v;
            rel = rel ? min(*rel, r) : r;
        }
        if (!rel) fail(ErrorCode::PrecisionLoss, "inverse of exact multi-term series needs a target precision");
        // geometric series 1 - u + u^2 - ... against the normalized tail u
        HahnSeries u = (*this * head_inv - constant(coeff_one_like(terms_.front().second))).truncated_to(*rel);
        HahnSeries acc = constant(coeff_one_like(terms_.front().second)).truncated_to(*rel);
        HahnSeries pw = u;
        bool negate = true;
        while (true) {
            auto vv = pw.valuation();
            if (!vv.is_finite() || compare(vv.value, *rel) != Order::Less) break;
            acc = negate ? acc - pw : acc + pw;
            negate = !negate;
            pw = (pw * u).truncated_to(*rel);
        }
        return (acc * head_inv).truncated_to(prec_for_inverse(v, *rel));
    }

    friend HahnSeries divide(const HahnSeries& a, const HahnSeries& b,
                             std::optional<SigmaRational> target_prec = std::nullopt) {
        return a * b.inverse(std::move(target_prec));
    }

    HahnSeries pow(const Int& e) const {
        if (e < 0) return inverse().pow(-e);
        if (e == 0) {
            if (terms_.empty()) fail(ErrorCode::PrecisionLoss, "0^0 with no sample coefficient");
            return constant(coeff_one_like(terms_.front().second));
        }
        if (terms_.empty()) {
            if (is_exact()) return zero();
            return HahnSeries({}, SigmaRational(e) * *prec_);
        }
        Int p = char_or_one();
        if (p >= 2) {
            // base-p digits: a^(sum d_j p^j) = prod phi^j(a)^(d_j), and the
            // Frobenius factors keep the support linear
            HahnSeries acc = constant(coeff_one_like(terms_.front().second));
            Int k = e;
            unsigned long pl = p.get_ui();
            long j = 0;
            while (k > 0) {
                unsigned long d = mpz_tdiv_q_ui(k.get_mpz_t(), k.get_mpz_t(), pl);
                if (d > 0) {
                    HahnSeries b = frobenius(j);
                    for (unsigned long i = 0; i < d; ++i) acc = acc * b;
                }
                ++j;
            }
            return acc;
        }
        HahnSeries base = *this;
        HahnSeries acc = constant(coeff_one_like(terms_.front().second));
        Int k = e;
        while (k > 0) {
            if (mpz_odd_p(k.get_mpz_t())) acc = acc * base;
            k >>= 1;
            if (k > 0) base = base * base;
        }
        return acc;
    }

    // sigma^n on the series: exponents scale by sigma^n, coefficients by
    // sigma_k^n; the valuation transforms by sigma^n.
    HahnSeries sigma_map(long n) const {
        if (n == 0) return *this;
        HahnSeries out;
        out.prec_ = prec_;
        SigmaRational scale = SigmaRational::sigma_power(static_cast<int>(n));
        std::vector<Term> t;
        t.reserve(terms_.size());
        for (const auto& [e, c] : terms_) t.emplace_back(scale * e, coeff_sigma(c, n));
        if (out.prec_) out.prec_ = scale * *out.prec_;
        out.set_terms(std::move(t));
        return out;
    }

    // phi^m: exponents scale by p^m, coefficients by coeff_frobenius; the
    // p-denominator depth of every exponent stays within the given budget.
    HahnSeries frobenius(long m, unsigned max_pden_depth = kMaxPdenDepth) const {
        if (m == 0) return *this;
        Int p = char_or_one();
        if (p == 1) return *this; // characteristic exponent 1: phi is the identity
        Rat scale_rat = m >= 0 ? Rat(pow_int(p, static_cast<unsigned long>(m)))
                               : Rat(Int(1), pow_int(p, static_cast<unsigned long>(-m)));
        SigmaRational scale(scale_rat);
        HahnSeries out;
        out.prec_ = prec_;
        std::vector<Term> t;
        t.reserve(terms_.size());
        for (const auto& [e, c] : terms_) {
            SigmaRational ne = scale * e;
            check_pden(ne, p, max_pden_depth);
            t.emplace_back(std::move(ne), coeff_frobenius(c, m));
        }
        if (out.prec_) {
            out.prec_ = scale * *out.prec_;
            check_pden(*out.prec_, p, max_pden_depth);
        }
        out.set_terms(std::move(t));
        return out;
    }

    friend bool operator==(const HahnSeries& a, const HahnSeries& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].first == b.terms_[i].first) || !(a.terms_[i].second == b.terms_[i].second))
                return false;
        if (a.prec_.has_value() != b.prec_.has_value()) return false;
        return !a.prec_ || *a.prec_ == *b.prec_;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            std::string cs = coeff_str(c);
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
            os << "t";
            std::string es = e.str();
            if (es != "1") os << "^(" << es << ")";
        }
        if (prec_) {
            if (!first) os << " + ";
            os << "O(t^(" << prec_->str() << "))";
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    static std::optional<SigmaRational> min_prec(const std::optional<SigmaRational>& a,
                                                 const std::optional<SigmaRational>& b) {
        if (!a) return b;
        if (!b) return a;
        return min(*a, *b);
    }

    static SigmaRational prec_for_inverse(const SigmaRational& v, const SigmaRational& rel) { return rel - v; }

    Int char_or_one() const {
        if (!terms_.empty()) return coeff_char(terms_.front().second);
        return Int(1);
    }

    static void check_pden(const SigmaRational& e, const Int& p, unsigned max_depth) {
        if (e.is_zero()) return;
        Int content = e.den().content();
        if (content == 0) return;
        if (p_adic_valuation(content, p) > max_depth)
            fail(ErrorCode::BudgetExceeded, "exponent p-denominator depth over budget");
    }

    void set_terms(std::vector<Term> t) {
        std::sort(t.begin(), t.end(),
                  [](const Term& a, const Term& b) { return compare(a.first, b.first) == Order::Less; });
        terms_.clear();
        for (auto& [e, c] : t) {
            if (prec_ && compare(e, *prec_) != Order::Less) continue;
            if (!terms_.empty() && terms_.back().first == e) {
                terms_.back().second = terms_.back().second + c;
                if (coeff_is_zero(terms_.back().second)) terms_.pop_back();
            } else if (!coeff_is_zero(c)) {
                terms_.emplace_back(std::move(e), std::move(c));
            }
        }
        if (terms_.size() > kMaxSeriesTerms) fail(ErrorCode::BudgetExceeded, "series support over budget");
    }

    std::vector<Term> terms_;
    std::optional<SigmaRational> prec_;
};

// ---------------------------------------------------------------------------
// Artin-Schreier series: b = sum phi^{-n}(a) satisfies b^p - b = a - phi^{-N}(a),
// and the valuative distances of the partial sums generate the cut data.
// ---------------------------------------------------------------------------
struct CutData {
    std::vector<SigmaRational> samples; // strictly increasing
    std::optional<SigmaRational> limit;
    bool closed_at_limit = false;
};

template <CoefficientRing C>
HahnSeries<C> as_root(const HahnSeries<C>& a, unsigned N) {
    if (N == 0) return HahnSeries<C>::zero();
    Valuation v = a.valuation();
    if (!v.is_finite() || compare(v.value, SigmaRational(0)) != Order::Less)
        fail(ErrorCode::NonNegativeValuation, "as_root needs v(a) < 0 (use hensel_lift otherwise)");
    if (coeff_char(a.terms().front().second) == 1)
        fail(ErrorCode::CharacteristicOne, "Artin-Schreier series need characteristic p >= 2");
    HahnSeries<C> b = HahnSeries<C>::zero();
    for (unsigned n = 1; n <= N; ++n) b = b + a.frobenius(-static_cast<long>(n));
    return b;
}

template <CoefficientRing C>
CutData as_cut(const HahnSeries<C>& a, unsigned N) {
    Valuation v = a.valuation();
    if (!v.is_finite() || compare(v.value, SigmaRational(0)) != Order::Less)
        fail(ErrorCode::NonNegativeValuation, "as_cut needs v(a) < 0");
    Int p = coeff_char(a.terms().front().second);
    if (p == 1) fail(ErrorCode::CharacteristicOne, "Artin-Schreier cuts need characteristic p >= 2");
    CutData cut;
    for (unsigned n = 0; n <= N; ++n) {
        Rat scale(Int(1), pow_int(p, n + 1));
        cut.samples.push_back(SigmaRational(scale) * v.value);
    }
    cut.limit = SigmaRational(0);
    cut.closed_at_limit = false;
    return cut;
}

// Distinguished approximate root of Y^p - Y = x^sigma - x.
template <CoefficientRing C>
HahnSeries<C> twisted_as(const HahnSeries<C>& x, unsigned N) {
    HahnSeries<C> rhs = x.sigma_map(1) - x;
    if (rhs.is_exact_zero()) return HahnSeries<C>::zero();
    return as_root(rhs, N);
}

// Hahn series over a coefficient field are themselves a coefficient ring
// (this is how difference polynomials over K = k((t^Gamma)) are formed).
template <CoefficientRing C>
bool coeff_is_zero(const HahnSeries<C>& c) {
    return c.is_exact_zero();
}
template <CoefficientRing C>
HahnSeries<C> coeff_inverse(const HahnSeries<C>& c) {
    return c.inverse();
}
template <CoefficientRing C>
HahnSeries<C> coeff_sigma(const HahnSeries<C>& c, long k) {
    return c.sigma_map(k);
}
template <CoefficientRing C>
HahnSeries<C> coeff_frobenius(const HahnSeries<C>& c, long m) {
    return c.frobenius(m);
}
template <CoefficientRing C>
HahnSeries<C> coeff_scale_int(const HahnSeries<C>& c, const Int& n) {
    std::vector<typename HahnSeries<C>::Term> t;
    t.reserve(c.terms().size());
    for (const auto& [e, x] : c.terms()) t.emplace_back(e, coeff_scale_int(x, n));
    return HahnSeries<C>(std::move(t), c.prec());
}
template <CoefficientRing C>
HahnSeries<C> coeff_pow_int(const HahnSeries<C>& c, const Int& e) {
    return c.pow(e);
}
template <CoefficientRing C>
Int coeff_char(const HahnSeries<C>& c) {
    if (c.terms().empty()) fail(ErrorCode::PrecisionLoss, "cannot read characteristic off an empty series");
    return coeff_char(c.terms().front().second);
}
template <CoefficientRing C>
HahnSeries<C> coeff_zero_like(const HahnSeries<C>&) {
    return HahnSeries<C>::zero();
}
template <CoefficientRing C>
HahnSeries<C> coeff_one_like(const HahnSeries<C>& c) {
    if (c.terms().empty()) fail(ErrorCode::PrecisionLoss, "no sample coefficient for one");
    return HahnSeries<C>::constant(coeff_one_like(c.terms().front().second));
}
template <CoefficientRing C>
std::string coeff_str(const HahnSeries<C>& c) {
    return c.str();
}

// Specialized power map: a series known only as O(t^w) still has a usable
// bound t^(nu*w) under t -> t^nu, which the generic route cannot see.
template <CoefficientRing C>
HahnSeries<C> coeff_pow_exponent(const HahnSeries<C>& t, const SigmaExponent& nu) {
    if (nu.is_zero()) return coeff_one_like(t);
    if (t.terms().empty()) {
        if (t.is_exact()) return HahnSeries<C>::zero();
        return HahnSeries<C>({}, nu.as_sigma_rational() * *t.prec());
    }
    HahnSeries<C> acc = coeff_one_like(t);
    Int p = coeff_char(t);
    for (const auto& [i, v] : nu.entries()) {
        Int den = v.get_den();
        long root = 0;
        if (den != 1) {
            if (p == 1) fail(ErrorCode::NonUnitScale, "fractional exponent over characteristic zero");
            root = static_cast<long>(p_adic_valuation(den, p));
        }
        HahnSeries<C> base = t.sigma_map(static_cast<long>(i)).frobenius(-root);
        acc = acc * base.pow(v.get_num());
    }
    return acc;
}

} // namespace transval
