#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"

namespace transval {

class SigmaRational;

// ---------------------------------------------------------------------------
// SigmaPoly: integer-coefficient polynomial in sigma, the base of the ordered
// field Q(sigma). sigma is positive and exceeds every natural number, so sign
// questions reduce to the leading coefficient.
// ---------------------------------------------------------------------------
class SigmaPoly {
public:
    SigmaPoly() = default;
    SigmaPoly(long c) { if (c != 0) coeffs_.push_back(Int(c)); }
    SigmaPoly(Int c) {
        if (c != 0) coeffs_.push_back(std::move(c));
    }
    explicit SigmaPoly(std::vector<Int> ascending) : coeffs_(std::move(ascending)) { trim(); }

    static SigmaPoly sigma_power(unsigned k, Int coeff = Int(1)) {
        std::vector<Int> c(k + 1, Int(0));
        c[k] = std::move(coeff);
        return SigmaPoly(std::move(c));
    }
    static SigmaPoly sigma() { return sigma_power(1); }

    bool is_zero() const { return coeffs_.empty(); }
    // degree of the zero polynomial is -1 by convention
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Int& leading() const { return coeffs_.back(); }
    Int coeff(unsigned k) const { return k < coeffs_.size() ? coeffs_[k] : Int(0); }
    const std::vector<Int>& coeffs() const { return coeffs_; }

    friend SigmaPoly operator+(const SigmaPoly& a, const SigmaPoly& b) {
        std::vector<Int> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Int(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
        for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
        return SigmaPoly(std::move(c));
    }
    friend SigmaPoly operator-(const SigmaPoly& a, const SigmaPoly& b) { return a + (-b); }
    SigmaPoly operator-() const {
        SigmaPoly out(*this);
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }
    friend SigmaPoly operator*(const SigmaPoly& a, const SigmaPoly& b) {
        if (a.is_zero() || b.is_zero()) return SigmaPoly();
        std::vector<Int> c(a.coeffs_.size() + b.coeffs_.size() - 1, Int(0));
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return SigmaPoly(std::move(c));
    }
    friend bool operator==(const SigmaPoly& a, const SigmaPoly& b) { return a.coeffs_ == b.coeffs_; }

    Rat evaluate(const Rat& q) const {
        Rat acc(0);
        for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * q + Rat(coeffs_[i]);
        return acc;
    }

    Int content() const {
        Int g(0);
        for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        return g; // 0 for the zero polynomial
    }

    // exact division by a nonzero integer; caller guarantees divisibility
    SigmaPoly divided_by(const Int& d) const {
        SigmaPoly out(*this);
        for (auto& c : out.coeffs_) c /= d;
        return out;
    }

    // multiply by sigma^k; k < 0 requires divisibility (used by twisting only)
    SigmaPoly shifted(int k) const {
        if (is_zero() || k == 0) return *this;
        if (k > 0) {
            std::vector<Int> c(coeffs_.size() + k, Int(0));
            std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + k);
            return SigmaPoly(std::move(c));
        }
        for (int i = 0; i < -k; ++i)
            if (coeff(i) != 0) fail(ErrorCode::InvalidExponent, "sigma-shift below degree 0");
        return SigmaPoly(std::vector<Int>(coeffs_.begin() - k, coeffs_.end()));
    }

    std::string str(const char* var = "s") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = coeffs_.size(); i-- > 0;) {
            const Int& c = coeffs_[i];
            if (c == 0) continue;
            Int mag = abs(c);
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (i == 0 || mag != 1) os << mag.get_str();
            if (i > 0) {
                if (mag != 1) os << "*";
                os << var;
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Int> coeffs_; // ascending powers, no trailing zeros
};

namespace detail {

inline SigmaPoly primitive_part(const SigmaPoly& f) {
    if (f.is_zero()) return f;
    return f.divided_by(f.content());
}

// pseudo-remainder of a by b (deg a >= deg b, b nonzero)
inline SigmaPoly pseudo_rem(SigmaPoly a, const SigmaPoly& b) {
    const int db = b.degree();
    while (!a.is_zero() && a.degree() >= db) {
        const int k = a.degree() - db;
        SigmaPoly t = SigmaPoly::sigma_power(static_cast<unsigned>(k), a.leading());
        a = a * SigmaPoly(b.leading()) - t * b;
    }
    return a;
}

// gcd in Z[sigma] via the primitive PRS; result has positive leading coefficient
inline SigmaPoly poly_gcd(SigmaPoly a, SigmaPoly b) {
    if (a.is_zero()) return b.is_zero() || b.leading() > 0 ? b : -b;
    if (b.is_zero()) return a.leading() > 0 ? a : -a;
    Int cont;
    mpz_gcd(cont.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        SigmaPoly r = primitive_part(pseudo_rem(a, b));
        a = b;
        b = r;
    }
    SigmaPoly g = a * SigmaPoly(cont);
    return g.leading() > 0 ? g : -g;
}

} // namespace detail

// ---------------------------------------------------------------------------
// SigmaRational: element of the ordered field Q(sigma), canonical num/den.
// Values of valuations, radii and slopes all live here.
// ---------------------------------------------------------------------------
enum class Order { Less, Equal, Greater };

class SigmaRational {
public:
    SigmaRational() : num_(), den_(1) {}
    SigmaRational(long n) : num_(n), den_(1) {}
    SigmaRational(const Int& n) : num_(n), den_(1) {}
    SigmaRational(const Rat& r) : num_(r.get_num()), den_(r.get_den()) { normalize(); }
    SigmaRational(SigmaPoly num, SigmaPoly den = SigmaPoly(1)) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static SigmaRational sigma() { return SigmaRational(SigmaPoly::sigma()); }
    static SigmaRational sigma_power(int k) {
        if (k >= 0) return SigmaRational(SigmaPoly::sigma_power(static_cast<unsigned>(k)));
        return SigmaRational(SigmaPoly(1), SigmaPoly::sigma_power(static_cast<unsigned>(-k)));
    }

    const SigmaPoly& num() const { return num_; }
    const SigmaPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend SigmaRational operator+(const SigmaRational& a, const SigmaRational& b) {
        return SigmaRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend SigmaRational operator-(const SigmaRational& a, const SigmaRational& b) {
        return SigmaRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    SigmaRational operator-() const {
        SigmaRational out(*this);
        out.num_ = -out.num_;
        return out;
    }
    friend SigmaRational operator*(const SigmaRational& a, const SigmaRational& b) {
        return SigmaRational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend SigmaRational operator/(const SigmaRational& a, const SigmaRational& b) {
        if (b.is_zero()) fail(ErrorCode::DivisionByZero, "division by zero in Q(sigma)");
        return SigmaRational(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const SigmaRational& a, const SigmaRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    // sign in the ordering that makes sigma infinitely large
    int sign() const { return num_.is_zero() ? 0 : (num_.leading() > 0 ? 1 : -1); }

    SigmaRational abs() const { return sign() >= 0 ? *this : -(*this); }

    // substitution sigma -> q, exact
    Rat specialize(const Rat& q) const {
        Rat d = den_.evaluate(q);
        if (d == 0) fail(ErrorCode::DenominatorVanishes, "denominator vanishes at q=" + to_string(q));
        return num_.evaluate(q) / d;
    }

    std::string str() const {
        if (den_ == SigmaPoly(1)) return num_.str();
        std::string n = num_.str(), d = den_.str();
        if (num_.degree() > 0) n = "(" + n + ")";
        if (den_.degree() > 0) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    void normalize() {
        if (den_.is_zero()) fail(ErrorCode::DivisionByZero, "zero denominator in Q(sigma)");
        if (num_.is_zero()) {
            den_ = SigmaPoly(1);
            return;
        }
        SigmaPoly g = detail::poly_gcd(num_, den_);
        // gcd of nonzero inputs is nonzero with positive leading coefficient
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
        if (den_.leading() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    // exact polynomial division (remainder known to vanish)
    static SigmaPoly exact_div(const SigmaPoly& a, const SigmaPoly& b) {
        if (a.is_zero()) return a;
        std::vector<Int> out(static_cast<size_t>(a.degree() - b.degree()) + 1, Int(0));
        SigmaPoly rem = a;
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            const int k = rem.degree() - b.degree();
            Int q = rem.leading() / b.leading();
            out[static_cast<size_t>(k)] = q;
            rem = rem - SigmaPoly::sigma_power(static_cast<unsigned>(k), q) * b;
        }
        return SigmaPoly(std::move(out));
    }

    SigmaPoly num_;
    SigmaPoly den_; // nonzero, positive leading coefficient, coprime to num_
};

// Total order on Q(sigma): sign of the leading coefficient of the difference.
inline Order compare(const SigmaRational& a, const SigmaRational& b) {
    switch ((a - b).sign()) {
    case -1: return Order::Less;
    case 0: return Order::Equal;
    default: return Order::Greater;
    }
}

inline bool operator<(const SigmaRational& a, const SigmaRational& b) { return compare(a, b) == Order::Less; }
inline bool operator>(const SigmaRational& a, const SigmaRational& b) { return compare(a, b) == Order::Greater; }
inline bool operator<=(const SigmaRational& a, const SigmaRational& b) { return compare(a, b) != Order::Greater; }
inline bool operator>=(const SigmaRational& a, const SigmaRational& b) { return compare(a, b) != Order::Less; }

inline SigmaRational min(const SigmaRational& a, const SigmaRational& b) { return a <= b ? a : b; }
inline SigmaRational max(const SigmaRational& a, const SigmaRational& b) { return a >= b ? a : b; }

// ---------------------------------------------------------------------------
// SigmaExponent: element of N[sigma], optionally with p-power denominators
// (the monoid N[sigma/p^infinity] housing perfect-hull exponents). Entries
// are kept sorted by sigma-index, nonzero, nonnegative.
// ---------------------------------------------------------------------------
class SigmaExponent {
public:
    SigmaExponent() = default;
    SigmaExponent(unsigned long n) {
        if (n != 0) entries_.emplace_back(0u, Rat(static_cast<long>(n)));
    }

    static SigmaExponent term(unsigned index, Rat entry) {
        SigmaExponent e;
        entry.canonicalize();
        if (entry < 0) fail(ErrorCode::InvalidExponent, "negative exponent entry");
        if (entry != 0) e.entries_.emplace_back(index, std::move(entry));
        return e;
    }
    static SigmaExponent sigma_power(unsigned index) { return term(index, Rat(1)); }

    bool is_zero() const { return entries_.empty(); }
    const std::vector<std::pair<unsigned, Rat>>& entries() const { return entries_; }
    Rat entry(unsigned index) const {
        for (const auto& [i, v] : entries_)
            if (i == index) return v;
        return Rat(0);
    }
    unsigned top_index() const { return entries_.empty() ? 0 : entries_.back().first; }

    friend SigmaExponent operator+(const SigmaExponent& a, const SigmaExponent& b) {
        return merge(a, b, /*subtract=*/false);
    }
    // partial: defined only when the result stays in the monoid
    friend SigmaExponent operator-(const SigmaExponent& a, const SigmaExponent& b) {
        return merge(a, b, /*subtract=*/true);
    }

    SigmaExponent scaled(const Rat& r) const {
        if (r < 0) fail(ErrorCode::InvalidExponent, "negative exponent scale");
        SigmaExponent out;
        if (r == 0) return out;
        for (const auto& [i, v] : entries_) out.entries_.emplace_back(i, v * r);
        return out;
    }

    // multiply by sigma^k (shift indices); k < 0 requires all indices >= -k
    SigmaExponent sigma_shifted(int k) const {
        SigmaExponent out;
        for (const auto& [i, v] : entries_) {
            long j = static_cast<long>(i) + k;
            if (j < 0) fail(ErrorCode::InvalidExponent, "sigma-shift out of N[sigma]");
            out.entries_.emplace_back(static_cast<unsigned>(j), v);
        }
        return out;
    }

    bool is_integral() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](const auto& e) { return is_integer(e.second); });
    }

    // smallest m >= 0 with p^m * this integral; denominators must be p-powers
    unsigned clearing_power(const Int& p) const {
        unsigned m = 0;
        for (const auto& [i, v] : entries_) {
            Int den = v.get_den();
            if (den == 1) continue;
            if (p < 2 || !is_power_of(den, p))
                fail(ErrorCode::InvalidExponent, "exponent denominator is not a power of p");
            m = std::max(m, p_adic_valuation(den, p));
        }
        return m;
    }

    Rat evaluate(const Rat& q) const {
        Rat acc(0);
        for (const auto& [i, v] : entries_) acc += v * pow_rat(q, static_cast<long>(i));
        return acc;
    }

    SigmaRational as_sigma_rational() const {
        SigmaRational acc;
        for (const auto& [i, v] : entries_)
            acc = acc + SigmaRational(SigmaPoly::sigma_power(i, Int(v.get_num())), SigmaPoly(Int(v.get_den())));
        return acc;
    }

    // lexicographic order by descending sigma-index (order type omega^omega)
    friend std::strong_ordering operator<=>(const SigmaExponent& a, const SigmaExponent& b) {
        auto ia = a.entries_.rbegin(), ib = b.entries_.rbegin();
        for (; ia != a.entries_.rend() && ib != b.entries_.rend(); ++ia, ++ib) {
            if (ia->first != ib->first)
                return ia->first < ib->first ? std::strong_ordering::less : std::strong_ordering::greater;
            if (ia->second != ib->second)
                return ia->second < ib->second ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        if (ia != a.entries_.rend()) return std::strong_ordering::greater;
        if (ib != b.entries_.rend()) return std::strong_ordering::less;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const SigmaExponent& a, const SigmaExponent& b) { return a.entries_ == b.entries_; }

    // sigma^n * p^m with m possibly negative once denominators are in play
    bool is_transformal_p_power(const Int& p) const {
        if (entries_.size() != 1) return false;
        const Rat& v = entries_.front().second;
        if (p == 1) return v == 1;
        return is_power_of(v.get_num(), p) && (v.get_den() == 1 || is_power_of(v.get_den(), p));
    }

    std::string str() const {
        if (entries_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            const auto& [i, v] = *it;
            if (i == 0) {
                os << to_string(v);
                continue;
            }
            if (v != 1) os << to_string(v) << "*";
            os << "s";
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }

private:
    static SigmaExponent merge(const SigmaExponent& a, const SigmaExponent& b, bool subtract) {
        SigmaExponent out;
        auto ia = a.entries_.begin(), ib = b.entries_.begin();
        auto push = [&out](unsigned i, Rat v) {
            if (v < 0) fail(ErrorCode::InvalidExponent, "exponent difference leaves N[sigma]");
            if (v != 0) out.entries_.emplace_back(i, std::move(v));
        };
        while (ia != a.entries_.end() || ib != b.entries_.end()) {
            if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
                push(ia->first, ia->second);
                ++ia;
            } else if (ia == a.entries_.end() || ib->first < ia->first) {
                push(ib->first, subtract ? Rat(-ib->second) : ib->second);
                ++ib;
            } else {
                push(ia->first, subtract ? Rat(ia->second - ib->second) : Rat(ia->second + ib->second));
                ++ia;
                ++ib;
            }
        }
        return out;
    }

    std::vector<std::pair<unsigned, Rat>> entries_;
};

// ---------------------------------------------------------------------------
// Digitwise combinatorics: base-p digits per sigma-index, domination, and the
// transformal binomial coefficients they control.
// ---------------------------------------------------------------------------
struct DigitMatrix {
    Int p;
    unsigned clearing_power = 0; // digits describe p^clearing_power * nu
    std::map<std::pair<unsigned, unsigned>, unsigned> digits; // (sigma-index, p-index) -> 0..p-1

    SigmaExponent reconstruct() const {
        SigmaExponent out;
        for (const auto& [ij, d] : digits) {
            Rat v = Rat(static_cast<long>(d)) * Rat(pow_int(p, ij.second), pow_int(p, clearing_power));
            out = out + SigmaExponent::term(ij.first, v);
        }
        return out;
    }
};

inline DigitMatrix digit_decompose_cleared(const SigmaExponent& nu, const Int& p, unsigned m) {
    DigitMatrix out;
    out.p = p;
    out.clearing_power = m;
    for (const auto& [i, v] : nu.entries()) {
        Rat scaled = v * Rat(pow_int(p, m));
        if (!is_integer(scaled)) fail(ErrorCode::InvalidExponent, "clearing power too small");
        Int n = scaled.get_num();
        unsigned j = 0;
        while (n != 0) {
            unsigned d = mpz_class(n % p).get_ui();
            if (d != 0) out.digits[{i, j}] = d;
            n /= p;
            ++j;
        }
    }
    return out;
}

inline DigitMatrix digit_decompose(const SigmaExponent& nu, const Int& p) {
    if (p == 1) fail(ErrorCode::CharacteristicOne, "p=1 has no digit theory");
    if (p < 2) fail(ErrorCode::InvalidExponent, "p must be 1 or a prime");
    return digit_decompose_cleared(nu, p, nu.clearing_power(p));
}

namespace detail {

// base-p digits of p^m * v (ascending); v is one entry of an exponent
inline void entry_digits(const Rat& v, const Int& p, unsigned m, std::vector<unsigned>& out) {
    out.clear();
    Int n;
    if (m == 0) {
        if (!is_integer(v)) fail(ErrorCode::InvalidExponent, "clearing power too small");
        n = v.get_num();
    } else {
        Rat scaled = v * Rat(pow_int(p, m));
        if (!is_integer(scaled)) fail(ErrorCode::InvalidExponent, "clearing power too small");
        n = scaled.get_num();
    }
    unsigned long pl = p.get_ui();
    while (n != 0) out.push_back(static_cast<unsigned>(mpz_tdiv_q_ui(n.get_mpz_t(), n.get_mpz_t(), pl)));
}

// shared digitwise walk over two exponents at a common clearing power; the
// visitor gets (digit of mu, digit of nu) per position and may stop the walk
template <class Visit>
void walk_digit_pairs(const SigmaExponent& mu, const SigmaExponent& nu, const Int& p, Visit&& visit) {
    if (p == 1) fail(ErrorCode::CharacteristicOne, "p=1 has no digit theory");
    unsigned m = std::max(mu.clearing_power(p), nu.clearing_power(p));
    std::vector<unsigned> dm, dn;
    auto im = mu.entries().begin(), in = nu.entries().begin();
    const auto em = mu.entries().end(), en = nu.entries().end();
    static const Rat zero(0);
    while (im != em || in != en) {
        const Rat* vm = &zero;
        const Rat* vn = &zero;
        if (in == en || (im != em && im->first < in->first)) {
            vm = &im->second;
            ++im;
        } else if (im == em || in->first < im->first) {
            vn = &in->second;
            ++in;
        } else {
            vm = &im->second;
            vn = &in->second;
            ++im;
            ++in;
        }
        entry_digits(*vm, p, m, dm);
        entry_digits(*vn, p, m, dn);
        for (size_t j = 0; j < std::max(dm.size(), dn.size()); ++j) {
            unsigned a = j < dm.size() ? dm[j] : 0;
            unsigned b = j < dn.size() ? dn[j] : 0;
            if (!visit(a, b)) return;
        }
    }
}

} // namespace detail

inline bool digit_dominates(const SigmaExponent& mu, const SigmaExponent& nu, const Int& p) {
    bool ok = true;
    detail::walk_digit_pairs(mu, nu, p, [&ok](unsigned a, unsigned b) {
        if (a > b) ok = false;
        return ok;
    });
    return ok;
}

// Coefficient of x^mu in (1+x)^nu over the prime field. For p >= 2 the result
// is the digitwise product of small binomials (a residue in 0..p-1); for p = 1
// it is the exact integer product of per-sigma-index binomials.
inline Int transformal_binomial(const SigmaExponent& nu, const SigmaExponent& mu, const Int& p) {
    if (p == 1) {
        if (!nu.is_integral() || !mu.is_integral())
            fail(ErrorCode::InvalidExponent, "fractional exponent in characteristic zero");
        Int acc(1);
        for (const auto& [i, v] : mu.entries()) {
            acc *= binomial_int(nu.entry(i).get_num(), v.get_num());
            if (acc == 0) return acc;
        }
        return acc;
    }
    unsigned long acc = 1;
    unsigned long pl = p.get_ui();
    detail::walk_digit_pairs(mu, nu, p, [&acc, pl](unsigned a, unsigned b) {
        if (a > b) {
            acc = 0;
            return false;
        }
        // C(b, a) for digits below p: a small Pascal walk
        unsigned long c = 1;
        for (unsigned k = 0; k < a; ++k) c = c * (b - k) / (k + 1);
        acc = acc * (c % pl) % pl;
        return acc != 0;
    });
    return Int(static_cast<long>(acc));
}

// ---------------------------------------------------------------------------
// Specialization sigma -> q and injectivity thresholds.
// ---------------------------------------------------------------------------
inline Rat specialize_q(const SigmaExponent& nu, const Rat& q) { return nu.evaluate(q); }
inline Rat specialize_q(const SigmaRational& x, const Rat& q) { return x.specialize(q); }

namespace detail {

// Cauchy bound: every real root of f has absolute value < 1 + max|a_i|/|a_d|.
inline Rat cauchy_root_bound(const SigmaPoly& f) {
    if (f.is_zero() || f.degree() == 0) return Rat(1);
    Rat m(0);
    Int lead = abs(f.leading());
    for (int i = 0; i < f.degree(); ++i) {
        Rat c(abs(f.coeff(static_cast<unsigned>(i))), lead);
        c.canonicalize();
        m = std::max(m, c);
    }
    return Rat(1) + m;
}

} // namespace detail

// Minimal q0 >= 2 such that nu -> nu(q) is injective on I for every q >= q0.
// Sound ceiling from the Cauchy bound on pairwise differences, minimality by
// scanning downward for the largest colliding q.
inline Int injectivity_threshold(const std::vector<SigmaExponent>& I) {
    // dense integer coefficient rows, denominators cleared per element
    std::vector<std::vector<Int>> rows;
    rows.reserve(I.size());
    std::vector<Int> dens;
    for (const auto& e : I) {
        Int lcm(1);
        for (const auto& [i, v] : e.entries()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
        std::vector<Int> row;
        for (const auto& [i, v] : e.entries()) {
            if (row.size() <= i) row.resize(i + 1, Int(0));
            row[i] = Int(v * Rat(lcm));
        }
        rows.push_back(std::move(row));
        dens.push_back(std::move(lcm));
    }
    Int worst(1); // q=1 collisions are irrelevant; threshold is at least 2
    std::vector<Int> diff;
    for (size_t a = 0; a < I.size(); ++a) {
        for (size_t b = a + 1; b < I.size(); ++b) {
            // difference cleared to integer coefficients: rows[a]*dens[b] - rows[b]*dens[a]
            diff.assign(std::max(rows[a].size(), rows[b].size()), Int(0));
            for (size_t i = 0; i < rows[a].size(); ++i) diff[i] = rows[a][i] * dens[b];
            for (size_t i = 0; i < rows[b].size(); ++i) diff[i] -= rows[b][i] * dens[a];
            while (!diff.empty() && diff.back() == 0) diff.pop_back();
            if (diff.empty()) continue;
            if (diff.size() == 1) continue; // nonzero constant never vanishes
            Int lead = abs(diff.back());
            Int maxc(0);
            for (size_t i = 0; i + 1 < diff.size(); ++i) {
                Int m = abs(diff[i]);
                if (m > maxc) maxc = m;
            }
            Int bound = maxc / lead + 2; // integer ceiling of the Cauchy bound
            for (Int q = bound; q > worst; --q) {
                Int acc(0);
                for (size_t i = diff.size(); i-- > 0;) acc = acc * q + diff[i];
                if (acc == 0) {
                    worst = q;
                    break; // only the largest collision matters per pair
                }
            }
        }
    }
    return worst + 1;
}

// Smallest sound q beyond which sign(x(q)) == sign(x) and the denominator of
// x keeps its sign; used to build safe specialization ranges for order checks.
inline Int order_specialization_bound(const SigmaRational& x) {
    Rat b = std::max(detail::cauchy_root_bound(x.num()), detail::cauchy_root_bound(x.den()));
    Int q = b.get_num() / b.get_den() + 1;
    return q < 2 ? Int(2) : q;
}

// ---------------------------------------------------------------------------
// Laurent polynomials in sigma with rational coefficients: the dense image of
// Q[sigma^{+-1}] inside Q(sigma) used by the truncation lemma.
// ---------------------------------------------------------------------------
struct LaurentPoly {
    std::map<int, Rat> coeffs; // exponent -> nonzero coefficient

    SigmaRational as_sigma_rational() const {
        SigmaRational acc;
        for (const auto& [e, c] : coeffs) acc = acc + SigmaRational(Rat(c)) * SigmaRational::sigma_power(e);
        return acc;
    }

    std::string str() const {
        if (coeffs.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            Rat c = it->second;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            Rat mag = ::abs(c);
            if (it->first == 0 || mag != 1) os << to_string(mag);
            if (it->first != 0) {
                if (mag != 1) os << "*";
                os << "s";
                if (it->first != 1) os << "^" << (it->first < 0 ? "(" + std::to_string(it->first) + ")" : std::to_string(it->first));
            }
        }
        return os.str();
    }
};

// Truncation of the sigma^{-1}-expansion of target/nu: the returned beta is a
// Laurent polynomial with |nu*beta - target| < sigma^{-n}. Keeping exponents
// down to -(n + deg nu) makes the residual nu*(tail) fall below sigma^{-n}.
inline LaurentPoly truncate_approx(const SigmaRational& target, const SigmaPoly& nu, unsigned n) {
    if (nu.is_zero()) fail(ErrorCode::DivisionByZero, "truncate_approx with nu = 0");
    LaurentPoly beta;
    if (target.is_zero()) return beta;
    const int low = -static_cast<int>(n) - nu.degree();
    SigmaRational rem = target / SigmaRational(nu);
    while (!rem.is_zero()) {
        int e = rem.num().degree() - rem.den().degree();
        if (e < low) break;
        Rat c(rem.num().leading(), rem.den().leading());
        c.canonicalize();
        beta.coeffs[e] = c;
        rem = rem - SigmaRational(c) * SigmaRational::sigma_power(e);
    }
    return beta;
}

// Unique solution of x + alpha = nu*x + beta for omega-increasing nu
// (Lemma-level contract: nu must exceed every natural number).
inline SigmaRational solve_affine_cut(const SigmaRational& alpha, const SigmaRational& beta, const SigmaPoly& nu) {
    if (nu.degree() < 1 || nu.leading() < 0)
        fail(ErrorCode::NotOmegaIncreasing, "nu must be omega-increasing (degree >= 1, positive leading)");
    return (alpha - beta) / (SigmaRational(nu) - SigmaRational(1));
}

} // namespace transval
