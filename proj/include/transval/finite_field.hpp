#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"

namespace transval {

class Fq;

// F_{p^n} = F_p[g]/(modulus), with the coefficient automorphism sigma_k fixed
// to a Frobenius power x -> x^{p^s} (s = 0 means identity). Extension fields
// are built on demand and cached with a compatible embedding; the cache is
// locked so concurrent callers never see a partially constructed extension.
class FqField : public std::enable_shared_from_this<FqField> {
public:
    static std::shared_ptr<const FqField> make(unsigned p, unsigned degree, unsigned sigma_frobenius_power = 0);

    unsigned p() const { return p_; }
    unsigned degree() const { return degree_; }
    unsigned sigma_power() const { return sigma_power_; }
    unsigned long size() const {
        unsigned long s = 1;
        for (unsigned i = 0; i < degree_; ++i) s *= p_;
        return s;
    }
    const std::vector<unsigned>& modulus() const { return modulus_; }

    Fq zero() const;
    Fq one() const;
    Fq from_int(const Int& k) const;
    Fq generator() const;
    Fq element(unsigned long index) const; // index in [0, size())

    // extension of relative degree m over this field, plus the image of this
    // field's generator inside it
    struct Extension;
    const Extension& extension(unsigned m) const;
    Fq embed(const Fq& x, const Extension& ext) const;

    ~FqField();

private:
    FqField(unsigned p, unsigned degree, unsigned sigma_power, std::vector<unsigned> modulus)
        : p_(p), degree_(degree), sigma_power_(sigma_power), modulus_(std::move(modulus)) {}

    unsigned p_;
    unsigned degree_;
    unsigned sigma_power_;
    std::vector<unsigned> modulus_; // monic, ascending, size degree_+1

    mutable std::mutex ext_mutex_;
    mutable std::map<unsigned, std::unique_ptr<Extension>> extensions_;

    friend class Fq;
};

namespace fqdetail {

using Poly = std::vector<unsigned>; // coefficients mod p, ascending

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly add(const Poly& a, const Poly& b, unsigned p) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + b[i]) % p;
    trim(c);
    return c;
}

inline Poly neg(const Poly& a, unsigned p) {
    Poly c(a);
    for (auto& x : c) x = (p - x) % p;
    return c;
}

inline Poly mul(const Poly& a, const Poly& b, unsigned p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    trim(c);
    return c;
}

inline unsigned inv_mod(unsigned a, unsigned p) {
    long t = 0, newt = 1, r = p, newr = a % p;
    while (newr != 0) {
        long q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    return static_cast<unsigned>((t % p + p) % p);
}

// remainder of a modulo monic-normalizable m
inline Poly rem(Poly a, const Poly& m, unsigned p) {
    trim(a);
    unsigned lead_inv = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        unsigned c = a.back() * lead_inv % p;
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + p * p - c * m[i] % p) % p;
        trim(a);
    }
    return a;
}

inline Poly pow_mod(Poly base, Int e, const Poly& m, unsigned p) {
    Poly acc{1};
    base = rem(std::move(base), m, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = rem(mul(acc, base, p), m, p);
        base = rem(mul(base, base, p), m, p);
        e >>= 1;
    }
    return acc;
}

inline Poly gcd(Poly a, Poly b, unsigned p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        unsigned inv = inv_mod(a.back(), p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

inline bool is_irreducible(const Poly& f, unsigned p) {
    const unsigned n = static_cast<unsigned>(f.size()) - 1;
    // x^{p^n} == x mod f, and gcd(x^{p^{n/l}} - x, f) = 1 for prime l | n
    Poly x{0, 1};
    Poly xp = pow_mod(x, pow_int(Int(p), n), f, p);
    if (add(xp, neg(x, p), p) != Poly{}) return false;
    for (unsigned l = 2; l <= n; ++l) {
        if (n % l != 0) continue;
        bool prime = true;
        for (unsigned d = 2; d * d <= l; ++d)
            if (l % d == 0) prime = false;
        if (!prime) continue;
        Poly xq = pow_mod(x, pow_int(Int(p), n / l), f, p);
        if (gcd(add(xq, neg(x, p), p), f, p).size() > 1) return false;
    }
    return true;
}

// deterministic scan for a monic irreducible of the given degree
inline Poly find_irreducible(unsigned p, unsigned n) {
    if (n == 1) return Poly{0, 1};
    Poly f(n + 1, 0);
    f[n] = 1;
    unsigned long combos = 1;
    for (unsigned i = 0; i < n; ++i) combos *= p;
    for (unsigned long code = 0;; ++code) {
        if (code >= combos) fail(ErrorCode::PreconditionFailed, "no irreducible polynomial found");
        unsigned long c = code;
        for (unsigned i = 0; i < n; ++i) {
            f[i] = static_cast<unsigned>(c % p);
            c /= p;
        }
        if (f[0] == 0) continue; // reducible: x divides
        if (is_irreducible(f, p)) return f;
    }
}

} // namespace fqdetail

// An element of F_{p^n}, carrying its field context.
class Fq {
public:
    Fq() = default;
    Fq(std::shared_ptr<const FqField> field, fqdetail::Poly coeffs)
        : field_(std::move(field)), c_(std::move(coeffs)) {
        fqdetail::trim(c_);
    }

    const std::shared_ptr<const FqField>& field() const { return field_; }
    bool is_zero() const { return c_.empty(); }
    const fqdetail::Poly& coeffs() const { return c_; }

    friend Fq operator+(const Fq& a, const Fq& b) {
        check_same(a, b);
        return Fq(a.field_, fqdetail::add(a.c_, b.c_, a.p()));
    }
    friend Fq operator-(const Fq& a, const Fq& b) { return a + (-b); }
    Fq operator-() const { return Fq(field_, fqdetail::neg(c_, p())); }
    friend Fq operator*(const Fq& a, const Fq& b) {
        check_same(a, b);
        return Fq(a.field_, fqdetail::rem(fqdetail::mul(a.c_, b.c_, a.p()), a.field_->modulus(), a.p()));
    }
    friend bool operator==(const Fq& a, const Fq& b) {
        return a.c_ == b.c_ && (a.c_.empty() || a.field_ == b.field_);
    }

    Fq inverse() const {
        if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of 0 in F_q");
        // Fermat: x^{p^n - 2}
        return pow(pow_int(Int(p()), field_->degree()) - 2);
    }
    friend Fq operator/(const Fq& a, const Fq& b) { return a * b.inverse(); }

    Fq pow(Int e) const {
        if (e < 0) return inverse().pow(-e);
        if (is_zero()) return e == 0 ? field_->one() : *this;
        return Fq(field_, fqdetail::pow_mod(c_, std::move(e), field_->modulus(), p()));
    }

    // phi^m with m any integer; phi is an automorphism of F_{p^n}
    Fq frobenius(long m) const {
        if (is_zero() || field_->degree() == 0) return *this;
        long n = static_cast<long>(field_->degree());
        long r = ((m % n) + n) % n;
        if (r == 0) return *this;
        return pow(pow_int(Int(p()), static_cast<unsigned long>(r)));
    }

    // the coefficient automorphism sigma_k = phi^{s}, iterated k times
    Fq sigma(long k) const { return frobenius(k * static_cast<long>(field_->sigma_power())); }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0 || c_[i] != 1) os << c_[i];
            if (i > 0) {
                if (c_[i] != 1) os << "*";
                os << "g";
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

private:
    unsigned p() const { return field_->p(); }
    static void check_same(const Fq& a, const Fq& b) {
        if (a.field_ != b.field_ && !a.c_.empty() && !b.c_.empty())
            fail(ErrorCode::MixedCoefficientRings, "elements of different finite fields");
    }

    std::shared_ptr<const FqField> field_;
    fqdetail::Poly c_;
};

struct FqField::Extension {
    std::shared_ptr<const FqField> field;
    Fq base_generator_image;
};

inline FqField::~FqField() = default;

inline std::shared_ptr<const FqField> FqField::make(unsigned p, unsigned degree, unsigned sigma_frobenius_power) {
    if (p < 2 || degree < 1) fail(ErrorCode::PreconditionFailed, "finite field needs p >= 2, degree >= 1");
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) fail(ErrorCode::PreconditionFailed, "p must be prime");
    auto mod = fqdetail::find_irreducible(p, degree);
    return std::shared_ptr<const FqField>(new FqField(p, degree, sigma_frobenius_power, std::move(mod)));
}

inline Fq FqField::zero() const { return Fq(shared_from_this(), {}); }
inline Fq FqField::one() const { return Fq(shared_from_this(), {1}); }

inline Fq FqField::from_int(const Int& k) const {
    Int r = k % static_cast<long>(p_);
    if (r < 0) r += static_cast<long>(p_);
    unsigned v = static_cast<unsigned>(r.get_ui());
    return Fq(shared_from_this(), v ? fqdetail::Poly{v} : fqdetail::Poly{});
}

inline Fq FqField::generator() const {
    if (degree_ == 1) return Fq(shared_from_this(), {1});
    return Fq(shared_from_this(), {0, 1});
}

inline Fq FqField::element(unsigned long index) const {
    fqdetail::Poly c;
    for (unsigned i = 0; i < degree_ && index; ++i) {
        unsigned d = static_cast<unsigned>(index % p_);
        if (c.size() <= i && d) c.resize(i + 1, 0);
        if (d) c[i] = d;
        index /= p_;
    }
    return Fq(shared_from_this(), std::move(c));
}

inline const FqField::Extension& FqField::extension(unsigned m) const {
    std::scoped_lock lock(ext_mutex_);
    auto it = extensions_.find(m);
    if (it != extensions_.end()) return *it->second;

    auto ext = std::make_unique<Extension>();
    if (m == 1) {
        ext->field = shared_from_this();
        ext->base_generator_image = generator();
    } else {
        ext->field = FqField::make(p_, degree_ * m, sigma_power_);
        // image of our generator: a root of our modulus in the big field
        bool found = false;
        for (unsigned long i = 0; i < ext->field->size() && !found; ++i) {
            Fq cand = ext->field->element(i);
            Fq acc = ext->field->zero();
            Fq pw = ext->field->one();
            for (unsigned k = 0; k <= degree_; ++k) {
                acc = acc + pw * ext->field->from_int(Int(static_cast<long>(modulus_[k])));
                pw = pw * cand;
            }
            if (acc.is_zero()) {
                ext->base_generator_image = cand;
                found = true;
            }
        }
        if (!found) fail(ErrorCode::PreconditionFailed, "no embedding found (modulus has no root upstairs)");
    }
    auto& slot = extensions_[m];
    slot = std::move(ext);
    return *slot;
}

inline Fq FqField::embed(const Fq& x, const Extension& ext) const {
    Fq acc = ext.field->zero();
    Fq pw = ext.field->one();
    for (size_t i = 0; i < x.coeffs().size(); ++i) {
        acc = acc + pw * ext.field->from_int(Int(static_cast<long>(x.coeffs()[i])));
        pw = pw * ext.base_generator_image;
    }
    return acc;
}

} // namespace transval
