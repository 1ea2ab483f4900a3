#pragma once

#include <utility>
#include <vector>

#include "error.hpp"
#include "sigma.hpp"

namespace transval {

// Value groups as finite lexicographic powers of Q(sigma); sigma acts
// coordinatewise. Height-d composite valuations live here symbolically.
class GammaVector {
public:
    explicit GammaVector(std::vector<SigmaRational> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) fail(ErrorCode::InvalidExponent, "GammaVector needs d >= 1");
    }
    static GammaVector zero(size_t d) { return GammaVector(std::vector<SigmaRational>(d)); }

    size_t dim() const { return coords_.size(); }
    const SigmaRational& operator[](size_t i) const { return coords_[i]; }
    const std::vector<SigmaRational>& coords() const { return coords_; }

    bool is_zero() const {
        for (const auto& c : coords_)
            if (!c.is_zero()) return false;
        return true;
    }

    GammaVector sigma_applied() const {
        std::vector<SigmaRational> out;
        out.reserve(coords_.size());
        for (const auto& c : coords_) out.push_back(SigmaRational::sigma() * c);
        return GammaVector(std::move(out));
    }

    friend GammaVector operator+(const GammaVector& a, const GammaVector& b) {
        check_dims(a, b);
        std::vector<SigmaRational> out;
        out.reserve(a.dim());
        for (size_t i = 0; i < a.dim(); ++i) out.push_back(a[i] + b[i]);
        return GammaVector(std::move(out));
    }
    GammaVector operator-() const {
        std::vector<SigmaRational> out;
        out.reserve(dim());
        for (const auto& c : coords_) out.push_back(-c);
        return GammaVector(std::move(out));
    }
    GammaVector scaled(const SigmaRational& r) const {
        std::vector<SigmaRational> out;
        out.reserve(dim());
        for (const auto& c : coords_) out.push_back(r * c);
        return GammaVector(std::move(out));
    }

    friend Order lex_compare(const GammaVector& a, const GammaVector& b) {
        check_dims(a, b);
        for (size_t i = 0; i < a.dim(); ++i) {
            Order o = compare(a[i], b[i]);
            if (o != Order::Equal) return o;
        }
        return Order::Equal;
    }
    friend bool operator==(const GammaVector& a, const GammaVector& b) { return a.coords_ == b.coords_; }
    friend bool operator<(const GammaVector& a, const GammaVector& b) { return lex_compare(a, b) == Order::Less; }

private:
    static void check_dims(const GammaVector& a, const GammaVector& b) {
        if (a.dim() != b.dim()) fail(ErrorCode::InvalidExponent, "GammaVector dimension mismatch");
    }
    std::vector<SigmaRational> coords_;
};

// Index of the leading nonzero coordinate: identifies the smallest
// sigma-invariant convex subgroup containing gamma (d for gamma = 0).
inline size_t convex_level(const GammaVector& gamma) {
    for (size_t i = 0; i < gamma.dim(); ++i)
        if (!gamma[i].is_zero()) return i;
    return gamma.dim();
}

// Ideals of Gamma_infinity in the shapes arising from the in-scope
// constructions: levels of the convex filtration, radicals of principal
// ideals, the unit ideal, and the zero ideal {infinity}.
struct GammaIdeal {
    enum class Kind { PositivePart, RadicalPrincipal, Everything, PointAtInfinity };

    Kind kind;
    size_t level = 0;                      // PositivePart: elements with convex_level < this are excluded
    std::optional<GammaVector> generator;  // RadicalPrincipal: p^{-inf}[gamma, inf]

    static GammaIdeal positive_part(size_t level) { return {Kind::PositivePart, level, std::nullopt}; }
    static GammaIdeal radical_principal(GammaVector gamma) {
        if (gamma.is_zero() || lex_compare(gamma, GammaVector::zero(gamma.dim())) != Order::Greater)
            fail(ErrorCode::InvalidExponent, "radical principal ideal needs gamma > 0");
        return {Kind::RadicalPrincipal, 0, std::move(gamma)};
    }
    static GammaIdeal everything() { return {Kind::Everything, 0, std::nullopt}; }
    static GammaIdeal point_at_infinity() { return {Kind::PointAtInfinity, 0, std::nullopt}; }
};

// sigma alpha in I implies alpha in I, and 0 not in I. Convex levels pass,
// radicals of principal ideals fail (sigma^{-1} drags the generator below
// every p-power shrink), and the unit ideal contains 0.
inline bool is_transformally_prime(const GammaIdeal& ideal, size_t d) {
    (void)d;
    switch (ideal.kind) {
    case GammaIdeal::Kind::PositivePart: return true;
    case GammaIdeal::Kind::RadicalPrincipal: return false;
    case GammaIdeal::Kind::Everything: return false;
    case GammaIdeal::Kind::PointAtInfinity: return true;
    }
    return false;
}

enum class GammaKind { FullVectorSpace, LaurentLattice };

// Whether multiplication by nu is onto in the declared Gamma. Vector spaces
// over Q(sigma) are transformally divisible; the Laurent lattice
// Z[sigma^{+-1}, p^{+-1}] only inverts its units +-sigma^a p^b.
inline bool divisible_defect(GammaKind kind, const SigmaPoly& nu, const Int& p) {
    if (nu.is_zero()) fail(ErrorCode::DivisionByZero, "nu must be nonzero");
    if (kind == GammaKind::FullVectorSpace) return true;
    int terms = 0;
    Int unit;
    for (int i = 0; i <= nu.degree(); ++i) {
        if (nu.coeff(static_cast<unsigned>(i)) != 0) {
            ++terms;
            unit = nu.coeff(static_cast<unsigned>(i));
        }
    }
    if (terms != 1) return false;
    if (unit < 0) unit = -unit;
    return p == 1 ? unit == 1 : is_power_of(unit, p);
}

} // namespace transval
