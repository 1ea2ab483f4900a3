// Prints the transformal Herbrand functions of a few difference polynomials
// above the origin, with their singular points.

#include <transval/tropical.hpp>

#include <iostream>

using namespace transval;

int main() {
    auto F = FqField::make(3, 1);
    using H = HahnSeries<Fq>;
    using P = DiffPoly<H>;
    auto t = [&](long e) { return H::monomial(SigmaRational(e), F->one()); };
    auto x_pow = [&](SigmaExponent e) { return P::monomial(std::move(e), H::constant(F->one())); };

    std::vector<std::pair<std::string, P>> gallery = {
        {"x^s - x - t", x_pow(SigmaExponent::sigma_power(1)) - x_pow(SigmaExponent(1)) - P::constant(t(1))},
        {"x^p - x - t^-1", x_pow(SigmaExponent(3)) - x_pow(SigmaExponent(1)) - P::constant(t(-1))},
        {"x^(s+1) - t^2 x + t^-1",
         x_pow(SigmaExponent::sigma_power(1) + SigmaExponent(1)) -
             P::monomial(SigmaExponent(1), t(2)) + P::constant(t(-1))},
    };
    for (const auto& [name, f] : gallery) {
        std::cout << "f = " << name << "\n";
        PiecewiseTA psi = herbrand_above_point(f, H::zero());
        for (const auto& piece : psi.pieces) {
            std::cout << "  [" << (piece.from ? piece.from->str() : "-oo") << ", "
                      << (piece.to ? piece.to->str() : "oo") << "]  slope " << piece.slope.str()
                      << "  intercept " << piece.intercept.str() << "\n";
        }
        std::cout << "  strictly increasing: " << (psi.strictly_increasing() ? "yes" : "no") << "\n\n";
    }
    return 0;
}
