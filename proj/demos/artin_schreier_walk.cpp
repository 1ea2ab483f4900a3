// Walks the twisted Artin-Schreier equation x^sigma - x = t^-1: the partial
// sums, their residuals, and the cut data the distances generate.

#include <transval/solver.hpp>

#include <iostream>

using namespace transval;

int main() {
    auto F = FqField::make(2, 1);
    using H = HahnSeries<Fq>;
    using P = DiffPoly<H>;

    H c = H::monomial(SigmaRational(-1), F->one());
    P tau = P::monomial(SigmaExponent::sigma_power(1), H::constant(F->one())) -
            P::variable(H::constant(F->one()));

    std::cout << "tau(x) = x^sigma - x,  c = " << c.str() << "\n\n";
    for (unsigned n = 1; n <= 5; ++n) {
        SigmaRational target = SigmaRational(-1) * SigmaRational::sigma_power(-static_cast<int>(n));
        LiftReport<Fq> rep = solve_additive(tau, c, target);
        std::cout << "x_" << n << " = " << rep.root.str() << "\n";
        std::cout << "     residual valuation " << rep.residual.value.str() << "\n";
    }

    std::cout << "\ncut data of the approximation distances:\n";
    CutData cut = as_cut(c, 5);
    for (const auto& s : cut.samples) std::cout << "  " << s.str() << "\n";
    std::cout << "  -> " << (cut.limit ? cut.limit->str() : "none") << (cut.closed_at_limit ? " (closed)" : " (open)")
              << "\n";
    return 0;
}
