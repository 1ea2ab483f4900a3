#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "diffpoly.hpp"
#include "error.hpp"
#include "hahn.hpp"
#include "tropical.hpp"

namespace transval {

struct Budget {
    size_t max_steps = 64;
    unsigned max_field_power = 3;
    bool best_effort = false; // ball descent returns its last iterate instead of failing
    std::shared_ptr<std::atomic<bool>> cancel; // cooperative cancellation

    void checkpoint() const {
        if (cancel && cancel->load()) fail(ErrorCode::BudgetExceeded, "cancelled");
    }
};

template <CoefficientRing C>
struct LiftReport {
    HahnSeries<C> root;
    Valuation residual;         // valuation of f(root)
    size_t steps = 0;
    Valuation distance_to_seed; // v(seed - root)
};

// No root in the ball, in any extension: the Herbrand function above the
// ball fails to be strictly increasing, and the failing function is returned
// as the certificate.
struct NoRootCertificate {
    PiecewiseTA psi;
};

enum class ResidueMode {
    Specialized, // sigma acts on residues as a concrete Frobenius power; brute-force search
    Symbolic,    // only additive or purely algebraic residue equations are accepted
};

namespace solver_detail {

inline bool exponent_is_algebraic(const SigmaExponent& e) {
    return e.is_zero() || e.top_index() == 0;
}

template <CoefficientRing C>
bool residue_equation_supported_symbolically(const DiffPoly<C>& fbar, const Int& p) {
    bool algebraic = true, additive = true;
    for (const auto& [e, c] : fbar.terms()) {
        if (!exponent_is_algebraic(e)) algebraic = false;
        if (!e.is_zero() && !e.is_transformal_p_power(p)) additive = false;
    }
    return algebraic || additive;
}

// Residue root over a finite field: enumerate the field, then its extensions
// up to the budgeted power. A root found upstairs reports the extension so
// the caller can move the whole computation there.
struct FqResidueRoot {
    Fq root;
    unsigned field_power = 1; // relative degree of the field the root lives in
};

inline std::optional<FqResidueRoot> find_residue_root(const DiffPoly<Fq>& fbar, const Budget& budget) {
    if (fbar.is_zero()) fail(ErrorCode::PreconditionFailed, "vanishing residue equation");
    std::shared_ptr<const FqField> base;
    for (const auto& [e, c] : fbar.terms()) {
        base = c.field();
        break;
    }
    for (unsigned m = 1; m <= budget.max_field_power; ++m) {
        budget.checkpoint();
        const auto& ext = base->extension(m);
        DiffPoly<Fq> lifted;
        for (const auto& [e, c] : fbar.terms())
            lifted = lifted + DiffPoly<Fq>::monomial(e, base->embed(c, ext));
        for (unsigned long i = 0; i < ext.field->size(); ++i) {
            Fq cand = ext.field->element(i);
            if (lifted.evaluate(cand).is_zero()) return FqResidueRoot{cand, m};
        }
    }
    return std::nullopt;
}

struct RatResidueRoot {
    Rat root;
    unsigned field_power = 1;
};

// Rational residue roots via the rational root theorem on the collapsed
// one-variable polynomial (sigma acts trivially on Q).
inline std::optional<RatResidueRoot> find_residue_root(const DiffPoly<Rat>& fbar, const Budget&) {
    std::map<Int, Rat> uni;
    for (const auto& [e, c] : fbar.terms()) {
        Rat deg = e.evaluate(Rat(1));
        if (!is_integer(deg)) fail(ErrorCode::InvalidExponent, "fractional exponent over Q");
        uni[deg.get_num()] += c;
    }
    for (auto it = uni.begin(); it != uni.end();) it = it->second == 0 ? uni.erase(it) : std::next(it);
    if (uni.empty()) return RatResidueRoot{Rat(0), 1};
    if (uni.count(Int(0)) == 0) return RatResidueRoot{Rat(0), 1};
    if (uni.size() == 1) return std::nullopt; // nonzero constant
    Int lcm(1);
    for (const auto& [n, c] : uni) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    Int a0 = abs(Int(uni.begin()->second * Rat(lcm)));
    Int lead = abs(Int(uni.rbegin()->second * Rat(lcm)));
    if (a0 > 1000000 || lead > 1000000)
        fail(ErrorCode::SymbolicResidueUnsupported, "rational residue search bound exceeded");
    auto divisors = [](const Int& n) {
        std::vector<Int> out;
        for (Int d(1); d * d <= n; ++d) {
            if (n % d == 0) {
                out.push_back(d);
                out.push_back(n / d);
            }
        }
        return out;
    };
    auto value_at = [&uni](const Rat& x) {
        Rat acc(0);
        for (const auto& [n, c] : uni) acc += c * pow_rat(x, n.get_si());
        return acc;
    };
    for (const Int& pnum : divisors(a0)) {
        for (const Int& pden : divisors(lead)) {
            for (int sign : {1, -1}) {
                Rat cand(sign * pnum, pden);
                cand.canonicalize();
                if (value_at(cand) == 0) return RatResidueRoot{cand, 1};
            }
        }
    }
    return std::nullopt;
}

template <CoefficientRing C>
DiffPoly<C> residue_polynomial(const DiffPoly<HahnSeries<C>>& f) {
    DiffPoly<C> out;
    for (const auto& [e, c] : f.terms()) {
        Valuation v = c.valuation();
        if (v.kind == Valuation::Kind::Unknown)
            fail(ErrorCode::PrecisionLoss, "residue hidden below precision");
        if (v.kind == Valuation::Kind::Infinity) continue;
        if (compare(v.value, SigmaRational(0)) == Order::Less)
            fail(ErrorCode::PreconditionFailed, "polynomial not integral");
        if (v.value.is_zero()) out = out + DiffPoly<C>::monomial(e, c.leading_coeff());
    }
    return out;
}

// embed a whole Hahn-series problem into a finite-field extension
inline HahnSeries<Fq> embed_series(const HahnSeries<Fq>& x, const std::shared_ptr<const FqField>& base,
                                   const FqField::Extension& ext) {
    std::vector<HahnSeries<Fq>::Term> t;
    for (const auto& [e, c] : x.terms()) t.emplace_back(e, base->embed(c, ext));
    return HahnSeries<Fq>(std::move(t), x.prec());
}

inline DiffPoly<HahnSeries<Fq>> embed_poly(const DiffPoly<HahnSeries<Fq>>& f,
                                           const std::shared_ptr<const FqField>& base,
                                           const FqField::Extension& ext) {
    DiffPoly<HahnSeries<Fq>> out;
    for (const auto& [e, c] : f.terms())
        out = out + DiffPoly<HahnSeries<Fq>>::monomial(e, embed_series(c, base, ext));
    return out;
}

} // namespace solver_detail

// ---------------------------------------------------------------------------
// Newton iteration.
// ---------------------------------------------------------------------------

// One Newton step a - f(a)/f'(a); requires v(f(a)) > 2 v(f'(a)) except for
// affine polynomials, where the step is exact unconditionally.
template <CoefficientRing C>
HahnSeries<C> newton_step(const DiffPoly<HahnSeries<C>>& f, const HahnSeries<C>& a,
                          std::optional<SigmaRational> work_prec = std::nullopt) {
    HahnSeries<C> fa = f.evaluate(a);
    if (fa.is_exact_zero()) return a;
    HahnSeries<C> fpa = f.derivative().evaluate(a);
    Valuation va = fa.valuation(), vp = fpa.valuation();
    if (!vp.is_finite()) fail(ErrorCode::PrecisionLoss, "derivative value invisible at current precision");
    bool affine = true;
    for (const auto& [e, c] : f.terms())
        if (!e.is_zero() && !(e == SigmaExponent(1))) affine = false;
    if (!affine && va.is_finite() && compare(va.value, SigmaRational(2) * vp.value) != Order::Greater)
        fail(ErrorCode::PreconditionFailed, "newton step needs v(f(a)) > 2 v(f'(a))");
    if (!va.is_finite()) return a; // residual already beyond current knowledge
    std::optional<SigmaRational> inv_prec;
    if (work_prec && !(fpa.terms().size() == 1 && fpa.is_exact())) inv_prec = *work_prec - va.value;
    HahnSeries<C> h = fa * fpa.inverse(inv_prec);
    return a - h;
}

// Iterate Newton steps until v(f(b)) reaches the target.
template <CoefficientRing C>
LiftReport<C> newton_iterate(const DiffPoly<HahnSeries<C>>& f, const HahnSeries<C>& seed,
                             const SigmaRational& target_prec, const Budget& budget = {}) {
    LiftReport<C> rep;
    rep.root = seed;
    auto residual = [&f](const HahnSeries<C>& a) { return f.evaluate(a).valuation(); };
    rep.residual = residual(seed);
    std::optional<SigmaRational> prev;
    while (true) {
        budget.checkpoint();
        switch (rep.residual.kind) {
        case Valuation::Kind::Infinity: goto done;
        case Valuation::Kind::Unknown:
            if (compare(rep.residual.value, target_prec) != Order::Less) goto done;
            fail(ErrorCode::PrecisionLoss, "residual invisible below the target precision");
        case Valuation::Kind::Finite:
            if (compare(rep.residual.value, target_prec) != Order::Less) goto done;
            break;
        }
        if (prev && compare(rep.residual.value, *prev) != Order::Greater)
            fail(ErrorCode::BudgetExceeded, "newton iteration stalled");
        prev = rep.residual.value;
        if (rep.steps >= budget.max_steps)
            fail(ErrorCode::BudgetExceeded, "newton iteration exceeded max steps at residual " +
                                                rep.residual.value.str());
        rep.root = newton_step(f, rep.root, target_prec);
        rep.residual = residual(rep.root);
        ++rep.steps;
    }
done:
    rep.distance_to_seed = (seed - rep.root).valuation();
    return rep;
}

// Transformal Hensel lifting: from an integral seed with v(f(a)) > 0 and
// v(f'(a)) = 0, produce the unique nearby root; the distance to the seed is
// v(f(seed)).
template <CoefficientRing C>
LiftReport<C> hensel_lift(const DiffPoly<HahnSeries<C>>& f, const HahnSeries<C>& seed,
                          const SigmaRational& target_prec, const Budget& budget = {}) {
    HahnSeries<C> fs = f.evaluate(seed);
    Valuation vs = fs.valuation();
    if (vs.is_finite() && compare(vs.value, SigmaRational(0)) != Order::Greater)
        fail(ErrorCode::PreconditionFailed, "hensel lift needs v(f(seed)) > 0");
    Valuation vseed = seed.valuation();
    if (vseed.is_finite() && compare(vseed.value, SigmaRational(0)) == Order::Less)
        fail(ErrorCode::PreconditionFailed, "hensel lift needs an integral seed");
    Valuation vp = f.derivative().evaluate(seed).valuation();
    if (!vp.is_finite() || !vp.value.is_zero())
        fail(ErrorCode::PreconditionFailed, "hensel lift needs v(f'(seed)) = 0 (twist first)");
    return newton_iterate(f, seed, target_prec, budget);
}

// ---------------------------------------------------------------------------
// Root in a ball: the Herbrand criterion plus residue-root descent.
// ---------------------------------------------------------------------------
template <CoefficientRing C>
using BallSearchResult = std::variant<LiftReport<C>, NoRootCertificate>;

template <CoefficientRing C>
BallSearchResult<C> root_in_ball(const DiffPoly<HahnSeries<C>>& f, const Ball<C>& ball, ResidueMode mode,
                                 const SigmaRational& target_prec, const Budget& budget = {}) {
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "root search for the zero polynomial");
    PiecewiseTA psi = herbrand(f, ball);
    if (!psi.strictly_increasing()) return NoRootCertificate{std::move(psi)};

    Int p = f.characteristic();
    DiffPoly<HahnSeries<C>> g = f;
    HahnSeries<C> seed = ball.center;
    HahnSeries<C> center = ball.center;
    SigmaRational radius = ball.radius;
    C one = [&] {
        for (const auto& [e, c] : f.terms())
            for (const auto& [ge, gc] : c.terms()) return coeff_one_like(gc);
        fail(ErrorCode::PrecisionLoss, "no sample coefficient");
    }();

    LiftReport<C> rep;
    for (size_t step = 0;; ++step) {
        budget.checkpoint();
        HahnSeries<C> value = g.evaluate(center);
        Valuation rv = value.valuation();
        bool done = false;
        switch (rv.kind) {
        case Valuation::Kind::Infinity: done = true; break;
        case Valuation::Kind::Unknown:
            if (compare(rv.value, target_prec) != Order::Less) done = true;
            else fail(ErrorCode::PrecisionLoss, "residual invisible below the target precision");
            break;
        case Valuation::Kind::Finite:
            done = compare(rv.value, target_prec) != Order::Less;
            break;
        }
        if (done || (budget.best_effort && step >= budget.max_steps)) {
            rep.root = center;
            rep.residual = rv;
            rep.steps = step;
            rep.distance_to_seed = (seed - rep.root).valuation();
            return rep;
        }
        if (step >= budget.max_steps)
            fail(ErrorCode::BudgetExceeded,
                 "ball descent exhausted at radius " + radius.str() + ", residual " + rv.value.str());

        // fast path once the Newton precondition holds
        Valuation vp = g.derivative().evaluate(center).valuation();
        if (vp.is_finite() && compare(rv.value, SigmaRational(2) * vp.value) == Order::Greater) {
            LiftReport<C> lifted = newton_iterate(g, center, target_prec, budget);
            lifted.steps += step;
            lifted.distance_to_seed = (seed - lifted.root).valuation();
            return lifted;
        }

        // normalize the current ball to the unit ball and read off residues
        HahnSeries<C> scale = HahnSeries<C>::monomial(radius, one);
        DiffPoly<HahnSeries<C>> normalized = g.translate(center).rescale(scale);
        SigmaRational shift = generic_value(normalized, Ball<C>{HahnSeries<C>::zero(), SigmaRational(0), true});
        normalized = normalized.scaled(HahnSeries<C>::monomial(-shift, one));
        DiffPoly<C> rbar = solver_detail::residue_polynomial(normalized);
        if (mode == ResidueMode::Symbolic && !solver_detail::residue_equation_supported_symbolically(rbar, p))
            fail(ErrorCode::SymbolicResidueUnsupported,
                 "residue equation is neither additive nor algebraic; use specialized mode");
        auto found = solver_detail::find_residue_root(rbar, budget);
        if (!found) {
            if constexpr (std::is_same_v<C, Fq>)
                fail(ErrorCode::ResidueSearchExhausted,
                     "no residue root within field-power budget " + std::to_string(budget.max_field_power));
            else
                fail(ErrorCode::SymbolicResidueUnsupported, "residue equation has no rational root");
        }
        if constexpr (std::is_same_v<C, Fq>) {
            if (found->field_power > 1) {
                // move the whole problem into the extension and restart there
                auto base = one.field();
                const auto& ext = base->extension(found->field_power);
                Ball<Fq> lifted_ball{solver_detail::embed_series(center, base, ext), radius, ball.closed};
                Budget rest = budget;
                rest.max_steps = budget.max_steps > step ? budget.max_steps - step : 0;
                rest.max_field_power = std::max(1u, budget.max_field_power / found->field_power);
                auto sub =
                    root_in_ball(solver_detail::embed_poly(g, base, ext), lifted_ball, mode, target_prec, rest);
                if (auto* r = std::get_if<LiftReport<Fq>>(&sub)) {
                    r->steps += step;
                    r->distance_to_seed =
                        (solver_detail::embed_series(seed, base, ext) - r->root).valuation();
                }
                return sub;
            }
        }
        HahnSeries<C> move = HahnSeries<C>::monomial(radius, found->root);
        if (coeff_is_zero(found->root)) move = HahnSeries<C>::zero();
        HahnSeries<C> next_center = center + move;

        // shrink to the maximal singular point above the new center
        PiecewiseTA above = herbrand_above_point(g, next_center, false);
        auto next_radius = above.max_singular_point();
        if (g.evaluate(next_center).is_exact_zero()) {
            center = next_center;
            continue; // reported as an exact root at the top of the loop
        }
        if (!next_radius || compare(*next_radius, radius) != Order::Greater)
            fail(ErrorCode::BudgetExceeded, "ball descent made no progress");
        center = std::move(next_center);
        radius = std::move(*next_radius);
    }
}

// ---------------------------------------------------------------------------
// Additive equations tau(x) = c.
// ---------------------------------------------------------------------------
template <CoefficientRing C>
void require_additive(const DiffPoly<HahnSeries<C>>& tau, const Int& p) {
    if (tau.is_zero() || tau.is_constant())
        fail(ErrorCode::PreconditionFailed, "additive operator must be nonconstant");
    for (const auto& [e, c] : tau.terms())
        if (!e.is_transformal_p_power(p))
            fail(ErrorCode::PreconditionFailed, "not an additive operator: exponent " + e.str());
}

// valuation of the distinguished solution: the tropical root of tau(x) - c
// whose line meets the constant line first
template <CoefficientRing C>
SigmaRational additive_root_valuation(const DiffPoly<HahnSeries<C>>& tau, const HahnSeries<C>& c) {
    Valuation vc = c.valuation();
    if (!vc.is_finite()) fail(ErrorCode::PreconditionFailed, "right-hand side must have a finite valuation");
    std::optional<SigmaRational> best;
    for (const auto& t : valued_terms(tau)) {
        SigmaRational cand = (vc.value - t.beta) / t.exp_value;
        if (!best || cand > *best) best = cand;
    }
    return *best;
}

template <CoefficientRing C>
LiftReport<C> solve_additive(const DiffPoly<HahnSeries<C>>& tau, const HahnSeries<C>& c,
                             const SigmaRational& target_prec, ResidueMode mode = ResidueMode::Specialized,
                             const Budget& budget = {}) {
    require_additive(tau, tau.characteristic());
    SigmaRational gamma = additive_root_valuation(tau, c);
    DiffPoly<HahnSeries<C>> f = tau - DiffPoly<HahnSeries<C>>::constant(c);
    auto result = root_in_ball(f, Ball<C>{HahnSeries<C>::zero(), gamma, true}, mode, target_prec, budget);
    if (auto* r = std::get_if<LiftReport<C>>(&result)) return std::move(*r);
    fail(ErrorCode::PreconditionFailed, "additive equation has no root in its tropical ball");
}

// ---------------------------------------------------------------------------
// Scatteredness: the valuative distances between roots of tau(x) = c.
// For an additive operator the distances are the valuations of the nonzero
// kernel elements, and the kernel consists of residue constants.
// ---------------------------------------------------------------------------
inline std::vector<SigmaRational> root_distances(const DiffPoly<HahnSeries<Fq>>& tau, unsigned field_power,
                                                 const std::optional<HahnSeries<Fq>>& c = std::nullopt,
                                                 const SigmaRational& target_prec = SigmaRational(0),
                                                 ResidueMode mode = ResidueMode::Specialized,
                                                 const Budget& budget = {}) {
    Int p = tau.characteristic();
    require_additive(tau, p);
    DiffPoly<Fq> rbar;
    std::shared_ptr<const FqField> base;
    for (const auto& [e, coeff] : tau.terms()) {
        Valuation v = coeff.valuation();
        if (!v.is_finite() || !v.value.is_zero())
            fail(ErrorCode::PreconditionFailed, "additive operator must have unit coefficients");
        rbar = rbar + DiffPoly<Fq>::monomial(e, coeff.leading_coeff());
        base = coeff.leading_coeff().field();
    }
    if (c && !c->is_exact_zero()) {
        // distances are only reported for roots that exist within budget
        (void)solve_additive(tau, *c, target_prec, mode, budget);
    }
    const auto& ext = base->extension(field_power);
    DiffPoly<Fq> lifted;
    for (const auto& [e, coeff] : rbar.terms())
        lifted = lifted + DiffPoly<Fq>::monomial(e, base->embed(coeff, ext));
    size_t kernel_size = 0;
    for (unsigned long i = 0; i < ext.field->size(); ++i) {
        budget.checkpoint();
        if (lifted.evaluate(ext.field->element(i)).is_zero()) ++kernel_size;
    }
    std::vector<SigmaRational> out;
    if (kernel_size > 1) out.push_back(SigmaRational(0)); // nonzero constants have valuation 0
    return out;
}

} // namespace transval
