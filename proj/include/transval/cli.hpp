#pragma once

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "parse.hpp"
#include "serialize.hpp"
#include "solver.hpp"

namespace transval::cli {

// Exit statuses: 0 success, 1 usage error, 2 typed domain error. The switch
// is total over ErrorCode so a new error type cannot ship without a mapping.
inline int exit_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::DivisionByZero:
    case ErrorCode::CharacteristicOne:
    case ErrorCode::DenominatorVanishes:
    case ErrorCode::NotOmegaIncreasing:
    case ErrorCode::InvalidExponent:
    case ErrorCode::MixedCoefficientRings:
    case ErrorCode::NonUnitScale:
    case ErrorCode::ZeroPolynomial:
    case ErrorCode::SupportCollision:
    case ErrorCode::PrecisionLoss:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::NonNegativeValuation:
    case ErrorCode::PreconditionFailed:
    case ErrorCode::ResidueSearchExhausted:
    case ErrorCode::SymbolicResidueUnsupported:
    case ErrorCode::LimitNotRational:
    case ErrorCode::SyntaxError:
    case ErrorCode::TypeError:
        return 2;
    }
    return 2;
}

struct Session {
    unsigned p = 1;             // characteristic exponent (1 or a prime)
    unsigned field_degree = 1;  // coefficients in F_{p^degree} when p >= 2
    unsigned sigma_power = 0;   // sigma_k = phi^s on coefficients
    std::optional<Int> q;       // specialization parameter
    std::string prec_text = "s^2";
    long budget_steps = 64;
    unsigned field_power = 3;   // residue search tower bound
    bool json = false;
    bool svg = false;
    long display_q = 2;

    std::shared_ptr<const FqField> field; // built on demand when p >= 2

    SigmaRational default_prec() const { return Parser(prec_text, p).parse_sigma_expression(); }
};

struct RunResult {
    int status = 0;
    std::string out;
    std::string err;
};

using PolyQ = DiffPoly<HahnSeries<Rat>>;
using PolyF = DiffPoly<HahnSeries<Fq>>;
using AnyPoly = std::variant<PolyQ, PolyF>;

namespace detail {

inline void load_config(Session& s) {
    const char* path = std::getenv("TRANSVAL_CONFIG");
    std::string file = path ? path : "transval.conf";
    std::ifstream in(file);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string v) {
            size_t a = v.find_first_not_of(" \t");
            size_t b = v.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "p") s.p = static_cast<unsigned>(std::stoul(value));
        else if (key == "field") s.field_degree = static_cast<unsigned>(std::stoul(value));
        else if (key == "prec") s.prec_text = value;
        else if (key == "q") s.q = Int(value, 10);
        else if (key == "budget") s.budget_steps = std::stol(value);
        else if (key == "format" && value == "json") s.json = true;
    }
}

inline void apply_env(Session& s) {
    if (const char* b = std::getenv("TRANSVAL_BUDGET")) s.budget_steps = std::stol(b);
}

inline Budget budget_of(const Session& s) {
    Budget b;
    b.max_steps = static_cast<size_t>(s.budget_steps);
    b.max_field_power = s.field_power;
    return b;
}

// q must specialize sigma as a concrete Frobenius power on the coefficients
inline unsigned frobenius_power_of_q(unsigned p, const Int& q) {
    Int r = q;
    unsigned s = 0;
    while (r % p == 0) {
        r /= p;
        ++s;
    }
    if (r != 1 || s == 0)
        fail(ErrorCode::PreconditionFailed,
             "q = " + q.get_str() + " is not a positive power of the characteristic " + std::to_string(p));
    return s;
}

inline void finalize(Session& s) {
    if (s.p != 1) {
        for (unsigned d = 2; d * d <= s.p; ++d)
            if (s.p % d == 0) fail(ErrorCode::PreconditionFailed, "p must be 1 or a prime");
        if (s.q) {
            s.sigma_power = frobenius_power_of_q(s.p, *s.q);
            if (s.field_degree == 1) s.field_degree = s.sigma_power;
        }
        s.field = FqField::make(s.p, std::max(1u, s.field_degree), s.sigma_power);
    } else if (s.field_degree > 1) {
        fail(ErrorCode::PreconditionFailed, "finite coefficient fields need p >= 2");
    }
}

inline AnyPoly parse_poly(const Session& s, const std::string& text) {
    Ast ast = Parser(text, s.p).parse_expression();
    if (s.p == 1) {
        EvalContext<Rat> ctx{1, Rat(1)};
        return evaluate_ast(ast, ctx);
    }
    EvalContext<Fq> ctx{s.p, s.field->one()};
    return evaluate_ast(ast, ctx);
}

template <CoefficientRing C>
HahnSeries<C> as_series(const DiffPoly<HahnSeries<C>>& f) {
    if (!f.is_constant()) fail(ErrorCode::TypeError, "expected a series (no x)");
    if (f.is_zero()) return HahnSeries<C>::zero();
    return f.terms().begin()->second;
}

inline SigmaRational parse_sexpr(const Session& s, const std::string& text) {
    return Parser(text, s.p).parse_sigma_expression();
}

// ---- text rendering ----

inline std::string render_piecewise(const PiecewiseTA& psi) {
    std::ostringstream os;
    os << "domain: lambda < " << (psi.domain_end ? psi.domain_end->str() : "oo") << "\n";
    for (const auto& p : psi.pieces) {
        os << "  [" << (p.from ? p.from->str() : "-oo") << ", " << (p.to ? p.to->str() : "oo") << "]"
           << "  slope " << p.slope.str() << "  intercept " << p.intercept.str() << "\n";
    }
    auto sing = psi.singular_points();
    os << "singular points:";
    if (sing.empty()) os << " none";
    for (const auto& x : sing) os << " " << x.str();
    os << "\nstrictly increasing: " << (psi.strictly_increasing() ? "yes" : "no") << "\n";
    return os.str();
}

inline std::string render_valuation(const Valuation& v) {
    switch (v.kind) {
    case Valuation::Kind::Finite: return v.value.str();
    case Valuation::Kind::Infinity: return "oo";
    case Valuation::Kind::Unknown: return ">= " + v.value.str();
    }
    return "?";
}

// Piecewise plot: Q(sigma) is linearized through a display specialization,
// which is printed on the plot.
inline std::string emit_plot(const PiecewiseTA& psi, long display_q) {
    Rat q(display_q);
    if (psi.pieces.empty()) {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"420\" height=\"300\">\n";
        os << "  <line x1=\"40\" y1=\"260\" x2=\"380\" y2=\"260\" stroke=\"#888\"/>\n";
        os << "  <line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"260\" stroke=\"#888\"/>\n";
        os << "  <text x=\"40\" y=\"30\" font-size=\"12\">Psi(lambda), display q = " << display_q
           << " (empty domain)</text>\n";
        os << "</svg>\n";
        return os.str();
    }
    std::vector<double> xs, ys;
    auto fy = [&](const SigmaRational& lam) {
        return psi.value_at(lam).specialize(q).get_d();
    };
    std::vector<SigmaRational> sing = psi.singular_points();
    SigmaRational lo = sing.empty() ? SigmaRational(-1) : sing.front() - SigmaRational(1);
    SigmaRational hi_sym = sing.empty() ? SigmaRational(1) : sing.back() + SigmaRational(1);
    if (psi.domain_end && compare(hi_sym, *psi.domain_end) != Order::Less)
        hi_sym = *psi.domain_end - SigmaRational(Rat(1, 2));
    if (!(compare(lo, hi_sym) == Order::Less)) lo = hi_sym - SigmaRational(1);
    xs.push_back(lo.specialize(q).get_d());
    ys.push_back(fy(lo));
    for (const auto& bp : sing) {
        xs.push_back(bp.specialize(q).get_d());
        ys.push_back(fy(bp));
    }
    xs.push_back(hi_sym.specialize(q).get_d());
    ys.push_back(fy(hi_sym));

    double xmin = xs.front(), xmax = xs.front(), ymin = ys.front(), ymax = ys.front();
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (double y : ys) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax - xmin < 1e-9) xmax = xmin + 1;
    if (ymax - ymin < 1e-9) ymax = ymin + 1;
    const double W = 420, H = 300, M = 40;
    auto px = [&](double x) { return M + (x - xmin) / (xmax - xmin) * (W - 2 * M); };
    auto py = [&](double y) { return H - M - (y - ymin) / (ymax - ymin) * (H - 2 * M); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "  <line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M
       << "\" stroke=\"#888\"/>\n";
    os << "  <line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M
       << "\" stroke=\"#888\"/>\n";
    os << "  <text x=\"" << M << "\" y=\"" << M - 10 << "\" font-size=\"12\">Psi(lambda), display q = "
       << display_q << "</text>\n";
    os << "  <polyline fill=\"none\" stroke=\"#1a6\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) os << px(xs[i]) << "," << py(ys[i]) << " ";
    os << "\"/>\n";
    for (size_t i = 1; i + 1 < xs.size(); ++i)
        os << "  <circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i]) << "\" r=\"3\" fill=\"#d33\"/>\n";
    for (size_t i = 0; i < psi.pieces.size() && i + 1 <= xs.size(); ++i) {
        double mx = (xs[std::min(i, xs.size() - 2)] + xs[std::min(i + 1, xs.size() - 1)]) / 2;
        double my = (ys[std::min(i, ys.size() - 2)] + ys[std::min(i + 1, ys.size() - 1)]) / 2;
        os << "  <text x=\"" << px(mx) << "\" y=\"" << py(my) - 6 << "\" font-size=\"11\">slope "
           << psi.pieces[i].slope.str() << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace detail

// Command implementations; each returns the result JSON and fills a text
// rendering for the default output mode.
class Driver {
public:
    Session session;
    std::string command;
    std::string expr_text;
    std::string seed_text = "0";
    std::string center_text = "0";
    std::optional<std::string> radius_text;
    std::optional<std::string> rhs_text;
    std::optional<std::string> prec_override;
    std::string mode_text = "specialized";
    unsigned distances_power = 1;
    bool above_root = false;
    bool open_ball = false;
    unsigned as_terms = 4;

    Json result;
    std::string text;

    void run() {
        detail::finalize(session);
        if (command == "taylor") cmd_taylor();
        else if (command == "polygon") cmd_polygon();
        else if (command == "tropical") cmd_tropical();
        else if (command == "herbrand") cmd_herbrand();
        else if (command == "solve") cmd_solve();
        else if (command == "lift") cmd_lift();
        else if (command == "ball") cmd_ball();
        else if (command == "distances") cmd_distances();
        else if (command == "specialize") cmd_specialize();
        else if (command == "asroot") cmd_asroot();
        else if (command == "cut") cmd_cut();
        else fail(ErrorCode::PreconditionFailed, "unknown command " + command);
    }

private:
    ResidueMode mode() const {
        if (mode_text == "specialized") return ResidueMode::Specialized;
        if (mode_text == "symbolic") return ResidueMode::Symbolic;
        fail(ErrorCode::PreconditionFailed, "mode must be specialized or symbolic");
    }

    SigmaRational target_prec() const {
        if (prec_override) return detail::parse_sexpr(session, *prec_override);
        return session.default_prec();
    }

    template <class Fn>
    void with_poly(Fn&& fn) {
        auto any = detail::parse_poly(session, expr_text);
        std::visit(std::forward<Fn>(fn), any);
    }

    void cmd_taylor() {
        with_poly([&](const auto& f) {
            Json terms = Json::array();
            std::ostringstream os;
            for (const auto& [nu, fnu] : f.taylor()) {
                terms.push_back({{"exp", to_json(nu)}, {"poly", to_json(fnu)}, {"text", fnu.str()}});
                os << "f_(" << nu.str() << ") = " << fnu.str() << "\n";
            }
            result = Json{{"taylor", terms}};
            text = os.str();
        });
    }

    void cmd_polygon() {
        with_poly([&](const auto& f) {
            NewtonPolygon np = newton_polygon(f);
            result = to_json(np);
            std::ostringstream os;
            os << "hull:";
            for (const auto& [x, y] : np.hull) os << " (" << x.str() << ", " << y.str() << ")";
            os << "\nslopes:";
            for (const auto& s : np.slopes) os << " " << s.str();
            os << "\n";
            text = os.str();
        });
    }

    void cmd_tropical() {
        with_poly([&](const auto& f) {
            TropicalRoots tr = tropical_roots(f);
            result = to_json(tr);
            std::ostringstream os;
            os << "tropical roots:";
            for (const auto& r : tr.finite) os << " " << r.str();
            if (tr.infinity) os << " oo";
            os << "\n";
            text = os.str();
        });
    }

    void cmd_herbrand() {
        with_poly([&](const auto& f) {
            using Series = std::decay_t<decltype(f.terms().begin()->second)>;
            Series center = detail::as_series(
                std::get<DiffPoly<Series>>(detail::parse_poly(session, center_text)));
            PiecewiseTA psi = [&] {
                if (above_root && center_text == "0") {
                    // locate a root first, then compute Psi above it; a few
                    // refinement steps are enough for the derivative values
                    // to stabilize
                    auto sol = solve_for_root(f, /*refine_only=*/true);
                    return herbrand_above_point(f, sol, true);
                }
                if (radius_text) {
                    using C = std::decay_t<decltype(f.terms().begin()->second.terms().front().second)>;
                    Ball<C> b{center, detail::parse_sexpr(session, *radius_text), !open_ball};
                    return herbrand(f, b);
                }
                return herbrand_above_point(f, center, above_root);
            }();
            result = to_json(psi);
            text = detail::render_piecewise(psi);
            if (session.svg) text = detail::emit_plot(psi, session.display_q);
        });
    }

    // distinguished root used by `herbrand --above-root` and `solve`
    template <class Series>
    Series solve_for_root(const DiffPoly<Series>& f, bool refine_only = false) {
        using C = std::decay_t<decltype(f.terms().begin()->second.terms().front().second)>;
        SigmaRational gamma = solve_ball_radius(f);
        Budget budget = detail::budget_of(session);
        if (refine_only) {
            budget.max_steps = std::min<size_t>(budget.max_steps, 10);
            budget.best_effort = true;
        }
        auto res = root_in_ball(f, Ball<C>{Series::zero(), gamma, true}, mode(), target_prec(), budget);
        if (auto* rep = std::get_if<LiftReport<C>>(&res)) return rep->root;
        fail(ErrorCode::PreconditionFailed, "no root: the Herbrand function above the tropical ball is flat");
    }

    template <class Series>
    SigmaRational solve_ball_radius(const DiffPoly<Series>& f) {
        // the tropical root whose line meets the constant line first; with no
        // constant term, 0 is a root and the ball collapses onto it
        std::optional<SigmaRational> beta0;
        std::optional<SigmaRational> best;
        for (const auto& t : valued_terms(f)) {
            if (t.exp.is_zero()) beta0 = t.beta;
        }
        if (!beta0) return SigmaRational(0);
        for (const auto& t : valued_terms(f)) {
            if (t.exp.is_zero()) continue;
            SigmaRational cand = (*beta0 - t.beta) / t.exp_value;
            if (!best || cand > *best) best = cand;
        }
        if (!best) fail(ErrorCode::PreconditionFailed, "constant polynomial has no roots");
        return *best;
    }

    void cmd_solve() {
        with_poly([&](const auto& f) {
            using Series = std::decay_t<decltype(f.terms().begin()->second)>;
            using C = std::decay_t<decltype(f.terms().begin()->second.terms().front().second)>;
            if (f.is_zero() || f.is_constant())
                fail(ErrorCode::PreconditionFailed, "solve needs a nonconstant polynomial");
            SigmaRational gamma = solve_ball_radius(f);
            auto res = root_in_ball(f, Ball<C>{Series::zero(), gamma, true}, mode(), target_prec(),
                                    detail::budget_of(session));
            report_search(res);
        });
    }

    void cmd_lift() {
        with_poly([&](const auto& f) {
            using Series = std::decay_t<decltype(f.terms().begin()->second)>;
            Series seed =
                detail::as_series(std::get<DiffPoly<Series>>(detail::parse_poly(session, seed_text)));
            auto rep = hensel_lift(f, seed, target_prec(), detail::budget_of(session));
            result = to_json(rep);
            text = render_report(rep);
        });
    }

    void cmd_ball() {
        if (!radius_text) fail(ErrorCode::PreconditionFailed, "ball needs --radius");
        with_poly([&](const auto& f) {
            using Series = std::decay_t<decltype(f.terms().begin()->second)>;
            using C = std::decay_t<decltype(f.terms().begin()->second.terms().front().second)>;
            Series center = detail::as_series(
                std::get<DiffPoly<Series>>(detail::parse_poly(session, center_text)));
            Ball<C> b{center, detail::parse_sexpr(session, *radius_text), !open_ball};
            auto res = root_in_ball(f, b, mode(), target_prec(), detail::budget_of(session));
            report_search(res);
        });
    }

    void cmd_distances() {
        if (session.p == 1)
            fail(ErrorCode::PreconditionFailed, "distances runs in specialized mode over a finite field");
        auto any = detail::parse_poly(session, expr_text);
        auto& tau = std::get<PolyF>(any);
        std::optional<HahnSeries<Fq>> rhs;
        if (rhs_text)
            rhs = detail::as_series(std::get<PolyF>(detail::parse_poly(session, *rhs_text)));
        auto ds = root_distances(tau, distances_power, rhs, target_prec(), mode(), detail::budget_of(session));
        Json arr = Json::array();
        std::ostringstream os;
        os << "distances:";
        for (const auto& d : ds) {
            arr.push_back(to_json(d));
            os << " " << d.str();
        }
        if (ds.empty()) os << " (none)";
        os << "\n";
        result = Json{{"distances", arr}};
        text = os.str();
    }

    void cmd_specialize() {
        if (!session.q) fail(ErrorCode::PreconditionFailed, "specialize needs --q");
        with_poly([&](const auto& f) {
            auto uni = f.specialize_sigma(*session.q);
            Json terms = Json::array();
            for (const auto& [n, c] : uni) terms.push_back({{"exp", n.get_str()}, {"coeff", coeff_str(c)}});
            result = Json{{"q", session.q->get_str()}, {"terms", terms}, {"text", unipoly_str(uni)}};
            text = unipoly_str(uni) + "\n";
        });
    }

    void cmd_asroot() {
        with_poly([&](const auto& f) {
            auto a = detail::as_series(f);
            auto b = as_root(a, as_terms);
            Int p = f.characteristic();
            auto resid = coeff_pow_int(b, p) - b - a;
            result = Json{{"root", to_json(b)},
                          {"rootText", b.str()},
                          {"residual", to_json(resid)},
                          {"residualValuation", to_json(resid.valuation())}};
            text = b.str() + "\n  residual valuation " + detail::render_valuation(resid.valuation()) + "\n";
        });
    }

    void cmd_cut() {
        with_poly([&](const auto& f) {
            auto a = detail::as_series(f);
            CutData cut = as_cut(a, as_terms);
            result = to_json(cut);
            std::ostringstream os;
            os << "samples:";
            for (const auto& s : cut.samples) os << " " << s.str();
            os << "\nlimit: " << (cut.limit ? cut.limit->str() : "none")
               << (cut.closed_at_limit ? " (closed)" : " (open)") << "\n";
            text = os.str();
        });
    }

    template <CoefficientRing C>
    std::string render_report(const LiftReport<C>& rep) {
        std::ostringstream os;
        os << "root = " << rep.root.str() << "\n";
        os << "residual valuation: " << detail::render_valuation(rep.residual) << "\n";
        os << "steps: " << rep.steps << "\n";
        os << "distance to seed: " << detail::render_valuation(rep.distance_to_seed) << "\n";
        return os.str();
    }

    template <CoefficientRing C>
    void report_search(const BallSearchResult<C>& res) {
        if (const auto* rep = std::get_if<LiftReport<C>>(&res)) {
            result = Json{{"found", true}, {"report", to_json(*rep)}};
            text = render_report(*rep);
            return;
        }
        const auto& cert = std::get<NoRootCertificate>(res);
        result = Json{{"found", false},
                      {"certificate", {{"reason", "NoRootInAnyExtension"}, {"psi", to_json(cert.psi)}}}};
        text = "no root in any extension; Herbrand function is not strictly increasing:\n" +
               detail::render_piecewise(cert.psi);
    }
};

inline RunResult run(const std::vector<std::string>& args) {
    RunResult rr;
    Driver d;
    detail::load_config(d.session);

    CLI::App app{"transval: exact computation in omega-increasing transformal valued fields"};
    app.require_subcommand(1);
    std::string q_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("expr", d.expr_text, "expression")->required();
        sub->add_option("--p", d.session.p, "characteristic exponent (1 or a prime)");
        sub->add_option("--field", d.session.field_degree, "coefficient field degree over F_p");
        sub->add_option("--prec", d.prec_override, "target precision (sigma-expression)");
        sub->add_option("--q", q_text, "specialization sigma -> q");
        sub->add_option("--budget", d.session.budget_steps, "max iteration steps");
        sub->add_option("--field-power", d.session.field_power, "residue search tower bound");
        sub->add_option("--mode", d.mode_text, "residue mode: specialized|symbolic");
        sub->add_option("--display-q", d.session.display_q, "display specialization for plots");
        sub->add_flag("--json", d.session.json, "emit JSON");
        sub->add_flag("--svg", d.session.svg, "emit an SVG plot (herbrand)");
        return sub;
    };

    add_common(app.add_subcommand("taylor", "all transformal derivatives"));
    add_common(app.add_subcommand("polygon", "Newton polygon"));
    add_common(app.add_subcommand("tropical", "tropical roots"));
    auto* herb = add_common(app.add_subcommand("herbrand", "transformal Herbrand function"));
    herb->add_flag("--above-root", d.above_root, "compute above a root of the polynomial");
    herb->add_option("--center", d.center_text, "center expression");
    herb->add_option("--radius", d.radius_text, "ball radius (sigma-expression)");
    herb->add_flag("--open", d.open_ball, "open ball");
    add_common(app.add_subcommand("solve", "find a root along the distinguished tropical ball"));
    auto* lift = add_common(app.add_subcommand("lift", "transformal Hensel lift"));
    lift->add_option("--seed", d.seed_text, "integral seed expression");
    auto* ball = add_common(app.add_subcommand("ball", "root search in a ball"));
    ball->add_option("--center", d.center_text, "center expression");
    ball->add_option("--radius", d.radius_text, "ball radius (sigma-expression)");
    ball->add_flag("--open", d.open_ball, "open ball");
    auto* dist = add_common(app.add_subcommand("distances", "valuative distances between roots"));
    dist->add_option("--power", d.distances_power, "search field power");
    dist->add_option("--rhs", d.rhs_text, "right-hand side series");
    add_common(app.add_subcommand("specialize", "substitute sigma -> q"));
    auto* asr = add_common(app.add_subcommand("asroot", "Artin-Schreier partial sums"));
    asr->add_option("--n", d.as_terms, "number of terms");
    auto* cut = add_common(app.add_subcommand("cut", "Artin-Schreier cut data"));
    cut->add_option("--n", d.as_terms, "number of samples minus one");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        rr.status = 1;
        os << e.what() << "\n";
        rr.err = os.str();
        return rr;
    }

    detail::apply_env(d.session);
    d.command = app.get_subcommands().front()->get_name();
    if (!q_text.empty()) d.session.q = Int(q_text, 10);

    try {
        d.run();
        if (d.session.json && !d.session.svg) {
            Json envelope{{"schema", "transval/v1"}, {"command", d.command}, {"result", d.result}};
            rr.out = envelope.dump(2) + "\n";
        } else {
            rr.out = d.text;
        }
        rr.status = 0;
    } catch (const Error& e) {
        rr.status = exit_status(e.code());
        if (d.session.json) {
            Json envelope{{"schema", "transval/v1"},
                          {"command", d.command},
                          {"error", {{"code", std::string(error_name(e.code()))}, {"message", e.what()}}}};
            rr.err = envelope.dump(2) + "\n";
        } else {
            rr.err = std::string(e.what()) + "\n";
        }
    }
    return rr;
}

} // namespace transval::cli
