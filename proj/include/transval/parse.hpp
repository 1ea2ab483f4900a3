#pragma once

#include <cctype>
#include <string_view>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffpoly.hpp"
#include "error.hpp"
#include "hahn.hpp"
#include "sigma.hpp"

namespace transval {

// Expression front-end for the CLI. Grammar:
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' '(' sexpr ')']
//   atom   := 'x' | 't' | 'g' | number | 'O' '(' 't' '^' '(' sexpr ')' ')' | '(' expr ')'
//   sexpr  := polynomial in `s` and `p^(-k)` with rational coefficients
// `s` denotes sigma; `p` expands to the session characteristic at parse time.

struct Ast {
    enum class Kind { Add, Sub, Mul, Pow, VarX, VarT, Gen, Num, BigO };

    Kind kind;
    size_t pos = 0;
    std::vector<Ast> children;       // Add/Sub/Mul: two; Pow: one (the base)
    Rat number;                      // Num
    SigmaRational exponent;          // Pow, BigO
};

namespace parse_detail {

struct Token {
    enum class Kind { Symbol, Number, Op, End };
    Kind kind;
    std::string text;
    size_t pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        if (i_ >= src_.size()) return {Token::Kind::End, "", i_};
        size_t start = i_;
        char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            return {Token::Kind::Number, std::string(src_.substr(start, i_ - start)), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            ++i_;
            return {Token::Kind::Symbol, std::string(1, c), start};
        }
        if (std::string("+-*/^()").find(c) != std::string::npos) {
            ++i_;
            return {Token::Kind::Op, std::string(1, c), start};
        }
        fail(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, c) + "' at col " +
                                         std::to_string(start + 1));
    }

private:
    std::string_view src_;
    size_t i_ = 0;
};

} // namespace parse_detail

class Parser {
public:
    // p = 1 disables the `p` literal in sigma-expressions
    Parser(std::string_view src, unsigned p) : p_(p), src_(src), lex_(src) { advance(); }

    Ast parse_expression() {
        Ast e = expr();
        expect_end();
        return e;
    }

    // parse the whole input as a bare sigma-expression (for --prec and radii)
    SigmaRational parse_sigma_expression() {
        SigmaRational v = sexpr();
        expect_end();
        return v;
    }

private:
    using Token = parse_detail::Token;

    void advance() {
        if (ahead_) {
            tok_ = *ahead_;
            ahead_.reset();
        } else {
            tok_ = lex_.next();
        }
    }
    const Token& peek() {
        if (!ahead_) ahead_ = lex_.next();
        return *ahead_;
    }
    bool is_op(const char* s) const { return tok_.kind == Token::Kind::Op && tok_.text == s; }
    void expect_op(const char* s) {
        if (!is_op(s)) fail(ErrorCode::SyntaxError, std::string("expected '") + s + "' at " + where(tok_.pos));
        advance();
    }
    void expect_end() {
        if (tok_.kind != Token::Kind::End)
            fail(ErrorCode::SyntaxError, "trailing input at " + where(tok_.pos));
    }

    // 1-based line and column of a source offset
    std::string where(size_t pos) const {
        size_t line = 1, col = 1;
        for (size_t i = 0; i < pos && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return "line " + std::to_string(line) + ", col " + std::to_string(col);
    }

    Ast binary(Ast::Kind kind, Ast lhs, Ast rhs, size_t pos) {
        Ast out;
        out.kind = kind;
        out.pos = pos;
        out.children.push_back(std::move(lhs));
        out.children.push_back(std::move(rhs));
        return out;
    }

    Ast expr() {
        size_t pos = tok_.pos;
        bool negate = false;
        if (is_op("-")) {
            negate = true;
            advance();
        }
        Ast acc = term();
        if (negate) {
            Ast zero;
            zero.kind = Ast::Kind::Num;
            zero.number = Rat(0);
            zero.pos = pos;
            acc = binary(Ast::Kind::Sub, std::move(zero), std::move(acc), pos);
        }
        while (is_op("+") || is_op("-")) {
            bool sub = tok_.text == "-";
            size_t at = tok_.pos;
            advance();
            acc = binary(sub ? Ast::Kind::Sub : Ast::Kind::Add, std::move(acc), term(), at);
        }
        return acc;
    }

    Ast term() {
        Ast acc = factor();
        while (is_op("*")) {
            size_t at = tok_.pos;
            advance();
            acc = binary(Ast::Kind::Mul, std::move(acc), factor(), at);
        }
        return acc;
    }

    Ast factor() {
        Ast base = atom();
        if (is_op("^")) {
            size_t at = tok_.pos;
            advance();
            expect_op("(");
            SigmaRational e = sexpr();
            expect_op(")");
            Ast out;
            out.kind = Ast::Kind::Pow;
            out.pos = at;
            out.exponent = std::move(e);
            out.children.push_back(std::move(base));
            return out;
        }
        return base;
    }

    Ast atom() {
        size_t at = tok_.pos;
        if (tok_.kind == Token::Kind::Symbol) {
            std::string s = tok_.text;
            if (s == "x" || s == "t" || s == "g") {
                advance();
                Ast out;
                out.kind = s == "x" ? Ast::Kind::VarX : (s == "t" ? Ast::Kind::VarT : Ast::Kind::Gen);
                out.pos = at;
                return out;
            }
            if (s == "O") {
                advance();
                expect_op("(");
                if (!(tok_.kind == Token::Kind::Symbol && tok_.text == "t"))
                    fail(ErrorCode::SyntaxError, "O(...) expects t^(...) at " + where(tok_.pos));
                advance();
                expect_op("^");
                expect_op("(");
                SigmaRational e = sexpr();
                expect_op(")");
                expect_op(")");
                Ast out;
                out.kind = Ast::Kind::BigO;
                out.pos = at;
                out.exponent = std::move(e);
                return out;
            }
            if (s == "s" || s == "p")
                fail(ErrorCode::TypeError,
                     "sigma-expression symbol '" + s + "' outside an exponent at " + where(at));
            fail(ErrorCode::SyntaxError, "unknown symbol '" + s + "' at " + where(at));
        }
        if (tok_.kind == Token::Kind::Number) {
            Ast out;
            out.kind = Ast::Kind::Num;
            out.pos = at;
            out.number = rational_literal();
            return out;
        }
        if (is_op("(")) {
            advance();
            Ast e = expr();
            expect_op(")");
            return e;
        }
        fail(ErrorCode::SyntaxError, "expected an atom at " + where(at));
    }

    Rat rational_literal() {
        Int num(tok_.text, 10);
        advance();
        if (is_op("/") && peek().kind == Token::Kind::Number) {
            advance();
            Int den(tok_.text, 10);
            advance();
            return make_rat(num, den);
        }
        return Rat(num);
    }

    // ---- sigma-expressions ----

    SigmaRational sexpr() {
        bool negate = false;
        if (is_op("-")) {
            negate = true;
            advance();
        }
        SigmaRational acc = sterm();
        if (negate) acc = -acc;
        while (is_op("+") || is_op("-")) {
            bool sub = tok_.text == "-";
            advance();
            SigmaRational rhs = sterm();
            acc = sub ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    SigmaRational sterm() {
        SigmaRational acc = sfactor();
        while (is_op("*") || is_op("/")) {
            bool div = tok_.text == "/";
            size_t at = tok_.pos;
            advance();
            SigmaRational rhs = sfactor();
            if (div && rhs.is_zero())
                fail(ErrorCode::SyntaxError, "division by zero at " + where(at));
            acc = div ? acc / rhs : acc * rhs;
        }
        return acc;
    }

    SigmaRational sfactor() {
        SigmaRational base = satom();
        if (is_op("^")) {
            advance();
            long e = signed_int_exponent();
            SigmaRational out(1);
            SigmaRational b = e < 0 ? SigmaRational(1) / base : base;
            for (long i = 0; i < (e < 0 ? -e : e); ++i) out = out * b;
            return out;
        }
        return base;
    }

    SigmaRational satom() {
        size_t at = tok_.pos;
        if (tok_.kind == Token::Kind::Symbol && tok_.text == "s") {
            advance();
            return SigmaRational::sigma();
        }
        if (tok_.kind == Token::Kind::Symbol && tok_.text == "p") {
            if (p_ == 1)
                fail(ErrorCode::TypeError, "'p' literal with characteristic exponent 1 at " + where(at));
            advance();
            return SigmaRational(Int(static_cast<long>(p_)));
        }
        if (tok_.kind == Token::Kind::Number) return SigmaRational(rational_literal());
        if (is_op("(")) {
            advance();
            SigmaRational e = sexpr();
            expect_op(")");
            return e;
        }
        fail(ErrorCode::SyntaxError, "expected a sigma-expression at " + where(at));
    }

    long signed_int_exponent() {
        bool paren = false;
        if (is_op("(")) {
            paren = true;
            advance();
        }
        bool neg = false;
        if (is_op("-")) {
            neg = true;
            advance();
        }
        if (tok_.kind != Token::Kind::Number)
            fail(ErrorCode::SyntaxError, "expected an integer exponent at " + where(tok_.pos));
        if (tok_.text.size() > 6)
            fail(ErrorCode::BudgetExceeded, "exponent too large at " + where(tok_.pos));
        long v = std::stol(tok_.text);
        advance();
        if (paren) expect_op(")");
        return neg ? -v : v;
    }

    unsigned p_;
    std::string src_;
    parse_detail::Lexer lex_;
    parse_detail::Token tok_;
    std::optional<parse_detail::Token> ahead_;
};

// Exponents of x must lie in N[sigma] with p-power denominators.
inline SigmaExponent exponent_from_sigma_rational(const SigmaRational& e, unsigned p, size_t pos) {
    if (e.den().degree() != 0)
        fail(ErrorCode::TypeError, "exponent of x must be polynomial in s (col " + std::to_string(pos + 1) + ")");
    Int den = e.den().coeff(0);
    if (p == 1) {
        if (den != 1)
            fail(ErrorCode::TypeError, "fractional exponent of x with characteristic exponent 1 (col " +
                                           std::to_string(pos + 1) + ")");
    } else if (!is_power_of(den, Int(static_cast<long>(p)))) {
        fail(ErrorCode::TypeError, "exponent denominator must be a power of p (col " + std::to_string(pos + 1) + ")");
    }
    SigmaExponent out;
    for (int i = 0; i <= e.num().degree(); ++i) {
        Int c = e.num().coeff(static_cast<unsigned>(i));
        if (c < 0)
            fail(ErrorCode::TypeError, "exponent of x must be nonnegative (col " + std::to_string(pos + 1) + ")");
        if (c != 0) out = out + SigmaExponent::term(static_cast<unsigned>(i), make_rat(c, den));
    }
    return out;
}

// Evaluate an Ast into a difference polynomial over a Hahn field. The context
// supplies the coefficient field; C is Rat (p = 1) or Fq.
template <CoefficientRing C>
struct EvalContext {
    unsigned p;
    C one;

    C from_int(const Int& n) const { return coeff_scale_int(one, n); }
};

template <CoefficientRing C>
DiffPoly<HahnSeries<C>> evaluate_ast(const Ast& a, const EvalContext<C>& ctx) {
    using Poly = DiffPoly<HahnSeries<C>>;
    using Series = HahnSeries<C>;
    switch (a.kind) {
    case Ast::Kind::Add: return evaluate_ast(a.children[0], ctx) + evaluate_ast(a.children[1], ctx);
    case Ast::Kind::Sub: return evaluate_ast(a.children[0], ctx) - evaluate_ast(a.children[1], ctx);
    case Ast::Kind::Mul: return evaluate_ast(a.children[0], ctx) * evaluate_ast(a.children[1], ctx);
    case Ast::Kind::VarX: return Poly::variable(Series::constant(ctx.one));
    case Ast::Kind::VarT: return Poly::constant(Series::monomial(SigmaRational(1), ctx.one));
    case Ast::Kind::Gen: {
        if constexpr (std::is_same_v<C, Fq>) {
            return Poly::constant(Series::constant(ctx.one.field()->generator()));
        } else {
            fail(ErrorCode::TypeError, "field generator 'g' needs a finite coefficient field (col " +
                                           std::to_string(a.pos + 1) + ")");
        }
    }
    case Ast::Kind::Num: {
        C c = ctx.from_int(a.number.get_num());
        if (a.number.get_den() != 1) c = c * coeff_inverse(ctx.from_int(a.number.get_den()));
        return Poly::constant(Series::constant(c));
    }
    case Ast::Kind::BigO: return Poly::constant(Series({}, a.exponent));
    case Ast::Kind::Pow: {
        const Ast& base = a.children[0];
        if (base.kind == Ast::Kind::VarX)
            return Poly::monomial(exponent_from_sigma_rational(a.exponent, ctx.p, a.pos),
                                  Series::constant(ctx.one));
        if (base.kind == Ast::Kind::VarT) return Poly::constant(Series::monomial(a.exponent, ctx.one));
        // anything else needs a constant natural exponent
        Rat e = [&] {
            if (a.exponent.den().degree() != 0 || a.exponent.num().degree() > 0)
                fail(ErrorCode::TypeError,
                     "only x and t take sigma-exponents (col " + std::to_string(a.pos + 1) + ")");
            return make_rat(a.exponent.num().coeff(0), a.exponent.den().coeff(0));
        }();
        if (!is_integer(e) || e < 0)
            fail(ErrorCode::TypeError, "expected a natural exponent (col " + std::to_string(a.pos + 1) + ")");
        if (e > 1000) fail(ErrorCode::BudgetExceeded, "exponent too large (col " + std::to_string(a.pos + 1) + ")");
        Poly acc = Poly::constant(Series::constant(ctx.one));
        Poly b = evaluate_ast(base, ctx);
        for (Int i(0); i < e.get_num(); ++i) acc = acc * b;
        return acc;
    }
    }
    fail(ErrorCode::SyntaxError, "malformed expression tree");
}

} // namespace transval
