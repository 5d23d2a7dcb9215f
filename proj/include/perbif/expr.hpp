// Map-family expressions: parser, printer, and evaluation over any scalar
// in the tower. Grammar (also documented in the README):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' '-'? digits)?
//   atom   := number | 'x' | 'l'digits | func '(' expr ')' | '(' expr ')'
//   func   := tan | sin | cos | exp
//   number := digits ('.' digits)?
//
// Numeric literals parse as exact rationals, so the rational-mode pipeline
// needs no separate input path. Literal negation and literal division fold
// into a single Const node, which keeps print -> parse structurally exact.

#ifndef PERBIF_EXPR_HPP
#define PERBIF_EXPR_HPP

#include <algorithm>
#include <cctype>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "perbif/jet.hpp"

namespace perbif {

enum class ExprKind { Const, VarX, Param, Neg, Add, Sub, Mul, Div, PowInt, Call };
enum class Func { Tan, Sin, Cos, Exp };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    Rational literal;        // Const
    int param = 0;           // Param, 1-based
    long long exponent = 0;  // PowInt
    Func func = Func::Tan;   // Call
    ExprPtr a, b;

    static ExprPtr make_const(Rational q) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Const;
        e->literal = std::move(q);
        return e;
    }
    static ExprPtr make_var() {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::VarX;
        return e;
    }
    static ExprPtr make_param(int i) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Param;
        e->param = i;
        return e;
    }
    static ExprPtr make_unary(ExprKind k, ExprPtr child) {
        if (k == ExprKind::Neg && child->kind == ExprKind::Const)
            return make_const(-child->literal);
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(child);
        return e;
    }
    static ExprPtr make_binary(ExprKind k, ExprPtr lhs, ExprPtr rhs) {
        if (k == ExprKind::Div && lhs->kind == ExprKind::Const &&
            rhs->kind == ExprKind::Const && !rhs->literal.is_zero())
            return make_const(lhs->literal / rhs->literal);
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(lhs);
        e->b = std::move(rhs);
        return e;
    }
    static ExprPtr make_pow(ExprPtr base, long long exponent) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::PowInt;
        e->a = std::move(base);
        e->exponent = exponent;
        return e;
    }
    static ExprPtr make_call(Func f, ExprPtr arg) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Call;
        e->func = f;
        e->a = std::move(arg);
        return e;
    }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
  public:
    Parser(std::string_view text, int mu) : text_(text), mu_(mu) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "empty expression");
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            throw SyntaxError(pos_, "unexpected trailing input");
        return e;
    }

  private:
    std::string_view text_;
    int mu_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) throw SyntaxError(pos_, std::string("expected '") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = Expr::make_binary(ExprKind::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = Expr::make_binary(ExprKind::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = Expr::make_binary(ExprKind::Mul, lhs, parse_factor());
            else if (accept('/'))
                lhs = Expr::make_binary(ExprKind::Div, lhs, parse_factor());
            else
                return lhs;
        }
    }

    ExprPtr parse_factor() {
        if (accept('-')) return Expr::make_unary(ExprKind::Neg, parse_factor());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (!accept('^')) return base;
        bool neg = accept('-');
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw SyntaxError(pos_, "expected integer exponent after '^'");
        long long e = std::stoll(std::string(text_.substr(start, pos_ - start)));
        return Expr::make_pow(base, neg ? -e : e);
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError(pos_, "expected operand");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw SyntaxError(pos_, "expected number, variable, or '('");
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::size_t frac = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ == frac) throw SyntaxError(pos_, "expected digits after decimal point");
        }
        return Expr::make_const(rational_from_literal(std::string(text_.substr(start, pos_ - start))));
    }

    ExprPtr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        if (name == "x") return Expr::make_var();
        if (name == "tan" || name == "sin" || name == "cos" || name == "exp") {
            Func f = name == "tan"   ? Func::Tan
                     : name == "sin" ? Func::Sin
                     : name == "cos" ? Func::Cos
                                     : Func::Exp;
            expect('(');
            ExprPtr arg = parse_expr();
            expect(')');
            return Expr::make_call(f, arg);
        }
        if (name.size() >= 2 && name[0] == 'l' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int i = std::stoi(name.substr(1));
            if (i < 1 || i > mu_) throw ParamIndexOutOfRange(i, mu_);
            return Expr::make_param(i);
        }
        throw UnknownIdentifier(name);
    }
};

} // namespace detail

inline ExprPtr parse(const std::string& text, int mu) {
    return detail::Parser(text, mu).run();
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Precedence of the printed form: add 1, mul 2, unary 3, pow 4, atom 5.
inline int printed_prec(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::PowInt: return 4;
        case ExprKind::Const: {
            if (denominator(e.literal) != 1) return 2; // prints as a division
            if (e.literal < 0) return 3;               // prints as a negation
            return 5;
        }
        default: return 5;
    }
}

inline void print_rec(const Expr& e, std::ostream& os, int min_prec) {
    bool parens = printed_prec(e) < min_prec;
    if (parens) os << '(';
    switch (e.kind) {
        case ExprKind::Const: os << e.literal; break;
        case ExprKind::VarX: os << 'x'; break;
        case ExprKind::Param: os << 'l' << e.param; break;
        case ExprKind::Neg:
            os << '-';
            print_rec(*e.a, os, 3);
            break;
        case ExprKind::Add:
            print_rec(*e.a, os, 1);
            os << '+';
            print_rec(*e.b, os, 2);
            break;
        case ExprKind::Sub:
            print_rec(*e.a, os, 1);
            os << '-';
            print_rec(*e.b, os, 2);
            break;
        case ExprKind::Mul:
            print_rec(*e.a, os, 2);
            os << '*';
            print_rec(*e.b, os, 3);
            break;
        case ExprKind::Div:
            print_rec(*e.a, os, 2);
            os << '/';
            print_rec(*e.b, os, 3);
            break;
        case ExprKind::PowInt:
            print_rec(*e.a, os, 5);
            os << '^';
            if (e.exponent < 0) os << '-';
            os << (e.exponent < 0 ? -e.exponent : e.exponent);
            break;
        case ExprKind::Call:
            switch (e.func) {
                case Func::Tan: os << "tan"; break;
                case Func::Sin: os << "sin"; break;
                case Func::Cos: os << "cos"; break;
                case Func::Exp: os << "exp"; break;
            }
            os << '(';
            print_rec(*e.a, os, 0);
            os << ')';
            break;
    }
    if (parens) os << ')';
}

} // namespace detail

inline std::string print(const Expr& e) {
    std::ostringstream os;
    detail::print_rec(e, os, 0);
    return os.str();
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Const: return a.literal == b.literal;
        case ExprKind::VarX: return true;
        case ExprKind::Param: return a.param == b.param;
        case ExprKind::PowInt:
            return a.exponent == b.exponent && structurally_equal(*a.a, *b.a);
        case ExprKind::Call:
            return a.func == b.func && structurally_equal(*a.a, *b.a);
        case ExprKind::Neg: return structurally_equal(*a.a, *b.a);
        default:
            return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
    }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

// V is the value algebra (scalar, grad, or jet); ConstFn lifts a rational
// literal into it.
template <class V, class ConstFn>
V eval_rec(const Expr& e, const V& x, std::span<const V> params, const ConstFn& cst) {
    switch (e.kind) {
        case ExprKind::Const: return cst(e.literal);
        case ExprKind::VarX: return x;
        case ExprKind::Param: {
            auto i = static_cast<std::size_t>(e.param);
            if (i > params.size())
                throw ParamIndexOutOfRange(e.param, static_cast<int>(params.size()));
            return params[i - 1];
        }
        case ExprKind::Neg: return -eval_rec(*e.a, x, params, cst);
        case ExprKind::Add:
            return eval_rec(*e.a, x, params, cst) + eval_rec(*e.b, x, params, cst);
        case ExprKind::Sub:
            return eval_rec(*e.a, x, params, cst) - eval_rec(*e.b, x, params, cst);
        case ExprKind::Mul:
            return eval_rec(*e.a, x, params, cst) * eval_rec(*e.b, x, params, cst);
        case ExprKind::Div: {
            V num = eval_rec(*e.a, x, params, cst);
            V den = eval_rec(*e.b, x, params, cst);
            guard_divisor(den);
            return num / den;
        }
        case ExprKind::PowInt: return pow_int(eval_rec(*e.a, x, params, cst), e.exponent);
        case ExprKind::Call: {
            V arg = eval_rec(*e.a, x, params, cst);
            switch (e.func) {
                case Func::Tan: return s_tan(arg);
                case Func::Sin: return s_sin(arg);
                case Func::Cos: return s_cos(arg);
                case Func::Exp: return s_exp(arg);
            }
        }
    }
    throw std::logic_error("unreachable expression kind");
}

} // namespace detail

// Plain scalar evaluation (double, Rational, or Grad<...>).
template <class S>
S eval(const Expr& e, const S& x, std::span<const S> params) {
    return detail::eval_rec(e, x, params,
                            [](const Rational& q) { return scalar_traits<S>::from_rational(q); });
}

template <class S>
S eval(const Expr& e, const S& x, const std::vector<S>& params) {
    return eval(e, x, std::span<const S>(params));
}

// Jet of the expression in x at x0, coefficients over plain scalars.
template <class S>
Jet<S> eval_jet(const Expr& e, const S& x0, std::span<const S> params, int order) {
    Jet<S> x = Jet<S>::variable(x0, order);
    std::vector<Jet<S>> jp;
    jp.reserve(params.size());
    for (const S& p : params) jp.push_back(Jet<S>::constant(p, x0, order));
    return detail::eval_rec(e, x, std::span<const Jet<S>>(jp), [&](const Rational& q) {
        return Jet<S>::constant(scalar_traits<S>::from_rational(q), x0, order);
    });
}

// Jet in x whose coefficients carry first-order gradients in the parameters:
// coefficient k holds d_{x^k}f/k! and, per component i, d_{x^k lambda_i}f/k!.
// The expansion point may itself carry a parameter gradient (composition
// through fibers: the intermediate point b(Lambda) depends on Lambda).
template <class S>
Jet<Grad<S>> eval_jet_grad_at(const Expr& e, const Grad<S>& x0g, std::span<const S> params,
                              int order) {
    std::size_t mu = params.size();
    Jet<Grad<S>> x = Jet<Grad<S>>::variable(x0g, order);
    std::vector<Jet<Grad<S>>> jp;
    jp.reserve(mu);
    for (std::size_t i = 0; i < mu; ++i)
        jp.push_back(Jet<Grad<S>>::constant(Grad<S>::parameter(params[i], i + 1, mu), x0g, order));
    return detail::eval_rec(e, x, std::span<const Jet<Grad<S>>>(jp), [&](const Rational& q) {
        return Jet<Grad<S>>::constant(Grad<S>::constant(scalar_traits<S>::from_rational(q), mu),
                                      x0g, order);
    });
}

template <class S>
Jet<Grad<S>> eval_jet_grad(const Expr& e, const S& x0, std::span<const S> params, int order) {
    return eval_jet_grad_at(e, Grad<S>::constant(x0, params.size()), params, order);
}

template <class S>
Jet<Grad<S>> eval_jet_grad(const Expr& e, const S& x0, const std::vector<S>& params, int order) {
    return eval_jet_grad(e, x0, std::span<const S>(params), order);
}

} // namespace perbif

#endif
