#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perbif/expr.hpp"

#include "test_util.hpp"

using namespace perbif;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

// Random AST with the same node inventory the parser can produce.
ExprPtr random_ast(int depth, int mu) {
    auto& gen = test::rng();
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    switch (pick(gen)) {
        case 0: return Expr::make_const(test::random_rational());
        case 1: return Expr::make_var();
        case 2: {
            std::uniform_int_distribution<int> pi(1, mu);
            return Expr::make_param(pi(gen));
        }
        case 3: return Expr::make_unary(ExprKind::Neg, random_ast(depth - 1, mu));
        case 4: return Expr::make_binary(ExprKind::Add, random_ast(depth - 1, mu),
                                         random_ast(depth - 1, mu));
        case 5: return Expr::make_binary(ExprKind::Sub, random_ast(depth - 1, mu),
                                         random_ast(depth - 1, mu));
        case 6: return Expr::make_binary(ExprKind::Mul, random_ast(depth - 1, mu),
                                         random_ast(depth - 1, mu));
        case 7: return Expr::make_binary(ExprKind::Div, random_ast(depth - 1, mu),
                                         random_ast(depth - 1, mu));
        case 8: {
            std::uniform_int_distribution<int> pe(0, 5);
            return Expr::make_pow(random_ast(depth - 1, mu), pe(gen));
        }
        default: {
            std::uniform_int_distribution<int> pf(0, 3);
            return Expr::make_call(static_cast<Func>(pf(gen)), random_ast(depth - 1, mu));
        }
    }
}

} // namespace

TEST_CASE("parsing the paper's map families") {
    auto e1 = parse("x^2 + l1", 3);
    REQUIRE(e1->kind == ExprKind::Add);
    CHECK(e1->a->kind == ExprKind::PowInt);
    CHECK(e1->a->a->kind == ExprKind::VarX);
    CHECK(e1->a->exponent == 2);
    CHECK(e1->b->kind == ExprKind::Param);
    CHECK(e1->b->param == 1);

    auto e2 = parse("l3*tan(x)", 3);
    REQUIRE(e2->kind == ExprKind::Mul);
    CHECK(e2->a->kind == ExprKind::Param);
    CHECK(e2->a->param == 3);
    CHECK(e2->b->kind == ExprKind::Call);
    CHECK(e2->b->func == Func::Tan);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse("x^2 + l4", 3), ParamIndexOutOfRange);
    CHECK_THROWS_AS(parse("", 1), SyntaxError);
    CHECK_THROWS_AS(parse("x +", 1), SyntaxError);
    CHECK_THROWS_AS(parse("x^y", 1), SyntaxError);
    CHECK_THROWS_AS(parse("foo(x)", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse("y + 1", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse("(x+1", 1), SyntaxError);
    CHECK_THROWS_AS(parse("1.x", 1), SyntaxError);
}

TEST_CASE("decimal literals are exact rationals") {
    auto e = parse("0.5", 1);
    REQUIRE(e->kind == ExprKind::Const);
    CHECK(e->literal == Q(1, 2));
    CHECK(parse("2.25", 1)->literal == Q(9, 4));
}

TEST_CASE("parse-print round trip on random ASTs") {
    for (int rep = 0; rep < 1000; ++rep) {
        auto ast = random_ast(4, 3);
        auto back = parse(print(*ast), 3);
        CHECK(structurally_equal(*ast, *back));
    }
}

TEST_CASE("rational evaluation of the polynomial example maps") {
    // f0(a) = b and f1(b) = a at the exact swallowtail solution
    auto f0 = parse("x^2+l1", 3);
    auto f1 = parse("l3*x^3+l2*x+1", 3);
    std::vector<Rational> lam{Q(-243, 245), Q(175, 324), Q(52521875, 229582512)};
    Rational a = Q(27, 35), b = Q(-486, 1225);
    CHECK(eval(*f0, a, lam) == b);
    CHECK(eval(*f1, b, lam) == a);
}

TEST_CASE("float and rational evaluation agree on random polynomials") {
    for (int rep = 0; rep < 100; ++rep) {
        auto coeffs = test::random_polynomial(5);
        auto e = parse(test::poly_to_expr(coeffs), 1);
        Rational x0 = test::random_rational(3);
        Rational exact = eval(*e, x0, std::vector<Rational>{Q(0)});
        double approx = eval(*e, to_double(x0), std::vector<double>{0.0});
        double scale = std::max(1.0, std::abs(to_double(exact)));
        CHECK(std::abs(approx - to_double(exact)) / scale <= 1e-14);
    }
}

TEST_CASE("evaluating at a jet-lifted constant keeps higher coefficients zero") {
    auto e = parse("l1*x^3+x-2", 1);
    auto c = Jet<double>::constant(0.7, 0.7, 4);
    std::vector<Jet<double>> params{Jet<double>::constant(1.5, 0.7, 4)};
    auto r = detail::eval_rec(*e, c, std::span<const Jet<double>>(params),
                              [&](const Rational& q) {
                                  return Jet<double>::constant(to_double(q), 0.7, 4);
                              });
    for (int k = 1; k <= 4; ++k) CHECK(r.c[static_cast<std::size_t>(k)] == doctest::Approx(0.0));
}

TEST_CASE("eval_jet_grad: linear parameter entry") {
    auto e = parse("x^2+l1", 3);
    std::vector<double> lam{0.25, 0.0, 0.0};
    auto j = eval_jet_grad(*e, 0.0, lam, 2);
    CHECK(j.c[0].v == doctest::Approx(0.25));
    CHECK(j.c[1].v == doctest::Approx(0.0));
    CHECK(j.c[2].v == doctest::Approx(1.0));
    CHECK(j.c[0].deriv(0) == doctest::Approx(1.0)); // d/d lambda_1
    CHECK(j.c[0].deriv(1) == doctest::Approx(0.0));
    CHECK(j.c[1].deriv(0) == doctest::Approx(0.0));
    CHECK(j.c[2].deriv(0) == doctest::Approx(0.0));
}

TEST_CASE("eval_jet_grad: parameter in the slope") {
    auto e = parse("l2*x", 2);
    std::vector<double> lam{0.0, 3.0};
    auto j = eval_jet_grad(*e, 5.0, lam, 1);
    CHECK(j.c[1].deriv(1) == doctest::Approx(1.0)); // d^2 f / dx dlambda_2
}

TEST_CASE("eval_jet_grad matches finite differences on the tangent family") {
    auto e = parse("l3*tan(x)", 3);
    std::vector<double> lam{-0.0400839, -0.0000428492, 1.00215};
    double x0 = 0.0793675;
    auto j = eval_jet_grad(*e, x0, lam, 4);

    std::vector<test::bf50> lam_bf{test::bf50(lam[0]), test::bf50(lam[1]), test::bf50(lam[2])};
    auto f = [&](test::bf50 x) { return test::eval_bf(*e, x, lam_bf); };
    for (int k = 1; k <= 4; ++k) {
        double fd = test::central_diff(f, test::bf50(x0), k, test::bf50("1e-4")).convert_to<double>();
        double got = j.deriv(k).v;
        CHECK(std::abs(got - fd) / std::max(1.0, std::abs(fd)) <= 1e-6);
    }
    // gradient in lambda_3 of the value and first derivative
    for (int k = 0; k <= 1; ++k) {
        auto g = [&](double l3) {
            std::vector<test::bf50> lb{lam_bf[0], lam_bf[1], test::bf50(l3)};
            auto fx = [&](test::bf50 x) { return test::eval_bf(*e, x, lb); };
            return k == 0 ? fx(test::bf50(x0)).convert_to<double>()
                          : test::central_diff(fx, test::bf50(x0), 1, test::bf50("1e-5"))
                                .convert_to<double>();
        };
        double h = 1e-5;
        double fd = (g(lam[2] + h) - g(lam[2] - h)) / (2 * h);
        double got = j.deriv(k).deriv(2);
        CHECK(std::abs(got - fd) / std::max(1.0, std::abs(fd)) <= 1e-6);
    }
}

TEST_CASE("gradient components match parameter finite differences on random exprs") {
    const char* exprs[] = {"l1*x^3+l2*x+1", "x^2+l1*x+l2", "(x+l1)*(x-l2)"};
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    for (const char* src : exprs) {
        auto e = parse(src, 2);
        for (int rep = 0; rep < 10; ++rep) {
            double x0 = xs(test::rng());
            std::vector<double> lam{xs(test::rng()), xs(test::rng())};
            auto j = eval_jet_grad(*e, x0, lam, 3);
            for (int i = 0; i < 2; ++i) {
                double h = 1e-5;
                auto lp = lam, lm = lam;
                lp[static_cast<std::size_t>(i)] += h;
                lm[static_cast<std::size_t>(i)] -= h;
                for (int k = 0; k <= 3; ++k) {
                    auto jp = eval_jet(*e, x0, std::span<const double>(lp), 3);
                    auto jm = eval_jet(*e, x0, std::span<const double>(lm), 3);
                    double fd = (jp.deriv(k) - jm.deriv(k)) / (2 * h);
                    double got = j.deriv(k).deriv(static_cast<std::size_t>(i));
                    CHECK(std::abs(got - fd) / std::max(1.0, std::abs(fd)) <= 1e-6);
                }
            }
        }
    }
}
