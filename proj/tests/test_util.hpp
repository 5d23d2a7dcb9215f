// Shared test helpers: an independent high-precision expression evaluator,
// central finite differences, and random input generators. Everything here
// deliberately avoids the jet/composition code paths it is used to check.

#ifndef PERBIF_TEST_UTIL_HPP
#define PERBIF_TEST_UTIL_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <functional>
#include <random>
#include <vector>

#include "perbif/bruno.hpp"
#include "perbif/system.hpp"

namespace perbif::test {

using bf50 = boost::multiprecision::cpp_bin_float_50;

inline bf50 bf_from_rational(const Rational& q) {
    return bf50(numerator(q)) / bf50(denominator(q));
}

// Straight recursive evaluation over 50-digit floats; no jets involved.
inline bf50 eval_bf(const Expr& e, const bf50& x, const std::vector<bf50>& params) {
    switch (e.kind) {
        case ExprKind::Const: return bf_from_rational(e.literal);
        case ExprKind::VarX: return x;
        case ExprKind::Param: return params.at(static_cast<std::size_t>(e.param) - 1);
        case ExprKind::Neg: return -eval_bf(*e.a, x, params);
        case ExprKind::Add: return eval_bf(*e.a, x, params) + eval_bf(*e.b, x, params);
        case ExprKind::Sub: return eval_bf(*e.a, x, params) - eval_bf(*e.b, x, params);
        case ExprKind::Mul: return eval_bf(*e.a, x, params) * eval_bf(*e.b, x, params);
        case ExprKind::Div: return eval_bf(*e.a, x, params) / eval_bf(*e.b, x, params);
        case ExprKind::PowInt: {
            bf50 b = eval_bf(*e.a, x, params);
            return boost::multiprecision::pow(b, static_cast<int>(e.exponent));
        }
        case ExprKind::Call: {
            bf50 a = eval_bf(*e.a, x, params);
            switch (e.func) {
                case Func::Tan: return boost::multiprecision::tan(a);
                case Func::Sin: return boost::multiprecision::sin(a);
                case Func::Cos: return boost::multiprecision::cos(a);
                case Func::Exp: return boost::multiprecision::exp(a);
            }
        }
    }
    throw std::logic_error("unreachable");
}

// Central finite difference for raw derivative k (1..4) with step h.
inline bf50 central_diff(const std::function<bf50(bf50)>& f, const bf50& x, int k, const bf50& h) {
    switch (k) {
        case 1: return (f(x + h) - f(x - h)) / (2 * h);
        case 2: return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
        case 3: return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
        case 4:
            return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) /
                   (h * h * h * h);
        default: throw std::invalid_argument("central_diff supports orders 1..4");
    }
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20150213u);
    return gen;
}

// Random nonzero rational with small numerator/denominator.
inline Rational random_rational(int max_abs = 9) {
    std::uniform_int_distribution<int> num(-max_abs, max_abs);
    std::uniform_int_distribution<int> den(1, max_abs);
    Rational q;
    do {
        q = Rational(num(rng()), den(rng()));
    } while (q.is_zero());
    return q;
}

// Random polynomial of exact rational coefficients; degree in [1, max_deg],
// nonzero leading coefficient.
inline std::vector<Rational> random_polynomial(int max_deg = 5) {
    std::uniform_int_distribution<int> deg_dist(1, max_deg);
    int deg = deg_dist(rng());
    std::vector<Rational> coeffs(static_cast<std::size_t>(deg) + 1);
    std::uniform_int_distribution<int> num(-5, 5);
    for (int i = 0; i < deg; ++i) coeffs[static_cast<std::size_t>(i)] = Rational(num(rng()), 3);
    coeffs[static_cast<std::size_t>(deg)] = random_rational(5);
    return coeffs;
}

template <class T>
T poly_eval(const std::vector<Rational>& coeffs, const T& x) {
    T acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * x + scalar_traits<T>::from_rational(coeffs[i]);
    return acc;
}

template <class S>
Jet<S> poly_eval(const std::vector<Rational>& coeffs, const Jet<S>& x) {
    Jet<S> acc = Jet<S>::constant(S(0), x.x0, x.order());
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        auto c = Jet<S>::constant(scalar_traits<S>::from_rational(coeffs[i]), x.x0, x.order());
        acc = acc * x + c;
    }
    return acc;
}

// Raw derivative m of the polynomial at x, by term-by-term differentiation.
template <class T>
T poly_deriv(const std::vector<Rational>& coeffs, const T& x, int m) {
    std::vector<Rational> d = coeffs;
    for (int r = 0; r < m; ++r) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] * Rational(int(i) + 1);
        d.pop_back();
        if (d.empty()) return T(0);
    }
    return poly_eval(d, x);
}

inline std::string poly_to_expr(const std::vector<Rational>& coeffs) {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        if (!s.empty()) s += "+";
        s += "(" + coeffs[i].str() + ")*x^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

// A two-map system carrying an exact A_mu germ of the composition at a known
// rational point, with the unfolding parameters entering the second map
// through powers of (x - b). Construction inverts the composition derivative
// identities triangularly, so every target derivative holds exactly.
struct AmuInstance {
    PeriodicSystem sys; // p = 2, mu parameters, degenerate at lambda = 0
    Rational a, b;
};

inline AmuInstance make_alternating_amu_from(ExprPtr f0, int mu) {
    std::vector<Rational> zero(static_cast<std::size_t>(mu), Rational(0));
    Rational a;
    Jet<Rational> j0;
    for (;;) {
        a = random_rational(3);
        try {
            j0 = eval_jet(*f0, a, std::span<const Rational>(zero), mu + 1);
        } catch (const NumericError&) {
            continue;
        }
        if (!is_zero(j0.deriv(1))) break;
    }
    Rational b = j0.value();
    std::vector<Rational> d0;
    for (int m = 1; m <= mu + 1; ++m) d0.push_back(j0.deriv(m));

    // raw derivative targets of the composition at a: slope one, mu - 1
    // vanishing orders, then a random nonzero order mu + 1
    std::vector<Rational> target(static_cast<std::size_t>(mu) + 2, Rational(0));
    target[1] = Rational(1);
    target[static_cast<std::size_t>(mu) + 1] = random_rational(5);

    // f1 derivatives at b, solved order by order: the only term containing
    // f1^{(m)} is f1^{(m)} * (f0')^m
    std::vector<Rational> g(static_cast<std::size_t>(mu) + 1, Rational(0));
    for (int m = 1; m <= mu + 1; ++m) {
        Rational partial = bruno_compose(std::span<const Rational>(g.data(), g.size()),
                                         std::span<const Rational>(d0.data(), d0.size()), m);
        g[static_cast<std::size_t>(m) - 1] =
            (target[static_cast<std::size_t>(m)] - partial) / pow_int(d0[0], m);
    }

    auto xb = Expr::make_binary(ExprKind::Sub, Expr::make_var(), Expr::make_const(b));
    auto power_of_xb = [&](int m) { return m == 1 ? xb : Expr::make_pow(xb, m); };
    ExprPtr f1 = Expr::make_const(a);
    Rational mfact(1);
    for (int m = 1; m <= mu + 1; ++m) {
        mfact = mfact * Rational(m);
        auto term = Expr::make_binary(
            ExprKind::Mul, Expr::make_const(g[static_cast<std::size_t>(m) - 1] / mfact),
            power_of_xb(m));
        f1 = Expr::make_binary(ExprKind::Add, f1, term);
    }
    for (int i = 1; i <= mu; ++i) {
        ExprPtr term = i == 1 ? Expr::make_param(1)
                              : Expr::make_binary(ExprKind::Mul, Expr::make_param(i),
                                                  power_of_xb(i - 1));
        f1 = Expr::make_binary(ExprKind::Add, f1, term);
    }
    AmuInstance inst{PeriodicSystem::from_sources({print(*f0), print(*f1)}, mu), a, b};
    return inst;
}

inline AmuInstance make_alternating_amu(int mu) {
    auto f0 = parse(poly_to_expr(random_polynomial(mu + 1)), mu);
    return make_alternating_amu_from(std::move(f0), mu);
}

} // namespace perbif::test

#endif
