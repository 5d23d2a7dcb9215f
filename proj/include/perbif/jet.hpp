// Truncated Taylor jets. Coefficients are normalized (c_k = f^(k)/k!) so
// composition is plain power-series substitution; raw derivatives are
// converted at the API boundary. The coefficient type is any scalar in the
// tower, Grad<double> / Grad<Rational> included.

#ifndef PERBIF_JET_HPP
#define PERBIF_JET_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "perbif/grad.hpp"
#include "perbif/scalar.hpp"

namespace perbif {

template <class T>
struct Jet {
    T x0{};             // expansion point
    std::vector<T> c;   // c[k] = f^(k)(x0)/k!, size = order+1

    Jet() = default;
    Jet(T point, std::vector<T> coeffs) : x0(std::move(point)), c(std::move(coeffs)) {}

    static Jet constant(T value, T point, int order) {
        std::vector<T> cs(static_cast<std::size_t>(order) + 1, T(0));
        cs[0] = std::move(value);
        return Jet(std::move(point), std::move(cs));
    }

    static Jet variable(T point, int order) {
        std::vector<T> cs(static_cast<std::size_t>(order) + 1, T(0));
        cs[0] = point;
        if (order >= 1) cs[1] = T(1);
        return Jet(std::move(point), std::move(cs));
    }

    int order() const { return static_cast<int>(c.size()) - 1; }

    const T& value() const { return c[0]; }

    // raw derivative f^(k)(x0)
    T deriv(int k) const {
        T f(1);
        for (int i = 2; i <= k; ++i) f = f * T(i);
        return c[static_cast<std::size_t>(k)] * f;
    }
};

namespace detail {
template <class T>
void require_same_order(const Jet<T>& a, const Jet<T>& b) {
    if (a.c.size() != b.c.size())
        throw std::invalid_argument("jet operands have different truncation orders");
}

template <class T>
bool near_zero(const T& x) {
    if constexpr (scalar_traits<T>::exact)
        return is_zero(x);
    else
        return magnitude(x) < pole_floor();
}
} // namespace detail

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
    detail::require_same_order(a, b);
    Jet<T> r = a;
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = r.c[k] + b.c[k];
    return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
    detail::require_same_order(a, b);
    Jet<T> r = a;
    for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = r.c[k] - b.c[k];
    return r;
}

template <class T>
Jet<T> operator-(const Jet<T>& a) {
    Jet<T> r = a;
    for (auto& ck : r.c) ck = -ck;
    return r;
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
    detail::require_same_order(a, b);
    std::size_t n = a.c.size();
    Jet<T> r(a.x0, std::vector<T>(n, T(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    return r;
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
    detail::require_same_order(a, b);
    if (detail::near_zero(b.c[0]))
        throw DivisionByNearZero("jet division: divisor constant term below floor");
    std::size_t n = a.c.size();
    Jet<T> q(a.x0, std::vector<T>(n, T(0)));
    for (std::size_t k = 0; k < n; ++k) {
        T acc = a.c[k];
        for (std::size_t j = 1; j <= k; ++j) acc = acc - b.c[j] * q.c[k - j];
        q.c[k] = acc / b.c[0];
    }
    return q;
}

// Jet division guards its own constant term; nothing further to check.
template <class T>
void guard_divisor(const Jet<T>&) {}

template <class T>
Jet<T> pow_int(const Jet<T>& a, long long e) {
    std::size_t n = a.c.size();
    Jet<T> one = Jet<T>::constant(T(1), a.x0, static_cast<int>(n) - 1);
    if (e == 0) return one;
    Jet<T> base = e < 0 ? one / a : a;
    long long k = e < 0 ? -e : e;
    Jet<T> r = one;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

// Transcendentals by the standard series-ODE recurrences. Exact mode rejects
// them: exact verification is only promised for polynomial systems.
template <class T>
Jet<T> s_exp(const Jet<T>& u) {
    if constexpr (scalar_traits<T>::exact)
        throw UnsupportedInRationalMode("exp on a rational jet");
    std::size_t n = u.c.size();
    Jet<T> v(u.x0, std::vector<T>(n, T(0)));
    v.c[0] = s_exp(u.c[0]);
    for (std::size_t k = 1; k < n; ++k) {
        T acc(0);
        for (std::size_t j = 1; j <= k; ++j) acc = acc + T(int(j)) * u.c[j] * v.c[k - j];
        v.c[k] = acc / T(int(k));
    }
    return v;
}

template <class T>
Jet<T> s_tan(const Jet<T>& u) {
    if constexpr (scalar_traits<T>::exact)
        throw UnsupportedInRationalMode("tan on a rational jet");
    if (detail::near_zero(s_cos(u.c[0])))
        throw TanPole("tan: argument at a pole of the tangent");
    std::size_t n = u.c.size();
    Jet<T> v(u.x0, std::vector<T>(n, T(0)));
    v.c[0] = s_tan(u.c[0]);
    // v' = (1 + v^2) u'
    std::vector<T> s(n, T(0)); // s = 1 + v^2, filled as v becomes known
    s[0] = T(1) + v.c[0] * v.c[0];
    for (std::size_t k = 1; k < n; ++k) {
        T acc(0);
        for (std::size_t j = 1; j <= k; ++j) acc = acc + T(int(j)) * u.c[j] * s[k - j];
        v.c[k] = acc / T(int(k));
        for (std::size_t i = 0; i <= k; ++i) s[k] = s[k] + v.c[i] * v.c[k - i];
    }
    return v;
}

template <class T>
std::pair<Jet<T>, Jet<T>> s_sin_cos(const Jet<T>& u) {
    if constexpr (scalar_traits<T>::exact)
        throw UnsupportedInRationalMode("sin/cos on a rational jet");
    std::size_t n = u.c.size();
    Jet<T> s(u.x0, std::vector<T>(n, T(0)));
    Jet<T> c(u.x0, std::vector<T>(n, T(0)));
    s.c[0] = s_sin(u.c[0]);
    c.c[0] = s_cos(u.c[0]);
    for (std::size_t k = 1; k < n; ++k) {
        T as(0), ac(0);
        for (std::size_t j = 1; j <= k; ++j) {
            as = as + T(int(j)) * u.c[j] * c.c[k - j];
            ac = ac - T(int(j)) * u.c[j] * s.c[k - j];
        }
        s.c[k] = as / T(int(k));
        c.c[k] = ac / T(int(k));
    }
    return {s, c};
}

template <class T>
Jet<T> s_sin(const Jet<T>& u) { return s_sin_cos(u).first; }

template <class T>
Jet<T> s_cos(const Jet<T>& u) { return s_sin_cos(u).second; }

// Composition outer(inner(.)) by truncated substitution. The outer jet must
// be expanded at the inner jet's value.
template <class T>
Jet<T> compose(const Jet<T>& outer, const Jet<T>& inner) {
    detail::require_same_order(outer, inner);
    T mismatch = outer.x0 - inner.c[0];
    if constexpr (scalar_traits<T>::exact) {
        if (!is_zero(mismatch))
            throw ExpansionPointMismatch("outer expansion point != inner value");
    } else {
        double scale = std::max(1.0, magnitude(inner.c[0]));
        if (magnitude(mismatch) > 1e-9 * scale)
            throw ExpansionPointMismatch("outer expansion point != inner value");
    }
    std::size_t n = outer.c.size();
    Jet<T> w = inner;
    w.c[0] = T(0);
    Jet<T> r = Jet<T>::constant(outer.c[n - 1], inner.x0, static_cast<int>(n) - 1);
    for (std::size_t k = n - 1; k-- > 0;) {
        r = r * w;
        r.c[0] = r.c[0] + outer.c[k];
    }
    return r;
}

} // namespace perbif

#endif
