// Forward-mode gradient scalar: a value plus its first derivatives in the
// parameter vector. A constant carries an empty gradient, which broadcasts
// as all-zero against any length.

#ifndef PERBIF_GRAD_HPP
#define PERBIF_GRAD_HPP

#include <cstddef>
#include <vector>

#include "perbif/scalar.hpp"

namespace perbif {

template <class T>
struct Grad {
    T v{};
    std::vector<T> d; // d[i] = d(value)/d(lambda_{i+1}); empty means zero

    Grad() = default;
    Grad(int value) : v(value) {} // NOLINT: implicit for T(1)-style generic code
    explicit Grad(T value) : v(std::move(value)) {}
    Grad(T value, std::vector<T> grad) : v(std::move(value)), d(std::move(grad)) {}

    // constant with explicit gradient length
    static Grad constant(T value, std::size_t mu) {
        return Grad(std::move(value), std::vector<T>(mu, T(0)));
    }
    // the i-th parameter (1-based), gradient = unit vector
    static Grad parameter(T value, std::size_t i, std::size_t mu) {
        std::vector<T> g(mu, T(0));
        g[i - 1] = T(1);
        return Grad(std::move(value), std::move(g));
    }

    T deriv(std::size_t i) const { return i < d.size() ? d[i] : T(0); }

    friend bool operator==(const Grad& a, const Grad& b) {
        if (!(a.v == b.v)) return false;
        std::size_t n = std::max(a.d.size(), b.d.size());
        for (std::size_t i = 0; i < n; ++i)
            if (!(a.deriv(i) == b.deriv(i))) return false;
        return true;
    }
};

namespace detail {
template <class T, class F>
Grad<T> grad_zip(const Grad<T>& a, const Grad<T>& b, T value, F&& f) {
    std::size_t n = std::max(a.d.size(), b.d.size());
    Grad<T> r(std::move(value), std::vector<T>(n));
    for (std::size_t i = 0; i < n; ++i) r.d[i] = f(a.deriv(i), b.deriv(i));
    return r;
}
} // namespace detail

template <class T>
Grad<T> operator+(const Grad<T>& a, const Grad<T>& b) {
    return detail::grad_zip(a, b, a.v + b.v, [](const T& x, const T& y) { return x + y; });
}

template <class T>
Grad<T> operator-(const Grad<T>& a, const Grad<T>& b) {
    return detail::grad_zip(a, b, a.v - b.v, [](const T& x, const T& y) { return x - y; });
}

template <class T>
Grad<T> operator-(const Grad<T>& a) {
    Grad<T> r(-a.v, a.d);
    for (auto& g : r.d) g = -g;
    return r;
}

template <class T>
Grad<T> operator*(const Grad<T>& a, const Grad<T>& b) {
    return detail::grad_zip(a, b, a.v * b.v,
                            [&](const T& x, const T& y) { return x * b.v + a.v * y; });
}

template <class T>
Grad<T> operator/(const Grad<T>& a, const Grad<T>& b) {
    T inv_b2 = T(1) / (b.v * b.v);
    return detail::grad_zip(a, b, a.v / b.v, [&](const T& x, const T& y) {
        return (x * b.v - a.v * y) * inv_b2;
    });
}

template <class T>
bool is_zero(const Grad<T>& a) {
    if (!is_zero(a.v)) return false;
    for (const auto& g : a.d)
        if (!is_zero(g)) return false;
    return true;
}

template <class T>
double magnitude(const Grad<T>& a) {
    return magnitude(a.v);
}

template <class T>
void guard_divisor(const Grad<T>& a) {
    guard_divisor(a.v);
}

template <class T>
Grad<T> s_tan(const Grad<T>& a) {
    T t = s_tan(a.v);
    T sec2 = T(1) + t * t;
    Grad<T> r(std::move(t), a.d);
    for (auto& g : r.d) g = g * sec2;
    return r;
}

template <class T>
Grad<T> s_sin(const Grad<T>& a) {
    T c = s_cos(a.v);
    Grad<T> r(s_sin(a.v), a.d);
    for (auto& g : r.d) g = g * c;
    return r;
}

template <class T>
Grad<T> s_cos(const Grad<T>& a) {
    T s = s_sin(a.v);
    Grad<T> r(s_cos(a.v), a.d);
    for (auto& g : r.d) g = -(g * s);
    return r;
}

template <class T>
Grad<T> s_exp(const Grad<T>& a) {
    T e = s_exp(a.v);
    Grad<T> r(e, a.d);
    for (auto& g : r.d) g = g * e;
    return r;
}

template <class T>
struct scalar_traits<Grad<T>> {
    static constexpr bool exact = scalar_traits<T>::exact;
    static Grad<T> from_rational(const Rational& q) {
        return Grad<T>(scalar_traits<T>::from_rational(q));
    }
    static Grad<T> from_double(double x) {
        return Grad<T>(scalar_traits<T>::from_double(x));
    }
};

} // namespace perbif

#endif
