// The scalar tower: IEEE doubles, exact rationals, and (in grad.hpp /
// jet.hpp) gradient and jet scalars built over either base. Generic code
// is templated on the scalar type and reaches it through these helpers.

#ifndef PERBIF_SCALAR_HPP
#define PERBIF_SCALAR_HPP

#include <cmath>
#include <cstdlib>

#include "perbif/errors.hpp"
#include "perbif/rational.hpp"

namespace perbif {

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double from_rational(const Rational& q) { return to_double(q); }
    static double from_double(double x) { return x; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_rational(const Rational& q) { return q; }
    static Rational from_double(double x) { return rational_from_double(x); }
};

inline double to_double(double x) { return x; }

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Rational& q) { return std::abs(to_double(q)); }

// Pole/division floor used in floating-point mode. Exact mode tests for
// exact zero instead.
inline double& pole_floor() {
    static double floor_ = 1e-12;
    return floor_;
}

inline void guard_divisor(double d) {
    if (std::abs(d) < pole_floor()) throw DivisionByNearZero("division by near-zero value");
}
inline void guard_divisor(const Rational& q) {
    if (q.is_zero()) throw DivisionByNearZero("division by exact zero");
}

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& q) { return q.is_zero(); }

inline double s_tan(double x) { return std::tan(x); }
inline double s_sin(double x) { return std::sin(x); }
inline double s_cos(double x) { return std::cos(x); }
inline double s_exp(double x) { return std::exp(x); }

inline Rational s_tan(const Rational&) { throw UnsupportedInRationalMode("tan"); }
inline Rational s_sin(const Rational&) { throw UnsupportedInRationalMode("sin"); }
inline Rational s_cos(const Rational&) { throw UnsupportedInRationalMode("cos"); }
inline Rational s_exp(const Rational&) { throw UnsupportedInRationalMode("exp"); }

// Integer power for any scalar with field operations.
template <class T>
T pow_int(T base, long long e) {
    if (e < 0) {
        base = T(1) / base;
        e = -e;
    }
    T result(1);
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

} // namespace perbif

#endif
