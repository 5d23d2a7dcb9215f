// Exact rational scalar. Backed by boost::multiprecision; always kept in
// lowest terms with positive denominator by the backend.

#ifndef PERBIF_RATIONAL_HPP
#define PERBIF_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "perbif/errors.hpp"

namespace perbif {

using BigInt = boost::multiprecision::cpp_int;

// Expression templates are disabled so Rational behaves as a plain value
// type inside generic code (lambdas, deduction).
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::backends::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) { return q.str(); }

// Parses an integer or decimal literal exactly: "0.5" -> 1/2, "-3" -> -3,
// "2.25e-1" is not accepted (the expression grammar has no exponents).
inline Rational rational_from_literal(const std::string& text) {
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    BigInt den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(BigInt(digits), den);
}

// Exact rational from a double (every finite double is a dyadic rational).
inline Rational rational_from_double(double x) {
    int exp = 0;
    double m = std::frexp(x, &exp);
    // shift mantissa to an integer
    for (int i = 0; i < 64 && m != std::floor(m); ++i) {
        m *= 2.0;
        --exp;
    }
    Rational r(BigInt(static_cast<long long>(m)));
    if (exp >= 0) {
        r *= Rational(BigInt(1) << exp);
    } else {
        r /= Rational(BigInt(1) << -exp);
    }
    return r;
}

} // namespace perbif

#endif
