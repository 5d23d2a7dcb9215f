// Faa di Bruno formula over integer partitions. Used as an independent
// oracle against jet composition: the workhorse path is series substitution,
// this one enumerates the partitions explicitly.

#ifndef PERBIF_BRUNO_HPP
#define PERBIF_BRUNO_HPP

#include <span>
#include <vector>

#include "perbif/scalar.hpp"

namespace perbif {

struct BrunoTerm {
    std::vector<int> beta;  // beta[j-1] = multiplicity of derivative order j
    int n = 0;              // sum of beta_j, the outer derivative order
    Rational coefficient;   // m! / prod_j beta_j! (j!)^beta_j
};

namespace detail {
inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
} // namespace detail

// All solutions of sum_j j*beta_j = m in nonnegative integers, with exact
// multinomial coefficients.
inline std::vector<BrunoTerm> bruno_partitions(int m) {
    if (m < 1) throw std::invalid_argument("bruno_partitions: m must be >= 1");
    std::vector<BrunoTerm> terms;
    std::vector<int> beta(static_cast<std::size_t>(m), 0);
    auto recurse = [&](auto&& self, int j, int remaining) -> void {
        if (j > m) {
            if (remaining != 0) return;
            BrunoTerm t;
            t.beta = beta;
            BigInt den = 1;
            for (int i = 1; i <= m; ++i) {
                int b = beta[static_cast<std::size_t>(i) - 1];
                t.n += b;
                den *= detail::factorial(b);
                for (int r = 0; r < b; ++r) den *= detail::factorial(i);
            }
            t.coefficient = Rational(detail::factorial(m), den);
            terms.push_back(std::move(t));
            return;
        }
        for (int b = 0; b * j <= remaining; ++b) {
            beta[static_cast<std::size_t>(j) - 1] = b;
            self(self, j + 1, remaining - b * j);
        }
        beta[static_cast<std::size_t>(j) - 1] = 0;
    };
    recurse(recurse, 1, m);
    return terms;
}

// m-th raw derivative of g o f from the raw derivatives of g (at f(x)) and
// f (at x). derivs[k-1] holds the k-th derivative.
template <class T>
T bruno_compose(std::span<const T> outer_derivs, std::span<const T> inner_derivs, int m) {
    if (static_cast<int>(outer_derivs.size()) < m || static_cast<int>(inner_derivs.size()) < m)
        throw InsufficientOrder("bruno_compose: derivative vectors shorter than m");
    T sum(0);
    for (const BrunoTerm& t : bruno_partitions(m)) {
        T term = scalar_traits<T>::from_rational(t.coefficient) *
                 outer_derivs[static_cast<std::size_t>(t.n) - 1];
        for (int j = 1; j <= m; ++j) {
            int b = t.beta[static_cast<std::size_t>(j) - 1];
            for (int r = 0; r < b; ++r) term = term * inner_derivs[static_cast<std::size_t>(j) - 1];
        }
        sum = sum + term;
    }
    return sum;
}

template <class T>
T bruno_compose(const std::vector<T>& outer_derivs, const std::vector<T>& inner_derivs, int m) {
    return bruno_compose(std::span<const T>(outer_derivs), std::span<const T>(inner_derivs), m);
}

} // namespace perbif

#endif
