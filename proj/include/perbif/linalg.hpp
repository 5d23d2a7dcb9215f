// Small dense solves and determinants for Newton steps and transversality
// matrices (dimensions are mu+1 at most, so no pivot-growth heroics).

#ifndef PERBIF_LINALG_HPP
#define PERBIF_LINALG_HPP

#include <cstddef>
#include <vector>

#include "perbif/errors.hpp"
#include "perbif/scalar.hpp"

namespace perbif {

template <class S>
using Matrix = std::vector<std::vector<S>>;

// Gaussian elimination with partial pivoting by magnitude. Exact in Rational
// mode (any nonzero pivot works over a field).
template <class S>
S determinant(Matrix<S> a) {
    std::size_t n = a.size();
    S det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (magnitude(a[r][col]) > magnitude(a[piv][col])) piv = r;
        if (is_zero(a[piv][col])) return S(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det = det * a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            S m = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] = a[r][c] - m * a[col][c];
        }
    }
    return det;
}

// Solves a x = b in place; throws SingularJacobian on a negligible pivot.
inline std::vector<double> solve_linear(Matrix<double> a, std::vector<double> b) {
    std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14)
            throw SingularJacobian("linear solve: pivot below 1e-14");
        if (piv != col) {
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double m = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// Tikhonov-regularized least squares (J^T J + eps I) x = J^T b, used when the
// plain Newton system is singular.
inline std::vector<double> solve_damped(const Matrix<double>& a, const std::vector<double>& b,
                                        double eps) {
    std::size_t n = a.size();
    Matrix<double> ata(n, std::vector<double>(n, 0.0));
    std::vector<double> atb(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t r = 0; r < n; ++r) ata[i][j] += a[r][i] * a[r][j];
            if (j == i) ata[i][j] += eps;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t r = 0; r < n; ++r) atb[i] += a[r][i] * b[r];
    return solve_linear(std::move(ata), std::move(atb));
}

} // namespace perbif

#endif
