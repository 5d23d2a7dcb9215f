// A_mu bifurcation equations for composed periodic maps: residual assembly,
// damped Newton solve in (x, lambda), non-degeneracy, transversality, and
// singularity classification.

#ifndef PERBIF_BIFURCATION_HPP
#define PERBIF_BIFURCATION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "perbif/linalg.hpp"
#include "perbif/system.hpp"

namespace perbif {

struct SolveConfig {
    double residual_tol = 1e-12;
    int max_iter = 100;
    double damping = 1.0; // initial step fraction, halved by the line search
    double nondeg_tol = 1e-6;
    double hyperb_delta = 1e-8;
};

template <class S>
struct BifurcationPoint {
    int j = 0;
    int k = 1;
    int class_mu = 0;
    S x{};
    std::vector<S> lambda;
    double residual_norm = 0.0;
    S nondeg_value{};
    S transversality_det{};
    bool converged = false;
    int iterations = 0;
};

// [F - x, F_x - 1, F_xx, ..., F_{x^mu}] with raw derivatives of F_j^k.
template <class S>
std::vector<S> residual(const PeriodicSystem& s, int j, int k, int mu, const S& x,
                        std::span<const S> params) {
    auto jet = composition_jet(s, j, k, x, params, mu);
    std::vector<S> r;
    r.push_back(jet.c[0].v - x);
    r.push_back(jet.deriv(1).v - S(1));
    for (int m = 2; m <= mu; ++m) r.push_back(jet.deriv(m).v);
    return r;
}

template <class S>
std::vector<S> residual(const PeriodicSystem& s, int j, int k, int mu, const S& x,
                        const std::vector<S>& params) {
    return residual(s, j, k, mu, x, std::span<const S>(params));
}

namespace detail {

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace detail

// Damped Newton on the mu+1 unknowns (x, lambda_1..lambda_mu). The Jacobian
// comes from one jet evaluation per iterate: column 0 holds the next-order
// x-derivatives, column m the parameter gradients F_{x^i lambda_m}.
inline BifurcationPoint<double> solve(const PeriodicSystem& s, int j, int k, int mu,
                                      double x_init, std::vector<double> lambda_init,
                                      const SolveConfig& cfg = {}) {
    if (mu < 1) throw std::invalid_argument("solve: mu must be >= 1");
    if (static_cast<int>(lambda_init.size()) != mu)
        throw std::invalid_argument("solve: init must supply mu parameter values");
    if (s.mu != mu) throw std::invalid_argument("solve: system parameter count != mu");

    BifurcationPoint<double> pt;
    pt.j = j;
    pt.k = k;
    pt.class_mu = mu;
    pt.x = x_init;
    pt.lambda = std::move(lambda_init);

    auto res_at = [&](double x, const std::vector<double>& lam) {
        return residual(s, j, k, mu, x, lam);
    };

    std::vector<double> r = res_at(pt.x, pt.lambda);
    double rn = detail::norm2(r);
    int it = 0;
    for (; it < cfg.max_iter && rn > cfg.residual_tol; ++it) {
        auto jet = composition_jet(s, j, k, pt.x, pt.lambda, mu + 1);
        std::size_t n = static_cast<std::size_t>(mu) + 1;
        Matrix<double> J(n, std::vector<double>(n));
        for (std::size_t row = 0; row < n; ++row) {
            int ord = static_cast<int>(row); // residual row is F_{x^ord} (- x or - 1)
            J[row][0] = jet.deriv(ord + 1).v - (row == 0 ? 1.0 : 0.0);
            for (std::size_t m = 1; m < n; ++m)
                J[row][m] = jet.deriv(ord).deriv(m - 1);
        }
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -r[i];
        std::vector<double> step;
        try {
            step = solve_linear(J, rhs);
        } catch (const SingularJacobian&) {
            step = solve_damped(J, rhs, 1e-10 * std::max(1.0, rn));
        }
        double t = cfg.damping;
        double best = rn;
        double bx = pt.x;
        std::vector<double> bl = pt.lambda;
        std::vector<double> br = r;
        bool improved = false;
        for (int half = 0; half < 30; ++half, t *= 0.5) {
            double nx = pt.x + t * step[0];
            std::vector<double> nl = pt.lambda;
            for (std::size_t m = 1; m < n; ++m) nl[m - 1] += t * step[m];
            std::vector<double> nr;
            try {
                nr = res_at(nx, nl);
            } catch (const NumericError&) {
                continue; // step left the domain (pole etc.), shrink further
            }
            double nn = detail::norm2(nr);
            if (nn < best) {
                best = nn;
                bx = nx;
                bl = std::move(nl);
                br = std::move(nr);
                improved = true;
                break;
            }
        }
        if (!improved) break; // stagnated; report best iterate
        pt.x = bx;
        pt.lambda = std::move(bl);
        r = std::move(br);
        rn = best;
    }
    pt.iterations = it;
    pt.residual_norm = rn;
    pt.converged = rn <= cfg.residual_tol; // unconverged points keep the best iterate
    auto jet = composition_jet(s, j, k, pt.x, pt.lambda, mu + 1);
    pt.nondeg_value = jet.deriv(mu + 1).v;
    Matrix<double> M(static_cast<std::size_t>(mu), std::vector<double>(static_cast<std::size_t>(mu)));
    for (int rrow = 1; rrow <= mu; ++rrow)
        for (int i = 1; i <= mu; ++i)
            M[static_cast<std::size_t>(rrow - 1)][static_cast<std::size_t>(i - 1)] =
                jet.deriv(rrow - 1).deriv(static_cast<std::size_t>(i - 1));
    pt.transversality_det = determinant(std::move(M));
    return pt;
}

// F_{x^{mu+1}} at the point; the caller decides degeneracy with nondeg_tol.
template <class S>
S nondegeneracy(const PeriodicSystem& s, const BifurcationPoint<S>& pt) {
    auto jet = composition_jet(s, pt.j, pt.k, pt.x, pt.lambda, pt.class_mu + 1);
    return jet.deriv(pt.class_mu + 1).v;
}

template <class S>
struct Transversality {
    Matrix<S> matrix; // entry (r, i) = F_{x^{r-1} lambda_i}, r, i = 1..mu
    S det{};
};

template <class S>
Transversality<S> transversality(const PeriodicSystem& s, int j, int k, int mu, const S& x,
                                 std::span<const S> params) {
    auto jet = composition_jet(s, j, k, x, params, mu == 1 ? 1 : mu - 1);
    Transversality<S> out;
    out.matrix.assign(static_cast<std::size_t>(mu), std::vector<S>(static_cast<std::size_t>(mu)));
    for (int r = 1; r <= mu; ++r)
        for (int i = 1; i <= mu; ++i)
            out.matrix[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(i - 1)] =
                jet.deriv(r - 1).deriv(static_cast<std::size_t>(i - 1));
    out.det = determinant(out.matrix);
    return out;
}

template <class S>
Transversality<S> transversality(const PeriodicSystem& s, int j, int k, int mu, const S& x,
                                 const std::vector<S>& params) {
    return transversality(s, j, k, mu, x, std::span<const S>(params));
}

template <class S>
Transversality<S> transversality(const PeriodicSystem& s, int j, const BifurcationPoint<S>& pt) {
    return transversality(s, j, pt.k, pt.class_mu, pt.x, std::span<const S>(pt.lambda));
}

struct Classification {
    int mu = 0; // 0 means no A_mu singularity at the point
    double nondeg_value = 0.0;
    int sign = 0; // sign of F_{x^{mu+1}}
};

inline const char* class_name(int mu) {
    switch (mu) {
        case 1: return "fold";
        case 2: return "cusp";
        case 3: return "swallowtail";
        case 4: return "butterfly";
        default: return mu > 4 ? "A_mu" : "none";
    }
}

namespace detail {

// -1 vanish, +1 nonzero, 0 inside the gap. Bands scale with k! so they track
// raw derivatives of any order uniformly.
inline int band(double value, int order) {
    double f = 1.0;
    for (int i = 2; i <= order; ++i) f *= i;
    double a = std::abs(value);
    if (a <= 1e-7 * f) return -1;
    if (a >= 1e-4 * f) return +1;
    return 0;
}

} // namespace detail

// Most degenerate consistent label: scan derivative orders upward while they
// vanish; the first clearly nonzero order m gives A_{m-1}.
inline Classification classify_singularity(const PeriodicSystem& s, int j, int k, double x,
                                           const std::vector<double>& params, int mu_max = 6) {
    if (mu_max < 1 || mu_max > 7) throw std::invalid_argument("classify: mu_max out of range");
    auto jet = composition_jet(s, j, k, x, params, mu_max + 1);
    Classification out;
    int b0 = detail::band(jet.c[0].v - x, 0);
    int b1 = detail::band(jet.deriv(1).v - 1.0, 1);
    if (b0 == 0 || b1 == 0)
        throw Ambiguous("classify: fixed-point or unit-slope condition inside the tolerance gap");
    if (b0 > 0 || b1 > 0) return out; // not a degenerate fixed point
    for (int m = 2; m <= mu_max + 1; ++m) {
        double v = jet.deriv(m).v;
        int b = detail::band(v, m);
        if (b == 0)
            throw Ambiguous("classify: derivative order " + std::to_string(m) +
                            " inside the tolerance gap");
        if (b > 0) {
            out.mu = m - 1;
            out.nondeg_value = v;
            out.sign = v > 0 ? 1 : -1;
            return out;
        }
    }
    throw Ambiguous("classify: degeneracy exceeds mu_max");
}

} // namespace perbif

#endif
