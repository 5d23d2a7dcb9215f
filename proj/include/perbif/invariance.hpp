// Cross-rotation certification: every cyclic rotation of the composed maps
// sees the same degeneracy, non-degeneracy, and transversality verdicts, with
// determinants linked by the slope-power ratio law. Also Schwarzian criteria,
// exclusion predicates, and the contact-order slope diagnostic.

#ifndef PERBIF_INVARIANCE_HPP
#define PERBIF_INVARIANCE_HPP

#include <vector>

#include "perbif/bifurcation.hpp"

namespace perbif {

struct VerifyConfig {
    double residual_tol = 1e-8;
    double nonzero_tol = 1e-8;
    double ratio_tol = 1e-8;
};

template <class S>
struct RotationCheck {
    int m = 0;
    S a{};                    // fixed point of the rotation-m composition
    std::vector<S> residual;
    S nondeg{};
    S det{};
    S predicted_factor{};      // (d/dx f_m(a_m))^((3 mu - mu^2)/2)
    double ratio_defect = 0.0; // relative defect of det_{m+1} vs factor * det_m
};

template <class S>
struct InvarianceReport {
    int mu = 0;
    int k = 1;
    std::vector<RotationCheck<S>> rotations;
    bool pass = false;
};

// The determinant ratio exponent: mu(3 - mu)/2, always an integer.
inline long long ratio_exponent(int mu) { return (3LL * mu - 1LL * mu * mu) / 2; }

template <class S>
InvarianceReport<S> verify(const PeriodicSystem& s, const BifurcationPoint<S>& pt,
                           const VerifyConfig& cfg = {}) {
    int p = s.period();
    int mu = pt.class_mu;
    InvarianceReport<S> rep;
    rep.mu = mu;
    rep.k = pt.k;

    auto fp = fiber_points(s, pt.j, pt.x, std::span<const S>(pt.lambda), pt.k,
                           10 * cfg.residual_tol);
    std::vector<S> a(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        a[static_cast<std::size_t>((pt.j + i) % p)] = fp.points[static_cast<std::size_t>(i)];

    std::vector<S> dets(static_cast<std::size_t>(p));
    for (int m = 0; m < p; ++m) {
        RotationCheck<S> rc;
        rc.m = m;
        rc.a = a[static_cast<std::size_t>(m)];
        rc.residual = residual(s, m, pt.k, mu, rc.a, std::span<const S>(pt.lambda));
        auto jet = composition_jet(s, m, pt.k, rc.a, std::span<const S>(pt.lambda), mu + 1);
        rc.nondeg = jet.deriv(mu + 1).v;
        rc.det = transversality(s, m, pt.k, mu, rc.a, std::span<const S>(pt.lambda)).det;
        dets[static_cast<std::size_t>(m)] = rc.det;
        rep.rotations.push_back(std::move(rc));
    }

    bool pass = true;
    long long e = ratio_exponent(mu);
    for (int m = 0; m < p; ++m) {
        auto& rc = rep.rotations[static_cast<std::size_t>(m)];
        // slope of the single map f_m at its own fiber point
        auto fj = eval_jet(*s.maps[static_cast<std::size_t>(m)], rc.a,
                           std::span<const S>(pt.lambda), 1);
        rc.predicted_factor = pow_int(fj.deriv(1), e);
        // determinant ratio law: rotating one step multiplies the Jacobian
        // determinant by the stepped-over map's slope to the power e
        const S& next = dets[static_cast<std::size_t>((m + 1) % p)];
        S defect = next - rc.predicted_factor * rc.det;
        rc.ratio_defect = magnitude(defect) / std::max(1.0, magnitude(next));
        double rnorm = 0.0;
        for (const auto& v : rc.residual) rnorm += magnitude(v) * magnitude(v);
        rnorm = std::sqrt(rnorm);
        if (rnorm > cfg.residual_tol) pass = false;
        if (magnitude(rc.nondeg) < cfg.nonzero_tol) pass = false;
        if (magnitude(rc.det) < cfg.nonzero_tol) pass = false;
        if (rc.ratio_defect > cfg.ratio_tol) pass = false;
    }
    rep.pass = pass;
    return rep;
}

// f'''/f' - (3/2)(f''/f')^2 from an order-3 jet.
template <class S>
S schwarzian(const Expr& e, const S& x, std::span<const S> params) {
    auto j = eval_jet(e, x, params, 3);
    S f1 = j.deriv(1);
    bool critical;
    if constexpr (scalar_traits<S>::exact)
        critical = is_zero(f1);
    else
        critical = magnitude(f1) < pole_floor();
    if (critical) throw CriticalPoint("schwarzian: first derivative vanishes");
    S q = j.deriv(2) / f1;
    return j.deriv(3) / f1 - S(3) / S(2) * q * q;
}

template <class S>
S schwarzian(const Expr& e, const S& x, const std::vector<S>& params) {
    return schwarzian(e, x, std::span<const S>(params));
}

// Same formula applied to the composed map F_j^k.
template <class S>
S schwarzian_composition(const PeriodicSystem& s, int j, int k, const S& x,
                         std::span<const S> params) {
    auto jet = composition_jet(s, j, k, x, params, 3);
    S f1 = jet.deriv(1).v;
    bool critical;
    if constexpr (scalar_traits<S>::exact)
        critical = is_zero(f1);
    else
        critical = magnitude(f1) < pole_floor();
    if (critical) throw CriticalPoint("schwarzian: first derivative vanishes");
    S q = jet.deriv(2).v / f1;
    return jet.deriv(3).v / f1 - S(3) / S(2) * q * q;
}

enum class CheckOutcome { pass, fail, inconclusive };

inline const char* to_string(CheckOutcome c) {
    switch (c) {
        case CheckOutcome::pass: return "pass";
        case CheckOutcome::fail: return "fail";
        case CheckOutcome::inconclusive: return "inconclusive";
    }
    return "?";
}

// For an alternating (p=2) A_3 point the two fiber maps must have Schwarzians
// of opposite sign; vanishing Schwarzian voids the hypothesis.
template <class S>
CheckOutcome schwarzian_product_check(const PeriodicSystem& s, const BifurcationPoint<S>& pt,
                                      double zero_tol = 1e-8) {
    if (s.period() != 2) throw WrongArity("schwarzian product check needs exactly two maps");
    if (pt.class_mu != 3) throw WrongClass("schwarzian product check applies to A_3 points");
    auto fp = fiber_points(s, pt.j, pt.x, std::span<const S>(pt.lambda), pt.k, 1e-6);
    S sf = schwarzian(*s.maps[static_cast<std::size_t>(pt.j)], fp.points[0],
                      std::span<const S>(pt.lambda));
    S sg = schwarzian(*s.maps[static_cast<std::size_t>((pt.j + 1) % 2)], fp.points[1],
                      std::span<const S>(pt.lambda));
    if (magnitude(sf) <= zero_tol || magnitude(sg) <= zero_tol)
        return CheckOutcome::inconclusive;
    return to_double(sf) * to_double(sg) < 0.0 ? CheckOutcome::pass : CheckOutcome::fail;
}

struct ExclusionResult {
    bool excluded = false;
    int proposition = 0; // 1, 2, or 3; 0 when nothing fired
};

namespace detail {

// Sign of a sampled derivative over an interval: +1/-1 when every sample is
// strictly of that sign, 0 otherwise (conservative).
template <class F>
int sampled_sign(F&& f, const Interval& I, int n) {
    int sign = 0;
    for (int t = 0; t < n; ++t) {
        double x = n == 1 ? I.lo : I.lo + (I.hi - I.lo) * t / (n - 1);
        double v = f(x);
        int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
        if (s == 0) return 0;
        if (sign == 0) sign = s;
        if (s != sign) return 0;
    }
    return sign;
}

} // namespace detail

// Grid-sampled versions of the three impossibility predicates for alternating
// A_3 points. "possible" is not a proof of existence, only absence of a
// firing predicate on the sample grid.
inline ExclusionResult a3_exclusion(const PeriodicSystem& s, const std::vector<double>& params,
                                    const std::vector<Interval>& intervals, int grid_n = 256) {
    if (s.period() != 2) throw WrongArity("exclusion predicates need exactly two maps");
    if (intervals.size() != 2)
        throw std::invalid_argument("exclusion predicates need both fiber intervals");
    auto deriv_sign = [&](int map, int order, const Interval& I) {
        return detail::sampled_sign(
            [&](double x) {
                auto j = eval_jet(*s.maps[static_cast<std::size_t>(map)], x,
                                  std::span<const double>(params), order);
                return j.deriv(order);
            },
            I, grid_n);
    };
    int fx = deriv_sign(0, 1, intervals[0]);
    int gx = deriv_sign(1, 1, intervals[1]);
    int fxx = deriv_sign(0, 2, intervals[0]);
    int gxx = deriv_sign(1, 2, intervals[1]);
    if (fx != 0 && gx != 0 && fx != gx) return {true, 1};
    if (fx == 1 && gx == 1 && fxx != 0 && fxx == gxx) return {true, 2};
    if (fx == -1 && gx == -1 && fxx != 0 && gxx != 0 && fxx != gxx) return {true, 3};
    return {false, 0};
}

// Least-squares slope of log|F(x) - x| against log|x - a|; near an A_mu point
// the expected slope is mu + 1.
inline double contact_order(const PeriodicSystem& s, int j, int k, double a,
                            const std::vector<double>& params, int n_samples = 40) {
    if (n_samples < 2) throw std::invalid_argument("contact order needs at least two samples");
    std::vector<double> xs, ys;
    for (int t = 0; t < n_samples; ++t) {
        double lg = -5.0 + 3.0 * t / (n_samples - 1); // distances 1e-5 .. 1e-2
        double d = std::pow(10.0, lg);
        for (double sgn : {1.0, -1.0}) {
            double x = a + sgn * d;
            auto jet = composition_jet(s, j, k, x, params, 0);
            double g = std::abs(jet.c[0].v - x);
            if (g < 1e-14) continue; // below noise floor, drop
            xs.push_back(std::log(d));
            ys.push_back(std::log(g));
        }
    }
    if (xs.size() < 2) throw NumericError("contact order: all samples below the noise floor");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace perbif

#endif
