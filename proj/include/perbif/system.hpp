// p-periodic systems of fiber maps: cyclic rotations, composed jets,
// orbits, and hyperbolicity of periodic points.

#ifndef PERBIF_SYSTEM_HPP
#define PERBIF_SYSTEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "perbif/expr.hpp"

namespace perbif {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct PeriodicSystem {
    std::vector<ExprPtr> maps;               // f_0 .. f_{p-1}
    std::vector<std::string> sources;        // original text, for output
    int mu = 0;                              // parameter dimension
    std::optional<std::vector<Interval>> fibers;

    int period() const { return static_cast<int>(maps.size()); }

    static PeriodicSystem from_sources(std::vector<std::string> texts, int mu,
                                       std::optional<std::vector<Interval>> fibers = {}) {
        if (texts.empty()) throw std::invalid_argument("a system needs at least one map");
        if (fibers && fibers->size() != texts.size())
            throw std::invalid_argument("fiber count must equal the number of maps");
        PeriodicSystem s;
        s.mu = mu;
        s.sources = std::move(texts);
        for (const auto& t : s.sources) s.maps.push_back(parse(t, mu));
        s.fibers = std::move(fibers);
        return s;
    }
};

// Cyclic reindexing: the rotated system's base composition is F_m of the
// original (f_m applied first).
inline PeriodicSystem rotate(const PeriodicSystem& s, int m) {
    int p = s.period();
    if (m < 0 || m >= p) throw IndexOutOfRange("rotate: rotation index out of [0, p)");
    PeriodicSystem r;
    r.mu = s.mu;
    for (int i = 0; i < p; ++i) {
        int src = (i + m) % p;
        r.maps.push_back(s.maps[static_cast<std::size_t>(src)]);
        r.sources.push_back(s.sources[static_cast<std::size_t>(src)]);
    }
    if (s.fibers) {
        std::vector<Interval> f;
        for (int i = 0; i < p; ++i) f.push_back((*s.fibers)[static_cast<std::size_t>((i + m) % p)]);
        r.fibers = std::move(f);
    }
    return r;
}

// Jet (with parameter gradients) of F_j^k at x0: the k-fold composite of the
// cycle starting at fiber j, chained map by map through jet composition.
template <class S>
Jet<Grad<S>> composition_jet(const PeriodicSystem& s, int j, int k, const S& x0,
                             std::span<const S> params, int order) {
    int p = s.period();
    if (j < 0 || j >= p) throw IndexOutOfRange("composition_jet: rotation index out of [0, p)");
    if (k < 1) throw std::invalid_argument("composition_jet: power must be >= 1");
    Jet<Grad<S>> cur =
        eval_jet_grad_at(*s.maps[static_cast<std::size_t>(j)], Grad<S>::constant(x0, params.size()),
                         params, order);
    for (int t = 1; t < k * p; ++t) {
        int idx = (j + t) % p;
        auto outer =
            eval_jet_grad_at(*s.maps[static_cast<std::size_t>(idx)], cur.c[0], params, order);
        cur = compose(outer, cur);
    }
    return cur;
}

template <class S>
Jet<Grad<S>> composition_jet(const PeriodicSystem& s, int j, int k, const S& x0,
                             const std::vector<S>& params, int order) {
    return composition_jet(s, j, k, x0, std::span<const S>(params), order);
}

template <class S>
struct FiberPoints {
    std::vector<S> points; // points[i] lives in fiber (j + i) mod p
    S defect;              // |F_j^k(x) - x|-style closure defect
};

// The orbit points a_j, a_{j+1} = f_j(a_j), ... of a fixed point of F_j^k,
// one per fiber. The closure defect is measured after the full k*p steps.
template <class S>
FiberPoints<S> fiber_points(const PeriodicSystem& s, int j, const S& x,
                            std::span<const S> params, int k = 1,
                            double tol = 1e-9) {
    int p = s.period();
    if (j < 0 || j >= p) throw IndexOutOfRange("fiber_points: rotation index out of [0, p)");
    FiberPoints<S> out;
    out.points.reserve(static_cast<std::size_t>(p));
    out.points.push_back(x);
    S cur = x;
    for (int t = 0; t < k * p; ++t) {
        cur = eval(*s.maps[static_cast<std::size_t>((j + t) % p)], cur, params);
        if (t + 1 < p) out.points.push_back(cur);
    }
    out.defect = cur - x;
    bool bad;
    if constexpr (scalar_traits<S>::exact)
        bad = !is_zero(out.defect);
    else
        bad = magnitude(out.defect) > tol;
    if (bad)
        throw ClosureDefectExceeded("fiber_points: input is not a fixed point of the composition");
    return out;
}

template <class S>
FiberPoints<S> fiber_points(const PeriodicSystem& s, int j, const S& x,
                            const std::vector<S>& params, int k = 1, double tol = 1e-9) {
    return fiber_points(s, j, x, std::span<const S>(params), k, tol);
}

template <class S>
struct OrbitRecord {
    struct Point {
        int n;
        int fiber;
        S x;
    };
    std::vector<Point> points;
    std::vector<int> fiber_escapes; // steps n whose x_n left fiber I_{n mod p}
};

template <class S>
OrbitRecord<S> orbit(const PeriodicSystem& s, const S& x0, std::span<const S> params, int n,
                     int start_fiber = 0) {
    if (n < 0) throw std::invalid_argument("orbit: n must be >= 0");
    int p = s.period();
    OrbitRecord<S> rec;
    S cur = x0;
    for (int t = 0; t <= n; ++t) {
        int fiber = (start_fiber + t) % p;
        rec.points.push_back({t, fiber, cur});
        if (s.fibers) {
            const Interval& I = (*s.fibers)[static_cast<std::size_t>(fiber)];
            double xv = to_double(cur);
            if (xv < I.lo || xv > I.hi) rec.fiber_escapes.push_back(t);
        }
        if (t < n) cur = eval(*s.maps[static_cast<std::size_t>(fiber)], cur, params);
    }
    return rec;
}

template <class S>
OrbitRecord<S> orbit(const PeriodicSystem& s, const S& x0, const std::vector<S>& params, int n,
                     int start_fiber = 0) {
    return orbit(s, x0, std::span<const S>(params), n, start_fiber);
}

enum class Hyperbolicity { attractor, repeller, non_hyperbolic };

inline const char* to_string(Hyperbolicity h) {
    switch (h) {
        case Hyperbolicity::attractor: return "attractor";
        case Hyperbolicity::repeller: return "repeller";
        case Hyperbolicity::non_hyperbolic: return "non_hyperbolic";
    }
    return "?";
}

template <class S>
Hyperbolicity classify_hyperbolicity(const PeriodicSystem& s, int j, int k, const S& x,
                                     std::span<const S> params, double delta = 1e-8,
                                     double fixpt_tol = 1e-9) {
    auto jet = composition_jet(s, j, k, x, params, 1);
    double defect = magnitude(jet.c[0].v - x);
    if (defect > fixpt_tol)
        throw NotAFixedPoint("classify_hyperbolicity: point is not fixed under the composition");
    double D = magnitude(jet.deriv(1).v);
    if (D < 1.0 - delta) return Hyperbolicity::attractor;
    if (D > 1.0 + delta) return Hyperbolicity::repeller;
    return Hyperbolicity::non_hyperbolic;
}

template <class S>
Hyperbolicity classify_hyperbolicity(const PeriodicSystem& s, int j, int k, const S& x,
                                     const std::vector<S>& params, double delta = 1e-8,
                                     double fixpt_tol = 1e-9) {
    return classify_hyperbolicity(s, j, k, x, std::span<const S>(params), delta, fixpt_tol);
}

struct FiberViolation {
    int fiber;
    double x;      // sample point
    double image;  // f_j(x) that left I_{j+1}
};

// Sampled containment check f_j(I_j) in I_{j+1 mod p}; sampling only, not a
// proof.
template <class S>
std::vector<FiberViolation> check_fibers(const PeriodicSystem& s, std::span<const S> params,
                                         int samples_per_fiber = 64) {
    std::vector<FiberViolation> out;
    if (!s.fibers) return out;
    int p = s.period();
    for (int j = 0; j < p; ++j) {
        const Interval& I = (*s.fibers)[static_cast<std::size_t>(j)];
        const Interval& J = (*s.fibers)[static_cast<std::size_t>((j + 1) % p)];
        for (int t = 0; t < samples_per_fiber; ++t) {
            double x = samples_per_fiber == 1
                           ? I.lo
                           : I.lo + (I.hi - I.lo) * t / (samples_per_fiber - 1);
            S y = eval(*s.maps[static_cast<std::size_t>(j)], scalar_traits<S>::from_double(x),
                       params);
            double yv = to_double(y);
            if (yv < J.lo || yv > J.hi) out.push_back({j, x, yv});
        }
    }
    return out;
}

} // namespace perbif

#endif
