// Bifurcation-set tracing near a degenerate point: fold sheets and cusp
// curves sampled on a parameter grid, plus cobweb plot data for the fiber
// maps.

#ifndef PERBIF_STRATA_HPP
#define PERBIF_STRATA_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "perbif/bifurcation.hpp"

namespace perbif {

enum class Stratum { fold, cusp, top };

inline const char* to_string(Stratum s) {
    switch (s) {
        case Stratum::fold: return "fold";
        case Stratum::cusp: return "cusp";
        case Stratum::top: return "top";
    }
    return "?";
}

struct StrataPoint {
    Stratum stratum = Stratum::fold;
    double x = 0.0;
    std::vector<double> lambda;
    double res_fp = 0.0;  // F - x
    double res_dx = 0.0;  // F_x - 1
    double res_dxx = 0.0; // F_xx
};

struct StrataConfig {
    double tol = 1e-10;          // Newton residual target per stratum solve
    double cluster_radius = 1e-6;
    int max_newton = 40;
    int seeds = 17;      // x-offsets fanned around the reference point per cell
    double x_fan = 0.5;  // minimum half-width of the seed fan in x
};

struct StrataCloud {
    int mu = 0;
    int grid = 0;
    std::vector<StrataPoint> points;
    int failed_cells = 0; // cells where no seed converged
};

namespace detail {

// Newton for the first `neq` bifurcation equations in the unknowns
// (x, lambda_1 .. lambda_{neq-1}); remaining parameters stay fixed.
inline bool newton_stratum(const PeriodicSystem& s, int j, int neq, double& x,
                           std::vector<double>& lam, const StrataConfig& cfg) {
    int mu = static_cast<int>(lam.size());
    for (int it = 0; it < cfg.max_newton; ++it) {
        Jet<Grad<double>> jet;
        try {
            jet = composition_jet(s, j, 1, x, lam, neq);
        } catch (const NumericError&) {
            return false;
        }
        std::vector<double> r(static_cast<std::size_t>(neq));
        r[0] = jet.c[0].v - x;
        r[1] = jet.deriv(1).v - 1.0;
        for (int m = 2; m < neq; ++m) r[static_cast<std::size_t>(m)] = jet.deriv(m).v;
        double rn = norm2(r);
        if (rn <= cfg.tol) return true;
        Matrix<double> J(static_cast<std::size_t>(neq), std::vector<double>(static_cast<std::size_t>(neq)));
        for (int row = 0; row < neq; ++row) {
            J[static_cast<std::size_t>(row)][0] =
                jet.deriv(row + 1).v - (row == 0 ? 1.0 : 0.0);
            for (int m = 1; m < neq; ++m)
                J[static_cast<std::size_t>(row)][static_cast<std::size_t>(m)] =
                    jet.deriv(row).deriv(static_cast<std::size_t>(m - 1));
        }
        std::vector<double> rhs(static_cast<std::size_t>(neq));
        for (int i = 0; i < neq; ++i) rhs[static_cast<std::size_t>(i)] = -r[static_cast<std::size_t>(i)];
        std::vector<double> step;
        try {
            step = solve_linear(J, rhs);
        } catch (const SingularJacobian&) {
            return false;
        }
        double t = 1.0;
        bool moved = false;
        for (int half = 0; half < 25; ++half, t *= 0.5) {
            double nx = x + t * step[0];
            std::vector<double> nl = lam;
            for (int m = 1; m < neq; ++m) nl[static_cast<std::size_t>(m - 1)] += t * step[static_cast<std::size_t>(m)];
            std::vector<double> nr;
            try {
                auto njet = composition_jet(s, j, 1, nx, nl, neq);
                nr.resize(static_cast<std::size_t>(neq));
                nr[0] = njet.c[0].v - nx;
                nr[1] = njet.deriv(1).v - 1.0;
                for (int m = 2; m < neq; ++m) nr[static_cast<std::size_t>(m)] = njet.deriv(m).v;
            } catch (const NumericError&) {
                continue;
            }
            if (norm2(nr) < rn) {
                x = nx;
                lam = std::move(nl);
                moved = true;
                break;
            }
        }
        if (!moved) return false;
    }
    (void)mu;
    // converged iff the final residual is small
    auto jet = composition_jet(s, j, 1, x, lam, neq);
    std::vector<double> r(static_cast<std::size_t>(neq));
    r[0] = jet.c[0].v - x;
    r[1] = jet.deriv(1).v - 1.0;
    for (int m = 2; m < neq; ++m) r[static_cast<std::size_t>(m)] = jet.deriv(m).v;
    return norm2(r) <= cfg.tol;
}

inline bool in_box(const std::vector<double>& lam, const std::vector<Interval>& box) {
    for (std::size_t i = 0; i < lam.size(); ++i)
        if (lam[i] < box[i].lo - 1e-12 || lam[i] > box[i].hi + 1e-12) return false;
    return true;
}

} // namespace detail

// Grid-scan continuation over the lambda_2..lambda_mu slice family; each cell
// solves the two fold equations in (x, lambda_1), seeded from the reference
// point fan and from the previous cell's roots. Near-cusp roots are refined
// against the three-equation system in (x, lambda_1, lambda_2).
inline StrataCloud trace_strata(const PeriodicSystem& s, int j, int mu,
                                const BifurcationPoint<double>& pt,
                                const std::vector<Interval>& region, int grid,
                                const StrataConfig& cfg = {}) {
    if (mu < 2 || mu > 3) throw std::invalid_argument("trace_strata supports mu 2 or 3");
    if (static_cast<int>(region.size()) != mu)
        throw std::invalid_argument("trace_strata: region must have mu intervals");
    for (const auto& I : region)
        if (!(I.hi > I.lo)) throw EmptyRegion("trace_strata: empty region box");
    if (grid < 2) throw std::invalid_argument("trace_strata: grid must be >= 2");

    StrataCloud cloud;
    cloud.mu = mu;
    cloud.grid = grid;

    double x_scale = std::max(cfg.x_fan, 0.5 * (region[0].hi - region[0].lo));
    std::vector<double> offsets;
    for (int i = 0; i < cfg.seeds; ++i) {
        int half = (i + 1) / 2;
        double o = x_scale * half / ((cfg.seeds + 1) / 2);
        offsets.push_back(i % 2 == 0 ? o : -o);
    }

    int cells1 = grid;
    int cells2 = mu == 3 ? grid : 1;
    std::vector<std::vector<std::pair<double, double>>> prev_roots(
        static_cast<std::size_t>(cells2)); // (x, lambda_1) per slice row

    auto emit = [&](Stratum st, double x, const std::vector<double>& lam) {
        auto jet = composition_jet(s, j, 1, x, lam, 2);
        StrataPoint p;
        p.stratum = st;
        p.x = x;
        p.lambda = lam;
        p.res_fp = jet.c[0].v - x;
        p.res_dx = jet.deriv(1).v - 1.0;
        p.res_dxx = jet.deriv(2).v;
        cloud.points.push_back(std::move(p));
    };

    for (int i2 = 0; i2 < cells2; ++i2) {
        for (int i1 = 0; i1 < cells1; ++i1) {
            std::vector<double> lam = pt.lambda;
            lam[1] = region[1].lo + (region[1].hi - region[1].lo) * i1 / (cells1 - 1);
            if (mu == 3)
                lam[2] = region[2].lo + (region[2].hi - region[2].lo) * i2 / (cells2 - 1);

            std::vector<std::pair<double, double>> found;
            auto try_seed = [&](double x0, double l1) {
                double x = x0;
                std::vector<double> l = lam;
                l[0] = l1;
                if (!detail::newton_stratum(s, j, 2, x, l, cfg)) return;
                if (l[0] < region[0].lo || l[0] > region[0].hi) return;
                for (const auto& f : found)
                    if (std::abs(f.first - x) <= cfg.cluster_radius &&
                        std::abs(f.second - l[0]) <= cfg.cluster_radius)
                        return;
                found.emplace_back(x, l[0]);
            };
            for (const auto& r : prev_roots[static_cast<std::size_t>(i2)])
                try_seed(r.first, r.second);
            try_seed(pt.x, pt.lambda[0]);
            for (double o : offsets) try_seed(pt.x + o, pt.lambda[0]);

            if (found.empty()) {
                ++cloud.failed_cells;
                continue;
            }
            std::sort(found.begin(), found.end());
            prev_roots[static_cast<std::size_t>(i2)] = found;

            // every fold root is kept; cusp refinement runs from each root so
            // that the emitted cusp set does not depend on which rotation's
            // x-coordinates seeded it
            std::vector<std::pair<double, std::vector<double>>> cusps;
            for (const auto& f : found) {
                std::vector<double> l = lam;
                l[0] = f.second;
                emit(Stratum::fold, f.first, l);
                double cx = f.first;
                std::vector<double> cl = l;
                if (detail::newton_stratum(s, j, 3, cx, cl, cfg) &&
                    detail::in_box(cl, region)) {
                    bool dup = false;
                    for (const auto& c : cusps)
                        if (std::abs(c.first - cx) <= cfg.cluster_radius &&
                            std::abs(c.second[0] - cl[0]) <= cfg.cluster_radius &&
                            std::abs(c.second[1] - cl[1]) <= cfg.cluster_radius)
                            dup = true;
                    if (!dup) cusps.emplace_back(cx, cl);
                }
            }
            for (const auto& c : cusps) emit(Stratum::cusp, c.first, c.second);
        }
    }
    return cloud;
}

inline std::string strata_csv(const StrataCloud& cloud) {
    std::string out = "stratum,x";
    for (int i = 1; i <= cloud.mu; ++i) out += ",l" + std::to_string(i);
    out += ",res_fp,res_dx,res_dxx\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& p : cloud.points) {
        out += to_string(p.stratum);
        out += "," + num(p.x);
        for (double l : p.lambda) out += "," + num(l);
        out += "," + num(p.res_fp) + "," + num(p.res_dx) + "," + num(p.res_dxx) + "\n";
    }
    return out;
}

struct CobwebSegment {
    std::string kind; // orbit_v, orbit_h, graph0, graph1, ..., diagonal
    double x0, y0, x1, y1;
};

struct CobwebData {
    std::vector<CobwebSegment> segments;
};

// Orbit staircase between the diagonal and the cycling fiber maps, plus the
// sampled map graphs and the diagonal itself.
template <class S>
CobwebData cobweb_data(const PeriodicSystem& s, const S& x0, const std::vector<S>& params,
                       int n, int graph_samples = 200) {
    if (n < 1) throw std::invalid_argument("cobweb needs at least one step");
    int p = s.period();
    CobwebData out;

    std::vector<double> xs{to_double(x0)};
    S cur = x0;
    for (int t = 0; t < n; ++t) {
        cur = eval(*s.maps[static_cast<std::size_t>(t % p)], cur, params);
        xs.push_back(to_double(cur));
    }
    for (int t = 0; t < n; ++t) {
        double a = xs[static_cast<std::size_t>(t)];
        double b = xs[static_cast<std::size_t>(t) + 1];
        out.segments.push_back({"orbit_v", a, a, a, b});
        out.segments.push_back({"orbit_h", a, b, b, b});
    }

    double lo = *std::min_element(xs.begin(), xs.end());
    double hi = *std::max_element(xs.begin(), xs.end());
    double pad = std::max(0.1 * (hi - lo), 0.05);
    lo -= pad;
    hi += pad;
    for (int m = 0; m < p; ++m) {
        double glo = lo, ghi = hi;
        if (s.fibers) {
            glo = (*s.fibers)[static_cast<std::size_t>(m)].lo;
            ghi = (*s.fibers)[static_cast<std::size_t>(m)].hi;
        }
        std::string kind = "graph" + std::to_string(m);
        double prev_x = glo;
        double prev_y = to_double(
            eval(*s.maps[static_cast<std::size_t>(m)], scalar_traits<S>::from_double(glo), params));
        for (int t = 1; t < graph_samples; ++t) {
            double x = glo + (ghi - glo) * t / (graph_samples - 1);
            double y = to_double(eval(*s.maps[static_cast<std::size_t>(m)],
                                      scalar_traits<S>::from_double(x), params));
            out.segments.push_back({kind, prev_x, prev_y, x, y});
            prev_x = x;
            prev_y = y;
        }
    }
    out.segments.push_back({"diagonal", lo, lo, hi, hi});
    return out;
}

inline std::string cobweb_csv(const CobwebData& data) {
    std::string out = "kind,x0,y0,x1,y1\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& seg : data.segments)
        out += seg.kind + "," + num(seg.x0) + "," + num(seg.y0) + "," + num(seg.x1) + "," +
               num(seg.y1) + "\n";
    return out;
}

} // namespace perbif

#endif
