#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "perbif/strata.hpp"

#include "test_util.hpp"

using namespace perbif;

namespace {

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

PeriodicSystem poly_system() {
    return PeriodicSystem::from_sources({"x^2+l1", "l3*x^3+l2*x+1"}, 3);
}

std::vector<double> poly_lambda_d() {
    std::vector<double> lam;
    for (const auto& q : {Q(-243, 245), Q(175, 324), Q(52521875, 229582512)})
        lam.push_back(to_double(q));
    return lam;
}

BifurcationPoint<double> poly_point_d(int j) {
    BifurcationPoint<double> pt;
    pt.j = j;
    pt.k = 1;
    pt.class_mu = 3;
    pt.x = j == 0 ? to_double(Q(27, 35)) : to_double(Q(-486, 1225));
    pt.lambda = poly_lambda_d();
    return pt;
}

double residual_norm_at(const PeriodicSystem& s, int j, const StrataPoint& p, int neq) {
    auto jet = composition_jet(s, j, 1, p.x, p.lambda, neq);
    double r0 = jet.c[0].v - p.x;
    double r1 = jet.deriv(1).v - 1.0;
    double n = r0 * r0 + r1 * r1;
    if (neq >= 3) {
        double r2 = jet.deriv(2).v;
        n += r2 * r2;
    }
    return std::sqrt(n);
}

double hausdorff_lambda(const StrataCloud& a, const StrataCloud& b) {
    auto one_sided = [](const StrataCloud& from, const StrataCloud& to) {
        double worst = 0.0;
        for (const auto& p : from.points) {
            double best = 1e300;
            for (const auto& q : to.points) {
                double d = 0.0;
                for (std::size_t i = 0; i < p.lambda.size(); ++i) {
                    double e = p.lambda[i] - q.lambda[i];
                    d += e * e;
                }
                best = std::min(best, std::sqrt(d));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace

TEST_CASE("fold and cusp strata of the unfolded quartic germ") {
    auto s = PeriodicSystem::from_sources({"x+x^4+l1+l2*x+l3*x^2"}, 3);
    BifurcationPoint<double> pt;
    pt.class_mu = 3;
    pt.x = 0.0;
    pt.lambda = {0.0, 0.0, 0.0};
    std::vector<Interval> box{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}};
    auto cloud = trace_strata(s, 0, 3, pt, box, 9);
    CHECK(!cloud.points.empty());

    int cusps = 0;
    for (const auto& p : cloud.points) {
        CHECK(std::abs(p.res_fp) <= 1e-8);
        CHECK(std::abs(p.res_dx) <= 1e-8);
        if (p.stratum == Stratum::cusp) {
            ++cusps;
            CHECK(std::abs(p.res_dxx) <= 1e-8);
            // cusp line of the quartic germ: 12 x^2 + 2 l3 = 0
            CHECK(12.0 * p.x * p.x + 2.0 * p.lambda[2] == doctest::Approx(0.0).epsilon(1e-6));
        } else {
            // fold sheet: l1 = -x^4 - l2 x - l3 x^2 and 4 x^3 + l2 + 2 l3 x = 0
            CHECK(p.lambda[0] ==
                  doctest::Approx(-std::pow(p.x, 4) - p.lambda[1] * p.x -
                                  p.lambda[2] * p.x * p.x)
                      .epsilon(1e-7));
            CHECK(4.0 * std::pow(p.x, 3) + p.lambda[1] + 2.0 * p.lambda[2] * p.x ==
                  doctest::Approx(0.0).epsilon(1e-7));
        }
    }
    CHECK(cusps > 0);

    // the germ's fold set is symmetric under (x, l2) -> (-x, -l2)
    int matched = 0, total = 0;
    for (const auto& p : cloud.points) {
        if (p.stratum != Stratum::fold) continue;
        ++total;
        for (const auto& q : cloud.points) {
            if (q.stratum != Stratum::fold) continue;
            // x tolerance is loose: at the fully degenerate center the root
            // is quartic, so residual 1e-10 pins x only to about 1e-3
            if (std::abs(q.x + p.x) <= 1e-2 && std::abs(q.lambda[0] - p.lambda[0]) <= 1e-6 &&
                std::abs(q.lambda[1] + p.lambda[1]) <= 1e-6 &&
                std::abs(q.lambda[2] - p.lambda[2]) <= 1e-6) {
                ++matched;
                break;
            }
        }
    }
    CHECK(matched == total);
}

TEST_CASE("strata near the polynomial system's degenerate point") {
    auto s = poly_system();
    auto pt = poly_point_d(0);
    std::vector<Interval> box;
    for (double l : pt.lambda) box.push_back({l - 1e-2, l + 1e-2});
    auto cloud = trace_strata(s, 0, 3, pt, box, 5);
    CHECK(!cloud.points.empty());
    bool has_fold = false;
    for (const auto& p : cloud.points) {
        if (p.stratum == Stratum::fold) has_fold = true;
        int neq = p.stratum == Stratum::cusp ? 3 : 2;
        CHECK(residual_norm_at(s, 0, p, neq) <= 1e-8);
    }
    CHECK(has_fold);
}

TEST_CASE("region away from the bifurcation set yields an empty cloud") {
    auto s = PeriodicSystem::from_sources({"x+x^4+l1+l2*x+l3*x^2"}, 3);
    BifurcationPoint<double> pt;
    pt.class_mu = 3;
    pt.x = 0.0;
    pt.lambda = {5.05, 5.05, 5.05};
    std::vector<Interval> far{{5.0, 5.1}, {5.0, 5.1}, {5.0, 5.1}};
    auto cloud = trace_strata(s, 0, 3, pt, far, 3);
    CHECK(cloud.points.empty());
    CHECK(cloud.failed_cells > 0);
}

TEST_CASE("trace input validation") {
    auto s = poly_system();
    auto pt = poly_point_d(0);
    std::vector<Interval> box{{-1, 1}, {-1, 1}, {-1, 1}};
    CHECK_THROWS_AS(trace_strata(s, 0, 4, pt, box, 4), std::invalid_argument);
    CHECK_THROWS_AS(trace_strata(s, 0, 3, pt, {{-1, 1}, {-1, 1}}, 4), std::invalid_argument);
    CHECK_THROWS_AS(trace_strata(s, 0, 3, pt, {{-1, 1}, {-1, 1}, {1, -1}}, 4), EmptyRegion);
    CHECK_THROWS_AS(trace_strata(s, 0, 3, pt, box, 1), std::invalid_argument);
}

TEST_CASE("identical inputs give identical clouds") {
    auto s = poly_system();
    auto pt = poly_point_d(0);
    std::vector<Interval> box;
    for (double l : pt.lambda) box.push_back({l - 1e-2, l + 1e-2});
    auto c1 = trace_strata(s, 0, 3, pt, box, 4);
    auto c2 = trace_strata(s, 0, 3, pt, box, 4);
    CHECK(strata_csv(c1) == strata_csv(c2));
}

TEST_CASE("rotations trace the same parameter-space set") {
    auto s = poly_system();
    std::vector<Interval> box;
    for (double l : poly_lambda_d()) box.push_back({l - 1e-2, l + 1e-2});
    auto c0 = trace_strata(s, 0, 3, poly_point_d(0), box, 5);
    auto c1 = trace_strata(s, 1, 3, poly_point_d(1), box, 5);
    REQUIRE(!c0.points.empty());
    REQUIRE(!c1.points.empty());
    CHECK(hausdorff_lambda(c0, c1) <= 1e-6);
}

TEST_CASE("strata CSV format") {
    StrataCloud cloud;
    cloud.mu = 3;
    StrataPoint p;
    p.stratum = Stratum::fold;
    p.x = 0.5;
    p.lambda = {1.0, 2.0, 3.0};
    cloud.points.push_back(p);
    auto csv = strata_csv(cloud);
    CHECK(csv.rfind("stratum,x,l1,l2,l3,res_fp,res_dx,res_dxx\n", 0) == 0);
    CHECK(csv.find("fold,0.5,1,2,3,0,0,0\n") != std::string::npos);
}

TEST_CASE("cobweb of the exact 2-cycle, rational") {
    auto s = poly_system();
    std::vector<Rational> lam{Q(-243, 245), Q(175, 324), Q(52521875, 229582512)};
    auto data = cobweb_data(s, Q(27, 35), lam, 4, 16);
    double a = to_double(Q(27, 35)), b = to_double(Q(-486, 1225));
    int orbit_segments = 0;
    for (const auto& seg : data.segments) {
        if (seg.kind == "orbit_v" || seg.kind == "orbit_h") {
            ++orbit_segments;
            for (double v : {seg.x0, seg.y0, seg.x1, seg.y1}) {
                bool on_cycle = std::abs(v - a) <= 1e-15 || std::abs(v - b) <= 1e-15;
                CHECK(on_cycle);
            }
        }
    }
    CHECK(orbit_segments == 8);
    CHECK(cobweb_csv(data).rfind("kind,x0,y0,x1,y1\n", 0) == 0);
}

TEST_CASE("cobweb of the tangent system collapses onto its 2-cycle") {
    auto s = PeriodicSystem::from_sources({"-x^4+l1*x^2+x+l2", "l3*tan(x)"}, 3);
    auto pt = solve(s, 0, 1, 3, 0.08, {-0.04, 0.0, 1.0});
    REQUIRE(pt.converged);
    auto fp = fiber_points(s, 0, pt.x, pt.lambda, 1, 1e-8);
    auto data = cobweb_data(s, pt.x, pt.lambda, 6, 16);
    for (const auto& seg : data.segments) {
        if (seg.kind != "orbit_v" && seg.kind != "orbit_h") continue;
        for (double v : {seg.x0, seg.y0, seg.x1, seg.y1}) {
            bool on_cycle =
                std::abs(v - fp.points[0]) <= 1e-5 || std::abs(v - fp.points[1]) <= 1e-5;
            CHECK(on_cycle);
        }
    }
}

TEST_CASE("cobweb at a fixed point of a one-map system degenerates to a point") {
    auto s = PeriodicSystem::from_sources({"x/2+l1"}, 1);
    auto data = cobweb_data(s, 0.0, std::vector<double>{0.0}, 3, 8);
    for (const auto& seg : data.segments) {
        if (seg.kind != "orbit_v" && seg.kind != "orbit_h") continue;
        CHECK(std::abs(seg.x0) <= 1e-15);
        CHECK(std::abs(seg.y0) <= 1e-15);
        CHECK(std::abs(seg.x1) <= 1e-15);
        CHECK(std::abs(seg.y1) <= 1e-15);
    }
    CHECK_THROWS_AS(cobweb_data(s, 0.0, std::vector<double>{0.0}, 0), std::invalid_argument);
}
