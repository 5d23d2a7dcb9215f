// perbif: solve, cross-verify, classify, and trace degenerate fixed points of
// composed periodic map families. Exit codes: 0 success, 2 check failure,
// 1 usage or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "perbif/json_io.hpp"
#include "perbif/strata.hpp"

namespace {

using namespace perbif;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PeriodicSystem load_system(const std::string& path) {
    json j = json::parse(slurp(path));
    return system_from_json(j);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write file: " + out_path);
    out << content;
}

std::string fmt7(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

struct Table {
    bool all_ok = true;
    void row(bool ok, const std::string& text) {
        all_ok = all_ok && ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << text << '\n';
    }
};

Rational Q(long long n, long long d = 1) { return Rational(n, d); }

int run_example1() {
    Table t;
    auto sys = PeriodicSystem::from_sources({"x^2+l1", "l3*x^3+l2*x+1"}, 3);
    std::vector<Rational> lam{Q(-243, 245), Q(175, 324), Q(52521875, 229582512)};
    Rational a = Q(27, 35), b = Q(-486, 1225);

    auto pt = solve(sys, 0, 1, 3, 0.8, {-1.0, 0.5, 0.02});
    t.row(pt.converged && pt.iterations <= 30,
          "newton converges from (0.8, -1, 0.5, 0.02) in " + std::to_string(pt.iterations) +
              " iterations");
    t.row(std::abs(pt.x - to_double(a)) <= 1e-10,
          "x = " + fmt7(pt.x) + " matches 27/35 within 1e-10");
    const char* names[] = {"-243/245", "175/324", "52521875/229582512"};
    for (int i = 0; i < 3; ++i)
        t.row(std::abs(pt.lambda[static_cast<std::size_t>(i)] -
                       to_double(lam[static_cast<std::size_t>(i)])) <= 1e-10,
              "lambda_" + std::to_string(i + 1) + " = " +
                  fmt7(pt.lambda[static_cast<std::size_t>(i)]) + " matches " + names[i] +
                  " within 1e-10");

    bool exact0 = true, exact1 = true;
    for (const auto& v : residual(sys, 0, 1, 3, a, lam)) exact0 = exact0 && is_zero(v);
    for (const auto& v : residual(sys, 1, 1, 3, b, lam)) exact1 = exact1 && is_zero(v);
    t.row(exact0, "rotation 0 residual vector is exactly [0, 0, 0, 0]");
    t.row(exact1, "rotation 1 residual vector is exactly [0, 0, 0, 0]");

    auto d0 = transversality(sys, 0, 1, 3, a, lam).det;
    auto d1 = transversality(sys, 1, 1, 3, b, lam).det;
    t.row(d0 == Q(-944784, 214375), "rotation 0 determinant = " + d0.str() + " (exact)");
    t.row(d1 == Q(-944784, 214375), "rotation 1 determinant = " + d1.str() + " (exact)");

    auto sf = schwarzian(*sys.maps[0], a, lam);
    auto sg = schwarzian(*sys.maps[1], b, lam);
    t.row(sf == Q(-1225, 486), "first map schwarzian = " + sf.str() + " (exact -1225/486)");
    t.row(sg == Q(1500625, 1417176),
          "second map schwarzian = " + sg.str() + " (exact 1500625/1417176)");
    t.row(to_double(sf) * to_double(sg) < 0.0, "schwarzian product is negative");

    std::vector<double> lamd;
    for (const auto& q : lam) lamd.push_back(to_double(q));
    double SF = schwarzian_composition(sys, 0, 1, to_double(a), std::span<const double>(lamd));
    double SG = schwarzian_composition(sys, 1, 1, to_double(b), std::span<const double>(lamd));
    t.row(std::abs(SF) <= 1e-8, "composed-map schwarzian at x = a is " + fmt7(SF));
    t.row(std::abs(SG) <= 1e-8, "composed-map schwarzian at x = b is " + fmt7(SG));

    auto cls = classify_singularity(sys, 0, 1, to_double(a), lamd);
    t.row(cls.mu == 3, std::string("classified as ") + class_name(cls.mu));

    BifurcationPoint<Rational> ptq;
    ptq.class_mu = 3;
    ptq.x = a;
    ptq.lambda = lam;
    auto rep = verify(sys, ptq);
    t.row(rep.pass, "cross-rotation verification passes");

    return t.all_ok ? 0 : 2;
}

int run_example2() {
    Table t;
    auto sys = PeriodicSystem::from_sources({"-x^4+l1*x^2+x+l2", "l3*tan(x)"}, 3);
    auto pt = solve(sys, 0, 1, 3, 0.08, {-0.04, 0.0, 1.0});
    t.row(pt.converged, "newton converges from (0.08, -0.04, 0, 1)");

    const double ref_x = 0.0797053272;
    const double ref_l[3] = {-0.0400839288, -0.0000428491606, 1.00214734882};
    const double ref_b = 0.0793674674;
    t.row(std::abs(pt.x - ref_x) <= 1e-4, "x = " + fmt7(pt.x));
    for (int i = 0; i < 3; ++i)
        t.row(std::abs(pt.lambda[static_cast<std::size_t>(i)] - ref_l[i]) <= 1e-4,
              "lambda_" + std::to_string(i + 1) + " = " +
                  fmt7(pt.lambda[static_cast<std::size_t>(i)]));

    auto fp = fiber_points(sys, 0, pt.x, pt.lambda, 1, 1e-8);
    double b = fp.points[1];
    t.row(std::abs(b - ref_b) <= 1e-4, "b = " + fmt7(b));

    double f4 = composition_jet(sys, 0, 1, pt.x, pt.lambda, 4).deriv(4).v;
    double g4 = composition_jet(sys, 1, 1, b, pt.lambda, 4).deriv(4).v;
    t.row(std::abs(f4 - (-26.053)) / 26.053 <= 0.02,
          "fourth derivative at a = " + fmt7(f4) + " (reference -26.053)");
    t.row(std::abs(g4 - (-26.722)) / 26.722 <= 0.02,
          "fourth derivative at b = " + fmt7(g4) + " (reference -26.722)");

    auto rep = verify(sys, pt);
    t.row(rep.pass, "cross-rotation verification passes");
    double d0 = rep.rotations[0].det, d1 = rep.rotations[1].det;
    t.row(std::abs(d0 - 2.080126) <= 1e-3, "rotation 0 determinant = " + fmt7(d0));
    t.row(std::abs(d1 - 2.080126) <= 1e-3, "rotation 1 determinant = " + fmt7(d1));
    t.row(std::abs(d0 - d1) <= 1e-8 * std::abs(d0), "determinants agree across rotations");

    double sf = schwarzian(*sys.maps[0], pt.x, pt.lambda);
    double sg = schwarzian(*sys.maps[1], b, pt.lambda);
    t.row(std::abs(sf - (-1.96648)) <= 1e-3, "first map schwarzian = " + fmt7(sf));
    t.row(std::abs(sg - 2.0) <= 1e-9, "second map schwarzian = " + fmt7(sg));
    t.row(schwarzian_product_check(sys, pt) == CheckOutcome::pass,
          "schwarzian product check passes");

    auto cls = classify_singularity(sys, 0, 1, pt.x, pt.lambda);
    t.row(cls.mu == 3, std::string("classified as ") + class_name(cls.mu));

    return t.all_ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"degenerate fixed points of composed periodic map families"};
    app.require_subcommand(1);

    std::string sys_path, point_path, out_path, init_csv, lambda_csv, region_csv;
    int j = 0, k = 1, mu = 0, grid = 16, steps = 8, mu_max = 6;
    double x0 = 0.0;
    SolveConfig scfg;

    auto* c_solve = app.add_subcommand("solve", "newton-solve the degeneracy equations");
    c_solve->add_option("-s,--system", sys_path, "system JSON file")->required();
    c_solve->add_option("-j,--rotation", j, "rotation index");
    c_solve->add_option("-k,--power", k, "composition power");
    c_solve->add_option("--mu", mu, "degeneracy order")->required();
    c_solve->add_option("--init", init_csv, "comma list x,l1,..,lmu")->required();
    c_solve->add_option("-o,--out", out_path, "output path (default stdout)");
    c_solve->add_option("--tol", scfg.residual_tol, "residual tolerance");
    c_solve->add_option("--max-iter", scfg.max_iter, "iteration budget");

    auto* c_verify = app.add_subcommand("verify", "check every rotation of a solved point");
    c_verify->add_option("-s,--system", sys_path, "system JSON file")->required();
    c_verify->add_option("--point", point_path, "solved point JSON file")->required();
    c_verify->add_option("-o,--out", out_path, "output path (default stdout)");

    auto* c_classify = app.add_subcommand("classify", "label the singularity at a point");
    c_classify->add_option("-s,--system", sys_path, "system JSON file")->required();
    c_classify->add_option("-j,--rotation", j, "rotation index");
    c_classify->add_option("-k,--power", k, "composition power");
    c_classify->add_option("-x", x0, "fixed point")->required();
    c_classify->add_option("--lambda", lambda_csv, "comma list l1,..,lmu")->required();
    c_classify->add_option("--mu-max", mu_max, "largest order considered");

    auto* c_trace = app.add_subcommand("trace", "sample fold and cusp strata near a point");
    c_trace->add_option("-s,--system", sys_path, "system JSON file")->required();
    c_trace->add_option("-j,--rotation", j, "rotation index");
    c_trace->add_option("--mu", mu, "degeneracy order")->required();
    c_trace->add_option("--point", point_path, "solved point JSON file")->required();
    c_trace->add_option("--region", region_csv, "comma list lo1,hi1,..,lomu,himu");
    c_trace->add_option("--grid", grid, "cells per slice axis");
    c_trace->add_option("-o,--out", out_path, "output path (default stdout)");

    auto* c_cobweb = app.add_subcommand("cobweb", "orbit staircase and map graphs as CSV");
    c_cobweb->add_option("-s,--system", sys_path, "system JSON file")->required();
    c_cobweb->add_option("-x", x0, "initial point")->required();
    c_cobweb->add_option("--lambda", lambda_csv, "comma list l1,..,lmu")->required();
    c_cobweb->add_option("-n", steps, "orbit steps");
    c_cobweb->add_option("-o,--out", out_path, "output path (default stdout)");

    app.add_subcommand("example1", "built-in polynomial two-map demonstration");
    app.add_subcommand("example2", "built-in tangent-family demonstration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto parse_csv = [](const std::string& text) {
        std::vector<double> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    };

    try {
        if (app.got_subcommand("example1")) return run_example1();
        if (app.got_subcommand("example2")) return run_example2();

        if (app.got_subcommand(c_solve)) {
            auto sys = load_system(sys_path);
            auto init = parse_csv(init_csv);
            if (static_cast<int>(init.size()) != mu + 1)
                throw std::invalid_argument("--init needs exactly mu+1 values");
            double x_init = init[0];
            init.erase(init.begin());
            auto pt = solve(sys, j, k, mu, x_init, init, scfg);
            emit(out_path, to_json(pt).dump(2));
            return pt.converged ? 0 : 2;
        }
        if (app.got_subcommand(c_verify)) {
            auto sys = load_system(sys_path);
            auto pt = point_from_json<double>(json::parse(slurp(point_path)));
            auto rep = verify(sys, pt);
            emit(out_path, to_json(rep).dump(2));
            return rep.pass ? 0 : 2;
        }
        if (app.got_subcommand(c_classify)) {
            auto sys = load_system(sys_path);
            auto cls = classify_singularity(sys, j, k, x0, parse_csv(lambda_csv), mu_max);
            json out;
            out["class_mu"] = cls.mu;
            out["label"] = class_name(cls.mu);
            out["nondeg_value"] = cls.nondeg_value;
            out["sign"] = cls.sign;
            emit(out_path, out.dump(2));
            return 0;
        }
        if (app.got_subcommand(c_trace)) {
            auto sys = load_system(sys_path);
            auto pt = point_from_json<double>(json::parse(slurp(point_path)));
            std::vector<Interval> region;
            if (region_csv.empty()) {
                for (double l : pt.lambda) region.push_back({l - 1e-2, l + 1e-2});
            } else {
                auto vals = parse_csv(region_csv);
                if (static_cast<int>(vals.size()) != 2 * mu)
                    throw std::invalid_argument("--region needs 2*mu values");
                for (int i = 0; i < mu; ++i)
                    region.push_back({vals[static_cast<std::size_t>(2 * i)],
                                      vals[static_cast<std::size_t>(2 * i + 1)]});
            }
            auto cloud = trace_strata(sys, j, mu, pt, region, grid);
            emit(out_path, strata_csv(cloud));
            return 0;
        }
        if (app.got_subcommand(c_cobweb)) {
            auto sys = load_system(sys_path);
            auto data = cobweb_data(sys, x0, parse_csv(lambda_csv), steps);
            emit(out_path, cobweb_csv(data));
            return 0;
        }
    } catch (const perbif::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
