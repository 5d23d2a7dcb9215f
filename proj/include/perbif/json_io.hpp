// JSON (de)serialization of systems, solved points, and invariance reports.
// Rational values travel as "p/q" strings; doubles as JSON numbers.

#ifndef PERBIF_JSON_IO_HPP
#define PERBIF_JSON_IO_HPP

#include <json.hpp>

#include "perbif/invariance.hpp"

namespace perbif {

using nlohmann::json;

inline json to_json(const PeriodicSystem& s) {
    json j;
    j["maps"] = s.sources;
    j["mu"] = s.mu;
    if (s.fibers) {
        json f = json::array();
        for (const auto& I : *s.fibers) f.push_back(json::array({I.lo, I.hi}));
        j["fibers"] = f;
    }
    return j;
}

inline PeriodicSystem system_from_json(const json& j) {
    if (!j.contains("maps") || !j.contains("mu"))
        throw std::invalid_argument("system JSON needs \"maps\" and \"mu\"");
    std::vector<std::string> maps = j.at("maps").get<std::vector<std::string>>();
    int mu = j.at("mu").get<int>();
    std::optional<std::vector<Interval>> fibers;
    if (j.contains("fibers")) {
        std::vector<Interval> f;
        for (const auto& e : j.at("fibers"))
            f.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
        fibers = std::move(f);
    }
    return PeriodicSystem::from_sources(std::move(maps), mu, std::move(fibers));
}

inline json scalar_to_json(double v) { return v; }
inline json scalar_to_json(const Rational& v) { return v.str(); }

inline void scalar_from_json(const json& j, double& out) { out = j.get<double>(); }
inline void scalar_from_json(const json& j, Rational& out) {
    if (j.is_string())
        out = Rational(j.get<std::string>());
    else
        out = rational_from_double(j.get<double>());
}

template <class S>
json to_json(const BifurcationPoint<S>& p) {
    json j;
    j["rotation"] = p.j;
    j["power"] = p.k;
    j["class_mu"] = p.class_mu;
    j["x"] = scalar_to_json(p.x);
    json lam = json::array();
    for (const auto& l : p.lambda) lam.push_back(scalar_to_json(l));
    j["lambda"] = lam;
    j["residual_norm"] = p.residual_norm;
    j["nondeg_value"] = scalar_to_json(p.nondeg_value);
    j["transversality_det"] = scalar_to_json(p.transversality_det);
    j["converged"] = p.converged;
    j["iterations"] = p.iterations;
    return j;
}

template <class S>
BifurcationPoint<S> point_from_json(const json& j) {
    BifurcationPoint<S> p;
    p.j = j.at("rotation").get<int>();
    p.k = j.at("power").get<int>();
    p.class_mu = j.at("class_mu").get<int>();
    scalar_from_json(j.at("x"), p.x);
    for (const auto& e : j.at("lambda")) {
        S v;
        scalar_from_json(e, v);
        p.lambda.push_back(v);
    }
    if (j.contains("residual_norm")) p.residual_norm = j.at("residual_norm").get<double>();
    if (j.contains("nondeg_value")) scalar_from_json(j.at("nondeg_value"), p.nondeg_value);
    if (j.contains("transversality_det"))
        scalar_from_json(j.at("transversality_det"), p.transversality_det);
    if (j.contains("converged")) p.converged = j.at("converged").get<bool>();
    if (j.contains("iterations")) p.iterations = j.at("iterations").get<int>();
    return p;
}

template <class S>
json to_json(const InvarianceReport<S>& r) {
    json j;
    j["mu"] = r.mu;
    j["power"] = r.k;
    j["pass"] = r.pass;
    json rots = json::array();
    for (const auto& rc : r.rotations) {
        json e;
        e["rotation"] = rc.m;
        e["fixed_point"] = scalar_to_json(rc.a);
        json res = json::array();
        for (const auto& v : rc.residual) res.push_back(scalar_to_json(v));
        e["residual"] = res;
        e["nondeg_value"] = scalar_to_json(rc.nondeg);
        e["transversality_det"] = scalar_to_json(rc.det);
        e["predicted_factor"] = scalar_to_json(rc.predicted_factor);
        e["ratio_defect"] = rc.ratio_defect;
        rots.push_back(e);
    }
    j["rotations"] = rots;
    return j;
}

} // namespace perbif

#endif
