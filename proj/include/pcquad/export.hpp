#pragma once

// JSON and CSV serialization of boundary records, sample clouds and scenes.

#include <pcquad/boundary.hpp>
#include <pcquad/parse.hpp>
#include <pcquad/render.hpp>
#include <pcquad/sampler.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ostream>
#include <string>

namespace pcquad {

inline nlohmann::json spacing_json(const AxisSpacing& spacing)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& d : spacing.positions())
        out.push_back(format_rational(d));
    return out;
}

inline nlohmann::json boundary_json(const BoundaryCurve& curve)
{
    const auto surface_names = VariableNames::surface(curve.F.nvars());
    nlohmann::json j;
    j["surface"] = format_polynomial(curve.F, surface_names);
    j["spacing"] = spacing_json(curve.spacing);
    if (curve.kind == BoundaryCurve::Kind::PlanePoint) {
        const auto& p = *curve.plane_point;
        j["kind"] = "plane-point";
        j["boundary"] = nullptr;
        j["point"] = {format_rational(p.eta), format_rational(p.xi), format_rational(p.psi)};
        j["sigma_prime"] = nullptr;
        j["ideal_factors"] = nlohmann::json::array();
        j["gamma"] = {{"F", j["surface"]}, {"sigma_prime", nullptr}};
        return j;
    }
    j["kind"] = "conic";
    j["boundary"] = format_polynomial(curve.gamma_bar, VariableNames::plane());
    j["homogeneous"] = format_polynomial(curve.homogeneous, VariableNames::homogeneous());
    j["sigma_prime"] = format_polynomial(curve.sigma_prime, surface_names);
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& f : curve.ideal_factors)
        factors.push_back({{"factor", format_polynomial(f.factor, VariableNames::homogeneous())},
                           {"multiplicity", f.multiplicity},
                           {"at_infinity", f.at_infinity}});
    j["ideal_factors"] = factors;
    j["gamma"] = {{"F", j["surface"]}, {"sigma_prime", j["sigma_prime"]}};
    return j;
}

namespace detail {

inline std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_cloud_csv(std::ostream& out, const CloudReport& report)
{
    const std::size_t n = report.F.nvars();
    for (std::size_t i = 0; i < n; ++i)
        out << 'x' << i + 1 << ',';
    out << "eta,xi,psi,jac,is_boundary,is_ideal\n";
    for (const auto& s : report.samples) {
        for (double x : s.point)
            out << detail::fmt17(x) << ',';
        out << detail::fmt17(s.dual.eta) << ',' << detail::fmt17(s.dual.xi) << ','
            << detail::fmt17(s.dual.psi) << ',' << detail::fmt17(s.jac) << ','
            << (s.is_boundary ? 1 : 0) << ',' << (s.is_ideal ? 1 : 0) << '\n';
    }
}

inline nlohmann::json validation_json(const ValidationSummary& v)
{
    nlohmann::json failing = nlohmann::json::array();
    for (const auto& [index, r] : v.failing_hits)
        failing.push_back({{"sample", index}, {"residual", r}});
    return {{"pass", v.pass},
            {"hits", v.n_hits},
            {"non_hits", v.n_nonhits},
            {"non_hits_off_curve", v.n_nonhits_off_curve},
            {"max_hit_residual", v.max_hit_residual},
            {"non_hit_off_fraction", v.nonhit_off_fraction},
            {"failing_hits", failing}};
}

inline nlohmann::json scene_json(const Scene& scene)
{
    const Viewport& vp = scene.viewport;
    nlohmann::json j;
    j["axes"] = {{"spacing", spacing_json(scene.axes)},
                 {"y_min", scene.axis_y_min},
                 {"y_max", scene.axis_y_max}};
    j["viewport"] = {{"x_min", vp.x_min}, {"x_max", vp.x_max}, {"y_min", vp.y_min},
                     {"y_max", vp.y_max}, {"width", vp.width}, {"height", vp.height},
                     {"margin", vp.margin}};
    j["steps"] = scene.steps;
    if (scene.cloud) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& s : scene.cloud->samples)
            pts.push_back({{"dual", {s.dual.eta, s.dual.xi, s.dual.psi}},
                           {"boundary", s.is_boundary},
                           {"ideal", s.is_ideal}});
        j["cloud"] = pts;
    }
    if (scene.curve) {
        j["curve"] = boundary_json(*scene.curve);
        nlohmann::json strips = nlohmann::json::array();
        for (const auto& strip : conic_trace(*scene.curve, vp, scene.steps)) {
            nlohmann::json s = nlohmann::json::array();
            for (const auto& v : strip)
                s.push_back({v.x, v.y});
            strips.push_back(s);
        }
        j["strips"] = strips;
    }
    nlohmann::json lines = nlohmann::json::array();
    for (const auto& p : scene.polylines)
        lines.push_back(p);
    j["polylines"] = lines;
    return j;
}

} // namespace pcquad
