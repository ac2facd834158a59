#pragma once

// Command-line front end.  run() is kept separate from main() so the tests
// can drive it with in-memory streams.

#include <pcquad/boundary.hpp>
#include <pcquad/export.hpp>
#include <pcquad/parse.hpp>
#include <pcquad/render.hpp>
#include <pcquad/sampler.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace pcquad::cli {

struct RunConfig {
    std::string command;
    std::string surface;
    std::string surface_file;
    std::string spacing;
    std::string domain;
    std::string mode = "builtin-param";
    std::size_t count = 1000;
    std::uint64_t seed = 1;
    double tol_contact = 1e-9;
    double tol_curve = 1e-6;
    std::string out;
    std::string format;
    std::string viewport;
    std::size_t steps = 512;
    std::string config;
};

struct PaperCase {
    const char* name;
    const char* surface;
    const char* golden; // boundary in (x, y)
};

inline constexpr PaperCase kPaperCases[] = {
    {"saddle", "z = -(x/2)^2 + (y/2)^2", "16 - 16x - 4y + y^2 - 4x*y + 4x^2"},
    {"sphere", "x^2+y^2+z^2=2", "x^2 - 4x*y + y^2 + 1"},
    {"hyperboloid-1", "x^2+y^2-z^2=1", "x^2 - 4x*y + y^2 - 1"},
    {"hyperboloid-2", "x^2-4y^2+2z^2=-2", "x^2 - 2x*y + 4y^2 - 1"},
};

namespace detail {

inline std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

inline double parse_double(const std::string& s, const char* what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("bad number in ") + what + ": '" + s + "'");
    }
}

// "lo:hi" or "lo:hi,lo:hi,...".
inline std::vector<Interval> parse_intervals(const std::string& text, const char* what)
{
    std::vector<Interval> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw UsageError(std::string(what) + " intervals look like lo:hi");
        out.push_back({parse_double(trim(item.substr(0, colon)), what),
                       parse_double(trim(item.substr(colon + 1)), what)});
    }
    if (out.empty())
        throw UsageError(std::string("empty ") + what);
    return out;
}

inline SampleMode parse_mode(const std::string& m)
{
    if (m == "builtin-param")
        return SampleMode::BuiltinParam;
    if (m == "implicit-scan")
        return SampleMode::ImplicitScan;
    if (m == "explicit-grid")
        return SampleMode::ExplicitGrid;
    throw UsageError("unknown sampling mode '" + m + "'");
}

inline std::string read_file(const std::string& path)
{
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    ss << in.rdbuf();
    return ss.str();
}

// Config values fill in whatever was not given on the command line.
inline void apply_config(RunConfig& cfg, const CLI::App& sub)
{
    if (cfg.config.empty())
        return;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(cfg.config));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config " + cfg.config + ": " + e.what());
    }
    if (!j.is_object())
        throw UsageError("config must be a JSON object");
    auto take = [&](const char* key, const char* flag, auto& field) {
        if (j.contains(key) && sub.count(flag) == 0) {
            try {
                j.at(key).get_to(field);
            } catch (const nlohmann::json::exception&) {
                throw UsageError(std::string("config key '") + key + "' has the wrong type");
            }
        }
    };
    take("surface", "--surface", cfg.surface);
    take("surface_file", "--surface-file", cfg.surface_file);
    take("spacing", "--spacing", cfg.spacing);
    take("domain", "--domain", cfg.domain);
    take("mode", "--mode", cfg.mode);
    take("count", "--count", cfg.count);
    take("seed", "--seed", cfg.seed);
    take("tol_contact", "--tol-contact", cfg.tol_contact);
    take("tol_curve", "--tol-curve", cfg.tol_curve);
    take("out", "--out", cfg.out);
    take("format", "--format", cfg.format);
    take("viewport", "--viewport", cfg.viewport);
    take("steps", "--steps", cfg.steps);
}

inline QuadricSurface load_surface(const RunConfig& cfg)
{
    if (!cfg.surface.empty() && !cfg.surface_file.empty())
        throw UsageError("give either --surface or --surface-file, not both");
    std::string text = cfg.surface;
    if (!cfg.surface_file.empty())
        text = trim(read_file(cfg.surface_file));
    if (text.empty())
        throw UsageError("a surface is required (--surface or --surface-file)");
    return parse_surface(text);
}

inline AxisSpacing load_spacing(const RunConfig& cfg, std::size_t n)
{
    AxisSpacing s = cfg.spacing.empty() ? AxisSpacing::standard(n) : parse_spacing(cfg.spacing);
    require_spacing_fits(s, n);
    return s;
}

inline SampleConfig sample_config(const RunConfig& cfg)
{
    SampleConfig sc;
    sc.mode = parse_mode(cfg.mode);
    if (!cfg.domain.empty())
        sc.domain = parse_intervals(cfg.domain, "domain");
    sc.count = cfg.count;
    sc.seed = cfg.seed;
    sc.tol_contact = cfg.tol_contact;
    sc.tol_curve = cfg.tol_curve;
    return sc;
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text)
{
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f)
        throw UsageError("cannot write " + cfg.out);
    f << text;
}

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed)
{
    for (const char* a : allowed)
        if (cfg.format == a)
            return;
    throw UsageError("format '" + cfg.format + "' is not available for " + cfg.command);
}

// Window covering the axes and the bulk (2nd to 98th percentile) of the cloud.
inline Viewport fit_viewport(const AxisSpacing& axes, const CloudReport* cloud)
{
    const auto d = axes.as_doubles();
    std::vector<double> xs(d.begin(), d.end()), ys{-1.0, 1.0};
    if (cloud) {
        std::vector<double> cx, cy;
        for (const auto& s : cloud->samples)
            if (!s.is_ideal) {
                cx.push_back(s.dual.eta / s.dual.psi);
                cy.push_back(s.dual.xi / s.dual.psi);
            }
        for (auto* v : {&cx, &cy}) {
            if (v->empty())
                continue;
            std::sort(v->begin(), v->end());
            auto& dst = v == &cx ? xs : ys;
            dst.push_back((*v)[v->size() * 2 / 100]);
            dst.push_back((*v)[v->size() * 98 / 100]);
        }
    }
    Viewport vp;
    const auto [x0, x1] = std::minmax_element(xs.begin(), xs.end());
    const auto [y0, y1] = std::minmax_element(ys.begin(), ys.end());
    const double px = 0.1 * (*x1 - *x0) + 0.5, py = 0.1 * (*y1 - *y0) + 0.5;
    vp.x_min = *x0 - px;
    vp.x_max = *x1 + px;
    vp.y_min = *y0 - py;
    vp.y_max = *y1 + py;
    return vp;
}

inline int cmd_boundary(const RunConfig& cfg, std::ostream& out)
{
    require_format(cfg, {"json", "text"});
    const QuadricSurface surface = load_surface(cfg);
    const BoundaryCurve curve = boundary_curve(surface, load_spacing(cfg, surface.nvars()));
    if (cfg.format == "text") {
        std::string line;
        if (curve.kind == BoundaryCurve::Kind::Conic) {
            line = format_polynomial(curve.gamma_bar, VariableNames::plane());
        } else {
            const auto& p = *curve.plane_point;
            line = "point (" + format_rational(p.eta) + " : " + format_rational(p.xi) + " : "
                   + format_rational(p.psi) + ")";
        }
        emit(cfg, out, line + "\n");
    } else {
        emit(cfg, out, boundary_json(curve).dump(2) + "\n");
    }
    return 0;
}

inline CloudReport build_cloud(const RunConfig& cfg, const QuadricSurface& surface,
                               const AxisSpacing& spacing, std::ostream& err)
{
    const SampleConfig sc = sample_config(cfg);
    const SampleSet set = sample_surface(surface, sc);
    for (const auto& w : set.warnings)
        err << "warning: " << w << "\n";
    CloudReport report = dual_cloud(surface, set.points, spacing, sc);
    for (const auto& w : report.warnings)
        err << "warning: " << w << "\n";
    err << "samples: " << report.samples.size() << ", contact hits: "
        << report.boundary_hits.size() << ", ideal: " << report.n_ideal
        << ", singular: " << report.n_singular << "\n";
    return report;
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    require_format(cfg, {"csv"});
    const QuadricSurface surface = load_surface(cfg);
    const AxisSpacing spacing = load_spacing(cfg, surface.nvars());
    const CloudReport report = build_cloud(cfg, surface, spacing, err);
    std::ostringstream csv;
    write_cloud_csv(csv, report);
    emit(cfg, out, csv.str());
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    require_format(cfg, {"json", "text"});
    const QuadricSurface surface = load_surface(cfg);
    const AxisSpacing spacing = load_spacing(cfg, surface.nvars());
    const BoundaryCurve curve = boundary_curve(surface, spacing);
    CloudReport report = build_cloud(cfg, surface, spacing, err);
    const ValidationSummary v = validate_boundary(report, curve, sample_config(cfg));
    if (cfg.format == "text") {
        std::ostringstream s;
        s << (v.pass ? "PASS" : "FAIL") << " hits=" << v.n_hits
          << " max_residual=" << v.max_hit_residual << " non_hits_off_curve="
          << v.nonhit_off_fraction << "\n";
        emit(cfg, out, s.str());
    } else {
        nlohmann::json j = validation_json(v);
        j["boundary"] = format_polynomial(curve.gamma_bar, VariableNames::plane());
        emit(cfg, out, j.dump(2) + "\n");
    }
    return v.pass ? 0 : 1;
}

inline int cmd_render(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    require_format(cfg, {"svg", "json"});
    const QuadricSurface surface = load_surface(cfg);
    const AxisSpacing spacing = load_spacing(cfg, surface.nvars());
    Scene scene;
    scene.axes = spacing;
    scene.steps = cfg.steps;
    scene.title = format_polynomial(surface.F()) + " = 0";
    if (surface.nvars() == 3)
        scene.curve = boundary_curve(surface, spacing);
    if (!surface.is_plane())
        scene.cloud = build_cloud(cfg, surface, spacing, err);
    if (cfg.viewport.empty()) {
        scene.viewport = fit_viewport(spacing, scene.cloud ? &*scene.cloud : nullptr);
    } else {
        const auto iv = parse_intervals(cfg.viewport, "viewport");
        if (iv.size() != 2)
            throw UsageError("viewport is xmin:xmax,ymin:ymax");
        scene.viewport.x_min = iv[0].lo;
        scene.viewport.x_max = iv[0].hi;
        scene.viewport.y_min = iv[1].lo;
        scene.viewport.y_max = iv[1].hi;
    }
    scene.axis_y_min = scene.viewport.y_min;
    scene.axis_y_max = scene.viewport.y_max;
    if (cfg.format == "json")
        emit(cfg, out, scene_json(scene).dump(2) + "\n");
    else
        emit(cfg, out, render_svg(scene));
    return 0;
}

inline int cmd_paper_suite(const RunConfig& cfg, std::ostream& out)
{
    require_format(cfg, {"text"});
    std::string report;
    bool all = true;
    for (const auto& c : kPaperCases) {
        const Polynomial golden =
            normalize(parse_polynomial(c.golden, VariableNames::plane()));
        std::string line;
        try {
            const BoundaryCurve curve =
                boundary_curve(parse_surface(c.surface), AxisSpacing::standard(3));
            const bool ok = curve.gamma_bar == golden;
            all = all && ok;
            line = std::string(ok ? "PASS " : "FAIL ") + c.name + ": "
                   + format_polynomial(curve.gamma_bar, VariableNames::plane());
            if (!ok)
                line += " (expected " + format_polynomial(golden, VariableNames::plane()) + ")";
        } catch (const Error& e) {
            all = false;
            line = std::string("FAIL ") + c.name + ": " + e.what();
        }
        report += line + "\n";
    }
    emit(cfg, out, report);
    return all ? 0 : 1;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Dual regions of quadric surfaces in parallel coordinates", "pcquad"};
    app.require_subcommand(1);
    RunConfig cfg;

    struct Sub {
        const char* name;
        const char* help;
        const char* default_format;
    };
    const Sub subs[] = {
        {"boundary", "exact boundary conic of the dual region", "json"},
        {"sample", "sample the surface and write the dual point cloud", "csv"},
        {"verify", "check the boundary conic against sampled contact points", "text"},
        {"render", "draw axes, dual cloud and boundary", "svg"},
        {"paper-suite", "run the four reference surfaces against stored conics", "text"},
    };
    std::vector<CLI::App*> handles;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        handles.push_back(sub);
        sub->add_option("--config", cfg.config, "JSON file with default flag values");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "output format");
        if (std::string(s.name) == "paper-suite")
            continue;
        sub->add_option("--surface", cfg.surface, "surface equation, e.g. \"x^2+y^2+z^2=2\"");
        sub->add_option("--surface-file", cfg.surface_file, "file holding the equation, - for stdin");
        sub->add_option("--spacing", cfg.spacing, "axis positions, e.g. 0,1,2 or 0,1/2,3");
        if (std::string(s.name) == "boundary")
            continue;
        sub->add_option("--domain", cfg.domain, "sampling box lo:hi[,lo:hi...]");
        sub->add_option("--mode", cfg.mode, "builtin-param, implicit-scan or explicit-grid");
        sub->add_option("--count", cfg.count, "number of samples");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--tol-contact", cfg.tol_contact, "contact detection tolerance");
        sub->add_option("--tol-curve", cfg.tol_curve, "boundary residual tolerance");
        if (std::string(s.name) == "render") {
            sub->add_option("--viewport", cfg.viewport, "window xmin:xmax,ymin:ymax");
            sub->add_option("--steps", cfg.steps, "marching-squares resolution");
        }
    }

    std::vector<const char*> argv{"pcquad"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < handles.size(); ++i) {
            if (!handles[i]->parsed())
                continue;
            cfg.command = subs[i].name;
            detail::apply_config(cfg, *handles[i]);
            if (cfg.format.empty())
                cfg.format = subs[i].default_format;
            if (cfg.command == "boundary")
                return detail::cmd_boundary(cfg, out);
            if (cfg.command == "sample")
                return detail::cmd_sample(cfg, out, err);
            if (cfg.command == "verify")
                return detail::cmd_verify(cfg, out, err);
            if (cfg.command == "render")
                return detail::cmd_render(cfg, out, err);
            return detail::cmd_paper_suite(cfg, out);
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace pcquad::cli
