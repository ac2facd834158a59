#pragma once

// Figures in the dual plane: parallel axes, point clouds, boundary conics and
// polygonal-line images of points.  Output is plain SVG text.

#include <pcquad/boundary.hpp>
#include <pcquad/errors.hpp>
#include <pcquad/polynomial.hpp>
#include <pcquad/sampler.hpp>
#include <pcquad/surface.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pcquad {

struct Vertex {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

using Strip = std::vector<Vertex>;

// Polygonal line of a point: vertex (d_i, p_i) on each axis.
inline Strip polyline_image(std::span<const double> point, const AxisSpacing& spacing)
{
    require_spacing_fits(spacing, point.size());
    const auto d = spacing.as_doubles();
    Strip out;
    for (std::size_t i = 0; i < point.size(); ++i)
        out.push_back({d[i], point[i]});
    return out;
}

// Data window plus page size.  Data y grows upward, page y downward.
struct Viewport {
    double x_min = -3.0;
    double x_max = 3.0;
    double y_min = -3.0;
    double y_max = 3.0;
    double width = 640.0;
    double height = 480.0;
    double margin = 32.0;

    void validate() const
    {
        if (!(x_min < x_max) || !(y_min < y_max) || !(width > 2 * margin)
            || !(height > 2 * margin) || !std::isfinite(x_max - x_min)
            || !std::isfinite(y_max - y_min))
            throw UsageError("degenerate viewport");
    }

    bool contains(double x, double y) const
    {
        return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
    }

    double page_x(double x) const
    {
        return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin);
    }

    double page_y(double y) const
    {
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
    }
};

namespace detail {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Symmetric matrix of A x^2 + B xy + C y^2 + D x + E y + F.
inline std::array<std::array<Rational, 3>, 3> conic_matrix(const Polynomial& g)
{
    const Rational A = g.coefficient({2, 0}), B = g.coefficient({1, 1}), C = g.coefficient({0, 2});
    const Rational D = g.coefficient({1, 0}), E = g.coefficient({0, 1}), F = g.coefficient({0, 0});
    return {{{A, B / 2, D / 2}, {B / 2, C, E / 2}, {D / 2, E / 2, F}}};
}

inline Rational det3(const std::array<std::array<Rational, 3>, 3>& m)
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// a x + b y + c = 0 clipped to the window; empty when it misses.
inline Strip clip_line(const std::array<double, 3>& l, const Viewport& vp)
{
    const double a = l[0], b = l[1], c = l[2];
    if (a == 0 && b == 0)
        return {};
    std::vector<Vertex> hits;
    auto push = [&](double x, double y) {
        const double ex = 1e-12 * (vp.x_max - vp.x_min), ey = 1e-12 * (vp.y_max - vp.y_min);
        if (x >= vp.x_min - ex && x <= vp.x_max + ex && y >= vp.y_min - ey && y <= vp.y_max + ey)
            hits.push_back({std::clamp(x, vp.x_min, vp.x_max), std::clamp(y, vp.y_min, vp.y_max)});
    };
    if (b != 0) {
        push(vp.x_min, -(a * vp.x_min + c) / b);
        push(vp.x_max, -(a * vp.x_max + c) / b);
    }
    if (a != 0) {
        push(-(b * vp.y_min + c) / a, vp.y_min);
        push(-(b * vp.y_max + c) / a, vp.y_max);
    }
    if (hits.size() < 2)
        return {};
    // Extreme pair along the line direction (-b, a).
    auto along = [&](const Vertex& v) { return -b * v.x + a * v.y; };
    const auto [lo, hi] = std::minmax_element(hits.begin(), hits.end(), [&](const Vertex& p,
                                                                             const Vertex& q) {
        return along(p) < along(q);
    });
    if (*lo == *hi)
        return {};
    return {*lo, *hi};
}

// Splits a conic with det == 0 into its real lines.
inline std::vector<std::array<double, 3>> split_degenerate(const Mat3& m)
{
    // Rank 1: m = k l l^T.
    Mat3 adj{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row)
            scale = std::max(scale, std::abs(v));
    double adj_max = 0.0;
    for (const auto& row : adj)
        for (double v : row)
            adj_max = std::max(adj_max, std::abs(v));
    if (adj_max <= 1e-14 * scale * scale) {
        int k = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(m[i][i]) > std::abs(m[k][k]))
                k = i;
        return {{m[k][0], m[k][1], m[k][2]}};
    }
    // Rank 2: the intersection point p comes from the adjugate, and
    // m + [p]_x is the rank-1 product of the two lines.
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(adj[i][i]) > std::abs(adj[k][k]))
            k = i;
    if (adj[k][k] > 0)
        return {}; // complex-conjugate lines meeting in one real point
    const double beta = std::sqrt(-adj[k][k]);
    const std::array<double, 3> p{adj[0][k] / beta, adj[1][k] / beta, adj[2][k] / beta};
    Mat3 c = m;
    c[0][1] += p[2];
    c[1][0] -= p[2];
    c[0][2] -= p[1];
    c[2][0] += p[1];
    c[1][2] += p[0];
    c[2][1] -= p[0];
    int bi = 0, bj = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (std::abs(c[i][j]) > std::abs(c[bi][bj])) {
                bi = i;
                bj = j;
            }
    return {{c[bi][0], c[bi][1], c[bi][2]}, {c[0][bj], c[1][bj], c[2][bj]}};
}

inline std::vector<Strip> marching_squares(const NumericPolynomial& g, const Viewport& vp,
                                           std::size_t steps)
{
    const std::size_t nx = steps + 1;
    const double dx = (vp.x_max - vp.x_min) / static_cast<double>(steps);
    const double dy = (vp.y_max - vp.y_min) / static_cast<double>(steps);
    auto xs = [&](std::size_t i) { return i == steps ? vp.x_max : vp.x_min + dx * static_cast<double>(i); };
    auto ys = [&](std::size_t j) { return j == steps ? vp.y_max : vp.y_min + dy * static_cast<double>(j); };
    std::vector<double> v(nx * nx);
    for (std::size_t j = 0; j < nx; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const double p[2] = {xs(i), ys(j)};
            v[j * nx + i] = g(p);
        }
    auto val = [&](std::size_t i, std::size_t j) { return v[j * nx + i]; };
    auto neg = [&](std::size_t i, std::size_t j) { return val(i, j) < 0; };

    // Edge keys: 2 * node + 0 for the edge to the right, + 1 for the edge up.
    auto h_edge = [&](std::size_t i, std::size_t j) { return 2 * (j * nx + i); };
    auto v_edge = [&](std::size_t i, std::size_t j) { return 2 * (j * nx + i) + 1; };
    std::map<std::size_t, Vertex> crossing;
    auto cross = [&](std::size_t key) -> const Vertex& {
        auto it = crossing.find(key);
        if (it != crossing.end())
            return it->second;
        const std::size_t node = key / 2;
        const std::size_t i = node % nx, j = node / nx;
        const bool up = key % 2 == 1;
        const std::size_t i2 = up ? i : i + 1, j2 = up ? j + 1 : j;
        const double a = val(i, j), b = val(i2, j2);
        const double t = a == b ? 0.5 : a / (a - b);
        Vertex p{xs(i) + (xs(i2) - xs(i)) * t, ys(j) + (ys(j2) - ys(j)) * t};
        return crossing.emplace(key, p).first->second;
    };

    std::vector<std::array<std::size_t, 2>> segments;
    for (std::size_t j = 0; j < steps; ++j)
        for (std::size_t i = 0; i < steps; ++i) {
            const bool bl = neg(i, j), br = neg(i + 1, j), tr = neg(i + 1, j + 1), tl = neg(i, j + 1);
            const std::size_t bottom = h_edge(i, j), right = v_edge(i + 1, j), top = h_edge(i, j + 1),
                              left = v_edge(i, j);
            std::vector<std::size_t> edges;
            if (bl != br)
                edges.push_back(bottom);
            if (br != tr)
                edges.push_back(right);
            if (tr != tl)
                edges.push_back(top);
            if (tl != bl)
                edges.push_back(left);
            if (edges.size() == 2) {
                segments.push_back({edges[0], edges[1]});
            } else if (edges.size() == 4) {
                const double c[2] = {xs(i) + 0.5 * dx, ys(j) + 0.5 * dy};
                if ((g(c) < 0) == bl) {
                    segments.push_back({left, top});
                    segments.push_back({bottom, right});
                } else {
                    segments.push_back({left, bottom});
                    segments.push_back({top, right});
                }
            }
        }

    std::map<std::size_t, std::vector<std::size_t>> at_edge;
    for (std::size_t s = 0; s < segments.size(); ++s)
        for (std::size_t e : segments[s])
            at_edge[e].push_back(s);
    std::vector<bool> used(segments.size(), false);
    auto walk = [&](std::size_t s, std::size_t from) {
        Strip strip{cross(from)};
        std::size_t edge = from;
        while (true) {
            used[s] = true;
            const std::size_t next_edge = segments[s][0] == edge ? segments[s][1] : segments[s][0];
            strip.push_back(cross(next_edge));
            edge = next_edge;
            std::optional<std::size_t> next;
            for (std::size_t t : at_edge[edge])
                if (!used[t])
                    next = t;
            if (!next)
                break;
            s = *next;
        }
        return strip;
    };
    std::vector<Strip> strips;
    // Open strips start on the window border, then closed loops.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s])
            continue;
        for (std::size_t e : segments[s])
            if (!used[s] && at_edge[e].size() == 1)
                strips.push_back(walk(s, e));
    }
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s])
            strips.push_back(walk(s, segments[s][0]));
    return strips;
}

} // namespace detail

// Zero set of a polynomial of degree <= 2 in (x, y) inside the window.
// Conics with vanishing determinant are split into lines and clipped exactly;
// everything else goes through marching squares with saddle cells resolved by
// the value at the cell center.
inline std::vector<Strip> conic_trace(const Polynomial& g, const Viewport& vp,
                                      std::size_t steps = 512)
{
    vp.validate();
    if (g.nvars() != 2)
        throw UsageError("conic_trace expects a polynomial in (x, y)");
    if (g.degree() > 2)
        throw UsageError("conic_trace expects degree <= 2");
    if (steps < 2)
        throw UsageError("conic_trace needs at least 2 steps");
    if (g.is_zero())
        throw UsageError("zero polynomial has no curve to trace");
    if (g.is_constant())
        return {};
    const auto m = detail::conic_matrix(g);
    if (g.degree() == 1 || detail::det3(m) == 0) {
        detail::Mat3 md;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                md[i][j] = static_cast<double>(m[i][j]);
        std::vector<std::array<double, 3>> lines;
        if (g.degree() == 1)
            lines.push_back({2 * md[0][2], 2 * md[1][2], md[2][2]});
        else
            lines = detail::split_degenerate(md);
        std::vector<Strip> out;
        for (const auto& l : lines) {
            Strip s = detail::clip_line(l, vp);
            if (!s.empty())
                out.push_back(std::move(s));
        }
        return out;
    }
    return detail::marching_squares(NumericPolynomial(g), vp, steps);
}

inline std::vector<Strip> conic_trace(const BoundaryCurve& curve, const Viewport& vp,
                                      std::size_t steps = 512)
{
    if (curve.kind != BoundaryCurve::Kind::Conic)
        return {};
    return conic_trace(curve.gamma_bar, vp, steps);
}

struct Scene {
    AxisSpacing axes = AxisSpacing::standard(3);
    double axis_y_min = -3.0;
    double axis_y_max = 3.0;
    std::optional<CloudReport> cloud;
    std::optional<BoundaryCurve> curve;
    std::vector<Point> polylines;
    Viewport viewport;
    std::size_t steps = 512;
    std::string title;

    void validate() const
    {
        viewport.validate();
        if (!(axis_y_min < axis_y_max))
            throw UsageError("degenerate axis range");
        for (const auto& p : polylines)
            require_spacing_fits(axes, p.size());
    }
};

namespace detail {

inline std::string fmt3(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000")
        s = "0.000";
    return s;
}

inline std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

inline std::string render_svg(const Scene& scene)
{
    scene.validate();
    const Viewport& vp = scene.viewport;
    using detail::fmt3;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt3(vp.width) + "\" height=\""
         + fmt3(vp.height) + "\" viewBox=\"0 0 " + fmt3(vp.width) + " " + fmt3(vp.height) + "\">\n";
    s += "<!-- window x [" + fmt3(vp.x_min) + ", " + fmt3(vp.x_max) + "] y [" + fmt3(vp.y_min)
         + ", " + fmt3(vp.y_max) + "]; everything outside is clipped -->\n";
    if (!scene.title.empty())
        s += "<title>" + detail::xml_escape(scene.title) + "</title>\n";
    s += "<defs><clipPath id=\"window\"><rect x=\"" + fmt3(vp.margin) + "\" y=\"" + fmt3(vp.margin)
         + "\" width=\"" + fmt3(vp.width - 2 * vp.margin) + "\" height=\""
         + fmt3(vp.height - 2 * vp.margin) + "\"/></clipPath></defs>\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto d = scene.axes.as_doubles();
    s += "<g id=\"axes\" stroke=\"#444444\" stroke-width=\"1\">\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double y0 = std::clamp(scene.axis_y_min, vp.y_min, vp.y_max);
        const double y1 = std::clamp(scene.axis_y_max, vp.y_min, vp.y_max);
        if (d[i] < vp.x_min || d[i] > vp.x_max)
            continue;
        s += "<line x1=\"" + fmt3(vp.page_x(d[i])) + "\" y1=\"" + fmt3(vp.page_y(y0)) + "\" x2=\""
             + fmt3(vp.page_x(d[i])) + "\" y2=\"" + fmt3(vp.page_y(y1)) + "\"/>\n";
        s += "<text x=\"" + fmt3(vp.page_x(d[i])) + "\" y=\"" + fmt3(vp.page_y(y1) - 6)
             + "\" text-anchor=\"middle\" font-size=\"12\" stroke=\"none\">X&#x304;"
             + std::to_string(i + 1) + "</text>\n";
    }
    s += "</g>\n";

    if (!scene.polylines.empty()) {
        s += "<g id=\"polylines\" clip-path=\"url(#window)\" fill=\"none\" stroke=\"#2ca02c\" "
             "stroke-width=\"1\">\n";
        for (const auto& p : scene.polylines) {
            s += "<polyline points=\"";
            bool first = true;
            for (const auto& v : polyline_image(p, scene.axes)) {
                if (!first)
                    s += ' ';
                first = false;
                s += fmt3(vp.page_x(v.x)) + "," + fmt3(vp.page_y(v.y));
            }
            s += "\"/>\n";
        }
        s += "</g>\n";
    }

    if (scene.cloud) {
        std::string dots, hits, arrows;
        std::size_t omitted = 0;
        const double cx = 0.5 * (vp.x_min + vp.x_max), cy = 0.5 * (vp.y_min + vp.y_max);
        const double hx = 0.5 * (vp.x_max - vp.x_min), hy = 0.5 * (vp.y_max - vp.y_min);
        for (const auto& smp : scene.cloud->samples) {
            if (smp.is_ideal) {
                // Direction (eta, xi) pinned to the window edge.
                const double ex = smp.dual.eta, ey = smp.dual.xi;
                const double k = std::min(ex != 0 ? hx / std::abs(ex) : INFINITY,
                                          ey != 0 ? hy / std::abs(ey) : INFINITY);
                if (!std::isfinite(k)) {
                    ++omitted;
                    continue;
                }
                const double px = vp.page_x(cx + k * ex), py = vp.page_y(cy + k * ey);
                const double len = std::hypot(ex, ey);
                const double ux = ex / len, uy = -ey / len; // page coordinates
                arrows += "<path d=\"M" + fmt3(px - 8 * ux) + "," + fmt3(py - 8 * uy) + " L"
                          + fmt3(px) + "," + fmt3(py) + "\"/>\n";
                continue;
            }
            const double x = smp.dual.eta / smp.dual.psi, y = smp.dual.xi / smp.dual.psi;
            if (!vp.contains(x, y)) {
                ++omitted;
                continue;
            }
            const std::string c = "<circle cx=\"" + fmt3(vp.page_x(x)) + "\" cy=\""
                                  + fmt3(vp.page_y(y)) + "\"";
            if (smp.is_boundary)
                hits += c + " r=\"2.5\"/>\n";
            else
                dots += c + " r=\"1.2\"/>\n";
        }
        s += "<!-- " + std::to_string(omitted) + " cloud points outside the window omitted -->\n";
        s += "<g id=\"cloud\" clip-path=\"url(#window)\" fill=\"#1f77b4\" fill-opacity=\"0.5\">\n"
             + dots + "</g>\n";
        s += "<g id=\"contact\" clip-path=\"url(#window)\" fill=\"#d62728\">\n" + hits + "</g>\n";
        if (!arrows.empty())
            s += "<g id=\"ideal\" stroke=\"#9467bd\" stroke-width=\"1.5\" fill=\"none\">\n" + arrows
                 + "</g>\n";
    }

    if (scene.curve && scene.curve->kind == BoundaryCurve::Kind::Conic) {
        s += "<g id=\"boundary\" clip-path=\"url(#window)\" fill=\"none\" stroke=\"#000000\" "
             "stroke-width=\"1.5\">\n";
        for (const auto& strip : conic_trace(*scene.curve, vp, scene.steps)) {
            s += "<path d=\"";
            for (std::size_t i = 0; i < strip.size(); ++i) {
                s += i == 0 ? "M" : " L";
                s += fmt3(vp.page_x(strip[i].x)) + "," + fmt3(vp.page_y(strip[i].y));
            }
            s += "\"/>\n";
        }
        s += "</g>\n";
    } else if (scene.curve && scene.curve->plane_point) {
        const auto& p = *scene.curve->plane_point;
        if (p.psi != 0) {
            const double x = static_cast<double>(p.eta / p.psi), y = static_cast<double>(p.xi / p.psi);
            if (vp.contains(x, y))
                s += "<circle id=\"plane-point\" cx=\"" + fmt3(vp.page_x(x)) + "\" cy=\""
                     + fmt3(vp.page_y(y)) + "\" r=\"4\" fill=\"#000000\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

} // namespace pcquad
