#include <pcquad/boundary.hpp>
#include <pcquad/export.hpp>
#include <pcquad/parse.hpp>
#include <pcquad/render.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

using namespace pcquad;

namespace {

Polynomial plane(const char* text) { return parse_polynomial(text, VariableNames::plane()); }

Viewport window(double lo, double hi)
{
    Viewport vp;
    vp.x_min = vp.y_min = lo;
    vp.x_max = vp.y_max = hi;
    return vp;
}

std::size_t count(const std::string& s, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1))
        ++n;
    return n;
}

Scene saddle_scene()
{
    const QuadricSurface s = parse_surface("z = -(x/2)^2 + (y/2)^2");
    const AxisSpacing spacing = AxisSpacing::standard(3);
    SampleConfig cfg;
    cfg.count = 300;
    cfg.seed = 42;
    cfg.domain = {{-3, 3}};
    Scene scene;
    scene.axes = spacing;
    scene.curve = boundary_curve(s, spacing);
    scene.cloud = dual_cloud(s, sample_surface(s, cfg).points, spacing, cfg);
    scene.viewport.x_min = -2;
    scene.viewport.x_max = 6;
    scene.viewport.y_min = -4;
    scene.viewport.y_max = 8;
    scene.axis_y_min = -4;
    scene.axis_y_max = 8;
    scene.steps = 96;
    scene.polylines = {{0.0, 0.0, 0.0}, {1.0, -1.0, 0.0}};
    scene.title = "saddle";
    return scene;
}

} // namespace

TEST(PolylineImage, Examples)
{
    const AxisSpacing unit = AxisSpacing::standard(3);
    const std::vector<double> p{1, 2, 3};
    EXPECT_EQ(polyline_image(p, unit), (Strip{{0, 1}, {1, 2}, {2, 3}}));
    const std::vector<double> o{0, 0, 0};
    EXPECT_EQ(polyline_image(o, unit), (Strip{{0, 0}, {1, 0}, {2, 0}}));
    const std::vector<double> one{5};
    EXPECT_EQ(polyline_image(one, AxisSpacing::standard(1)), (Strip{{0, 5}}));
    EXPECT_THROW(polyline_image(one, unit), UsageError);
}

TEST(ConicTrace, HyperbolaHasTwoBranches)
{
    const Polynomial g = plane("x^2 - 4x*y + y^2 + 1");
    const Viewport vp = window(-3, 3);
    const auto strips = conic_trace(g, vp, 256);
    ASSERT_EQ(strips.size(), 2u);
    // Cell size times the largest gradient over the window bounds |g| on the trace.
    const double h = 6.0 / 256, lipschitz = 2 * 3 + 4 * 3 + 2 * 3;
    for (const auto& s : strips) {
        EXPECT_GT(s.size(), 10u);
        for (const auto& v : s) {
            const double val = v.x * v.x - 4 * v.x * v.y + v.y * v.y + 1;
            EXPECT_LE(std::abs(val), lipschitz * h);
        }
        // Open branches start and end on the window border.
        auto on_border = [&](const Vertex& v) {
            return v.x == -3 || v.x == 3 || v.y == -3 || v.y == 3
                   || std::abs(std::abs(v.x) - 3) < 1e-12 || std::abs(std::abs(v.y) - 3) < 1e-12;
        };
        EXPECT_TRUE(on_border(s.front()));
        EXPECT_TRUE(on_border(s.back()));
    }
}

TEST(ConicTrace, EllipseIsClosedLoop)
{
    const auto strips = conic_trace(plane("x^2 + 4y^2 + 2x - 3"), window(-4, 4), 200);
    ASSERT_EQ(strips.size(), 1u);
    EXPECT_EQ(strips[0].front(), strips[0].back());
}

TEST(ConicTrace, EmptyRealLocus)
{
    EXPECT_TRUE(conic_trace(plane("x^2 + y^2 + 1"), window(-3, 3)).empty());
    EXPECT_TRUE(conic_trace(plane("x^2 + y^2"), window(-3, 3)).empty());
    EXPECT_TRUE(conic_trace(plane("(x - 10)^2 + y^2 - 1"), window(-3, 3)).empty());
}

TEST(ConicTrace, LinePairIsTwoStraightStrips)
{
    const auto strips = conic_trace(plane("x*y"), window(-3, 3));
    ASSERT_EQ(strips.size(), 2u);
    for (const auto& s : strips) {
        ASSERT_EQ(s.size(), 2u);
        EXPECT_TRUE((s[0].x == 0 && s[1].x == 0) || (s[0].y == 0 && s[1].y == 0));
    }
}

TEST(ConicTrace, ParallelAndDoubleLines)
{
    auto strips = conic_trace(plane("x^2 - 1"), window(-3, 3));
    ASSERT_EQ(strips.size(), 2u);
    for (const auto& s : strips) {
        ASSERT_EQ(s.size(), 2u);
        EXPECT_NEAR(std::abs(s[0].x), 1.0, 1e-12);
        EXPECT_NEAR(s[0].x, s[1].x, 1e-12);
    }
    strips = conic_trace(plane("(x - 2y + 1)^2"), window(-3, 3));
    ASSERT_EQ(strips.size(), 1u);
    for (const auto& v : strips[0])
        EXPECT_NEAR(v.x - 2 * v.y + 1, 0.0, 1e-12);
    strips = conic_trace(plane("x + y"), window(-3, 3));
    ASSERT_EQ(strips.size(), 1u);
}

TEST(ConicTrace, Preconditions)
{
    EXPECT_THROW(conic_trace(plane("x^3"), window(-1, 1)), UsageError);
    EXPECT_THROW(conic_trace(Polynomial(2), window(-1, 1)), UsageError);
    Viewport bad = window(1, 1);
    EXPECT_THROW(conic_trace(plane("x"), bad), UsageError);
}

TEST(RenderSvg, AxesOnly)
{
    Scene scene;
    const std::string svg = render_svg(scene);
    EXPECT_EQ(count(svg, "<line "), 3u);
    const Viewport& vp = scene.viewport;
    for (double d : {0.0, 1.0, 2.0}) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "x1=\"%.3f\"", vp.page_x(d));
        EXPECT_NE(svg.find(buf), std::string::npos);
    }
    EXPECT_NE(svg.find("X&#x304;1"), std::string::npos);
    EXPECT_NE(svg.find("X&#x304;3"), std::string::npos);
    EXPECT_EQ(svg.find("<circle"), std::string::npos);
}

TEST(RenderSvg, ConicOnly)
{
    Scene scene;
    scene.curve = boundary_curve(parse_surface("z = -(x/2)^2 + (y/2)^2"), AxisSpacing::standard(3));
    scene.viewport = window(-2, 6);
    const std::string svg = render_svg(scene);
    EXPECT_NE(svg.find("<g id=\"boundary\""), std::string::npos);
    EXPECT_NE(svg.find("<path d=\"M"), std::string::npos);
    EXPECT_EQ(svg.find("id=\"cloud\""), std::string::npos);
}

TEST(RenderSvg, DeterministicAndClipped)
{
    const Scene scene = saddle_scene();
    const std::string a = render_svg(scene);
    EXPECT_EQ(a, render_svg(saddle_scene()));
    const Viewport& vp = scene.viewport;
    const std::regex circle("<circle cx=\"([-0-9.]+)\" cy=\"([-0-9.]+)\"");
    std::size_t n = 0;
    for (auto it = std::sregex_iterator(a.begin(), a.end(), circle); it != std::sregex_iterator(); ++it) {
        const double cx = std::stod((*it)[1]), cy = std::stod((*it)[2]);
        EXPECT_GE(cx, vp.margin - 1e-3);
        EXPECT_LE(cx, vp.width - vp.margin + 1e-3);
        EXPECT_GE(cy, vp.margin - 1e-3);
        EXPECT_LE(cy, vp.height - vp.margin + 1e-3);
        ++n;
    }
    EXPECT_GT(n, 0u);
    EXPECT_NE(a.find("cloud points outside the window omitted"), std::string::npos);
}

TEST(RenderSvg, IdealPointsBecomeArrows)
{
    const QuadricSurface s = parse_surface("x^2+y^2+z^2=2");
    Scene scene;
    SampleConfig cfg;
    scene.cloud = dual_cloud(s, {{1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}}, AxisSpacing::standard(3), cfg);
    const std::string svg = render_svg(scene);
    EXPECT_NE(svg.find("<g id=\"ideal\""), std::string::npos);
}

TEST(RenderSvg, GoldenSaddleScene)
{
    const std::string svg = render_svg(saddle_scene());
    const std::string path = std::string(PCQUAD_GOLDEN_DIR) + "/saddle_scene.svg";
    if (std::getenv("PCQUAD_UPDATE_GOLDEN")) {
        std::ofstream(path, std::ios::binary) << svg;
        GTEST_SKIP() << "golden rewritten";
    }
    std::ifstream in(path, std::ios::binary);
    ASSERT_TRUE(in) << "missing golden file " << path;
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(svg, ss.str());
}

TEST(SceneJson, ContainsStripsAndCurve)
{
    const auto j = scene_json(saddle_scene());
    EXPECT_EQ(j["curve"]["boundary"], "4*x^2 - 4*x*y + y^2 - 16*x - 4*y + 16");
    EXPECT_FALSE(j["strips"].empty());
    EXPECT_EQ(j["cloud"].size(), saddle_scene().cloud->samples.size());
    EXPECT_EQ(j["polylines"].size(), 2u);
}
