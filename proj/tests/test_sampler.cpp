#include <pcquad/boundary.hpp>
#include <pcquad/parse.hpp>
#include <pcquad/sampler.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace pcquad;

namespace {

const AxisSpacing kUnit = AxisSpacing::standard(3);

const char* const kSurfaces[] = {"z = -(x/2)^2 + (y/2)^2", "x^2+y^2+z^2=2", "x^2+y^2-z^2=1",
                                 "x^2-4y^2+2z^2=-2"};

SampleConfig config(std::size_t count, std::uint64_t seed = 42)
{
    SampleConfig c;
    c.count = count;
    c.seed = seed;
    return c;
}

} // namespace

TEST(SampleRng, ReproducibleDraws)
{
    SampleRng a(7), b(7);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.uniform01(), b.uniform01());
        EXPECT_EQ(a.normal(), b.normal());
    }
    SampleRng c(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform01();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(SampleSurface, SaddleExplicitGrid)
{
    SampleConfig cfg = config(25);
    cfg.mode = SampleMode::ExplicitGrid;
    cfg.domain = {{-2, 2}, {-2, 2}, {-2, 2}};
    const SampleSet set = sample_surface(parse_surface("z = -(x/2)^2 + (y/2)^2"), cfg);
    ASSERT_EQ(set.points.size(), 25u);
    for (const auto& p : set.points)
        EXPECT_NEAR(p[2], (p[1] * p[1] - p[0] * p[0]) / 4, 1e-15);
    EXPECT_EQ(set.points.front()[0], -2.0);
    EXPECT_EQ(set.points.back()[1], 2.0);
}

TEST(SampleSurface, ExplicitGridNeedsLinearLastVariable)
{
    SampleConfig cfg = config(25);
    cfg.mode = SampleMode::ExplicitGrid;
    EXPECT_THROW(sample_surface(parse_surface("x^2+y^2+z^2=2"), cfg), UsageError);
}

TEST(SampleSurface, SphereBuiltinParam)
{
    const SampleSet set = sample_surface(parse_surface("x^2+y^2+z^2=2"), config(100));
    ASSERT_EQ(set.points.size(), 100u);
    for (const auto& p : set.points)
        EXPECT_LE(std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 2), 1e-10);
}

TEST(SampleSurface, BuiltinParamCoversAllFourSurfaces)
{
    for (const char* eq : kSurfaces) {
        const QuadricSurface s = parse_surface(eq);
        const SampleSet set = sample_surface(s, config(500));
        EXPECT_EQ(set.points.size(), 500u) << eq;
        const NumericPolynomial F(s.F());
        for (const auto& p : set.points)
            EXPECT_LE(std::abs(F(p)), 1e-10) << eq;
    }
}

TEST(SampleSurface, TranslatedEllipsoid)
{
    const QuadricSurface s = parse_surface("(x-1)^2 + 2(y+1/2)^2 + z^2/3 = 1");
    const SampleSet set = sample_surface(s, config(200));
    ASSERT_EQ(set.points.size(), 200u);
    const NumericPolynomial F(s.F());
    for (const auto& p : set.points)
        EXPECT_LE(std::abs(F(p)), 1e-10);
}

TEST(SampleSurface, BuiltinParamRejectsCrossTerms)
{
    EXPECT_THROW(sample_surface(parse_surface("x*y + y*z + z*x = 1"), config(10)), UsageError);
}

TEST(SampleSurface, ImplicitScanFindsPoints)
{
    SampleConfig cfg = config(300);
    cfg.mode = SampleMode::ImplicitScan;
    const QuadricSurface s = parse_surface("x*y + y*z + z*x = 1");
    const SampleSet set = sample_surface(s, cfg);
    EXPECT_EQ(set.points.size(), 300u);
    const NumericPolynomial F(s.F());
    for (const auto& p : set.points)
        EXPECT_LE(std::abs(F(p)), 1e-10);
}

TEST(SampleSurface, EmptySurfaceWarns)
{
    SampleConfig cfg = config(50);
    cfg.mode = SampleMode::ImplicitScan;
    const SampleSet set = sample_surface(parse_surface("x^2+y^2+z^2=-1"), cfg);
    EXPECT_TRUE(set.points.empty());
    EXPECT_FALSE(set.warnings.empty());

    cfg.mode = SampleMode::BuiltinParam;
    const SampleSet set2 = sample_surface(parse_surface("x^2+y^2+z^2=-1"), cfg);
    EXPECT_TRUE(set2.points.empty());
    EXPECT_FALSE(set2.warnings.empty());
}

TEST(SampleSurface, ConfigValidation)
{
    SampleConfig cfg = config(0);
    EXPECT_THROW(sample_surface(parse_surface("x^2+y^2+z^2=2"), cfg), UsageError);
    cfg = config(10);
    cfg.domain = {{1, -1}};
    EXPECT_THROW(sample_surface(parse_surface("x^2+y^2+z^2=2"), cfg), UsageError);
    cfg.domain = {{-1, 1}, {-1, 1}};
    EXPECT_THROW(sample_surface(parse_surface("x^2+y^2+z^2=2"), cfg), UsageError);
}

TEST(SampleSurface, FourVariables)
{
    const QuadricSurface s = parse_surface("x1^2 + x2^2 - x3^2 + x4^2 = 1");
    const SampleSet set = sample_surface(s, config(100));
    ASSERT_EQ(set.points.size(), 100u);
    const CloudReport r = dual_cloud(s, set.points, AxisSpacing::standard(4), config(100));
    EXPECT_EQ(r.samples.size(), 100u);
    EXPECT_TRUE(std::isnan(r.samples.front().jac));
    EXPECT_TRUE(r.boundary_hits.empty());
}

TEST(DualCloud, SaddleOriginIsContactHit)
{
    const QuadricSurface s = parse_surface("z = -(x/2)^2 + (y/2)^2");
    const CloudReport r = dual_cloud(s, {{0.0, 0.0, 0.0}}, kUnit, config(1));
    ASSERT_GE(r.samples.size(), 1u);
    const DualSample& d = r.samples[0];
    EXPECT_DOUBLE_EQ(d.dual.eta / d.dual.psi, 2.0);
    EXPECT_DOUBLE_EQ(d.dual.xi / d.dual.psi, 0.0);
    EXPECT_EQ(d.jac, 0.0);
    EXPECT_TRUE(d.is_boundary);
    EXPECT_FALSE(d.refined);
}

TEST(DualCloud, SphereInteriorAndIdealSamples)
{
    const QuadricSurface s = parse_surface("x^2+y^2+z^2=2");
    const CloudReport r = dual_cloud(s, {{1.0, 1.0, 0.0}, {1.0, -1.0, 0.0}}, kUnit, config(2));
    ASSERT_GE(r.samples.size(), 2u);
    EXPECT_DOUBLE_EQ(r.samples[0].dual.eta / r.samples[0].dual.psi, 0.5);
    EXPECT_DOUBLE_EQ(r.samples[0].dual.xi / r.samples[0].dual.psi, 1.0);
    EXPECT_NE(r.samples[0].jac, 0.0);
    EXPECT_FALSE(r.samples[0].is_boundary);
    EXPECT_TRUE(r.samples[1].is_ideal);
    EXPECT_EQ(r.n_ideal, 1u);
}

TEST(DualCloud, SkipsSingularAndOffSurfacePoints)
{
    const QuadricSurface cone = parse_surface("x^2 + y^2 - z^2 = 0");
    const CloudReport r = dual_cloud(cone, {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}, kUnit, config(2));
    EXPECT_EQ(r.n_singular, 1u);
    EXPECT_EQ(r.n_off_surface, 1u);
    EXPECT_TRUE(r.samples.empty());
    EXPECT_FALSE(r.warnings.empty()); // developable: no contact surface
}

TEST(DualCloud, FloatRouteEquivalence)
{
    for (const char* eq : kSurfaces) {
        const QuadricSurface s = parse_surface(eq);
        const SampleConfig cfg = config(300);
        const CloudReport r = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
        for (const auto& d : r.samples) {
            const auto h = hyperplane_image<double>(d.plane, kUnit);
            EXPECT_TRUE(projectively_close(h, d.dual, 1e-12)) << eq;
        }
    }
}

TEST(DualCloud, Deterministic)
{
    const QuadricSurface s = parse_surface("x^2+y^2-z^2=1");
    const SampleConfig cfg = config(400, 9);
    const CloudReport a = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
    const CloudReport b = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].point, b.samples[i].point);
        EXPECT_EQ(a.samples[i].dual.eta, b.samples[i].dual.eta);
        EXPECT_EQ(a.samples[i].dual.xi, b.samples[i].dual.xi);
        EXPECT_EQ(a.samples[i].dual.psi, b.samples[i].dual.psi);
        EXPECT_EQ(a.samples[i].is_boundary, b.samples[i].is_boundary);
    }
    EXPECT_EQ(a.boundary_hits, b.boundary_hits);
}

TEST(DualCloud, HitsGrowWithCount)
{
    for (const char* eq : kSurfaces) {
        const QuadricSurface s = parse_surface(eq);
        std::size_t previous = 0;
        for (std::size_t n : {100u, 200u, 400u, 800u}) {
            const SampleConfig cfg = config(n, 3);
            const CloudReport r = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
            EXPECT_GE(r.boundary_hits.size(), previous) << eq << " n=" << n;
            previous = r.boundary_hits.size();
        }
    }
}

TEST(ValidateBoundary, AllFourSurfacesPass)
{
    for (const char* eq : kSurfaces) {
        const QuadricSurface s = parse_surface(eq);
        const BoundaryCurve curve = boundary_curve(s, kUnit);
        const SampleConfig cfg = config(1000);
        CloudReport r = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
        const ValidationSummary v = validate_boundary(r, curve, cfg);
        EXPECT_GT(v.n_hits, 0u) << eq;
        EXPECT_LE(v.max_hit_residual, 1e-6) << eq;
        EXPECT_GE(v.nonhit_off_fraction, 0.99) << eq;
        EXPECT_TRUE(v.pass) << eq;
        EXPECT_EQ(r.max_curve_residual, v.max_hit_residual);
    }
}

TEST(ValidateBoundary, WrongConicFails)
{
    const QuadricSurface s = parse_surface("x^2+y^2+z^2=2");
    BoundaryCurve curve = boundary_curve(s, kUnit);
    curve.gamma_bar = parse_polynomial("x^2 + y^2 - 1", VariableNames::plane());
    curve.homogeneous = homogenize(curve.gamma_bar, 2);
    const SampleConfig cfg = config(1000);
    CloudReport r = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
    const ValidationSummary v = validate_boundary(r, curve, cfg);
    EXPECT_FALSE(v.pass);
    EXPECT_FALSE(v.failing_hits.empty());
    EXPECT_GT(v.max_hit_residual, 1e-6);
}

TEST(ValidateBoundary, MismatchedSurfaceIsUsageError)
{
    const QuadricSurface s = parse_surface("x^2+y^2+z^2=2");
    const BoundaryCurve other = boundary_curve(parse_surface("x^2+y^2-z^2=1"), kUnit);
    const SampleConfig cfg = config(50);
    CloudReport r = dual_cloud(s, sample_surface(s, cfg).points, kUnit, cfg);
    EXPECT_THROW(validate_boundary(r, other, cfg), UsageError);
}

TEST(ValidateBoundary, CurveResidualHelper)
{
    const BoundaryCurve curve = boundary_curve(parse_surface("z = -(x/2)^2 + (y/2)^2"), kUnit);
    // (2, 0) lies on 4x^2 - 4xy + y^2 - 16x - 4y + 16.
    EXPECT_EQ(curve_residual(curve, {8.0, 0.0, 4.0}, false), 0.0);
    EXPECT_GT(curve_residual(curve, {0.0, 0.0, 1.0}, false), 0.5);
}
