#pragma once

// Numeric side: on-surface samples, dual point clouds, and a check of the
// symbolic boundary conic against samples on the contact curve.

#include <pcquad/boundary.hpp>
#include <pcquad/dualmap.hpp>
#include <pcquad/errors.hpp>
#include <pcquad/polynomial.hpp>
#include <pcquad/surface.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pcquad {

using Point = std::vector<double>;

// Double-precision copy of a Polynomial for fast repeated evaluation.
class NumericPolynomial {
public:
    NumericPolynomial() = default;

    explicit NumericPolynomial(const Polynomial& p) : nvars_(p.nvars())
    {
        for (const auto& [e, c] : p.terms()) {
            coeffs_.push_back(static_cast<double>(c));
            exps_.insert(exps_.end(), e.begin(), e.end());
        }
    }

    std::size_t nvars() const noexcept { return nvars_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    double operator()(std::span<const double> x) const
    {
        double acc = 0.0;
        for (std::size_t t = 0; t < coeffs_.size(); ++t) {
            double term = coeffs_[t];
            const std::uint32_t* e = &exps_[t * nvars_];
            for (std::size_t i = 0; i < nvars_; ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k)
                    term *= x[i];
            acc += term;
        }
        return acc;
    }

private:
    std::size_t nvars_ = 0;
    std::vector<double> coeffs_;
    std::vector<std::uint32_t> exps_;
};

class NumericGradient {
public:
    NumericGradient() = default;

    explicit NumericGradient(const Polynomial& p)
    {
        for (std::size_t i = 0; i < p.nvars(); ++i)
            parts_.emplace_back(derivative(p, i));
    }

    Point operator()(std::span<const double> x) const
    {
        Point g(parts_.size());
        for (std::size_t i = 0; i < parts_.size(); ++i)
            g[i] = parts_[i](x);
        return g;
    }

private:
    std::vector<NumericPolynomial> parts_;
};

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// mt19937_64 with hand-written transforms so that draws are identical across
// standard library implementations.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal()
    {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    Point unit_vector(std::size_t dim)
    {
        for (;;) {
            Point v(dim);
            for (auto& c : v)
                c = normal();
            const double n = norm(v);
            if (n > 1e-12) {
                for (auto& c : v)
                    c /= n;
                return v;
            }
        }
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

enum class SampleMode { ExplicitGrid, BuiltinParam, ImplicitScan };

struct Interval {
    double lo = -4.0;
    double hi = 4.0;
};

struct SampleConfig {
    SampleMode mode = SampleMode::BuiltinParam;
    std::vector<Interval> domain; // empty means [-4, 4] in every variable
    std::size_t count = 1000;
    double tol_surface = 1e-10;
    double tol_contact = 1e-9;
    double tol_curve = 1e-6;
    std::uint64_t seed = 1;
    // Largest first-order distance to sigma' along the surface at which a
    // sample starts a bracketing search for a contact-curve point.
    double refine_radius = 0.25;

    std::vector<Interval> domain_for(std::size_t n) const
    {
        if (domain.empty())
            return std::vector<Interval>(n);
        if (domain.size() == 1)
            return std::vector<Interval>(n, domain.front());
        if (domain.size() != n)
            throw UsageError("domain has " + std::to_string(domain.size()) + " intervals for "
                             + std::to_string(n) + " variables");
        return domain;
    }

    void validate(std::size_t n) const
    {
        if (count == 0)
            throw UsageError("sample count must be positive");
        if (!(tol_surface > 0) || !(tol_contact > 0) || !(tol_curve > 0) || !(refine_radius > 0))
            throw UsageError("tolerances must be positive");
        for (const auto& iv : domain_for(n))
            if (!(iv.lo < iv.hi))
                throw UsageError("empty domain interval");
    }
};

struct SampleSet {
    std::vector<Point> points;
    std::vector<std::string> warnings;
};

namespace detail {

// Newton steps along the gradient back onto F = 0.
inline bool project_to_surface(const NumericPolynomial& F, const NumericGradient& grad, Point& x,
                               int iterations = 8)
{
    for (int it = 0; it < iterations; ++it) {
        const double f = F(x);
        if (f == 0.0)
            return true;
        const Point g = grad(x);
        const double gg = dot(g, g);
        if (gg == 0.0)
            return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] -= f * g[i] / gg;
    }
    return std::isfinite(F(x));
}

inline bool inside(const Point& x, const std::vector<Interval>& box)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < box[i].lo || x[i] > box[i].hi)
            return false;
    return true;
}

// x_k appears only as the pure term a * x_k.
inline std::optional<std::size_t> graph_variable(const Polynomial& F)
{
    for (std::size_t k = F.nvars(); k-- > 0;) {
        bool ok = F.degree_in(k) == 1;
        for (const auto& [e, c] : F.terms())
            if (ok && e[k] == 1 && total_degree(e) != 1)
                ok = false;
        if (ok)
            return k;
    }
    return std::nullopt;
}

struct CentralForm {
    std::vector<double> center;
    std::vector<double> scale; // a_i / R
};

// F = sum a_i (x_i - c_i)^2 - R with R != 0, no cross terms.
inline std::optional<CentralForm> central_form(const Polynomial& F)
{
    const std::size_t n = F.nvars();
    std::vector<Rational> a(n), b(n);
    for (const auto& [e, c] : F.terms()) {
        const auto d = total_degree(e);
        if (d == 2) {
            std::size_t idx = n;
            for (std::size_t i = 0; i < n; ++i)
                if (e[i] == 2)
                    idx = i;
            if (idx == n)
                return std::nullopt; // cross term
            a[idx] = c;
        } else if (d == 1) {
            for (std::size_t i = 0; i < n; ++i)
                if (e[i] == 1)
                    b[i] = c;
        }
    }
    Rational R = -F.constant_term();
    std::vector<Rational> center(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0)
            return std::nullopt;
        center[i] = -b[i] / (2 * a[i]);
        R += a[i] * center[i] * center[i];
    }
    if (R == 0)
        return std::nullopt; // cone
    CentralForm out;
    for (std::size_t i = 0; i < n; ++i) {
        out.center.push_back(static_cast<double>(center[i]));
        out.scale.push_back(static_cast<double>(a[i] / R));
    }
    return out;
}

} // namespace detail

inline SampleSet sample_surface(const QuadricSurface& surface, const SampleConfig& cfg)
{
    const std::size_t n = surface.nvars();
    cfg.validate(n);
    const auto box = cfg.domain_for(n);
    const NumericPolynomial F(surface.F());
    const NumericGradient grad(surface.F());
    SampleRng rng(cfg.seed);
    SampleSet out;

    auto accept = [&](Point x) {
        if (!detail::project_to_surface(F, grad, x))
            return false;
        if (!(std::abs(F(x)) <= cfg.tol_surface))
            return false;
        out.points.push_back(std::move(x));
        return true;
    };

    switch (cfg.mode) {
    case SampleMode::ExplicitGrid: {
        const std::size_t k = n - 1;
        if (surface.F().degree_in(k) != 1)
            throw UsageError("explicit-grid sampling needs F linear in the last variable");
        if (n < 2)
            throw UsageError("explicit-grid sampling needs at least two variables");
        // F = a(x') x_k + b(x')
        Polynomial a(n), b(n);
        for (const auto& [e, c] : surface.F().terms()) {
            if (e[k] == 1) {
                Exponents f = e;
                f[k] = 0;
                a.add_term(std::move(f), c);
            } else {
                b.add_term(e, c);
            }
        }
        const NumericPolynomial na(a), nb(b);
        const std::size_t dims = n - 1;
        auto side = static_cast<std::size_t>(
            std::llround(std::pow(static_cast<double>(cfg.count), 1.0 / static_cast<double>(dims))));
        side = std::max<std::size_t>(side, 2);
        std::size_t total = 1;
        for (std::size_t i = 0; i < dims; ++i)
            total *= side;
        std::size_t skipped = 0;
        for (std::size_t idx = 0; idx < total; ++idx) {
            Point x(n, 0.0);
            std::size_t rem = idx;
            for (std::size_t i = 0; i < dims; ++i) {
                const std::size_t j = rem % side;
                rem /= side;
                x[i] = box[i].lo
                       + (box[i].hi - box[i].lo) * static_cast<double>(j)
                             / static_cast<double>(side - 1);
            }
            const double av = na(x);
            if (std::abs(av) < 1e-300) {
                ++skipped;
                continue;
            }
            x[k] = -nb(x) / av;
            if (!accept(std::move(x)))
                ++skipped;
        }
        if (skipped)
            out.warnings.push_back(std::to_string(skipped)
                                   + " grid nodes skipped (vertical tangent or off-surface)");
        break;
    }
    case SampleMode::BuiltinParam: {
        const std::size_t max_attempts = cfg.count * 50;
        if (auto k = detail::graph_variable(surface.F())) {
            // x_k = -(F - a x_k) / a
            Exponents ek(n, 0);
            ek[*k] = 1;
            const double a = static_cast<double>(surface.F().coefficient(ek));
            Polynomial rest = surface.F();
            rest.add_term(ek, -surface.F().coefficient(ek));
            const NumericPolynomial nrest(rest);
            for (std::size_t attempt = 0; attempt < max_attempts && out.points.size() < cfg.count;
                 ++attempt) {
                Point x(n);
                for (std::size_t i = 0; i < n; ++i)
                    x[i] = i == *k ? 0.0 : rng.uniform(box[i].lo, box[i].hi);
                x[*k] = -nrest(x) / a;
                accept(std::move(x));
            }
        } else if (auto cf = detail::central_form(surface.F())) {
            std::vector<std::size_t> pos, neg;
            for (std::size_t i = 0; i < n; ++i)
                (cf->scale[i] > 0 ? pos : neg).push_back(i);
            if (pos.empty()) {
                out.warnings.push_back("surface has no real points");
                break;
            }
            // Largest hyperbolic parameter that can still land in the box.
            double t_max = 0.0;
            for (std::size_t i : neg) {
                const double reach = std::max(std::abs(box[i].lo - cf->center[i]),
                                              std::abs(box[i].hi - cf->center[i]));
                t_max = std::max(t_max, std::asinh(reach * std::sqrt(-cf->scale[i])));
            }
            for (std::size_t attempt = 0; attempt < max_attempts && out.points.size() < cfg.count;
                 ++attempt) {
                const double t = neg.empty() ? 0.0 : rng.uniform(0.0, t_max);
                const Point up = rng.unit_vector(pos.size());
                const Point un = neg.empty() ? Point{} : rng.unit_vector(neg.size());
                Point x(n);
                for (std::size_t j = 0; j < pos.size(); ++j) {
                    const std::size_t i = pos[j];
                    x[i] = cf->center[i] + std::cosh(t) * up[j] / std::sqrt(cf->scale[i]);
                }
                for (std::size_t j = 0; j < neg.size(); ++j) {
                    const std::size_t i = neg[j];
                    x[i] = cf->center[i] + std::sinh(t) * un[j] / std::sqrt(-cf->scale[i]);
                }
                if (detail::inside(x, box))
                    accept(std::move(x));
            }
        } else {
            throw UsageError(
                "no builtin parameterization for this surface; use implicit-scan sampling");
        }
        if (out.points.size() < cfg.count)
            out.warnings.push_back("only " + std::to_string(out.points.size()) + " of "
                                   + std::to_string(cfg.count) + " samples fell inside the domain");
        break;
    }
    case SampleMode::ImplicitScan: {
        constexpr int kCells = 64;
        const std::size_t max_lines = cfg.count * 20;
        for (std::size_t line = 0; line < max_lines && out.points.size() < cfg.count; ++line) {
            const std::size_t axis = line % n;
            Point base(n);
            for (std::size_t i = 0; i < n; ++i)
                base[i] = rng.uniform(box[i].lo, box[i].hi);
            auto f_at = [&](double s) {
                Point x = base;
                x[axis] = s;
                return F(x);
            };
            const double lo = box[axis].lo;
            const double step = (box[axis].hi - lo) / kCells;
            double s0 = lo;
            double f0 = f_at(s0);
            for (int c = 1; c <= kCells && out.points.size() < cfg.count; ++c) {
                const double s1 = lo + step * c;
                const double f1 = f_at(s1);
                if (f0 == 0.0 || (f0 < 0) != (f1 < 0)) {
                    double a = s0, b = s1, fa = f0;
                    for (int it = 0; it < 200 && fa != 0.0 && b - a > 1e-15 * (1 + std::abs(a));
                         ++it) {
                        const double m = 0.5 * (a + b);
                        const double fm = f_at(m);
                        if ((fm < 0) == (fa < 0)) {
                            a = m;
                            fa = fm;
                        } else {
                            b = m;
                        }
                    }
                    Point x = base;
                    x[axis] = fa == 0.0 ? a : 0.5 * (a + b);
                    accept(std::move(x));
                }
                s0 = s1;
                f0 = f1;
            }
        }
        if (out.points.empty())
            out.warnings.push_back("no surface intersection found in the domain");
        break;
    }
    }
    return out;
}

struct DualSample {
    Point point;
    Point gradient;
    TangentPlane<double> plane;
    ProjectivePointF dual;
    double jac = std::numeric_limits<double>::quiet_NaN(); // sigma'(point); NaN when n != 3
    bool is_boundary = false;
    bool is_ideal = false;
    bool refined = false; // produced by contact-curve polishing, not by the sampler
};

struct CloudReport {
    Polynomial F;
    AxisSpacing spacing = AxisSpacing::standard(3);
    std::vector<DualSample> samples;
    std::size_t n_ideal = 0;
    std::size_t n_singular = 0;
    std::size_t n_off_surface = 0;
    std::vector<std::size_t> boundary_hits; // indices into samples
    double max_curve_residual = 0.0;         // filled by validate_boundary
    std::vector<std::string> warnings;
};

namespace detail {

struct CloudContext {
    NumericPolynomial F;
    NumericGradient gradF;
    NumericPolynomial P, S, Q;
    std::vector<double> spacing;
    std::optional<NumericPolynomial> sigma;
    std::optional<NumericGradient> grad_sigma;
};

inline std::optional<DualSample> make_sample(const CloudContext& ctx, const Point& x, double tol,
                                             std::size_t& singular, std::size_t& off_surface)
{
    if (!(std::abs(ctx.F(x)) <= tol)) {
        ++off_surface;
        return std::nullopt;
    }
    DualSample s;
    s.point = x;
    s.gradient = ctx.gradF(x);
    const double gn = norm(s.gradient);
    if (!(gn > 1e-12 * (1.0 + norm(x)))) {
        ++singular;
        return std::nullopt;
    }
    s.plane.c = s.gradient;
    s.plane.c0 = dot(x, s.gradient);
    s.dual = {ctx.P(x), ctx.S(x), ctx.Q(x)};
    s.is_ideal = is_ideal(s.dual, 1e-12);
    if (ctx.sigma)
        s.jac = (*ctx.sigma)(x);
    return s;
}

} // namespace detail

inline CloudReport dual_cloud(const QuadricSurface& surface, const std::vector<Point>& points,
                              const AxisSpacing& spacing, const SampleConfig& cfg)
{
    const std::size_t n = surface.nvars();
    require_spacing_fits(spacing, n);
    const PSQTriple psq = psq_symbolic(surface, spacing);
    detail::CloudContext ctx{NumericPolynomial(surface.F()), NumericGradient(surface.F()),
                             NumericPolynomial(psq.P), NumericPolynomial(psq.S),
                             NumericPolynomial(psq.Q), spacing.as_doubles(), {}, {}};
    CloudReport report;
    report.F = surface.F();
    report.spacing = spacing;
    if (n == 3 && surface.degree() == 2) {
        try {
            const Polynomial sigma = contact_surface(surface, spacing);
            ctx.sigma = NumericPolynomial(sigma);
            ctx.grad_sigma = NumericGradient(sigma);
        } catch (const DegenerateError& e) {
            report.warnings.push_back(e.what());
        }
    } else {
        report.warnings.push_back("contact surface is only available for quadrics in 3 variables");
    }

    std::vector<DualSample> refined;
    for (const Point& x : points) {
        auto s = detail::make_sample(ctx, x, cfg.tol_surface, report.n_singular,
                                     report.n_off_surface);
        if (!s)
            continue;
        if (ctx.sigma) {
            const Point gs = (*ctx.grad_sigma)(x);
            const double gsn = norm(gs);
            s->is_boundary = s->jac == 0.0 || std::abs(s->jac) <= cfg.tol_contact * gsn;
            if (!s->is_boundary) {
                // Tangential steepest direction of sigma' on the surface.
                const double gg = dot(s->gradient, s->gradient);
                Point t = gs;
                const double along = dot(gs, s->gradient) / gg;
                for (std::size_t i = 0; i < n; ++i)
                    t[i] -= along * s->gradient[i];
                const double tn = norm(t);
                const double reach = tn > 0 ? -s->jac / tn : std::numeric_limits<double>::infinity();
                if (std::abs(reach) <= cfg.refine_radius) {
                    for (auto& c : t)
                        c /= tn;
                    auto at = [&](double u) {
                        Point y = x;
                        for (std::size_t i = 0; i < n; ++i)
                            y[i] += u * t[i];
                        detail::project_to_surface(ctx.F, ctx.gradF, y);
                        return y;
                    };
                    const double j0 = s->jac;
                    double hi = 0.0;
                    for (double factor : {2.0, 4.0}) {
                        const double u = factor * reach;
                        if ((ctx.sigma->operator()(at(u)) < 0) != (j0 < 0)) {
                            hi = u;
                            break;
                        }
                    }
                    if (hi != 0.0) {
                        double lo = 0.0;
                        Point y = at(hi);
                        for (int it = 0; it < 200; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            y = at(mid);
                            const double jm = (*ctx.sigma)(y);
                            if (jm == 0.0 || mid == lo || mid == hi)
                                break;
                            if ((jm < 0) == (j0 < 0))
                                lo = mid;
                            else
                                hi = mid;
                        }
                        std::size_t dummy_singular = 0, dummy_off = 0;
                        auto r = detail::make_sample(ctx, y, cfg.tol_surface, dummy_singular,
                                                     dummy_off);
                        if (r) {
                            r->is_boundary = true;
                            r->refined = true;
                            refined.push_back(std::move(*r));
                        }
                    }
                }
            }
        }
        report.samples.push_back(std::move(*s));
    }
    report.samples.insert(report.samples.end(), std::make_move_iterator(refined.begin()),
                          std::make_move_iterator(refined.end()));
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        if (report.samples[i].is_ideal)
            ++report.n_ideal;
        if (report.samples[i].is_boundary)
            report.boundary_hits.push_back(i);
    }
    return report;
}

// |g(x, y)| / (1 + |grad g(x, y)|) at the affine dual point, or the same
// measure on the unit-normalized homogeneous triple for ideal points.
inline double curve_residual(const BoundaryCurve& curve, const ProjectivePointF& dual,
                             bool ideal)
{
    if (!ideal) {
        const double p[2] = {dual.eta / dual.psi, dual.xi / dual.psi};
        const NumericPolynomial g(curve.gamma_bar);
        const NumericGradient dg(curve.gamma_bar);
        return std::abs(g(p)) / (1.0 + norm(dg(p)));
    }
    const double nn = norm(dual);
    const double p[3] = {dual.eta / nn, dual.xi / nn, dual.psi / nn};
    const NumericPolynomial g(curve.homogeneous);
    const NumericGradient dg(curve.homogeneous);
    return std::abs(g(p)) / (1.0 + norm(dg(p)));
}

struct ValidationSummary {
    std::size_t n_hits = 0;
    std::size_t n_nonhits = 0;
    std::size_t n_nonhits_off_curve = 0;
    double max_hit_residual = 0.0;
    double nonhit_off_fraction = 0.0;
    bool hits_ok = false;
    bool nonhits_ok = false;
    bool pass = false;
    std::vector<std::pair<std::size_t, double>> failing_hits; // (sample index, residual)
};

inline ValidationSummary validate_boundary(CloudReport& report, const BoundaryCurve& curve,
                                           const SampleConfig& cfg)
{
    if (curve.kind != BoundaryCurve::Kind::Conic)
        throw UsageError("boundary is a single indexed point; nothing to validate");
    if (!proportional(report.F, curve.F) || !(report.spacing == curve.spacing))
        throw UsageError("cloud and boundary curve come from different surfaces or spacings");
    ValidationSummary v;
    // Curve residuals need fresh numeric copies; build them once.
    const NumericPolynomial g(curve.gamma_bar);
    const NumericGradient dg(curve.gamma_bar);
    const NumericPolynomial gh(curve.homogeneous);
    const NumericGradient dgh(curve.homogeneous);
    auto residual = [&](const DualSample& s) {
        if (!s.is_ideal) {
            const double p[2] = {s.dual.eta / s.dual.psi, s.dual.xi / s.dual.psi};
            return std::abs(g(p)) / (1.0 + norm(dg(p)));
        }
        const double nn = norm(s.dual);
        const double p[3] = {s.dual.eta / nn, s.dual.xi / nn, s.dual.psi / nn};
        return std::abs(gh(p)) / (1.0 + norm(dgh(p)));
    };
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const DualSample& s = report.samples[i];
        const double r = residual(s);
        if (s.is_boundary) {
            ++v.n_hits;
            v.max_hit_residual = std::max(v.max_hit_residual, r);
            if (!(r <= cfg.tol_curve))
                v.failing_hits.emplace_back(i, r);
        } else {
            ++v.n_nonhits;
            if (r > cfg.tol_curve)
                ++v.n_nonhits_off_curve;
        }
    }
    v.nonhit_off_fraction = v.n_nonhits == 0 ? 1.0
                                             : static_cast<double>(v.n_nonhits_off_curve)
                                                   / static_cast<double>(v.n_nonhits);
    v.hits_ok = v.n_hits > 0 && v.failing_hits.empty();
    v.nonhits_ok = v.nonhit_off_fraction >= 0.99;
    v.pass = v.hits_ok && v.nonhits_ok;
    report.max_curve_residual = v.max_hit_residual;
    return v;
}

} // namespace pcquad
