#pragma once

// Boundary conic of the dual region of a quadric surface in R^3.
//
// The boundary is the image of the contact curve sigma ∩ sigma', where
// sigma' is the Jacobian condition of the tangent-plane map.  For degree-2 F
// the three equations
//
//   A:  eta Q - psi P = 0
//   B:  xi  Q - psi S = 0
//   C:  contact condition in mixed (x, eta, xi, psi) form
//
// are linear in x1..x3, so they are solved over the field of rational
// functions in (eta, xi, psi) and substituted into F.  The numerator of
// the result, stripped of denominator factors and dehomogenized with
// psi = 1, is the boundary conic.

#include <pcquad/dualmap.hpp>
#include <pcquad/errors.hpp>
#include <pcquad/parse.hpp>
#include <pcquad/polynomial.hpp>
#include <pcquad/surface.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pcquad {

// Variable layout of the mixed system.
inline constexpr std::size_t kMixedVars = 6;
inline constexpr std::size_t kEta = 3;
inline constexpr std::size_t kXi = 4;
inline constexpr std::size_t kPsi = 5;

struct EliminationSystem {
    Polynomial eqA; // eta Q - psi P
    Polynomial eqB; // xi Q - psi S
    Polynomial eqC; // contact determinant, mixed form, primitive
};

// Linear-in-x decomposition of one mixed equation: sum coeff[j] x_j + constant,
// with coefficients in (eta, xi, psi).
struct LinearRow {
    std::array<Polynomial, 3> coeff;
    Polynomial constant;
};

inline LinearRow split_linear(const Polynomial& mixed)
{
    if (mixed.nvars() != kMixedVars)
        throw UsageError("mixed equation must have 6 variables");
    LinearRow row{{Polynomial(3), Polynomial(3), Polynomial(3)}, Polynomial(3)};
    for (const auto& [e, c] : mixed.terms()) {
        const std::uint32_t xdeg = e[0] + e[1] + e[2];
        if (xdeg > 1)
            throw UsageError("equation is not linear in x1, x2, x3");
        Exponents h{e[kEta], e[kXi], e[kPsi]};
        if (xdeg == 0) {
            row.constant.add_term(std::move(h), c);
            continue;
        }
        const std::size_t j = e[0] ? 0 : (e[1] ? 1 : 2);
        row.coeff[j].add_term(std::move(h), c);
    }
    return row;
}

namespace detail {

inline void require_quadric_in_r3(const QuadricSurface& surface)
{
    if (surface.nvars() != 3)
        throw UsageError("symbolic boundary needs a surface in exactly 3 variables");
    if (surface.degree() != 2)
        throw UsageError("symbolic elimination needs a degree-2 surface");
}

inline Polynomial to_mixed(const Polynomial& p)
{
    static constexpr std::array<std::size_t, 3> placement{0, 1, 2};
    return embed(p, kMixedVars, placement);
}

} // namespace detail

inline EliminationSystem build_system(const QuadricSurface& surface, const AxisSpacing& spacing)
{
    detail::require_quadric_in_r3(surface);
    require_spacing_fits(spacing, 3);
    const PSQTriple t = psq_symbolic(surface, spacing);
    if (t.Q.is_zero())
        throw DegenerateError("degenerate surface: sum of partial derivatives vanishes "
                              "identically (every dual point is ideal)");

    const Polynomial P = detail::to_mixed(t.P);
    const Polynomial S = detail::to_mixed(t.S);
    const Polynomial Q = detail::to_mixed(t.Q);
    const Polynomial F = detail::to_mixed(surface.F());
    const Polynomial eta = Polynomial::variable(kMixedVars, kEta);
    const Polynomial xi = Polynomial::variable(kMixedVars, kXi);
    const Polynomial psi = Polynomial::variable(kMixedVars, kPsi);

    EliminationSystem sys;
    sys.eqA = eta * Q - psi * P;
    sys.eqB = xi * Q - psi * S;

    // det[ grad F ; psi grad P - eta grad Q ; psi grad S - xi grad Q ] / psi
    std::array<std::array<Polynomial, 3>, 3> m;
    for (std::size_t j = 0; j < 3; ++j) {
        m[0][j] = derivative(F, j);
        m[1][j] = psi * derivative(P, j) - eta * derivative(Q, j);
        m[2][j] = psi * derivative(S, j) - xi * derivative(Q, j);
    }
    const Polynomial det = detail::det3(m);
    auto reduced = divide_exact(det, psi);
    if (!reduced)
        throw Error("internal: mixed contact determinant not divisible by psi");
    if (reduced->is_zero())
        throw DegenerateError(
            "degenerate contact: the Jacobian condition vanishes identically");
    sys.eqC = primitive_part(*reduced);
    return sys;
}

// Coprime-by-construction factors met during elimination: pivot numerators
// and denominators with monomial factors split off.  Used for trial-division
// cancellation in place of a multivariate gcd.
class FactorPool {
public:
    explicit FactorPool(std::size_t nvars) : nvars_(nvars) {}

    const std::vector<Polynomial>& factors() const noexcept { return factors_; }

    void add(const Polynomial& p)
    {
        if (p.is_constant())
            return;
        Polynomial g = normalize(p);
        for (std::size_t v = 0; v < nvars_; ++v) {
            const Polynomial var = Polynomial::variable(nvars_, v);
            bool hit = false;
            while (!g.is_constant()) {
                auto q = divide_exact(g, var);
                if (!q)
                    break;
                g = std::move(*q);
                hit = true;
            }
            if (hit)
                insert(var);
        }
        for (const auto& f : factors_) {
            while (!g.is_constant()) {
                auto q = divide_exact(g, f);
                if (!q)
                    break;
                g = std::move(*q);
            }
        }
        if (g.is_constant())
            return;
        g = normalize(g);
        // Split existing entries that g divides.
        std::vector<Polynomial> split;
        for (auto& f : factors_) {
            while (!f.is_constant()) {
                auto q = divide_exact(f, g);
                if (!q)
                    break;
                f = normalize(*q);
            }
            if (!f.is_constant())
                split.push_back(f);
        }
        factors_ = std::move(split);
        insert(g);
    }

    void insert(const Polynomial& f)
    {
        if (std::find(factors_.begin(), factors_.end(), f) == factors_.end())
            factors_.push_back(f);
    }

private:
    std::size_t nvars_;
    std::vector<Polynomial> factors_;
};

struct LinearSolution {
    std::array<RationalFunction, 3> x;  // x_j in (eta, xi, psi)
    std::vector<Polynomial> pivots;     // in elimination order
    std::array<std::size_t, 3> pivot_column{};
    std::vector<Polynomial> factors;    // cancellation pool
};

namespace detail {

inline int complexity(const RationalFunction& f)
{
    return f.num().degree() + f.den().degree();
}

inline std::string column_name(std::size_t c) { return "x" + std::to_string(c + 1); }

} // namespace detail

// Gauss-Jordan elimination over Q(eta, xi, psi).  The pivot is the nonzero
// entry of least total degree among unused rows/columns, ties to the lowest
// row and then column.
inline LinearSolution solve_linear_system(const EliminationSystem& sys)
{
    const std::array<const Polynomial*, 3> eqs{&sys.eqA, &sys.eqB, &sys.eqC};
    std::array<std::array<RationalFunction, 4>, 3> a;
    for (std::size_t r = 0; r < 3; ++r) {
        LinearRow row = split_linear(*eqs[r]);
        for (std::size_t c = 0; c < 3; ++c)
            a[r][c] = RationalFunction(row.coeff[c]);
        a[r][3] = RationalFunction(-row.constant);
    }

    FactorPool pool(3);
    pool.insert(Polynomial::variable(3, 2)); // psi
    LinearSolution sol;
    std::array<bool, 3> row_used{};
    std::array<bool, 3> col_used{};
    std::array<std::size_t, 3> row_of_col{};

    for (std::size_t step = 0; step < 3; ++step) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        int best_weight = 0;
        for (std::size_t r = 0; r < 3; ++r) {
            if (row_used[r])
                continue;
            for (std::size_t c = 0; c < 3; ++c) {
                if (col_used[c] || a[r][c].is_zero())
                    continue;
                const int w = detail::complexity(a[r][c]);
                if (!best || w < best_weight) {
                    best = {r, c};
                    best_weight = w;
                }
            }
        }
        if (!best) {
            std::string cols;
            for (std::size_t c = 0; c < 3; ++c)
                if (!col_used[c])
                    cols += (cols.empty() ? "" : ", ") + detail::column_name(c);
            throw DegenerateError("degenerate surface/spacing: pivot vanishes identically for "
                                  + cols + " at elimination step " + std::to_string(step + 1));
        }
        const auto [r, c] = *best;
        const RationalFunction pivot = a[r][c];
        pool.add(pivot.num());
        pool.add(pivot.den());
        sol.pivots.push_back(pivot.num());
        sol.pivot_column[step] = c;

        for (std::size_t k = 0; k < 4; ++k)
            a[r][k] = cancel_factors(a[r][k] / pivot, pool.factors());
        for (std::size_t rr = 0; rr < 3; ++rr) {
            if (rr == r || a[rr][c].is_zero())
                continue;
            const RationalFunction scale = a[rr][c];
            for (std::size_t k = 0; k < 4; ++k)
                a[rr][k] = cancel_factors(a[rr][k] - scale * a[r][k], pool.factors());
        }
        row_used[r] = true;
        col_used[c] = true;
        row_of_col[c] = r;
    }

    for (std::size_t c = 0; c < 3; ++c) {
        const RationalFunction& v = a[row_of_col[c]][3];
        pool.add(v.den());
        sol.x[c] = cancel_factors(v, pool.factors());
    }
    sol.factors = pool.factors();
    return sol;
}

struct StrippedFactor {
    Polynomial factor; // in (eta, xi, psi)
    unsigned multiplicity = 0;
    bool at_infinity = false; // the factor is psi itself
};

struct BoundaryCurve {
    enum class Kind { Conic, PlanePoint };

    Kind kind = Kind::Conic;
    Polynomial gamma_bar;      // in (x, y), normalized
    Polynomial homogeneous;    // in (eta, xi, psi), normalized
    Polynomial raw_numerator;  // numerator before factor stripping
    std::vector<StrippedFactor> ideal_factors;
    Polynomial F;              // the surface
    Polynomial sigma_prime;    // contact surface; gamma = sigma ∩ sigma'
    AxisSpacing spacing = AxisSpacing::standard(3);
    std::optional<ProjectivePoint> plane_point; // Kind::PlanePoint only

    // B^2 - 4AC of the quadratic part.
    Rational discriminant() const
    {
        if (gamma_bar.nvars() != 2)
            return Rational(0);
        const Rational A = gamma_bar.coefficient({2, 0});
        const Rational B = gamma_bar.coefficient({1, 1});
        const Rational C = gamma_bar.coefficient({0, 2});
        return B * B - 4 * A * C;
    }
};

inline Polynomial dehomogenize(const Polynomial& h)
{
    if (h.nvars() != 3)
        throw UsageError("dehomogenize expects (eta, xi, psi)");
    Polynomial out(2);
    for (const auto& [e, c] : h.terms())
        out.add_term({e[0], e[1]}, c);
    return out;
}

inline Polynomial homogenize(const Polynomial& affine, unsigned degree)
{
    if (affine.nvars() != 2)
        throw UsageError("homogenize expects (x, y)");
    Polynomial out(3);
    for (const auto& [e, c] : affine.terms()) {
        const std::uint32_t d = e[0] + e[1];
        if (d > degree)
            throw UsageError("homogenize degree too small");
        out.add_term({e[0], e[1], degree - d}, c);
    }
    return out;
}

namespace detail {

inline BoundaryCurve plane_boundary(const QuadricSurface& surface, const AxisSpacing& spacing)
{
    const std::size_t n = surface.nvars();
    require_spacing_fits(spacing, n);
    std::vector<Rational> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        Exponents e(n, 0);
        e[i] = 1;
        c[i] = surface.F().coefficient(e);
    }
    BoundaryCurve out;
    out.kind = BoundaryCurve::Kind::PlanePoint;
    out.F = surface.F();
    out.spacing = spacing;
    out.plane_point =
        hyperplane_image<Rational>(-surface.F().constant_term(), std::span<const Rational>(c), spacing);
    return out;
}

inline std::string dump_factors(const std::vector<StrippedFactor>& fs)
{
    std::string s;
    for (const auto& f : fs)
        s += " (" + format_polynomial(f.factor, VariableNames::homogeneous()) + ")^"
             + std::to_string(f.multiplicity);
    return s.empty() ? " none" : s;
}

} // namespace detail

inline BoundaryCurve boundary_curve(const QuadricSurface& surface, const AxisSpacing& spacing)
{
    if (surface.is_plane())
        return detail::plane_boundary(surface, spacing);
    detail::require_quadric_in_r3(surface);

    BoundaryCurve out;
    out.F = surface.F();
    out.spacing = spacing;
    out.sigma_prime = contact_surface(surface, spacing);

    const EliminationSystem sys = build_system(surface, spacing);
    const LinearSolution sol = solve_linear_system(sys);

    const std::map<std::size_t, RationalFunction> bindings{
        {0, sol.x[0]}, {1, sol.x[1]}, {2, sol.x[2]}};
    const RationalFunction on_surface = substitute(surface.F(), bindings, sol.factors);
    out.raw_numerator = on_surface.num();
    if (out.raw_numerator.is_zero())
        throw DegenerateError("degenerate: empty or measure-zero region (the substituted "
                              "surface equation vanishes identically)");

    Polynomial rest = out.raw_numerator;
    const Polynomial psi = Polynomial::variable(3, 2);
    for (const auto& f : sol.factors) {
        unsigned m = 0;
        while (rest.degree() > 0) {
            auto q = divide_exact(rest, f);
            if (!q)
                break;
            rest = std::move(*q);
            ++m;
        }
        if (m > 0)
            out.ideal_factors.push_back({f, m, f == psi});
    }

    out.homogeneous = normalize(rest);
    out.gamma_bar = normalize(dehomogenize(out.homogeneous));
    if (out.homogeneous.degree() > 2)
        throw CleanupFailure("cleanup failure: residual degree "
                             + std::to_string(out.homogeneous.degree()) + " in "
                             + format_polynomial(out.homogeneous, VariableNames::homogeneous())
                             + "; stripped factors:" + detail::dump_factors(out.ideal_factors));
    if (out.gamma_bar.degree() < 1)
        throw DegenerateError("degenerate: empty or measure-zero region (no boundary locus "
                              "remains after removing denominator factors)");
    return out;
}

} // namespace pcquad
