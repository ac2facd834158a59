#pragma once

// Parallel-coordinates duality for hyperplanes and tangent planes.
//
// The hyperplane  c1 x1 + ... + cn xn = c0  maps to the homogeneous point
//   (eta, xi, psi) = (sum d_i c_i, c0, sum c_i)
// where d_i are the axis positions.  For a surface F = 0 the tangent plane
// at a point has c_i = dF/dx_i, which gives the polynomial triple
//   P = sum d_i dF/dx_i,   S = sum x_i dF/dx_i - 2F,   Q = sum dF/dx_i.
// On the surface S equals the tangent plane's c0; subtracting 2F keeps all
// three linear for quadrics.

#include <pcquad/errors.hpp>
#include <pcquad/polynomial.hpp>
#include <pcquad/surface.hpp>

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace pcquad {

template <class T>
struct ProjectiveTriple {
    T eta{};
    T xi{};
    T psi{};

    bool is_null() const { return eta == 0 && xi == 0 && psi == 0; }
};

using ProjectivePoint = ProjectiveTriple<Rational>;
using ProjectivePointF = ProjectiveTriple<double>;

// Exact projective equality: all 2x2 cross terms vanish and neither is null.
inline bool projectively_equal(const ProjectivePoint& a, const ProjectivePoint& b)
{
    if (a.is_null() || b.is_null())
        return false;
    return a.eta * b.xi == a.xi * b.eta && a.eta * b.psi == a.psi * b.eta
           && a.xi * b.psi == a.psi * b.xi;
}

inline double norm(const ProjectivePointF& p)
{
    return std::sqrt(p.eta * p.eta + p.xi * p.xi + p.psi * p.psi);
}

// Relative projective closeness: the cross product of the unit-normalized
// triples is below rel_tol.
inline bool projectively_close(const ProjectivePointF& a, const ProjectivePointF& b,
                               double rel_tol)
{
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0 || nb == 0)
        return false;
    const double c0 = a.xi * b.psi - a.psi * b.xi;
    const double c1 = a.psi * b.eta - a.eta * b.psi;
    const double c2 = a.eta * b.xi - a.xi * b.eta;
    return std::sqrt(c0 * c0 + c1 * c1 + c2 * c2) <= rel_tol * na * nb;
}

// Point at infinity of the dual plane.
inline bool is_ideal(const ProjectivePoint& p) { return p.psi == 0; }

inline bool is_ideal(const ProjectivePointF& p, double rel_tol = 1e-12)
{
    return std::abs(p.psi) <= rel_tol * norm(p);
}

template <class T>
struct TangentPlane {
    T c0{};
    std::vector<T> c;
};

template <class T>
T spacing_value(const AxisSpacing& spacing, std::size_t i)
{
    return coefficient_as<T>(spacing[i]);
}

template <class T>
ProjectiveTriple<T> hyperplane_image(const T& c0, std::span<const T> c, const AxisSpacing& spacing)
{
    require_spacing_fits(spacing, c.size());
    bool all_zero = true;
    for (const auto& ci : c)
        all_zero = all_zero && ci == 0;
    if (all_zero)
        throw UsageError("all plane coefficients are zero: not a plane");
    ProjectiveTriple<T> out{T(0), c0, T(0)};
    for (std::size_t i = 0; i < c.size(); ++i) {
        out.eta += spacing_value<T>(spacing, i) * c[i];
        out.psi += c[i];
    }
    return out;
}

template <class T>
ProjectiveTriple<T> hyperplane_image(const TangentPlane<T>& plane, const AxisSpacing& spacing)
{
    return hyperplane_image<T>(plane.c0, std::span<const T>(plane.c), spacing);
}

struct PSQTriple {
    Polynomial P;
    Polynomial S;
    Polynomial Q;
};

inline PSQTriple psq_symbolic(const QuadricSurface& surface, const AxisSpacing& spacing)
{
    const Polynomial& F = surface.F();
    const std::size_t n = surface.nvars();
    require_spacing_fits(spacing, n);
    PSQTriple t{Polynomial(n), Polynomial(n), Polynomial(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const Polynomial g = derivative(F, i);
        t.P += g * spacing[i];
        t.S += Polynomial::variable(n, i) * g;
        t.Q += g;
    }
    t.S -= F * Rational(2);
    return t;
}

// Surface plus spacing with the derived polynomials computed once.
class DualMap {
public:
    DualMap(QuadricSurface surface, AxisSpacing spacing)
        : surface_(std::move(surface)), spacing_(std::move(spacing)),
          gradient_(gradient(surface_.F())), psq_(psq_symbolic(surface_, spacing_))
    {}

    const QuadricSurface& surface() const noexcept { return surface_; }
    const AxisSpacing& spacing() const noexcept { return spacing_; }
    const std::vector<Polynomial>& gradient_polys() const noexcept { return gradient_; }
    const PSQTriple& psq() const noexcept { return psq_; }

    // For T = Rational the point must lie exactly on the surface; for floating
    // types |F(point)| <= tol.
    template <class T>
    void require_on_surface(std::span<const T> point, double tol) const
    {
        const T value = evaluate<T>(surface_.F(), point);
        bool on;
        if constexpr (std::is_same_v<T, Rational>)
            on = value == 0;
        else
            on = std::abs(static_cast<double>(value)) <= tol;
        if (!on)
            throw UsageError("point is not on the surface");
    }

    template <class T>
    TangentPlane<T> tangent_coefficients(std::span<const T> point, double tol = 1e-10) const
    {
        require_on_surface(point, tol);
        TangentPlane<T> plane;
        plane.c0 = T(0);
        bool zero = true;
        for (std::size_t i = 0; i < gradient_.size(); ++i) {
            plane.c.push_back(evaluate<T>(gradient_[i], point));
            zero = zero && plane.c.back() == 0;
            plane.c0 += point[i] * plane.c.back();
        }
        if (zero)
            throw SingularPoint("singular point: gradient vanishes");
        return plane;
    }

    // (P, S, Q) at the point.  psi == 0 is a legal ideal point.
    template <class T>
    ProjectiveTriple<T> dual_point(std::span<const T> point, double tol = 1e-10) const
    {
        require_on_surface(point, tol);
        bool zero = true;
        for (const auto& g : gradient_)
            zero = zero && evaluate<T>(g, point) == 0;
        if (zero)
            throw SingularPoint("singular point: gradient vanishes");
        return {evaluate<T>(psq_.P, point), evaluate<T>(psq_.S, point),
                evaluate<T>(psq_.Q, point)};
    }

private:
    QuadricSurface surface_;
    AxisSpacing spacing_;
    std::vector<Polynomial> gradient_;
    PSQTriple psq_;
};

template <class T>
TangentPlane<T> tangent_coefficients(const QuadricSurface& surface, std::span<const T> point,
                                     double tol = 1e-10)
{
    return DualMap(surface, AxisSpacing::standard(surface.nvars()))
        .tangent_coefficients<T>(point, tol);
}

template <class T>
ProjectiveTriple<T> dual_point(const QuadricSurface& surface, std::span<const T> point,
                               const AxisSpacing& spacing, double tol = 1e-10)
{
    return DualMap(surface, spacing).dual_point<T>(point, tol);
}

namespace detail {

inline Polynomial det3(const std::array<std::array<Polynomial, 3>, 3>& m)
{
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline void require_symbolic_case(const QuadricSurface& surface)
{
    if (surface.nvars() != 3)
        throw UsageError("symbolic contact/boundary computation needs exactly 3 variables");
}

} // namespace detail

// Q^3 * det[ grad F ; grad(P/Q) ; grad(S/Q) ] as a polynomial in x1..x3.
// Computed as det[ grad F ; Q grad P - P grad Q ; Q grad S - S grad Q ] / Q,
// which is exact because the dropped term carries a factor Q.
inline Polynomial contact_determinant(const QuadricSurface& surface, const AxisSpacing& spacing)
{
    detail::require_symbolic_case(surface);
    const PSQTriple t = psq_symbolic(surface, spacing);
    const std::vector<Polynomial> gF = gradient(surface.F());
    const std::vector<Polynomial> gP = gradient(t.P);
    const std::vector<Polynomial> gQ = gradient(t.Q);
    const std::vector<Polynomial> gS = gradient(t.S);
    std::array<std::array<Polynomial, 3>, 3> m;
    for (std::size_t j = 0; j < 3; ++j) {
        m[0][j] = gF[j];
        m[1][j] = t.Q * gP[j] - t.P * gQ[j];
        m[2][j] = t.Q * gS[j] - t.S * gQ[j];
    }
    const Polynomial full = detail::det3(m);
    if (t.Q.is_zero())
        return full;
    auto reduced = divide_exact(full, t.Q);
    if (!reduced)
        throw Error("internal: contact determinant not divisible by Q");
    return *reduced;
}

// The contact surface sigma' (normalized); throws DegenerateError when the
// determinant vanishes identically.
inline Polynomial contact_surface(const QuadricSurface& surface, const AxisSpacing& spacing)
{
    Polynomial raw = contact_determinant(surface, spacing);
    if (raw.is_zero())
        throw DegenerateError("degenerate contact: the Jacobian condition vanishes identically");
    return normalize(raw);
}

} // namespace pcquad
