#pragma once

#include <pcquad/errors.hpp>
#include <pcquad/polynomial.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace pcquad {

// Implicit surface F = 0 of total degree 1 or 2 in nvars >= 1 variables.
// Degree-1 input is a plane; its dual "region" is a single indexed point.
class QuadricSurface {
public:
    explicit QuadricSurface(Polynomial F) : F_(std::move(F))
    {
        if (F_.nvars() == 0)
            throw UsageError("surface needs at least one variable");
        const int d = F_.degree();
        if (d > 2)
            throw UsageError("unsupported degree " + std::to_string(d) + " (expected <= 2)");
        if (d < 1)
            throw UsageError("equation has no variables left: not a surface");
    }

    const Polynomial& F() const noexcept { return F_; }
    std::size_t nvars() const noexcept { return F_.nvars(); }
    int degree() const noexcept { return F_.degree(); }
    bool is_plane() const noexcept { return F_.degree() == 1; }

    friend bool operator==(const QuadricSurface&, const QuadricSurface&) = default;

private:
    Polynomial F_;
};

// Horizontal positions d_i of the parallel axes.  The unit spacing
// (0, 1, ..., n-1) is the default.
class AxisSpacing {
public:
    explicit AxisSpacing(std::vector<Rational> positions) : d_(std::move(positions))
    {
        if (d_.empty())
            throw UsageError("axis spacing needs at least one position");
        if (d_.size() > 1
            && std::all_of(d_.begin(), d_.end(), [&](const Rational& v) { return v == d_[0]; }))
            throw UsageError("axis spacing collapses: all axes at the same position");
    }

    static AxisSpacing standard(std::size_t n)
    {
        std::vector<Rational> d;
        d.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            d.emplace_back(static_cast<long>(i));
        return AxisSpacing(std::move(d));
    }

    std::size_t size() const noexcept { return d_.size(); }
    const Rational& operator[](std::size_t i) const { return d_.at(i); }
    const std::vector<Rational>& positions() const noexcept { return d_; }

    std::vector<double> as_doubles() const
    {
        std::vector<double> out;
        out.reserve(d_.size());
        for (const auto& v : d_)
            out.push_back(static_cast<double>(v));
        return out;
    }

    friend bool operator==(const AxisSpacing&, const AxisSpacing&) = default;

private:
    std::vector<Rational> d_;
};

inline void require_spacing_fits(const AxisSpacing& spacing, std::size_t nvars)
{
    if (spacing.size() != nvars)
        throw UsageError("axis spacing has " + std::to_string(spacing.size())
                         + " entries but the surface has " + std::to_string(nvars)
                         + " variables");
}

} // namespace pcquad
