#pragma once

// Exact multivariate polynomials and rational functions over Q.
//
// A Polynomial is a sparse map from exponent vectors to nonzero rational
// coefficients.  Terms are kept in graded lexicographic order, highest
// first, so begin() is always the leading term.  The number of variables
// is fixed per value; mixing arities is a UsageError.

#include <pcquad/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pcquad {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

using Exponents = std::vector<std::uint32_t>;

inline std::uint32_t total_degree(const Exponents& e)
{
    return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

// Graded lex, descending: larger total degree first, then lex on variable index.
struct GrlexGreater {
    bool operator()(const Exponents& a, const Exponents& b) const
    {
        const auto da = total_degree(a);
        const auto db = total_degree(b);
        if (da != db)
            return da > db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

class Polynomial {
public:
    using TermMap = std::map<Exponents, Rational, GrlexGreater>;

    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rational& c)
    {
        Polynomial p(nvars);
        p.add_term(Exponents(nvars, 0), c);
        return p;
    }

    static Polynomial variable(std::size_t nvars, std::size_t index)
    {
        if (index >= nvars)
            throw UsageError("variable index " + std::to_string(index) + " out of range for "
                             + std::to_string(nvars) + " variables");
        Exponents e(nvars, 0);
        e[index] = 1;
        Polynomial p(nvars);
        p.add_term(std::move(e), Rational(1));
        return p;
    }

    static Polynomial monomial(Exponents e, const Rational& c)
    {
        Polynomial p(e.size());
        p.add_term(std::move(e), c);
        return p;
    }

    std::size_t nvars() const noexcept { return nvars_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const noexcept
    {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    // Total degree; -1 for the zero polynomial.
    int degree() const noexcept
    {
        return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first));
    }

    std::uint32_t degree_in(std::size_t var) const
    {
        check_index(var);
        std::uint32_t d = 0;
        for (const auto& [e, c] : terms_)
            d = std::max(d, e[var]);
        return d;
    }

    const Exponents& leading_exponents() const
    {
        if (terms_.empty())
            throw UsageError("zero polynomial has no leading term");
        return terms_.begin()->first;
    }

    const Rational& leading_coefficient() const
    {
        if (terms_.empty())
            throw UsageError("zero polynomial has no leading term");
        return terms_.begin()->second;
    }

    Rational coefficient(const Exponents& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient(Exponents(nvars_, 0)); }

    void add_term(Exponents e, const Rational& c)
    {
        if (e.size() != nvars_)
            throw UsageError("exponent vector of length " + std::to_string(e.size())
                             + " in polynomial of " + std::to_string(nvars_) + " variables");
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& q)
    {
        check_arity(q);
        for (const auto& [e, c] : q.terms_)
            add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& q)
    {
        check_arity(q);
        for (const auto& [e, c] : q.terms_)
            add_term(e, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_)
            c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
    friend Polynomial operator*(Polynomial p, const Rational& s) { return p *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial p) { return p *= s; }
    friend Polynomial operator-(Polynomial p) { return p *= Rational(-1); }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q)
    {
        p.check_arity(q);
        Polynomial r(p.nvars_);
        Exponents e(p.nvars_);
        for (const auto& [ep, cp] : p.terms_) {
            for (const auto& [eq, cq] : q.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] = ep[i] + eq[i];
                r.add_term(e, cp * cq);
            }
        }
        return r;
    }

    Polynomial& operator*=(const Polynomial& q) { return *this = *this * q; }

    friend bool operator==(const Polynomial& p, const Polynomial& q)
    {
        return p.nvars_ == q.nvars_ && p.terms_ == q.terms_;
    }

    void check_arity(const Polynomial& q) const
    {
        if (nvars_ != q.nvars_)
            throw UsageError("variable-count mismatch: " + std::to_string(nvars_) + " vs "
                             + std::to_string(q.nvars_));
    }

private:
    void check_index(std::size_t var) const
    {
        if (var >= nvars_)
            throw UsageError("variable index " + std::to_string(var) + " out of range for "
                             + std::to_string(nvars_) + " variables");
    }

    std::size_t nvars_ = 0;
    TermMap terms_;
};

inline Polynomial pow(const Polynomial& p, unsigned k)
{
    Polynomial result = Polynomial::constant(p.nvars(), Rational(1));
    Polynomial base = p;
    while (k > 0) {
        if (k & 1U)
            result = result * base;
        k >>= 1U;
        if (k > 0)
            base = base * base;
    }
    return result;
}

inline Polynomial derivative(const Polynomial& p, std::size_t var)
{
    if (var >= p.nvars())
        throw UsageError("derivative variable " + std::to_string(var) + " out of range");
    Polynomial d(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        if (e[var] == 0)
            continue;
        Exponents f = e;
        f[var] -= 1;
        d.add_term(std::move(f), c * e[var]);
    }
    return d;
}

inline std::vector<Polynomial> gradient(const Polynomial& p)
{
    std::vector<Polynomial> g;
    g.reserve(p.nvars());
    for (std::size_t i = 0; i < p.nvars(); ++i)
        g.push_back(derivative(p, i));
    return g;
}

template <class T>
T coefficient_as(const Rational& c)
{
    if constexpr (std::is_same_v<T, Rational>)
        return c;
    else
        return static_cast<T>(c);
}

// Exact for T = Rational.  Powers of each coordinate are tabulated once and
// every term accumulates a product over that table.
template <class T>
T evaluate(const Polynomial& p, std::span<const T> point)
{
    if (point.size() != p.nvars())
        throw UsageError("evaluation point has " + std::to_string(point.size())
                         + " coordinates, polynomial has " + std::to_string(p.nvars())
                         + " variables");
    std::vector<std::vector<T>> powers(p.nvars());
    for (std::size_t i = 0; i < p.nvars(); ++i) {
        const std::uint32_t d = p.degree_in(i);
        powers[i].reserve(d + 1);
        powers[i].push_back(T(1));
        for (std::uint32_t k = 1; k <= d; ++k)
            powers[i].push_back(powers[i].back() * point[i]);
    }
    T acc(0);
    for (const auto& [e, c] : p.terms()) {
        T term = coefficient_as<T>(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0)
                term *= powers[i][e[i]];
        acc += term;
    }
    return acc;
}

template <class T>
T evaluate(const Polynomial& p, const std::vector<T>& point)
{
    return evaluate<T>(p, std::span<const T>(point));
}

// Re-express p in a space of `nvars` variables; variable i of p becomes
// variable placement[i].
inline Polynomial embed(const Polynomial& p, std::size_t nvars,
                        std::span<const std::size_t> placement)
{
    if (placement.size() != p.nvars())
        throw UsageError("embedding needs one target index per variable");
    Polynomial r(nvars);
    for (const auto& [e, c] : p.terms()) {
        Exponents f(nvars, 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (placement[i] >= nvars)
                throw UsageError("embedding target out of range");
            f[placement[i]] += e[i];
        }
        r.add_term(std::move(f), c);
    }
    return r;
}

// Returns r with p == q * r, or nullopt when q does not divide p.
// Runs multivariate division under grlex; for an exact quotient the leading
// term of the remainder is always divisible by the leading term of q.
inline std::optional<Polynomial> divide_exact(const Polynomial& p, const Polynomial& q)
{
    p.check_arity(q);
    if (q.is_zero())
        throw UsageError("division by the zero polynomial");
    Polynomial quotient(p.nvars());
    Polynomial rest = p;
    const Exponents& lq = q.leading_exponents();
    const Rational& cq = q.leading_coefficient();
    while (!rest.is_zero()) {
        const Exponents& lr = rest.leading_exponents();
        Exponents shift(p.nvars());
        for (std::size_t i = 0; i < shift.size(); ++i) {
            if (lr[i] < lq[i])
                return std::nullopt;
            shift[i] = lr[i] - lq[i];
        }
        Polynomial step = Polynomial::monomial(std::move(shift), rest.leading_coefficient() / cq);
        quotient += step;
        rest -= step * q;
    }
    return quotient;
}

inline bool divides(const Polynomial& q, const Polynomial& p)
{
    return divide_exact(p, q).has_value();
}

// Positive rational c such that p / c has coprime integer coefficients.
inline Rational content(const Polynomial& p)
{
    if (p.is_zero())
        return Rational(1);
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (const auto& [e, c] : p.terms()) {
        num_gcd = gcd(num_gcd, Integer(abs(numerator(c))));
        den_lcm = lcm(den_lcm, Integer(denominator(c)));
    }
    return Rational(num_gcd) / Rational(den_lcm);
}

// p / content(p): integer coefficients with gcd 1, sign preserved.
inline Polynomial primitive_part(const Polynomial& p)
{
    if (p.is_zero())
        return p;
    return p * (Rational(1) / content(p));
}

// Primitive part with a positive leading coefficient.  Zero maps to zero.
inline Polynomial normalize(const Polynomial& p)
{
    if (p.is_zero())
        return p;
    Polynomial r = primitive_part(p);
    if (r.leading_coefficient() < 0)
        r *= Rational(-1);
    return r;
}

inline bool proportional(const Polynomial& p, const Polynomial& q)
{
    return normalize(p) == normalize(q);
}

// ---------------------------------------------------------------------------

// num / den with den != 0.  The denominator is kept primitive with a positive
// leading coefficient; a zero numerator forces den = 1.
class RationalFunction {
public:
    RationalFunction() = default;

    explicit RationalFunction(Polynomial num)
        : num_(std::move(num)), den_(Polynomial::constant(num_.nvars(), Rational(1)))
    {}

    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den))
    {
        num_.check_arity(den_);
        if (den_.is_zero())
            throw UsageError("rational function with zero denominator");
        canonicalize();
    }

    const Polynomial& num() const noexcept { return num_; }
    const Polynomial& den() const noexcept { return den_; }
    std::size_t nvars() const noexcept { return num_.nvars(); }
    bool is_zero() const noexcept { return num_.is_zero(); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b)
    {
        if (a.den_ == b.den_)
            return {a.num_ + b.num_, a.den_};
        return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
    }

    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b)
    {
        if (a.den_ == b.den_)
            return {a.num_ - b.num_, a.den_};
        return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
    }

    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b)
    {
        return {a.num_ * b.num_, a.den_ * b.den_};
    }

    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b)
    {
        if (b.is_zero())
            throw UsageError("division by the zero rational function");
        return {a.num_ * b.den_, a.den_ * b.num_};
    }

    friend RationalFunction operator-(const RationalFunction& a) { return {-a.num_, a.den_}; }

    // Structural equality of the stored representation.
    friend bool operator==(const RationalFunction& a, const RationalFunction& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void canonicalize()
    {
        if (num_.is_zero()) {
            den_ = Polynomial::constant(num_.nvars(), Rational(1));
            return;
        }
        Rational scale = content(den_);
        if (den_.leading_coefficient() < 0)
            scale = -scale;
        if (scale != 1) {
            den_ *= Rational(1) / scale;
            num_ *= Rational(1) / scale;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

// Mathematical equality: a.num * b.den == b.num * a.den.
inline bool equivalent(const RationalFunction& a, const RationalFunction& b)
{
    return a.num() * b.den() == b.num() * a.den();
}

// Divides numerator and denominator by each listed factor for as long as it
// divides both.
inline RationalFunction cancel_factors(const RationalFunction& f,
                                       std::span<const Polynomial> factors)
{
    Polynomial num = f.num();
    Polynomial den = f.den();
    if (num.is_zero())
        return f;
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& g : factors) {
            if (g.is_constant())
                continue;
            auto dq = divide_exact(den, g);
            if (!dq)
                continue;
            auto nq = divide_exact(num, g);
            if (!nq)
                continue;
            num = std::move(*nq);
            den = std::move(*dq);
            progress = true;
        }
    }
    return {std::move(num), std::move(den)};
}

// Replaces each bound variable of p by its rational-function image.  Every
// variable that occurs in p must be bound.  Bindings with equal denominators
// share one power of that denominator; the result is then reduced by trial
// division with those denominators and any extra hints supplied.
inline RationalFunction substitute(const Polynomial& p,
                                   const std::map<std::size_t, RationalFunction>& bindings,
                                   std::span<const Polynomial> factor_hints = {})
{
    if (bindings.empty())
        throw UsageError("substitute needs at least one binding");
    const std::size_t target = bindings.begin()->second.nvars();
    for (const auto& [var, image] : bindings) {
        if (var >= p.nvars())
            throw UsageError("binding for variable " + std::to_string(var) + " out of range");
        if (image.nvars() != target)
            throw UsageError("bindings live in different variable spaces");
        if (image.den().is_zero())
            throw UsageError("binding with zero denominator");
    }
    for (std::size_t v = 0; v < p.nvars(); ++v)
        if (p.degree_in(v) > 0 && !bindings.contains(v))
            throw UsageError("variable " + std::to_string(v) + " occurs but is unbound");

    // Group bound variables by denominator.
    std::vector<Polynomial> dens;
    std::vector<std::size_t> group_of(p.nvars(), 0);
    for (const auto& [var, image] : bindings) {
        auto it = std::find(dens.begin(), dens.end(), image.den());
        group_of[var] = static_cast<std::size_t>(it - dens.begin());
        if (it == dens.end())
            dens.push_back(image.den());
    }
    std::vector<std::uint32_t> group_power(dens.size(), 0);
    for (const auto& [e, c] : p.terms()) {
        std::vector<std::uint32_t> used(dens.size(), 0);
        for (const auto& [var, image] : bindings)
            used[group_of[var]] += e[var];
        for (std::size_t g = 0; g < dens.size(); ++g)
            group_power[g] = std::max(group_power[g], used[g]);
    }

    std::map<std::pair<std::size_t, std::uint32_t>, Polynomial> num_pow_cache;
    auto num_pow = [&](std::size_t var, std::uint32_t k) -> const Polynomial& {
        auto key = std::make_pair(var, k);
        auto it = num_pow_cache.find(key);
        if (it == num_pow_cache.end())
            it = num_pow_cache.emplace(key, pow(bindings.at(var).num(), k)).first;
        return it->second;
    };
    std::map<std::pair<std::size_t, std::uint32_t>, Polynomial> den_pow_cache;
    auto den_pow = [&](std::size_t g, std::uint32_t k) -> const Polynomial& {
        auto key = std::make_pair(g, k);
        auto it = den_pow_cache.find(key);
        if (it == den_pow_cache.end())
            it = den_pow_cache.emplace(key, pow(dens[g], k)).first;
        return it->second;
    };

    Polynomial num(target);
    for (const auto& [e, c] : p.terms()) {
        Polynomial term = Polynomial::constant(target, c);
        std::vector<std::uint32_t> used(dens.size(), 0);
        for (const auto& [var, image] : bindings) {
            if (e[var] == 0)
                continue;
            term = term * num_pow(var, e[var]);
            used[group_of[var]] += e[var];
        }
        for (std::size_t g = 0; g < dens.size(); ++g)
            if (group_power[g] > used[g])
                term = term * den_pow(g, group_power[g] - used[g]);
        num += term;
    }
    Polynomial den = Polynomial::constant(target, Rational(1));
    for (std::size_t g = 0; g < dens.size(); ++g)
        if (group_power[g] > 0)
            den = den * den_pow(g, group_power[g]);

    std::vector<Polynomial> factors = dens;
    factors.insert(factors.end(), factor_hints.begin(), factor_hints.end());
    return cancel_factors(RationalFunction(std::move(num), std::move(den)), factors);
}

} // namespace pcquad
