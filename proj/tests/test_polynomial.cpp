#include <pcquad/parse.hpp>
#include <pcquad/polynomial.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace pcquad;

namespace {

Polynomial x(std::size_t i, std::size_t n = 3) { return Polynomial::variable(n, i); }
Polynomial k(long c, std::size_t n = 3) { return Polynomial::constant(n, Rational(c)); }

Polynomial random_poly(std::mt19937& rng, std::size_t n, unsigned max_degree)
{
    std::uniform_int_distribution<int> coef(-5, 5), den(1, 4), deg(0, static_cast<int>(max_degree));
    Polynomial p(n);
    for (int t = 0; t < 4; ++t) {
        Exponents e(n, 0);
        unsigned budget = static_cast<unsigned>(deg(rng));
        for (unsigned b = 0; b < budget; ++b)
            ++e[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)];
        p.add_term(e, Rational(coef(rng), den(rng)));
    }
    return p;
}

std::vector<Rational> random_point(std::mt19937& rng, std::size_t n)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i)
        v.emplace_back(num(rng), den(rng));
    return v;
}

} // namespace

TEST(Polynomial, AdditiveInverseIsEmpty)
{
    Polynomial p = x(0) * x(0);
    Polynomial z = p + (-p);
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.size(), 0u);
    EXPECT_EQ(z.degree(), -1);
}

TEST(Polynomial, DifferenceOfSquares)
{
    EXPECT_EQ((x(0) + x(1)) * (x(0) - x(1)), x(0) * x(0) - x(1) * x(1));
}

TEST(Polynomial, PowerExpansion)
{
    EXPECT_EQ(pow(x(0) - k(2), 2), x(0) * x(0) - x(0) * Rational(4) + k(4));
    EXPECT_EQ(pow(x(1), 0), k(1));
}

TEST(Polynomial, GrlexOrder)
{
    Polynomial p = parse_polynomial("1 + x + y^2 + x*y + x^2", VariableNames::surface(3));
    std::vector<Exponents> order;
    for (const auto& [e, c] : p.terms())
        order.push_back(e);
    const std::vector<Exponents> expected{{2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 0}, {0, 0, 0}};
    EXPECT_EQ(order, expected);
    EXPECT_EQ(p.leading_exponents(), (Exponents{2, 0, 0}));
}

TEST(Polynomial, ArityMismatchThrows)
{
    EXPECT_THROW(x(0, 2) + x(0, 3), UsageError);
    EXPECT_THROW(x(0, 2) * x(0, 3), UsageError);
}

TEST(Derivative, Examples)
{
    const Polynomial saddle = x(0) * x(0) - x(1) * x(1) + x(2) * Rational(4);
    EXPECT_EQ(derivative(saddle, 0), x(0) * Rational(2));
    EXPECT_EQ(derivative(saddle, 2), k(4));
    EXPECT_TRUE(derivative(k(7), 0).is_zero());
    EXPECT_EQ(derivative(x(0) * x(1) * x(2), 1), x(0) * x(2));
    EXPECT_THROW(derivative(saddle, 3), UsageError);
}

TEST(Derivative, LinearAndProductRule)
{
    std::mt19937 rng(3);
    for (int t = 0; t < 100; ++t) {
        const Polynomial p = random_poly(rng, 3, 3), q = random_poly(rng, 3, 3);
        for (std::size_t v = 0; v < 3; ++v) {
            EXPECT_EQ(derivative(p + q * Rational(3, 2), v),
                      derivative(p, v) + derivative(q, v) * Rational(3, 2));
            EXPECT_EQ(derivative(p * q, v), derivative(p, v) * q + p * derivative(q, v));
        }
    }
}

TEST(Evaluate, Examples)
{
    const Polynomial saddle = x(0) * x(0) - x(1) * x(1) + x(2) * Rational(4);
    EXPECT_EQ(evaluate<Rational>(saddle, std::vector<Rational>{0, 0, 0}), 0);
    const Polynomial sphere = x(0) * x(0) + x(1) * x(1) + x(2) * x(2) - k(2);
    EXPECT_EQ(evaluate<Rational>(sphere, std::vector<Rational>{1, 1, 0}), 0);
    const Polynomial Q = x(0) * Rational(2) - x(1) * Rational(2) + k(4);
    EXPECT_EQ(evaluate<Rational>(Q, std::vector<Rational>{0, 0, 0}), 4);
    EXPECT_DOUBLE_EQ(evaluate<double>(Q, std::vector<double>{1.0, 0.5, 0.0}), 5.0);
    EXPECT_THROW(evaluate<Rational>(Q, std::vector<Rational>{0, 0}), UsageError);
}

TEST(RingAxioms, RandomPolynomials)
{
    std::mt19937 rng(1);
    for (int t = 0; t < 100; ++t) {
        const Polynomial a = random_poly(rng, 3, 3), b = random_poly(rng, 3, 3),
                         c = random_poly(rng, 3, 3);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
    }
}

TEST(DivideExact, Examples)
{
    const auto q = divide_exact(x(0) * x(0) - x(1) * x(1), x(0) - x(1));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, x(0) + x(1));
    EXPECT_FALSE(divide_exact(x(0) * x(0) + k(1), x(0)).has_value());

    const Polynomial s = parse_polynomial("-x2^2 + 4x2 + x1^2 + 2x3 - 2x1", VariableNames::indexed(3));
    const auto r = divide_exact(s * Rational(32), k(32));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(*r, s);
    EXPECT_THROW(divide_exact(s, Polynomial(3)), UsageError);
}

TEST(DivideExact, ProductRoundTrip)
{
    std::mt19937 rng(5);
    for (int t = 0; t < 100; ++t) {
        const Polynomial p = random_poly(rng, 3, 3), q = random_poly(rng, 3, 2);
        if (q.is_zero())
            continue;
        const auto r = divide_exact(p * q, q);
        ASSERT_TRUE(r.has_value());
        EXPECT_EQ(*r, p);
    }
}

TEST(Normalize, Examples)
{
    EXPECT_EQ(normalize(x(0) * x(0) * Rational(-2) + k(4)), x(0) * x(0) - k(2));
    const Polynomial h =
        parse_polynomial("16psi^2 - 16psi*eta - 4psi*xi + xi^2 - 4eta*xi + 4eta^2",
                         VariableNames::homogeneous());
    EXPECT_EQ(normalize(h), h);
    EXPECT_TRUE(normalize(Polynomial(3)).is_zero());
    EXPECT_EQ(normalize(x(0) * Rational(3, 4) + Polynomial::constant(3, Rational(1, 3))), x(0) * Rational(9) + k(4));
}

TEST(Normalize, IdempotentAndKeepsZeroSet)
{
    std::mt19937 rng(9);
    for (int t = 0; t < 100; ++t) {
        const Polynomial p = random_poly(rng, 3, 2);
        const Polynomial n = normalize(p);
        EXPECT_EQ(normalize(n), n);
        const auto pt = random_point(rng, 3);
        EXPECT_EQ(evaluate<Rational>(p, pt) == 0, evaluate<Rational>(n, pt) == 0);
    }
    // Points on a known zero set stay on it.
    const Polynomial sphere = x(0) * x(0) * Rational(-3) + x(1) * x(1) * Rational(-3) + k(6);
    EXPECT_EQ(evaluate<Rational>(normalize(sphere), std::vector<Rational>{1, 1, 5}), 0);
}

TEST(Substitute, MonomialCase)
{
    const Polynomial eta = x(0), psi = x(2);
    std::map<std::size_t, RationalFunction> b{{0, RationalFunction(eta, psi)}};
    const RationalFunction r = substitute(x(0, 1) * x(0, 1), b);
    EXPECT_TRUE(equivalent(r, RationalFunction(eta * eta, psi * psi)));
}

TEST(Substitute, Cancellation)
{
    std::map<std::size_t, RationalFunction> b{{0, RationalFunction(x(1), x(2))}};
    const RationalFunction r = substitute(x(0, 1) - x(0, 1), b);
    EXPECT_TRUE(r.num().is_zero());
    EXPECT_EQ(r.den(), k(1));
}

TEST(Substitute, UnboundVariableThrows)
{
    std::map<std::size_t, RationalFunction> b{{0, RationalFunction(x(1), x(2))}};
    EXPECT_THROW(substitute(x(0, 2) + x(1, 2), b), UsageError);
}

TEST(Substitute, AgreesWithNumericComposition)
{
    std::mt19937 rng(17);
    for (int t = 0; t < 60; ++t) {
        const Polynomial p = random_poly(rng, 2, 3);
        std::map<std::size_t, RationalFunction> b;
        for (std::size_t v = 0; v < 2; ++v) {
            Polynomial den = random_poly(rng, 3, 1);
            if (den.is_zero())
                den = k(1);
            b.emplace(v, RationalFunction(random_poly(rng, 3, 2), den));
        }
        const RationalFunction r = substitute(p, b);
        const auto pt = random_point(rng, 3);
        std::vector<Rational> inner;
        bool ok = true;
        for (std::size_t v = 0; v < 2; ++v) {
            const Rational d = evaluate<Rational>(b.at(v).den(), pt);
            if (d == 0)
                ok = false;
            else
                inner.push_back(evaluate<Rational>(b.at(v).num(), pt) / d);
        }
        const Rational rd = evaluate<Rational>(r.den(), pt);
        if (!ok || rd == 0)
            continue;
        EXPECT_EQ(evaluate<Rational>(r.num(), pt) / rd, evaluate<Rational>(p, inner));
    }
}

TEST(RationalFunction, ZeroDenominatorThrows)
{
    EXPECT_THROW(RationalFunction(x(0), Polynomial(3)), UsageError);
}

TEST(RationalFunction, ArithmeticMatchesCrossMultiplication)
{
    const RationalFunction a(x(0), x(1)), b(x(1), x(0));
    const RationalFunction sum = a + b;
    EXPECT_TRUE(equivalent(sum, RationalFunction(x(0) * x(0) + x(1) * x(1), x(0) * x(1))));
    EXPECT_TRUE(equivalent(a * b, RationalFunction(k(1), k(1))));
    EXPECT_TRUE(equivalent(a / a, RationalFunction(k(1), k(1))));
}
