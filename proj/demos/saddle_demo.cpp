// Walks the saddle through every stage of the boundary computation.

#include <pcquad/boundary.hpp>
#include <pcquad/parse.hpp>

#include <iostream>

int main()
{
    using namespace pcquad;
    const QuadricSurface saddle = parse_surface("z = -(x/2)^2 + (y/2)^2");
    const AxisSpacing spacing = AxisSpacing::standard(3);
    const auto x = VariableNames::indexed(3);
    const auto h = VariableNames::homogeneous();

    std::cout << "F      = " << format_polynomial(saddle.F(), x) << "\n";
    const PSQTriple t = psq_symbolic(saddle, spacing);
    std::cout << "P      = " << format_polynomial(t.P, x) << "\n"
              << "S      = " << format_polynomial(t.S, x) << "\n"
              << "Q      = " << format_polynomial(t.Q, x) << "\n";

    const EliminationSystem sys = build_system(saddle, spacing);
    std::cout << "eqA    = " << format_polynomial(sys.eqA, VariableNames::mixed()) << "\n"
              << "eqB    = " << format_polynomial(sys.eqB, VariableNames::mixed()) << "\n"
              << "eqC    = " << format_polynomial(sys.eqC, VariableNames::mixed()) << "\n";

    const LinearSolution sol = solve_linear_system(sys);
    for (std::size_t i = 0; i < 3; ++i)
        std::cout << "x" << i + 1 << "     = (" << format_polynomial(sol.x[i].num(), h) << ") / ("
                  << format_polynomial(sol.x[i].den(), h) << ")\n";

    const BoundaryCurve c = boundary_curve(saddle, spacing);
    std::cout << "sigma' = " << format_polynomial(c.sigma_prime, x) << "\n"
              << "gamma  = " << format_polynomial(c.gamma_bar, VariableNames::plane()) << " = 0\n";
}
