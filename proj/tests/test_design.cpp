#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "cafe/constraints.hpp"
#include "cafe/design.hpp"
#include "cafe/error.hpp"

using namespace cafe;
using std::numbers::pi;

namespace {

// C0, X0, C2, X2, C4 for beta = 4 th + sum lambda_k sin(4 k th), u = -cos th,
// by brute-force Simpson sums on a fine theta grid.
std::vector<double> brute_force_system(const std::vector<double>& lam)
{
    const int n = 200000;
    const double h = pi / n;
    std::vector<double> th(n + 1), u(n + 1), w(n + 1);
    std::vector<std::complex<double>> e(n + 1);
    for (int i = 0; i <= n; ++i) {
        th[i] = i * h;
        double b = 4.0 * th[i];
        for (std::size_t k = 0; k < lam.size(); ++k) b += lam[k] * std::sin(4.0 * (k + 1) * th[i]);
        u[i] = -std::cos(th[i]);
        w[i] = std::sin(th[i]);  // du = sin th dth
        e[i] = std::polar(1.0, b);
    }
    auto simpson = [&](auto f) {
        double s = f(0) + f(n);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i);
        return s * h / 3.0;
    };
    auto cos_moment = [&](int p) { return simpson([&](int i) { return std::pow(u[i], p) * e[i].real() * w[i]; }); };
    // int du1 int_{u2<u1} du2 u2^p sin(b1 - b2) = Im int du1 e^{i b1} G(u1), G = running int of u2^p e^{-i b2}
    auto cross = [&](int p) {
        std::vector<std::complex<double>> G(n + 1);
        G[0] = 0.0;
        for (int i = 1; i <= n; ++i) {
            auto f = [&](int j) { return std::pow(u[j], p) * std::conj(e[j]) * w[j]; };
            G[i] = G[i - 1] + 0.5 * h * (f(i - 1) + f(i));
        }
        return simpson([&](int i) { return (e[i] * G[i]).imag() * w[i]; });
    };
    return {cos_moment(0), cross(0), cos_moment(2), cross(2), cos_moment(4)};
}

}  // namespace

TEST_CASE("Fourier initial guess")
{
    const auto g = fourier_initial_guess(5);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 1.0);
    CHECK(g[2] == 0.0);
    CHECK(g[3] == 0.5);
    CHECK(g[4] == 0.0);
}

TEST_CASE("system residuals match a brute-force evaluation")
{
    for (const auto& lam : {published_cafe35_lambdas(), fourier_initial_guess(5)}) {
        const auto lib = eval_cafe_system(lam, 3);
        const auto ref = brute_force_system(lam);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(lib[i] - ref[i]) < 1e-8);
    }
}

TEST_CASE("solve from the Fourier guess")
{
    const auto sol = solve_cafe(make_design_problem(3, 5));
    CHECK(sol.converged);
    CHECK(sol.status == SolveStatus::Converged);
    for (double r : sol.residuals) CHECK(std::abs(r) < 1e-8);
    const auto ref = brute_force_system(sol.lambdas);
    for (double r : ref) CHECK(std::abs(r) < 1e-7);
    // deterministic
    const auto again = solve_cafe(make_design_problem(3, 5));
    CHECK(again.lambdas == sol.lambdas);
    CHECK(again.iterations == sol.iterations);
}

TEST_CASE("root near the published coefficients")
{
    const auto root = catalog_solution(3, 5);
    const auto pub = published_cafe35_lambdas();
    CHECK(root.converged);
    CHECK(eval_cafe_system_report(root.lambdas, 3).max_abs < 1e-8);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(root.lambdas[i] - pub[i]) < 0.1);
    // the four-decimal vector itself is only good to about 1e-4
    const double lit = eval_cafe_system_report(pub, 3).max_abs;
    CHECK(lit > 1e-5);
    CHECK(lit < 1e-3);
}

TEST_CASE("solver reports failure honestly")
{
    const auto s = solve_cafe(make_design_problem(3, 5), 1e-8, 1);
    CHECK_FALSE(s.converged);
    CHECK(s.status != SolveStatus::Converged);
    CHECK(s.iterations <= 1);
    CHECK_THROWS_AS(make_design_problem(0, 5), Error);
}
