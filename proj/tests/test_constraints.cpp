#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cafe/constraints.hpp"
#include "cafe/control.hpp"
#include "cafe/design.hpp"

using namespace cafe;
using std::numbers::pi;

TEST_CASE("moments of a linear phase")
{
    // beta = 2 pi t on [0, 1], i.e. pi (u + 1)
    const auto seq = make_constant_alpha(1.0, pi);
    const auto v = [&](ConstraintKind k, int p) { return eval_constraint({k, p}, seq); };
    CHECK(v(ConstraintKind::SineMoment, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v(ConstraintKind::SineMoment, 1) == doctest::Approx(-2.0 / pi).epsilon(1e-12));
    CHECK(v(ConstraintKind::CosineMoment, 0) == doctest::Approx(0.0).epsilon(1e-12));
    // int u^2 cos(pi(u+1)) du = -int u^2 cos(pi u) du = 4/pi^2
    CHECK(v(ConstraintKind::CosineMoment, 2) == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-12));
}

TEST_CASE("free evolution constraints")
{
    const auto seq = make_free_evolution(1.0);
    CHECK(eval_constraint({ConstraintKind::FirstOrderCosine, 0}, seq) == doctest::Approx(2.0));
    CHECK(eval_constraint({ConstraintKind::FirstOrderSine, 0}, seq) == doctest::Approx(0.0));
    CHECK(eval_constraint({ConstraintKind::CrossTerm2nd, 0}, seq) == doctest::Approx(0.0));
}

TEST_CASE("theta and u routes agree")
{
    const auto seq = make_cafe_raw(3, catalog_solution(3, 5).lambdas, 1.0);
    for (const auto& c : cafe_system_constraints()) {
        const auto a = eval_constraint_detailed(c, seq, Domain::Theta);
        const auto b = eval_constraint_detailed(c, seq, Domain::U);
        INFO(describe(c));
        CHECK(std::abs(a.value - b.value) < 1e-8);
    }
}

TEST_CASE("catalog root satisfies the system and the low-order constraints")
{
    const auto root = catalog_solution(3, 5);
    CHECK(eval_cafe_system_report(root.lambdas, 3).max_abs < kSatisfiedThreshold);
    const auto seq = make_cafe_raw(3, root.lambdas, 1.0);
    for (const auto& c : first_second_order_constraints()) {
        INFO(describe(c));
        CHECK(std::abs(eval_constraint(c, seq)) < kSatisfiedThreshold);
    }
}

TEST_CASE("smooth UDD satisfies the first-order constraints only approximately")
{
    // Without harmonics the cosine moment of beta = 4 theta is int cos(4 th) sin th dth = -2/15.
    const auto seq = make_smooth_udd(3, 1.0);
    CHECK(eval_constraint({ConstraintKind::FirstOrderCosine, 0}, seq) == doctest::Approx(-2.0 / 15.0).epsilon(1e-10));
    CHECK(std::abs(eval_constraint({ConstraintKind::FirstOrderSine, 0}, seq)) < 1e-12);
}

TEST_CASE("sine immunity of odd-N phases")
{
    const auto r = verify_sine_immunity(3, catalog_solution(3, 5).lambdas, 3);
    CHECK(r.max_abs < 1e-10);
}

TEST_CASE("trigonometric identity")
{
    for (int N = 1; N <= 8; ++N)
        for (int p = 0; p < N; ++p)
            for (int A = 1; A <= 3; ++A)
                for (int B = 0; B <= 3; ++B) CHECK(std::abs(verify_appendixA_identity(p, A, B, N)) < 1e-12);
    // p = N breaks the precondition: sin th sin((N+1) th) contains cos(N th) / 2
    for (int N = 1; N <= 4; ++N) CHECK(verify_appendixA_identity(N, 1, 0, N) == doctest::Approx(pi / 4));
}

TEST_CASE("Gauss-Lobatto-Chebyshev exactness")
{
    for (int M = 1; M <= 8; ++M) {
        for (int k = 0; k <= 2 * M - 1; ++k)
            CHECK(glc_quadrature_check(M, [k](double u) { return std::pow(u, k); }) < 1e-13);
        CHECK(glc_quadrature_check(M, [M](double u) { return std::pow(u, 2 * M); }) > 1e-6);
    }
}

TEST_CASE("bang-bang phase under a smooth field")
{
    const int N = 4;
    const auto B = [](double t) { return std::cos(5.0 * t) + 0.3 * t; };
    const auto Bint = [](double t) { return std::sin(5.0 * t) / 5.0 + 0.15 * t * t; };
    auto times = udd_times(N, 1.0);
    times.insert(times.begin(), 0.0);
    times.push_back(1.0);
    double expect = 0.0;
    for (std::size_t j = 0; j + 1 < times.size(); ++j)
        expect += (j % 2 ? -1.0 : 1.0) * (Bint(times[j + 1]) - Bint(times[j]));
    const auto [exact, smooth] = smooth_phase_equivalence(B, N, 1.0);
    CHECK(exact == doctest::Approx(expect).epsilon(1e-10));
    CHECK(std::isfinite(smooth));
}
