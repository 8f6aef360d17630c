#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cafe/control.hpp"
#include "cafe/design.hpp"
#include "cafe/error.hpp"
#include "cafe/quadrature.hpp"
#include "cafe/seqspec.hpp"

using namespace cafe;
using std::numbers::pi;

TEST_CASE("UDD pulse times")
{
    for (int N = 1; N <= 8; ++N) {
        const auto t = udd_times(N, 2.0);
        REQUIRE(t.size() == static_cast<std::size_t>(N));
        for (int j = 1; j <= N; ++j) {
            const double s = std::sin(j * pi / (2.0 * (N + 1)));
            CHECK(t[j - 1] == doctest::Approx(2.0 * s * s).epsilon(1e-14));
        }
    }
}

TEST_CASE("UDD is impulsive with infinite slew")
{
    const auto seq = make_udd(4, 1.0);
    CHECK(seq.impulsive());
    CHECK(seq.is_identity());
    CHECK_THROWS_AS(max_slew_rate(seq), Error);
    try {
        seq.alpha(0.3);
        FAIL("alpha of an impulsive sequence must throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotEvaluable);
    }
}

TEST_CASE("smooth UDD phase and amplitude")
{
    const int N = 3;
    const double T = 2.0;
    const auto seq = make_smooth_udd(N, T);
    for (double t : {0.1, 0.5, 1.0, 1.7}) {
        const double u = 2.0 * t / T - 1.0;
        CHECK(seq.beta(t) == doctest::Approx((N + 1) * std::acos(-u)).epsilon(1e-12));
        CHECK(seq.alpha(t) == doctest::Approx((N + 1) / (T * std::sqrt(1.0 - u * u))).epsilon(1e-10));
    }
    CHECK(seq.has_endpoint_poles());
    CHECK(alpha_symmetry(seq) == Symmetry::Even);
}

TEST_CASE("raw CAFE phase in theta")
{
    const std::vector<double> lam{0.1, -0.2, 0.05, 0.3, -0.1};
    const auto seq = make_cafe_raw(3, lam, 1.0);
    for (double th : {0.2, 1.0, 2.5}) {
        double expect = 4.0 * th;
        for (int k = 1; k <= 5; ++k) expect += lam[k - 1] * std::sin(4.0 * k * th);
        CHECK(seq.beta_theta(th) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("alpha zeros are zeros")
{
    const auto seq = make_cafe_raw(3, catalog_solution(3, 5).lambdas, 1.0);
    const auto zeros = find_alpha_zeros(seq);
    REQUIRE(zeros.size() >= 2);
    for (double z : zeros) CHECK(std::abs(seq.alpha(z)) < 1e-8);
    for (std::size_t i = 1; i < zeros.size(); ++i) CHECK(zeros[i] > zeros[i - 1]);
}

TEST_CASE("spliced CAFE: identity, zero net area, continuity")
{
    for (auto [r, L] : {std::pair{2, 2}, {2, 4}, {1, 6}, {3, 1}}) {
        const auto seq = catalog_entry(3, 5, r, L, 1.0);
        INFO("r=" << r << " L=" << L);
        CHECK(std::abs(seq.beta(1.0)) < 1e-9);
        const auto bp = seq.breakpoints();
        const auto area = quad::integrate_pieces([&](double t) { return seq.alpha(t); }, bp, 1e-13);
        CHECK(std::abs(area.value) < 1e-12);
        double amax = 0.0;
        for (int i = 0; i <= 2000; ++i) amax = std::max(amax, std::abs(seq.alpha(i / 2000.0)));
        for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
            const double left = seq.alpha(bp[i] - 1e-10), right = seq.alpha(bp[i] + 1e-10);
            CHECK(std::abs(left - right) < 1e-5 * amax);
        }
        CHECK_FALSE(seq.has_alpha_jumps());
    }
}

TEST_CASE("pulse train beta and slew")
{
    const auto alt = make_pulse_train(4, 0.1, 1.0);
    const auto noalt = make_pulse_train(4, 0.1, 1.0, PulseShape::SineSquared, false);
    CHECK(std::abs(alt.beta(1.0)) < 1e-12);
    CHECK(noalt.beta(1.0) == doctest::Approx(4.0 * pi).epsilon(1e-12));
    // half way through a sine-squared pulse the rotation is pi/2
    const double t1 = udd_times(4, 1.0)[0];
    CHECK(noalt.beta(t1) == doctest::Approx(pi / 2).epsilon(1e-12));
    for (int N : {2, 4, 8})
        for (double d : {0.01, 0.05}) {
            const auto seq = make_pulse_train(N, d, 1.0);
            CHECK(max_slew_rate(seq) == doctest::Approx(pi * pi * N * N / (d * d)).epsilon(1e-6));
        }
}

TEST_CASE("rectangular pulses jump")
{
    const auto seq = make_pulse_train(2, 0.1, 1.0, PulseShape::Rectangular);
    CHECK(seq.has_alpha_jumps());
    CHECK_THROWS_AS(max_slew_rate(seq), Error);
}

TEST_CASE("constant alpha")
{
    const auto seq = make_constant_alpha(2.0, 0.75);
    CHECK(seq.beta(1.2) == doctest::Approx(2.0 * 0.75 * 1.2));
    CHECK(max_slew_rate(seq) == doctest::Approx(0.0));
}

TEST_CASE("slew groups")
{
    for (const auto& s : low_slew_group()) {
        const double r = max_slew_rate(make_sequence(s));
        INFO(s << " " << r);
        CHECK(r > 7e5 / 2);
        CHECK(r < 7e5 * 2);
    }
    for (const auto& s : high_slew_group()) {
        const double r = max_slew_rate(make_sequence(s));
        INFO(s << " " << r);
        CHECK(r > 1e7 / 2);
        CHECK(r < 1e7 * 2);
    }
    const double cafe = max_slew_rate(make_sequence("CAFE(3,5,2)x2"));
    for (const auto& s : cafe_x2_comparators())
        CHECK(max_slew_rate(make_sequence(s)) == doctest::Approx(cafe).epsilon(0.02));
}

TEST_CASE("waveform samples")
{
    const auto s = sample_waveform(make_sequence("CAFE(3,5,2)x2"), 2);
    REQUIRE(s.size() == 2);
    CHECK(s[0].t == 0.0);
    CHECK(s[1].t == 1.0);
    CHECK(std::abs(s[0].beta_value) < 1e-12);
    CHECK(std::abs(s[1].beta_value) < 1e-9);
    CHECK_THROWS(sample_waveform(make_free_evolution(1.0), 1));
}

TEST_CASE("bad parameters")
{
    CHECK_THROWS_AS(make_udd(0, 1.0), Error);
    CHECK_THROWS_AS(make_pulse_train(4, 0.0, 1.0), Error);
    CHECK_THROWS_AS(make_pulse_train(4, 1.5, 1.0), Error);
    CHECK_THROWS_AS(make_free_evolution(-1.0), Error);
    CHECK_THROWS_AS(catalog_entry(3, 5, 0, 2), Error);
}
