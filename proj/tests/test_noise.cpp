#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cafe/error.hpp"
#include "cafe/noise.hpp"
#include "cafe/quadrature.hpp"

using namespace cafe;
using std::numbers::pi;

TEST_CASE("spectral densities integrate to the variance")
{
    for (auto fam : {NoiseFamily::GaussianSpectrum, NoiseFamily::LorentzianSpectrum}) {
        NoiseModel m{fam, 0.7, 0.4};
        // <B^2> = (1/pi) int_0^inf S dw; substitute w = tan(x) / tau_c for the Lorentzian tail
        auto f = [&](double x) {
            const double w = std::tan(x) / m.tau_c;
            return spectral_density(m, w) / (m.tau_c * std::cos(x) * std::cos(x));
        };
        const auto r = quad::integrate_adaptive(f, 0.0, pi / 2 - 1e-9, 1e-12);
        CHECK(r.value / pi == doctest::Approx(0.49).epsilon(1e-6));
    }
    CHECK(spectral_density({NoiseFamily::Sinusoid, 1.0, 1.0, 3.0}, 3.0) == 0.0);
}

TEST_CASE("seed streams")
{
    CHECK(stream_seed(1, 2) == stream_seed(1, 2));
    CHECK(stream_seed(1, 2) != stream_seed(1, 3));
    CHECK(stream_seed(1, 2, 0) != stream_seed(1, 2, 1));
    CHECK(stream_seed(1, 2) != stream_seed(2, 2));
    auto a = make_rng(5, 1), b = make_rng(5, 1);
    CHECK(a() == b());
}

TEST_CASE("synthesized paths have the right variance")
{
    for (auto fam : {NoiseFamily::GaussianSpectrum, NoiseFamily::LorentzianSpectrum, NoiseFamily::OrnsteinUhlenbeck}) {
        NoiseModel m{fam, 0.5, 0.05, 0.0, 3};
        const int n = default_grid_size(m, 1.0);
        double s2 = 0.0;
        int count = 0;
        for (int trial = 0; trial < 400; ++trial) {
            const auto p = synthesize_noise(m, 1.0, n, trial);
            for (double t : {0.1, 0.5, 0.9}) {
                s2 += p(t) * p(t);
                ++count;
            }
        }
        INFO(to_string(fam));
        CHECK(s2 / count == doctest::Approx(0.25).epsilon(0.1));
    }
}

TEST_CASE("Ornstein-Uhlenbeck correlation decays as exp(-t/tau)")
{
    NoiseModel m{NoiseFamily::OrnsteinUhlenbeck, 1.0, 0.2, 0.0, 9};
    const int n = default_grid_size(m, 1.0);
    double c = 0.0;
    const int trials = 3000;
    for (int trial = 0; trial < trials; ++trial) {
        const auto p = synthesize_noise(m, 1.0, n, trial);
        c += p(0.3) * p(0.5);
    }
    CHECK(c / trials == doctest::Approx(std::exp(-1.0)).epsilon(0.1));
}

TEST_CASE("paths are reproducible and distinct")
{
    NoiseModel m{NoiseFamily::GaussianSpectrum, 0.3, 0.5, 0.0, 42};
    const int n = default_grid_size(m, 1.0);
    const auto a = synthesize_noise(m, 1.0, n, 7), b = synthesize_noise(m, 1.0, n, 7);
    const auto c = synthesize_noise(m, 1.0, n, 8);
    CHECK(a.values() == b.values());
    CHECK(a.values() != c.values());
    CHECK(a.spacing() == doctest::Approx(1.0 / (n - 1)).epsilon(0.01));
}

TEST_CASE("sinusoid paths")
{
    NoiseModel m{NoiseFamily::Sinusoid, 0.2, 0.0, 5.0, 1};
    const auto p = synthesize_noise(m, 1.0, 0, 3);
    double mx = 0.0;
    for (int i = 0; i <= 1000; ++i) mx = std::max(mx, std::abs(p(i / 1000.0)));
    CHECK(mx <= 0.2 + 1e-12);
    CHECK(mx > 0.19);
}

TEST_CASE("coarse grids are rejected")
{
    NoiseModel m{NoiseFamily::GaussianSpectrum, 1.0, 0.001, 0.0, 1};
    try {
        synthesize_noise(m, 1.0, 256, 0);
        FAIL("under-resolved grid must throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ResolutionError);
    }
    CHECK(default_grid_size(m, 1.0) >= 256);
}
