#include "cafe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "cafe/error.hpp"

namespace cafe {

using std::numbers::pi;

const char* to_string(NoiseFamily family)
{
    switch (family) {
    case NoiseFamily::GaussianSpectrum: return "gaussian";
    case NoiseFamily::LorentzianSpectrum: return "lorentzian";
    case NoiseFamily::Sinusoid: return "sinusoid";
    case NoiseFamily::OrnsteinUhlenbeck: return "ou";
    }
    return "unknown";
}

double spectral_density(const NoiseModel& m, double omega)
{
    const double x = omega * m.tau_c;
    switch (m.family) {
    case NoiseFamily::GaussianSpectrum:
        // Var = (1/pi) int_0^inf S
        return 2.0 * std::sqrt(pi) * m.tau_c * m.rms * m.rms * std::exp(-x * x);
    case NoiseFamily::LorentzianSpectrum:
    case NoiseFamily::OrnsteinUhlenbeck:
        return 2.0 * m.tau_c * m.rms * m.rms / (1.0 + x * x);
    case NoiseFamily::Sinusoid: return 0.0;
    }
    return 0.0;
}

double max_frequency(const NoiseModel& m)
{
    if (m.family == NoiseFamily::Sinusoid) return std::abs(m.frequency);
    return 20.0 / m.tau_c;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ (b + 0x632BE59BD9B4E019ull));
    h = splitmix64(h ^ (c + 0x8CB92BA72F3D8DD7ull));
    return h;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    return std::mt19937_64(stream_seed(seed, a, b, c));
}

NoisePath NoisePath::grid(double duration, std::vector<double> values)
{
    require(values.size() >= 2, "noise grid needs at least two points");
    NoisePath p;
    p.kind_ = Kind::Grid;
    p.dt_ = duration / static_cast<double>(values.size() - 1);
    p.values_ = std::move(values);
    return p;
}

NoisePath NoisePath::sinusoid(double amplitude, double omega, double phase)
{
    NoisePath p;
    p.kind_ = Kind::Sinusoid;
    p.amplitude_ = amplitude;
    p.omega_ = omega;
    p.phase_ = phase;
    return p;
}

NoisePath NoisePath::zero() { return {}; }

double NoisePath::operator()(double t) const
{
    switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Sinusoid: return amplitude_ * std::cos(omega_ * t + phase_);
    case Kind::Grid: {
        const double x = t / dt_;
        const auto last = static_cast<double>(values_.size() - 1);
        if (x <= 0.0) return values_.front();
        if (x >= last) return values_.back();
        const auto i = static_cast<std::size_t>(x);
        const double f = x - static_cast<double>(i);
        return values_[i] + f * (values_[i + 1] - values_[i]);
    }
    }
    return 0.0;
}

int default_grid_size(const NoiseModel& model, double duration)
{
    // omega_max * duration / (n - 1) <= pi / 4
    const double need = 4.0 * max_frequency(model) * duration / pi + 1.0;
    int n = 256;
    while (n < need) n *= 2;
    return n;
}

NoisePath synthesize_noise(const NoiseModel& model, double duration, int n_grid,
                           std::uint64_t trial_index, std::uint64_t stream)
{
    require(duration > 0.0, "duration must be positive");
    require(model.rms >= 0.0, "rms must be nonnegative");
    require(model.tau_c > 0.0 || model.family == NoiseFamily::Sinusoid,
            "correlation time must be positive");
    auto rng = make_rng(model.seed, trial_index, stream);
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * pi);

    if (model.family == NoiseFamily::Sinusoid)
        return NoisePath::sinusoid(model.rms, model.frequency, uniform(rng));

    require(n_grid >= 256 && (n_grid & (n_grid - 1)) == 0,
            "noise grid size must be a power of two >= 256");
    const double dt = duration / (n_grid - 1);
    if (max_frequency(model) * dt > pi / 4.0)
        throw Error(ErrorKind::ResolutionError,
                    "noise grid too coarse for tau_c = " + std::to_string(model.tau_c) +
                        "; need at least " + std::to_string(default_grid_size(model, duration)) +
                        " points");

    std::vector<double> values(n_grid, 0.0);
    if (model.rms == 0.0) return NoisePath::grid(duration, std::move(values));

    if (model.family == NoiseFamily::GaussianSpectrum) {
        const double omega_max = max_frequency(model);
        const int K = std::max(256, static_cast<int>(std::ceil(6.4 * duration / model.tau_c)));
        const double dw = omega_max / K;
        std::vector<std::complex<double>> phasor(K), step(K);
        std::vector<double> amp(K), phase(K);
        for (int k = 0; k < K; ++k) {
            const double w = (k + 0.5) * dw;
            amp[k] = std::sqrt(2.0 * spectral_density(model, w) * dw / pi);
            phase[k] = uniform(rng);
            phasor[k] = std::polar(amp[k], phase[k]);
            step[k] = std::polar(1.0, w * dt);
        }
        // Modes beyond this carry nothing at double precision.
        int active = K;
        while (active > 1 && amp[active - 1] < 1e-10 * amp[0]) --active;
        phasor.resize(active);
        // Phasor recurrence, refreshed from closed form every 64 points to
        // keep rounding from accumulating.
        for (int j = 0; j < n_grid; ++j) {
            double s = 0.0;
            for (int k = 0; k < active; ++k) {
                s += phasor[k].real();
                phasor[k] *= step[k];
            }
            values[j] = s;
            if ((j + 1) % 64 == 0) {
                const double t = (j + 1) * dt;
                for (int k = 0; k < active; ++k)
                    phasor[k] = std::polar(amp[k], phase[k] + (k + 0.5) * dw * t);
            }
        }
    } else {
        std::normal_distribution<double> normal(0.0, 1.0);
        const double rho = std::exp(-dt / model.tau_c);
        const double kick = model.rms * std::sqrt(1.0 - rho * rho);
        values[0] = model.rms * normal(rng);
        for (int j = 1; j < n_grid; ++j) values[j] = rho * values[j - 1] + kick * normal(rng);
    }
    return NoisePath::grid(duration, std::move(values));
}

}  // namespace cafe
