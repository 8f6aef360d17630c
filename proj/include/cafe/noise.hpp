#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cafe {

enum class NoiseFamily { GaussianSpectrum, LorentzianSpectrum, Sinusoid, OrnsteinUhlenbeck };
const char* to_string(NoiseFamily family);

/// Stationary zero-mean classical noise. `rms` is the standard deviation
/// (for Sinusoid it is the amplitude A of A cos(omega t + phi), and
/// `frequency` is omega). For control noise `rms` is a dimensionless fraction.
struct NoiseModel {
    NoiseFamily family = NoiseFamily::GaussianSpectrum;
    double rms = 0.0;
    double tau_c = 1.0;
    double frequency = 0.0;
    std::uint64_t seed = 0;
};

/// Two-sided S(omega) = int dt <B(t) B(0)> cos(omega t). The Sinusoid family
/// is a delta pair and returns 0 here.
double spectral_density(const NoiseModel& model, double omega);

/// Highest angular frequency the synthesized path has to resolve.
double max_frequency(const NoiseModel& model);

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x);
/// Independent stream seed derived from a base seed and up to three indices.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0);

/// One noise realisation on [0, duration]. Grid paths are linearly
/// interpolated; sinusoids are evaluated in closed form.
class NoisePath {
public:
    NoisePath() = default;
    static NoisePath grid(double duration, std::vector<double> values);
    static NoisePath sinusoid(double amplitude, double omega, double phase);
    static NoisePath zero();

    double operator()(double t) const;
    const std::vector<double>& values() const { return values_; }
    double spacing() const { return dt_; }
    bool is_zero() const { return kind_ == Kind::Zero; }

private:
    enum class Kind { Zero, Grid, Sinusoid };
    Kind kind_ = Kind::Zero;
    double dt_ = 0.0;
    std::vector<double> values_;
    double amplitude_ = 0.0, omega_ = 0.0, phase_ = 0.0;
};

/// Smallest power of two >= 256 that resolves max_frequency over `duration`.
int default_grid_size(const NoiseModel& model, double duration);

/// Realisation `trial_index` of the model. Gaussian spectra use a harmonic
/// superposition on midpoint frequencies (k - 1/2) d omega up to 20 / tau_c;
/// Lorentzian and OU use the exact Ornstein-Uhlenbeck update. `n_grid` must
/// be a power of two >= 256 (ignored for sinusoids); throws
/// Error(ResolutionError) when omega_max dt > pi/4.
NoisePath synthesize_noise(const NoiseModel& model, double duration, int n_grid,
                           std::uint64_t trial_index, std::uint64_t stream = 0);

}  // namespace cafe
