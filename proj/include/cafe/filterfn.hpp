#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cafe/control.hpp"
#include "cafe/quadrature.hpp"

namespace cafe {

enum class FilterMethod { AnalyticIntegral, GeneralIntegral, MonteCarlo, UddBesselApprox, UddExact };
const char* to_string(FilterMethod method);

struct FilterCurve {
    std::vector<double> z;
    std::vector<double> F;
    std::vector<double> stderr_values;  // empty unless Monte Carlo
    FilterMethod method = FilterMethod::AnalyticIntegral;
    std::string label;
};

/// Reusable evaluator for F(z) = |z int_0^1 exp(i[z s + beta(T s)]) ds|^2.
/// The integral runs in theta (s = sin^2(theta/2)) on panels sized so every
/// 64-node panel spans at most ~3 periods of the local phase, i.e. at least
/// 20 nodes per period. Panel counts are doubled until the amplitude is
/// stable; throws AccuracyFailure when it is not.
class FilterEvaluator {
public:
    explicit FilterEvaluator(const ControlSequence& seq);

    double operator()(double z) const;
    /// z int exp(i[z s + sign * beta]) ds
    std::complex<double> amplitude(double z, int sign = 1) const;

private:
    friend class FilterTable;
    struct Piece {
        double a, b;     // theta range
        double rate;     // bound on |d beta / d theta|
    };
    ControlSequence seq_;
    std::vector<Piece> pieces_;
};

/// F tabulated on [0, z_max] as piecewise Chebyshev series (degree 32 on
/// segments of width 8), for integrals that need many evaluations. All table
/// points share one node set fine enough for z_max, so beta is sampled once.
class FilterTable {
public:
    FilterTable(const ControlSequence& seq, double z_max);

    /// Interpolated F(z) for z <= z_max; direct evaluation beyond.
    double operator()(double z) const;
    double z_max() const { return z_max_; }
    /// Mean of F over the last 64 units of z below z_max; stands in for F
    /// beyond the table where only its average matters.
    double tail_mean() const { return tail_mean_; }
    const ControlSequence& sequence() const { return evaluator_seq_; }

private:
    ControlSequence evaluator_seq_;
    FilterEvaluator evaluator_;
    double z_max_ = 0.0;
    double width_ = 8.0;
    double tail_mean_ = 0.0;
    std::vector<quad::ChebyshevSeries> segments_;
};

double filter_analytic(const ControlSequence& seq, double z);

/// Double-integral filter for a constant control axis with z-component n_z:
/// (z^2/4) int_0^1 du int_0^u dv cos[z(u - v)] Tr Gamma, where
/// Tr Gamma = 8 {cos(db) + n_z^2 (1 - cos(db))}. Evaluated as the literal
/// iterated integral with Chebyshev running integrals.
double filter_general(const ControlSequence& seq, double z, double n_z);

/// 4 sin^2(z/2).
double filter_free_evolution(double z);

/// 16 (N+1)^2 J_{N+1}(z/2)^2.
double filter_udd_bessel(int N, double z);

/// Exact ideal-UDD filter from the closed-form staircase integral, summed in
/// 50-digit arithmetic so the small-z cancellation is harmless.
double filter_udd_exact(int N, double z);

/// Location of the first local maximum of filter_udd_exact.
double udd_first_principal_maximum(int N);

struct MonteCarloOptions {
    int threads = 1;
    int n_steps = 0;               // 0: max(2048, 32 z)
    bool allow_strong = false;     // skip the A T <= 0.1 guard
    bool check_linearity = false;  // rerun at A/2 and compare
};

struct MonteCarloEstimate {
    double estimate = 0.0;
    double stderr_value = 0.0;
    double mean_infidelity = 0.0;
    int n_trials = 0;
    bool regime_warning = false;
};

/// Sinusoidal-noise estimate of F(z): B(t) = A cos(w t + phi) with random
/// phase per trial, exact qubit propagation, and F = 2 w^2 <I> / A^2.
MonteCarloEstimate filter_monte_carlo(const ControlSequence& seq, double z, double amplitude_A,
                                      int n_trials, std::uint64_t seed,
                                      const MonteCarloOptions& options = {});

std::vector<double> log_grid(double lo, double hi, int n);
/// 200 log-spaced points on [0.1, 1000].
std::vector<double> default_z_grid();

FilterCurve analytic_curve(const ControlSequence& seq, const std::vector<double>& z);
FilterCurve monte_carlo_curve(const ControlSequence& seq, const std::vector<double>& z,
                              double amplitude_A, int n_trials, std::uint64_t seed,
                              const MonteCarloOptions& options = {});
FilterCurve bessel_curve(int N, const std::vector<double>& z);

}  // namespace cafe
