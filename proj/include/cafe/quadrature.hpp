#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cafe::quad {

using Integrand = std::function<double(double)>;

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order. Rules are computed once and cached.
const GaussRule& gauss_legendre(int order);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double composite(const Integrand& f, double a, double b, int panels, int order = 64);

/// Composite Gauss-Legendre over consecutive pieces delimited by `breaks`
/// (ascending, at least two entries). The panel count on every piece is doubled
/// until two successive totals differ by less than `abs_tol`; the last
/// difference is returned as the error estimate.
QuadResult integrate_pieces(const Integrand& f, std::span<const double> breaks,
                            double abs_tol = 1e-11, int order = 64,
                            int initial_panels = 1, int max_doublings = 10);

/// Globally adaptive Gauss-Kronrod (7/15 point): the interval with the
/// largest error estimate is bisected until the summed estimate is below
/// `abs_tol` or `max_intervals` is reached.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double abs_tol = 1e-12, int max_intervals = 4000);

double chebyshev_t(int n, double x);
double chebyshev_u(int n, double x);

/// Chebyshev interpolant of a smooth function on [a, b], built on
/// Chebyshev-Lobatto points with the degree doubled until the trailing
/// coefficients fall below `tol` relative to the largest one.
class ChebyshevSeries {
public:
    ChebyshevSeries() = default;
    ChebyshevSeries(double a, double b, std::vector<double> coeffs);

    static ChebyshevSeries fit(const Integrand& f, double a, double b, int degree);
    static ChebyshevSeries fit_adaptive(const Integrand& f, double a, double b,
                                        double tol = 1e-14, int min_degree = 256,
                                        int max_degree = 8192);

    double operator()(double x) const;

    /// Antiderivative that vanishes at the left end of the interval.
    ChebyshevSeries antiderivative() const;

    double lower() const { return a_; }
    double upper() const { return b_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    /// Magnitude of the tail coefficients relative to the largest one.
    double tail_ratio() const;

private:
    double a_ = -1.0;
    double b_ = 1.0;
    std::vector<double> coeffs_;
};

}  // namespace cafe::quad
