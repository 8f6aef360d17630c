#include "cafe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cafe/error.hpp"

namespace cafe::quad {

namespace {

GaussRule make_rule(int n)
{
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order)
{
    require(order >= 1, "Gauss-Legendre order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussRule>(make_rule(order));
    return *slot;
}

double composite(const Integrand& f, double a, double b, int panels, int order)
{
    const GaussRule& rule = gauss_legendre(order);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

QuadResult integrate_pieces(const Integrand& f, std::span<const double> breaks,
                            double abs_tol, int order, int initial_panels,
                            int max_doublings)
{
    require(breaks.size() >= 2, "integration needs at least one piece");
    QuadResult out;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        if (!(b > a)) continue;
        int panels = std::max(1, initial_panels);
        double prev = composite(f, a, b, panels, order);
        double err = std::numeric_limits<double>::infinity();
        double cur = prev;
        // Tolerance is shared between pieces in proportion to their length.
        const double piece_tol =
            abs_tol * std::max((b - a) / (breaks.back() - breaks.front()), 1e-3);
        for (int d = 0; d < max_doublings; ++d) {
            panels *= 2;
            cur = composite(f, a, b, panels, order);
            err = std::abs(cur - prev);
            prev = cur;
            if (err < piece_tol) break;
        }
        out.value += cur;
        out.error += err;
    }
    return out;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double abs_tol,
                              int max_intervals)
{
    using boost::math::quadrature::gauss_kronrod;
    struct Piece {
        double a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    auto kernel = [&](double lo, double hi) {
        double err = 0.0;
        // Depth 0 gives a single G7/K15 pair; Boost reports the error on [-1, 1].
        const double v = gauss_kronrod<double, 15>::integrate(
            [&](double x) { return f(x); }, lo, hi, 0, 0.0, &err);
        return Piece{lo, hi, v, err * 0.5 * (hi - lo)};
    };
    std::priority_queue<Piece> heap;
    Piece first = kernel(a, b);
    double value = first.value, error = first.error;
    heap.push(first);
    int count = 1;
    while (error > abs_tol && count < max_intervals) {
        Piece p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break;
        Piece l = kernel(p.a, mid), r = kernel(mid, p.b);
        value += l.value + r.value - p.value;
        error += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Re-sum to drop the drift from incremental updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error};
}

double chebyshev_t(int n, double x)
{
    if (n == 0) return 1.0;
    double t0 = 1.0, t1 = x;
    for (int k = 2; k <= n; ++k) {
        double t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

double chebyshev_u(int n, double x)
{
    if (n == 0) return 1.0;
    double u0 = 1.0, u1 = 2.0 * x;
    for (int k = 2; k <= n; ++k) {
        double u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

ChebyshevSeries::ChebyshevSeries(double a, double b, std::vector<double> coeffs)
    : a_(a), b_(b), coeffs_(std::move(coeffs))
{
}

ChebyshevSeries ChebyshevSeries::fit(const Integrand& f, double a, double b, int n)
{
    require(n >= 1, "Chebyshev degree must be positive");
    std::vector<double> values(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = std::cos(std::numbers::pi * j / n);
        values[j] = f(0.5 * (a + b) + 0.5 * (b - a) * x);
    }
    // DCT-I through a cosine table indexed by (j*k) mod 2n.
    std::vector<double> table(2 * n);
    for (int m = 0; m < 2 * n; ++m) table[m] = std::cos(std::numbers::pi * m / n);
    std::vector<double> c(n + 1);
    for (int k = 0; k <= n; ++k) {
        double s = 0.5 * (values[0] + (k % 2 == 0 ? values[n] : -values[n]));
        for (int j = 1; j < n; ++j) s += values[j] * table[(static_cast<long>(j) * k) % (2 * n)];
        c[k] = 2.0 * s / n;
    }
    c[0] *= 0.5;
    c[n] *= 0.5;
    return ChebyshevSeries(a, b, std::move(c));
}

double ChebyshevSeries::tail_ratio() const
{
    double big = 0.0;
    for (double v : coeffs_) big = std::max(big, std::abs(v));
    if (big == 0.0) return 0.0;
    double tail = 0.0;
    const std::size_t n = coeffs_.size();
    const std::size_t start = n > 8 ? n - 8 : 0;
    for (std::size_t k = start; k < n; ++k) tail = std::max(tail, std::abs(coeffs_[k]));
    return tail / big;
}

ChebyshevSeries ChebyshevSeries::fit_adaptive(const Integrand& f, double a, double b,
                                              double tol, int min_degree, int max_degree)
{
    int n = std::max(8, min_degree);
    ChebyshevSeries s = fit(f, a, b, n);
    while (s.tail_ratio() > tol && n < max_degree) {
        n *= 2;
        s = fit(f, a, b, n);
    }
    if (s.tail_ratio() > std::max(tol, 1e-10))
        throw AccuracyFailure("Chebyshev interpolant did not resolve the integrand",
                              s.tail_ratio());
    return s;
}

double ChebyshevSeries::operator()(double x) const
{
    const double y = (2.0 * x - a_ - b_) / (b_ - a_);
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 1;) {
        double b0 = 2.0 * y * b1 - b2 + coeffs_[k];
        b2 = b1;
        b1 = b0;
    }
    return y * b1 - b2 + coeffs_[0];
}

ChebyshevSeries ChebyshevSeries::antiderivative() const
{
    const std::size_t n = coeffs_.size();
    std::vector<double> c(coeffs_);
    c.push_back(0.0);
    c.push_back(0.0);
    std::vector<double> out(n + 1, 0.0);
    const double scale = 0.5 * (b_ - a_);
    for (std::size_t k = 1; k <= n; ++k) {
        const double cm = (k == 1) ? 2.0 * c[0] : c[k - 1];
        out[k] = scale * (cm - c[k + 1]) / (2.0 * k);
    }
    // Fix the constant so the antiderivative vanishes at x = a (y = -1).
    double at_lower = 0.0;
    for (std::size_t k = 1; k <= n; ++k) at_lower += (k % 2 == 0 ? 1.0 : -1.0) * out[k];
    out[0] = -at_lower;
    return ChebyshevSeries(a_, b_, std::move(out));
}

}  // namespace cafe::quad
