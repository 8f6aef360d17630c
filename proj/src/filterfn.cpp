#include "cafe/filterfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cafe/csim.hpp"
#include "cafe/error.hpp"
#include "cafe/noise.hpp"

namespace cafe {

using std::numbers::pi;
using cplx = std::complex<double>;

const char* to_string(FilterMethod method)
{
    switch (method) {
    case FilterMethod::AnalyticIntegral: return "analytic";
    case FilterMethod::GeneralIntegral: return "general";
    case FilterMethod::MonteCarlo: return "monte_carlo";
    case FilterMethod::UddBesselApprox: return "udd_bessel";
    case FilterMethod::UddExact: return "udd_exact";
    }
    return "unknown";
}

namespace {

double theta_of_time(double t, double T)
{
    return std::acos(std::clamp(1.0 - 2.0 * t / T, -1.0, 1.0));
}

std::vector<double> theta_breaks(const ControlSequence& seq)
{
    std::vector<double> out;
    for (double t : seq.breakpoints()) out.push_back(theta_of_time(t, seq.duration()));
    out.front() = 0.0;
    out.back() = pi;
    return out;
}

double s_of_theta(double theta)
{
    const double h = std::sin(0.5 * theta);
    return h * h;
}

}  // namespace

// ---------------------------------------------------------------------------

FilterEvaluator::FilterEvaluator(const ControlSequence& seq) : seq_(seq)
{
    const auto br = theta_breaks(seq);
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double a = br[k], b = br[k + 1];
        if (!(b > a)) continue;
        // |d beta / d theta| on a grid strictly inside the piece, plus margin.
        const int n = 256;
        const double h = (b - a) / n;
        double rate = 0.0;
        double prev = seq.beta_theta(a + 1e-9 * (b - a));
        for (int i = 1; i <= n; ++i) {
            const double th = (i == n) ? b - 1e-9 * (b - a) : a + i * h;
            const double cur = seq.beta_theta(th);
            rate = std::max(rate, std::abs(cur - prev) / h);
            prev = cur;
        }
        pieces_.push_back({a, b, 1.25 * rate});
    }
}

cplx FilterEvaluator::amplitude(double z, int sign) const
{
    const auto& rule = quad::gauss_legendre(64);
    auto sum_with = [&](const Piece& p, int panels) {
        cplx acc = 0.0;
        const double w = (p.b - p.a) / panels;
        for (int j = 0; j < panels; ++j) {
            const double lo = p.a + j * w;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double th = lo + 0.5 * w * (rule.nodes[q] + 1.0);
                const double phase = z * s_of_theta(th) + sign * seq_.beta_theta(th);
                acc += (0.5 * w * rule.weights[q] * 0.5 * std::sin(th)) * std::polar(1.0, phase);
            }
        }
        return acc;
    };

    cplx total = 0.0;
    for (const auto& p : pieces_) {
        const double periods = (0.5 * std::abs(z) + p.rate) * (p.b - p.a) / (2.0 * pi);
        int panels = std::max(1, static_cast<int>(std::ceil(periods / 3.2)));
        cplx prev = sum_with(p, panels);
        double change = 0.0;
        bool ok = false;
        for (int d = 0; d < 6; ++d) {
            panels *= 2;
            const cplx cur = sum_with(p, panels);
            change = std::abs(cur - prev);
            prev = cur;
            if (change <= 1e-10 * std::max(std::abs(cur), 1.0)) {
                ok = true;
                break;
            }
        }
        if (!ok && change > 1e-8 * std::max(std::abs(prev), 1.0))
            throw AccuracyFailure("filter amplitude did not converge at z = " + std::to_string(z),
                                  change);
        total += prev;
    }
    return z * total;
}

double FilterEvaluator::operator()(double z) const { return std::norm(amplitude(z, 1)); }

FilterTable::FilterTable(const ControlSequence& seq, double z_max)
    : evaluator_seq_(seq), evaluator_(seq)
{
    require(z_max > 0.0, "table range must be positive");
    const int n = static_cast<int>(std::ceil(z_max / width_));
    z_max_ = n * width_;

    // Shared nodes: twice the panel count the evaluator would start from at z_max.
    const auto& rule = quad::gauss_legendre(64);
    std::vector<double> s_node;
    std::vector<cplx> g_node;
    for (const auto& p : evaluator_.pieces_) {
        const double periods = (0.5 * z_max_ + p.rate) * (p.b - p.a) / (2.0 * pi);
        const int panels = 2 * std::max(1, static_cast<int>(std::ceil(periods / 3.2)));
        const double w = (p.b - p.a) / panels;
        for (int j = 0; j < panels; ++j) {
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double th = p.a + j * w + 0.5 * w * (rule.nodes[q] + 1.0);
                s_node.push_back(s_of_theta(th));
                g_node.push_back((0.5 * w * rule.weights[q] * 0.5 * std::sin(th)) *
                                 std::polar(1.0, evaluator_seq_.beta_theta(th)));
            }
        }
    }
    auto F = [&](double z) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < s_node.size(); ++i) acc += g_node[i] * std::polar(1.0, z * s_node[i]);
        return std::norm(z * acc);
    };
    const double check = evaluator_(z_max_);
    const double diff = std::abs(F(z_max_) - check);
    if (diff > 1e-8 * std::max(check, 1.0))
        throw AccuracyFailure("filter table nodes do not resolve z = " + std::to_string(z_max_), diff);

    for (int k = 0; k < n; ++k)
        segments_.push_back(quad::ChebyshevSeries::fit(F, k * width_, (k + 1) * width_, 32));
    const double lo = std::max(0.0, z_max_ - 64.0);
    tail_mean_ = quad::composite([&](double z) { return (*this)(z); }, lo, z_max_, 16, 32) /
                 (z_max_ - lo);
}

double FilterTable::operator()(double z) const
{
    if (z > z_max_) return evaluator_(z);
    const auto k = std::min(static_cast<std::size_t>(std::max(z, 0.0) / width_), segments_.size() - 1);
    return std::max(0.0, segments_[k](z));
}

double filter_analytic(const ControlSequence& seq, double z)
{
    require(z > 0.0, "z must be positive");
    return FilterEvaluator(seq)(z);
}

double filter_general(const ControlSequence& seq, double z, double n_z)
{
    require(z > 0.0, "z must be positive");
    require(n_z >= -1.0 && n_z <= 1.0, "n_z must lie in [-1, 1]");
    // cos[z(u-v)] cos[b(u)-b(v)] = sum_j a_j(u) a_j(v), so the inner integral
    // is sum_j a_j(u) G_j(u) with G_j the running integral of a_j.
    auto terms = [&](double th, double out[4]) {
        const double u = s_of_theta(th);
        const double b = seq.beta_theta(th);
        const double cz = std::cos(z * u), sz = std::sin(z * u);
        const double cb = std::cos(b), sb = std::sin(b);
        out[0] = cz * cb;
        out[1] = cz * sb;
        out[2] = sz * cb;
        out[3] = sz * sb;
    };

    const auto br = theta_breaks(seq);
    struct Running {
        double a, b;
        std::array<quad::ChebyshevSeries, 4> anti;
        std::array<double, 4> offset;
    };
    std::vector<Running> run;
    std::array<double, 4> acc{};
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double a = br[k], b = br[k + 1];
        if (!(b > a)) continue;
        Running r{a, b, {}, acc};
        for (int j = 0; j < 4; ++j) {
            auto f = [&, j](double th) {
                double v[4];
                terms(th, v);
                return v[j] * 0.5 * std::sin(th);
            };
            r.anti[j] = quad::ChebyshevSeries::fit_adaptive(f, a, b, 1e-14, 64, 16384).antiderivative();
            acc[j] += r.anti[j](b);
        }
        run.push_back(std::move(r));
    }

    double outer = 0.0;
    for (const auto& r : run) {
        auto g = [&](double th) {
            double v[4];
            terms(th, v);
            double s = 0.0;
            for (int j = 0; j < 4; ++j) s += v[j] * (r.offset[j] + r.anti[j](th));
            return s * 0.5 * std::sin(th);
        };
        const double periods = (0.5 * z) * (r.b - r.a) / (2.0 * pi);
        const double piece[2] = {r.a, r.b};
        const auto q = quad::integrate_pieces(g, piece, 1e-13, 64,
                                              std::max(1, static_cast<int>(std::ceil(periods / 3.0))), 8);
        if (q.error > 1e-8 * std::max(std::abs(q.value), 1.0))
            throw AccuracyFailure("general filter integral did not converge", q.error);
        outer += q.value;
    }
    // Same double integral with Tr Gamma = 8: int int_{v<u} cos z(u-v) = (1 - cos z)/z^2.
    const double plain = (1.0 - std::cos(z)) / (z * z);
    const double n2 = n_z * n_z;
    return std::max(0.0, 2.0 * z * z * ((1.0 - n2) * outer + n2 * plain));
}

double filter_free_evolution(double z)
{
    const double s = std::sin(0.5 * z);
    return 4.0 * s * s;
}

double filter_udd_bessel(int N, double z)
{
    require(N >= 1, "UDD order must be positive");
    const double j = std::cyl_bessel_j(static_cast<double>(N + 1), 0.5 * z);
    return 16.0 * (N + 1.0) * (N + 1.0) * j * j;
}

double filter_udd_exact(int N, double z)
{
    require(N >= 1, "UDD order must be positive");
    using big = boost::multiprecision::cpp_bin_float_50;
    const big half_pi = boost::math::constants::half_pi<big>();
    big re = 0, im = 0;
    // sum_k (-1)^k [e^{i z s_{k+1}} - e^{i z s_k}] = e^{i z s_0} ... collapsed per node:
    // node k carries weight -(-1)^k + (-1)^{k-1}, endpoints once.
    for (int k = 0; k <= N + 1; ++k) {
        const big sk = pow(sin(half_pi * k / (N + 1)), 2);
        big w;
        if (k == 0)
            w = -1;
        else if (k == N + 1)
            w = (N % 2 == 0) ? 1 : -1;  // (-1)^N
        else
            w = (k % 2 == 0) ? -2 : 2;  // (-1)^{k-1} - (-1)^k
        const big ph = big(z) * sk;
        re += w * cos(ph);
        im += w * sin(ph);
    }
    return static_cast<double>(re * re + im * im);
}

double udd_first_principal_maximum(int N)
{
    require(N >= 1, "UDD order must be positive");
    const double h = 0.02;
    double z = h, prev = filter_udd_exact(N, z);
    double cur = filter_udd_exact(N, z + h);
    while (!(cur < prev) && z < 1e4) {
        z += h;
        prev = cur;
        cur = filter_udd_exact(N, z + h);
    }
    // maximum is bracketed by [z - h, z + h]; golden section
    double a = z - h, b = z + h;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = filter_udd_exact(N, c), fd = filter_udd_exact(N, d);
    while (b - a > 1e-10 * b) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = filter_udd_exact(N, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = filter_udd_exact(N, d);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------

namespace {

struct McRun {
    double mean = 0.0;
    double stderr_value = 0.0;
};

McRun mc_run(const QubitPropagator& prop, double A, double omega, int n_trials,
             std::uint64_t seed, int threads)
{
    std::vector<double> values(n_trials);
    auto work = [&](int i) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(i));
        const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * pi)(rng);
        values[i] = prop.propagate(NoisePath::sinusoid(A, omega, phase)).infidelity();
    };
    threads = std::max(1, std::min(threads, n_trials));
    if (threads == 1) {
        for (int i = 0; i < n_trials; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int i = w; i < n_trials; i += threads) work(i);
            });
        for (auto& th : pool) th.join();
    }
    double s = 0.0, s2 = 0.0;
    for (double v : values) {
        s += v;
        s2 += v * v;
    }
    const double n = n_trials;
    McRun r;
    r.mean = s / n;
    r.stderr_value = std::sqrt(std::max(0.0, (s2 - n * r.mean * r.mean) / (n - 1.0)) / n);
    return r;
}

}  // namespace

MonteCarloEstimate filter_monte_carlo(const ControlSequence& seq, double z, double amplitude_A,
                                      int n_trials, std::uint64_t seed,
                                      const MonteCarloOptions& options)
{
    require(z > 0.0, "z must be positive");
    require(amplitude_A > 0.0, "amplitude must be positive");
    require(n_trials >= 2, "need at least two trials");
    const double T = seq.duration();
    if (!options.allow_strong && amplitude_A * T > 0.1)
        throw Error(ErrorKind::RegimeViolation,
                    "A T = " + std::to_string(amplitude_A * T) +
                        " exceeds 0.1; the estimate assumes linear response");
    const double omega = z / T;
    const int n_steps =
        options.n_steps > 0 ? options.n_steps : std::max(2048, static_cast<int>(std::ceil(32.0 * z)));
    const QubitPropagator prop(seq, n_steps);

    // With S = (A^2 pi / 2)[delta(w' - w) + delta(w' + w)] the infidelity is
    // A^2 F / (2 w^2), so F = 2 w^2 <I> / A^2.
    const double scale = 2.0 * omega * omega / (amplitude_A * amplitude_A);
    const McRun run = mc_run(prop, amplitude_A, omega, n_trials, seed, options.threads);
    MonteCarloEstimate out;
    out.mean_infidelity = run.mean;
    out.estimate = scale * run.mean;
    out.stderr_value = scale * run.stderr_value;
    out.n_trials = n_trials;
    if (options.check_linearity) {
        const McRun half = mc_run(prop, 0.5 * amplitude_A, omega, n_trials, seed, options.threads);
        const double est_half = 4.0 * scale * half.mean;
        const double err = std::hypot(out.stderr_value, 4.0 * scale * half.stderr_value);
        out.regime_warning = std::abs(est_half - out.estimate) > 3.0 * std::max(err, 1e-300);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> log_grid(double lo, double hi, int n)
{
    require(lo > 0.0 && hi > lo && n >= 2, "bad log grid");
    std::vector<double> out(n);
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, (a * (n - 1 - i) + b * i) / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> default_z_grid() { return log_grid(0.1, 1000.0, 200); }

FilterCurve analytic_curve(const ControlSequence& seq, const std::vector<double>& z)
{
    FilterEvaluator F(seq);
    FilterCurve c;
    c.z = z;
    c.method = FilterMethod::AnalyticIntegral;
    c.label = seq.label();
    for (double v : z) c.F.push_back(F(v));
    return c;
}

FilterCurve monte_carlo_curve(const ControlSequence& seq, const std::vector<double>& z,
                              double amplitude_A, int n_trials, std::uint64_t seed,
                              const MonteCarloOptions& options)
{
    FilterCurve c;
    c.z = z;
    c.method = FilterMethod::MonteCarlo;
    c.label = seq.label();
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto e = filter_monte_carlo(seq, z[i], amplitude_A, n_trials,
                                          stream_seed(seed, i), options);
        c.F.push_back(e.estimate);
        c.stderr_values.push_back(e.stderr_value);
    }
    return c;
}

FilterCurve bessel_curve(int N, const std::vector<double>& z)
{
    FilterCurve c;
    c.z = z;
    c.method = FilterMethod::UddBesselApprox;
    c.label = "UDD(" + std::to_string(N) + ")";
    for (double v : z) c.F.push_back(filter_udd_bessel(N, v));
    return c;
}

}  // namespace cafe
