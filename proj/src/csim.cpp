#include "cafe/csim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "cafe/error.hpp"
#include "cafe/filterfn.hpp"
#include "cafe/quadrature.hpp"

namespace cafe {

using std::numbers::pi;

SU2 SU2::operator*(const SU2& o) const
{
    // (w1 - i v1.s)(w2 - i v2.s) = w1 w2 - v1.v2 - i (w1 v2 + w2 v1 + v1 x v2).s
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + o.w * x + (y * o.z - z * o.y),
            w * o.y + o.w * y + (z * o.x - x * o.z),
            w * o.z + o.w * z + (x * o.y - y * o.x)};
}

double SU2::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Eigen::Matrix2cd SU2::matrix() const
{
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    m << C(w, -z), C(-y, -x), C(y, -x), C(w, z);
    return m;
}

SU2 x_rotation(double phi) { return {std::cos(0.5 * phi), std::sin(0.5 * phi), 0.0, 0.0}; }

// ---------------------------------------------------------------------------

StepGrid make_step_grid(const ControlSequence& seq, int n_steps, bool follow_beta)
{
    require(n_steps >= 1, "need at least one step");
    const double T = seq.duration();
    const auto breaks = seq.breakpoints();
    const bool impulsive = seq.impulsive();
    const std::size_t pieces = breaks.size() - 1;

    // Metric dt/T + |d beta|/(20 pi) on a fine grid per piece.
    std::vector<std::vector<double>> fine_t(pieces), fine_m(pieces);
    double total = 0.0;
    // Fixed resolution so that grids for n and 2n follow the same density.
    const int fine_total = 1 << 16;
    for (std::size_t k = 0; k < pieces; ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const int m = std::max(16, static_cast<int>(fine_total * (b - a) / T));
        auto& ft = fine_t[k];
        auto& fm = fine_m[k];
        ft.resize(m + 1);
        fm.assign(m + 1, 0.0);
        double prev_beta = 0.0;
        for (int i = 0; i <= m; ++i) {
            ft[i] = (i == m) ? b : a + (b - a) * i / m;
            // Stay off the piece ends so impulses are not counted.
            const double tb = std::clamp(ft[i], a + 1e-12 * (b - a), b - 1e-12 * (b - a));
            const double beta = (impulsive || !follow_beta) ? 0.0 : seq.beta(tb);
            if (i > 0)
                fm[i] = fm[i - 1] + (ft[i] - ft[i - 1]) / T + std::abs(beta - prev_beta) / (20.0 * pi);
            prev_beta = beta;
        }
        total += fm[m];
    }

    StepGrid g;
    g.t.push_back(0.0);
    for (std::size_t k = 0; k < pieces; ++k) {
        const auto& ft = fine_t[k];
        const auto& fm = fine_m[k];
        const double share = fm.back();
        const int n = std::max(1, static_cast<int>(std::lround(n_steps * share / total)));
        std::size_t j = 0;
        for (int i = 1; i < n; ++i) {
            const double target = share * i / n;
            while (j + 1 < fm.size() && fm[j + 1] < target) ++j;
            const double f = (target - fm[j]) / std::max(fm[j + 1] - fm[j], 1e-300);
            g.t.push_back(ft[j] + f * (ft[j + 1] - ft[j]));
        }
        g.t.push_back(breaks[k + 1]);
    }
    g.t.back() = T;

    const std::size_t steps = g.t.size() - 1;
    g.beta_lo.resize(steps);
    g.beta_mid.resize(steps);
    g.dbeta.resize(steps);
    g.jump.assign(steps, 0.0);
    for (std::size_t i = 0; i < steps; ++i) {
        const double mid = 0.5 * (g.t[i] + g.t[i + 1]);
        if (impulsive) {
            const double b = seq.beta(mid);
            g.beta_lo[i] = b;
            g.beta_mid[i] = b;
            g.dbeta[i] = 0.0;
        } else {
            const double lo = seq.beta(g.t[i]);
            g.beta_lo[i] = lo;
            g.beta_mid[i] = seq.beta(mid);
            g.dbeta[i] = seq.beta(g.t[i + 1]) - lo;
        }
    }
    if (impulsive) {
        for (const auto& p : seq.impulses()) {
            const auto it = std::lower_bound(g.t.begin(), g.t.end(), p.time - 1e-13 * T);
            const auto i = static_cast<std::size_t>(it - g.t.begin());
            require(i < steps, "impulse at the end of the sequence is not supported");
            g.jump[i] += p.area;
        }
    }
    return g;
}

QubitPropagator::QubitPropagator(const ControlSequence& seq, int n_steps)
    : grid_(make_step_grid(seq, n_steps)), T_(seq.duration())
{
}

SU2 QubitPropagator::propagate(const NoisePath& dephasing, const NoisePath* control_noise) const
{
    const auto& g = grid_;
    const std::size_t steps = g.t.size() - 1;
    const bool noisy_control = control_noise != nullptr && !control_noise->is_zero();
    SU2 U;
    double bn = 0.0;     // noisy pulse area
    double ideal = 0.0;  // noiseless pulse area, same summation order
    for (std::size_t i = 0; i < steps; ++i) {
        const double t0 = g.t[i], t1 = g.t[i + 1];
        if (g.jump[i] != 0.0) {
            const double eps = noisy_control ? (*control_noise)(t0) : 0.0;
            bn += g.jump[i] * (1.0 + eps);
            ideal += g.jump[i];
        }
        const double tm = 0.5 * (t0 + t1);
        const double dt = t1 - t0;
        const double scale = 1.0 + (noisy_control ? (*control_noise)(tm) : 0.0);
        const double db = g.dbeta[i] * scale;
        const double bmid = bn + (g.beta_mid[i] - g.beta_lo[i]) * scale;
        const double B = dephasing(tm);
        if (B != 0.0) {
            // Magnus exponent for B [cos(beta) sz + sin(beta) sy] with beta
            // linear across the step.
            const double h = 0.5 * db;
            const double sinc = std::abs(h) < 1e-4 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
            const double first = B * dt * sinc;
            const double second =
                std::abs(db) < 1e-3 ? B * B * dt * dt * db * (1.0 / 6.0 - db * db / 120.0)
                                    : B * B * dt * dt * (db - std::sin(db)) / (db * db);
            const double vx = second;
            const double vy = first * std::sin(bmid);
            const double vz = first * std::cos(bmid);
            const double angle = std::sqrt(vx * vx + vy * vy + vz * vz);
            if (angle > 0.0) {
                const double s = std::sin(angle) / angle;
                U = SU2{std::cos(angle), s * vx, s * vy, s * vz} * U;
            }
        }
        bn += db;
        ideal += g.dbeta[i];
    }
    return x_rotation(bn - ideal) * U;
}

SU2 propagate_qubit(const ControlSequence& seq, const NoisePath& dephasing,
                    const NoisePath* control_noise, int n_steps)
{
    return QubitPropagator(seq, n_steps).propagate(dephasing, control_noise);
}

double step_doubling_change(const ControlSequence& seq, const NoisePath& dephasing,
                            const NoisePath* control_noise, int n_steps)
{
    const double a = propagate_qubit(seq, dephasing, control_noise, n_steps).infidelity();
    const double b = propagate_qubit(seq, dephasing, control_noise, 2 * n_steps).infidelity();
    return std::abs(a - b);
}

// ---------------------------------------------------------------------------

int default_step_count(const ControlSequence& seq, const NoiseModel& dephasing,
                       const NoiseModel* control_noise)
{
    const double T = seq.duration();
    int need = 2048;
    if (dephasing.family == NoiseFamily::Sinusoid)
        need = std::max(need, static_cast<int>(std::ceil(32.0 * std::abs(dephasing.frequency) * T)));
    else
        need = std::max(need, 2 * default_grid_size(dephasing, T));
    if (control_noise != nullptr) need = std::max(need, 2 * default_grid_size(*control_noise, T));
    return need;
}

NoiseModel default_control_noise(double T, std::uint64_t seed)
{
    NoiseModel m;
    m.family = NoiseFamily::GaussianSpectrum;
    m.rms = 0.01;
    m.tau_c = 0.5 * T;
    m.seed = seed;
    return m;
}

namespace {

template <class Fn>
void parallel_for(int n, int threads, Fn&& fn)
{
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

EnsembleResult ensemble_infidelity(const ControlSequence& seq, const NoiseModel& dephasing,
                                   const std::optional<NoiseModel>& control_noise, int n_trials,
                                   const EnsembleOptions& options)
{
    require(n_trials >= 2, "need at least two trials");
    const double T = seq.duration();
    const int n_steps =
        options.n_steps > 0
            ? options.n_steps
            : default_step_count(seq, dephasing, control_noise ? &*control_noise : nullptr);
    const QubitPropagator prop(seq, n_steps);
    const int grid_b = dephasing.family == NoiseFamily::Sinusoid
                           ? 256
                           : default_grid_size(dephasing, T);
    const int grid_c = control_noise ? default_grid_size(*control_noise, T) : 0;

    std::vector<double> vx(n_trials), vy(n_trials), vz(n_trials);
    parallel_for(n_trials, options.threads, [&](int i) {
        const auto trial = static_cast<std::uint64_t>(i);
        const NoisePath b = synthesize_noise(dephasing, T, grid_b, trial, 2 * options.stream);
        SU2 U;
        if (control_noise) {
            const NoisePath c =
                synthesize_noise(*control_noise, T, grid_c, trial, 2 * options.stream + 1);
            U = prop.propagate(b, &c);
        } else {
            U = prop.propagate(b, nullptr);
        }
        vx[i] = U.x * U.x;
        vy[i] = U.y * U.y;
        vz[i] = U.z * U.z;
    });

    // Ordered reduction keeps results independent of the thread count.
    EnsembleResult r;
    r.n_trials = n_trials;
    r.n_steps = prop.steps();
    double sum = 0.0, sum2 = 0.0, sx = 0.0, sy = 0.0, sz = 0.0;
    for (int i = 0; i < n_trials; ++i) {
        const double I = vx[i] + vy[i] + vz[i];
        sum += I;
        sum2 += I * I;
        sx += vx[i];
        sy += vy[i];
        sz += vz[i];
    }
    const double n = n_trials;
    const double mean = sum / n;
    // R_jj = 1 - 2 (|v|^2 - v_j^2)
    r.transfer = {1.0 - 2.0 * (mean - sx / n), 1.0 - 2.0 * (mean - sy / n),
                  1.0 - 2.0 * (mean - sz / n)};
    r.infidelity_mean = mean;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    r.infidelity_stderr = std::sqrt(var / n);
    r.state_fidelity = 1.0 - 2.0 * mean / 3.0;
    return r;
}

// ---------------------------------------------------------------------------

double overlay_z_max(const NoiseModel& dephasing, double T)
{
    if (dephasing.family == NoiseFamily::Sinusoid) return std::max(16.0, 1.1 * dephasing.frequency * T);
    const double hi = (dephasing.family == NoiseFamily::GaussianSpectrum ? 10.0 : 1e3) / dephasing.tau_c;
    return std::clamp(hi * T, 16.0, 2048.0);
}

OverlayResult theory_overlay(const FilterTable& table, const NoiseModel& dephasing)
{
    const double T = table.sequence().duration();
    OverlayResult out;
    if (dephasing.family == NoiseFamily::Sinusoid) {
        const double w = dephasing.frequency;
        require(w > 0.0, "sinusoid frequency must be positive");
        out.infidelity = dephasing.rms * dephasing.rms * table(w * T) / (2.0 * w * w);
        return out;
    }
    require(dephasing.tau_c > 0.0, "correlation time must be positive");
    const bool gaussian = dephasing.family == NoiseFamily::GaussianSpectrum;
    const double ln10 = std::log(10.0);
    const double lo = std::log(1e-3 / dephasing.tau_c);
    const double hi = std::log((gaussian ? 10.0 : 1e3) / dephasing.tau_c);

    const double zmax = table.z_max();
    auto filter = [&](double z) { return z <= zmax ? table(z) : table.tail_mean(); };
    // In x = ln w the integrand is S(w) F(wT) / (pi w).
    auto integrand = [&](double x) {
        const double w = std::exp(x);
        return spectral_density(dephasing, w) * filter(w * T) / (pi * w);
    };
    auto integrate = [&](double a, double b) {
        // F oscillates with period ~2 pi in z: keep a few nodes per period.
        const double z_top = std::min(std::exp(b) * T, zmax);
        const int panels = std::max(4, static_cast<int>(std::ceil(z_top * (b - a) / pi)));
        const double piece[2] = {a, b};
        const double rough = quad::composite(integrand, a, b, panels, 32);
        return quad::integrate_pieces(integrand, piece, std::max(1e-9 * std::abs(rough), 1e-300),
                                      32, panels, 6)
            .value;
    };

    double total = 0.0;
    for (double a = lo; a < hi - 1e-12; a += ln10) total += integrate(a, std::min(a + ln10, hi));
    const double tail = std::abs(integrate(lo - ln10, lo)) +
                        std::abs(integrate(hi, hi + (gaussian ? std::log(2.0) : ln10)));
    out.infidelity = total;
    out.tail_fraction = total != 0.0 ? tail / std::abs(total) : 0.0;
    out.converged = out.tail_fraction <= 0.01;
    return out;
}

OverlayResult theory_overlay(const ControlSequence& seq, const NoiseModel& dephasing)
{
    return theory_overlay(FilterTable(seq, overlay_z_max(dephasing, seq.duration())), dephasing);
}

std::vector<double> default_tau_grid() { return log_grid(1e-2, 1e2, 25); }

std::vector<SweepTable> sweep_correlation_time(const std::vector<ControlSequence>& seqs,
                                               NoiseFamily family, double rms,
                                               const std::vector<double>& tau_over_T,
                                               bool with_control_noise,
                                               const SweepOptions& options)
{
    require(!tau_over_T.empty(), "tau grid is empty");
    std::vector<SweepTable> out;
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        const auto& seq = seqs[s];
        const double T = seq.duration();
        SweepTable table;
        table.label = seq.label();
        std::optional<FilterTable> filter;
        if (options.with_theory) {
            double zmax = 16.0;
            for (double r : tau_over_T) {
                NoiseModel probe;
                probe.family = family;
                probe.tau_c = r * T;
                zmax = std::max(zmax, overlay_z_max(probe, T));
            }
            filter.emplace(seq, zmax);
        }
        for (std::size_t g = 0; g < tau_over_T.size(); ++g) {
            require(tau_over_T[g] > 0.0, "tau_c must be positive");
            NoiseModel dephasing;
            dephasing.family = family;
            dephasing.rms = rms;
            dephasing.tau_c = tau_over_T[g] * T;
            dephasing.seed = stream_seed(options.seed, g, 0);
            std::optional<NoiseModel> control;
            if (with_control_noise) control = default_control_noise(T, stream_seed(options.seed, g, 1));
            EnsembleOptions eo;
            eo.threads = options.threads;
            SweepRow row;
            row.tau_over_T = tau_over_T[g];
            row.ensemble = ensemble_infidelity(seq, dephasing, control, options.n_trials, eo);
            row.theory = filter ? theory_overlay(*filter, dephasing).infidelity : std::nan("");
            table.rows.push_back(row);
        }
        out.push_back(std::move(table));
    }
    return out;
}

}  // namespace cafe
