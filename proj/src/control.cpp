#include "cafe/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cafe/error.hpp"

namespace cafe {

using std::numbers::pi;

const char* to_string(Family family)
{
    switch (family) {
    case Family::UDD: return "UDD";
    case Family::SmoothUDD: return "SmoothUDD";
    case Family::CafeRaw: return "CafeRaw";
    case Family::CafeSpliced: return "CafeSpliced";
    case Family::PulseTrain: return "PulseTrain";
    case Family::Custom: return "Custom";
    }
    return "unknown";
}

const char* to_string(PulseShape shape)
{
    return shape == PulseShape::SineSquared ? "sine_squared" : "rectangular";
}

double Waveform::beta_theta(double theta, double T) const
{
    const double s = std::sin(0.5 * theta);
    return beta(T * s * s);
}

// ---------------------------------------------------------------------------
// Waveform implementations

namespace {

class ImpulseWaveform final : public Waveform {
public:
    explicit ImpulseWaveform(std::vector<Impulse> impulses) : impulses_(std::move(impulses)) {}

    double beta(double t) const override
    {
        double b = 0.0;
        for (const auto& p : impulses_)
            if (t >= p.time) b += p.area;
        return b;
    }
    double alpha(double) const override
    {
        throw Error(ErrorKind::NotEvaluable, "impulsive control has no pointwise alpha");
    }
    double alpha_rate(double t) const override { return alpha(t); }
    std::vector<double> breakpoints() const override
    {
        std::vector<double> out;
        for (const auto& p : impulses_) out.push_back(p.time);
        return out;
    }
    std::vector<Impulse> impulses() const override { return impulses_; }

private:
    std::vector<Impulse> impulses_;
};

// beta(theta) = (N+1) theta + sum_k lambda_k sin((N+1) k theta)
class ChebyshevFourierWaveform final : public Waveform {
public:
    ChebyshevFourierWaveform(int N, std::vector<double> lambdas, double T)
        : harmonic_(N + 1), lambdas_(std::move(lambdas)), T_(T)
    {
    }

    double beta_theta(double theta, double) const override
    {
        double b = harmonic_ * theta;
        for (std::size_t k = 0; k < lambdas_.size(); ++k)
            b += lambdas_[k] * std::sin(harmonic_ * (k + 1.0) * theta);
        return b;
    }
    double beta(double t) const override { return beta_theta(theta_of(t), T_); }

    double alpha(double t) const override
    {
        const double s = t / T_;
        const double sin_theta = 2.0 * std::sqrt(s * (1.0 - s));
        if (!(sin_theta > 0.0))
            throw Error(ErrorKind::PoleSingularity, "alpha has a pole at the sequence endpoint");
        return dbeta(theta_of(t)) / (T_ * sin_theta);
    }

    double alpha_rate(double t) const override
    {
        const double s = t / T_;
        const double sin_theta = 2.0 * std::sqrt(s * (1.0 - s));
        if (!(sin_theta > 0.0))
            throw Error(ErrorKind::PoleSingularity, "alpha has a pole at the sequence endpoint");
        const double cos_theta = 1.0 - 2.0 * s;
        const double th = theta_of(t);
        return 2.0 * (d2beta(th) * sin_theta - dbeta(th) * cos_theta) /
               (T_ * T_ * sin_theta * sin_theta * sin_theta);
    }

    bool endpoint_poles() const override { return true; }

private:
    double theta_of(double t) const
    {
        const double s = t / T_;
        if (s <= 0.5) return 2.0 * std::asin(std::sqrt(std::max(s, 0.0)));
        return pi - 2.0 * std::asin(std::sqrt(std::max(1.0 - s, 0.0)));
    }
    double dbeta(double theta) const
    {
        double d = harmonic_;
        for (std::size_t k = 0; k < lambdas_.size(); ++k) {
            const double w = harmonic_ * (k + 1.0);
            d += lambdas_[k] * w * std::cos(w * theta);
        }
        return d;
    }
    double d2beta(double theta) const
    {
        double d = 0.0;
        for (std::size_t k = 0; k < lambdas_.size(); ++k) {
            const double w = harmonic_ * (k + 1.0);
            d -= lambdas_[k] * w * w * std::sin(w * theta);
        }
        return d;
    }

    double harmonic_;
    std::vector<double> lambdas_;
    double T_;
};

class SplicedWaveform final : public Waveform {
public:
    SplicedWaveform(ControlSequence base, double z0, double z1, int L, Symmetry sym, double T)
        : base_(std::move(base)), z0_(z0), z1_(z1), windows_(2 * L), odd_(sym == Symmetry::Odd),
          T_(T), h_(T / (2.0 * L)), scale_((z1 - z0) / h_),
          beta0_(base_.beta(z0)), area_(base_.beta(z1) - beta0_)
    {
    }

    double beta(double t) const override
    {
        const auto [w, f] = locate(t);
        if (w % 2 == 0) return base_.beta(base_time(f)) - beta0_;
        if (odd_) return base_.beta(base_time(1.0 - f)) - beta0_;
        return area_ - (base_.beta(base_time(f)) - beta0_);
    }

    double alpha(double t) const override
    {
        const auto [w, f] = locate(t);
        if (w % 2 == 0) return scale_ * base_.alpha(base_time(f));
        if (odd_) return -scale_ * base_.alpha(base_time(1.0 - f));
        return -scale_ * base_.alpha(base_time(f));
    }

    double alpha_rate(double t) const override
    {
        const auto [w, f] = locate(t);
        const double k2 = scale_ * scale_;
        if (w % 2 == 0) return k2 * base_.alpha_rate(base_time(f));
        if (odd_) return k2 * base_.alpha_rate(base_time(1.0 - f));
        return -k2 * base_.alpha_rate(base_time(f));
    }

    std::vector<double> breakpoints() const override
    {
        std::vector<double> out;
        for (int w = 1; w < windows_; ++w) out.push_back(w * h_);
        return out;
    }

private:
    // Window index and fractional position within it.
    std::pair<int, double> locate(double t) const
    {
        int w = static_cast<int>(std::floor(t / h_));
        w = std::clamp(w, 0, windows_ - 1);
        double f = (t - w * h_) / h_;
        return {w, std::clamp(f, 0.0, 1.0)};
    }
    double base_time(double f) const
    {
        if (f >= 1.0) return z1_;
        if (f <= 0.0) return z0_;
        return z0_ + f * (z1_ - z0_);
    }

    ControlSequence base_;
    double z0_, z1_;
    int windows_;
    bool odd_;
    double T_, h_, scale_;
    double beta0_, area_;
};

class PulseTrainWaveform final : public Waveform {
public:
    PulseTrainWaveform(std::vector<double> centers, std::vector<int> signs, double width,
                       PulseShape shape)
        : centers_(std::move(centers)), signs_(std::move(signs)), width_(width), shape_(shape)
    {
    }

    double beta(double t) const override
    {
        double b = 0.0;
        for (std::size_t j = 0; j < centers_.size(); ++j) {
            const double x = (t - start(j)) / width_;
            if (x <= 0.0) break;
            b += signs_[j] * pi * fraction(std::min(x, 1.0));
        }
        return b;
    }

    double alpha(double t) const override
    {
        const auto j = pulse_at(t);
        if (j < 0) return 0.0;
        const double x = (t - start(j)) / width_;
        if (shape_ == PulseShape::Rectangular) return signs_[j] * pi / (2.0 * width_);
        const double s = std::sin(pi * x);
        return signs_[j] * (pi / width_) * s * s;
    }

    double alpha_rate(double t) const override
    {
        const auto j = pulse_at(t);
        if (j < 0 || shape_ == PulseShape::Rectangular) return 0.0;
        const double x = (t - start(j)) / width_;
        return signs_[j] * (pi * pi / (width_ * width_)) * std::sin(2.0 * pi * x);
    }

    std::vector<double> breakpoints() const override
    {
        std::vector<double> out;
        for (std::size_t j = 0; j < centers_.size(); ++j) {
            out.push_back(start(j));
            out.push_back(start(j) + width_);
        }
        return out;
    }

    bool alpha_jumps() const override { return shape_ == PulseShape::Rectangular; }

private:
    double start(std::size_t j) const { return centers_[j] - 0.5 * width_; }

    // Fraction of the pulse area delivered after fraction x of its width.
    double fraction(double x) const
    {
        if (shape_ == PulseShape::Rectangular) return x;
        return x - std::sin(2.0 * pi * x) / (2.0 * pi);
    }

    long pulse_at(double t) const
    {
        for (std::size_t j = 0; j < centers_.size(); ++j)
            if (t >= start(j) && t <= start(j) + width_) return static_cast<long>(j);
        return -1;
    }

    std::vector<double> centers_;
    std::vector<int> signs_;
    double width_;
    PulseShape shape_;
};

class CustomWaveform final : public Waveform {
public:
    CustomWaveform(double T, std::function<double(double)> alpha,
                   std::function<double(double)> beta, std::function<double(double)> rate)
        : T_(T), alpha_(std::move(alpha)), beta_(std::move(beta)), rate_(std::move(rate))
    {
    }

    double beta(double t) const override { return beta_(t); }
    double alpha(double t) const override { return alpha_(t); }
    double alpha_rate(double t) const override
    {
        if (rate_) return rate_(t);
        const double h = 1e-6 * T_;
        const double lo = std::max(0.0, t - h), hi = std::min(T_, t + h);
        return (alpha_(hi) - alpha_(lo)) / (hi - lo);
    }

private:
    double T_;
    std::function<double(double)> alpha_, beta_, rate_;
};

void check_duration(double T)
{
    require(std::isfinite(T) && T > 0.0, "duration T must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// ControlSequence

ControlSequence::ControlSequence(Family family, double duration, SequenceParams params,
                                 std::shared_ptr<const Waveform> waveform, std::string label)
    : family_(family), duration_(duration), params_(std::move(params)),
      waveform_(std::move(waveform)), label_(std::move(label))
{
    check_duration(duration_);
    require(waveform_ != nullptr, "control sequence needs a waveform");
}

void ControlSequence::check_time(double t) const
{
    if (!(t >= 0.0 && t <= duration_)) {
        std::ostringstream msg;
        msg << "time " << t << " outside [0, " << duration_ << "]";
        throw Error(ErrorKind::InvalidParameter, msg.str());
    }
}

double ControlSequence::beta(double t) const
{
    check_time(t);
    return waveform_->beta(t);
}

double ControlSequence::alpha(double t) const
{
    check_time(t);
    return waveform_->alpha(t);
}

double ControlSequence::alpha_rate(double t) const
{
    check_time(t);
    return waveform_->alpha_rate(t);
}

double ControlSequence::beta_theta(double theta) const
{
    require(theta >= 0.0 && theta <= pi, "theta outside [0, pi]");
    return waveform_->beta_theta(theta, duration_);
}

std::vector<double> ControlSequence::breakpoints() const
{
    std::vector<double> out = waveform_->breakpoints();
    out.push_back(0.0);
    out.push_back(duration_);
    std::erase_if(out, [&](double t) { return !(t >= 0.0 && t <= duration_); });
    std::sort(out.begin(), out.end());
    const double eps = 1e-14 * duration_;
    out.erase(std::unique(out.begin(), out.end(),
                          [&](double a, double b) { return std::abs(a - b) <= eps; }),
              out.end());
    out.front() = 0.0;
    out.back() = duration_;
    return out;
}

bool ControlSequence::is_identity(double tol) const
{
    const double b = beta(duration_);
    const double r = std::remainder(b, 2.0 * pi);
    return std::abs(r) <= tol;
}

// ---------------------------------------------------------------------------
// Factories

std::vector<double> udd_times(int N, double T)
{
    std::vector<double> out(N);
    for (int j = 1; j <= N; ++j) {
        const double s = std::sin(j * pi / (2.0 * (N + 1)));
        out[j - 1] = T * s * s;
    }
    return out;
}

ControlSequence make_udd(int N, double T, bool alternate_signs)
{
    require(N >= 1, "UDD needs N >= 1");
    check_duration(T);
    std::vector<Impulse> impulses;
    SequenceParams p;
    p.N = N;
    p.pulse_count = N;
    p.alternate_signs = alternate_signs;
    const auto times = udd_times(N, T);
    for (int j = 0; j < N; ++j) {
        const int sign = (alternate_signs && j % 2 == 1) ? -1 : 1;
        impulses.push_back({times[j], sign * pi});
        p.axis_signs.push_back(sign);
    }
    return ControlSequence(Family::UDD, T, std::move(p),
                           std::make_shared<ImpulseWaveform>(std::move(impulses)),
                           "UDD(" + std::to_string(N) + ")");
}

ControlSequence make_smooth_udd(int N, double T)
{
    require(N >= 1, "smooth UDD needs N >= 1");
    check_duration(T);
    SequenceParams p;
    p.N = N;
    return ControlSequence(Family::SmoothUDD, T, std::move(p),
                           std::make_shared<ChebyshevFourierWaveform>(N, std::vector<double>{}, T),
                           "SUDD(" + std::to_string(N) + ")");
}

ControlSequence make_cafe_raw(int N, std::vector<double> lambdas, double T)
{
    require(N >= 1, "CAFE needs N >= 1");
    check_duration(T);
    for (double l : lambdas) require(std::isfinite(l), "lambda values must be finite");
    SequenceParams p;
    p.N = N;
    p.lambdas = lambdas;
    const std::string label =
        "CAFE(" + std::to_string(N) + "," + std::to_string(lambdas.size()) + ")";
    return ControlSequence(Family::CafeRaw, T, std::move(p),
                           std::make_shared<ChebyshevFourierWaveform>(N, std::move(lambdas), T),
                           label);
}

ControlSequence make_pulse_train(int N, double duty_cycle, double T, PulseShape shape,
                                 bool alternate_signs)
{
    require(N >= 1, "pulse train needs N >= 1");
    require(duty_cycle > 0.0 && duty_cycle <= 1.0, "duty cycle must lie in (0, 1]");
    check_duration(T);
    const double width = duty_cycle * T / N;
    const auto centers = udd_times(N, T);
    const double touch = 1e-12 * T;
    if (centers.front() - 0.5 * width < -touch)
        throw Error(ErrorKind::InvalidParameter, "pulse 1 crosses t = 0");
    if (centers.back() + 0.5 * width > T + touch)
        throw Error(ErrorKind::InvalidParameter,
                    "pulse " + std::to_string(N) + " crosses t = T");
    for (int j = 0; j + 1 < N; ++j) {
        if (centers[j + 1] - centers[j] < width - touch)
            throw Error(ErrorKind::InvalidParameter,
                        "pulses " + std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                            " overlap");
    }
    SequenceParams p;
    p.N = N;
    p.pulse_count = N;
    p.duty_cycle = duty_cycle;
    p.shape = shape;
    p.alternate_signs = alternate_signs;
    std::vector<int> signs(N, 1);
    if (alternate_signs)
        for (int j = 1; j < N; j += 2) signs[j] = -1;
    p.axis_signs = signs;
    std::ostringstream label;
    label << "PT(" << N << "," << duty_cycle;
    if (shape == PulseShape::Rectangular) label << ",rect";
    if (!alternate_signs) label << ",noalt";
    label << ")";
    return ControlSequence(Family::PulseTrain, T, std::move(p),
                           std::make_shared<PulseTrainWaveform>(centers, signs, width, shape),
                           label.str());
}

ControlSequence make_custom(double T, std::function<double(double)> alpha,
                            std::function<double(double)> beta,
                            std::function<double(double)> alpha_rate, std::string label)
{
    check_duration(T);
    require(static_cast<bool>(alpha) && static_cast<bool>(beta),
            "custom sequence needs alpha and beta");
    return ControlSequence(Family::Custom, T, {},
                           std::make_shared<CustomWaveform>(T, std::move(alpha), std::move(beta),
                                                            std::move(alpha_rate)),
                           std::move(label));
}

ControlSequence make_free_evolution(double T)
{
    return make_custom(
        T, [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
        "FREE");
}

ControlSequence make_constant_alpha(double T, double a)
{
    return make_custom(
        T, [a](double) { return a; }, [a](double t) { return 2.0 * a * t; },
        [](double) { return 0.0; }, "CONST");
}

// ---------------------------------------------------------------------------
// Operations

namespace {

// Interior grid uniform in theta, symmetric about T/2.
std::vector<double> theta_grid(double T, int n)
{
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) {
        const double s = std::sin(0.5 * pi * (i + 1.0) / (n + 1.0));
        t[i] = T * s * s;
    }
    return t;
}

double polish_root(const ControlSequence& seq, double a, double b, double fa, double fb,
                   double scale)
{
    // Illinois false position with a bisection fallback.
    int side = 0;
    double c = a;
    for (int it = 0; it < 200; ++it) {
        c = (fa * b - fb * a) / (fa - fb);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const double fc = seq.alpha(c);
        if (fc == 0.0 || std::abs(fc) < 1e-13 * scale) return c;
        if ((fc > 0.0) == (fa > 0.0)) {
            a = c;
            fa = fc;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = c;
            fb = fc;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
        if (b - a < 4.0 * std::numeric_limits<double>::epsilon() * seq.duration()) break;
    }
    return c;
}

}  // namespace

Symmetry alpha_symmetry(const ControlSequence& seq, double rel_tol)
{
    const double T = seq.duration();
    const auto grid = theta_grid(T, 513);
    std::vector<double> a(grid.size());
    double big = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        a[i] = seq.alpha(grid[i]);
        big = std::max(big, std::abs(a[i]));
    }
    if (big == 0.0) return Symmetry::Even;
    bool even = true, odd = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double mirror = a[grid.size() - 1 - i];
        if (std::abs(a[i] - mirror) > rel_tol * big) even = false;
        if (std::abs(a[i] + mirror) > rel_tol * big) odd = false;
    }
    if (even) return Symmetry::Even;
    if (odd) return Symmetry::Odd;
    return Symmetry::None;
}

std::vector<double> find_alpha_zeros(const ControlSequence& seq)
{
    const double T = seq.duration();
    const auto grid = theta_grid(T, 4095);
    std::vector<double> a(grid.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        a[i] = seq.alpha(grid[i]);
        scale = std::max(scale, std::abs(a[i]));
    }
    std::vector<double> zeros;
    if (scale == 0.0) return zeros;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (a[i] == 0.0) {
            if (i > 0 && a[i - 1] * a[i + 1] < 0.0) zeros.push_back(grid[i]);
            continue;
        }
        if (a[i] * a[i + 1] < 0.0)
            zeros.push_back(polish_root(seq, grid[i], grid[i + 1], a[i], a[i + 1], scale));
    }
    const Symmetry sym = alpha_symmetry(seq);
    if (sym != Symmetry::None) {
        const std::size_t n = zeros.size();
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double lo = 0.5 * (zeros[i] + (T - zeros[n - 1 - i]));
            zeros[i] = lo;
            zeros[n - 1 - i] = T - lo;
        }
        if (n % 2 == 1) zeros[n / 2] = 0.5 * T;
    }
    return zeros;
}

ControlSequence splice_and_invert(const ControlSequence& seq, int root_index, int repetitions)
{
    require(root_index >= 1, "root index r must be positive");
    require(repetitions >= 1, "repetitions L must be positive");
    const Symmetry sym = alpha_symmetry(seq);
    if (sym == Symmetry::None)
        throw Error(ErrorKind::UnsupportedSymmetry,
                    "alpha is neither even nor odd about the midpoint");
    const auto zeros = find_alpha_zeros(seq);
    const auto n = static_cast<int>(zeros.size());
    if (n < 2 * root_index) {
        throw Error(ErrorKind::InvalidParameter,
                    "need " + std::to_string(root_index) + " zeros from each end, found " +
                        std::to_string(n) + " in total");
    }
    const double z0 = zeros[root_index - 1];
    const double z1 = zeros[n - root_index];

    SequenceParams p = seq.params();
    p.root_index = root_index;
    p.repetitions = repetitions;
    std::string label = seq.label();
    if (seq.family() == Family::CafeRaw && label.size() > 1)
        label = label.substr(0, label.size() - 1) + "," + std::to_string(root_index) + ")x" +
                std::to_string(repetitions);
    else
        label += "[r=" + std::to_string(root_index) + "]x" + std::to_string(repetitions);
    const double T = seq.duration();
    return ControlSequence(Family::CafeSpliced, T, std::move(p),
                           std::make_shared<SplicedWaveform>(seq, z0, z1, repetitions, sym, T),
                           label);
}

double max_slew_rate(const ControlSequence& seq)
{
    if (seq.impulsive())
        throw Error(ErrorKind::InfiniteSlew, "impulsive control has unbounded slew rate");
    if (seq.has_endpoint_poles())
        throw Error(ErrorKind::InfiniteSlew, "alpha has endpoint poles");
    if (seq.has_alpha_jumps())
        throw Error(ErrorKind::InfiniteSlew, "alpha is discontinuous");

    const double T = seq.duration();
    const auto breaks = seq.breakpoints();
    struct Candidate {
        double value, lo, hi;
    };
    std::vector<Candidate> candidates;
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const int m = std::max(64, static_cast<int>(20000.0 * (b - a) / T));
        const double h = (b - a) / m;
        std::vector<double> v(m);
        for (int i = 0; i < m; ++i) v[i] = std::abs(seq.alpha_rate(a + (i + 0.5) * h));
        for (int i = 0; i < m; ++i) {
            const bool peak = (i == 0 || v[i] >= v[i - 1]) && (i + 1 == m || v[i] >= v[i + 1]);
            if (peak)
                candidates.push_back({v[i], std::max(a, a + (i - 0.5) * h),
                                      std::min(b, a + (i + 1.5) * h)});
            best = std::max(best, v[i]);
        }
    }
    // Golden-section refinement of the leading peaks.
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (std::size_t c = 0; c < std::min<std::size_t>(candidates.size(), 16); ++c) {
        double lo = candidates[c].lo, hi = candidates[c].hi;
        auto f = [&](double t) { return std::abs(seq.alpha_rate(t)); };
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60; ++it) {
            if (f1 > f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            }
        }
        best = std::max({best, f1, f2});
    }
    return T * T * best;
}

std::vector<WaveformSample> sample_waveform(const ControlSequence& seq, int n_points)
{
    require(n_points >= 2, "need at least two samples");
    const double T = seq.duration();
    std::vector<double> times(n_points);
    for (int i = 0; i < n_points; ++i) times[i] = T * i / (n_points - 1.0);
    times.back() = T;

    std::vector<WaveformSample> out(n_points);
    const auto impulses = seq.impulses();
    for (int i = 0; i < n_points; ++i) {
        auto& s = out[i];
        s.t = times[i];
        s.beta_value = seq.beta(s.t);
        if (seq.impulsive()) {
            s.alpha_value = 0.0;
            for (const auto& p : impulses)
                if (std::abs(p.time - s.t) <= 1e-15 * T) s.clamped = true;
            continue;
        }
        const bool at_pole = seq.has_endpoint_poles() && (i == 0 || i == n_points - 1);
        if (at_pole) {
            double inner = 0.5 * T;
            if (n_points > 2) inner = (i == 0) ? times[1] : times[n_points - 2];
            s.alpha_value = seq.alpha(inner);
            s.clamped = true;
        } else {
            s.alpha_value = seq.alpha(s.t);
        }
    }
    return out;
}

}  // namespace cafe
