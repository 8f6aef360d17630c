#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cafe {

enum class Family { UDD, SmoothUDD, CafeRaw, CafeSpliced, PulseTrain, Custom };
enum class PulseShape { SineSquared, Rectangular };
enum class Symmetry { Even, Odd, None };

const char* to_string(Family family);
const char* to_string(PulseShape shape);

/// An instantaneous rotation: beta jumps by `area` radians at `time`.
struct Impulse {
    double time = 0.0;
    double area = 0.0;
};

/// Family-specific parameters; fields that do not apply stay at their defaults.
struct SequenceParams {
    int N = 0;
    std::vector<double> lambdas;
    int root_index = 0;
    int repetitions = 0;
    int pulse_count = 0;
    double duty_cycle = 0.0;
    PulseShape shape = PulseShape::SineSquared;
    bool alternate_signs = false;
    std::vector<int> axis_signs;
};

/// Implementation interface behind ControlSequence. Times are absolute, in
/// [0, T]; implementations may assume callers have range-checked `t`.
class Waveform {
public:
    virtual ~Waveform() = default;

    virtual double beta(double t) const = 0;
    virtual double alpha(double t) const = 0;
    virtual double alpha_rate(double t) const = 0;

    /// beta as a function of theta = arccos(1 - 2t/T).
    virtual double beta_theta(double theta, double T) const;

    /// Interior times where alpha or its derivative is not smooth.
    virtual std::vector<double> breakpoints() const { return {}; }
    virtual std::vector<Impulse> impulses() const { return {}; }
    virtual bool endpoint_poles() const { return false; }
    virtual bool alpha_jumps() const { return false; }
};

/// Immutable control waveform alpha(t), beta(t) = 2 * integral of alpha over
/// [0, t], on [0, T]. Copies share the underlying waveform.
class ControlSequence {
public:
    ControlSequence(Family family, double duration, SequenceParams params,
                    std::shared_ptr<const Waveform> waveform, std::string label = {});

    Family family() const { return family_; }
    double duration() const { return duration_; }
    const SequenceParams& params() const { return params_; }
    const std::string& label() const { return label_; }

    double beta(double t) const;
    /// Throws Error(NotEvaluable) for impulsive sequences and
    /// Error(PoleSingularity) at an endpoint pole.
    double alpha(double t) const;
    double alpha_rate(double t) const;
    double beta_theta(double theta) const;

    /// 0, every interior breakpoint, T (sorted, unique).
    std::vector<double> breakpoints() const;
    std::vector<Impulse> impulses() const { return waveform_->impulses(); }
    bool impulsive() const { return !waveform_->impulses().empty() || family_ == Family::UDD; }
    bool has_endpoint_poles() const { return waveform_->endpoint_poles(); }
    bool has_alpha_jumps() const { return waveform_->alpha_jumps(); }

    /// beta(T) is a multiple of 2 pi to within `tol`.
    bool is_identity(double tol = 1e-9) const;

    const std::shared_ptr<const Waveform>& waveform() const { return waveform_; }

private:
    void check_time(double t) const;

    Family family_;
    double duration_;
    SequenceParams params_;
    std::shared_ptr<const Waveform> waveform_;
    std::string label_;
};

struct WaveformSample {
    double t = 0.0;
    double alpha_value = 0.0;
    double beta_value = 0.0;
    /// alpha_value is not the pointwise value (endpoint pole clamped to the
    /// nearest interior grid point, or an impulse sits at this time).
    bool clamped = false;
};

/// Ideal pi-pulse UDD: pulses at T sin^2(j pi / (2(N+1))).
ControlSequence make_udd(int N, double T, bool alternate_signs = false);
/// UDD pulse times in absolute time.
std::vector<double> udd_times(int N, double T);

/// beta(u) = (N+1) arccos(-u), u = 2t/T - 1.
ControlSequence make_smooth_udd(int N, double T);

/// beta(theta) = (N+1) theta + sum_k lambda_k sin((N+1) k theta).
ControlSequence make_cafe_raw(int N, std::vector<double> lambdas, double T);

/// Shaped pi-pulse train centred at the UDD times, each pulse of width d T / N.
ControlSequence make_pulse_train(int N, double duty_cycle, double T,
                                 PulseShape shape = PulseShape::SineSquared,
                                 bool alternate_signs = true);

/// Arbitrary waveform. `alpha_rate` may be empty, in which case it is taken
/// by central differences.
ControlSequence make_custom(double T, std::function<double(double)> alpha,
                            std::function<double(double)> beta,
                            std::function<double(double)> alpha_rate = {},
                            std::string label = "custom");

ControlSequence make_free_evolution(double T);
ControlSequence make_constant_alpha(double T, double alpha);

/// Symmetry of alpha about T/2, decided on a 513-point grid with relative
/// tolerance `rel_tol`.
Symmetry alpha_symmetry(const ControlSequence& seq, double rel_tol = 1e-8);

/// Roots of alpha in (0, T), ascending; bracketed on a 4096-point grid that is
/// uniform in theta, then polished.
std::vector<double> find_alpha_zeros(const ControlSequence& seq);

/// Chop at the r-th zero from each end, then lay out L copies of
/// (window, negated window) over [0, T].
ControlSequence splice_and_invert(const ControlSequence& seq, int root_index,
                                  int repetitions);

/// max_t T^2 |d alpha / dt|. Throws Error(InfiniteSlew) for impulses, poles
/// and jumps in alpha.
double max_slew_rate(const ControlSequence& seq);

std::vector<WaveformSample> sample_waveform(const ControlSequence& seq, int n_points);

}  // namespace cafe
