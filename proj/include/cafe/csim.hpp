#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cafe/control.hpp"
#include "cafe/filterfn.hpp"
#include "cafe/noise.hpp"

namespace cafe {

/// Unit quaternion for the SU(2) element w - i (x sx + y sy + z sz).
struct SU2 {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    SU2 operator*(const SU2& o) const;
    double norm() const;
    /// 1 - |Tr U / 2|^2, computed from the vector part.
    double infidelity() const { return x * x + y * y + z * z; }
    Eigen::Matrix2cd matrix() const;
};

/// Rotation exp(-i phi sx / 2).
SU2 x_rotation(double phi);

/// Time grid for one sequence: breakpoints are always step edges and steps
/// are spread evenly in the metric dt/T + |d beta|/(20 pi). With
/// `follow_beta` off the steps are uniform on each piece, which keeps the
/// error expansion of symmetric splittings clean.
struct StepGrid {
    std::vector<double> t;         // edges, t.front() = 0, t.back() = T
    std::vector<double> beta_lo;   // beta just after each left edge
    std::vector<double> beta_mid;  // beta at each step midpoint
    std::vector<double> dbeta;     // continuous part of the increment over each step
    std::vector<double> jump;      // impulse area applied at each left edge
};

StepGrid make_step_grid(const ControlSequence& seq, int n_steps, bool follow_beta = true);

/// Propagates H(t) = B(t) sz + [1 + eps(t)] alpha(t) sx in the frame that
/// follows the noiseless control, and returns the interaction-picture
/// propagator R(beta(T))^dagger U(T). Each step applies the control rotation
/// exactly and the bath term through a second-order Magnus exponent.
class QubitPropagator {
public:
    QubitPropagator(const ControlSequence& seq, int n_steps);

    SU2 propagate(const NoisePath& dephasing, const NoisePath* control_noise = nullptr) const;
    int steps() const { return static_cast<int>(grid_.t.size()) - 1; }
    const StepGrid& grid() const { return grid_; }

private:
    StepGrid grid_;
    double T_;
};

/// One-shot wrapper.
SU2 propagate_qubit(const ControlSequence& seq, const NoisePath& dephasing,
                    const NoisePath* control_noise, int n_steps);

/// Same propagation with n and 2n steps; returns the infidelity difference.
double step_doubling_change(const ControlSequence& seq, const NoisePath& dephasing,
                            const NoisePath* control_noise, int n_steps);

struct EnsembleResult {
    double infidelity_mean = 0.0;
    double infidelity_stderr = 0.0;
    int n_trials = 0;
    /// Averaged diagonal Bloch-transfer elements R_xx, R_yy, R_zz.
    std::array<double, 3> transfer{};
    /// Mean state fidelity over the six cardinal input states, 1 - 2I/3.
    double state_fidelity = 1.0;
    int n_steps = 0;
};

struct EnsembleOptions {
    int n_steps = 0;     // 0: chosen from the sequence and the noise bandwidth
    int threads = 1;
    std::uint64_t stream = 0;  // extra index mixed into every trial stream
};

/// Default step count: 2048, raised to resolve the noise bandwidth.
int default_step_count(const ControlSequence& seq, const NoiseModel& dephasing,
                       const NoiseModel* control_noise);

EnsembleResult ensemble_infidelity(const ControlSequence& seq, const NoiseModel& dephasing,
                                   const std::optional<NoiseModel>& control_noise, int n_trials,
                                   const EnsembleOptions& options = {});

/// Paper defaults for control noise: Gaussian spectrum, 1% rms, tau = T/2.
NoiseModel default_control_noise(double T, std::uint64_t seed);

struct OverlayResult {
    double infidelity = 0.0;
    double tail_fraction = 0.0;  // share of the integral from the outermost decades
    bool converged = true;
};

/// Linear-response infidelity (1/pi) int_0^inf S(w) F(wT) / w^2 dw over
/// w in [1e-3 / tau_c, 1e3 / tau_c] (Gaussian spectra stop at 10 / tau_c,
/// beyond which S is below 1e-43 of its peak). For a Sinusoid model it
/// returns A^2 F(omega T) / (2 omega^2). The tail fraction is the integral
/// over one extra decade outside each end, relative to the total.
OverlayResult theory_overlay(const ControlSequence& seq, const NoiseModel& dephasing);
/// Same integral against a precomputed table. Beyond the table range F is
/// replaced by its mean, which is accurate once S / w^2 varies slowly on the
/// scale of the filter oscillation.
OverlayResult theory_overlay(const FilterTable& table, const NoiseModel& dephasing);
/// Table range needed for the overlay of `dephasing` over duration T.
double overlay_z_max(const NoiseModel& dephasing, double T);

struct SweepRow {
    double tau_over_T = 0.0;
    EnsembleResult ensemble;
    double theory = 0.0;  // NaN when the overlay is skipped
};

struct SweepTable {
    std::string label;
    std::vector<SweepRow> rows;
};

struct SweepOptions {
    int n_trials = 1000;
    int threads = 1;
    bool with_theory = true;
    std::uint64_t seed = 1;
};

/// Ensemble infidelity versus tau_c / T for each sequence. `family` and
/// `rms` describe the dephasing noise; control noise uses the defaults above.
std::vector<SweepTable> sweep_correlation_time(const std::vector<ControlSequence>& seqs,
                                               NoiseFamily family, double rms,
                                               const std::vector<double>& tau_over_T,
                                               bool with_control_noise,
                                               const SweepOptions& options = {});

/// 25 log-spaced points on [1e-2, 1e2].
std::vector<double> default_tau_grid();

}  // namespace cafe
