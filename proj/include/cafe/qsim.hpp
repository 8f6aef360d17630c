#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cafe/control.hpp"

namespace cafe {

/// Central qubit at the origin with spin-1/2 bath spins at `bath_positions`
/// (lattice units). Rates are in units of 1/T for whatever T the sequence uses.
struct SpinLatticeSpec {
    std::vector<Eigen::Vector3d> bath_positions;
    std::vector<double> couplings;  // C_j
    double J = 0.0;

    /// Six spins at +-x, +-y, +-z, all with coupling C.
    static SpinLatticeSpec cube(double J, double C = 1.0);
};

inline constexpr int kMaxBathSpins = 8;

/// Bath-space operators: B0 (dipolar bath Hamiltonian) and B_Z = sum_j C_j I^z_j.
struct BathOperators {
    Eigen::MatrixXcd B0;
    Eigen::MatrixXcd BZ;
    int n_spins = 0;

    int bath_dim() const { return static_cast<int>(B0.rows()); }
    /// 1 (x) B0 on the full qubit-bath space.
    Eigen::MatrixXcd full_bath() const;
    /// sigma_z (x) B_Z.
    Eigen::MatrixXcd full_coupling() const;
};

/// B0 = 4J sum_{j != k} [r^2 I_j.I_k - 3 (r.I_j)(r.I_k)] / r^5, summed over
/// ordered pairs. Throws Error(DimensionCap) above kMaxBathSpins spins.
BathOperators build_hamiltonian(const SpinLatticeSpec& spec);

/// Qubit Bloch components in the interaction picture for the three inputs
/// rho_j(0) = (1 + sigma_j)/2 (x) 1/d. value[j][k] = Tr[sigma_k rho_j(t)].
struct BlochPoint {
    double t = 0.0;
    std::array<std::array<double, 3>, 3> value{};
};

struct Propagation {
    Eigen::MatrixXcd U;  // lab frame, qubit-major ordering (qubit up block first)
    std::vector<BlochPoint> trajectory;
    int n_steps = 0;
    double unitarity_error = 0.0;  // max |U^dag U - 1|
};

/// Fixed-step propagation. Each step applies any impulse at its left edge,
/// then half a bath step, the exact control rotation for the step, and the
/// other half (symmetric splitting; the bath part is exact through an
/// eigendecomposition of B0 +- B_Z). `checkpoints` Bloch samples are taken on
/// the step grid, evenly spaced in step index.
///
/// With `reduce` set, lattice symmetries (signed axis permutations acting on
/// sites and spins together) that commute with B0 and B_Z split the bath
/// space into invariant sectors, and each sector is propagated on its own.
class QuantumPropagator {
public:
    explicit QuantumPropagator(const SpinLatticeSpec& spec, bool reduce = true);

    Propagation propagate(const ControlSequence& seq, int n_steps, int checkpoints = 0) const;
    const BathOperators& operators() const { return ops_; }
    /// Bath dimension of each sector; a single entry when nothing was found.
    std::vector<int> sector_sizes() const;

    /// 1 - |Tr_q U_I|^2 / (4 d) for the interaction-picture propagator.
    double infidelity(const ControlSequence& seq, const Eigen::MatrixXcd& U) const;

private:
    struct Sector {
        Eigen::MatrixXcd Q;  // bath basis of the sector, d x m
        Eigen::MatrixXcd Vp, Vm, W;
        Eigen::VectorXd Dp, Dm;
    };
    BathOperators ops_;
    std::vector<Sector> sectors_;
};

struct ProcessResult {
    double chi_II = 1.0;
    double infidelity = 0.0;
    /// Unextrapolated value from the finest run, and the same quantity from
    /// (1/4){3 - sum_j Tr[sigma_j rho_j(T)]} on that run.
    double infidelity_finest = 0.0;
    double infidelity_projections = 0.0;
    std::vector<BlochPoint> trajectory;
    int n_steps = 0;
    double step_change = 0.0;
    double unitarity_error = 0.0;
    bool converged = false;
};

struct QsimOptions {
    int initial_steps = 256;
    int max_steps = 1 << 16;
    double tolerance = 1e-9;
    int checkpoints = 200;
};

/// Doubles the step count until the infidelity settles to `tolerance`. The
/// splitting error is even in the step, so successive results are combined
/// by Richardson extrapolation before comparing. Impulsive sequences with no
/// bath-control overlap converge at the first doubling.
ProcessResult qpt_infidelity(const SpinLatticeSpec& spec, const ControlSequence& seq,
                             const QsimOptions& options = {});
ProcessResult qpt_infidelity(const QuantumPropagator& prop, const ControlSequence& seq,
                             const QsimOptions& options = {});

/// Closed form for no control and J = 0: (1/2)(1 - mean_k cos(2 b_k T)) over
/// the eigenvalues b_k of B_Z.
double static_bath_infidelity(const SpinLatticeSpec& spec, double T);

struct BathSweepRow {
    double JT = 0.0;
    std::vector<double> infidelity;  // one per sequence
    std::vector<bool> converged;
};

struct BathSweep {
    std::vector<std::string> labels;
    std::vector<BathSweepRow> rows;
};

/// I(J) for each sequence on the cube lattice with C_j = C/T.
BathSweep sweep_bath_strength(const std::vector<ControlSequence>& seqs,
                              const std::vector<double>& JT_values, double C = 1.0,
                              int threads = 1, const QsimOptions& options = {});

/// 30 log-spaced points on [1e-2, 1e2].
std::vector<double> default_J_grid();

}  // namespace cafe
