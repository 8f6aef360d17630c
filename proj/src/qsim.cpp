#include "cafe/qsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>

#include "cafe/csim.hpp"
#include "cafe/error.hpp"
#include "cafe/filterfn.hpp"

namespace cafe {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;

SpinLatticeSpec SpinLatticeSpec::cube(double J, double C)
{
    SpinLatticeSpec s;
    s.bath_positions = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    s.couplings.assign(6, C);
    s.J = J;
    return s;
}

MatrixXcd BathOperators::full_bath() const
{
    const int d = bath_dim();
    MatrixXcd H = MatrixXcd::Zero(2 * d, 2 * d);
    H.topLeftCorner(d, d) = B0;
    H.bottomRightCorner(d, d) = B0;
    return H;
}

MatrixXcd BathOperators::full_coupling() const
{
    const int d = bath_dim();
    MatrixXcd H = MatrixXcd::Zero(2 * d, 2 * d);
    H.topLeftCorner(d, d) = BZ;
    H.bottomRightCorner(d, d) = -BZ;
    return H;
}

namespace {

// Spin-1/2 operator a (0 = x, 1 = y, 2 = z) on spin j of n.
MatrixXcd spin_op(int j, int a, int n)
{
    Eigen::Matrix2cd s;
    if (a == 0)
        s << 0, 0.5, 0.5, 0;
    else if (a == 1)
        s << 0, cplx(0, -0.5), cplx(0, 0.5), 0;
    else
        s << 0.5, 0, 0, -0.5;
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        const MatrixXcd f = (k == j) ? MatrixXcd(s) : MatrixXcd(MatrixXcd::Identity(2, 2));
        MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (int r = 0; r < out.rows(); ++r)
            for (int c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
        out = std::move(next);
    }
    return out;
}

}  // namespace

BathOperators build_hamiltonian(const SpinLatticeSpec& spec)
{
    const int n = static_cast<int>(spec.bath_positions.size());
    if (n > kMaxBathSpins)
        throw Error(ErrorKind::DimensionCap, std::to_string(n) + " bath spins exceed the cap of " +
                                                 std::to_string(kMaxBathSpins));
    require(n >= 1, "need at least one bath spin");
    require(static_cast<int>(spec.couplings.size()) == n, "one coupling per bath spin");
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            require((spec.bath_positions[j] - spec.bath_positions[k]).norm() > 1e-12,
                    "bath positions must be distinct");

    const int d = 1 << n;
    std::vector<std::array<MatrixXcd, 3>> I(n);
    for (int j = 0; j < n; ++j)
        for (int a = 0; a < 3; ++a) I[j][a] = spin_op(j, a, n);

    BathOperators ops;
    ops.n_spins = n;
    ops.B0 = MatrixXcd::Zero(d, d);
    ops.BZ = MatrixXcd::Zero(d, d);
    for (int j = 0; j < n; ++j) ops.BZ += spec.couplings[j] * I[j][2];
    if (spec.J != 0.0) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (j == k) continue;
                const Eigen::Vector3d r = spec.bath_positions[j] - spec.bath_positions[k];
                const double r2 = r.squaredNorm();
                const double r5 = r2 * r2 * std::sqrt(r2);
                MatrixXcd term = MatrixXcd::Zero(d, d);
                for (int a = 0; a < 3; ++a) {
                    term += r2 * (I[j][a] * I[k][a]);
                    for (int b = 0; b < 3; ++b)
                        if (r[a] != 0.0 && r[b] != 0.0) term -= 3.0 * r[a] * r[b] * (I[j][a] * I[k][b]);
                }
                ops.B0 += (4.0 * spec.J / r5) * term;
            }
        }
    }
    return ops;
}

// ---------------------------------------------------------------------------

namespace {

// Bath unitaries from signed axis permutations R that carry the lattice and
// its couplings onto itself. Spins transform as axial vectors, so only maps
// whose spin part det(R) R fixes z survive; what is left is a permutation of
// sites times a rotation about z, kept if it commutes with B0 and B_Z.
std::vector<MatrixXcd> lattice_symmetries(const SpinLatticeSpec& spec, const BathOperators& ops)
{
    const int n = ops.n_spins;
    const int d = ops.bath_dim();
    double scale = 0.0;
    for (const auto& p : spec.bath_positions) scale = std::max(scale, p.norm());
    const double tol = 1e-10 * (1.0 + ops.B0.norm() + ops.BZ.norm());

    std::vector<MatrixXcd> out;
    std::array<int, 3> axes{0, 1, 2};
    do {
        for (int signs = 0; signs < 8; ++signs) {
            Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
            for (int a = 0; a < 3; ++a) R(a, axes[a]) = (signs >> a) & 1 ? -1.0 : 1.0;
            if (R.isIdentity()) continue;
            const Eigen::Matrix3d M = R.determinant() * R;
            if (std::abs(M(2, 2) - 1.0) > 1e-12) continue;
            std::vector<int> to(n, -1);
            bool ok = true;
            for (int j = 0; j < n && ok; ++j) {
                const Eigen::Vector3d q = R * spec.bath_positions[j];
                for (int k = 0; k < n; ++k) {
                    const double dc = std::abs(spec.couplings[j] - spec.couplings[k]);
                    if ((spec.bath_positions[k] - q).norm() <= 1e-9 * scale &&
                        dc <= 1e-12 * (std::abs(spec.couplings[j]) + std::abs(spec.couplings[k])))
                        to[j] = k;
                }
                ok = to[j] >= 0;
            }
            if (!ok) continue;
            const double phi = std::atan2(M(1, 0), M(0, 0));
            for (double sgn : {1.0, -1.0}) {
                MatrixXcd P = MatrixXcd::Zero(d, d);
                for (int st = 0; st < d; ++st) {
                    int image = 0;
                    double mz = 0.0;
                    for (int j = 0; j < n; ++j) {
                        const int bit = (st >> (n - 1 - j)) & 1;
                        mz += bit ? -0.5 : 0.5;
                        if (bit) image |= 1 << (n - 1 - to[j]);
                    }
                    P(image, st) = std::polar(1.0, -sgn * phi * mz);
                }
                if ((P * ops.B0 - ops.B0 * P).norm() < tol && (P * ops.BZ - ops.BZ * P).norm() < tol) {
                    out.push_back(std::move(P));
                    break;
                }
            }
        }
    } while (std::next_permutation(axes.begin(), axes.end()));
    return out;
}

// Eigenspaces of a generic element of the symmetry algebra. Each one is
// invariant under anything commuting with every symmetry.
std::vector<MatrixXcd> split_sectors(const std::vector<MatrixXcd>& syms, const BathOperators& ops)
{
    const long d = ops.bath_dim();
    const std::vector<MatrixXcd> whole{MatrixXcd::Identity(d, d)};
    if (syms.empty()) return whole;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXcd X = MatrixXcd::Zero(d, d);
    for (const auto& P : syms) {
        const cplx c(u(rng), u(rng));
        X += c * P + std::conj(c) * P.adjoint();
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(X);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double gap = 1e-7 * (1.0 + ev.cwiseAbs().maxCoeff());
    std::vector<MatrixXcd> out;
    long start = 0;
    for (long i = 1; i <= d; ++i) {
        if (i == d || ev[i] - ev[i - 1] > gap) {
            out.push_back(es.eigenvectors().middleCols(start, i - start));
            start = i;
        }
    }
    if (out.size() == 1) return whole;

    // everything off the diagonal blocks must vanish
    const MatrixXcd& V = es.eigenvectors();
    MatrixXcd a = V.adjoint() * ops.B0 * V, b = V.adjoint() * ops.BZ * V;
    long off = 0;
    for (const auto& Q : out) {
        a.block(off, off, Q.cols(), Q.cols()).setZero();
        b.block(off, off, Q.cols(), Q.cols()).setZero();
        off += Q.cols();
    }
    if (a.norm() + b.norm() > 1e-9 * (1.0 + ops.B0.norm() + ops.BZ.norm())) return whole;
    return out;
}

}  // namespace

QuantumPropagator::QuantumPropagator(const SpinLatticeSpec& spec, bool reduce)
    : ops_(build_hamiltonian(spec))
{
    const long d = ops_.bath_dim();
    const auto bases = reduce ? split_sectors(lattice_symmetries(spec, ops_), ops_)
                              : std::vector<MatrixXcd>{MatrixXcd::Identity(d, d)};
    for (const auto& Q : bases) {
        Sector s;
        s.Q = Q;
        const MatrixXcd b0 = Q.adjoint() * ops_.B0 * Q, bz = Q.adjoint() * ops_.BZ * Q;
        Eigen::SelfAdjointEigenSolver<MatrixXcd> plus(b0 + bz), minus(b0 - bz);
        s.Vp = plus.eigenvectors();
        s.Dp = plus.eigenvalues();
        s.Vm = minus.eigenvectors();
        s.Dm = minus.eigenvalues();
        s.W = s.Vp.adjoint() * s.Vm;
        sectors_.push_back(std::move(s));
    }
}

std::vector<int> QuantumPropagator::sector_sizes() const
{
    std::vector<int> out;
    for (const auto& s : sectors_) out.push_back(static_cast<int>(s.Q.cols()));
    return out;
}

namespace {

// exp(+i beta sx / 2) applied from the left: undoes the ideal control rotation.
MatrixXcd to_interaction(const MatrixXcd& U, double beta)
{
    const long d = U.rows() / 2;
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    MatrixXcd out(U.rows(), U.cols());
    out.topRows(d) = c * U.topRows(d) + cplx(0, s) * U.bottomRows(d);
    out.bottomRows(d) = c * U.bottomRows(d) + cplx(0, s) * U.topRows(d);
    return out;
}

// sigma_a (x) 1 applied from the left (right = false) or right (right = true).
MatrixXcd apply_pauli(const MatrixXcd& M, int a, bool right)
{
    const long d = M.rows() / 2;
    MatrixXcd out(M.rows(), M.cols());
    if (!right) {
        auto top = M.topRows(d);
        auto bot = M.bottomRows(d);
        if (a == 0) {
            out.topRows(d) = bot;
            out.bottomRows(d) = top;
        } else if (a == 1) {
            out.topRows(d) = cplx(0, -1) * bot;
            out.bottomRows(d) = cplx(0, 1) * top;
        } else {
            out.topRows(d) = top;
            out.bottomRows(d) = -bot;
        }
    } else {
        auto left = M.leftCols(d);
        auto rgt = M.rightCols(d);
        if (a == 0) {
            out.leftCols(d) = rgt;
            out.rightCols(d) = left;
        } else if (a == 1) {
            // (M sy)_{:,+} = i M_{:,-},  (M sy)_{:,-} = -i M_{:,+}
            out.leftCols(d) = cplx(0, 1) * rgt;
            out.rightCols(d) = cplx(0, -1) * left;
        } else {
            out.leftCols(d) = left;
            out.rightCols(d) = -rgt;
        }
    }
    return out;
}

BlochPoint bloch_point(const MatrixXcd& UI, double t)
{
    BlochPoint p;
    p.t = t;
    const double norm = 1.0 / static_cast<double>(UI.rows());
    const MatrixXcd conjU = UI.conjugate();
    for (int j = 0; j < 3; ++j) {
        const MatrixXcd right = apply_pauli(UI, j, true);
        for (int k = 0; k < 3; ++k) {
            // Tr[X U^dag] = sum X .* conj(U)
            const MatrixXcd X = apply_pauli(right, k, false);
            p.value[j][k] = norm * (X.array() * conjU.array()).sum().real();
        }
    }
    return p;
}

}  // namespace

Propagation QuantumPropagator::propagate(const ControlSequence& seq, int n_steps,
                                         int checkpoints) const
{
    const StepGrid g = make_step_grid(seq, n_steps, false);
    const long d = ops_.bath_dim();
    const std::size_t steps = g.t.size() - 1;

    // Per sector, rows of U in the eigenbases of B0 + B_Z (qubit up) and B0 - B_Z (down).
    struct State {
        MatrixXcd Yp, Ym, tp, tm;
    };
    std::vector<State> st(sectors_.size());
    for (std::size_t k = 0; k < sectors_.size(); ++k) {
        const long m = sectors_[k].Q.cols();
        st[k].Yp = MatrixXcd::Zero(m, 2 * m);
        st[k].Ym = MatrixXcd::Zero(m, 2 * m);
        st[k].Yp.leftCols(m) = sectors_[k].Vp.adjoint();
        st[k].Ym.rightCols(m) = sectors_[k].Vm.adjoint();
        st[k].tp.resize(m, 2 * m);
        st[k].tm.resize(m, 2 * m);
    }

    auto free = [&](double tau) {
        for (std::size_t k = 0; k < st.size(); ++k) {
            const auto& S = sectors_[k];
            for (long i = 0; i < S.Dp.size(); ++i) {
                st[k].Yp.row(i) *= std::polar(1.0, -S.Dp[i] * tau);
                st[k].Ym.row(i) *= std::polar(1.0, -S.Dm[i] * tau);
            }
        }
    };
    auto rotate = [&](double phi) {
        if (phi == 0.0) return;
        const double c = std::cos(0.5 * phi), s = std::sin(0.5 * phi);
        for (std::size_t k = 0; k < st.size(); ++k) {
            auto& x = st[k];
            x.tp.noalias() = sectors_[k].W * x.Ym;
            x.tm.noalias() = sectors_[k].W.adjoint() * x.Yp;
            x.Yp = c * x.Yp - cplx(0, s) * x.tp;
            x.Ym = c * x.Ym - cplx(0, s) * x.tm;
        }
    };
    auto lab = [&] {
        MatrixXcd U = MatrixXcd::Zero(2 * d, 2 * d);
        for (std::size_t k = 0; k < st.size(); ++k) {
            const auto& S = sectors_[k];
            const long m = S.Q.cols();
            MatrixXcd Us(2 * m, 2 * m);
            Us.topRows(m).noalias() = S.Vp * st[k].Yp;
            Us.bottomRows(m).noalias() = S.Vm * st[k].Ym;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    U.block(a * d, b * d, d, d).noalias() += S.Q * Us.block(a * m, b * m, m, m) * S.Q.adjoint();
        }
        return U;
    };

    Propagation out;
    out.n_steps = static_cast<int>(steps);
    std::vector<std::size_t> marks;
    if (checkpoints > 0) {
        for (int c = 0; c <= checkpoints; ++c)
            marks.push_back(static_cast<std::size_t>(std::llround(double(steps) * c / checkpoints)));
        marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    }
    std::size_t next_mark = 0;
    double beta = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
        if (next_mark < marks.size() && marks[next_mark] == i) {
            out.trajectory.push_back(bloch_point(to_interaction(lab(), beta), g.t[i]));
            ++next_mark;
        }
        if (i == steps) break;
        const double dt = g.t[i + 1] - g.t[i];
        if (g.jump[i] != 0.0) {
            rotate(g.jump[i]);
            beta += g.jump[i];
        }
        free(0.5 * dt);
        rotate(g.dbeta[i]);
        beta += g.dbeta[i];
        free(0.5 * dt);
    }
    out.U = lab();
    out.unitarity_error =
        (out.U.adjoint() * out.U - MatrixXcd::Identity(2 * d, 2 * d)).cwiseAbs().maxCoeff();
    if (out.unitarity_error > 1e-8)
        throw Error(ErrorKind::StepSizeFailure,
                    "propagator lost unitarity: " + std::to_string(out.unitarity_error));
    return out;
}

double QuantumPropagator::infidelity(const ControlSequence& seq, const MatrixXcd& U) const
{
    const long d = ops_.bath_dim();
    const MatrixXcd UI = to_interaction(U, seq.beta(seq.duration()));
    const MatrixXcd tr = UI.topLeftCorner(d, d) + UI.bottomRightCorner(d, d);
    return std::max(0.0, 1.0 - tr.squaredNorm() / (4.0 * d));
}

// ---------------------------------------------------------------------------

ProcessResult qpt_infidelity(const QuantumPropagator& prop, const ControlSequence& seq,
                             const QsimOptions& options)
{
    require(options.initial_steps >= 1 && options.max_steps >= options.initial_steps,
            "bad step limits");
    ProcessResult r;
    int n = options.initial_steps;
    Propagation run = prop.propagate(seq, n, options.checkpoints);
    double prev = prop.infidelity(seq, run.U);
    double prev_extrap = 0.0;
    bool have_extrap = false;
    double value = prev;
    while (true) {
        if (2 * n > options.max_steps) break;
        n *= 2;
        run = prop.propagate(seq, n, options.checkpoints);
        const double cur = prop.infidelity(seq, run.U);
        const double extrap = cur + (cur - prev) / 3.0;
        r.step_change = std::abs(cur - prev);
        value = cur;
        if (r.step_change < options.tolerance) {
            r.converged = true;
            break;
        }
        if (have_extrap) {
            r.step_change = std::abs(extrap - prev_extrap);
            value = extrap;
            if (r.step_change < options.tolerance) {
                r.converged = true;
                break;
            }
        }
        prev = cur;
        prev_extrap = extrap;
        have_extrap = true;
    }
    r.infidelity = std::clamp(value, 0.0, 1.0);
    r.chi_II = 1.0 - r.infidelity;
    r.trajectory = std::move(run.trajectory);
    r.n_steps = run.n_steps;
    r.unitarity_error = run.unitarity_error;
    r.infidelity_finest = prop.infidelity(seq, run.U);
    const auto fin = bloch_point(to_interaction(run.U, seq.beta(seq.duration())), seq.duration());
    r.infidelity_projections = 0.25 * (3.0 - fin.value[0][0] - fin.value[1][1] - fin.value[2][2]);
    return r;
}

ProcessResult qpt_infidelity(const SpinLatticeSpec& spec, const ControlSequence& seq,
                             const QsimOptions& options)
{
    return qpt_infidelity(QuantumPropagator(spec), seq, options);
}

double static_bath_infidelity(const SpinLatticeSpec& spec, double T)
{
    const BathOperators ops = build_hamiltonian(spec);
    const Eigen::VectorXd b = Eigen::SelfAdjointEigenSolver<MatrixXcd>(ops.BZ).eigenvalues();
    double s = 0.0;
    for (long k = 0; k < b.size(); ++k) s += std::cos(2.0 * b[k] * T);
    return 0.5 * (1.0 - s / static_cast<double>(b.size()));
}

std::vector<double> default_J_grid() { return log_grid(1e-2, 1e2, 30); }

BathSweep sweep_bath_strength(const std::vector<ControlSequence>& seqs,
                              const std::vector<double>& JT_values, double C, int threads,
                              const QsimOptions& options)
{
    require(!seqs.empty(), "no sequences");
    BathSweep out;
    for (const auto& s : seqs) out.labels.push_back(s.label());
    const double T = seqs.front().duration();
    for (const auto& s : seqs)
        require(std::abs(s.duration() - T) <= 1e-12 * T, "sequences must share one duration");
    out.rows.resize(JT_values.size());
    for (std::size_t i = 0; i < JT_values.size(); ++i) {
        require(JT_values[i] > 0.0, "J values must be positive");
        out.rows[i].JT = JT_values[i];
        out.rows[i].infidelity.assign(seqs.size(), 0.0);
        out.rows[i].converged.assign(seqs.size(), false);
    }
    // One propagator per J; the (J, sequence) pairs are independent.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < JT_values.size(); i = next++) {
            const QuantumPropagator prop(SpinLatticeSpec::cube(JT_values[i] / T, C / T));
            for (std::size_t s = 0; s < seqs.size(); ++s) {
                QsimOptions o = options;
                o.checkpoints = 0;
                const auto r = qpt_infidelity(prop, seqs[s], o);
                out.rows[i].infidelity[s] = r.infidelity;
                out.rows[i].converged[s] = r.converged;
            }
        }
    };
    threads = std::max(1, std::min<int>(threads, static_cast<int>(JT_values.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace cafe
