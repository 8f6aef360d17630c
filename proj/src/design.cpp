#include "cafe/design.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>

#include <Eigen/Dense>

#include "cafe/error.hpp"

namespace cafe {

const char* to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::RankDeficient: return "rank-deficient";
    case SolveStatus::Stalled: return "stalled";
    }
    return "unknown";
}

std::vector<double> fourier_initial_guess(int m)
{
    require(m >= 1, "need at least one parameter");
    std::vector<double> out(m, 0.0);
    for (int k = 2; k <= m; k += 2) out[k - 1] = 2.0 / k;
    return out;
}

std::vector<double> published_cafe35_lambdas()
{
    return {0.0017, 0.9121, -0.2869, 1.3520, 0.4920};
}

DesignProblem make_design_problem(int N, int m, std::vector<double> initial_guess)
{
    require(N >= 1, "N must be positive");
    require(m >= 0, "m must be nonnegative");
    DesignProblem p;
    p.N = N;
    p.constraints = (m == 5 && N % 2 == 1) ? cafe_system_constraints() : default_constraints(N, m);
    if (initial_guess.empty() && m > 0) initial_guess = fourier_initial_guess(m);
    require(static_cast<int>(initial_guess.size()) == m, "initial guess must have m entries");
    p.initial_guess = std::move(initial_guess);
    return p;
}

std::vector<double> design_residuals(const DesignProblem& problem,
                                     const std::vector<double>& lambdas)
{
    return eval_constraints(problem.constraints, make_cafe_raw(problem.N, lambdas, 1.0)).residuals;
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), v.size()); }
std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

DesignSolution solve_cafe(const DesignProblem& problem, double tolerance, int max_iterations,
                          const SolverOptions& opt)
{
    const auto m = static_cast<Eigen::Index>(problem.initial_guess.size());
    require(static_cast<std::size_t>(m) == problem.constraints.size(),
            "constraint list must match the number of parameters");
    require(tolerance > 0.0 && max_iterations >= 1, "bad solver tolerance or iteration cap");
    for (double x : problem.initial_guess) require(std::isfinite(x), "initial guess must be finite");

    DesignSolution sol;
    sol.N = problem.N;
    if (m == 0) {
        sol.converged = true;
        sol.status = SolveStatus::Converged;
        return sol;
    }

    auto F = [&](const Vec& x) { return to_vec(design_residuals(problem, to_std(x))); };
    auto jacobian = [&](const Vec& x) {
        Mat J(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            Vec xp = x, xm = x;
            xp[i] += opt.fd_step;
            xm[i] -= opt.fd_step;
            J.col(i) = (F(xp) - F(xm)) / (2.0 * opt.fd_step);
        }
        return J;
    };

    Vec x = to_vec(problem.initial_guess);
    Vec r = F(x);
    Vec best_x = x, best_r = r;
    double mu = opt.initial_damping;
    int nonmonotone = 0;
    bool force_lm = false;
    int it = 0;
    sol.status = SolveStatus::MaxIterations;

    while (r.norm() >= tolerance && it < max_iterations) {
        const Mat J = jacobian(x);
        ++it;
        Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (!(sv(m - 1) > 1e-13 * sv(0))) {
            sol.status = SolveStatus::RankDeficient;
            break;
        }

        if (!force_lm && r.norm() < opt.newton_switch) {
            const Vec xn = x - svd.solve(r);
            const Vec rn = F(xn);
            if (rn.norm() < opt.nonmonotone_factor * best_r.norm() &&
                nonmonotone < opt.max_nonmonotone) {
                nonmonotone = (rn.norm() >= best_r.norm()) ? nonmonotone + 1 : 0;
                x = xn;
                r = rn;
                if (r.norm() < best_r.norm()) {
                    best_x = x;
                    best_r = r;
                }
                continue;
            }
            // Fall back to the best point; the next Jacobian is taken there.
            x = best_x;
            r = best_r;
            nonmonotone = 0;
            force_lm = true;
            continue;
        }
        force_lm = false;

        // Marquardt step with diagonal scaling.
        const Mat A = J.transpose() * J;
        const Vec g = J.transpose() * r;
        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Mat M = A;
            M.diagonal() += mu * A.diagonal();
            const Vec xn = x - M.ldlt().solve(g);
            const Vec rn = F(xn);
            if (rn.allFinite() && rn.norm() < r.norm()) {
                x = xn;
                r = rn;
                mu = std::max(mu / 3.0, 1e-12);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if (r.norm() < best_r.norm()) {
            best_x = x;
            best_r = r;
        }
        if (!accepted) {
            sol.status = SolveStatus::Stalled;
            break;
        }
    }

    if (best_r.norm() < r.norm()) {
        x = best_x;
        r = best_r;
    }
    sol.lambdas = to_std(x);
    sol.residuals = to_std(r);
    sol.residual_norm = r.norm();
    sol.iterations = it;
    sol.converged = sol.residual_norm < tolerance;
    if (sol.converged) sol.status = SolveStatus::Converged;
    return sol;
}

DesignSolution catalog_solution(int N, int m)
{
    static std::shared_mutex mutex;
    static std::map<std::pair<int, int>, DesignSolution> cache;
    const auto key = std::make_pair(N, m);
    {
        std::shared_lock lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<double> guess;
    if (N == 3 && m == 5) guess = published_cafe35_lambdas();
    auto sol = solve_cafe(make_design_problem(N, m, guess));
    if (!sol.converged) {
        throw AccuracyFailure("no CAFE(" + std::to_string(N) + "," + std::to_string(m) +
                                  ") root found (" + to_string(sol.status) + ")",
                              sol.residual_norm);
    }
    std::unique_lock lock(mutex);
    cache[key] = sol;
    return sol;
}

ControlSequence catalog_entry(int N, int m, int r, int L, double T)
{
    const auto sol = catalog_solution(N, m);
    return splice_and_invert(make_cafe_raw(N, sol.lambdas, T), r, L);
}

}  // namespace cafe
