#pragma once

#include <vector>

#include "cafe/constraints.hpp"
#include "cafe/control.hpp"

namespace cafe {

struct DesignProblem {
    int N = 3;
    std::vector<ConstraintSpec> constraints;  // square system: one per lambda
    std::vector<double> initial_guess;
};

enum class SolveStatus { Converged, MaxIterations, RankDeficient, Stalled };
const char* to_string(SolveStatus status);

struct DesignSolution {
    int N = 0;
    std::vector<double> lambdas;
    std::vector<double> residuals;
    double residual_norm = 0.0;  // Euclidean norm of `residuals`
    int iterations = 0;          // Jacobian evaluations
    bool converged = false;
    SolveStatus status = SolveStatus::MaxIterations;
};

struct SolverOptions {
    double fd_step = 1e-6;
    double initial_damping = 1e-3;
    // Plain Newton steps once the residual norm drops below this.
    double newton_switch = 1e-3;
    // Newton steps may raise the residual up to this factor over the best
    // iterate, for at most `max_nonmonotone` steps in a row.
    double nonmonotone_factor = 10.0;
    int max_nonmonotone = 3;
};

/// Truncated sawtooth coefficients: lambda_{2j} = 1/j, odd positions zero.
std::vector<double> fourier_initial_guess(int m);

/// The published four-decimal CAFE(3,5) vector.
std::vector<double> published_cafe35_lambdas();

/// Problem for beta_lambda with N and m parameters using default_constraints
/// (the explicit five-constraint system when m = 5). An empty guess means the
/// Fourier guess.
DesignProblem make_design_problem(int N, int m, std::vector<double> initial_guess = {});

std::vector<double> design_residuals(const DesignProblem& problem,
                                     const std::vector<double>& lambdas);

/// Levenberg-Marquardt with a Newton phase near the root. Deterministic:
/// fixed finite-difference step and iteration schedule.
DesignSolution solve_cafe(const DesignProblem& problem, double tolerance = 1e-8,
                          int max_iterations = 100, const SolverOptions& options = {});

/// Cached converged solution for (N, m). For (3, 5) the search starts from
/// the published vector so the cache holds the published root; other sizes
/// start from the Fourier guess. Throws Error(AccuracyFailure) if no root is
/// found.
DesignSolution catalog_solution(int N, int m);

/// CAFE(N, m, r) x L on [0, T].
ControlSequence catalog_entry(int N, int m, int r, int L, double T = 1.0);

}  // namespace cafe
