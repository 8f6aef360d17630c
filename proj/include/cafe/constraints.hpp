#pragma once

#include <utility>
#include <vector>

#include "cafe/control.hpp"
#include "cafe/quadrature.hpp"

namespace cafe {

/// Decoupling-constraint functionals on u = 2t/T - 1 in [-1, 1]:
///   SineMoment(n)      int u^n sin(beta) du
///   CosineMoment(n)    int u^n cos(beta) du
///   CrossTerm2nd(n)    int du1 int_{u2<u1} du2 u2^n sin(beta1 - beta2)
///   FirstOrderSine     int sin(beta) du
///   FirstOrderCosine   int cos(beta) du
///   SecondOrderSine    int int_{u2<u1} [sin(beta1) - sin(beta2)]
///   SecondOrderCosine  int int_{u2<u1} [cos(beta1) - cos(beta2)]
enum class ConstraintKind {
    SineMoment,
    CosineMoment,
    CrossTerm2nd,
    FirstOrderSine,
    FirstOrderCosine,
    SecondOrderSine,
    SecondOrderCosine,
};

struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::FirstOrderCosine;
    int power = 0;  // only meaningful for the moment kinds and CrossTerm2nd
};

const char* to_string(ConstraintKind kind);
std::string describe(const ConstraintSpec& spec);

enum class Domain { Theta, U };

struct ConstraintValue {
    double value = 0.0;
    double error = 0.0;
};

struct ResidualReport {
    std::vector<double> residuals;
    double max_abs = 0.0;
    double quadrature_error_estimate = 0.0;
};

/// Threshold below which a constraint counts as satisfied.
inline constexpr double kSatisfiedThreshold = 1e-8;

/// Evaluates one constraint. The theta route (default) integrates in
/// theta = arccos(-u), where the integrands are smooth; the u route is an
/// independent adaptive Gauss-Kronrod evaluation used for cross-checks.
/// Throws AccuracyFailure when the error estimate exceeds 1e-8.
ConstraintValue eval_constraint_detailed(const ConstraintSpec& spec, const ControlSequence& seq,
                                         Domain domain = Domain::Theta);
double eval_constraint(const ConstraintSpec& spec, const ControlSequence& seq);

ResidualReport eval_constraints(const std::vector<ConstraintSpec>& specs,
                                const ControlSequence& seq, Domain domain = Domain::Theta);

/// C0, X0, C2, X2, C4: the five-constraint system for CAFE(3,5).
std::vector<ConstraintSpec> cafe_system_constraints();

/// First- and second-order constraints (sine, cosine, both second-order
/// forms, cross term).
std::vector<ConstraintSpec> first_second_order_constraints();

/// First m constraints not removed by the Chebyshev/parity structure of
/// beta_lambda for the given N. For odd N this is C0, X0, C2, X2, C4, ...;
/// for even N the parity argument does not apply and all moments are used in
/// order C0, X0, C1, X1, ...
std::vector<ConstraintSpec> default_constraints(int N, int m);

std::vector<double> eval_cafe_system(const std::vector<double>& lambdas, int N);
ResidualReport eval_cafe_system_report(const std::vector<double>& lambdas, int N);

/// Nested sine constraints int du1 ... int^{u_{m-1}} du_m sin(beta(u_k)) for
/// 1 <= k <= m, for beta_lambda with the given N and lambdas.
ResidualReport verify_sine_immunity(int N, const std::vector<double>& lambdas, int depth_m);

/// int_0^pi cos(p th) sin(th) sin(A(N+1) th) cos(B(N+1) th) d th
double verify_appendixA_identity(int p, int A, int B, int N);

/// |sum_j w_j f(u_j) - int f(u)/sqrt(1-u^2) du| for the (M+1)-point
/// Gauss-Lobatto-Chebyshev rule.
double glc_quadrature_check(int M, const quad::Integrand& f);

/// (phi_exact, phi_smooth) for a bath field B(t) on [0, T]: the phase under
/// ideal UDD-N and under its continuous approximation (4/pi) sin(beta_s).
std::pair<double, double> smooth_phase_equivalence(const quad::Integrand& B, int N,
                                                   double T = 1.0);

}  // namespace cafe
