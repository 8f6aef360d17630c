#include "cafe/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cafe/error.hpp"

namespace cafe {

using std::numbers::pi;

const char* to_string(ConstraintKind kind)
{
    switch (kind) {
    case ConstraintKind::SineMoment: return "sine_moment";
    case ConstraintKind::CosineMoment: return "cosine_moment";
    case ConstraintKind::CrossTerm2nd: return "cross_term";
    case ConstraintKind::FirstOrderSine: return "first_order_sine";
    case ConstraintKind::FirstOrderCosine: return "first_order_cosine";
    case ConstraintKind::SecondOrderSine: return "second_order_sine";
    case ConstraintKind::SecondOrderCosine: return "second_order_cosine";
    }
    return "unknown";
}

std::string describe(const ConstraintSpec& spec)
{
    switch (spec.kind) {
    case ConstraintKind::SineMoment: return "int u^" + std::to_string(spec.power) + " sin b";
    case ConstraintKind::CosineMoment: return "int u^" + std::to_string(spec.power) + " cos b";
    case ConstraintKind::CrossTerm2nd:
        return "iint u2^" + std::to_string(spec.power) + " sin(b1-b2)";
    default: return to_string(spec.kind);
    }
}

namespace {

constexpr double kAbsTol = 1e-12;
constexpr double kFailThreshold = 1e-8;

double ipow(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

std::vector<double> theta_breaks(const ControlSequence& seq)
{
    const double T = seq.duration();
    std::vector<double> out;
    for (double t : seq.breakpoints()) {
        const double s = std::clamp(t / T, 0.0, 1.0);
        out.push_back(2.0 * std::asin(std::sqrt(s)));
    }
    out.front() = 0.0;
    out.back() = pi;
    return out;
}

std::vector<double> u_breaks(const ControlSequence& seq)
{
    std::vector<double> out;
    for (double t : seq.breakpoints()) out.push_back(2.0 * t / seq.duration() - 1.0);
    out.front() = -1.0;
    out.back() = 1.0;
    return out;
}

void check_accuracy(const ConstraintValue& v, const ConstraintSpec& spec)
{
    if (!(v.error <= kFailThreshold) || !std::isfinite(v.value))
        throw AccuracyFailure("constraint " + describe(spec) + " did not converge", v.error);
}

// Reduce every kind to a weighted single integral  int w(u) trig(beta) du  or
// to the cross term with weight u2^n.
struct SingleForm {
    bool sine;
    int power;
    double factor;
};

bool single_form(const ConstraintSpec& spec, SingleForm& out)
{
    switch (spec.kind) {
    case ConstraintKind::SineMoment: out = {true, spec.power, 1.0}; return true;
    case ConstraintKind::CosineMoment: out = {false, spec.power, 1.0}; return true;
    case ConstraintKind::FirstOrderSine: out = {true, 0, 1.0}; return true;
    case ConstraintKind::FirstOrderCosine: out = {false, 0, 1.0}; return true;
    // iint_{u2<u1} f(u1) - f(u2) = int f(u) (1 + u) du - int f(u) (1 - u) du
    case ConstraintKind::SecondOrderSine: out = {true, 1, 2.0}; return true;
    case ConstraintKind::SecondOrderCosine: out = {false, 1, 2.0}; return true;
    case ConstraintKind::CrossTerm2nd: return false;
    }
    return false;
}

// ---- theta route ----------------------------------------------------------

ConstraintValue single_theta(const ControlSequence& seq, const std::vector<double>& breaks,
                             bool sine, int power)
{
    auto f = [&](double th) {
        const double b = seq.beta_theta(th);
        const double u = -std::cos(th);
        return ipow(u, power) * (sine ? std::sin(b) : std::cos(b)) * std::sin(th);
    };
    const auto r = quad::integrate_pieces(f, breaks, kAbsTol, 64, 4, 10);
    return {r.value, r.error};
}

// int du1 [sin b1 C(u1) - cos b1 S(u1)] with C, S the running integrals of
// u^n cos b and u^n sin b. The running integrals come from Chebyshev
// antiderivatives on each smooth piece.
ConstraintValue cross_theta(const ControlSequence& seq, const std::vector<double>& breaks,
                            int power)
{
    ConstraintValue out;
    double offset_c = 0.0, offset_s = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        if (!(b > a)) continue;
        auto gc = [&](double th) {
            return ipow(-std::cos(th), power) * std::cos(seq.beta_theta(th)) * std::sin(th);
        };
        auto gs = [&](double th) {
            return ipow(-std::cos(th), power) * std::sin(seq.beta_theta(th)) * std::sin(th);
        };
        const auto fc = quad::ChebyshevSeries::fit_adaptive(gc, a, b, 1e-14, 256, 8192);
        const auto fs = quad::ChebyshevSeries::fit_adaptive(gs, a, b, 1e-14, 256, 8192);
        const auto C = fc.antiderivative();
        const auto S = fs.antiderivative();
        auto outer = [&](double th) {
            const double beta = seq.beta_theta(th);
            return (std::sin(beta) * (offset_c + C(th)) - std::cos(beta) * (offset_s + S(th))) *
                   std::sin(th);
        };
        const double piece[2] = {a, b};
        const auto r = quad::integrate_pieces(outer, piece, kAbsTol, 64, 4, 10);
        out.value += r.value;
        double big = 0.0;
        for (double c : fc.coefficients()) big = std::max(big, std::abs(c));
        for (double c : fs.coefficients()) big = std::max(big, std::abs(c));
        out.error += r.error + 2.0 * (b - a) * big * std::max(fc.tail_ratio(), fs.tail_ratio());
        offset_c += C(b);
        offset_s += S(b);
    }
    return out;
}

// ---- u route ---------------------------------------------------------------

double beta_u(const ControlSequence& seq, double u)
{
    const double T = seq.duration();
    return seq.beta(std::clamp(0.5 * T * (u + 1.0), 0.0, T));
}

ConstraintValue adaptive_pieces(const quad::Integrand& f, const std::vector<double>& breaks,
                                double hi, double tol)
{
    ConstraintValue out;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k];
        const double b = std::min(breaks[k + 1], hi);
        if (!(b > a)) break;
        const auto r = quad::integrate_adaptive(f, a, b, tol, 4000);
        out.value += r.value;
        out.error += r.error;
    }
    return out;
}

ConstraintValue eval_u(const ConstraintSpec& spec, const ControlSequence& seq)
{
    const auto breaks = u_breaks(seq);
    auto trig = [&](bool sine, double u) {
        const double b = beta_u(seq, u);
        return sine ? std::sin(b) : std::cos(b);
    };
    switch (spec.kind) {
    case ConstraintKind::SineMoment:
    case ConstraintKind::CosineMoment:
    case ConstraintKind::FirstOrderSine:
    case ConstraintKind::FirstOrderCosine: {
        const bool sine = spec.kind == ConstraintKind::SineMoment ||
                          spec.kind == ConstraintKind::FirstOrderSine;
        const int n = (spec.kind == ConstraintKind::SineMoment ||
                       spec.kind == ConstraintKind::CosineMoment)
                          ? spec.power
                          : 0;
        return adaptive_pieces([&](double u) { return ipow(u, n) * trig(sine, u); }, breaks,
                               1.0, kAbsTol);
    }
    case ConstraintKind::SecondOrderSine:
    case ConstraintKind::SecondOrderCosine:
    case ConstraintKind::CrossTerm2nd: {
        // Literal iterated form: the inner integral is its own adaptive
        // quadrature at every outer node.
        double inner_err = 0.0;
        auto outer = [&](double u1) {
            const double b1 = beta_u(seq, u1);
            ConstraintValue inner;
            if (spec.kind == ConstraintKind::CrossTerm2nd) {
                inner = adaptive_pieces(
                    [&](double u2) { return ipow(u2, spec.power) * std::sin(b1 - beta_u(seq, u2)); },
                    breaks, u1, 1e-13);
            } else {
                const bool sine = spec.kind == ConstraintKind::SecondOrderSine;
                const double f1 = sine ? std::sin(b1) : std::cos(b1);
                inner = adaptive_pieces([&](double u2) { return f1 - trig(sine, u2); }, breaks,
                                        u1, 1e-13);
            }
            inner_err = std::max(inner_err, inner.error);
            return inner.value;
        };
        auto r = adaptive_pieces(outer, breaks, 1.0, 1e-11);
        r.error += 2.0 * inner_err;
        return r;
    }
    }
    return {};
}

}  // namespace

ConstraintValue eval_constraint_detailed(const ConstraintSpec& spec, const ControlSequence& seq,
                                         Domain domain)
{
    require(spec.power >= 0, "constraint moment power must be nonnegative");
    ConstraintValue v;
    if (domain == Domain::U) {
        v = eval_u(spec, seq);
    } else {
        const auto breaks = theta_breaks(seq);
        SingleForm form{};
        if (single_form(spec, form)) {
            v = single_theta(seq, breaks, form.sine, form.power);
            v.value *= form.factor;
            v.error *= form.factor;
        } else {
            v = cross_theta(seq, breaks, spec.power);
        }
    }
    check_accuracy(v, spec);
    return v;
}

double eval_constraint(const ConstraintSpec& spec, const ControlSequence& seq)
{
    return eval_constraint_detailed(spec, seq).value;
}

ResidualReport eval_constraints(const std::vector<ConstraintSpec>& specs,
                                const ControlSequence& seq, Domain domain)
{
    ResidualReport rep;
    for (const auto& s : specs) {
        const auto v = eval_constraint_detailed(s, seq, domain);
        rep.residuals.push_back(v.value);
        rep.max_abs = std::max(rep.max_abs, std::abs(v.value));
        rep.quadrature_error_estimate += v.error;
    }
    return rep;
}

std::vector<ConstraintSpec> cafe_system_constraints()
{
    return {{ConstraintKind::CosineMoment, 0},
            {ConstraintKind::CrossTerm2nd, 0},
            {ConstraintKind::CosineMoment, 2},
            {ConstraintKind::CrossTerm2nd, 2},
            {ConstraintKind::CosineMoment, 4}};
}

std::vector<ConstraintSpec> first_second_order_constraints()
{
    return {{ConstraintKind::FirstOrderSine, 0},
            {ConstraintKind::FirstOrderCosine, 0},
            {ConstraintKind::SecondOrderSine, 0},
            {ConstraintKind::SecondOrderCosine, 0},
            {ConstraintKind::CrossTerm2nd, 0}};
}

std::vector<ConstraintSpec> default_constraints(int N, int m)
{
    require(N >= 1, "N must be positive");
    require(m >= 0, "m must be nonnegative");
    std::vector<ConstraintSpec> out;
    const int step = (N % 2 == 1) ? 2 : 1;
    for (int n = 0; static_cast<int>(out.size()) < m; n += step) {
        out.push_back({ConstraintKind::CosineMoment, n});
        if (static_cast<int>(out.size()) < m) out.push_back({ConstraintKind::CrossTerm2nd, n});
    }
    return out;
}

std::vector<double> eval_cafe_system(const std::vector<double>& lambdas, int N)
{
    return eval_cafe_system_report(lambdas, N).residuals;
}

ResidualReport eval_cafe_system_report(const std::vector<double>& lambdas, int N)
{
    return eval_constraints(cafe_system_constraints(), make_cafe_raw(N, lambdas, 1.0));
}

ResidualReport verify_sine_immunity(int N, const std::vector<double>& lambdas, int depth_m)
{
    require(N >= 1, "N must be positive");
    require(depth_m >= 1, "depth must be positive");
    const auto seq = make_cafe_raw(N, lambdas, 1.0);
    const double th_breaks[2] = {0.0, pi};
    ResidualReport rep;
    // Repeated integration (Cauchy): the m-fold nested integral of sin(beta(u_k))
    // collapses to one integral with weight
    // (1-u)^(k-1)/(k-1)! * (1+u)^(m-k)/(m-k)!.
    for (int k = 1; k <= depth_m; ++k) {
        const double norm = std::tgamma(k) * std::tgamma(depth_m - k + 1);
        auto f = [&](double th) {
            const double u = -std::cos(th);
            return ipow(1.0 - u, k - 1) * ipow(1.0 + u, depth_m - k) *
                   std::sin(seq.beta_theta(th)) * std::sin(th) / norm;
        };
        const auto r = quad::integrate_pieces(f, th_breaks, 1e-13, 64, 8, 10);
        if (r.error > kFailThreshold)
            throw AccuracyFailure("nested sine constraint did not converge", r.error);
        rep.residuals.push_back(r.value);
        rep.max_abs = std::max(rep.max_abs, std::abs(r.value));
        rep.quadrature_error_estimate += r.error;
    }
    return rep;
}

double verify_appendixA_identity(int p, int A, int B, int N)
{
    require(p >= 0 && A >= 1 && B >= 0 && N >= 1, "need p >= 0, A >= 1, B >= 0, N >= 1");
    const double w = N + 1.0;
    auto f = [&](double th) {
        return std::cos(p * th) * std::sin(th) * std::sin(A * w * th) * std::cos(B * w * th);
    };
    // Trigonometric polynomial of degree p + 1 + (A + B)(N + 1): enough panels
    // make the Gauss-Legendre sum exact.
    const int degree = p + 1 + (A + B) * (N + 1);
    const int panels = std::max(2, degree / 16 + 1);
    return quad::composite(f, 0.0, pi, panels, 64);
}

double glc_quadrature_check(int M, const quad::Integrand& f)
{
    require(M >= 1, "quadrature order must be positive");
    double sum = 0.0;
    for (int j = 0; j <= M; ++j) {
        const double w = (j == 0 || j == M) ? pi / (2.0 * M) : pi / M;
        sum += w * f(-std::cos(j * pi / M));
    }
    // int f(u)/sqrt(1-u^2) du = int_0^pi f(-cos th) d th
    const double th_breaks[2] = {0.0, pi};
    const auto r = quad::integrate_pieces([&](double th) { return f(-std::cos(th)); }, th_breaks,
                                          1e-15, 64, 2, 8);
    return std::abs(sum - r.value);
}

std::pair<double, double> smooth_phase_equivalence(const quad::Integrand& B, int N, double T)
{
    require(N >= 1, "N must be positive");
    require(T > 0.0, "T must be positive");
    // Exact UDD: y(t) = cos(beta_UDD) flips sign at every pulse.
    std::vector<double> breaks{0.0};
    for (double t : udd_times(N, T)) breaks.push_back(t);
    breaks.push_back(T);
    double exact = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double piece[2] = {breaks[k], breaks[k + 1]};
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        exact += sign * quad::integrate_pieces(B, piece, 1e-14, 64, 2, 10).value;
    }
    // Smooth: (4/pi) sin(beta_s) = (4/pi) (-1)^N sqrt(1-u^2) U_N(u); the
    // integral is taken in theta so the weight stays smooth.
    const double th_breaks[2] = {0.0, pi};
    auto f = [&](double th) {
        const double s = std::sin(0.5 * th);
        const double t = T * s * s;
        // dt = (T/2) sin th d th
        return B(t) * std::sin((N + 1.0) * th) * 0.5 * T * std::sin(th);
    };
    const double smooth =
        (4.0 / pi) * quad::integrate_pieces(f, th_breaks, 1e-14, 64, 4, 10).value;
    return {exact, smooth};
}

}  // namespace cafe
