#include "cafe/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cafe/constraints.hpp"
#include "cafe/csim.hpp"
#include "cafe/design.hpp"
#include "cafe/error.hpp"
#include "cafe/export.hpp"
#include "cafe/filterfn.hpp"
#include "cafe/qsim.hpp"
#include "cafe/seqspec.hpp"

namespace cafe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// JSON config files: top-level keys are global options, nested objects hold
// options of the subcommand with that name.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        json j;
        try {
            input >> j;
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> out;
        collect(j, {}, out);
        return out;
    }

private:
    static std::string scalar(const json& v)
    {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void collect(const json& j, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& out)
    {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                auto p = parents;
                p.push_back(it.key());
                collect(*it, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array())
                for (const auto& v : *it) item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(*it));
            out.push_back(std::move(item));
        }
    }
};

struct Globals {
    std::uint64_t seed = 1;
    std::string out = "cafe_out";
    std::string format = "csv";
    int threads = std::max(1u, std::thread::hardware_concurrency());
};

struct DesignArgs {
    int N = 3;
    int m = 5;
    std::string start = "fourier";
    double tolerance = 1e-8;
    int max_iterations = 100;
};

struct WaveformArgs {
    std::string seq;
    int points = 1001;
    double T = 1.0;
};

struct VerifyArgs {
    bool residuals = false;
    bool orders = false;
    bool appendix_a = false;
    bool glc = false;
    int max_N = 8;
};

struct FilterArgs {
    std::string seq;
    double z_min = 0.1;
    double z_max = 1000.0;
    int points = 200;
    bool mc = false;
    int trials = 2000;
    double amplitude = 0.05;
    int bessel = 0;
};

struct SimqArgs {
    std::vector<std::string> seqs{"FREE", "CAFE(3,5,2)x4", "PT(4,0.015)", "PT(8,0.03)"};
    double J_min = 1e-2;
    double J_max = 1e2;
    int J_points = 30;
    double C = 1.0;
    double trajectory_J = 0.0;
    double tolerance = 1e-9;
};

struct SimcArgs {
    std::vector<std::string> seqs{"FREE", "CAFE(3,5,2)x2", "PT(4,0.031)", "PT(8,0.062)", "PT(4,0.031,noalt)"};
    std::string family = "gaussian";
    double rms = 0.3;
    double tau_min = 1e-2;
    double tau_max = 1e2;
    int tau_points = 25;
    int trials = 1000;
    bool control_noise = false;
    bool no_theory = false;
};

OutputFormat output_format(const Globals& g)
{
    return g.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

fs::path prepare_out(const Globals& g)
{
    fs::path dir(g.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::InvalidParameter, "cannot create output directory " + g.out);
    return dir;
}

json global_settings(const Globals& g)
{
    return {{"seed", g.seed}, {"out", g.out}, {"format", g.format}, {"threads", g.threads}};
}

void report_files(std::ostream& out, const std::vector<fs::path>& files)
{
    for (const auto& f : files) out << "wrote " << f.string() << '\n';
}

int cmd_design(const Globals& g, const DesignArgs& a, std::ostream& out)
{
    DesignSolution sol;
    if (a.start == "catalog") {
        sol = catalog_solution(a.N, a.m);
    } else {
        std::vector<double> guess;
        if (a.start == "published") {
            if (a.N != 3 || a.m != 5)
                throw Error(ErrorKind::InvalidParameter, "--start published needs --N 3 --m 5");
            guess = published_cafe35_lambdas();
        }
        sol = solve_cafe(make_design_problem(a.N, a.m, guess), a.tolerance, a.max_iterations);
    }
    const json j = design_json(sol, a.m);
    const fs::path dir = prepare_out(g);
    const fs::path file = dir / "design.json";
    std::ofstream(file) << j.dump(2) << '\n';
    json settings = global_settings(g);
    settings["design"] = {{"N", a.N}, {"m", a.m}, {"start", a.start}, {"tolerance", a.tolerance},
                          {"max_iterations", a.max_iterations}};
    write_manifest(dir, "design", settings, {file});
    out << j.dump(2) << '\n';
    return sol.converged ? 0 : 1;
}

int cmd_waveform(const Globals& g, const WaveformArgs& a, std::ostream& out)
{
    const ControlSequence seq = make_sequence(a.seq, a.T);
    const auto samples = sample_waveform(seq, a.points);
    const fs::path dir = prepare_out(g);
    const auto file =
        write_table(dir / ("waveform_" + file_stem(seq.label())), waveform_table(samples), output_format(g));
    json settings = global_settings(g);
    settings["waveform"] = {{"seq", a.seq}, {"points", a.points}, {"T", a.T}};
    write_manifest(dir, "waveform", settings, {file});
    report_files(out, {file});
    return 0;
}

int cmd_verify(const Globals& g, VerifyArgs a, std::ostream& out)
{
    if (!a.residuals && !a.orders && !a.appendix_a && !a.glc)
        a.residuals = a.orders = a.appendix_a = a.glc = true;
    require(a.max_N >= 1, "--max-N must be positive");
    json report = json::array();
    bool ok = true;
    auto check = [&](const std::string& name, double value, double limit) {
        const bool pass = std::abs(value) < limit;
        ok = ok && pass;
        out << (pass ? "PASS " : "FAIL ") << name << " = " << format_number(value) << " (limit "
            << format_number(limit) << ")\n";
        report.push_back({{"check", name}, {"value", value}, {"limit", limit}, {"pass", pass}});
    };

    if (a.residuals || a.orders) {
        const DesignSolution root = catalog_solution(3, 5);
        if (a.residuals) {
            const auto r = eval_cafe_system_report(root.lambdas, 3);
            check("CAFE(3,5) system residual max", r.max_abs, kSatisfiedThreshold);
            const auto lit = eval_cafe_system_report(published_cafe35_lambdas(), 3);
            out << "INFO four-decimal published coefficients give residual max "
                << format_number(lit.max_abs) << '\n';
            report.push_back({{"check", "published four-decimal residual max"},
                              {"value", lit.max_abs}, {"informational", true}});
        }
        if (a.orders) {
            const ControlSequence seq = make_cafe_raw(3, root.lambdas, 1.0);
            for (const auto& c : first_second_order_constraints())
                check(describe(c), eval_constraint(c, seq), kSatisfiedThreshold);
        }
    }
    if (a.appendix_a) {
        double worst = 0.0;
        for (int N = 1; N <= a.max_N; ++N)
            for (int p = 0; p < N; ++p)
                for (int A = 1; A <= 3; ++A)
                    for (int B = 0; B <= 3; ++B)
                        worst = std::max(worst, std::abs(verify_appendixA_identity(p, A, B, N)));
        check("trigonometric identity grid max (N <= " + std::to_string(a.max_N) + ")", worst, 1e-12);
    }
    if (a.glc) {
        double worst = 0.0;
        for (int M = 1; M <= 16; ++M)
            for (int k = 0; k <= 2 * M - 1; ++k)
                worst = std::max(worst, glc_quadrature_check(M, [k](double u) { return std::pow(u, k); }));
        check("Gauss-Lobatto-Chebyshev exactness max (M <= 16)", worst, 1e-12);
    }

    const fs::path dir = prepare_out(g);
    const fs::path file = dir / "verify.json";
    std::ofstream(file) << report.dump(2) << '\n';
    json settings = global_settings(g);
    settings["verify"] = {{"residuals", a.residuals}, {"orders", a.orders},
                          {"appendix_a", a.appendix_a}, {"glc", a.glc}, {"max_N", a.max_N}};
    write_manifest(dir, "verify", settings, {file});
    return ok ? 0 : 1;
}

int cmd_filter(const Globals& g, const FilterArgs& a, std::ostream& out)
{
    if (!(a.z_min > 0.0 && a.z_max > a.z_min) || a.points < 2)
        throw Error(ErrorKind::InvalidParameter, "need 0 < --z-min < --z-max and --points >= 2");
    const ControlSequence seq = make_sequence(a.seq);
    const auto z = log_grid(a.z_min, a.z_max, a.points);
    const FilterCurve analytic = analytic_curve(seq, z);
    std::vector<double> mc, mc_err;
    if (a.mc) {
        MonteCarloOptions o;
        o.threads = g.threads;
        const FilterCurve c = monte_carlo_curve(seq, z, a.amplitude / seq.duration(), a.trials, g.seed, o);
        mc = c.F;
        mc_err = c.stderr_values;
    }
    const fs::path dir = prepare_out(g);
    std::vector<fs::path> files;
    files.push_back(write_table(dir / ("filter_" + file_stem(seq.label())),
                                filter_table(z, analytic.F, mc, mc_err), output_format(g)));
    if (a.bessel > 0) {
        const FilterCurve b = bessel_curve(a.bessel, z);
        Table t{{"z", "F_bessel", "F_exact"}, {}};
        for (std::size_t i = 0; i < z.size(); ++i)
            t.rows.push_back({z[i], b.F[i], filter_udd_exact(a.bessel, z[i])});
        files.push_back(write_table(dir / ("bessel_UDD_" + std::to_string(a.bessel)), t, output_format(g)));
    }
    json settings = global_settings(g);
    settings["filter"] = {{"seq", a.seq},         {"z_min", a.z_min},     {"z_max", a.z_max},
                          {"points", a.points},   {"mc", a.mc},           {"trials", a.trials},
                          {"amplitude_AT", a.amplitude}, {"bessel", a.bessel}};
    write_manifest(dir, "filter", settings, files);
    report_files(out, files);
    return 0;
}

int cmd_simq(const Globals& g, const SimqArgs& a, std::ostream& out)
{
    if (!(a.J_min > 0.0 && a.J_max >= a.J_min) || a.J_points < 1)
        throw Error(ErrorKind::InvalidParameter, "need 0 < --J-min <= --J-max and --J-points >= 1");
    std::vector<ControlSequence> seqs;
    for (const auto& s : a.seqs) seqs.push_back(make_sequence(s));
    const std::vector<double> J =
        a.J_points == 1 ? std::vector<double>{a.J_min} : log_grid(a.J_min, a.J_max, a.J_points);
    QsimOptions o;
    o.tolerance = a.tolerance;
    const BathSweep sweep = sweep_bath_strength(seqs, J, a.C, g.threads, o);

    const fs::path dir = prepare_out(g);
    std::vector<fs::path> files;
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        files.push_back(write_table(dir / ("simq_sweep_" + file_stem(seqs[s].label())),
                                    bath_sweep_table(sweep, s), output_format(g)));
        for (const auto& row : sweep.rows)
            if (!row.converged[s])
                out << "warning: " << seqs[s].label() << " at JT = " << format_number(row.JT)
                    << " did not reach the step tolerance\n";
    }
    if (a.trajectory_J > 0.0) {
        const QuantumPropagator prop(SpinLatticeSpec::cube(a.trajectory_J, a.C));
        for (const auto& seq : seqs) {
            const auto r = qpt_infidelity(prop, seq, o);
            files.push_back(write_table(dir / ("simq_trajectory_" + file_stem(seq.label())),
                                        trajectory_table(r.trajectory), output_format(g)));
        }
    }
    json settings = global_settings(g);
    settings["simq"] = {{"seqs", a.seqs},      {"J_min", a.J_min},   {"J_max", a.J_max},
                        {"J_points", a.J_points}, {"C", a.C},        {"trajectory_J", a.trajectory_J},
                        {"tolerance", a.tolerance}, {"lattice", "cube"}, {"T", 1.0}};
    write_manifest(dir, "simq", settings, files);
    report_files(out, files);
    return 0;
}

int cmd_simc(const Globals& g, const SimcArgs& a, std::ostream& out)
{
    NoiseFamily family;
    if (a.family == "gaussian")
        family = NoiseFamily::GaussianSpectrum;
    else if (a.family == "lorentzian")
        family = NoiseFamily::LorentzianSpectrum;
    else
        throw Error(ErrorKind::InvalidParameter, "--family must be gaussian or lorentzian");
    if (!(a.tau_min > 0.0 && a.tau_max >= a.tau_min) || a.tau_points < 1 || a.trials < 2)
        throw Error(ErrorKind::InvalidParameter,
                    "need 0 < --tau-min <= --tau-max, --tau-points >= 1 and --trials >= 2");
    std::vector<ControlSequence> seqs;
    for (const auto& s : a.seqs) seqs.push_back(make_sequence(s));
    const std::vector<double> tau =
        a.tau_points == 1 ? std::vector<double>{a.tau_min} : log_grid(a.tau_min, a.tau_max, a.tau_points);
    SweepOptions o;
    o.n_trials = a.trials;
    o.threads = g.threads;
    o.with_theory = !a.no_theory;
    o.seed = g.seed;
    const auto tables = sweep_correlation_time(seqs, family, a.rms, tau, a.control_noise, o);

    const fs::path dir = prepare_out(g);
    std::vector<fs::path> files;
    for (const auto& t : tables)
        files.push_back(write_table(dir / ("simc_" + file_stem(t.label)), simc_table(t), output_format(g)));
    json settings = global_settings(g);
    settings["simc"] = {{"seqs", a.seqs},
                        {"family", a.family},
                        {"rms_T", a.rms},
                        {"tau_min", a.tau_min},
                        {"tau_max", a.tau_max},
                        {"tau_points", a.tau_points},
                        {"trials", a.trials},
                        {"control_noise", a.control_noise},
                        {"control_noise_rms", 0.01},
                        {"control_noise_tau_over_T", 0.5},
                        {"theory", !a.no_theory},
                        {"T", 1.0}};
    write_manifest(dir, "simc", settings, files);
    report_files(out, files);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Continuous dynamical-decoupling design and characterization"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with option values; command-line flags override");
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Base RNG seed")->capture_default_str();
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--format", g.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

    DesignArgs design;
    auto* c_design = app.add_subcommand("design", "Solve for CAFE harmonic coefficients");
    c_design->add_option("--N", design.N, "Pulse-count parameter")->check(CLI::PositiveNumber)->capture_default_str();
    c_design->add_option("--m", design.m, "Number of harmonics")->check(CLI::PositiveNumber)->capture_default_str();
    c_design->add_option("--start", design.start, "Initial guess")
        ->check(CLI::IsMember({"fourier", "published", "catalog"}))
        ->capture_default_str();
    c_design->add_option("--tol", design.tolerance, "Residual tolerance")->capture_default_str();
    c_design->add_option("--max-iter", design.max_iterations, "Iteration cap")->capture_default_str();

    WaveformArgs waveform;
    auto* c_wave = app.add_subcommand("waveform", "Sample alpha(t) and beta(t)");
    c_wave->add_option("--seq", waveform.seq, "Sequence, e.g. CAFE(3,5,2)x2")->required();
    c_wave->add_option("--points", waveform.points, "Sample count")->check(CLI::Range(2, 10000000))->capture_default_str();
    c_wave->add_option("--T", waveform.T, "Duration")->check(CLI::PositiveNumber)->capture_default_str();

    VerifyArgs verify;
    auto* c_verify = app.add_subcommand("verify", "Run the constraint and quadrature checks");
    c_verify->add_flag("--residuals", verify.residuals, "CAFE(3,5) system residuals");
    c_verify->add_flag("--orders", verify.orders, "First- and second-order constraints");
    c_verify->add_flag("--appendix-a", verify.appendix_a, "Trigonometric identity grid");
    c_verify->add_flag("--glc", verify.glc, "Gauss-Lobatto-Chebyshev exactness");
    c_verify->add_option("--max-N", verify.max_N, "Largest N in the identity grid")->capture_default_str();

    FilterArgs filter;
    auto* c_filter = app.add_subcommand("filter", "Filter-function curves");
    c_filter->add_option("--seq", filter.seq, "Sequence")->required();
    c_filter->add_option("--z-min", filter.z_min)->capture_default_str();
    c_filter->add_option("--z-max", filter.z_max)->capture_default_str();
    c_filter->add_option("--points", filter.points)->capture_default_str();
    c_filter->add_flag("--mc", filter.mc, "Add Monte Carlo estimates");
    c_filter->add_option("--trials", filter.trials)->check(CLI::Range(2, 100000000))->capture_default_str();
    c_filter->add_option("--amplitude", filter.amplitude, "Sinusoid amplitude times T")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_filter->add_option("--bessel", filter.bessel, "Also write the UDD(N) Bessel and exact curves")
        ->check(CLI::NonNegativeNumber);

    SimqArgs simq;
    auto* c_simq = app.add_subcommand("simq", "Central spin in a dipolar spin bath");
    c_simq->add_option("--seq", simq.seqs, "Sequences (repeatable)")->capture_default_str();
    c_simq->add_option("--J-min", simq.J_min)->capture_default_str();
    c_simq->add_option("--J-max", simq.J_max)->capture_default_str();
    c_simq->add_option("--J-points", simq.J_points)->capture_default_str();
    c_simq->add_option("--C", simq.C, "Qubit-bath coupling times T")->capture_default_str();
    c_simq->add_option("--trajectory-J", simq.trajectory_J, "Write Bloch trajectories at this JT");
    c_simq->add_option("--tol", simq.tolerance, "Step-doubling tolerance")->capture_default_str();

    SimcArgs simc;
    auto* c_simc = app.add_subcommand("simc", "Qubit under classical dephasing noise");
    c_simc->add_option("--seq", simc.seqs, "Sequences (repeatable)")->capture_default_str();
    c_simc->add_option("--family", simc.family)
        ->check(CLI::IsMember({"gaussian", "lorentzian"}))
        ->capture_default_str();
    c_simc->add_option("--rms", simc.rms, "Dephasing rms times T")->check(CLI::NonNegativeNumber)->capture_default_str();
    c_simc->add_option("--tau-min", simc.tau_min)->capture_default_str();
    c_simc->add_option("--tau-max", simc.tau_max)->capture_default_str();
    c_simc->add_option("--tau-points", simc.tau_points)->capture_default_str();
    c_simc->add_option("--trials", simc.trials)->capture_default_str();
    c_simc->add_flag("--control-noise", simc.control_noise, "1% control-amplitude noise, tau = T/2");
    c_simc->add_flag("--no-theory", simc.no_theory, "Skip the filter-function prediction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (c_design->parsed()) return cmd_design(g, design, out);
        if (c_wave->parsed()) return cmd_waveform(g, waveform, out);
        if (c_verify->parsed()) return cmd_verify(g, verify, out);
        if (c_filter->parsed()) return cmd_filter(g, filter, out);
        if (c_simq->parsed()) return cmd_simq(g, simq, out);
        if (c_simc->parsed()) return cmd_simc(g, simc, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidParameter ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace cafe
