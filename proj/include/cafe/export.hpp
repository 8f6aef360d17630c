#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cafe/control.hpp"
#include "cafe/csim.hpp"
#include "cafe/design.hpp"
#include "cafe/qsim.hpp"

namespace cafe {

inline constexpr const char* kVersion = "0.1.0";

enum class OutputFormat { Csv, Json };

/// Column-major numeric table. NaN cells are written empty (CSV) or null (JSON).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Shortest round-trip text for a double (17 significant digits at most).
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& table);
nlohmann::json table_json(const Table& table);
/// Writes `stem`.csv or `stem`.json and returns the path written.
std::filesystem::path write_table(const std::filesystem::path& stem, const Table& table,
                                  OutputFormat format);

/// Label reduced to [A-Za-z0-9_.-] for use in file names.
std::string file_stem(const std::string& label);

Table waveform_table(const std::vector<WaveformSample>& samples);
/// z, F_analytic, F_mc, F_mc_stderr; missing Monte Carlo columns are NaN.
Table filter_table(const std::vector<double>& z, const std::vector<double>& analytic,
                   const std::vector<double>& mc, const std::vector<double>& mc_stderr);
/// tau_c_over_T, fidelity_mean, fidelity_stderr, theory (theory as a fidelity).
Table simc_table(const SweepTable& sweep);
/// JT, infidelity for one sequence of the sweep.
Table bath_sweep_table(const BathSweep& sweep, std::size_t sequence);
/// t, then K_on_rho_j for every Bloch component K and input j.
Table trajectory_table(const std::vector<BlochPoint>& trajectory);

nlohmann::json design_json(const DesignSolution& solution, int m);

/// Writes manifest.json into `dir`: version, subcommand, resolved settings and
/// the list of output files. No timestamps, so reruns are byte-identical.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const std::string& command,
                                     const nlohmann::json& settings,
                                     const std::vector<std::filesystem::path>& outputs);

}  // namespace cafe
