#include "cafe/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "cafe/error.hpp"

namespace cafe {

std::string format_number(double v)
{
    if (std::isnan(v)) return "";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

nlohmann::json table_json(const Table& table)
{
    nlohmann::json j;
    j["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row) r.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::filesystem::path write_table(const std::filesystem::path& stem, const Table& table,
                                  OutputFormat format)
{
    std::filesystem::path path = stem;
    path += format == OutputFormat::Csv ? ".csv" : ".json";
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + path.string());
    if (format == OutputFormat::Csv)
        write_csv(f, table);
    else
        f << table_json(table).dump(2) << '\n';
    return path;
}

std::string file_stem(const std::string& label)
{
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-')
            out += c;
        else if (!out.empty() && out.back() != '_')
            out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "sequence" : out;
}

Table waveform_table(const std::vector<WaveformSample>& samples)
{
    Table t{{"t", "alpha", "beta"}, {}};
    for (const auto& s : samples) t.rows.push_back({s.t, s.alpha_value, s.beta_value});
    return t;
}

Table filter_table(const std::vector<double>& z, const std::vector<double>& analytic,
                   const std::vector<double>& mc, const std::vector<double>& mc_stderr)
{
    Table t{{"z", "F_analytic", "F_mc", "F_mc_stderr"}, {}};
    const double nan = std::nan("");
    for (std::size_t i = 0; i < z.size(); ++i)
        t.rows.push_back({z[i], i < analytic.size() ? analytic[i] : nan, i < mc.size() ? mc[i] : nan,
                          i < mc_stderr.size() ? mc_stderr[i] : nan});
    return t;
}

Table simc_table(const SweepTable& sweep)
{
    Table t{{"tau_c_over_T", "fidelity_mean", "fidelity_stderr", "theory"}, {}};
    for (const auto& r : sweep.rows)
        t.rows.push_back({r.tau_over_T, 1.0 - r.ensemble.infidelity_mean, r.ensemble.infidelity_stderr,
                          1.0 - r.theory});
    return t;
}

Table bath_sweep_table(const BathSweep& sweep, std::size_t sequence)
{
    Table t{{"JT", "infidelity"}, {}};
    for (const auto& r : sweep.rows) t.rows.push_back({r.JT, r.infidelity.at(sequence)});
    return t;
}

Table trajectory_table(const std::vector<BlochPoint>& trajectory)
{
    static const char* axis[3] = {"X", "Y", "Z"};
    static const char* input[3] = {"x", "y", "z"};
    Table t;
    t.columns.push_back("t");
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            t.columns.push_back(std::string(axis[k]) + "_on_rho_" + input[j]);
    for (const auto& p : trajectory) {
        std::vector<double> row{p.t};
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) row.push_back(p.value[j][k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json design_json(const DesignSolution& s, int m)
{
    nlohmann::json j;
    j["N"] = s.N;
    j["m"] = m;
    j["lambdas"] = s.lambdas;
    j["residuals"] = s.residuals;
    j["residual_norm"] = s.residual_norm;
    j["converged"] = s.converged;
    j["status"] = to_string(s.status);
    j["iterations"] = s.iterations;
    return j;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, const std::string& command,
                                     const nlohmann::json& settings,
                                     const std::vector<std::filesystem::path>& outputs)
{
    nlohmann::json j;
    j["tool"] = "cafe";
    j["version"] = kVersion;
    j["command"] = command;
    j["settings"] = settings;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : outputs) files.push_back(p.filename().string());
    j["outputs"] = files;
    const auto path = dir / "manifest.json";
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::InvalidParameter, "cannot write " + path.string());
    f << j.dump(2) << '\n';
    return path;
}

}  // namespace cafe
