#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cafe/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "cafe");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cafe::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const auto d = fs::temp_directory_path() / ("cafe_cli_test_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("design prints the root")
{
    const auto dir = scratch("design");
    const auto r = run({"--out", dir.string(), "design", "--N", "3", "--m", "5"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* k : {"N", "m", "lambdas", "residuals", "converged", "iterations"}) CHECK(j.contains(k));
    CHECK(j["lambdas"].size() == 5);
    CHECK(j["converged"] == true);
    CHECK(fs::exists(dir / "design.json"));
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("waveform end points")
{
    const auto dir = scratch("waveform");
    const auto r = run({"--out", dir.string(), "waveform", "--seq", "CAFE(3,5,2)x2", "--points", "2"});
    REQUIRE(r.code == 0);
    std::istringstream csv(slurp(dir / "waveform_CAFE_3_5_2_x2.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,alpha,beta");
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        const double beta = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(std::abs(beta) < 1e-9);
    }
    CHECK(rows == 2);
}

TEST_CASE("verify")
{
    const auto dir = scratch("verify");
    const auto r = run({"--out", dir.string(), "verify", "--appendix-a", "--max-N", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("usage errors exit 2")
{
    const auto dir = scratch("usage");
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--out", dir.string(), "waveform"}).code == 2);
    CHECK(run({"--out", dir.string(), "waveform", "--seq", "CAFE(3,5"}).code == 2);
    CHECK(run({"--format", "xml", "waveform", "--seq", "FREE"}).code == 2);
    CHECK(run({"--out", dir.string(), "--config", (dir / "missing.json").string(), "design"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("domain failures exit 1")
{
    const auto dir = scratch("domain");
    const auto r = run({"--out", dir.string(), "filter", "--seq", "FREE", "--points", "2", "--mc", "--trials", "4",
                        "--amplitude", "0.5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("regime") != std::string::npos);
}

TEST_CASE("filter output is deterministic and config is overridable")
{
    const auto a = scratch("filter_a"), b = scratch("filter_b");
    fs::create_directories(a);
    const auto cfg = a / "cfg.json";
    std::ofstream(cfg) << R"({"seed": 9, "filter": {"seq": "CAFE(3,5,2)x2", "points": 7, "trials": 50}})";
    const auto r1 = run({"--config", cfg.string(), "--out", a.string(), "filter", "--mc", "--points", "4"});
    const auto r2 = run({"--config", cfg.string(), "--out", b.string(), "filter", "--mc", "--points", "4"});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    const auto f1 = slurp(a / "filter_CAFE_3_5_2_x2.csv"), f2 = slurp(b / "filter_CAFE_3_5_2_x2.csv");
    CHECK(f1 == f2);
    CHECK(f1.rfind("z,F_analytic,F_mc,F_mc_stderr\n", 0) == 0);
    CHECK(std::count(f1.begin(), f1.end(), '\n') == 5);
    const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(m["settings"]["seed"] == 9);
    CHECK(m["settings"]["filter"]["points"] == 4);
    CHECK(m["settings"]["filter"]["trials"] == 50);
    CHECK(m["version"] == "0.1.0");
}

TEST_CASE("json tables")
{
    const auto dir = scratch("json");
    const auto r = run({"--out", dir.string(), "--format", "json", "simc", "--seq", "FREE", "--tau-points", "1",
                        "--tau-min", "1", "--trials", "8"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "simc_FREE.json"));
    CHECK(j["columns"][0] == "tau_c_over_T");
    CHECK(j["rows"].size() == 1);
}

TEST_CASE("simq writes sweeps and trajectories")
{
    const auto dir = scratch("simq");
    const auto r = run({"--out", dir.string(), "simq", "--seq", "UDD(2)", "--J-points", "1", "--J-min", "0.01",
                        "--trajectory-J", "0.01"});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "simq_sweep_UDD_2.csv").rfind("JT,infidelity\n", 0) == 0);
    CHECK(slurp(dir / "simq_trajectory_UDD_2.csv").rfind("t,X_on_rho_x,", 0) == 0);
}
