#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmxb/runner.hpp"

using namespace gmxb;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kSmallGmwb = R"(# quick run
[contract]
kind = gmwb
w0 = 100
expiry = 3
G = 10
penalties = 1:0.08, 2:0.07

[market]
sigma = 0.15
r = 0.05
alpha = 0.01

[stepper]
steps_per_year = 10

[search]
mode = dense
partition = 51

[mc]
paths = 2000
seed = 11
substeps_per_year = 4
)";

} // namespace

TEST_CASE("config parsing round trip") {
    const RunConfig c = RunConfig::parse(kSmallGmwb);
    CHECK(c.kind == "gmwb");
    CHECK(c.expiry == 3);
    CHECK(c.G == 10.0);
    CHECK(c.penalties.at(1) == 0.08);
    CHECK(c.penalties.at(2) == 0.07);
    CHECK(c.market.sigma == 0.15);
    CHECK(c.steps_per_year == 10);
    CHECK(c.partition == 51);
    CHECK(c.mc_paths == 2000);
    CHECK(c.mc_seed == 11);
}

TEST_CASE("config errors carry line and field diagnostics") {
    try {
        RunConfig::parse("[contract]\nkind = gmwb\nexpiry = soon\n", "bad.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("bad.cfg:3") != std::string::npos);
        CHECK(what.find("contract.expiry") != std::string::npos);
    }

    CHECK_THROWS_AS(RunConfig::parse("[contract]\nkindd = gmwb\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[market]\nsigma = 0.2\n"), ConfigError); // no kind
    CHECK_THROWS_AS(RunConfig::parse("preset = nope\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("presets reproduce the bundled parameter tables field for field") {
    const RunConfig g = RunConfig::from_preset("glwb-table1");
    CHECK(g.kind == "glwb");
    CHECK(g.market.sigma == 0.20);
    CHECK(g.market.r == 0.04);
    CHECK(g.market.alpha == 0.015);
    CHECK(g.delta == 0.05);
    CHECK(g.beta == 0.06);
    CHECK(g.expiry == 57);
    CHECK(g.w0 == 100.0);
    CHECK(g.penalties.at(1) == 0.03);
    CHECK(g.penalties.at(2) == 0.02);
    CHECK(g.penalties.at(3) == 0.01);
    CHECK(g.penalties.count(4) == 0); // zero from 4 on
    CHECK(g.ratchets.count(3) == 1);  // triennial
    CHECK(g.ratchets.count(6) == 1);
    CHECK(g.ratchets.count(4) == 0);
    CHECK(g.mortality_table == "bundled");

    const RunConfig m = RunConfig::from_preset("gmwb-table2");
    CHECK(m.kind == "gmwb");
    CHECK(m.market.sigma == 0.15);
    CHECK(m.market.r == 0.05);
    CHECK(m.market.alpha == 0.01);
    CHECK(m.G == 10.0);
    CHECK(m.expiry == 10);
    CHECK(m.w0 == 100.0);
    CHECK(m.penalties.at(1) == 0.08);
    CHECK(m.penalties.at(6) == 0.03);
    CHECK(m.penalties.count(7) == 0);
}

TEST_CASE("a preset line seeds defaults that later keys override") {
    const RunConfig c = RunConfig::parse("preset = gmwb-table2\n[stepper]\nsteps_per_year = 7\n");
    CHECK(c.kind == "gmwb");
    CHECK(c.G == 10.0);
    CHECK(c.steps_per_year == 7);
}

TEST_CASE("config hash is a pure function of the text") {
    const RunConfig a = RunConfig::parse(kSmallGmwb);
    const RunConfig b = RunConfig::parse(kSmallGmwb);
    CHECK(a.config_hash() == b.config_hash());
    const RunConfig c = RunConfig::parse(std::string(kSmallGmwb) + "\n# trailing\n");
    CHECK(a.config_hash() != c.config_hash());
}

TEST_CASE("price subcommand writes the summary and histogram") {
    RunConfig c = RunConfig::parse(kSmallGmwb);
    const auto dir = std::filesystem::temp_directory_path() / "gmxb_test_price";
    std::filesystem::remove_all(dir);
    c.output_dir = dir.string();
    run_subcommand(c, "price");

    const std::string summary = read_file(dir / "price_summary.txt");
    CHECK(summary.find("value_at_origin:") != std::string::npos);
    CHECK(summary.find("# config_hash: 0x") != std::string::npos);
    const std::string hist = read_file(dir / "lambda_histogram.csv");
    CHECK(hist.find("n,nonwithdrawal,contract_rate,surrender,fractional") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("control-maps and slice subcommands write per-anniversary files") {
    RunConfig c = RunConfig::parse(kSmallGmwb);
    const auto dir = std::filesystem::temp_directory_path() / "gmxb_test_maps";
    std::filesystem::remove_all(dir);
    c.output_dir = dir.string();
    c.slice_anniversary = 1;
    c.slice_x1 = 100.0;
    run_subcommand(c, "control-maps");
    CHECK(std::filesystem::exists(dir / "control_map_n0.csv"));
    CHECK(std::filesystem::exists(dir / "control_map_n2.csv"));

    run_subcommand(c, "slice");
    const std::string slice = read_file(dir / "slice_n1.csv");
    CHECK(slice.find("x2,v_minus,v_plus") != std::string::npos);

    c.slice_anniversary = 7; // beyond expiry 3
    CHECK_THROWS_AS(run_subcommand(c, "slice"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify subcommand emits the report and violation list") {
    RunConfig c = RunConfig::parse(kSmallGmwb);
    const auto dir = std::filesystem::temp_directory_path() / "gmxb_test_verify";
    std::filesystem::remove_all(dir);
    c.output_dir = dir.string();
    run_subcommand(c, "verify");
    const std::string report = read_file(dir / "verify_report.txt");
    CHECK(report.find("mc_estimate:") != std::string::npos);
    CHECK(report.find("bang_bang_max_rel_gap_certified:") != std::string::npos);
    CHECK(report.find("gap_max_rel[1]: skipped (not certified)") != std::string::npos);
    CHECK(report.find("cm_failures:") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "cm_violations.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("converge subcommand tabulates refinement levels") {
    RunConfig c = RunConfig::parse(kSmallGmwb);
    c.refinement = 1;
    const auto dir = std::filesystem::temp_directory_path() / "gmxb_test_converge";
    std::filesystem::remove_all(dir);
    c.output_dir = dir.string();
    run_subcommand(c, "converge");
    const std::string table = read_file(dir / "convergence.csv");
    CHECK(table.find("level,n1,n2,steps_per_year,partition,value,change,ratio") !=
          std::string::npos);
    CHECK(table.find("\n0,65,65,10,51,") != std::string::npos);
    CHECK(table.find("\n1,129,129,20,101,") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown subcommand is a config error") {
    const RunConfig c = RunConfig::parse(kSmallGmwb);
    CHECK_THROWS_AS(run_subcommand(c, "frobnicate"), ConfigError);
}

TEST_CASE("user mortality tables are picked up from disk") {
    const auto path = std::filesystem::temp_directory_path() / "gmxb_test_table.txt";
    {
        std::ofstream f(path);
        f << "# annual_hazard\n65 0.5\n66 0.5\n";
    }
    RunConfig c = RunConfig::parse("[contract]\nkind = glwb\nexpiry = 2\nw0 = 100\n"
                                   "[mortality]\ntable = " +
                                   path.string() + "\n");
    const MortalityModel m = c.make_mortality();
    CHECK(m.t_star() == doctest::Approx(2.0));
    CHECK(m.survival(1.0) == doctest::Approx(0.5));
    std::filesystem::remove(path);

    c.mortality_table = "/nonexistent/table.txt";
    CHECK_THROWS_AS(c.make_mortality(), ConfigError);
}
