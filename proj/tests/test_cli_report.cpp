#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "acphase/report.hpp"

using namespace acphase;
namespace fs = std::filesystem;

namespace {

const std::string cli = ACPHASE_CLI;
const std::string config_dir = ACPHASE_CONFIG_DIR;
const std::string data_dir = ACPHASE_DATA_DIR;

json load(const std::string& name) { return read_json_file(config_dir + "/" + name); }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args)
{
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const std::string tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
    const fs::path out = dir / ("acphase_out_" + tag), err = dir / ("acphase_err_" + tag);
    const std::string cmd = "\"" + cli + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    fs::remove(out);
    fs::remove(err);
    return r;
}

json minimal()
{
    return json::parse(R"({
      "schema_version": 1,
      "field": { "type": "plane_wave", "lambda_cm": 1.0, "flux_W_cm2": 10.0 },
      "particle": { "species": "dipole", "L_nm": 1.0, "dipole_axis": "y" },
      "trajectory": { "kind": "diamond", "alpha_mm": 0.5, "l_mm": 0.866, "d_mm": 0.866, "v_over_c": 0.01 }
    })");
}

std::string config_error(const json& j)
{
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

// ---------------------------------------------------------------- schema

TEST(Schema, MinimalConfigParses) { EXPECT_EQ(config_error(minimal()), ""); }

TEST(Schema, UnknownKeyRejectedWithPath)
{
    auto j = minimal();
    j["trajectory"]["alpha_mmm"] = 0.5;
    const std::string msg = config_error(j);
    EXPECT_NE(msg.find("trajectory.alpha_mmm"), std::string::npos) << msg;
    j = minimal();
    j["extra"] = 1;
    EXPECT_NE(config_error(j).find("extra"), std::string::npos);
}

TEST(Schema, WrongVersionRejected)
{
    auto j = minimal();
    j["schema_version"] = 2;
    EXPECT_NE(config_error(j).find("schema_version"), std::string::npos);
}

TEST(Schema, MissingRequiredKeyNamed)
{
    auto j = minimal();
    j["trajectory"].erase("v_over_c");
    EXPECT_NE(config_error(j).find("v_over_c"), std::string::npos);
}

TEST(Schema, BadRunValuesRejected)
{
    auto j = minimal();
    j["run"] = {{"seed", -1}};
    EXPECT_NE(config_error(j).find("run.seed"), std::string::npos);
    j["run"] = {{"margin", 0.5}};
    EXPECT_NE(config_error(j).find("run.margin"), std::string::npos);
}

TEST(Schema, SweepParameterMustExist)
{
    auto j = minimal();
    j["sweep"] = {{"parameter", "trajectory.speed"}, {"values", {0.1}}};
    EXPECT_NE(config_error(j).find("trajectory.speed"), std::string::npos);
}

TEST(SourceTags, TaggedValuesUnwrapped)
{
    const json j = json::parse(R"({"a": {"value": 2.5, "provenance": "chosen", "note": "x"},
                                   "b": [{"value": 1, "provenance": "paper-given"}], "c": "text"})");
    const json s = strip_provenance(j, true);
    EXPECT_EQ(s.at("a"), 2.5);
    EXPECT_EQ(s.at("b")[0], 1);
    EXPECT_EQ(s.at("c"), "text");
}

TEST(SourceTags, BareNumberAndBadTagRejected)
{
    EXPECT_THROW(strip_provenance(json::parse(R"({"a": 1})"), true), ConfigError);
    EXPECT_NO_THROW(strip_provenance(json::parse(R"({"a": 1})"), false));
    EXPECT_THROW(strip_provenance(json::parse(R"({"a": {"value": 1, "provenance": "guess"}})"), true), ConfigError);
    EXPECT_THROW(strip_provenance(json::parse(R"({"a": {"value": 1, "provenance": "chosen", "x": 0}})"), true),
                 ConfigError);
}

// ---------------------------------------------------------------- compute

TEST(Compute, ZeroFluxGivesFullVisibility)
{
    const auto r = cmd_compute(parse_config(load("zero_flux.json")));
    EXPECT_EQ(r.exit_code, exit_ok);
    const json j = json::parse(r.text);
    EXPECT_EQ(j.at("Cmag"), 0.0);
    EXPECT_EQ(j.at("F"), 1.0);
    EXPECT_NEAR(j.at("mc_estimate").at("modulus").get<double>(), 1.0, 1e-15);
}

TEST(Compute, DiamondDipoleMatchesClosedForm)
{
    const auto r = cmd_compute(parse_config(load("diamond_dipole.json")));
    EXPECT_EQ(r.exit_code, exit_ok);
    const json j = json::parse(r.text);
    EXPECT_LT(j.at("closed_form").at("relative_deviation").get<double>(), 1e-6);
    EXPECT_GT(j.at("Cmag").get<double>(), 0.0);
    const double c = j.at("Cmag");
    EXPECT_NEAR(j.at("F").get<double>(), std::cyl_bessel_j(0.0, c), 1e-12);
    EXPECT_EQ(j.at("seed"), 42);
}

TEST(Compute, GuideAndEllipseConfigsPass)
{
    for (const char* name : {"guide_te10_dipole.json", "ellipse_electron.json"}) {
        const auto r = cmd_compute(parse_config(load(name)));
        EXPECT_EQ(r.exit_code, exit_ok) << name;
        EXPECT_LT(json::parse(r.text).at("closed_form").at("relative_deviation").get<double>(), 1e-6) << name;
    }
}

TEST(Compute, SameSeedIsByteIdentical)
{
    const auto c = parse_config(load("diamond_dipole.json"));
    EXPECT_EQ(cmd_compute(c).text, cmd_compute(c).text);
    EXPECT_NE(cmd_compute(c, 7).text, cmd_compute(c).text);
}

TEST(Compute, TighterToleranceReportsOracleExit)
{
    auto j = load("diamond_dipole.json");
    j["run"]["oracle_tolerance"] = 1e-300;
    j["run"]["mc_samples"] = 0;
    const auto r = cmd_compute(parse_config(j));
    const double dev = json::parse(r.text).at("closed_form").at("relative_deviation");
    EXPECT_EQ(r.exit_code, dev > 1e-300 ? exit_oracle : exit_ok);
}

// ---------------------------------------------------------------- sweep

TEST(Sweep, OnePointEqualsCompute)
{
    auto j = load("diamond_dipole.json");
    j["run"]["mc_samples"] = 0;
    j["sweep"] = {{"parameter", "trajectory.v_over_c"}, {"values", {0.01}}};
    const auto sweep = cmd_sweep(j);
    auto plain = j;
    plain.erase("sweep");
    const json c = json::parse(cmd_compute(parse_config(plain)).text);
    std::istringstream csv(sweep.text);
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    EXPECT_EQ(header, "parameter_value,A,B,Cmag,F,closed_form_Cmag,estimate_Cmag");
    std::vector<double> cols;
    std::istringstream cells(row);
    for (std::string cell; std::getline(cells, cell, ',');) cols.push_back(std::stod(cell));
    ASSERT_EQ(cols.size(), 7u);
    EXPECT_NEAR(cols[1], c.at("A").get<double>(), 1e-8 * c.at("Cmag").get<double>());
    EXPECT_NEAR(cols[2], c.at("B").get<double>(), 1e-8 * c.at("Cmag").get<double>());
    EXPECT_NEAR(cols[3], c.at("Cmag").get<double>(), 1e-8 * c.at("Cmag").get<double>());
    EXPECT_NEAR(cols[5], c.at("closed_form").at("Cmag").get<double>(), 1e-8 * cols[5]);
}

TEST(Sweep, VelocitySummaryLine)
{
    const auto r = cmd_sweep(load("sweep_electron_asymmetric_v.json"));
    EXPECT_EQ(r.exit_code, exit_ok);
    EXPECT_NE(r.text.find("# summary,loglog_slope_vs_v"), std::string::npos);
    const auto pos = r.text.find("estimate=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(r.text.substr(pos + 9)), 0.5, 1e-9);
}

TEST(Sweep, RequiresSweepBlock) { EXPECT_THROW(cmd_sweep(minimal()), ConfigError); }

TEST(Sweep, LogLogSlope)
{
    EXPECT_NEAR(*loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}), 2.0, 1e-12);
    EXPECT_FALSE(loglog_slope({1, 2}, {1, 0}).has_value());
    EXPECT_FALSE(loglog_slope({1}, {1}).has_value());
}

// ---------------------------------------------------------------- table 1

TEST(Table1, EveryRowWithinOneDecade)
{
    const auto rows = table1_rows(read_json_file(data_dir + "/table1_defaults.json"));
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        EXPECT_TRUE(r.pass) << r.trajectory << ' ' << r.species << ' ' << r.computed << " vs " << r.table_value;
        EXPECT_LE(std::fabs(r.log10_ratio()), 1.0);
        EXPECT_TRUE(std::isfinite(r.quadrature));
    }
}

TEST(Table1, DefaultsNeedSourceTags)
{
    auto d = read_json_file(data_dir + "/table1_defaults.json");
    d["rows"][0]["table_C"] = 1.0;
    EXPECT_THROW(table1_rows(d, {false}), ConfigError);
}

// ---------------------------------------------------------------- cross sections

TEST(XSection, ElectronIsThomson)
{
    const json j = xsection_json(parse_config(load("xsection_electron.json")));
    EXPECT_NEAR(j.at("sigma_m2").get<double>(), 6.652e-29, 0.001 * 6.652e-29);
    EXPECT_EQ(j.at("formula"), "sigma_thomson");
}

TEST(XSection, ZeroMomentsGiveUnboundedPass)
{
    auto j = minimal();
    j["particle"]["L_nm"] = 0.0;
    const json x = xsection_json(parse_config(j));
    EXPECT_EQ(x.at("sigma_natural"), 0.0);
    EXPECT_TRUE(x.at("pass").get<bool>());
    EXPECT_TRUE(x.at("unbounded").get<bool>());
    EXPECT_TRUE(x.at("l_mfp_m").is_null());
}

TEST(XSection, DipoleScenarioPasses)
{
    const json x = xsection_json(parse_config(load("xsection_dipole.json")));
    EXPECT_TRUE(x.at("pass").get<bool>());
    EXPECT_GT(x.at("l_mfp_m").get<double>(), x.at("path_scale_m").get<double>());
}

TEST(XSection, StaticFieldRejected)
{
    auto j = minimal();
    j["field"] = {{"type", "static_uniform"}, {"E_V_m", {0, 0, 1}}};
    ASSERT_EQ(config_error(j), "");
    EXPECT_THROW(xsection_json(parse_config(j)), ConfigError);
}

// ---------------------------------------------------------------- mc-check

TEST(McCheck, WithinThreeSigma)
{
    const json j = json::parse(cmd_mc_check(parse_config(load("mc_check.json"))).text);
    EXPECT_TRUE(j.at("within_3_sigma").get<bool>());
    EXPECT_EQ(j.at("samples"), 1000000);
}

// ---------------------------------------------------------------- binary

TEST(Binary, InvalidGuideModeExitsThree)
{
    const auto r = run_cli("compute --config \"" + config_dir + "/invalid_guide_mode.json\"");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("m = l = 0"), std::string::npos) << r.err;
}

TEST(Binary, MissingConfigFileExitsNonZero)
{
    EXPECT_NE(run_cli("compute --config /nonexistent/acphase.json").code, 0);
}

TEST(Binary, ComputeIsDeterministicAndMatchesLibrary)
{
    const std::string args = "compute --config \"" + config_dir + "/diamond_dipole.json\" --seed 11";
    const auto a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, cmd_compute(parse_config(load("diamond_dipole.json")), 11).text);
}

TEST(Binary, ShowConstantsGoesToStderr)
{
    const auto r = run_cli("compute --config \"" + config_dir + "/zero_flux.json\" --show-constants");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("CODATA 2018"), std::string::npos);
    EXPECT_TRUE(json::parse(r.out).is_object());
}

TEST(Binary, SweepWritesCsvAndGnuplot)
{
    const fs::path out = fs::temp_directory_path() / ("acphase_sweep_" + std::to_string(::getpid()) + ".csv");
    const auto r = run_cli("sweep --config \"" + config_dir + "/sweep_dipole_asymmetric_v.json\" --out \"" +
                           out.string() + "\" --gnuplot");
    EXPECT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(out), gp = slurp(out.string() + ".gp");
    EXPECT_EQ(csv.rfind("parameter_value,", 0), 0u);
    EXPECT_NE(gp.find(out.string()), std::string::npos);
    fs::remove(out);
    fs::remove(out.string() + ".gp");
}

TEST(Binary, Table1UsesBundledDefaults)
{
    const auto r = run_cli("table1");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("trajectory,species,method", 0), 0u);
    EXPECT_EQ(r.out.find(",false\n"), std::string::npos);
}
