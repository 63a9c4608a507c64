#include "doctest.h"

#include "sdr/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sdr;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run verify(std::vector<std::string> args) {
    args.insert(args.begin(), "verify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path.string();
}

}  // namespace

TEST_CASE("config file sections and validation") {
    SuiteConfig cfg;
    load_config_file(temp_file("sdr_ok.ini", "[run]\nseed = 7\nsamples = 12\nsuites = su2-cocycle, integrality\n"
                                             "[derivative]\nrichardson = false\n[tolerances]\nfd = 2e-6\n"
                                             "[quadrature]\nsu2_grid = 24 16 32\n[report]\nformat = md\n"),
                     cfg);
    CHECK(cfg.seed == 7);
    CHECK(cfg.samples == 12);
    CHECK(cfg.suites == std::vector<std::string>{"su2-cocycle", "integrality"});
    CHECK_FALSE(cfg.richardson);
    CHECK(cfg.tol_fd == 2e-6);
    CHECK(cfg.su2_grid == std::array<int, 3>{24, 16, 32});
    CHECK(cfg.format == ReportFormat::Markdown);
    CHECK_NOTHROW(cfg.validate());

    SuiteConfig bad;
    CHECK_THROWS_AS(load_config_file(temp_file("sdr_bad1.ini", "[run]\nunknown = 1\n"), bad), ConfigError);
    CHECK_THROWS_AS(load_config_file(temp_file("sdr_bad2.ini", "[run]\nseed = x\n"), bad), ConfigError);
    CHECK_THROWS_AS(load_config_file(temp_file("sdr_bad3.ini", "[run\nseed = 1\n"), bad), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/sdr.ini", bad), ConfigError);
    SuiteConfig neg;
    neg.tol_fd = -1;
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    neg = {};
    neg.suites = {"nope"};
    CHECK_THROWS_AS(neg.validate(), ConfigError);
}

TEST_CASE("default su2-cocycle run passes and the report is deterministic") {
    const Run a = verify({"--suite", "su2-cocycle"});
    const Run b = verify({"--suite", "su2-cocycle"});
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["schema"] == "1");
    CHECK(j["seed"] == 1);
    CHECK(j["pass"] == true);
    CHECK(j.contains("versions"));
    CHECK_FALSE(j.contains("wall_time_seconds"));
    CHECK(j["frozen_signs"].size() == 11);
    for (const auto& row : j["suites"][0]["rows"]) {
        CHECK_FALSE(row["anchor"].get<std::string>().empty());
        CHECK(row["pass"] == (row["max_residual"].get<double>() < row["tolerance"].get<double>()));
        CHECK(row["probes"] == 200);
    }
    CHECK(verify({"--suite", "su2-cocycle", "--timing"}).out.find("wall_time_seconds") != std::string::npos);
}

TEST_CASE("tightened tolerance fails with status 1 and reports residuals") {
    const Run r = verify({"--suite", "su2-cocycle", "--tol-fd", "1e-15", "--samples", "20"});
    CHECK(r.status == 1);
    CHECK(r.err.find("FAIL") != std::string::npos);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"] == false);
    CHECK(j["suites"][0]["rows"][0]["max_residual"].get<double>() > 0);
}

TEST_CASE("config errors give status 2 and flags win over the file") {
    CHECK(verify({"--suite", "nope"}).status == 2);
    CHECK(verify({"--samples", "0"}).status == 2);
    CHECK(verify({"--report", "xml"}).status == 2);
    CHECK(verify({"--config", temp_file("sdr_bad4.ini", "[run]\nbogus = 1\n")}).status == 2);
    const std::string cfg = temp_file("sdr_flags.ini", "[run]\nseed = 5\nsamples = 10\nsuites = u2-cocycle\n");
    const auto j = nlohmann::json::parse(verify({"--config", cfg, "--seed", "9"}).out);
    CHECK(j["seed"] == 9);
    CHECK(j["config"]["samples"] == 10);
    CHECK(j["suites"][0]["name"] == "u2-cocycle");
}

TEST_CASE("a contradicted sign probe gives status 3") {
    VerificationReport r;
    ResidualReport row;
    row.identity = "x";
    row.tolerance = 1;
    SignEvidence e;
    e.name = "chern_cross";
    e.frozen = +1;
    e.probed = -1;
    e.residual_plus = 2;
    e.residual_minus = 0;
    e.tolerance = 1;
    row.signs.push_back(e);
    r.suites.push_back({"su2-cocycle", {row}});
    CHECK(r.exit_status() == 3);
    CHECK(sign_table(r).find("MISMATCH") != std::string::npos);
    // neither sign passing is an identity failure, not a sign failure
    r.suites[0].rows[0].signs[0].probed = 0;
    r.suites[0].rows[0].max_residual = 2;
    CHECK(r.exit_status() == 1);
}

TEST_CASE("rows do not depend on the number of workers") {
    SuiteConfig one, four;
    one.samples = four.samples = 40;
    four.workers = 4;
    for (const auto& name : {"transgression", "triple-complex"}) {
        const auto a = run_named_suite(name, one), b = run_named_suite(name, four);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].max_residual == b[k].max_residual);
    }
}

TEST_CASE("markdown mirrors the json rows and the sign table is complete") {
    const Run md = verify({"--suite", "u2-cocycle", "--report", "md", "--samples", "20"});
    const Run js = verify({"--suite", "u2-cocycle", "--samples", "20"});
    CHECK(md.status == 0);
    for (const auto& row : nlohmann::json::parse(js.out)["suites"][0]["rows"])
        CHECK(md.out.find(row["identity"].get<std::string>()) != std::string::npos);
    const Run signs = verify({"--probe-signs", "--suite", "u2-cocycle", "--samples", "20"});
    for (const char* n : {"chern_cross", "chern_cross_u", "dd_section", "fiber_integration", "loop_cross",
                          "twist_coboundary", "connection_coboundary", "tau_orientation", "tau_curvature",
                          "tau_section", "tau_layer"})
        CHECK(signs.out.find(n) != std::string::npos);
    CHECK(signs.out.find("confirmed") != std::string::npos);
}

TEST_CASE("report goes to --out") {
    const auto path = (std::filesystem::temp_directory_path() / "sdr_report.json").string();
    std::remove(path.c_str());
    const Run r = verify({"--suite", "su2-cocycle", "--samples", "10", "--out", path});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    CHECK(nlohmann::json::parse(f)["schema"] == "1");
    CHECK(verify({"--suite", "su2-cocycle", "--samples", "10", "--out", "/nonexistent/dir/r.json"}).status == 2);
}
