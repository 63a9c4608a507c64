#pragma once

// Batch driver: configuration, suite orchestration, reports and exit codes.
//
// Exit status: 0 all rows pass, 1 an identity fails, 2 the configuration is
// invalid, 3 a sign probe passes only with the opposite of its frozen constant.

#include "sdr/quadrature.hpp"

#include <iosfwd>

namespace sdr {

enum class ReportFormat { Json, Markdown };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SuiteConfig {
    std::uint64_t seed = 1;
    int samples = 200;
    int workers = 1;
    double fd_step = 1e-4;
    bool richardson = true;

    double tol_exact = 1e-12;
    double tol_algebraic = 1e-10;
    double tol_lift = 1e-9;
    double tol_fd = 1e-6;
    double tol_loop = 1e-5;
    double tol_quad = 1e-3;
    double tol_charts = 1e-4;
    double tol_homotopy = 1e-2;
    double tol_doubling = 1e-8;

    int loop_samples = 64;
    int band_limit = 4;
    std::array<int, 3> su2_grid{48, 48, 48};
    int cylinder_nodes = 32;
    int circle_nodes = 64;

    /// Empty selects every suite.
    std::vector<std::string> suites;
    ReportFormat format = ReportFormat::Json;
    std::string out;
    /// Adds wall time to the report, which then differs between runs.
    bool timing = false;

    /// Throws ConfigError.
    void validate() const;
    CheckSettings check_settings() const;
    LoopCheckSettings loop_settings() const;
    IntegralitySettings integrality_settings() const;
};

const std::vector<std::string>& suite_names();

/// Sectioned key = value file ([run], [derivative], [tolerances], [loop],
/// [quadrature], [report]); unknown keys are errors. Throws ConfigError.
void load_config_file(const std::string& path, SuiteConfig& cfg);

struct SuiteResult {
    std::string name;
    std::vector<ResidualReport> rows;

    bool pass() const;
};

struct VerificationReport {
    SuiteConfig config;
    std::vector<SuiteResult> suites;
    std::optional<double> wall_time;

    bool pass() const;
    bool sign_failure() const;
    int exit_status() const;
};

std::vector<ResidualReport> run_named_suite(const std::string& name, const SuiteConfig& cfg);
VerificationReport run_suite(const SuiteConfig& cfg);

/// Schema "1".
std::string to_json(const VerificationReport& r);
std::string to_markdown(const VerificationReport& r);
/// Every frozen sign constant with the evidence gathered in this run.
std::string sign_table(const VerificationReport& r);

/// verify [--suite NAME ...] [--seed K] [--samples N] [--fd-step H] [--report json|md]
///        [--out PATH] [--config FILE] ...
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdr
