#include "sdr/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace sdr {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Residual verification of the nerve, extension, loop and quadrature identities", "verify"};
    std::vector<std::string> suites;
    std::uint64_t seed = 0;
    int samples = 0, workers = 0;
    double fd_step = 0, tol_fd = 0, tol_algebraic = 0;
    std::string report, out_path, config_path;
    bool no_richardson = false, timing = false, probe_signs = false, list = false;

    auto* o_suite = app.add_option("--suite", suites, "suite to run (repeatable); default all");
    auto* o_seed = app.add_option("--seed", seed, "probe seed");
    auto* o_samples = app.add_option("--samples", samples, "probes per identity");
    auto* o_fd = app.add_option("--fd-step", fd_step, "finite-difference step");
    auto* o_report = app.add_option("--report", report, "report format")->check(CLI::IsMember({"json", "md", "markdown"}));
    auto* o_out = app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--config", config_path, "sectioned key = value config file; flags win");
    auto* o_workers = app.add_option("--workers", workers, "probe threads");
    auto* o_tol_fd = app.add_option("--tol-fd", tol_fd, "tolerance for finite-difference identities");
    auto* o_tol_alg = app.add_option("--tol-algebraic", tol_algebraic, "tolerance for algebraic identities");
    auto* o_plain = app.add_flag("--no-richardson", no_richardson, "plain central differences at the first level");
    auto* o_timing = app.add_flag("--timing", timing, "include wall time (reports then differ between runs)");
    app.add_flag("--probe-signs", probe_signs, "print the frozen sign table with probe evidence");
    app.add_flag("--list-suites", list, "print suite names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "verify: " << e.what() << "\n";
        return 2;
    }
    if (list) {
        for (const auto& n : suite_names()) out << n << "\n";
        return 0;
    }

    SuiteConfig cfg;
    try {
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (o_suite->count()) cfg.suites = suites;
        if (o_seed->count()) cfg.seed = seed;
        if (o_samples->count()) cfg.samples = samples;
        if (o_fd->count()) cfg.fd_step = fd_step;
        if (o_workers->count()) cfg.workers = workers;
        if (o_tol_fd->count()) cfg.tol_fd = tol_fd;
        if (o_tol_alg->count()) cfg.tol_algebraic = tol_algebraic;
        if (o_plain->count()) cfg.richardson = false;
        if (o_timing->count()) cfg.timing = true;
        if (o_report->count()) cfg.format = report == "json" ? ReportFormat::Json : ReportFormat::Markdown;
        if (o_out->count()) cfg.out = out_path;
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "verify: config error: " << e.what() << "\n";
        return 2;
    }

    const VerificationReport r = run_suite(cfg);
    if (probe_signs) {
        out << sign_table(r);
        return r.exit_status();
    }
    const std::string text = cfg.format == ReportFormat::Json ? to_json(r) : to_markdown(r);
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f || !(f << text)) {
            err << "verify: cannot write " << cfg.out << "\n";
            return 2;
        }
    }
    for (const auto& s : r.suites)
        for (const auto& row : s.rows)
            if (!row.ok()) err << "FAIL [" << s.name << "] " << row.identity << ": residual " << row.max_residual << "\n";
    return r.exit_status();
}

}  // namespace sdr
