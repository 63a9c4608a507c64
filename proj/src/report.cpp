#include "sdr/cli.hpp"

#include "sdr/signs.hpp"

#include <json.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <sstream>

#ifndef SDR_VERSION
#define SDR_VERSION "0.0.0"
#endif

namespace sdr {

namespace {

struct FrozenSign {
    const char* name;
    int value;
    const char* meaning;
};

const std::vector<FrozenSign>& frozen_signs() {
    static const std::vector<FrozenSign> table{
        {"chern_cross", signs::kChernCross, "d'C13 + s d''C22 = 0 on the nerve of SU(2)"},
        {"chern_cross_u", signs::kChernCrossU, "d'C13 + s d''C22 = 0 on the nerve of U(2)"},
        {"dd_section", signs::kDDSection, "coefficient of (-1/2 pi i) s_nt*(delta theta) in the DD cocycle"},
        {"fiber_integration", signs::kFiberIntegration, "d(int_{S1} ev* w) = s int_{S1} ev* dw"},
        {"loop_cross", signs::kLoopCross, "d'T13 + s dT22 = 0 for the transgressed forms"},
        {"twist_coboundary", signs::kTwistCoboundary, "cocycle change under s = s_nt phi"},
        {"connection_coboundary", signs::kConnectionCoboundary, "cocycle change under theta + pi* alpha"},
        {"tau_orientation", signs::kTauOrientation, "conjugation direction inside tau"},
        {"tau_curvature", signs::kTauCurvature, "d tau = s (-e0 + e1)* c1"},
        {"tau_section", signs::kTauSection, "(e0 - e1 + e2)* tau = s (e0 - e1)* (-1/2 pi i) s_nt*(delta theta)"},
        {"tau_layer", signs::kTauLayer, "coefficient of tau in the triple-complex cocycle"},
    };
    return table;
}

struct Gathered {
    std::optional<SignEvidence> evidence;
    int rows = 0;
    bool all_ok = true;
    bool contradicted = false;
    int undecided = 0;
};

std::map<std::string, Gathered> gather(const VerificationReport& r) {
    std::map<std::string, Gathered> g;
    for (const auto& s : r.suites)
        for (const auto& row : s.rows) {
            for (const auto& e : row.signs) {
                Gathered& x = g[e.name];
                if (!x.evidence) x.evidence = e;
                ++x.rows;
                x.all_ok = x.all_ok && e.ok();
                x.contradicted = x.contradicted || e.contradicts();
            }
            for (const auto& f : frozen_signs())
                if (row.note.find(std::string("sign ") + f.name + " not decided") != std::string::npos) ++g[f.name].undecided;
        }
    return g;
}

std::string status_of(const Gathered& g) {
    if (g.rows == 0) return g.undecided ? "undecided in this run" : "not probed in this run";
    if (g.contradicted) return "MISMATCH";
    return g.all_ok ? "confirmed" : "neither sign passes";
}

nlohmann::json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string sci(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

nlohmann::json evidence_json(const SignEvidence& e) {
    return {{"name", e.name},
            {"frozen", e.frozen},
            {"probed", e.probed},
            {"residual_plus", number(e.residual_plus)},
            {"residual_minus", number(e.residual_minus)},
            {"tolerance", e.tolerance},
            {"ok", e.ok()}};
}

nlohmann::json config_json(const SuiteConfig& c) {
    return {{"seed", c.seed},
            {"samples", c.samples},
            {"workers", c.workers},
            {"fd_step", c.fd_step},
            {"richardson", c.richardson},
            {"tolerances",
             {{"exact", c.tol_exact},
              {"algebraic", c.tol_algebraic},
              {"lift", c.tol_lift},
              {"fd", c.tol_fd},
              {"loop", c.tol_loop},
              {"quad", c.tol_quad},
              {"charts", c.tol_charts},
              {"homotopy", c.tol_homotopy},
              {"doubling", c.tol_doubling}}},
            {"loop_samples", c.loop_samples},
            {"band_limit", c.band_limit},
            {"su2_grid", c.su2_grid},
            {"cylinder_grid", {c.cylinder_nodes, c.cylinder_nodes, c.circle_nodes}},
            {"suites", c.suites.empty() ? suite_names() : c.suites}};
}

std::string versions_line() {
    std::ostringstream os;
    os << "sdr " << SDR_VERSION << ", Eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
       << EIGEN_MINOR_VERSION << ", compiler " << __VERSION__;
    return os.str();
}

}  // namespace

std::string to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["schema"] = "1";
    j["seed"] = r.config.seed;
    j["versions"] = {{"sdr", SDR_VERSION},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"compiler", __VERSION__}};
    if (r.wall_time) j["wall_time_seconds"] = *r.wall_time;
    j["config"] = config_json(r.config);
    j["pass"] = r.pass();
    j["exit_status"] = r.exit_status();

    nlohmann::json signs = nlohmann::json::array();
    const auto gathered = gather(r);
    for (const auto& f : frozen_signs()) {
        nlohmann::json e{{"name", f.name}, {"frozen", f.value}, {"meaning", f.meaning}};
        auto it = gathered.find(f.name);
        const Gathered g = it == gathered.end() ? Gathered{} : it->second;
        e["status"] = status_of(g);
        e["probing_rows"] = g.rows;
        e["evidence"] = g.evidence ? evidence_json(*g.evidence) : nlohmann::json(nullptr);
        signs.push_back(e);
    }
    j["frozen_signs"] = signs;

    nlohmann::json suites = nlohmann::json::array();
    for (const auto& s : r.suites) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : s.rows) {
            nlohmann::json x{{"identity", row.identity},
                             {"anchor", row.anchor},
                             {"probes", row.probes},
                             {"max_residual", number(row.max_residual)},
                             {"tolerance", row.tolerance},
                             {"pass", row.pass()},
                             {"informational", row.informational}};
            nlohmann::json used = nlohmann::json::array();
            for (const auto& e : row.signs) used.push_back(evidence_json(e));
            x["signs"] = used;
            if (row.control_residual) {
                x["control_residual"] = number(*row.control_residual);
                x["control_ok"] = row.control_ok();
            }
            if (!row.note.empty()) x["note"] = row.note;
            rows.push_back(x);
        }
        suites.push_back({{"name", s.name}, {"pass", s.pass()}, {"rows", rows}});
    }
    j["suites"] = suites;
    return j.dump(2) + "\n";
}

std::string sign_table(const VerificationReport& r) {
    std::ostringstream os;
    os << "| sign | frozen | probed | residual (+1) | residual (-1) | tolerance | status | meaning |\n";
    os << "|---|---|---|---|---|---|---|---|\n";
    const auto gathered = gather(r);
    for (const auto& f : frozen_signs()) {
        auto it = gathered.find(f.name);
        const Gathered g = it == gathered.end() ? Gathered{} : it->second;
        os << "| " << f.name << " | " << (f.value > 0 ? "+1" : "-1") << " | ";
        if (g.evidence) {
            const SignEvidence& e = *g.evidence;
            os << (e.probed == 0 ? "none" : e.probed > 0 ? "+1" : "-1") << " | " << sci(e.residual_plus) << " | "
               << sci(e.residual_minus) << " | " << sci(e.tolerance);
        } else {
            os << "- | - | - | -";
        }
        os << " | " << status_of(g) << " | " << f.meaning << " |\n";
    }
    return os.str();
}

std::string to_markdown(const VerificationReport& r) {
    auto cell = [](std::string s) {
        std::string o;
        for (char c : s) o += c == '|' ? std::string("\\|") : std::string(1, c);
        return o;
    };
    std::ostringstream os;
    os << "# Verification report\n\n";
    os << "- schema: 1\n- seed: " << r.config.seed << "\n- versions: " << versions_line() << "\n";
    if (r.wall_time) os << "- wall time: " << *r.wall_time << " s\n";
    os << "- result: " << (r.pass() ? "PASS" : "FAIL") << ", exit status " << r.exit_status() << "\n\n";
    os << "## Configuration\n\n```json\n" << config_json(r.config).dump(2) << "\n```\n\n";
    os << "## Frozen signs\n\n" << sign_table(r) << "\n";
    for (const auto& s : r.suites) {
        os << "## " << s.name << " (" << (s.pass() ? "PASS" : "FAIL") << ")\n\n";
        os << "| identity | anchor | probes | max residual | tolerance | pass | control | signs | note |\n";
        os << "|---|---|---|---|---|---|---|---|---|\n";
        for (const auto& row : s.rows) {
            std::string signs;
            for (const auto& e : row.signs)
                signs += (signs.empty() ? "" : "; ") + e.name + " " + (e.frozen > 0 ? "+1" : "-1") +
                         (e.ok() ? " ok" : e.contradicts() ? " MISMATCH" : " unresolved");
            os << "| " << cell(row.identity) << " | " << cell(row.anchor) << " | " << row.probes << " | "
               << sci(row.max_residual) << " | " << sci(row.tolerance) << " | "
               << (row.pass() ? "yes" : row.informational ? "no (informational)" : "no") << " | "
               << (row.control_residual ? sci(*row.control_residual) + (row.control_ok() ? " ok" : " FAIL") : "-")
               << " | " << (signs.empty() ? "-" : signs) << " | " << cell(row.note) << " |\n";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace sdr
