// Prints one PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include "sdr/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

using namespace sdr;

namespace {

SuiteConfig pinned() {
    SuiteConfig c;
    c.seed = 1;
    c.samples = 200;
    c.workers = 1;
    c.fd_step = 1e-4;
    c.tol_exact = 1e-12;
    c.tol_algebraic = 1e-10;
    c.tol_lift = 1e-9;
    c.tol_fd = 1e-6;
    c.tol_loop = 1e-5;
    c.tol_quad = 1e-3;
    c.tol_charts = 1e-4;
    c.tol_homotopy = 1e-2;
    c.loop_samples = 64;
    c.band_limit = 4;
    c.su2_grid = {48, 48, 48};
    return c;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
    void below(double value, double bound, const std::string& what) {
        require(value < bound, what + " " + sci(value) + " >= " + sci(bound));
        if (value < bound) detail << what << " " << sci(value) << " < " << sci(bound) << "; ";
    }
};

const ResidualReport* find(const std::vector<ResidualReport>& rows, const std::string& prefix) {
    for (const auto& r : rows)
        if (r.identity.rfind(prefix, 0) == 0) return &r;
    return nullptr;
}

double worst(const std::vector<ResidualReport>& rows, const std::string& prefix) {
    double w = -1;
    for (const auto& r : rows)
        if (r.identity.rfind(prefix, 0) == 0) w = std::max(w, r.max_residual);
    return w;
}

std::vector<ResidualReport> all_rows;

std::vector<ResidualReport> suite(const std::string& name) {
    auto rows = run_named_suite(name, pinned());
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
    return rows;
}

void chern(Verdict& v, const std::string& name) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = suite(name);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(rows.size() == 3, "three rows");
    if (rows.size() != 3) return;
    for (const auto& r : rows) v.require(r.probes >= 200, "at least 200 probes");
    v.below(rows[0].max_residual, 1e-6, "dC13");
    v.below(rows[1].max_residual, 1e-6, "d'C13 + d''C22");
    v.require(rows[1].signs_ok() && !rows[1].signs.empty(), "cross sign confirmed by probe");
    v.require(rows[1].control_ok(), "dropped-C22 control fails");
    v.below(rows[2].max_residual, 1e-10, "d'C22");
    v.below(seconds, 60.0, "runtime s");
}

Verdict criterion1() {
    Verdict v;
    chern(v, "su2-cocycle");
    return v;
}

Verdict criterion2() {
    Verdict v;
    chern(v, "u2-cocycle");
    return v;
}

const DifferentialForm& nu() {
    static const DifferentialForm w = trace_cubed_form(GroupSpec{GroupKind::SU2});
    return w;
}

Verdict criterion3() {
    Verdict v;
    const ChartGrid euler;
    v.require(euler.nodes[0] * euler.nodes[1] * euler.nodes[2] >= 48 * 48 * 48, "at least 48^3 nodes");
    const Complex e = integrate_top_form_su2(nu(), euler).value;
    v.below(std::abs(std::abs(e) - 1.0), 1e-3, "||int C13| - 1|");
    ChartGrid hopf;
    hopf.kind = ChartKind::Hopf;
    v.below(std::abs(integrate_top_form_su2(nu(), hopf).value - e), 1e-4, "Euler vs Hopf");
    Rng rng = make_stream(1, "acceptance-exact", 0);
    const DifferentialForm db = exterior_derivative(random_form(GroupSpec{GroupKind::SU2}, 2, rng), {1e-4, true});
    v.below(std::abs(integrate_top_form_su2(db, euler).value), 1e-3, "|int d beta|");
    v.detail << "int C13 = " << e.real() << "; ";
    return v;
}

Verdict criterion4() {
    Verdict v;
    Rng rng = make_stream(1, "acceptance-homotopy", 0);
    for (int trial = 0; trial < 3; ++trial) {
        const ExponentialHomotopy h = ExponentialHomotopy::random(rng, 3);
        const Sheet s0 = h.path(0), s1 = h.path(1), f = h.sheet();
        const IntegralityResult bump =
            homotopy_integrality_check(s0, s1, f, f * random_bump_sheet(rng, 0.6), std::nullopt);
        const IntegralityResult wrap = homotopy_integrality_check(s0, s1, f, f, wrap_sheet());
        v.require(bump.integer == 0, "bump integer 0");
        v.require(std::abs(wrap.integer) == 1, "wrap integer +-1");
        if (trial == 0) {
            v.below(bump.distance, 1e-2, "bump distance");
            v.below(wrap.distance, 1e-2, "wrap distance");
            v.detail << "wrap integer " << wrap.integer << "; ";
        } else {
            v.require(bump.distance < 1e-2 && wrap.distance < 1e-2, "distance on trial " + std::to_string(trial));
        }
    }
    return v;
}

Verdict criterion5() {
    Verdict v;
    const auto rows = suite("extension");
    for (const auto& r : rows) v.require(r.ok(), r.identity);
    v.below(std::max(worst(rows, "curvature is closed"), worst(rows, "curvature against section")), 1e-6,
            "FD identities");
    v.below(worst(rows, "section pullback is a simplicial cocycle"), 1e-10, "algebraic identity");
    v.below(worst(rows, "alternating tensor of the natural section"), 1e-12, "|delta s_nt - 1|");
    double lift = 0;
    for (const auto& r : rows)
        if (r.identity.find("lifts") != std::string::npos || r.identity.find("shifts") != std::string::npos)
            lift = std::max(lift, r.max_residual);
    v.below(lift, 1e-9, "lift independence");
    v.below(worst(rows, "section twist"), 1e-6, "section twist");
    const ResidualReport* cob = find(rows, "connection change is a total coboundary");
    v.require(cob != nullptr, "coboundary row");
    if (cob) {
        v.below(cob->max_residual, 1e-6, "coboundary");
        v.require(cob->control_residual && *cob->control_residual > 1e-6, "negative control fails");
        if (cob->control_residual) v.detail << "control " << sci(*cob->control_residual) << "; ";
    }
    return v;
}

Verdict criterion6() {
    Verdict v;
    const auto rows = suite("behrend-xu");
    for (const auto& r : rows) v.require(r.ok() && r.probes >= 200, r.identity);
    v.below(worst(rows, "direct evaluation"), 1e-9, "direct vs lifted");
    v.below(worst(rows, "horizontality"), 1e-9, "vertical insertions");
    return v;
}

Verdict criterion7() {
    Verdict v;
    const auto rows = suite("transgression");
    const ResidualReport* i = find(rows, "transgressed C13 is closed");
    const ResidualReport* ii = find(rows, "transgressed cocycle across levels");
    const ResidualReport* iii = find(rows, "transgressed C22 is a simplicial cocycle");
    v.require(i && ii && iii, "rows (i)-(iii)");
    if (!(i && ii && iii)) return v;
    v.below(i->max_residual, 1e-5, "(i)");
    v.below(ii->max_residual, 1e-5, "(ii)");
    v.require(ii->signs_ok(), "(ii) sign confirmed");
    v.require(ii->control_residual && *ii->control_residual > 1e-5, "negative control fails");
    v.below(iii->max_residual, 1e-10, "(iii)");
    for (const auto& r : rows) v.require(r.ok(), r.identity);
    return v;
}

Verdict criterion8() {
    Verdict v;
    const auto rows = suite("triple-complex");
    double simplicial = 0;
    for (const auto& r : rows)
        if (r.identity.find("simplicial identities") != std::string::npos || r.identity.find("faces commute") != std::string::npos)
            simplicial = std::max(simplicial, r.max_residual);
    v.below(simplicial, 1e-12, "face identities p,q <= 3");
    for (const auto& r : rows)
        if (r.identity.rfind("D squared", 0) == 0) v.require(r.ok(), r.identity);
    v.below(worst(rows, "D squared"), 1e-6, "D o D");
    v.below(std::max(worst(rows, "tau condition (i)"), worst(rows, "tau condition (iii)")), 1e-6, "tau (i), (iii)");
    const ResidualReport* ii = find(rows, "tau condition (ii) (twisted)");
    v.require(ii != nullptr, "tau (ii) reported");
    if (ii) v.detail << "tau (ii) " << sci(ii->max_residual) << (ii->ok() ? " with the probed sign" : " FAILS") << "; ";
    for (const auto& r : rows)
        if (r.informational && !r.pass()) v.detail << "finding: " << r.identity << " residual " << sci(r.max_residual) << "; ";
    for (const auto& r : rows)
        if (r.identity.rfind("triple cocycle", 0) == 0) v.require(r.ok(), r.identity);
    return v;
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
    args.insert(args.begin(), "verify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int status = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    return status;
}

Verdict criterion9() {
    Verdict v;
    std::string a, b, c, d;
    const std::vector<std::string> run{"--suite", "su2-cocycle", "--suite", "transgression", "--samples", "50"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = run;
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    v.require(cli(with({}), &a) == 0 && cli(with({}), &b) == 0, "passing run exits 0");
    v.require(!a.empty() && a == b, "byte-identical JSON");
    cli(with({"--report", "md"}), &c);
    cli(with({"--report", "md"}), &d);
    v.require(!c.empty() && c == d, "byte-identical markdown");
    v.require(cli(with({"--tol-fd", "1e-15"})) == 1, "tightened tolerance exits 1");
    v.require(cli({"--suite", "no-such-suite"}) == 2, "config error exits 2");
    VerificationReport contradicted;
    ResidualReport row;
    SignEvidence e;
    e.name = "chern_cross";
    e.frozen = 1;
    e.probed = -1;
    row.signs.push_back(e);
    contradicted.suites.push_back({"su2-cocycle", {row}});
    v.require(contradicted.exit_status() == 3, "contradicted sign exits 3");
    std::size_t missing = 0;
    for (const auto& r : all_rows) missing += r.anchor.empty();
    v.require(missing == 0, "every row carries an anchor");
    v.detail << all_rows.size() << " rows anchored; exit codes 0/1/2/3 honored; ";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
        {"SU(2) second Chern cocycle", criterion1},
        {"U(2) second Chern cocycle with the trace-product correction", criterion2},
        {"integrality of nu over SU(2)", criterion3},
        {"homotopy well-definedness", criterion4},
        {"extension U(2) -> PU(2), flat and twisted", criterion5},
        {"Behrend-Xu comparison", criterion6},
        {"transgressed loop cocycle", criterion7},
        {"triple complex", criterion8},
        {"determinism and reporting", criterion9},
    };
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& ex) {
            v.pass = false;
            v.detail << "exception: " << ex.what();
        }
        all = all && v.pass;
        std::cout << "criterion " << k + 1 << ": " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[k].first << ": "
                  << v.detail.str() << std::endl;
    }
    return all ? 0 : 1;
}
