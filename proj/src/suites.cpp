#include "sdr/cli.hpp"

#include "sdr/extension.hpp"

#include <algorithm>
#include <chrono>

namespace sdr {

bool SuiteResult::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ResidualReport& r) { return r.ok(); });
}

bool VerificationReport::pass() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass(); });
}

bool VerificationReport::sign_failure() const {
    for (const auto& s : suites)
        for (const auto& r : s.rows)
            for (const auto& e : r.signs)
                if (!r.informational && e.contradicts()) return true;
    return false;
}

int VerificationReport::exit_status() const {
    if (sign_failure()) return 3;
    return pass() ? 0 : 1;
}

namespace {

void append(std::vector<ResidualReport>& out, std::vector<ResidualReport> rows, const std::string& label = {}) {
    for (auto& r : rows) {
        if (!label.empty() && r.identity.find("(" + label) == std::string::npos) r.identity += " (" + label + ")";
        out.push_back(std::move(r));
    }
}

struct Models {
    CentralExtensionModel flat;
    CentralExtensionModel twisted;
};

Models models(const SuiteConfig& cfg) {
    return {build_u2_over_pu2(true, std::nullopt, cfg.seed), build_u2_over_pu2(false, std::nullopt, cfg.seed)};
}

}  // namespace

std::vector<ResidualReport> run_named_suite(const std::string& name, const SuiteConfig& cfg) {
    const CheckSettings s = cfg.check_settings();
    std::vector<ResidualReport> out;
    if (name == "su2-cocycle") {
        append(out, second_chern_check(ChernVariant::SU, s));
    } else if (name == "u2-cocycle") {
        append(out, second_chern_check(ChernVariant::U, s));
    } else if (name == "extension") {
        const Models m = models(cfg);
        for (const auto* ext : {&m.flat, &m.twisted}) {
            const std::string label = ext->flat() ? "flat" : "twisted";
            append(out, model_invariants(*ext, s), label);
            append(out, dd_cocycle_check(*ext, s), label);
            append(out, lift_independence_check(*ext, s), label);
            append(out, {delta_section_check(*ext, s)}, label);
            append(out, twist_section_check(*ext, constant_section_twist(), s), label + ", constant phi");
            append(out, twist_section_check(*ext, conjugation_phase_twist(), s), label + ", conjugation phase phi");
        }
        append(out, {connection_independence_check(m.flat, m.twisted, s)});
    } else if (name == "behrend-xu") {
        const Models m = models(cfg);
        append(out, behrend_xu_check(m.flat, s), "flat");
        append(out, behrend_xu_check(m.twisted, s), "twisted");
    } else if (name == "transgression") {
        append(out, loop_nerve_cocycle_check(s, cfg.loop_settings()));
        append(out, transgression_quadrature_check(s, cfg.loop_settings()));
    } else if (name == "triple-complex") {
        const NerveContext ctx{FactorSpec{GroupKind::PU2}, CircleAction::adjoint()};
        append(out, simplicial_identities_check(ctx, 3, s));
        append(out, differential_squares_check(ctx, s));
        const Models m = models(cfg);
        for (const auto* ext : {&m.flat, &m.twisted}) {
            const EquivariantExtensionModel eq{*ext};
            const std::string label = ext->flat() ? "flat" : "twisted";
            append(out, tau_conditions(eq, s), label);
            append(out, triple_cocycle_check(eq, s), label);
        }
    } else if (name == "integrality") {
        append(out, integrality_check(s, cfg.integrality_settings()));
    } else {
        throw ConfigError("unknown suite '" + name + "'");
    }
    return out;
}

VerificationReport run_suite(const SuiteConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    VerificationReport r;
    r.config = cfg;
    const std::vector<std::string>& names = cfg.suites.empty() ? suite_names() : cfg.suites;
    for (const auto& n : names) r.suites.push_back({n, run_named_suite(n, cfg)});
    if (cfg.timing) r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace sdr
