#include "sdr/cli.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace sdr {

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"su2-cocycle", "u2-cocycle",     "extension",  "behrend-xu",
                                                "transgression", "triple-complex", "integrality"};
    return names;
}

void SuiteConfig::validate() const {
    if (samples < 1) throw ConfigError("samples must be at least 1");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    for (double t : {fd_step, tol_exact, tol_algebraic, tol_lift, tol_fd, tol_loop, tol_quad, tol_charts, tol_homotopy,
                     tol_doubling})
        if (!(t > 0)) throw ConfigError("fd_step and tolerances must be positive");
    if (loop_samples < 2) throw ConfigError("loop samples must be at least 2");
    if (band_limit < 0 || 2 * band_limit >= loop_samples) throw ConfigError("band_limit must be below loop_samples / 2");
    for (int n : su2_grid)
        if (n < 4) throw ConfigError("su2_grid sizes must be at least 4");
    if (cylinder_nodes < 4 || circle_nodes < 4) throw ConfigError("cylinder grid sizes must be at least 4");
    for (const auto& s : suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw ConfigError("unknown suite '" + s + "'");
}

CheckSettings SuiteConfig::check_settings() const {
    CheckSettings s;
    s.probes = {seed, samples, workers};
    s.derivative = {fd_step, richardson};
    s.tol_exact = tol_exact;
    s.tol_algebraic = tol_algebraic;
    s.tol_lift = tol_lift;
    s.tol_fd = tol_fd;
    return s;
}

LoopCheckSettings SuiteConfig::loop_settings() const { return {loop_samples, band_limit, tol_loop}; }

IntegralitySettings SuiteConfig::integrality_settings() const {
    IntegralitySettings q;
    q.su2.nodes = su2_grid;
    q.cylinder = {cylinder_nodes, circle_nodes};
    q.quad = {tol_quad, workers};
    q.tol_integer = tol_quad;
    q.tol_charts = tol_charts;
    q.tol_homotopy = tol_homotopy;
    q.tol_doubling = tol_doubling;
    return q;
}

namespace {

std::vector<std::string> words(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream is(t);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& raw) {
    std::istringstream is(raw);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError("bad value for " + key + ": '" + raw + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError("bad boolean for " + key + ": '" + raw + "'");
}

}  // namespace

void load_config_file(const std::string& path, SuiteConfig& cfg) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    auto tol = [&](double& field) { return [&field](const std::string& k, const std::string& v) { field = parse_value<double>(k, v); }; };
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"run.seed", [&](auto& k, auto& v) { cfg.seed = parse_value<std::uint64_t>(k, v); }},
        {"run.samples", [&](auto& k, auto& v) { cfg.samples = parse_value<int>(k, v); }},
        {"run.workers", [&](auto& k, auto& v) { cfg.workers = parse_value<int>(k, v); }},
        {"run.suites", [&](auto&, auto& v) { cfg.suites = words(v); }},
        {"derivative.fd_step", [&](auto& k, auto& v) { cfg.fd_step = parse_value<double>(k, v); }},
        {"derivative.richardson", [&](auto& k, auto& v) { cfg.richardson = parse_bool(k, v); }},
        {"tolerances.exact", tol(cfg.tol_exact)},
        {"tolerances.algebraic", tol(cfg.tol_algebraic)},
        {"tolerances.lift", tol(cfg.tol_lift)},
        {"tolerances.fd", tol(cfg.tol_fd)},
        {"tolerances.loop", tol(cfg.tol_loop)},
        {"tolerances.quad", tol(cfg.tol_quad)},
        {"tolerances.charts", tol(cfg.tol_charts)},
        {"tolerances.homotopy", tol(cfg.tol_homotopy)},
        {"tolerances.doubling", tol(cfg.tol_doubling)},
        {"loop.samples", [&](auto& k, auto& v) { cfg.loop_samples = parse_value<int>(k, v); }},
        {"loop.band_limit", [&](auto& k, auto& v) { cfg.band_limit = parse_value<int>(k, v); }},
        {"quadrature.su2_grid",
         [&](auto& k, auto& v) {
             const auto w = words(v);
             if (w.size() != 3) throw ConfigError(k + " takes three node counts");
             for (int i = 0; i < 3; ++i) cfg.su2_grid[i] = parse_value<int>(k, w[i]);
         }},
        {"quadrature.cylinder_nodes", [&](auto& k, auto& v) { cfg.cylinder_nodes = parse_value<int>(k, v); }},
        {"quadrature.circle_nodes", [&](auto& k, auto& v) { cfg.circle_nodes = parse_value<int>(k, v); }},
        {"report.format",
         [&](auto& k, auto& v) {
             if (v == "json") cfg.format = ReportFormat::Json;
             else if (v == "md" || v == "markdown") cfg.format = ReportFormat::Markdown;
             else throw ConfigError("bad value for " + k + ": '" + v + "'");
         }},
        {"report.out", [&](auto&, auto& v) { cfg.out = v; }},
        {"report.timing", [&](auto& k, auto& v) { cfg.timing = parse_bool(k, v); }},
    };
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            auto it = setters.find(full);
            if (it == setters.end()) throw ConfigError("unknown config key '" + full + "'");
            it->second(full, value.get_value<std::string>());
        }
    }
}

}  // namespace sdr
