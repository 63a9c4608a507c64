#include "sdr/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace sdr {

ProbeSampler group_sampler() {
    return {[](const GroupSpec& spec, Rng& rng) { return sample_point(spec, rng); },
            [](const GroupPoint& p, Rng& rng) { return sample_tangent(p, rng); }};
}

double probe_max(const ProbeOptions& opts, std::string_view stream, const std::function<double(Rng&)>& residual) {
    const int count = std::max(opts.count, 0);
    std::vector<double> results(static_cast<std::size_t>(count), 0.0);
    auto run = [&](int begin, int step) {
        for (int i = begin; i < count; i += step) {
            Rng rng = make_stream(opts.seed, stream, static_cast<std::uint64_t>(i));
            const double r = residual(rng);
            results[static_cast<std::size_t>(i)] = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
        }
    };
    const int workers = std::clamp(opts.workers, 1, std::max(count, 1));
    if (workers == 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
        for (auto& t : pool) t.join();
    }
    double m = 0;
    for (double r : results) m = std::max(m, r);
    return m;
}

double form_max_abs(const DifferentialForm& w, const ProbeSampler& sampler, const ProbeOptions& opts,
                    std::string_view stream) {
    return probe_max(opts, stream, [&](Rng& rng) {
        const GroupPoint p = sampler.point(w.domain, rng);
        std::vector<TangentVector> v;
        for (int k = 0; k < w.degree; ++k) v.push_back(sampler.tangent(p, rng));
        return std::abs(w(p, v));
    });
}

SignEvidence probe_sign(std::string name, int frozen, double tolerance, const std::function<double(int)>& residual) {
    SignEvidence e;
    e.name = std::move(name);
    e.frozen = frozen;
    e.tolerance = tolerance;
    e.residual_plus = residual(+1);
    e.residual_minus = residual(-1);
    const bool plus = e.residual_plus < tolerance;
    const bool minus = e.residual_minus < tolerance;
    e.probed = plus == minus ? 0 : (plus ? +1 : -1);
    return e;
}

void attach_sign(ResidualReport& r, SignEvidence e) {
    if (e.undecided()) {
        if (!r.note.empty()) r.note += "; ";
        r.note += "sign " + e.name + " not decided here, both choices pass";
        return;
    }
    r.signs.push_back(std::move(e));
}

bool ResidualReport::signs_ok() const {
    return std::all_of(signs.begin(), signs.end(), [](const SignEvidence& s) { return s.ok(); });
}

}  // namespace sdr
