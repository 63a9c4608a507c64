#include "sdr/loopspace.hpp"

#include "sdr/summation.hpp"

#include <cmath>
#include <stdexcept>

namespace sdr {

double TrigPolynomial::value(double t) const {
    double s = constant;
    for (std::size_t k = 0; k < cosines.size(); ++k) s += cosines[k] * std::cos(double(k + 1) * t);
    for (std::size_t k = 0; k < sines.size(); ++k) s += sines[k] * std::sin(double(k + 1) * t);
    return s;
}

double TrigPolynomial::derivative(double t) const {
    double s = 0;
    for (std::size_t k = 0; k < cosines.size(); ++k) s -= double(k + 1) * cosines[k] * std::sin(double(k + 1) * t);
    for (std::size_t k = 0; k < sines.size(); ++k) s += double(k + 1) * sines[k] * std::cos(double(k + 1) * t);
    return s;
}

TrigPolynomial TrigPolynomial::random(Rng& rng, int band, double scale) {
    TrigPolynomial p;
    p.constant = scale * rng.normal();
    for (int k = 1; k <= band; ++k) {
        p.cosines.push_back(scale / (1 + k) * rng.normal());
        p.sines.push_back(scale / (1 + k) * rng.normal());
    }
    return p;
}

Mat LoopPath::value(double t) const {
    Mat g = base;
    for (std::size_t k = 0; k < generators.size(); ++k) g = g * expm<double>(exponents[k].value(t) * generators[k]);
    return g;
}

Mat LoopPath::derivative(double t) const {
    // product rule over base * prod_k exp(f_k B_k), with (exp(f B))' = f' B exp(f B)
    const std::size_t m = generators.size();
    std::vector<Mat> e;
    for (std::size_t k = 0; k < m; ++k) e.push_back(expm<double>(exponents[k].value(t) * generators[k]));
    Mat sum = Mat::Zero(base.rows(), base.cols());
    for (std::size_t k = 0; k < m; ++k) {
        Mat term = base;
        for (std::size_t l = 0; l < m; ++l) term = term * (l == k ? Mat(exponents[k].derivative(t) * generators[k] * e[k]) : e[l]);
        sum += term;
    }
    return sum;
}

FactorValue LoopPath::sample(int n, double shift) const {
    FactorValue f;
    for (int j = 0; j < n; ++j) {
        const double t = shift + 2 * kPi * j / n;
        f.values.push_back(value(t));
        f.rates.push_back(derivative(t));
    }
    return f;
}

LoopPath LoopPath::constant(GroupKind kind, Mat g0) {
    LoopPath p;
    p.kind = kind;
    p.base = std::move(g0);
    return p;
}

LoopPath LoopPath::random(GroupKind kind, Rng& rng, int band, double scale) {
    LoopPath p = constant(kind, sample_factor(kind, rng));
    for (const Mat& b : algebra_basis(kind)) {
        p.generators.push_back(b);
        p.exponents.push_back(TrigPolynomial::random(rng, band, scale));
    }
    return p;
}

LoopPath LoopPath::one_parameter(GroupKind kind, Rng& rng, int band, double scale) {
    LoopPath p = constant(kind, sample_factor(kind, rng));
    p.generators.push_back(sample_algebra(kind, rng));
    p.exponents.push_back(TrigPolynomial::random(rng, band, scale));
    return p;
}

Mat LoopTangent::algebra(double t) const {
    Mat a = Mat::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) a += coefficients[k].value(t) * basis[k];
    return a;
}

Mat LoopTangent::algebra_rate(double t) const {
    Mat a = Mat::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t k = 0; k < basis.size(); ++k) a += coefficients[k].derivative(t) * basis[k];
    return a;
}

FactorValue LoopTangent::sample(const FactorValue& gamma, double shift) const {
    const int n = static_cast<int>(gamma.samples());
    FactorValue f;
    for (int j = 0; j < n; ++j) {
        const double t = shift + 2 * kPi * j / n;
        const Mat a = algebra(t);
        f.values.push_back(gamma.values[j] * a);
        f.rates.push_back(gamma.rates[j] * a + gamma.values[j] * algebra_rate(t));
    }
    return f;
}

LoopTangent LoopTangent::random(GroupKind kind, Rng& rng, int band, double scale) {
    LoopTangent u;
    u.kind = kind;
    u.basis = algebra_basis(kind);
    for (std::size_t k = 0; k < u.basis.size(); ++k) u.coefficients.push_back(TrigPolynomial::random(rng, band, scale));
    return u;
}

GroupSpec loop_spec(const GroupSpec& spec, int samples) {
    std::vector<FactorSpec> f;
    for (const auto& x : spec.factors) {
        if (x.is_loop()) throw std::invalid_argument("loop_spec: factor is already a loop");
        f.push_back(loop_of(x.kind, samples));
    }
    return GroupSpec(std::move(f));
}

DifferentialForm transgress(const DifferentialForm& w, int samples) {
    if (w.degree < 1) throw std::invalid_argument("transgress: needs a form of degree >= 1");
    if (samples < 2) throw std::invalid_argument("transgress: needs at least two samples");
    const GroupSpec pointwise = w.domain;
    const double weight = 2 * kPi / samples;
    return {loop_spec(w.domain, samples), w.degree - 1,
            [e = w.eval, pointwise, samples, weight](const GroupPoint& p, std::span<const TangentVector> v) {
                for (const auto& f : p.factors)
                    if (static_cast<int>(f.samples()) != samples || !f.has_rates())
                        throw std::invalid_argument("transgress: loop grid mismatch");
                for (const auto& x : v)
                    for (const auto& f : x.factors)
                        if (static_cast<int>(f.samples()) != samples)
                            throw std::invalid_argument("transgress: tangent grid mismatch");
                std::vector<Complex> terms(static_cast<std::size_t>(samples));
                std::vector<TangentVector> args(v.size() + 1);
                for (int j = 0; j < samples; ++j) {
                    GroupPoint q{pointwise, {}};
                    TangentVector fiber;
                    for (const auto& f : p.factors) {
                        q.factors.emplace_back(f.values[j]);
                        fiber.factors.emplace_back(f.rates[j]);
                    }
                    args[0] = std::move(fiber);
                    for (std::size_t k = 0; k < v.size(); ++k) {
                        args[k + 1].factors.clear();
                        for (const auto& f : v[k].factors) args[k + 1].factors.emplace_back(f.values[j]);
                    }
                    terms[static_cast<std::size_t>(j)] = weight * e(q, args);
                }
                return pairwise_sum<Complex>(terms);
            }};
}

ProbeSampler loop_sampler(int band) {
    return {[band](const GroupSpec& spec, Rng& rng) {
                GroupPoint p{spec, {}};
                for (const auto& f : spec.factors) {
                    if (f.is_loop())
                        p.factors.push_back(LoopPath::random(f.kind, rng, band).sample(f.samples));
                    else
                        p.factors.emplace_back(sample_factor(f.kind, rng));
                }
                return p;
            },
            [band](const GroupPoint& p, Rng& rng) {
                TangentVector v;
                for (std::size_t i = 0; i < p.size(); ++i) {
                    if (p.spec[i].is_loop())
                        v.factors.push_back(LoopTangent::random(p.spec[i].kind, rng, band).sample(p.factors[i]));
                    else
                        v.factors.emplace_back(Mat(p.mat(i) * sample_algebra(p.spec[i].kind, rng)));
                }
                return v;
            }};
}

SmoothMap semidirect_loop_faces(int samples, int p, int q, FaceDirection dir, int i) {
    const NerveContext ctx{loop_of(GroupKind::SU2, samples), CircleAction::adjoint()};
    return face_map(ctx, p, q, dir, i);
}

namespace {

ResidualReport row(std::string identity, std::string anchor, int probes, double residual, double tolerance) {
    ResidualReport r;
    r.identity = std::move(identity);
    r.anchor = std::move(anchor);
    r.probes = probes;
    r.max_residual = residual;
    r.tolerance = tolerance;
    return r;
}

}  // namespace

std::vector<ResidualReport> loop_nerve_cocycle_check(const CheckSettings& s, const LoopCheckSettings& loop) {
    const int n = loop.samples;
    const ProbeSampler sampler = loop_sampler(loop.band);
    const ProbeOptions& opts = s.probes;
    const NerveContext group{FactorSpec{GroupKind::SU2}, std::nullopt};
    const NerveContext loops{loop_of(GroupKind::SU2, n), std::nullopt};
    const DifferentialForm c13 = trace_cubed_form(group.level(1));
    const DifferentialForm c22 = chern_c22(ChernVariant::SU);
    const DifferentialForm t13 = transgress(c13, n);
    const DifferentialForm t22 = transgress(c22, n);

    std::vector<ResidualReport> out;
    out.push_back(row("transgressed C13 is closed", "d(int_{S1} ev* C13) = 0 on LSU(2)", opts.count,
                      form_max_abs(exterior_derivative(t13, s.derivative), sampler, opts, "loop-i"), loop.tol_loop_fd));

    const DifferentialForm cross_faces = d_horizontal(loops, {1, 0, 2}, t13);
    const DifferentialForm dt22 = exterior_derivative(t22, s.derivative);
    auto cross = [&](int sign) {
        return form_max_abs(cross_faces + Complex(sign) * dt22, sampler, opts, "loop-ii");
    };
    ResidualReport ii = row("transgressed cocycle across levels",
                            "d'(int_{S1} ev* C13) - d(int_{S1} ev* C22) = 0 on LSU(2)^2", opts.count,
                            cross(signs::kLoopCross), loop.tol_loop_fd);
    attach_sign(ii, probe_sign("loop_cross", signs::kLoopCross, loop.tol_loop_fd, cross));
    ii.control_residual = form_max_abs(cross_faces, sampler, opts, "loop-ii");
    ii.note = ii.note.empty() ? "control drops the C22 layer" : ii.note + "; control drops the C22 layer";
    out.push_back(std::move(ii));

    out.push_back(row("transgressed C22 is a simplicial cocycle", "d'(int_{S1} ev* C22) = 0 on LSU(2)^3", opts.count,
                      form_max_abs(d_horizontal(loops, {2, 0, 1}, t22), sampler, opts, "loop-iii"), s.tol_algebraic));

    // d after transgression against transgression after d, on C22 where dC22 != 0
    const DifferentialForm t_dc22 = transgress(exterior_derivative(c22, s.derivative), n);
    auto fiber = [&](int sign) {
        return form_max_abs(dt22 - Complex(sign) * t_dc22, sampler, opts, "loop-fiber");
    };
    ResidualReport f = row("fiber integration commutes with d up to sign",
                           "d int_{S1} ev* w = -int_{S1} ev* dw, fiber direction first", opts.count,
                           fiber(signs::kFiberIntegration), loop.tol_loop_fd);
    attach_sign(f, probe_sign("fiber_integration", signs::kFiberIntegration, loop.tol_loop_fd, fiber));
    out.push_back(std::move(f));

    double naturality = 0;
    for (int i = 0; i <= 2; ++i) {
        const DifferentialForm a = transgress(pullback(face_map(group, 2, 0, FaceDirection::Horizontal, i), c13), n);
        const DifferentialForm b = pullback(face_map(loops, 2, 0, FaceDirection::Horizontal, i), t13);
        naturality = std::max(naturality, form_max_abs(a - b, sampler, opts, "loop-natural"));
    }
    out.push_back(row("transgression commutes with faces", "int_{S1} ev*(e_i^* w) = e_i^*(int_{S1} ev* w)", opts.count,
                      naturality, s.tol_algebraic));
    return out;
}

std::vector<ResidualReport> transgression_quadrature_check(const CheckSettings& s, const LoopCheckSettings& loop) {
    constexpr int kBandLimited = 8;
    const ProbeOptions& opts = s.probes;
    const int n = loop.samples;
    const DifferentialForm c13 = trace_cubed_form(GroupSpec{GroupKind::SU2});
    const DifferentialForm coarse = transgress(c13, n);
    const DifferentialForm fine = transgress(c13, 2 * n);
    const GroupSpec ls{loop_of(GroupKind::SU2, n)};
    const GroupSpec lf{loop_of(GroupKind::SU2, 2 * n)};
    auto compare = [&](std::string_view stream, bool generic, double shift_b, bool refine) {
        const int band = generic ? loop.band : kBandLimited;
        return probe_max(opts, stream, [&](Rng& rng) {
            const LoopPath gamma = generic ? LoopPath::random(GroupKind::SU2, rng, band)
                                           : LoopPath::one_parameter(GroupKind::SU2, rng, band);
            const LoopTangent u = LoopTangent::random(GroupKind::SU2, rng, band);
            const LoopTangent v = LoopTangent::random(GroupKind::SU2, rng, band);
            auto value = [&](const DifferentialForm& w, const GroupSpec& spec, int samples, double shift) {
                const FactorValue g = gamma.sample(samples, shift);
                const GroupPoint p{spec, {g}};
                return w(p, {TangentVector{{u.sample(g, shift)}}, TangentVector{{v.sample(g, shift)}}});
            };
            const Complex a = value(coarse, ls, n, 0.0);
            const Complex b = refine ? value(fine, lf, 2 * n, shift_b) : value(coarse, ls, n, shift_b);
            return std::abs(a - b);
        });
    };
    std::vector<ResidualReport> out;
    out.push_back(row("transgression under resolution doubling, band 8",
                      "N -> 2N changes int_{S1} ev* C13 by < tol, one-parameter loops", opts.count,
                      compare("loop-refine", false, 0.0, true), s.tol_algebraic));
    out.push_back(row("transgression under rotation of the loop parameter, band 8",
                      "t -> t + c leaves int_{S1} ev* C13", opts.count, compare("loop-rotate", false, 0.377, false),
                      s.tol_algebraic));
    out.push_back(row("transgression under resolution doubling, generic loops",
                      "N -> 2N on products of exponentials at the configured band", opts.count,
                      compare("loop-refine-generic", true, 0.0, true), s.tol_algebraic));
    return out;
}

}  // namespace sdr
