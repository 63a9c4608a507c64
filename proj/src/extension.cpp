#include "sdr/extension.hpp"

#include <cmath>
#include <stdexcept>

namespace sdr {

namespace {

const Complex kMinusInv2PiI = -kInv2PiI;

Mat random_weights(Rng& rng) {
    Mat m(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = Complex(rng.normal(), rng.normal()) * 0.5;
    return m;
}

Complex theta_flat(const Mat& ghat, const Mat& x) { return 0.5 * (ghat.adjoint() * x).trace(); }

Complex connection_at(const DifferentialForm& theta, const Mat& ghat, const Mat& x) {
    static const GroupSpec total{GroupKind::U2};
    return theta(make_point(total, {ghat}), {make_tangent({x})});
}

ResidualReport row(std::string identity, std::string anchor, int probes, double residual, double tolerance) {
    ResidualReport r;
    r.identity = std::move(identity);
    r.anchor = std::move(anchor);
    r.probes = probes;
    r.max_residual = residual;
    r.tolerance = tolerance;
    return r;
}

double layer_max(const TotalCochain& c, const ProbeOptions& opts, std::string_view stream) {
    double worst = 0;
    for (const auto& [idx, layer] : c.layers())
        worst = std::max(worst, form_max_abs(layer.form, group_sampler(), opts, std::string(stream) + to_string(idx)));
    return worst;
}

double layer_at(const TotalCochain& c, CochainIndex idx, const ProbeOptions& opts, std::string_view stream) {
    return form_max_abs(c.at(idx), group_sampler(), opts, stream);
}

// Alternating face sum  sum_i signs[i] e_i^* w  out of level (p, q).
DifferentialForm face_sum(const NerveContext& ctx, int p, int q, FaceDirection dir, std::vector<double> signs,
                          const DifferentialForm& w) {
    DifferentialForm sum = zero_form(ctx.level(p, q), w.degree);
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] != 0) sum = sum + Complex(signs[i]) * pullback(face_map(ctx, p, q, dir, static_cast<int>(i)), w);
    return sum;
}

}  // namespace

LiftChoice LiftChoice::random(Rng& rng, bool shift_points, bool shift_tangents) {
    LiftChoice c;
    if (shift_points) c.phase = random_weights(rng);
    if (shift_tangents) c.vertical = random_weights(rng);
    return c;
}

Mat CentralExtensionModel::embed_center(Complex u) const { return u * identity_matrix<double>(2); }

Mat CentralExtensionModel::lift(const Mat& g, const LiftChoice& c) const {
    return g * std::polar(1.0, (c.phase * g).trace().real());
}

Mat CentralExtensionModel::lift_tangent(const Mat& g, const Mat& v, const Mat& ghat, const LiftChoice& c) const {
    const Mat a = g.adjoint() * v;
    return ghat * a + (c.vertical * a).trace().real() * kI * ghat;
}

GroupPoint CentralExtensionModel::lift(const GroupPoint& p, const LiftChoice& c) const {
    std::vector<Mat> m;
    for (std::size_t i = 0; i < p.size(); ++i) m.push_back(lift(p.mat(i), c));
    return make_point(GroupSpec::power(total[0], static_cast<int>(p.size())), std::move(m));
}

TangentVector CentralExtensionModel::lift_tangent(const GroupPoint& p, const GroupPoint& phat, const TangentVector& v,
                                                  const LiftChoice& c) const {
    std::vector<Mat> m;
    for (std::size_t i = 0; i < p.size(); ++i) m.push_back(lift_tangent(p.mat(i), v.mat(i), phat.mat(i), c));
    return make_tangent(std::move(m));
}

SmoothMap CentralExtensionModel::project_power(int n) const {
    const GroupSpec source = GroupSpec::power(total[0], n);
    const GroupSpec target = GroupSpec::power(base[0], n);
    const GroupSpec factor = total;
    const SmoothMap pi = project;
    return {source, target,
            [factor, pi, target](const GroupPoint& x) {
                std::vector<Mat> m;
                for (std::size_t i = 0; i < x.size(); ++i) m.push_back(pi.apply(make_point(factor, {x.mat(i)})).mat(0));
                return make_point(target, std::move(m));
            },
            [factor, pi, target](const GroupPoint& x, const TangentVector& v) {
                std::vector<Mat> m;
                for (std::size_t i = 0; i < x.size(); ++i)
                    m.push_back(pi.push(make_point(factor, {x.mat(i)}), make_tangent({v.mat(i)})).mat(0));
                return make_tangent(std::move(m));
            }};
}

DifferentialForm default_twist_form(int axis) {
    const Mat s = pauli<double>(axis);
    return {GroupSpec{GroupKind::PU2}, 1, [s](const GroupPoint& p, std::span<const TangentVector> v) {
                const Mat& g = p.mat(0);
                const Mat a = g.adjoint() * v[0].mat(0);
                return kI * (s * g * s * g.adjoint()).trace().real() * (s * a).trace().imag();
            }};
}

CentralExtensionModel build_u2_over_pu2(bool flat, std::optional<DifferentialForm> twist, std::uint64_t seed) {
    if (flat && twist) throw std::invalid_argument("build_u2_over_pu2: a flat model takes no twist");
    CentralExtensionModel ext;
    const GroupSpec total = ext.total;
    const GroupSpec base = ext.base;
    ext.project = {total, base,
                   [base](const GroupPoint& x) {
                       const Mat& g = x.mat(0);
                       return make_point(base, {Mat(g / std::sqrt(g.determinant()))});
                   },
                   [](const GroupPoint& x, const TangentVector& v) {
                       const Mat& g = x.mat(0);
                       const Mat a = g.adjoint() * v.mat(0);
                       const Mat traceless = a - 0.5 * a.trace() * identity_matrix<double>(2);
                       return make_tangent({Mat(g / std::sqrt(g.determinant()) * traceless)});
                   }};
    const DifferentialForm theta{total, 1, [](const GroupPoint& p, std::span<const TangentVector> v) {
                                     return theta_flat(p.mat(0), v[0].mat(0));
                                 }};
    if (flat) {
        ext.connection = theta;
        return ext;
    }
    DifferentialForm alpha = twist ? *twist : default_twist_form(3);
    if (!(alpha.domain == base) || alpha.degree != 1)
        throw std::invalid_argument("build_u2_over_pu2: twist must be a 1-form on PU2");
    const ProbeOptions opts{.seed = seed, .count = 50};
    const double flip = probe_max(opts, "twist-flip", [&](Rng& rng) {
        const GroupPoint g = sample_point(base, rng);
        const TangentVector x = sample_tangent(g, rng);
        const GroupPoint mg = make_point(base, {Mat(-g.mat(0))});
        return std::abs(alpha(g, {x}) - alpha(mg, {(-1.0) * x}));
    });
    if (flip > 1e-12) throw std::invalid_argument("build_u2_over_pu2: twist is not invariant under g -> -g");
    if (form_max_abs(exterior_derivative(alpha, kNestedDerivative), group_sampler(), opts, "twist-closed") < 1e-6)
        throw std::invalid_argument("build_u2_over_pu2: twist is closed, d alpha = 0");
    ext.connection = theta + pullback(ext.project, alpha);
    ext.twist = std::move(alpha);
    return ext;
}

std::vector<ResidualReport> model_invariants(const CentralExtensionModel& ext, const CheckSettings& s) {
    const ProbeOptions& opts = s.probes;
    std::vector<ResidualReport> out;
    out.push_back(row("projection of lift", "pi(lift g) = g", opts.count, probe_max(opts, "inv-lift", [&](Rng& rng) {
                          const Mat g = sample_factor(GroupKind::PU2, rng);
                          const LiftChoice c = LiftChoice::random(rng, true, false);
                          const Mat back = ext.project.apply(make_point(ext.total, {ext.lift(g, c)})).mat(0);
                          return std::min((back - g).cwiseAbs().maxCoeff(), (back + g).cwiseAbs().maxCoeff());
                      }),
                      s.tol_exact));
    out.push_back(row("connection on the vertical generator", "theta(ghat iI) = i", opts.count,
                      probe_max(opts, "inv-vertical", [&](Rng& rng) {
                          const Mat gh = sample_factor(GroupKind::U2, rng);
                          return std::abs(connection_at(ext.connection, gh, Mat(kI * gh)) - kI);
                      }),
                      s.tol_exact));
    out.push_back(row("center invariance of the connection", "R_u^* theta = theta", opts.count,
                      probe_max(opts, "inv-center", [&](Rng& rng) {
                          const Mat gh = sample_factor(GroupKind::U2, rng);
                          const Mat x = gh * sample_algebra(GroupKind::U2, rng);
                          const Complex u = std::polar(1.0, rng.uniform(0.0, 2 * kPi));
                          return std::abs(connection_at(ext.connection, Mat(gh * u), Mat(x * u)) -
                                          connection_at(ext.connection, gh, x));
                      }),
                      s.tol_algebraic));
    return out;
}

DifferentialForm curvature_on_base(const CentralExtensionModel& ext, const LiftChoice& lift, DerivativeOptions opts) {
    const DifferentialForm dtheta = exterior_derivative(ext.connection, opts);
    return {ext.base, 2, [ext, lift, dtheta](const GroupPoint& p, std::span<const TangentVector> v) {
                const GroupPoint ph = ext.lift(p, lift);
                return kMinusInv2PiI * dtheta(ph, {ext.lift_tangent(p, ph, v[0], lift), ext.lift_tangent(p, ph, v[1], lift)});
            }};
}

DifferentialForm nat_section_delta_pullback(const CentralExtensionModel& ext, const LiftChoice& lift) {
    const GroupSpec domain = GroupSpec::power(ext.base[0], 2);
    return {domain, 1, [ext, lift](const GroupPoint& p, std::span<const TangentVector> v) {
                const GroupPoint ph = ext.lift(p, lift);
                const TangentVector xh = ext.lift_tangent(p, ph, v[0], lift);
                const Mat &g1 = ph.mat(0), &g2 = ph.mat(1);
                const Mat &x1 = xh.mat(0), &x2 = xh.mat(1);
                const DifferentialForm& th = ext.connection;
                return connection_at(th, g2, x2) - connection_at(th, Mat(g1 * g2), Mat(x1 * g2 + g1 * x2)) +
                       connection_at(th, g1, x1);
            }};
}

DifferentialForm total_delta_connection(const CentralExtensionModel& ext) {
    const NerveContext ctx{ext.total[0], std::nullopt};
    return d_horizontal(ctx, {1, 0, 1}, ext.connection);
}

TotalCochain dd_cocycle(const CentralExtensionModel& ext, DerivativeOptions opts, int section_sign) {
    TotalCochain c(NerveContext{ext.base[0], std::nullopt});
    c.set({1, 0, 2}, curvature_on_base(ext, {}, opts), true);
    c.set({2, 0, 1}, Complex(section_sign) * kMinusInv2PiI * nat_section_delta_pullback(ext));
    return c;
}

std::vector<ResidualReport> dd_cocycle_check(const CentralExtensionModel& ext, const CheckSettings& s) {
    const ProbeOptions& opts = s.probes;
    const std::string model = ext.flat() ? "flat" : "twisted";
    auto differential = [&](int sign) { return total_differential(dd_cocycle(ext, s.derivative, sign), s.derivative, s.nested); };
    const TotalCochain d = differential(signs::kDDSection);

    std::vector<ResidualReport> out;
    out.push_back(row("curvature is closed (" + model + ")", "d c1(theta) = 0", opts.count,
                      layer_at(d, {1, 0, 3}, opts, "dd-closed"), s.tol_fd));
    ResidualReport cross = row("curvature against section (" + model + ")",
                               "(e0* - e1* + e2*) c1(theta) = (-1/2 pi i) d(s_nt*(delta theta))", opts.count,
                               layer_at(d, {2, 0, 2}, opts, "dd-cross"), s.tol_fd);
    attach_sign(cross, probe_sign("dd_section", signs::kDDSection, s.tol_fd, [&](int sign) {
        return layer_at(differential(sign), {2, 0, 2}, opts, "dd-cross");
    }));
    out.push_back(std::move(cross));
    out.push_back(row("section pullback is a simplicial cocycle (" + model + ")",
                      "(e0* - e1* + e2* - e3*) s_nt*(delta theta) = 0", opts.count, layer_at(d, {3, 0, 1}, opts, "dd-section"),
                      s.tol_algebraic));
    return out;
}

std::vector<ResidualReport> lift_independence_check(const CentralExtensionModel& ext, const CheckSettings& s) {
    const ProbeOptions& opts = s.probes;
    const DifferentialForm c1 = curvature_on_base(ext, {}, s.derivative);
    const DifferentialForm chi = nat_section_delta_pullback(ext);
    auto shifted = [&](const DifferentialForm& reference, bool points, bool tangents, std::string_view stream,
                       auto make_form) {
        return probe_max(opts, stream, [&](Rng& rng) {
            const LiftChoice c = LiftChoice::random(rng, points, tangents);
            const DifferentialForm other = make_form(c);
            const GroupPoint p = sample_point(reference.domain, rng);
            std::vector<TangentVector> v;
            for (int k = 0; k < reference.degree; ++k) v.push_back(sample_tangent(p, rng));
            return std::abs(other(p, v) - reference(p, v));
        });
    };
    auto c1_with = [&](const LiftChoice& c) { return curvature_on_base(ext, c, s.derivative); };
    auto chi_with = [&](const LiftChoice& c) { return nat_section_delta_pullback(ext, c); };
    std::vector<ResidualReport> out;
    out.push_back(row("section pullback under center-shifted lifts", "s_nt*(delta theta) independent of ghat_i u_i",
                      opts.count, shifted(chi, true, false, "lift-chi-center", chi_with), s.tol_exact));
    out.push_back(row("section pullback under vertical tangent shifts", "s_nt*(delta theta) independent of vhat_i + vertical",
                      opts.count, shifted(chi, false, true, "lift-chi-vertical", chi_with), s.tol_lift));
    // c1 is a difference quotient; center shifts only move its roundoff.
    out.push_back(row("curvature under center-shifted lifts", "c1(theta) independent of ghat u", opts.count,
                      shifted(c1, true, false, "lift-c1-center", c1_with), s.tol_lift));
    out.push_back(row("curvature under vertical tangent shifts", "c1(theta) independent of vhat + vertical", opts.count,
                      shifted(c1, false, true, "lift-c1-vertical", c1_with), s.tol_lift));
    return out;
}

Complex delta_section_discrepancy(const CentralExtensionModel& ext, const GroupPoint& g3, const LiftChoice& lift) {
    struct Entry {
        Mat base;
        Mat element;
        int exponent;
        bool used = false;
    };
    const Mat &a = g3.mat(0), &b = g3.mat(1), &c = g3.mat(2);
    const std::pair<Mat, Mat> faces[4] = {{b, c}, {a * b, c}, {a, b * c}, {a, b}};
    std::vector<Entry> entries;
    for (int i = 0; i < 4; ++i) {
        const int outer = i % 2 == 0 ? 1 : -1;
        const auto& [x, y] = faces[i];
        const Mat xh = ext.lift(x, lift), yh = ext.lift(y, lift);
        entries.push_back({y, yh, outer});
        entries.push_back({x * y, xh * yh, -outer});
        entries.push_back({x, xh, outer});
    }
    Complex product = 1;
    for (auto& plus : entries) {
        if (plus.exponent < 0) continue;
        bool matched = false;
        for (auto& minus : entries) {
            if (minus.exponent > 0 || minus.used) continue;
            if (std::isnan(central_ratio(plus.base, minus.base).real())) continue;
            product *= central_ratio(plus.element, minus.element);
            minus.used = true;
            matched = true;
            break;
        }
        if (!matched) return {std::nan(""), 0};
    }
    return product;
}

ResidualReport delta_section_check(const CentralExtensionModel& ext, const CheckSettings& s) {
    const GroupSpec spec = GroupSpec::power(ext.base[0], 3);
    return row("alternating tensor of the natural section", "delta s_nt = 1 in delta(delta Ghat) = trivial",
               s.probes.count, probe_max(s.probes, "delta-section", [&](Rng& rng) {
                   const GroupPoint g = sample_point(spec, rng);
                   return std::abs(delta_section_discrepancy(ext, g, LiftChoice::random(rng, true, false)) - 1.0);
               }),
               s.tol_exact);
}

std::vector<ResidualReport> behrend_xu_check(const CentralExtensionModel& ext, const CheckSettings& s) {
    const ProbeOptions& opts = s.probes;
    const DifferentialForm direct = total_delta_connection(ext);
    const DifferentialForm lifted = pullback(ext.project_power(2), nat_section_delta_pullback(ext));
    std::vector<ResidualReport> out;
    out.push_back(row("direct evaluation against the lifted section pullback",
                      "(e0^* - e1^* + e2^*) theta = (pi x pi)^* s_nt*(delta theta) on Ghat x Ghat", opts.count,
                      form_max_abs(direct - lifted, group_sampler(), opts, "bx-compare"), s.tol_lift));
    out.push_back(row("horizontality of the alternating connection",
                      "(e0^* - e1^* + e2^*) theta vanishes on vertical vectors", opts.count,
                      probe_max(opts, "bx-horizontal", [&](Rng& rng) {
                          const GroupPoint p = sample_point(direct.domain, rng);
                          const TangentVector x = sample_tangent(p, rng);
                          const TangentVector vertical =
                              make_tangent({Mat(rng.normal() * kI * p.mat(0)), Mat(rng.normal() * kI * p.mat(1))});
                          return std::abs(direct(p, {x + vertical}) - direct(p, {x}));
                      }),
                      s.tol_lift));
    return out;
}

Complex SectionTwist::phi(const Mat& g1, const Mat& g2) const { return psi(g2) / psi(g1 * g2) * psi(g1); }

double SectionTwist::cocycle_residual(const ProbeOptions& opts) const {
    return probe_max(opts, "twist-cocycle", [&](Rng& rng) {
        const Mat a = sample_factor(GroupKind::PU2, rng), b = sample_factor(GroupKind::PU2, rng),
                  c = sample_factor(GroupKind::PU2, rng);
        return std::abs(phi(b, c) / phi(a * b, c) * phi(a, b * c) / phi(a, b) - 1.0);
    });
}

SectionTwist constant_section_twist() {
    return {[](const Mat&) { return Complex(1); }};
}

SectionTwist conjugation_phase_twist(double kappa) {
    return {[kappa](const Mat& g) {
        const Mat s = pauli<double>(3);
        return std::polar(1.0, kappa * (s * g * s * g.adjoint()).trace().real());
    }};
}

namespace {

// delta theta on Ghat^3: theta(x1) - theta(x2) + theta(x3)
DifferentialForm alternating_connection(const CentralExtensionModel& ext) {
    return {GroupSpec::power(ext.total[0], 3), 1, [th = ext.connection](const GroupPoint& p, std::span<const TangentVector> v) {
                return connection_at(th, p.mat(0), v[0].mat(0)) - connection_at(th, p.mat(1), v[0].mat(1)) +
                       connection_at(th, p.mat(2), v[0].mat(2));
            }};
}

// The section s_nt phi of delta Ghat, as a map G^2 -> Ghat^3 with a
// difference-quotient differential.
SmoothMap twisted_section(const CentralExtensionModel& ext, const SectionTwist& twist, DerivativeOptions opts) {
    const GroupSpec source = GroupSpec::power(ext.base[0], 2);
    const GroupSpec target = GroupSpec::power(ext.total[0], 3);
    SmoothMap m{source, target,
                [ext, twist, target](const GroupPoint& p) {
                    const Mat g1 = ext.lift(p.mat(0)), g2 = ext.lift(p.mat(1));
                    return make_point(target, {Mat(g2 * twist.phi(p.mat(0), p.mat(1))), Mat(g1 * g2), g1});
                },
                {}};
    const SmoothMap plain = m;
    m.push = [plain, opts](const GroupPoint& p, const TangentVector& v) { return numerical_push(plain, p, v, opts); };
    return m;
}

DifferentialForm log_derivative(const GroupSpec& domain, std::function<Complex(const GroupPoint&)> f,
                                DerivativeOptions opts) {
    const DifferentialForm df = exterior_derivative(function_form(domain, f), opts);
    return {domain, 1, [df, f](const GroupPoint& p, std::span<const TangentVector> v) { return df(p, v) / f(p); }};
}

}  // namespace

std::vector<ResidualReport> twist_section_check(const CentralExtensionModel& ext, const SectionTwist& twist,
                                                const CheckSettings& s) {
    const ProbeOptions& opts = s.probes;
    const NerveContext ctx{ext.base[0], std::nullopt};
    const GroupSpec g2 = ctx.level(2);
    const DifferentialForm route_a = pullback(twisted_section(ext, twist, s.derivative), alternating_connection(ext));
    const DifferentialForm chi = nat_section_delta_pullback(ext);
    const DifferentialForm dlog_phi = log_derivative(
        g2, [twist](const GroupPoint& p) { return twist.phi(p.mat(0), p.mat(1)); }, s.derivative);
    const DifferentialForm route_b = chi + dlog_phi;

    std::vector<ResidualReport> out;
    out.push_back(row("twist is a cocycle", "delta phi = 1", opts.count, twist.cocycle_residual(opts), s.tol_exact));
    out.push_back(row("section twist", "s*(delta theta) = s_nt*(delta theta) + d log phi, s = s_nt phi", opts.count,
                      form_max_abs(route_a - route_b, group_sampler(), opts, "twist-section"), s.tol_fd));

    TotalCochain twisted(ctx);
    twisted.set({1, 0, 2}, curvature_on_base(ext, {}, s.derivative), true);
    twisted.set({2, 0, 1}, Complex(signs::kDDSection) * kMinusInv2PiI * route_a, true);
    const TotalCochain natural = dd_cocycle(ext, s.derivative);
    TotalCochain beta(ctx);
    beta.set({1, 0, 1},
             kMinusInv2PiI * log_derivative(ctx.level(1), [twist](const GroupPoint& p) { return twist.psi(p.mat(0)); },
                                            s.derivative),
             true);
    const TotalCochain d_beta = total_differential(beta, s.derivative, s.nested);
    auto residual = [&](int sign) {
        return layer_max(twisted - natural - Complex(sign) * d_beta, opts, "twist-coboundary");
    };
    ResidualReport cob = row("section change is a total coboundary",
                             "cocycle(s_nt phi) - cocycle(s_nt) = -D[(-1/2 pi i) psi^{-1} d psi]", opts.count,
                             residual(signs::kTwistCoboundary), s.tol_fd);
    attach_sign(cob, probe_sign("twist_coboundary", signs::kTwistCoboundary, s.tol_fd, residual));
    out.push_back(std::move(cob));
    return out;
}

ResidualReport connection_independence_check(const CentralExtensionModel& flat, const CentralExtensionModel& twisted,
                                             const CheckSettings& s) {
    if (!twisted.twist) throw std::invalid_argument("connection_independence_check: second model has no twist");
    const ProbeOptions& opts = s.probes;
    const NerveContext ctx{flat.base[0], std::nullopt};
    const TotalCochain difference = dd_cocycle(twisted, s.derivative) - dd_cocycle(flat, s.derivative);
    TotalCochain beta(ctx);
    beta.set({1, 0, 1}, kMinusInv2PiI * *twisted.twist);
    const TotalCochain d_beta = total_differential(beta, s.derivative, s.nested);
    auto residual = [&](int sign) { return layer_max(difference - Complex(sign) * d_beta, opts, "connection"); };
    ResidualReport r = row("connection change is a total coboundary",
                           "cocycle(theta + pi*alpha) - cocycle(theta) = -D[(-1/2 pi i) alpha]", opts.count,
                           residual(signs::kConnectionCoboundary), s.tol_fd);
    attach_sign(r, probe_sign("connection_coboundary", signs::kConnectionCoboundary, s.tol_fd, residual));
    // negative control: the delta alpha layer counted twice
    TotalCochain doubled = d_beta;
    doubled.accumulate({2, 0, 1}, d_beta.at({2, 0, 1}), false);
    r.control_residual = layer_max(difference - Complex(signs::kConnectionCoboundary) * doubled, opts, "connection");
    return r;
}

DifferentialForm equivariant_tau(const EquivariantExtensionModel& eq, int orientation, const LiftChoice& lift) {
    const NerveContext ctx = eq.nerve();
    const CircleAction conj = eq.action.is_trivial() ? CircleAction::trivial()
                                                     : CircleAction::adjoint(orientation * eq.action.orientation());
    const CentralExtensionModel ext = eq.ext;
    return {ctx.level(1, 1), 1, [ext, conj, lift](const GroupPoint& p, std::span<const TangentVector> v) {
                const Mat g = p.mat(0);
                const Complex z = p.mat(1)(0, 0);
                const Complex w = v[0].mat(1)(0, 0);
                const GroupPoint gh = make_point(ext.total, {ext.lift(g, lift)});
                const TangentVector xh = make_tangent({ext.lift_tangent(g, v[0].mat(0), gh.mat(0), lift)});
                const GroupPoint c = conj.act(z, gh);
                const TangentVector dc = conj.push(z, w, gh, xh);
                return kMinusInv2PiI * (-ext.connection(gh, {xh}) + ext.connection(c, {dc}));
            }};
}

namespace {

struct TauResiduals {
    std::function<double(int orientation, int sign)> curvature;
    std::function<double(int orientation, int sign)> section;
    std::function<double(int orientation)> circle;
};

TauResiduals tau_residuals(const EquivariantExtensionModel& eq, const CheckSettings& s, std::string prefix) {
    const NerveContext ctx = eq.nerve();
    const DifferentialForm c1 = curvature_on_base(eq.ext, {}, s.derivative);
    const DifferentialForm chi = kMinusInv2PiI * nat_section_delta_pullback(eq.ext);
    const DifferentialForm c1_faces = face_sum(ctx, 1, 1, FaceDirection::Vertical, {-1, 1}, c1);
    const DifferentialForm chi_faces = face_sum(ctx, 2, 1, FaceDirection::Vertical, {1, -1}, chi);
    const ProbeOptions opts = s.probes;
    TauResiduals r;
    r.curvature = [=](int o, int sign) {
        const DifferentialForm dtau = exterior_derivative(equivariant_tau(eq, o), s.derivative);
        return form_max_abs(dtau - Complex(sign) * c1_faces, group_sampler(), opts, prefix + "tau-i");
    };
    r.section = [=](int o, int sign) {
        const DifferentialForm lhs = face_sum(ctx, 2, 1, FaceDirection::Horizontal, {1, -1, 1}, equivariant_tau(eq, o));
        return form_max_abs(lhs - Complex(sign) * chi_faces, group_sampler(), opts, prefix + "tau-ii");
    };
    r.circle = [=](int o) {
        const DifferentialForm lhs = face_sum(ctx, 1, 2, FaceDirection::Vertical, {-1, 1, -1}, equivariant_tau(eq, o));
        return form_max_abs(lhs, group_sampler(), opts, prefix + "tau-iii");
    };
    return r;
}

}  // namespace

std::vector<ResidualReport> tau_conditions(const EquivariantExtensionModel& eq, const CheckSettings& s) {
    const int count = s.probes.count;
    const TauResiduals r = tau_residuals(eq, s, "");

    // The orientation is decided on a twist that does not commute with the
    // circle, where the two conjugation directions give different tau.
    EquivariantExtensionModel skew = eq;
    skew.ext = build_u2_over_pu2(false, default_twist_form(1), s.probes.seed);
    const TauResiduals rs = tau_residuals(skew, s, "skew-");
    const SignEvidence orientation = probe_sign("tau_orientation", signs::kTauOrientation, s.tol_fd, [&](int o) {
        return std::max(rs.curvature(o, signs::kTauCurvature), rs.circle(o));
    });

    std::vector<ResidualReport> out;
    ResidualReport i = row("tau condition (i)", "d tau = (-e0^{S1*} + e1^{S1*}) c1(theta)", count,
                           r.curvature(signs::kTauOrientation, signs::kTauCurvature), s.tol_fd);
    attach_sign(i, orientation);
    attach_sign(i, probe_sign("tau_curvature", signs::kTauCurvature, s.tol_fd,
                                 [&](int sign) { return r.curvature(signs::kTauOrientation, sign); }));
    out.push_back(std::move(i));

    ResidualReport ii = row("tau condition (ii)",
                            "(e0^{LG*} - e1^{LG*} + e2^{LG*}) tau = -(e0^{S1*} - e1^{S1*}) (-1/2 pi i) s_nt*(delta theta)",
                            count, r.section(signs::kTauOrientation, signs::kTauSection), s.tol_fd);
    attach_sign(ii, probe_sign("tau_section", signs::kTauSection, s.tol_fd,
                                  [&](int sign) { return r.section(signs::kTauOrientation, sign); }));
    out.push_back(std::move(ii));

    ResidualReport stated = row("tau condition (ii) with sign +1",
                                "(e0^{LG*} - e1^{LG*} + e2^{LG*}) tau = (e0^{S1*} - e1^{S1*}) (-1/2 pi i) s_nt*(delta theta)",
                                count, r.section(signs::kTauOrientation, +1), s.tol_fd);
    stated.informational = true;
    if (!stated.pass()) stated.note = "finding: with the natural section the right-hand side enters with the opposite sign";
    out.push_back(std::move(stated));

    out.push_back(row("tau condition (iii)", "(-e0^{S1*} + e1^{S1*} - e2^{S1*}) tau = 0", count,
                      r.circle(signs::kTauOrientation), s.tol_fd));
    return out;
}

std::vector<ResidualReport> triple_cocycle_check(const EquivariantExtensionModel& eq, const CheckSettings& s) {
    auto layers = [&](int tau_sign) {
        return check_cocycle(triple_cocycle(eq, s.derivative, tau_sign), group_sampler(), s.probes,
                             {s.tol_algebraic, s.tol_fd}, s.derivative, s.nested);
    };
    auto rows = layers(signs::kTauLayer);
    const auto flipped = layers(-signs::kTauLayer);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        ResidualReport& r = rows[k];
        const double with_frozen = r.max_residual, with_other = flipped[k].max_residual;
        if (with_frozen != with_other)
            attach_sign(r, probe_sign("tau_layer", signs::kTauLayer, r.tolerance,
                                      [&](int sign) { return sign == signs::kTauLayer ? with_frozen : with_other; }));
        r.anchor = "D(c1 - (-1/2 pi i) s_nt*(delta theta) - tau) = 0, " + r.identity;
        r.identity = "triple cocycle " + r.identity;
    }
    return rows;
}

TotalCochain triple_cocycle(const EquivariantExtensionModel& eq, DerivativeOptions opts, int tau_sign) {
    TotalCochain c(eq.nerve());
    c.set({1, 0, 2}, curvature_on_base(eq.ext, {}, opts), true);
    c.set({2, 0, 1}, Complex(signs::kDDSection) * kMinusInv2PiI * nat_section_delta_pullback(eq.ext));
    c.set({1, 1, 1}, Complex(tau_sign) * equivariant_tau(eq));
    return c;
}

}  // namespace sdr
