#include "sdr/nerve.hpp"

#include <sstream>
#include <stdexcept>

namespace sdr {

GroupSpec NerveContext::level(int p, int q) const {
    return concat(GroupSpec::power(slot, p), GroupSpec::power({GroupKind::U1, 1}, q));
}

namespace {

GroupPoint assemble(const GroupSpec& spec, std::vector<FactorValue> factors) {
    return GroupPoint{spec, std::move(factors)};
}

TangentVector assemble(std::vector<FactorValue> factors) { return TangentVector{std::move(factors)}; }

// Applies a factor-list transform to the slot block and circle block of a
// level-(p, q) point.
struct Blocks {
    std::vector<FactorValue> slots;
    std::vector<FactorValue> circles;
};

Blocks split(const std::vector<FactorValue>& f, int p) {
    Blocks b;
    b.slots.assign(f.begin(), f.begin() + p);
    b.circles.assign(f.begin() + p, f.end());
    return b;
}

std::vector<FactorValue> join(Blocks b) {
    std::vector<FactorValue> f = std::move(b.slots);
    f.insert(f.end(), std::make_move_iterator(b.circles.begin()), std::make_move_iterator(b.circles.end()));
    return f;
}

}  // namespace

SmoothMap face_map(const NerveContext& ctx, int p, int q, FaceDirection dir, int i) {
    const GroupSpec source = ctx.level(p, q);
    if (dir == FaceDirection::Horizontal) {
        if (i < 0 || i > p || p < 1) throw std::out_of_range("face_map: horizontal index out of range");
        const GroupSpec target = ctx.level(p - 1, q);
        auto apply = [=](const GroupPoint& x) {
            Blocks b = split(x.factors, p);
            if (i == 0) {
                b.slots.erase(b.slots.begin());
            } else if (i == p) {
                b.slots.pop_back();
            } else {
                b.slots[i - 1] = multiply(b.slots[i - 1], b.slots[i]);
                b.slots.erase(b.slots.begin() + i);
            }
            return assemble(target, join(std::move(b)));
        };
        auto push = [=](const GroupPoint& x, const TangentVector& v) {
            Blocks b = split(v.factors, p);
            if (i == 0) {
                b.slots.erase(b.slots.begin());
            } else if (i == p) {
                b.slots.pop_back();
            } else {
                b.slots[i - 1] = multiply_tangent(x.factors[i - 1], b.slots[i - 1], x.factors[i], b.slots[i]);
                b.slots.erase(b.slots.begin() + i);
            }
            return assemble(join(std::move(b)));
        };
        return {source, target, apply, push};
    }

    if (!ctx.circle) throw std::invalid_argument("face_map: vertical faces need a circle action");
    if (i < 0 || i > q || q < 1) throw std::out_of_range("face_map: vertical index out of range");
    const GroupSpec target = ctx.level(p, q - 1);
    const CircleAction action = *ctx.circle;
    const GroupSpec slots_spec = ctx.level(p, 0);
    auto apply = [=](const GroupPoint& x) {
        Blocks b = split(x.factors, p);
        if (i == 0) {
            b.circles.erase(b.circles.begin());
        } else if (i < q) {
            b.circles[i - 1] = multiply(b.circles[i - 1], b.circles[i]);
            b.circles.erase(b.circles.begin() + i);
        } else {
            const Complex z = b.circles.back().values.front()(0, 0);
            b.slots = action.act(z, assemble(slots_spec, std::move(b.slots))).factors;
            b.circles.pop_back();
        }
        return assemble(target, join(std::move(b)));
    };
    auto push = [=](const GroupPoint& x, const TangentVector& v) {
        Blocks b = split(v.factors, p);
        if (i == 0) {
            b.circles.erase(b.circles.begin());
        } else if (i < q) {
            b.circles[i - 1] =
                multiply_tangent(x.factors[p + i - 1], b.circles[i - 1], x.factors[p + i], b.circles[i]);
            b.circles.erase(b.circles.begin() + i);
        } else {
            const Complex z = x.factors[p + q - 1].values.front()(0, 0);
            const Complex w = b.circles.back().values.front()(0, 0);
            Blocks xb = split(x.factors, p);
            b.slots = action.push(z, w, assemble(slots_spec, std::move(xb.slots)), assemble(std::move(b.slots))).factors;
            b.circles.pop_back();
        }
        return assemble(join(std::move(b)));
    };
    return {source, target, apply, push};
}

SmoothMap degeneracy_map(const NerveContext& ctx, int p, int q, int i) {
    if (i < 0 || i > p) throw std::out_of_range("degeneracy_map: index out of range");
    const GroupSpec source = ctx.level(p, q);
    const GroupSpec target = ctx.level(p + 1, q);
    const GroupPoint unit = identity_point(GroupSpec{ctx.slot});
    auto apply = [=](const GroupPoint& x) {
        Blocks b = split(x.factors, p);
        b.slots.insert(b.slots.begin() + i, unit.factors.front());
        return assemble(target, join(std::move(b)));
    };
    auto push = [=](const GroupPoint&, const TangentVector& v) {
        Blocks b = split(v.factors, p);
        b.slots.insert(b.slots.begin() + i, zero_tangent(unit).factors.front());
        return assemble(join(std::move(b)));
    };
    return {source, target, apply, push};
}

std::string to_string(const CochainIndex& idx) {
    std::ostringstream os;
    os << "(p=" << idx.p << ",q=" << idx.q << ",r=" << idx.r << ")";
    return os.str();
}

namespace {

double alternating(int i) { return i % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

DifferentialForm d_horizontal(const NerveContext& ctx, CochainIndex at, const DifferentialForm& w) {
    DifferentialForm sum = zero_form(ctx.level(at.p + 1, at.q), at.r);
    for (int i = 0; i <= at.p + 1; ++i)
        sum = sum + Complex(alternating(i)) * pullback(face_map(ctx, at.p + 1, at.q, FaceDirection::Horizontal, i), w);
    return sum;
}

DifferentialForm d_circle(const NerveContext& ctx, CochainIndex at, const DifferentialForm& w) {
    DifferentialForm sum = zero_form(ctx.level(at.p, at.q + 1), at.r);
    for (int i = 0; i <= at.q + 1; ++i)
        sum = sum + Complex(alternating(i)) * pullback(face_map(ctx, at.p, at.q + 1, FaceDirection::Vertical, i), w);
    return Complex(alternating(at.p)) * sum;
}

DifferentialForm d_vertical_form(CochainIndex at, const DifferentialForm& w, DerivativeOptions opts) {
    return Complex(alternating(at.p + at.q)) * exterior_derivative(w, opts);
}

void TotalCochain::set(CochainIndex idx, DifferentialForm form, bool fd_backed) {
    if (!(form.domain == ctx_.level(idx.p, idx.q)))
        throw std::invalid_argument("TotalCochain: layer " + to_string(idx) + " has domain " + form.domain.describe() +
                                    ", expected " + ctx_.level(idx.p, idx.q).describe());
    if (form.degree != idx.r) throw std::invalid_argument("TotalCochain: layer degree does not match index");
    if (idx.q > 0 && !ctx_.bisimplicial()) throw std::invalid_argument("TotalCochain: circle levels need a circle action");
    if (auto d = total_degree(); d && *d != idx.total())
        throw std::invalid_argument("TotalCochain: inconsistent total degree");
    if (layers_.count(idx)) throw std::invalid_argument("TotalCochain: duplicate layer " + to_string(idx));
    layers_.emplace(idx, CochainLayer{std::move(form), fd_backed});
}

void TotalCochain::accumulate(CochainIndex idx, const DifferentialForm& form, bool fd_backed) {
    auto it = layers_.find(idx);
    if (it == layers_.end()) {
        set(idx, form, fd_backed);
        return;
    }
    it->second.form = it->second.form + form;
    it->second.fd_backed = it->second.fd_backed || fd_backed;
}

std::optional<int> TotalCochain::total_degree() const {
    if (layers_.empty()) return std::nullopt;
    return layers_.begin()->first.total();
}

const DifferentialForm& TotalCochain::at(CochainIndex idx) const {
    auto it = layers_.find(idx);
    if (it == layers_.end()) throw std::out_of_range("TotalCochain: no layer " + to_string(idx));
    return it->second.form;
}

TotalCochain operator+(const TotalCochain& a, const TotalCochain& b) {
    TotalCochain r = a;
    for (const auto& [idx, layer] : b.layers_) r.accumulate(idx, layer.form, layer.fd_backed);
    return r;
}

TotalCochain operator-(const TotalCochain& a, const TotalCochain& b) { return a + Complex(-1) * b; }

TotalCochain operator*(Complex s, const TotalCochain& a) {
    TotalCochain r(a.ctx_);
    for (const auto& [idx, layer] : a.layers_) r.layers_.emplace(idx, CochainLayer{s * layer.form, layer.fd_backed});
    return r;
}

TotalCochain total_differential(const TotalCochain& c, DerivativeOptions opts, DerivativeOptions nested) {
    const NerveContext& ctx = c.context();
    TotalCochain out(ctx);
    for (const auto& [idx, layer] : c.layers()) {
        out.accumulate({idx.p + 1, idx.q, idx.r}, d_horizontal(ctx, idx, layer.form), layer.fd_backed);
        if (ctx.bisimplicial())
            out.accumulate({idx.p, idx.q + 1, idx.r}, d_circle(ctx, idx, layer.form), layer.fd_backed);
        out.accumulate({idx.p, idx.q, idx.r + 1}, d_vertical_form(idx, layer.form, layer.fd_backed ? nested : opts), true);
    }
    return out;
}

std::vector<ResidualReport> check_zero(const TotalCochain& c, const ProbeSampler& sampler, const ProbeOptions& opts,
                                       CocycleTolerances tol, std::string_view stream) {
    std::vector<ResidualReport> out;
    for (const auto& [idx, layer] : c.layers()) {
        ResidualReport r;
        r.identity = "layer " + to_string(idx);
        r.probes = opts.count;
        r.tolerance = layer.fd_backed ? tol.fd : tol.algebraic;
        r.max_residual = form_max_abs(layer.form, sampler, opts, std::string(stream) + to_string(idx));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ResidualReport> check_cocycle(const TotalCochain& c, const ProbeSampler& sampler,
                                          const ProbeOptions& opts, CocycleTolerances tol, DerivativeOptions dopts,
                                          DerivativeOptions nested) {
    return check_zero(total_differential(c, dopts, nested), sampler, opts, tol, "cocycle");
}

namespace {

ResidualReport make_row(std::string identity, std::string anchor, int probes, double residual, double tolerance) {
    ResidualReport r;
    r.identity = std::move(identity);
    r.anchor = std::move(anchor);
    r.probes = probes;
    r.max_residual = residual;
    r.tolerance = tolerance;
    return r;
}

NerveContext chern_context(ChernVariant v) {
    return {FactorSpec{v == ChernVariant::SU ? GroupKind::SU2 : GroupKind::U2}, std::nullopt};
}

}  // namespace

TotalCochain second_chern_cocycle(ChernVariant variant, int cross_sign) {
    const NerveContext ctx = chern_context(variant);
    TotalCochain c(ctx);
    c.set({1, 0, 3}, trace_cubed_form(ctx.level(1)));
    c.set({2, 0, 2}, Complex(cross_sign) * chern_c22(variant, ctx.slot.kind));
    return c;
}

std::vector<ResidualReport> second_chern_check(ChernVariant variant, const CheckSettings& s) {
    const bool su = variant == ChernVariant::SU;
    const std::string group = su ? "SU(2)" : "U(2)";
    const std::string tag = su ? "" : "^U";
    const int frozen = su ? signs::kChernCross : signs::kChernCrossU;
    const NerveContext ctx = chern_context(variant);
    const ProbeOptions& opts = s.probes;
    const ProbeSampler sampler = group_sampler();
    auto layers = [&](int sign) { return total_differential(second_chern_cocycle(variant, sign), s.derivative, s.nested); };

    const TotalCochain d = layers(frozen);
    std::vector<ResidualReport> out;
    out.push_back(make_row("C13" + tag + " is closed on " + group, "dC" + tag + "_{1,3} = 0 on NG(1)", opts.count,
                           form_max_abs(d.at({1, 0, 4}), sampler, opts, "chern-d"), s.tol_fd));

    auto cross = [&](int sign) { return form_max_abs(layers(sign).at({2, 0, 3}), sampler, opts, "chern-cross"); };
    ResidualReport r = make_row("C13" + tag + " against C22" + tag + " on " + group,
                                "d'C" + tag + "_{1,3} + d''C" + tag + "_{2,2} = 0 on NG(2)", opts.count, cross(frozen),
                                s.tol_fd);
    attach_sign(r, probe_sign(su ? "chern_cross" : "chern_cross_u", frozen, s.tol_fd, cross));
    r.control_residual =
        form_max_abs(d_horizontal(ctx, {1, 0, 3}, trace_cubed_form(ctx.level(1))), sampler, opts, "chern-cross");
    r.note = r.note.empty() ? "control drops the C22 layer" : r.note + "; control drops the C22 layer";
    out.push_back(std::move(r));

    out.push_back(make_row("C22" + tag + " is a simplicial cocycle on " + group,
                           "d'C" + tag + "_{2,2} = (e0* - e1* + e2* - e3*) C" + tag + "_{2,2} = 0 on NG(3)", opts.count,
                           form_max_abs(d.at({3, 0, 2}), sampler, opts, "chern-dd"), s.tol_algebraic));
    return out;
}

std::vector<ResidualReport> simplicial_identities_check(const NerveContext& ctx, int max_level, const CheckSettings& s) {
    const ProbeOptions& opts = s.probes;
    auto gap = [&](const SmoothMap& a, const SmoothMap& b, std::string_view stream) {
        return probe_max(opts, stream, [&](Rng& rng) {
            const GroupPoint p = sample_point(a.source, rng);
            const TangentVector v = sample_tangent(p, rng);
            return std::max(max_abs_difference(a.apply(p), b.apply(p)), max_abs_difference(a.push(p, v), b.push(p, v)));
        });
    };
    using D = FaceDirection;
    auto face = [&](int p, int q, D dir, int i) { return face_map(ctx, p, q, dir, i); };
    std::vector<ResidualReport> out;

    double h = 0;
    for (int p = 2; p <= max_level; ++p)
        for (int j = 1; j <= p; ++j)
            for (int i = 0; i < j; ++i)
                h = std::max(h, gap(compose(face(p - 1, 0, D::Horizontal, i), face(p, 0, D::Horizontal, j)),
                                    compose(face(p - 1, 0, D::Horizontal, j - 1), face(p, 0, D::Horizontal, i)), "simp-h"));
    out.push_back(make_row("horizontal simplicial identities, p <= " + std::to_string(max_level),
                           "e_i e_j = e_{j-1} e_i for i < j, values and differentials", opts.count, h, s.tol_exact));
    if (!ctx.bisimplicial()) return out;

    double v = 0, m = 0;
    for (int q = 2; q <= max_level; ++q)
        for (int j = 1; j <= q; ++j)
            for (int i = 0; i < j; ++i)
                v = std::max(v, gap(compose(face(1, q - 1, D::Vertical, i), face(1, q, D::Vertical, j)),
                                    compose(face(1, q - 1, D::Vertical, j - 1), face(1, q, D::Vertical, i)), "simp-v"));
    for (int p = 1; p <= max_level; ++p)
        for (int q = 1; q <= max_level; ++q)
            for (int i = 0; i <= p; ++i)
                for (int j = 0; j <= q; ++j)
                    m = std::max(m, gap(compose(face(p, q - 1, D::Horizontal, i), face(p, q, D::Vertical, j)),
                                        compose(face(p - 1, q, D::Vertical, j), face(p, q, D::Horizontal, i)), "simp-m"));
    out.push_back(make_row("circle-direction simplicial identities, q <= " + std::to_string(max_level),
                           "e^{S1}_i e^{S1}_j = e^{S1}_{j-1} e^{S1}_i for i < j, last face (z_q g z_q^{-1}, z_1..z_{q-1})",
                           opts.count, v, s.tol_exact));
    out.push_back(make_row("horizontal and circle faces commute, p, q <= " + std::to_string(max_level),
                           "e_i e^{S1}_j = e^{S1}_j e_i on G^p x (S1)^q", opts.count, m, s.tol_exact));
    return out;
}

std::vector<ResidualReport> differential_squares_check(const NerveContext& ctx, const CheckSettings& s) {
    Rng rng = make_stream(s.probes.seed, "dd-cochain", 0);
    TotalCochain c(ctx);
    c.set({1, 0, 1}, random_form(ctx.level(1, 0), 1, rng));
    c.set({2, 0, 0}, random_form(ctx.level(2, 0), 0, rng));
    if (ctx.bisimplicial()) {
        c.set({0, 1, 1}, random_form(ctx.level(0, 1), 1, rng));
        c.set({1, 1, 0}, random_form(ctx.level(1, 1), 0, rng));
    }
    const TotalCochain dd = total_differential(total_differential(c, s.nested, s.nested), s.nested, s.nested);
    auto rows = check_zero(dd, group_sampler(), s.probes, {s.tol_exact, s.tol_fd}, "dd");
    for (auto& r : rows) {
        r.anchor = "D o D = 0 with D = d' + d'' + d''', " + r.identity;
        r.identity = "D squared, " + r.identity;
    }
    return rows;
}

}  // namespace sdr
