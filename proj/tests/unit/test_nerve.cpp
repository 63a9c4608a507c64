#include "doctest.h"

#include "sdr/nerve.hpp"

#include <cmath>

using namespace sdr;

namespace {

const NerveContext kPlain{FactorSpec{GroupKind::SU2}, std::nullopt};
const NerveContext kBisimplicial{FactorSpec{GroupKind::SU2}, CircleAction::adjoint()};

double map_difference(const SmoothMap& a, const SmoothMap& b, int probes, std::uint64_t seed) {
    double worst = 0;
    for (int i = 0; i < probes; ++i) {
        Rng rng = make_stream(seed, "maps", i);
        const GroupPoint p = sample_point(a.source, rng);
        const TangentVector v = sample_tangent(p, rng);
        worst = std::max(worst, max_abs_difference(a.apply(p), b.apply(p)));
        worst = std::max(worst, max_abs_difference(a.push(p, v), b.push(p, v)));
    }
    return worst;
}

}  // namespace

TEST_CASE("middle face multiplies and pushes by the product rule") {
    const SmoothMap f = face_map(kPlain, 2, 0, FaceDirection::Horizontal, 1);
    Rng rng(1);
    const GroupPoint p = sample_point(f.source, rng);
    CHECK((f.apply(p).mat(0) - p.mat(0) * p.mat(1)).cwiseAbs().maxCoeff() < 1e-15);
    const GroupPoint e = identity_point(f.source);
    const Mat x1 = kI * pauli<double>(1), x2 = kI * pauli<double>(3);
    const TangentVector pushed = f.push(e, make_tangent({x1, x2}));
    CHECK((pushed.mat(0) - (x1 + x2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("simplicial identities hold for horizontal faces") {
    for (int p = 2; p <= 3; ++p)
        for (int j = 1; j <= p; ++j)
            for (int i = 0; i < j; ++i) {
                const SmoothMap lhs = compose(face_map(kPlain, p - 1, 0, FaceDirection::Horizontal, i),
                                              face_map(kPlain, p, 0, FaceDirection::Horizontal, j));
                const SmoothMap rhs = compose(face_map(kPlain, p - 1, 0, FaceDirection::Horizontal, j - 1),
                                              face_map(kPlain, p, 0, FaceDirection::Horizontal, i));
                CHECK(map_difference(lhs, rhs, 100, 10 * p + i) < 1e-12);
            }
}

TEST_CASE("vertical faces satisfy the simplicial identities and commute with horizontal ones") {
    for (int q = 2; q <= 3; ++q)
        for (int j = 1; j <= q; ++j)
            for (int i = 0; i < j; ++i) {
                const SmoothMap lhs = compose(face_map(kBisimplicial, 1, q - 1, FaceDirection::Vertical, i),
                                              face_map(kBisimplicial, 1, q, FaceDirection::Vertical, j));
                const SmoothMap rhs = compose(face_map(kBisimplicial, 1, q - 1, FaceDirection::Vertical, j - 1),
                                              face_map(kBisimplicial, 1, q, FaceDirection::Vertical, i));
                CHECK(map_difference(lhs, rhs, 100, 100 + q) < 1e-12);
            }
    for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q)
            for (int i = 0; i <= p; ++i)
                for (int j = 0; j <= q; ++j) {
                    const SmoothMap hv = compose(face_map(kBisimplicial, p, q - 1, FaceDirection::Horizontal, i),
                                                 face_map(kBisimplicial, p, q, FaceDirection::Vertical, j));
                    const SmoothMap vh = compose(face_map(kBisimplicial, p - 1, q, FaceDirection::Vertical, j),
                                                 face_map(kBisimplicial, p, q, FaceDirection::Horizontal, i));
                    CHECK(map_difference(hv, vh, 30, 1000 + 100 * p + 10 * q + i) < 1e-12);
                }
}

TEST_CASE("last vertical face conjugates and drops the circle") {
    const SmoothMap f = face_map(kBisimplicial, 1, 1, FaceDirection::Vertical, 1);
    Rng rng(2);
    GroupPoint p = sample_point(f.source, rng);
    const Complex z = p.mat(1)(0, 0);
    const Mat e = CircleAction::adjoint().embed(z);
    CHECK((f.apply(p).mat(0) - e * p.mat(0) * e.inverse()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(f.apply(p).size() == 1);
    p.factors[1] = FactorValue(Mat::Identity(1, 1));
    CHECK(max_abs_difference(f.apply(p), face_map(kBisimplicial, 1, 1, FaceDirection::Vertical, 0).apply(p)) < 1e-15);
}

TEST_CASE("degeneracies are sections of the adjacent faces") {
    for (int p = 1; p <= 3; ++p)
        for (int i = 0; i <= p; ++i)
            for (int k : {i, i + 1}) {
                const SmoothMap sd = compose(face_map(kPlain, p + 1, 0, FaceDirection::Horizontal, k),
                                             degeneracy_map(kPlain, p, 0, i));
                CHECK(map_difference(sd, identity_map(kPlain.level(p)), 20, 7 * p + i) < 1e-15);
            }
}

TEST_CASE("d' of a constant") {
    const DifferentialForm c = function_form(kPlain.level(1), [](const GroupPoint&) { return Complex(2.5); });
    const DifferentialForm dc = d_horizontal(kPlain, {1, 0, 0}, c);
    Rng rng(3);
    const GroupPoint p = sample_point(dc.domain, rng);
    CHECK(std::abs(dc(p, {}) - 2.5) < 1e-15);
}

TEST_CASE("d' and d'' square to zero") {
    Rng rng(4);
    const ProbeOptions opts{.seed = 4, .count = 50};
    const DifferentialForm w = random_form(kBisimplicial.level(1, 1), 1, rng);
    const CochainIndex at{1, 1, 1};
    const DifferentialForm hh = d_horizontal(kBisimplicial, {2, 1, 1}, d_horizontal(kBisimplicial, at, w));
    const DifferentialForm vv = d_circle(kBisimplicial, {1, 2, 1}, d_circle(kBisimplicial, at, w));
    const DifferentialForm hv = d_horizontal(kBisimplicial, {1, 2, 1}, d_circle(kBisimplicial, at, w)) +
                                d_circle(kBisimplicial, {2, 1, 1}, d_horizontal(kBisimplicial, at, w));
    CHECK(form_max_abs(hh, group_sampler(), opts, "hh") < 1e-12);
    CHECK(form_max_abs(vv, group_sampler(), opts, "vv") < 1e-12);
    CHECK(form_max_abs(hv, group_sampler(), opts, "hv") < 1e-12);
}

TEST_CASE("total differential squares to zero") {
    Rng rng(5);
    TotalCochain c(kBisimplicial);
    c.set({1, 0, 1}, random_form(kBisimplicial.level(1, 0), 1, rng));
    c.set({0, 1, 1}, random_form(kBisimplicial.level(0, 1), 1, rng));
    c.set({1, 1, 0}, random_form(kBisimplicial.level(1, 1), 0, rng));
    const DerivativeOptions nested{.fd_step = 1e-3, .richardson = true};
    const TotalCochain dd = total_differential(total_differential(c, nested, nested), nested, nested);
    for (const auto& r : check_zero(dd, group_sampler(), {.seed = 5, .count = 30}, {}, "dd")) {
        INFO(r.identity << " " << r.max_residual);
        CHECK(r.max_residual < 1e-6);
    }
}

TEST_CASE("the second Chern cocycle on the nerve of SU(2)") {
    TotalCochain c(kPlain);
    c.set({1, 0, 3}, trace_cubed_form(kPlain.level(1)));
    c.set({2, 0, 2}, chern_c22(ChernVariant::SU));
    for (const auto& r : check_cocycle(c, group_sampler(), {.seed = 6, .count = 50})) {
        INFO(r.identity << " " << r.max_residual);
        CHECK(r.pass());
    }
    // a non-closed perturbation breaks it
    Rng rng(6);
    TotalCochain bad(kPlain);
    bad.set({1, 0, 3}, trace_cubed_form(kPlain.level(1)));
    bad.set({2, 0, 2}, chern_c22(ChernVariant::SU) + random_form(kPlain.level(2), 2, rng));
    double worst = 0;
    for (const auto& r : check_cocycle(bad, group_sampler(), {.seed = 6, .count = 50})) worst = std::max(worst, r.max_residual);
    CHECK(worst > 1e-3);
}

TEST_CASE("cochain layers are validated") {
    TotalCochain c(kPlain);
    CHECK_THROWS(c.set({1, 0, 2}, zero_form(kPlain.level(2), 2)));
    c.set({1, 0, 2}, zero_form(kPlain.level(1), 2));
    CHECK_THROWS(c.set({2, 0, 2}, zero_form(kPlain.level(2), 2)));
    CHECK_THROWS(c.set({0, 1, 2}, zero_form(kPlain.level(0, 1), 2)));
}
