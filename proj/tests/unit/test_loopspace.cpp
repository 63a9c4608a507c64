#include "doctest.h"

#include "sdr/loopspace.hpp"

#include <cmath>

using namespace sdr;

namespace {

const DifferentialForm& c13() {
    static const DifferentialForm w = trace_cubed_form(GroupSpec{GroupKind::SU2});
    return w;
}

GroupPoint loop_point(const FactorValue& f) { return GroupPoint{GroupSpec{loop_of(GroupKind::SU2, int(f.samples()))}, {f}}; }

}  // namespace

TEST_CASE("trig polynomial derivative against central differences") {
    Rng rng(3);
    const TrigPolynomial f = TrigPolynomial::random(rng, 5, 1.0);
    CHECK(f.band() == 5);
    for (double t : {0.0, 0.7, 2.9, 5.5}) {
        const double h = 1e-5;
        CHECK(std::abs(f.derivative(t) - (f.value(t + h) - f.value(t - h)) / (2 * h)) < 1e-8);
    }
    // periodic
    CHECK(std::abs(f.value(0.3) - f.value(0.3 + 2 * kPi)) < 1e-12);
}

TEST_CASE("loop samples stay in SU(2) and carry their exact derivative") {
    Rng rng(5);
    const LoopPath g = LoopPath::random(GroupKind::SU2, rng, 4);
    const FactorValue s = g.sample(16);
    REQUIRE(s.has_rates());
    for (std::size_t j = 0; j < s.samples(); ++j) {
        CHECK((s.values[j].adjoint() * s.values[j] - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(s.values[j].determinant() - 1.0) < 1e-13);
        const double t = 2 * kPi * double(j) / 16, h = 1e-5;
        const Mat fd = (g.value(t + h) - g.value(t - h)) / (2 * h);
        CHECK((fd - s.rates[j]).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("transgression of C13 vanishes on constant loops") {
    Rng rng(8);
    const LoopPath g = LoopPath::constant(GroupKind::SU2, sample_factor(GroupKind::SU2, rng));
    const FactorValue s = g.sample(32);
    const LoopTangent u = LoopTangent::random(GroupKind::SU2, rng, 3), v = LoopTangent::random(GroupKind::SU2, rng, 3);
    const DifferentialForm t = transgress(c13(), 32);
    CHECK(std::abs(t(loop_point(s), {TangentVector{{u.sample(s)}}, TangentVector{{v.sample(s)}}})) < 1e-15);
}

TEST_CASE("transgression on a one-parameter loop against a hand-summed trapezoid rule") {
    // gamma = g0 exp(f B): gamma^{-1} gamma' = f' B, so the integrand is
    // tr(f'B A_u A_v) - tr(f'B A_v A_u) times the C13 normalization
    Rng rng(11);
    const LoopPath g = LoopPath::one_parameter(GroupKind::SU2, rng, 3);
    const LoopTangent u = LoopTangent::random(GroupKind::SU2, rng, 3), v = LoopTangent::random(GroupKind::SU2, rng, 3);
    const int n = 48;
    const FactorValue s = g.sample(n);
    const Complex got = transgress(c13(), n)(loop_point(s), {TangentVector{{u.sample(s)}}, TangentVector{{v.sample(s)}}});
    Complex want = 0;
    for (int j = 0; j < n; ++j) {
        const double t = 2 * kPi * j / n;
        const Mat x = g.exponents[0].derivative(t) * g.generators[0];
        const Mat a = u.algebra(t), b = v.algebra(t);
        want += (2 * kPi / n) * 3.0 * (x * a * b - x * b * a).trace();
    }
    want *= 1.0 / (24 * kPi * kPi);
    CHECK(std::abs(got - want) < 1e-13);
}

TEST_CASE("transgressed forms are multilinear and alternating") {
    const ProbeSampler sampler = loop_sampler(3);
    const DifferentialForm t = transgress(c13(), 32);
    const GroupSpec spec = t.domain;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        Rng rng = make_stream(4, "alt", i);
        const GroupPoint p = sampler.point(spec, rng);
        const TangentVector u = sampler.tangent(p, rng), v = sampler.tangent(p, rng), w = sampler.tangent(p, rng);
        worst = std::max(worst, std::abs(t(p, {u, v}) + t(p, {v, u})));
        worst = std::max(worst, std::abs(t(p, {u + 2.0 * w, v}) - t(p, {u, v}) - 2.0 * t(p, {w, v})));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("grid mismatch is rejected") {
    Rng rng(2);
    const FactorValue s = LoopPath::random(GroupKind::SU2, rng, 2).sample(16);
    const DifferentialForm t = transgress(c13(), 32);
    const TangentVector u{{LoopTangent::random(GroupKind::SU2, rng, 2).sample(s)}};
    CHECK_THROWS_AS(t(loop_point(s), {u, u}), std::invalid_argument);
    CHECK_THROWS_AS(loop_spec(GroupSpec{loop_of(GroupKind::SU2, 8)}, 8), std::invalid_argument);
}

TEST_CASE("semidirect loop faces conjugate every sample") {
    const SmoothMap f = semidirect_loop_faces(8, 1, 1, FaceDirection::Vertical, 1);
    Rng rng(6);
    const GroupPoint p = loop_sampler(2).point(f.source, rng);
    const Complex z = p.factors[1].values.front()(0, 0);
    const GroupPoint q = f.apply(p);
    double worst = 0;
    for (std::size_t j = 0; j < 8; ++j) {
        const Mat e = CircleAction::adjoint().act(z, GroupPoint{GroupSpec{GroupKind::SU2}, {FactorValue(p.factors[0].values[j])}}).mat(0);
        worst = std::max(worst, (q.factors[0].values[j] - e).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-14);
}

TEST_CASE("loop nerve cocycle identities and quadrature convergence") {
    CheckSettings s;
    s.probes.count = 20;
    for (const auto& r : loop_nerve_cocycle_check(s, {})) {
        INFO(r.identity << " residual " << r.max_residual);
        CHECK(r.ok());
        CHECK(r.pass());
    }
    for (const auto& r : transgression_quadrature_check(s, {})) {
        INFO(r.identity << " residual " << r.max_residual);
        CHECK(r.pass());
    }
}

TEST_CASE("dropping the C22 layer breaks identity (ii)") {
    CheckSettings s;
    s.probes.count = 10;
    const auto rows = loop_nerve_cocycle_check(s, {});
    REQUIRE(rows[1].control_residual);
    CHECK(*rows[1].control_residual > 1e-2);
    CHECK(rows[1].signs.size() == 1);
    CHECK(rows[1].signs[0].probed == signs::kLoopCross);
}
