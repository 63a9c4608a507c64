#include "doctest.h"

#include "sdr/quadrature.hpp"
#include "sdr/summation.hpp"

#include <cmath>

using namespace sdr;

namespace {

const GroupSpec kSU2{GroupKind::SU2};

const DifferentialForm& nu() {
    static const DifferentialForm w = trace_cubed_form(kSU2);
    return w;
}

std::vector<QuadratureAxis> cylinder(int n, int m) {
    using R = QuadratureAxis::Rule;
    return {{R::GaussLegendre, 0, 1, n}, {R::GaussLegendre, 0, 1, n}, {R::Trapezoid, 0, 2 * kPi, m}};
}

Complex value_of(const ChartSample& c) {
    std::vector<TangentVector> v;
    for (const auto& p : c.partials) v.push_back(TangentVector{{FactorValue(p)}});
    return nu()(GroupPoint{kSU2, {FactorValue(c.value)}}, v);
}

double partials_vs_fd(const std::function<ChartSample(std::array<double, 3>)>& f, std::array<double, 3> u) {
    const double h = 1e-6;
    const ChartSample c = f(u);
    double worst = 0;
    for (int a = 0; a < 3; ++a) {
        auto up = u, dn = u;
        up[a] += h;
        dn[a] -= h;
        const Mat fd = (f(up).value - f(dn).value) / (2 * h);
        worst = std::max(worst, (fd - c.partials[a]).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n - 1 exactly") {
    for (int n : {1, 2, 5, 12, 40}) {
        const GaussRule g = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double sum = 0;
            for (int j = 0; j < n; ++j) sum += g.weights[j] * std::pow(g.nodes[j], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CHECK(std::abs(sum - exact) < 1e-13);
        }
    }
    // three-point rule in closed form
    const GaussRule g = gauss_legendre(3);
    CHECK(std::abs(g.nodes[2] - std::sqrt(0.6)) < 1e-15);
    CHECK(std::abs(g.weights[1] - 8.0 / 9) < 1e-15);
    CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("pairwise summation matches a compensated sum") {
    std::vector<double> x;
    for (int i = 0; i < 100000; ++i) x.push_back(1.0 / (1 + i % 7) + 1e-8 * i);
    double kahan = 0, comp = 0;
    for (double v : x) {
        const double y = v - comp, t = kahan + y;
        comp = (t - kahan) - y;
        kahan = t;
    }
    CHECK(std::abs(pairwise_sum<double>(x) - kahan) < 1e-9);
}

TEST_CASE("chart and sheet partials against central differences") {
    CHECK(partials_vs_fd([](auto u) { return euler_chart(u[0], u[1], u[2]); }, {0.3, 1.1, 2.0}) < 1e-9);
    CHECK(partials_vs_fd([](auto u) { return hopf_chart(u[0], u[1], u[2]); }, {0.3, 1.1, 2.0}) < 1e-9);
    Rng rng(4);
    const ExponentialHomotopy h = ExponentialHomotopy::random(rng, 3);
    const Sheet f = h.sheet(), b = random_bump_sheet(rng, 1.0), w = wrap_sheet();
    const Sheet fw = f * w;
    for (const Sheet* s : {&f, &b, &fw})
        CHECK(partials_vs_fd([s](auto u) { return (*s)(u); }, {0.4, 0.55, 3.3}) < 1e-8);
    // near the centre of the wrap ball and outside it
    CHECK(partials_vs_fd([&](auto u) { return w(u); }, {0.5001, 0.4999, kPi + 0.0003}) < 1e-8);
    CHECK(partials_vs_fd([&](auto u) { return w(u); }, {0.02, 0.5, 1.0}) < 1e-12);
}

TEST_CASE("nu on the Pauli frame is the inverse volume of the unit three-sphere") {
    // exp(t i sigma_k) has unit speed in R^4, and vol(S^3) = 2 pi^2
    const Mat id = Mat::Identity(2, 2);
    const ChartSample frame{id, {kI * pauli<double>(1), kI * pauli<double>(2), kI * pauli<double>(3)}};
    CHECK(std::abs(value_of(frame) - 1.0 / (2 * kPi * kPi)) < 1e-15);
}

TEST_CASE("top forms over SU(2)") {
    const ChartGrid euler;
    CHECK(euler.nodes[0] * euler.nodes[1] * euler.nodes[2] >= 48 * 48 * 48);
    CHECK(std::abs(integrate_top_form_su2(zero_form(kSU2, 3), euler).value) == 0.0);
    const Complex e = integrate_top_form_su2(nu(), euler).value;
    CHECK(std::abs(std::abs(e) - 1.0) < 1e-3);
    CHECK(std::abs(e.imag()) < 1e-12);
    ChartGrid hopf;
    hopf.kind = ChartKind::Hopf;
    CHECK(std::abs(integrate_top_form_su2(nu(), hopf).value - e) < 1e-4);
    Rng rng(9);
    ChartGrid moved;
    moved.left = sample_factor(GroupKind::SU2, rng);
    CHECK(std::abs(integrate_top_form_su2(nu(), moved).value - e) < 1e-3);
    const DifferentialForm db = exterior_derivative(random_form(kSU2, 2, rng), {1e-4, true});
    CHECK(std::abs(integrate_top_form_su2(db, ChartGrid{}.scaled(0.5)).value) < 1e-3);
    CHECK_THROWS_AS(integrate_top_form_su2(chern_c22(ChernVariant::SU), euler), std::invalid_argument);
}

TEST_CASE("cylinder integrals of degenerate sheets vanish") {
    const Sheet constant{2, [](std::span<const double>) {
                             return ChartSample{Mat::Identity(2, 2), std::vector<Mat>(3, Mat::Zero(2, 2))};
                         }};
    CHECK(std::abs(integrate_form_over_cylinder(constant, nu()).value) == 0.0);
    Rng rng(2);
    const ExponentialHomotopy h = ExponentialHomotopy::random(rng, 2);
    const Sheet flat{2, [h](std::span<const double> u) {
                         ChartSample c = h.at(u[0], u[1], 0.7);
                         c.partials[2] = Mat::Zero(2, 2);
                         return c;
                     }};
    CHECK(std::abs(integrate_form_over_cylinder(flat, nu()).value) < 1e-15);
    CHECK_THROWS_AS(integrate_form_over_cylinder(h.path(0), nu()), std::invalid_argument);
}

TEST_CASE("band-limited sheets converge under doubling") {
    Rng rng(12);
    const ExponentialHomotopy h = ExponentialHomotopy::random(rng, 4);
    const Complex a = tensor_quadrature(nu(), h.sheet().eval, cylinder(32, 64));
    const Complex b = tensor_quadrature(nu(), h.sheet().eval, cylinder(64, 128));
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("wrap quadrature converges monotonically past the knee") {
    const Sheet w = wrap_sheet();
    const double reference = tensor_quadrature(nu(), w.eval, cylinder(64, 128)).real();
    CHECK(std::abs(std::abs(reference) - 1.0) < 1e-10);
    double previous = std::abs(tensor_quadrature(nu(), w.eval, cylinder(12, 24)).real() - reference);
    for (int n : {16, 24}) {
        const double err = std::abs(tensor_quadrature(nu(), w.eval, cylinder(n, 2 * n)).real() - reference);
        INFO("n = " << n << " error " << err);
        CHECK(previous / err >= 3.0);
        previous = err;
    }
}

TEST_CASE("non-convergence is reported") {
    QuadratureSettings strict;
    strict.tol = 1e-7;
    CHECK_THROWS_AS(integrate_form_over_cylinder(wrap_sheet(), nu(), {8, 16}, strict), QuadratureError);
}

TEST_CASE("homotopy integrality") {
    Rng rng(21);
    const ExponentialHomotopy h = ExponentialHomotopy::random(rng, 3);
    const Sheet s0 = h.path(0), s1 = h.path(1), f = h.sheet();

    const IntegralityResult same = homotopy_integrality_check(s0, s1, f, f, std::nullopt);
    CHECK(same.integer == 0);
    CHECK(std::abs(same.difference) == 0.0);

    const IntegralityResult bump = homotopy_integrality_check(s0, s1, f, f * random_bump_sheet(rng), std::nullopt);
    CHECK(bump.integer == 0);
    CHECK(bump.distance < 1e-2);

    const IntegralityResult wrapped = homotopy_integrality_check(s0, s1, f, f, wrap_sheet());
    CHECK(std::abs(wrapped.integer) == 1);
    CHECK(wrapped.distance < 1e-2);
    // the difference cycle is -W, checked against the SU(2) volume independently
    const Complex degree = integrate_form_over_cylinder(wrap_sheet(), nu()).value;
    const Complex volume = integrate_top_form_su2(nu(), ChartGrid{}).value;
    CHECK(std::abs(wrapped.difference + degree) < 1e-6);
    CHECK(std::abs(std::abs(degree) - std::abs(volume)) < 1e-2);

    // a sheet from another homotopy misses the boundary conditions
    const ExponentialHomotopy other = ExponentialHomotopy::random(rng, 3);
    CHECK_THROWS_AS(homotopy_integrality_check(s0, s1, f, other.sheet(), std::nullopt), std::invalid_argument);
}
