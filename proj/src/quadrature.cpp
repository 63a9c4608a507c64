#include "sdr/quadrature.hpp"

#include "sdr/summation.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <thread>

namespace sdr {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k - 1, k) = b;
        jacobi(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    GaussRule r;
    for (int k = 0; k < n; ++k) {
        r.nodes.push_back(eig.eigenvalues()(k));
        const double v = eig.eigenvectors()(0, k);
        r.weights.push_back(2.0 * v * v);
    }
    return r;
}

namespace {

struct AxisNodes {
    std::vector<double> x;
    std::vector<double> w;
};

AxisNodes axis_nodes(const QuadratureAxis& a) {
    if (a.nodes < 1) throw std::invalid_argument("quadrature: axis needs nodes");
    AxisNodes out;
    const double len = a.hi - a.lo;
    if (a.rule == QuadratureAxis::Rule::Trapezoid) {
        for (int j = 0; j < a.nodes; ++j) {
            out.x.push_back(a.lo + len * j / a.nodes);
            out.w.push_back(len / a.nodes);
        }
        return out;
    }
    const GaussRule g = gauss_legendre(a.nodes);
    for (int j = 0; j < a.nodes; ++j) {
        out.x.push_back(a.lo + 0.5 * len * (g.nodes[j] + 1.0));
        out.w.push_back(0.5 * len * g.weights[j]);
    }
    return out;
}

const GroupSpec& su2_spec() {
    static const GroupSpec s{GroupKind::SU2};
    return s;
}

Mat su2_exp(int k, double a) {
    return Complex(std::cos(a / 2)) * Mat::Identity(2, 2) + kI * std::sin(a / 2) * pauli<double>(k);
}

}  // namespace

Complex tensor_quadrature(const DifferentialForm& w, const ChartMap& chart, std::span<const QuadratureAxis> axes,
                          int workers) {
    if (w.degree != static_cast<int>(axes.size()))
        throw std::invalid_argument("quadrature: form degree does not match the number of axes");
    if (w.domain.size() != 1 || w.domain.has_loops())
        throw std::invalid_argument("quadrature: forms on a single matrix group only");
    std::vector<AxisNodes> nodes;
    std::size_t total = 1;
    for (const auto& a : axes) {
        nodes.push_back(axis_nodes(a));
        total *= nodes.back().x.size();
    }
    std::vector<Complex> terms(total);
    auto run = [&](std::size_t begin, std::size_t step) {
        std::vector<double> u(axes.size());
        std::vector<TangentVector> v(axes.size());
        for (std::size_t idx = begin; idx < total; idx += step) {
            std::size_t rest = idx;
            double weight = 1;
            for (std::size_t a = axes.size(); a-- > 0;) {
                const std::size_t n = nodes[a].x.size();
                u[a] = nodes[a].x[rest % n];
                weight *= nodes[a].w[rest % n];
                rest /= n;
            }
            const ChartSample c = chart(u);
            const GroupPoint p{w.domain, {FactorValue(c.value)}};
            for (std::size_t a = 0; a < axes.size(); ++a) v[a] = TangentVector{{FactorValue(c.partials[a])}};
            terms[idx] = weight * w(p, v);
        }
    };
    const std::size_t nw = static_cast<std::size_t>(std::clamp(workers, 1, 64));
    if (nw == 1) {
        run(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < nw; ++k) pool.emplace_back(run, k, nw);
        for (auto& t : pool) t.join();
    }
    return pairwise_sum<Complex>(terms);
}

ChartSample euler_chart(double phi, double theta, double psi) {
    const Mat a = su2_exp(3, phi), b = su2_exp(2, theta), c = su2_exp(3, psi);
    const Mat h3 = 0.5 * kI * pauli<double>(3), h2 = 0.5 * kI * pauli<double>(2);
    const Mat g = a * b * c;
    return {g, {h3 * g, a * h2 * b * c, g * h3}};
}

ChartSample hopf_chart(double xi1, double eta, double xi2) {
    auto mat = [](Complex a, Complex b) {
        Mat m(2, 2);
        m << a, -std::conj(b), b, std::conj(a);
        return m;
    };
    const Complex e1 = std::polar(1.0, xi1), e2 = std::polar(1.0, xi2);
    const Complex a = std::cos(eta) * e1, b = std::sin(eta) * e2;
    return {mat(a, b), {mat(kI * a, 0.0), mat(-std::sin(eta) * e1, std::cos(eta) * e2), mat(0.0, kI * b)}};
}

ChartMap ChartGrid::chart() const {
    const ChartKind k = kind;
    const Mat h = left;
    return [k, h](std::span<const double> u) {
        ChartSample c = k == ChartKind::Euler ? euler_chart(u[0], u[1], u[2]) : hopf_chart(u[0], u[1], u[2]);
        c.value = h * c.value;
        for (auto& p : c.partials) p = h * p;
        return c;
    };
}

std::vector<QuadratureAxis> ChartGrid::axes() const {
    using R = QuadratureAxis::Rule;
    if (kind == ChartKind::Euler)
        return {{R::Trapezoid, 0, 2 * kPi, nodes[0]}, {R::GaussLegendre, 0, kPi, nodes[1]},
                {R::Trapezoid, 0, 4 * kPi, nodes[2]}};
    return {{R::Trapezoid, 0, 2 * kPi, nodes[0]}, {R::GaussLegendre, 0, kPi / 2, nodes[1]},
            {R::Trapezoid, 0, 2 * kPi, nodes[2]}};
}

namespace {

int scale_nodes(int n, double f) { return std::max(2, static_cast<int>(std::lround(n * f))); }

}  // namespace

ChartGrid ChartGrid::scaled(double factor) const {
    ChartGrid g = *this;
    for (auto& n : g.nodes) n = scale_nodes(n, factor);
    return g;
}

QuadratureResult integrate_top_form_su2(const DifferentialForm& w, const ChartGrid& grid,
                                        const QuadratureSettings& q) {
    if (w.degree != 3 || !(w.domain == su2_spec())) throw std::invalid_argument("integrate_top_form_su2: needs a 3-form on SU(2)");
    const ChartGrid coarse = grid.scaled(0.5);
    const Complex fine_value = tensor_quadrature(w, grid.chart(), grid.axes(), q.workers);
    const Complex coarse_value = tensor_quadrature(w, coarse.chart(), coarse.axes(), q.workers);
    QuadratureResult r{fine_value, std::abs(fine_value - coarse_value)};
    if (!(r.estimate <= 10 * q.tol))
        throw QuadratureError("integrate_top_form_su2: resolutions disagree by " + std::to_string(r.estimate));
    return r;
}

Sheet operator*(const Sheet& a, const Sheet& b) {
    if (a.interval_dims != b.interval_dims) throw std::invalid_argument("Sheet: dimension mismatch");
    return {a.interval_dims, [a, b](std::span<const double> u) {
                const ChartSample x = a(u), y = b(u);
                ChartSample r{x.value * y.value, {}};
                for (std::size_t k = 0; k < x.partials.size(); ++k)
                    r.partials.push_back(x.partials[k] * y.value + x.value * y.partials[k]);
                return r;
            }};
}

CylinderGrid CylinderGrid::scaled(double factor) const {
    return {scale_nodes(interval_nodes, factor), scale_nodes(circle_nodes, factor)};
}

namespace {

std::vector<QuadratureAxis> cylinder_axes(int interval_dims, const CylinderGrid& g) {
    using R = QuadratureAxis::Rule;
    std::vector<QuadratureAxis> axes(static_cast<std::size_t>(interval_dims), {R::GaussLegendre, 0, 1, g.interval_nodes});
    axes.push_back({R::Trapezoid, 0, 2 * kPi, g.circle_nodes});
    return axes;
}

}  // namespace

QuadratureResult integrate_form_over_cylinder(const Sheet& sheet, const DifferentialForm& w, const CylinderGrid& grid,
                                              const QuadratureSettings& q) {
    if (w.degree != sheet.interval_dims + 1)
        throw std::invalid_argument("integrate_form_over_cylinder: form degree must equal the sheet dimension");
    const ChartMap chart = sheet.eval;
    const Complex fine = tensor_quadrature(w, chart, cylinder_axes(sheet.interval_dims, grid), q.workers);
    const Complex coarse = tensor_quadrature(w, chart, cylinder_axes(sheet.interval_dims, grid.scaled(0.5)), q.workers);
    QuadratureResult r{fine, std::abs(fine - coarse)};
    if (!(r.estimate <= 10 * q.tol))
        throw QuadratureError("integrate_form_over_cylinder: resolutions disagree by " + std::to_string(r.estimate));
    return r;
}

namespace {

// base prod_k exp(e_k B_k) with the partials of the exponents along each axis
ChartSample exponential_product(const Mat& base, const std::vector<Mat>& gens, const std::vector<double>& e,
                                const std::vector<std::vector<double>>& grad) {
    const std::size_t m = gens.size();
    const std::size_t dims = m ? grad.front().size() : 0;
    std::vector<Mat> f;
    for (std::size_t k = 0; k < m; ++k) f.push_back(expm<double>(e[k] * gens[k]));
    ChartSample out{base, {}};
    for (const Mat& x : f) out.value = out.value * x;
    for (std::size_t a = 0; a < dims; ++a) {
        Mat sum = Mat::Zero(2, 2);
        for (std::size_t k = 0; k < m; ++k) {
            Mat term = base;
            for (std::size_t l = 0; l < m; ++l) term = term * (l == k ? Mat(grad[k][a] * gens[k] * f[k]) : f[l]);
            sum += term;
        }
        out.partials.push_back(sum);
    }
    return out;
}

}  // namespace

ChartSample ExponentialHomotopy::at(double s, double t, double z) const {
    std::vector<double> e;
    std::vector<std::vector<double>> grad;
    const double bump = t * (1 - t);
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const double c = (1 - s) * from[k].value(z) + s * to[k].value(z);
        const double dc = (1 - s) * from[k].derivative(z) + s * to[k].derivative(z);
        e.push_back(t * along[k].value(z) + bump * c);
        grad.push_back({bump * (to[k].value(z) - from[k].value(z)), along[k].value(z) + (1 - 2 * t) * c,
                        t * along[k].derivative(z) + bump * dc});
    }
    return exponential_product(base, generators, e, grad);
}

Sheet ExponentialHomotopy::sheet() const {
    return {2, [h = *this](std::span<const double> u) { return h.at(u[0], u[1], u[2]); }};
}

Sheet ExponentialHomotopy::path(int end) const {
    return {1, [h = *this, s = double(end)](std::span<const double> u) {
                ChartSample c = h.at(s, u[0], u[1]);
                c.partials.erase(c.partials.begin());
                return c;
            }};
}

ExponentialHomotopy ExponentialHomotopy::random(Rng& rng, int band, double scale) {
    ExponentialHomotopy h;
    h.base = sample_factor(GroupKind::SU2, rng);
    h.generators = algebra_basis(GroupKind::SU2);
    for (std::size_t k = 0; k < h.generators.size(); ++k) {
        h.along.push_back(TrigPolynomial::random(rng, band, scale));
        h.from.push_back(TrigPolynomial::random(rng, band, scale));
        h.to.push_back(TrigPolynomial::random(rng, band, scale));
    }
    return h;
}

Sheet bump_sheet(const std::vector<BumpProfile>& profiles) {
    const std::vector<Mat> gens = algebra_basis(GroupKind::SU2);
    if (profiles.size() != gens.size()) throw std::invalid_argument("bump_sheet: one profile per generator");
    return {2, [gens, profiles](std::span<const double> u) {
                const double s = u[0], t = u[1], z = u[2];
                const double st = 16 * s * (1 - s) * t * (1 - t);
                const double ds = 16 * (1 - 2 * s) * t * (1 - t), dt = 16 * s * (1 - s) * (1 - 2 * t);
                std::vector<double> e;
                std::vector<std::vector<double>> grad;
                for (const auto& p : profiles) {
                    const auto [a, b, c] = p.affine;
                    const double l = a + b * s + c * t, hz = p.h.value(z);
                    e.push_back(st * l * hz);
                    grad.push_back({(ds * l + st * b) * hz, (dt * l + st * c) * hz, st * l * p.h.derivative(z)});
                }
                return exponential_product(Mat::Identity(2, 2), gens, e, grad);
            }};
}

Sheet random_bump_sheet(Rng& rng, double scale) {
    std::vector<BumpProfile> p;
    for (int k = 0; k < 3; ++k)
        p.push_back({TrigPolynomial::random(rng, 2, scale), {1 + 0.5 * rng.normal(), rng.normal(), rng.normal()}});
    return bump_sheet(p);
}

Sheet wrap_sheet(double radius) {
    constexpr double c = 128.0 / 315.0;
    auto profile = [](double u) {
        const double u2 = u * u;
        return u * (1 - u2 * (4.0 / 3 - u2 * (6.0 / 5 - u2 * (4.0 / 7 - u2 / 9)))) / c;
    };
    auto profile_rate = [](double u) { return std::pow(1 - u * u, 4) / c; };
    return {2, [=](std::span<const double> u) {
                const std::array<double, 3> x{u[0] - 0.5, u[1] - 0.5, (u[2] - kPi) / (2 * kPi)};
                const std::array<double, 3> chain{1, 1, 1 / (2 * kPi)};
                const double r = std::hypot(x[0], x[1], x[2]);
                ChartSample out{Mat::Identity(2, 2), std::vector<Mat>(3, Mat::Zero(2, 2))};
                if (r >= radius) return out;
                const Mat id = Mat::Identity(2, 2);
                if (r < 1e-12) {
                    out.value = -id;
                    for (int j = 0; j < 3; ++j)
                        out.partials[j] = -kI * (kPi * profile_rate(0) / radius * chain[j]) * pauli<double>(j + 1);
                    return out;
                }
                const double a = kPi * profile(r / radius);
                const double da = kPi * profile_rate(r / radius) / radius;
                const double sr = std::sin(a) / r;
                const double dsr = (std::cos(a) * da * r - std::sin(a)) / (r * r);
                Mat xs = Mat::Zero(2, 2);
                for (int j = 0; j < 3; ++j) xs += x[j] * pauli<double>(j + 1);
                out.value = -(Complex(std::cos(a)) * id + kI * sr * xs);
                for (int j = 0; j < 3; ++j) {
                    const double dcos = -std::sin(a) * da * x[j] / r;
                    const Mat d = Complex(dcos) * id + kI * (sr * pauli<double>(j + 1) + (dsr * x[j] / r) * xs);
                    out.partials[j] = -chain[j] * d;
                }
                return out;
            }};
}

namespace {

double boundary_gap(const Sheet& sigma, const Sheet& sigma2, const Sheet& f) {
    double gap = 0;
    auto diff = [&](const Mat& a, const Mat& b) { gap = std::max(gap, (a - b).cwiseAbs().maxCoeff()); };
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const double a = i / 8.0, z = 2 * kPi * j / 8;
            const std::array<double, 2> tz{a, z};
            diff(f(std::array{0.0, a, z}).value, sigma(tz).value);
            diff(f(std::array{1.0, a, z}).value, sigma2(tz).value);
            diff(f(std::array{a, 0.0, z}).value, sigma(std::array{0.0, z}).value);
            diff(f(std::array{a, 1.0, z}).value, sigma(std::array{1.0, z}).value);
            diff(sigma(std::array{0.0, z}).value, sigma2(std::array{0.0, z}).value);
            diff(sigma(std::array{1.0, z}).value, sigma2(std::array{1.0, z}).value);
        }
    return gap;
}

}  // namespace

IntegralityResult homotopy_integrality_check(const Sheet& sigma, const Sheet& sigma2, const Sheet& f,
                                             const Sheet& f2, const std::optional<Sheet>& wrap,
                                             const CylinderGrid& grid, const QuadratureSettings& q) {
    if (sigma.interval_dims != 1 || sigma2.interval_dims != 1 || f.interval_dims != 2 || f2.interval_dims != 2)
        throw std::invalid_argument("homotopy_integrality_check: paths are I x S^1, homotopies I^2 x S^1");
    const Sheet g = wrap ? f2 * *wrap : f2;
    if (boundary_gap(sigma, sigma2, f) > 1e-12 || boundary_gap(sigma, sigma2, g) > 1e-12)
        throw std::invalid_argument("homotopy_integrality_check: sheets do not share boundary conditions");
    const DifferentialForm nu = trace_cubed_form(su2_spec());
    IntegralityResult r;
    r.difference = integrate_form_over_cylinder(f, nu, grid, q).value - integrate_form_over_cylinder(g, nu, grid, q).value;
    r.integer = std::lround(r.difference.real());
    r.distance = std::abs(r.difference - Complex(double(r.integer)));
    return r;
}

namespace {

ResidualReport row(std::string identity, std::string anchor, int probes, double residual, double tolerance,
                   std::string note = {}) {
    ResidualReport r;
    r.identity = std::move(identity);
    r.anchor = std::move(anchor);
    r.probes = probes;
    r.max_residual = residual;
    r.tolerance = tolerance;
    r.note = std::move(note);
    return r;
}

std::string fixed(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%+.12f", x);
    return buf;
}

}  // namespace

std::vector<ResidualReport> integrality_check(const CheckSettings& s, const IntegralitySettings& q) {
    const DifferentialForm nu = trace_cubed_form(su2_spec());
    std::vector<ResidualReport> out;
    // Every quadrature row is a single deterministic evaluation, reported as one probe.
    auto guarded = [&](const std::string& identity, const std::string& anchor, double tol, auto&& compute) {
        try {
            auto [residual, note] = compute();
            out.push_back(row(identity, anchor, 1, residual, tol, note));
        } catch (const QuadratureError& e) {
            out.push_back(row(identity, anchor, 1, std::numeric_limits<double>::infinity(), tol, e.what()));
        }
    };

    Complex euler{};
    guarded("|int_SU(2) C13| = 1", "nu = C13 is a closed integral form, Euler chart", q.tol_integer, [&] {
        euler = integrate_top_form_su2(nu, q.su2, q.quad).value;
        return std::pair{std::abs(std::abs(euler) - 1.0),
                         "value " + fixed(euler.real()) + ", orientation from the axis order (phi, theta, psi)"};
    });
    guarded("two charts agree on int C13", "Euler chart against Hopf chart", q.tol_charts, [&] {
        ChartGrid hopf = q.su2;
        hopf.kind = ChartKind::Hopf;
        const Complex h = integrate_top_form_su2(nu, hopf, q.quad).value;
        return std::pair{std::abs(h - euler), "Hopf " + fixed(h.real())};
    });
    guarded("int C13 is invariant under left translation of the chart", "Haar invariance of nu", q.tol_integer, [&] {
        Rng rng = make_stream(s.probes.seed, "quad-translate", 0);
        ChartGrid moved = q.su2;
        moved.left = sample_factor(GroupKind::SU2, rng);
        const Complex v = integrate_top_form_su2(nu, moved, q.quad).value;
        return std::pair{std::abs(v - euler), std::string{}};
    });
    guarded("exact 3-form integrates to zero", "int_SU(2) d beta = 0, beta a random smooth 2-form", q.tol_integer, [&] {
        Rng rng = make_stream(s.probes.seed, "quad-exact", 0);
        const DifferentialForm db = exterior_derivative(random_form(su2_spec(), 2, rng), s.derivative);
        ChartGrid g = q.su2;
        return std::pair{std::abs(integrate_top_form_su2(db, g, q.quad).value), std::string{}};
    });

    Rng rng = make_stream(s.probes.seed, "quad-homotopy", 0);
    const ExponentialHomotopy h = ExponentialHomotopy::random(rng, 3);
    const Sheet sigma = h.path(0), sigma2 = h.path(1), f = h.sheet();
    guarded("null-homotopic perturbation gives integer 0",
            "int F^* nu - int (F b)^* nu, b a bump vanishing on the boundary", q.tol_homotopy, [&] {
                const Sheet b = random_bump_sheet(rng);
                const IntegralityResult r = homotopy_integrality_check(sigma, sigma2, f, f * b, std::nullopt, q.cylinder, q.quad);
                return std::pair{std::abs(r.difference),
                                 "difference " + fixed(r.difference.real()) + ", integer " + std::to_string(r.integer)};
            });
    Complex wrap_degree{};
    guarded("wrap-inserted sheet gives integer +-1", "int F^* nu - int (F W)^* nu, W of degree 1", q.tol_homotopy, [&] {
        const IntegralityResult r = homotopy_integrality_check(sigma, sigma2, f, f, wrap_sheet(), q.cylinder, q.quad);
        return std::pair{std::abs(std::abs(r.difference) - 1.0),
                         "difference " + fixed(r.difference.real()) + ", integer " + std::to_string(r.integer)};
    });
    guarded("degree of the wrap against the SU(2) volume", "|int W^* nu| = |int_SU(2) nu|", q.tol_homotopy, [&] {
        wrap_degree = integrate_form_over_cylinder(wrap_sheet(), nu, q.cylinder, q.quad).value;
        return std::pair{std::abs(std::abs(wrap_degree) - std::abs(euler)), "int W^* nu " + fixed(wrap_degree.real())};
    });
    guarded("cylinder quadrature under doubling", "band-limited sheet, all resolutions doubled", q.tol_doubling, [&] {
        const std::vector<QuadratureAxis> a = cylinder_axes(2, q.cylinder), b = cylinder_axes(2, q.cylinder.scaled(2));
        const Complex x = tensor_quadrature(nu, f.eval, a, q.quad.workers);
        const Complex y = tensor_quadrature(nu, f.eval, b, q.quad.workers);
        return std::pair{std::abs(x - y), "value " + fixed(x.real())};
    });
    return out;
}

}  // namespace sdr
