#pragma once

// Tensor-product quadrature of pulled-back forms: top forms over SU(2) in two
// charts, and forms over cylinders I^a x S^1 swept by closed-form sheets.
// Gauss-Legendre on intervals, the trapezoid rule on periodic axes, exact
// chart partials, pairwise summation.

#include "sdr/loopspace.hpp"

#include <array>
#include <stdexcept>

namespace sdr {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point rule on [-1, 1] from the Jacobi matrix eigenproblem.
GaussRule gauss_legendre(int n);

struct QuadratureAxis {
    enum class Rule { GaussLegendre, Trapezoid };
    Rule rule = Rule::GaussLegendre;
    double lo = 0;
    double hi = 1;
    int nodes = 16;
};

/// A point of a parametrized family in SU(2) with its partials along the axes.
struct ChartSample {
    Mat value;
    std::vector<Mat> partials;
};

using ChartMap = std::function<ChartSample(std::span<const double>)>;

/// Sum over the tensor grid of w(g(u); dg/du_1, .., dg/du_k) times the weights.
Complex tensor_quadrature(const DifferentialForm& w, const ChartMap& chart, std::span<const QuadratureAxis> axes,
                          int workers = 1);

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureSettings {
    double tol = 1e-3;
    int workers = 1;
};

struct QuadratureResult {
    Complex value;
    /// |value - value at half the nodes per axis|
    double estimate = 0;
};

enum class ChartKind { Euler, Hopf };

struct ChartGrid {
    ChartKind kind = ChartKind::Euler;
    /// Euler (phi, theta, psi) or Hopf (xi1, eta, xi2) node counts.
    std::array<int, 3> nodes{48, 48, 48};
    /// Chart translated to g -> left g.
    Mat left = Mat::Identity(2, 2);

    ChartMap chart() const;
    std::vector<QuadratureAxis> axes() const;
    ChartGrid scaled(double factor) const;
};

/// Euler: g = e3(phi) e2(theta) e3(psi), e_k(a) = exp(a i sigma_k / 2), phi in [0, 2pi),
/// theta in [0, pi], psi in [0, 4pi). Hopf: g = [[a, -b*], [b, a*]] with
/// a = cos(eta) e^{i xi1}, b = sin(eta) e^{i xi2}, eta in [0, pi/2]. Axis order
/// (xi1, eta, xi2) gives the Hopf chart the orientation of the Euler one.
ChartSample euler_chart(double phi, double theta, double psi);
ChartSample hopf_chart(double xi1, double eta, double xi2);

/// Throws QuadratureError when the half-resolution value differs by more than 10 tol.
QuadratureResult integrate_top_form_su2(const DifferentialForm& w, const ChartGrid& grid,
                                        const QuadratureSettings& q = {});

/// F: I^a x S^1 -> SU(2), arguments (interval coordinates.., z), z in [0, 2pi).
struct Sheet {
    int interval_dims = 2;
    std::function<ChartSample(std::span<const double>)> eval;

    ChartSample operator()(std::span<const double> u) const { return eval(u); }
};

/// Pointwise product with the product rule.
Sheet operator*(const Sheet& a, const Sheet& b);

struct CylinderGrid {
    int interval_nodes = 32;
    int circle_nodes = 64;

    CylinderGrid scaled(double factor) const;
};

QuadratureResult integrate_form_over_cylinder(const Sheet& sheet, const DifferentialForm& w,
                                              const CylinderGrid& grid = {}, const QuadratureSettings& q = {});

/// F(s, t, z) = g0 prod_k exp(e_k(s, t, z) B_k) with
/// e_k = t A_k(z) + t (1 - t) ((1 - s) C_k(z) + s C'_k(z)).
/// Linear interpolation of exponents in s from sigma = F(0, ., .) to
/// sigma' = F(1, ., .); both paths run from g0 to g0 prod exp(A_k B_k).
struct ExponentialHomotopy {
    Mat base = Mat::Identity(2, 2);
    std::vector<Mat> generators;
    std::vector<TrigPolynomial> along;
    std::vector<TrigPolynomial> from;
    std::vector<TrigPolynomial> to;

    ChartSample at(double s, double t, double z) const;
    Sheet sheet() const;
    /// The path families sigma (end = 0) and sigma' (end = 1) as I x S^1 sheets.
    Sheet path(int end) const;

    static ExponentialHomotopy random(Rng& rng, int band, double scale = 0.5);
};

struct BumpProfile {
    TrigPolynomial h;
    /// a + b s + c t; distinct profiles keep the s and t partials independent.
    std::array<double, 3> affine{1, 0, 0};
};

/// prod_k exp(16 s(1-s) t(1-t) (a_k + b_k s + c_k t) h_k(z) B_k) over the su(2)
/// basis, identity on the boundary of I^2 x S^1; scaling the exponents to 0 is
/// a homotopy rel boundary.
Sheet bump_sheet(const std::vector<BumpProfile>& profiles);
Sheet random_bump_sheet(Rng& rng, double scale = 0.4);

/// -exp(i pi Q(r / R) x/r . sigma) on the ball of radius R about
/// x = (s - 1/2, t - 1/2, (z - pi) / 2pi), identity outside. Q(u) is the
/// normalized integral of (1 - u^2)^4, so W is C^4 across the sphere and
/// sweeps SU(2) once.
Sheet wrap_sheet(double radius = 0.45);

struct IntegralityResult {
    Complex difference;
    long integer = 0;
    double distance = 0;
};

/// int F^* nu - int F'^* nu with F' replaced by F' W when a wrap is given;
/// throws std::invalid_argument when the sheets miss the boundary conditions.
IntegralityResult homotopy_integrality_check(const Sheet& sigma, const Sheet& sigma2, const Sheet& f,
                                             const Sheet& f2, const std::optional<Sheet>& wrap,
                                             const CylinderGrid& grid = {}, const QuadratureSettings& q = {});

struct IntegralitySettings {
    ChartGrid su2;
    CylinderGrid cylinder;
    QuadratureSettings quad;
    double tol_integer = 1e-3;
    double tol_charts = 1e-4;
    double tol_homotopy = 1e-2;
    double tol_doubling = 1e-8;
};

/// |int C13| = 1, chart agreement, translation invariance, exact control,
/// bump and wrap homotopies, cylinder doubling.
std::vector<ResidualReport> integrality_check(const CheckSettings& s, const IntegralitySettings& q);

}  // namespace sdr
