#pragma once

// Discretized free loop groups. A loop is a closed-form generator
// g0 exp(f_1(t) B_1) ... exp(f_m(t) B_m) with trigonometric exponents; it is
// sampled on t_j = 2 pi j / N together with its exact t-derivative, so that
// the evaluation map and all face maps act samplewise with exact rates.

#include "sdr/nerve.hpp"
#include "sdr/signs.hpp"

namespace sdr {

struct TrigPolynomial {
    double constant = 0;
    /// cosines[k - 1], sines[k - 1] multiply cos(kt), sin(kt).
    std::vector<double> cosines;
    std::vector<double> sines;

    int band() const { return static_cast<int>(std::max(cosines.size(), sines.size())); }
    double value(double t) const;
    double derivative(double t) const;

    /// Gaussian coefficients with standard deviation scale / (1 + k).
    static TrigPolynomial random(Rng& rng, int band, double scale);
};

struct LoopPath {
    GroupKind kind = GroupKind::SU2;
    Mat base = Mat::Identity(2, 2);
    std::vector<Mat> generators;
    std::vector<TrigPolynomial> exponents;

    Mat value(double t) const;
    Mat derivative(double t) const;
    /// Values and rates on t_j = shift + 2 pi j / n.
    FactorValue sample(int n, double shift = 0) const;

    static LoopPath constant(GroupKind kind, Mat g0);
    /// Haar base point and one exponent per algebra basis element.
    static LoopPath random(GroupKind kind, Rng& rng, int band, double scale = 0.6);
    /// g0 exp(f(t) B) with a single Gaussian generator: gamma^{-1} gamma' = f' B is
    /// a trigonometric polynomial, so left-trivialized integrands stay band-limited.
    static LoopPath one_parameter(GroupKind kind, Rng& rng, int band, double scale = 0.6);
};

/// u(t) = gamma(t) A(t) with A(t) = sum_k c_k(t) B_k.
struct LoopTangent {
    GroupKind kind = GroupKind::SU2;
    std::vector<Mat> basis;
    std::vector<TrigPolynomial> coefficients;

    Mat algebra(double t) const;
    Mat algebra_rate(double t) const;
    /// Samples along an already sampled loop on the same grid.
    FactorValue sample(const FactorValue& gamma, double shift = 0) const;

    static LoopTangent random(GroupKind kind, Rng& rng, int band, double scale = 1.0);
};

/// Lifts every factor of a product of ordinary groups to its loop group.
GroupSpec loop_spec(const GroupSpec& spec, int samples);

/// Fiber integration of ev^* w over the circle: at (gamma; u_1..u_{k-1})
/// sum_j (2 pi / N) w(gamma(t_j); gamma'(t_j), u_1(t_j), ..).
DifferentialForm transgress(const DifferentialForm& w, int samples);

/// Random trigonometric loops and loop tangents for loop factors, Haar points
/// and Gaussian tangents for ordinary ones.
ProbeSampler loop_sampler(int band);

/// Face maps of the discretized NLG(p) x| NS^1(q), conjugation acting samplewise.
SmoothMap semidirect_loop_faces(int samples, int p, int q, FaceDirection dir, int i);

struct LoopCheckSettings {
    int samples = 64;
    int band = 4;
    double tol_loop_fd = 1e-5;
};

/// (i) d T13 = 0, (ii) d'T13 + s dT22 = 0 with a dropped-layer control,
/// (iii) d'T22 = 0, plus the fiber-integration sign and face naturality.
std::vector<ResidualReport> loop_nerve_cocycle_check(const CheckSettings& s, const LoopCheckSettings& loop);

/// Transgressed values under N -> 2N and under rotation of the loop parameter,
/// on band-limited one-parameter loops of band 8 and on generic loops of the
/// configured band.
std::vector<ResidualReport> transgression_quadrature_check(const CheckSettings& s, const LoopCheckSettings& loop);

}  // namespace sdr
