#pragma once

// Products of the matrix groups SU(2), U(2), PU(2), U(1) and of their
// discretized loop groups. A point carries one FactorValue per factor; loop
// factors hold one matrix per grid sample together with the exact derivative
// along the loop parameter, so that loop-level maps and flows stay exact.

#include "sdr/lie.hpp"
#include "sdr/rng.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdr {

enum class GroupKind { SU2, U2, PU2, U1 };

std::string_view to_string(GroupKind kind);
int matrix_dim(GroupKind kind);
/// Dimension of the Lie algebra.
int algebra_dim(GroupKind kind);

struct FactorSpec {
    GroupKind kind = GroupKind::SU2;
    /// Loop samples; 1 for an ordinary group factor.
    int samples = 1;

    bool is_loop() const { return samples > 1; }
    friend bool operator==(const FactorSpec&, const FactorSpec&) = default;
};

inline FactorSpec loop_of(GroupKind kind, int samples) { return {kind, samples}; }

struct GroupSpec {
    std::vector<FactorSpec> factors;

    GroupSpec() = default;
    GroupSpec(std::initializer_list<FactorSpec> f) : factors(f) {}
    explicit GroupSpec(std::vector<FactorSpec> f) : factors(std::move(f)) {}
    GroupSpec(std::initializer_list<GroupKind> kinds);

    static GroupSpec power(FactorSpec factor, int count);

    std::size_t size() const { return factors.size(); }
    const FactorSpec& operator[](std::size_t i) const { return factors[i]; }
    bool has_loops() const;
    std::string describe() const;

    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

GroupSpec concat(const GroupSpec& a, const GroupSpec& b);

/// Samples of one factor. `rates` holds d/dt of `values` along the loop
/// parameter and is empty for ordinary factors.
struct FactorValue {
    std::vector<Mat> values;
    std::vector<Mat> rates;

    FactorValue() = default;
    explicit FactorValue(Mat m) : values{std::move(m)} {}
    FactorValue(std::vector<Mat> v, std::vector<Mat> r) : values(std::move(v)), rates(std::move(r)) {}

    bool has_rates() const { return !rates.empty(); }
    std::size_t samples() const { return values.size(); }
};

struct GroupPoint {
    GroupSpec spec;
    std::vector<FactorValue> factors;

    /// The matrix of an ordinary factor.
    const Mat& mat(std::size_t i) const { return factors[i].values.front(); }
    std::size_t size() const { return factors.size(); }
};

/// Ambient tangent vector X_i = g_i A_i per factor (and per loop sample).
/// The same layout is used for left-trivialized Lie algebra vectors A_i,
/// see `left_trivialize` and `translate`.
struct TangentVector {
    std::vector<FactorValue> factors;

    const Mat& mat(std::size_t i) const { return factors[i].values.front(); }
    std::size_t size() const { return factors.size(); }
};

using AlgebraVector = TangentVector;

GroupPoint make_point(const GroupSpec& spec, std::vector<Mat> mats);
TangentVector make_tangent(std::vector<Mat> mats);

GroupPoint identity_point(const GroupSpec& spec);
TangentVector zero_tangent(const GroupPoint& at);

/// Orthonormal-coefficient basis of the Lie algebra: i sigma_1..3, plus i I
/// for U(2); the 1x1 matrix (i) for U(1).
std::vector<Mat> algebra_basis(GroupKind kind);

// Membership ------------------------------------------------------------

double membership_residual(GroupKind kind, const Mat& g);
double membership_residual(const GroupPoint& p);
bool is_member(const GroupPoint& p, double tol = 1e-12);

/// Largest distance of g^{-1}X from the factor's Lie algebra.
double tangent_residual(const GroupPoint& at, const TangentVector& v);

// Sampling --------------------------------------------------------------

GroupPoint sample_point(const GroupSpec& spec, Rng& rng);
TangentVector sample_tangent(const GroupPoint& at, Rng& rng);
Mat sample_factor(GroupKind kind, Rng& rng);
Mat sample_algebra(GroupKind kind, Rng& rng);

// Arithmetic ------------------------------------------------------------

FactorValue multiply(const FactorValue& a, const FactorValue& b);
/// Differential of the product: X_a g_b + g_a X_b, samplewise with rates.
FactorValue multiply_tangent(const FactorValue& ga, const FactorValue& xa, const FactorValue& gb,
                             const FactorValue& xb);
FactorValue inverse(const FactorValue& a);

GroupPoint multiply(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& a);
bool projective_equal(const GroupPoint& a, const GroupPoint& b, double tol = 1e-10);
/// Central scalar u with a = b u, or NaN when b^{-1}a is not central.
Complex central_ratio(const Mat& a, const Mat& b, double tol = 1e-10);

// Tangent algebra ------------------------------------------------------

TangentVector operator+(const TangentVector& a, const TangentVector& b);
TangentVector operator-(const TangentVector& a, const TangentVector& b);
TangentVector operator*(double s, const TangentVector& a);

AlgebraVector left_trivialize(const GroupPoint& at, const TangentVector& v);
TangentVector translate(const GroupPoint& at, const AlgebraVector& a);
/// The point p exp(s A), factorwise and samplewise, with exact rates.
GroupPoint flow(const GroupPoint& p, const AlgebraVector& a, double s);
/// Bracket of left-invariant extensions: [pA, pB] := p[A, B].
TangentVector bracket(const GroupPoint& at, const TangentVector& x, const TangentVector& y);

double max_abs_difference(const GroupPoint& a, const GroupPoint& b);
double max_abs_difference(const TangentVector& a, const TangentVector& b);

// Circle actions -------------------------------------------------------

/// Conjugation of every 2x2 factor by an embedded circle element,
/// act(z, g) = E(z) g E(z)^{-1} with E(z) = diag(z^o, z^-o), o = orientation.
/// U(1) factors of the acted point are left alone.
class CircleAction {
public:
    static CircleAction adjoint(int orientation = 1) { return CircleAction(orientation); }
    static CircleAction trivial() { return CircleAction(0); }

    int orientation() const { return orientation_; }
    bool is_trivial() const { return orientation_ == 0; }

    Mat embed(Complex z) const;
    GroupPoint act(Complex z, const GroupPoint& g) const;
    /// Differential of (z, g) -> act(z, g) at (z, g) applied to (w, X), where
    /// w is the 1x1 ambient tangent at z.
    TangentVector push(Complex z, Complex w, const GroupPoint& g, const TangentVector& x) const;

private:
    explicit CircleAction(int orientation) : orientation_(orientation) {}
    int orientation_;
};

}  // namespace sdr
