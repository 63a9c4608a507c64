#pragma once

// Differential forms as evaluators on (point, tangents), with the combinators
// the cocycle identities need: pullback along maps with exact differentials,
// shuffle wedge, and an exterior derivative built from left-invariant
// extensions and one-dimensional central differences.
//
// Wedge and antisymmetrization follow the determinant convention: a wedge of
// k one-forms evaluates to the k x k determinant, no 1/k! factor.

#include "sdr/matgroups.hpp"

#include <functional>
#include <span>

namespace sdr {

using FormEvaluator = std::function<Complex(const GroupPoint&, std::span<const TangentVector>)>;

struct DifferentialForm {
    GroupSpec domain;
    int degree = 0;
    FormEvaluator eval;

    Complex operator()(const GroupPoint& p, std::span<const TangentVector> v) const;
    Complex operator()(const GroupPoint& p, std::initializer_list<TangentVector> v) const {
        return (*this)(p, std::span<const TangentVector>(v.begin(), v.size()));
    }
};

DifferentialForm zero_form(const GroupSpec& domain, int degree);
DifferentialForm function_form(const GroupSpec& domain, std::function<Complex(const GroupPoint&)> f);

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator-(const DifferentialForm& a);
DifferentialForm operator*(Complex s, const DifferentialForm& a);

struct DerivativeOptions {
    double fd_step = 1e-4;
    /// Combine steps h and h/2 as (4 D_{h/2} - D_h)/3.
    bool richardson = false;
};

/// Settings for differentiating a form that already came out of a difference
/// quotient: a larger extrapolated step keeps roundoff and truncation small.
inline constexpr DerivativeOptions kNestedDerivative{5e-4, true};

struct SmoothMap {
    GroupSpec source;
    GroupSpec target;
    std::function<GroupPoint(const GroupPoint&)> apply;
    std::function<TangentVector(const GroupPoint&, const TangentVector&)> push;
};

SmoothMap identity_map(const GroupSpec& spec);
/// outer after inner.
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);
/// Central-difference differential of f along t -> p exp(tA), A = p^{-1}v.
/// Ordinary factors only.
TangentVector numerical_push(const SmoothMap& f, const GroupPoint& p, const TangentVector& v, DerivativeOptions opts = {});

struct MatrixOneForm {
    GroupSpec domain;
    std::function<Mat(const GroupPoint&, const TangentVector&)> eval;
};

/// g^{-1} dg on the selected factor.
MatrixOneForm maurer_cartan(const GroupSpec& domain, std::size_t factor);
/// tr of a matrix-valued 1-form.
DifferentialForm trace_form(const MatrixOneForm& w);

/// (1/2 pi i)^2 (-1/6)
Complex chern_simons_normalization();

/// normalization * sum_{s in S3} sgn(s) tr(A_s1 A_s2 A_s3), A_i = g^{-1} X_i on one factor.
DifferentialForm trace_cubed_form(const GroupSpec& domain, std::size_t factor = 0,
                                  Complex normalization = chern_simons_normalization());

enum class ChernVariant { SU, U };

/// The degree-2 layer of the second Chern cocycle on G x G:
/// (1/2 pi i)^2 (1/2) tr(h2^{-1} h1^{-1} dh1 dh2), minus, for the U variant,
/// (1/2 pi i)^2 (1/2) tr(h1^{-1} dh1) tr(h2^{-1} dh2).
DifferentialForm chern_c22(ChernVariant variant, GroupKind kind = GroupKind::SU2);

DifferentialForm pullback(const SmoothMap& f, const DifferentialForm& w);

/// dw(X0..Xk) = sum_i (-1)^i X_i[w(..X^_i..)] + sum_{i<j} (-1)^{i+j} w([X_i,X_j], ..X^_i..X^_j..)
/// with every X_i extended left-invariantly.
DifferentialForm exterior_derivative(const DifferentialForm& w, DerivativeOptions opts = {});

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

/// Random smooth k-form on a product of ordinary factors, for property tests.
DifferentialForm random_form(const GroupSpec& domain, int degree, Rng& rng);

/// |w(.., aX + bY, ..) - a w(.., X, ..) - b w(.., Y, ..)| / (1 + |w(.., X, ..)| + |w(.., Y, ..)|),
/// X = v[slot], Y = extra.
double linearity_residual(const DifferentialForm& w, const GroupPoint& p, std::span<const TangentVector> v,
                          const TangentVector& extra, std::size_t slot, double a, double b);
/// |w(v) + w(v with slots i and j swapped)|
double alternation_residual(const DifferentialForm& w, const GroupPoint& p, std::span<const TangentVector> v,
                            std::size_t i, std::size_t j);

}  // namespace sdr
